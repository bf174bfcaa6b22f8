"""
Gate-level intermediate representation for dynamic circuits.

A mid-circuit measurement (MCM) is any Measure that is not the last operation on its
qubit; a Reset that directly follows it on the same qubit is scheduled together with it.
Repeat-until-success (RUS) blocks are delimited by labelled barriers and described by
``RusBlock`` entries on the circuit.
"""
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.config import NOISE_CHANNELS
from src.exceptions import CircuitError

RUS_BEGIN = 'rus_begin:'
RUS_END = 'rus_end:'


class Op(str, Enum):
    H = 'h'
    X = 'x'
    Y = 'y'
    Z = 'z'
    SX = 'sx'
    RX = 'rx'
    RY = 'ry'
    RZ = 'rz'
    CX = 'cx'
    SWAP = 'swap'
    MEASURE = 'measure'
    RESET = 'reset'
    BARRIER = 'barrier'
    DELAY = 'delay'


SINGLE_QUBIT_GATES = frozenset({Op.H, Op.X, Op.Y, Op.Z, Op.SX, Op.RX, Op.RY, Op.RZ})
PARAMETRIC_GATES = frozenset({Op.RX, Op.RY, Op.RZ})
TWO_QUBIT_GATES = frozenset({Op.CX, Op.SWAP})
ONE_QUBIT_KINDS = SINGLE_QUBIT_GATES | {Op.MEASURE, Op.RESET, Op.DELAY}


@dataclass(frozen=True)
class Instruction:
    kind: Op
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()
    clbit: Optional[int] = None
    condition: Optional[Tuple[int, int]] = None
    label: Optional[str] = None
    duration: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', Op(self.kind))
        object.__setattr__(self, 'qubits', tuple(int(q) for q in self.qubits))
        object.__setattr__(self, 'params', tuple(float(p) for p in self.params))
        if self.condition is not None:
            object.__setattr__(self, 'condition', (int(self.condition[0]), int(self.condition[1])))
        self._validate()

    def _validate(self):
        kind, qubits = self.kind, self.qubits
        if any(q < 0 for q in qubits):
            raise CircuitError(f"{kind.value}: negative qubit index in {qubits}")
        if kind in ONE_QUBIT_KINDS and len(qubits) != 1:
            raise CircuitError(f"{kind.value} acts on exactly one qubit, got {len(qubits)}")
        if kind in TWO_QUBIT_GATES and len(qubits) != 2:
            raise CircuitError(f"{kind.value} acts on exactly two qubits, got {len(qubits)}")
        if kind == Op.BARRIER and len(qubits) < 1:
            raise CircuitError("barrier must span at least one qubit")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{kind.value}: repeated qubit in {qubits}")
        if kind in PARAMETRIC_GATES:
            if len(self.params) != 1:
                raise CircuitError(f"{kind.value} takes exactly one angle")
        elif self.params:
            raise CircuitError(f"{kind.value} takes no parameters")
        if kind == Op.MEASURE:
            if self.clbit is None or self.clbit < 0:
                raise CircuitError("measure must target exactly one classical bit")
        elif self.clbit is not None:
            raise CircuitError(f"{kind.value} cannot write a classical bit")
        if kind == Op.DELAY:
            if self.duration is None or self.duration < 0:
                raise CircuitError("delay duration must be >= 0")
        elif self.duration is not None:
            raise CircuitError(f"{kind.value} has no duration field")
        if self.condition is not None:
            bit, value = self.condition
            if kind in (Op.BARRIER, Op.DELAY):
                raise CircuitError(f"{kind.value} cannot be conditioned")
            if bit < 0 or value not in (0, 1):
                raise CircuitError(f"invalid condition {self.condition}")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_GATES

    @property
    def is_single_qubit_gate(self) -> bool:
        return self.kind in SINGLE_QUBIT_GATES

    @property
    def is_directive(self) -> bool:
        """Barriers and delays occupy no gate slot."""
        return self.kind in (Op.BARRIER, Op.DELAY)

    def remap(self, mapping: Dict[int, int]) -> 'Instruction':
        return replace(self, qubits=tuple(mapping[q] for q in self.qubits))


@dataclass(frozen=True)
class RusBlock:
    """Repeat the block's instructions until ``flag_clbit`` reads ``success_value``."""
    name: str
    flag_clbit: int
    success_value: int = 0
    max_repeats: int = NOISE_CHANNELS['max_rus_repeats']

    @property
    def begin_label(self) -> str:
        return f"{RUS_BEGIN}{self.name}"

    @property
    def end_label(self) -> str:
        return f"{RUS_END}{self.name}"


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    num_clbits: int
    instructions: Tuple[Instruction, ...] = ()
    rus_blocks: Tuple[RusBlock, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'instructions', tuple(self.instructions))
        object.__setattr__(self, 'rus_blocks', tuple(self.rus_blocks))
        self._validate()

    def _validate(self):
        if self.num_qubits < 0 or self.num_clbits < 0:
            raise CircuitError("register sizes must be non-negative")
        written = set()
        for index, ins in enumerate(self.instructions):
            for q in ins.qubits:
                if q >= self.num_qubits:
                    raise CircuitError(f"instruction {index}: qubit {q} >= {self.num_qubits}")
            if ins.clbit is not None and ins.clbit >= self.num_clbits:
                raise CircuitError(f"instruction {index}: clbit {ins.clbit} >= {self.num_clbits}")
            if ins.condition is not None:
                bit = ins.condition[0]
                if bit >= self.num_clbits:
                    raise CircuitError(f"instruction {index}: condition bit {bit} >= {self.num_clbits}")
                if bit not in written:
                    raise CircuitError(f"instruction {index}: condition bit {bit} is read before any measure writes it")
            if ins.kind == Op.MEASURE:
                written.add(ins.clbit)
        labels = [ins.label for ins in self.instructions if ins.kind == Op.BARRIER]
        for block in self.rus_blocks:
            if block.flag_clbit >= self.num_clbits:
                raise CircuitError(f"RUS block {block.name}: flag bit out of range")
            if labels.count(block.begin_label) != 1 or labels.count(block.end_label) != 1:
                raise CircuitError(f"RUS block {block.name} needs exactly one begin and one end marker")
            if labels.index(block.begin_label) > labels.index(block.end_label):
                raise CircuitError(f"RUS block {block.name} ends before it begins")

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    def __getitem__(self, index: int) -> Instruction:
        return self.instructions[index]

    @property
    def is_rus(self) -> bool:
        return bool(self.rus_blocks)

    def used_qubits(self) -> List[int]:
        """Qubits touched by at least one instruction, ascending."""
        return sorted({q for ins in self.instructions for q in ins.qubits})

    def with_instructions(self, instructions: Iterable[Instruction], num_qubits: Optional[int] = None) -> 'Circuit':
        return Circuit(
            num_qubits=self.num_qubits if num_qubits is None else num_qubits,
            num_clbits=self.num_clbits,
            instructions=tuple(instructions),
            rus_blocks=self.rus_blocks,
        )

    def remap_qubits(self, mapping: Dict[int, int], num_qubits: int) -> 'Circuit':
        return self.with_instructions((ins.remap(mapping) for ins in self.instructions), num_qubits)

    def rus_block(self, name: str) -> RusBlock:
        for block in self.rus_blocks:
            if block.name == name:
                return block
        raise KeyError(name)


def rus_marker(ins: Instruction) -> Optional[Tuple[str, str]]:
    """Return ('begin'|'end', block name) when the instruction is an RUS marker."""
    if ins.kind != Op.BARRIER or not ins.label:
        return None
    if ins.label.startswith(RUS_BEGIN):
        return 'begin', ins.label[len(RUS_BEGIN):]
    if ins.label.startswith(RUS_END):
        return 'end', ins.label[len(RUS_END):]
    return None


class CircuitBuilder:
    """Fluent construction of a Circuit."""

    def __init__(self, num_qubits: int, num_clbits: int = 0):
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.instructions: List[Instruction] = []
        self.rus_blocks: List[RusBlock] = []

    def append(self, kind: Op, qubits: Sequence[int], **kwargs) -> 'CircuitBuilder':
        self.instructions.append(Instruction(kind, tuple(qubits), **kwargs))
        return self

    def _gate(self, kind: Op, q: int, condition=None, label=None) -> 'CircuitBuilder':
        return self.append(kind, (q,), condition=condition, label=label)

    def h(self, q, condition=None, label=None):
        return self._gate(Op.H, q, condition, label)

    def x(self, q, condition=None, label=None):
        return self._gate(Op.X, q, condition, label)

    def y(self, q, condition=None, label=None):
        return self._gate(Op.Y, q, condition, label)

    def z(self, q, condition=None, label=None):
        return self._gate(Op.Z, q, condition, label)

    def sx(self, q, condition=None, label=None):
        return self._gate(Op.SX, q, condition, label)

    def rx(self, theta, q, condition=None):
        return self.append(Op.RX, (q,), params=(theta,), condition=condition)

    def ry(self, theta, q, condition=None):
        return self.append(Op.RY, (q,), params=(theta,), condition=condition)

    def rz(self, theta, q, condition=None):
        return self.append(Op.RZ, (q,), params=(theta,), condition=condition)

    def cx(self, control, target, condition=None):
        return self.append(Op.CX, (control, target), condition=condition)

    def swap(self, a, b):
        return self.append(Op.SWAP, (a, b))

    def measure(self, q, c):
        return self.append(Op.MEASURE, (q,), clbit=c)

    def reset(self, q, condition=None):
        return self.append(Op.RESET, (q,), condition=condition)

    def barrier(self, *qubits, label=None):
        qubits = qubits or tuple(range(self.num_qubits))
        return self.append(Op.BARRIER, qubits, label=label)

    def delay(self, duration, q):
        return self.append(Op.DELAY, (q,), duration=int(duration))

    @contextmanager
    def rus(self, name: str, qubits: Sequence[int], flag_clbit: int, success_value: int = 0,
            max_repeats: int = NOISE_CHANNELS['max_rus_repeats']):
        """Delimit a repeat-until-success block over ``qubits``."""
        block = RusBlock(name, flag_clbit, success_value, max_repeats)
        self.barrier(*qubits, label=block.begin_label)
        yield self
        self.barrier(*qubits, label=block.end_label)
        self.rus_blocks.append(block)

    def build(self) -> Circuit:
        return Circuit(self.num_qubits, self.num_clbits, tuple(self.instructions), tuple(self.rus_blocks))

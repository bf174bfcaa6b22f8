"""
Benchmark circuit generators.

Every generator is deterministic and lays out its 2Q gates so that a good layout needs no
SWAPs. Families:

- rus(k): k/2 independent (data, ancilla) pairs, each running RUS_STAGES repeat-until-success
  blocks (measure the ancilla, repeat while the flag reads 1).
- bv_reuse(m,n): Bernstein-Vazirani with an all-ones secret over m logical qubits on n
  physical ones, reusing the working qubits through MCM and reset.
- h_ladder(m,n): a chain of m logical qubits coupled by CX/H rungs, packed onto n slots.
- ghz(n): GHZ state preparation and measurement.
- <file>.qasm: any circuit in the supported QASM subset.
"""
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.ir import Circuit, CircuitBuilder
from src.config import BENCHMARKS_FOLDER, H_LADDER_RUNGS, RUS_STAGES
from src.exceptions import InvalidSpec
from src.logging.logger import setup_logger
from src.qasm.parser import parse_file

# Setup logger
logger = setup_logger('benchmarks_logger', 'logs', 'benchmarks.log')

FAMILIES = ('rus', 'bv_reuse', 'h_ladder', 'ghz', 'qasm')
SPEC_RE = re.compile(r'^\s*(?P<family>[a-z_]+)\s*\(\s*(?P<args>\d+(?:\s*,\s*\d+)*)\s*\)\s*$')


@dataclass(frozen=True)
class BenchmarkSpec:
    family: str
    params: Tuple[int, ...] = ()
    path: Optional[Path] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown benchmark family '{self.family}'")
        expected = {'rus': 1, 'ghz': 1, 'bv_reuse': 2, 'h_ladder': 2, 'qasm': 0}[self.family]
        if len(self.params) != expected:
            raise InvalidSpec(f"{self.family} takes {expected} parameters, got {len(self.params)}")
        if self.family == 'qasm' and self.path is None:
            raise InvalidSpec("qasm benchmarks need a file path")

    @property
    def name(self) -> str:
        if self.family == 'qasm':
            return self.path.stem
        return f"{self.family}({','.join(str(p) for p in self.params)})"

    @property
    def logical_qubits(self) -> Optional[int]:
        return None if self.family == 'qasm' else self.params[0]

    @property
    def physical_qubits(self) -> Optional[int]:
        if self.family in ('bv_reuse', 'h_ladder'):
            return self.params[1]
        return self.logical_qubits


def parse_benchmark(text: str) -> BenchmarkSpec:
    """Parse ``rus(4)``, ``bv_reuse(4,2)``, ``h_ladder(3,2)``, ``ghz(5)`` or a ``.qasm`` path."""
    text = text.strip()
    if text.endswith('.qasm'):
        path = Path(text)
        if not path.is_absolute() and not path.exists() and (project_dir / path).exists():
            path = project_dir / path
        return BenchmarkSpec('qasm', (), path)
    match = SPEC_RE.match(text)
    if not match:
        raise InvalidSpec(f"cannot parse benchmark '{text}'")
    params = tuple(int(a) for a in match.group('args').split(','))
    return BenchmarkSpec(match.group('family'), params)


# Generators
# ----------
def rus(k: int, stages: int = RUS_STAGES) -> Circuit:
    """Pairs (d, a) on qubits (2j, 2j+1); clbits 3j, 3j+1, 3j+2 hold flag, data and ancilla results."""
    if k < 2 or k % 2:
        raise InvalidSpec(f"rus needs an even qubit count >= 2, got {k}")
    if stages < 1:
        raise InvalidSpec("rus needs at least one stage")
    pairs = k // 2
    builder = CircuitBuilder(k, 3 * pairs)
    for j in range(pairs):
        builder.h(2 * j)
    for s in range(stages):
        for j in range(pairs):
            d, a, flag = 2 * j, 2 * j + 1, 3 * j
            with builder.rus(f"p{j}s{s}", (d, a), flag_clbit=flag, success_value=0):
                builder.h(a).cx(a, d).h(a)
                builder.measure(a, flag)
                builder.reset(a)
                builder.z(d, condition=(flag, 1))
    for j in range(pairs):
        d, a = 2 * j, 2 * j + 1
        # Parity check of the ancilla against the data qubit
        builder.cx(a, d).h(d)
        builder.measure(d, 3 * j + 1)
        builder.measure(a, 3 * j + 2)
    return builder.build()


def bv_reuse(m: int, n: int) -> Circuit:
    """All-ones secret over m - 1 data bits; the n - 1 working qubits take data bits round-robin."""
    if n < 2 or m < n:
        raise InvalidSpec(f"bv_reuse needs 2 <= n <= m, got m={m}, n={n}")
    target = n - 1
    data_bits = m - 1
    workers = list(range(n - 1))
    builder = CircuitBuilder(n, data_bits)
    builder.x(target).h(target)
    for bit in range(data_bits):
        w = workers[bit % len(workers)]
        builder.h(w).cx(w, target).h(w)
        builder.measure(w, bit)
        if bit + len(workers) < data_bits:
            builder.reset(w)
    return builder.build()


def _bounce(count: int, slots: int) -> List[int]:
    if slots == 1:
        return [0] * count
    period = 2 * (slots - 1)
    return [i % period if i % period < slots else period - i % period for i in range(count)]


def h_ladder(m: int, n: int, rungs: int = H_LADDER_RUNGS) -> Circuit:
    """Logical qubit l sits on slot bounce(l); consecutive qubits share ``rungs`` CX/H rungs."""
    if n < 2 or m < n:
        raise InvalidSpec(f"h_ladder needs 2 <= n <= m, got m={m}, n={n}")
    slot = _bounce(m, n)
    reused = {l for l in range(m) if slot[l] in slot[l + 1:]}
    builder = CircuitBuilder(n, m)
    for l in range(min(2, m)):
        builder.h(slot[l])
    for l in range(m - 1):
        for _ in range(rungs):
            builder.cx(slot[l], slot[l + 1]).h(slot[l + 1])
        builder.measure(slot[l], l)
        if l in reused:
            builder.reset(slot[l])
        if l + 2 < m:
            builder.h(slot[l + 2])
    builder.measure(slot[m - 1], m - 1)
    return builder.build()


def ghz(n: int) -> Circuit:
    if n < 1:
        raise InvalidSpec(f"ghz needs at least one qubit, got {n}")
    builder = CircuitBuilder(n, n)
    builder.h(0)
    for q in range(n - 1):
        builder.cx(q, q + 1)
    for q in range(n):
        builder.measure(q, q)
    return builder.build()


def gen_benchmark(spec: BenchmarkSpec) -> Circuit:
    try:
        if spec.family == 'rus':
            circuit = rus(*spec.params)
        elif spec.family == 'bv_reuse':
            circuit = bv_reuse(*spec.params)
        elif spec.family == 'h_ladder':
            circuit = h_ladder(*spec.params)
        elif spec.family == 'ghz':
            circuit = ghz(*spec.params)
        else:
            circuit = parse_file(spec.path)
    except InvalidSpec:
        raise
    except FileNotFoundError as e:
        raise InvalidSpec(f"benchmark file not found: {e}") from e
    logger.info(f"Generated {spec.name}: {circuit.num_qubits} qubits, {len(circuit)} instructions")
    return circuit


def bundled_qasm() -> List[Path]:
    return sorted((project_dir / BENCHMARKS_FOLDER).glob('*.qasm'))

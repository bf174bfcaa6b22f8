"""
Trajectory simulator for dynamic circuits, plus an exact noiseless reference.

Only qubits touched by the circuit are simulated. Each shot draws from its own
``default_rng([seed, shot])`` stream, so counts do not depend on how shots are split
across workers. RUS blocks become loops that rerun their body until the flag bit reads
the success value or the repeat cap is hit.
"""
import sys
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.analysis import mcm_indices
from src.circuit.ir import Circuit, Op, RusBlock, rus_marker
from src.config import EXACT_PRUNE_THRESHOLD, MAX_SIM_QUBITS, NOISE_CHANNELS
from src.device.model import DeviceModel
from src.exceptions import CircuitError, InvariantViolation, TooManyQubits, ZeroShots
from src.logging.logger import setup_logger
from src.scheduling.alap import Schedule, alap_schedule
from src.simulation import statevector as sv
from src.simulation.noise import NoiseChannelSet

# Setup logger
logger = setup_logger('simulator_logger', 'logs', 'simulator.log')

ONE_QUBIT_PAULIS = ('x', 'y', 'z')


@dataclass(frozen=True)
class ShotCounts:
    counts: Dict[str, int]
    shots: int
    seed: Optional[int] = None
    mcm_executions: Tuple[int, ...] = ()

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise InvariantViolation(f"counts sum to {sum(self.counts.values())}, expected {self.shots}")

    def probabilities(self) -> Dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()} if self.shots else {}

    def to_dict(self) -> Dict:
        return {
            'shots': self.shots,
            'seed': self.seed,
            'counts': dict(sorted(self.counts.items())),
            'mcm_executions': int(sum(self.mcm_executions)),
        }


# Execution plan
# --------------
@dataclass(frozen=True)
class Loop:
    block: RusBlock
    body: Tuple[Union[int, 'Loop'], ...]


PlanItem = Union[int, Loop]


def build_plan(circuit: Circuit) -> List[PlanItem]:
    """Nest RUS block members into loops.

    Membership follows the qubits: the begin marker tags its physical qubits with the
    block, SWAPs carry tags with the state they move, and every instruction touching a
    tagged qubit joins the most recently opened block among its tags.
    """
    blocks = {b.name: b for b in circuit.rus_blocks}
    tags: Dict[int, List[str]] = defaultdict(list)
    bodies: Dict[str, List[PlanItem]] = {}
    opened: List[str] = []
    top: List[PlanItem] = []

    def owner(qubits: Sequence[int]) -> Optional[str]:
        names = {name for q in qubits for name in tags[q]}
        for name in reversed(opened):
            if name in names:
                return name
        return None

    for index, ins in enumerate(circuit.instructions):
        marker = rus_marker(ins)
        if marker is not None and marker[1] in blocks:
            kind, name = marker
            if kind == 'begin':
                opened.append(name)
                bodies[name] = [index]
                for q in ins.qubits:
                    tags[q].append(name)
            else:
                if name not in bodies:
                    raise CircuitError(f"RUS block {name} ends before it begins")
                body = bodies.pop(name)
                body.append(index)
                opened.remove(name)
                for q in tags:
                    tags[q] = [t for t in tags[q] if t != name]
                parent = owner(ins.qubits)
                (bodies[parent] if parent else top).append(Loop(blocks[name], tuple(body)))
            continue
        target = owner(ins.qubits)
        (bodies[target] if target else top).append(index)
        if ins.kind == Op.SWAP:
            a, b = ins.qubits
            tags[a], tags[b] = tags[b], tags[a]
    if bodies:
        raise CircuitError(f"unterminated RUS blocks: {sorted(bodies)}")
    return top


def _bitstring(clbits: Sequence[int]) -> str:
    return ''.join(str(b) for b in reversed(clbits))


# Trajectory engine
# -----------------
@dataclass(frozen=True, eq=False)
class _ShotContext:
    circuit: Circuit
    plan: Tuple[PlanItem, ...]
    axis: Dict[int, int]
    gate_error: Dict[int, float]
    readout: Dict[int, float]
    reset_flip: Dict[int, float]
    idle: Dict[int, Tuple[Tuple[int, float, float, float], ...]]
    crosstalk: Dict[int, Tuple[Tuple[int, float], ...]]
    mcms: frozenset
    max_repeats: int
    matrices: Dict[int, np.ndarray] = field(default_factory=dict)


class _Trajectory:
    def __init__(self, ctx: _ShotContext, rng: np.random.Generator):
        self.ctx = ctx
        self.rng = rng
        self.state = sv.zero_state(len(ctx.axis))
        self.clbits = [0] * ctx.circuit.num_clbits
        self.mcm_count = 0

    def run(self) -> Tuple[str, int]:
        self._execute(self.ctx.plan)
        return _bitstring(self.clbits), self.mcm_count

    def _execute(self, items: Sequence[PlanItem]):
        for item in items:
            if isinstance(item, Loop):
                for _ in range(min(item.block.max_repeats, self.ctx.max_repeats)):
                    self._execute(item.body)
                    if self.clbits[item.block.flag_clbit] == item.block.success_value:
                        break
            else:
                self._step(item)

    def _pauli(self, pauli: str, axis: int):
        self.state = sv.apply_pauli(self.state, pauli, axis)

    def _depolarize(self, axes: Sequence[int], p: float):
        if p <= 0 or self.rng.random() >= p:
            return
        if len(axes) == 1:
            self._pauli(ONE_QUBIT_PAULIS[self.rng.integers(3)], axes[0])
        else:
            for pauli, axis in zip(sv.TWO_QUBIT_PAULIS[self.rng.integers(15)], axes):
                self._pauli(pauli, axis)

    def _step(self, index: int):
        ctx = self.ctx
        ins = ctx.circuit.instructions[index]
        for axis, p_x, p_y, p_z in ctx.idle.get(index, ()):
            r = self.rng.random()
            if r < p_x:
                self._pauli('x', axis)
            elif r < p_x + p_y:
                self._pauli('y', axis)
            elif r < p_x + p_y + p_z:
                self._pauli('z', axis)
        if ins.condition is not None and self.clbits[ins.condition[0]] != ins.condition[1]:
            return
        if ins.is_directive:
            return
        axes = [ctx.axis[q] for q in ins.qubits]
        kind = ins.kind
        if kind == Op.MEASURE:
            for axis, p in ctx.crosstalk.get(index, ()):
                if self.rng.random() < p:
                    self._pauli('z', axis)
            outcome, self.state = sv.measure(self.state, axes[0], self.rng)
            if self.rng.random() < ctx.readout.get(index, 0.0):
                outcome ^= 1
            self.clbits[ins.clbit] = outcome
            if index in ctx.mcms:
                self.mcm_count += 1
        elif kind == Op.RESET:
            self.state = sv.reset(self.state, axes[0], self.rng)
            if self.rng.random() < ctx.reset_flip.get(index, 0.0):
                self._pauli('x', axes[0])
        elif kind == Op.CX:
            self.state = sv.apply_cx(self.state, axes[0], axes[1])
            self._depolarize(axes, ctx.gate_error.get(index, 0.0))
        elif kind == Op.SWAP:
            self.state = sv.apply_swap(self.state, axes[0], axes[1])
            self._depolarize(axes, ctx.gate_error.get(index, 0.0))
        else:
            self.state = sv.apply_1q(self.state, ctx.matrices[index], axes[0])
            self._depolarize(axes, ctx.gate_error.get(index, 0.0))


def _active_axes(circuit: Circuit) -> Dict[int, int]:
    used = circuit.used_qubits()
    if len(used) > MAX_SIM_QUBITS:
        raise TooManyQubits(f"circuit touches {len(used)} qubits; the engine cap is {MAX_SIM_QUBITS}")
    return {q: a for a, q in enumerate(used)}


def _build_context(circuit: Circuit, channels: NoiseChannelSet, schedule: Optional[Schedule]) -> _ShotContext:
    axis = _active_axes(circuit)
    gate_error, readout, reset_flip, matrices = {}, {}, {}, {}
    for i, ins in enumerate(circuit.instructions):
        if ins.is_single_qubit_gate:
            matrices[i] = sv.gate_matrix(ins.kind.value, ins.params)
            if channels.gate:
                gate_error[i] = float(channels.e1q[ins.qubits[0]])
        elif ins.is_two_qubit and channels.gate:
            gate_error[i] = channels.two_qubit_error(*ins.qubits, swap=ins.kind == Op.SWAP)
        elif ins.kind == Op.MEASURE and channels.readout_enabled:
            readout[i] = float(channels.readout[ins.qubits[0]])
        elif ins.kind == Op.RESET and channels.mcm_enabled:
            reset_flip[i] = float(channels.mcm[ins.qubits[0]])

    idle: Dict[int, Tuple] = {}
    crosstalk: Dict[int, Tuple] = {}
    if schedule is not None and channels.idle:
        for index, windows in schedule.windows_ending_at().items():
            entries = []
            for w in windows:
                p_x, p_y, p_z = channels.idle_paulis(w.qubit, w.length, w.dd)
                if p_x + p_y + p_z > 0:
                    entries.append((axis[w.qubit], p_x, p_y, p_z))
            if entries:
                idle[index] = tuple(entries)
    if channels.crosstalk:
        for i, ins in enumerate(circuit.instructions):
            if ins.kind != Op.MEASURE:
                continue
            measured = ins.qubits[0]
            entries = []
            for n in channels.neighbors.get(measured, ()):
                if n not in axis:
                    continue
                protected = False
                if schedule is not None:
                    window = schedule.window_at(n, schedule.starts[i])
                    protected = window is not None and window.dd
                p = channels.crosstalk_probability(measured, protected)
                if p > 0:
                    entries.append((axis[n], p))
            if entries:
                crosstalk[i] = tuple(entries)

    return _ShotContext(
        circuit=circuit,
        plan=tuple(build_plan(circuit)),
        axis=axis,
        gate_error=gate_error,
        readout=readout,
        reset_flip=reset_flip,
        idle=idle,
        crosstalk=crosstalk,
        mcms=frozenset(mcm_indices(circuit)),
        max_repeats=channels.max_rus_repeats,
        matrices=matrices,
    )


def _run_chunk(ctx: _ShotContext, seed: int, shots: Sequence[int]) -> List[Tuple[str, int]]:
    return [_Trajectory(ctx, np.random.default_rng([seed, shot])).run() for shot in shots]


def run(circuit: Circuit, device: Optional[DeviceModel] = None, channels: Optional[NoiseChannelSet] = None,
        shots: int = 1024, seed: int = 0, schedule: Optional[Schedule] = None, n_jobs: int = 1) -> ShotCounts:
    """Sample ``shots`` trajectories.

    When ``schedule`` is given it must describe ``circuit``; without one, idle noise uses
    an ALAP schedule of the circuit on ``device``.
    """
    if shots <= 0:
        raise ZeroShots("shots must be positive")
    if channels is None:
        channels = NoiseChannelSet.from_device(device) if device is not None else \
            NoiseChannelSet.noiseless(circuit.num_qubits)
    if schedule is not None and len(schedule.circuit) != len(circuit):
        raise InvariantViolation("schedule does not describe the simulated circuit")
    if schedule is None and channels.idle and device is not None:
        schedule = alap_schedule(circuit, device)

    try:
        ctx = _build_context(circuit, channels, schedule)
        chunks = [[int(s) for s in c] for c in np.array_split(np.arange(shots), max(1, n_jobs)) if len(c)]
        results = Parallel(n_jobs=n_jobs)(delayed(_run_chunk)(ctx, seed, chunk) for chunk in chunks)
    except TooManyQubits as e:
        logger.warning(f"Simulation skipped: {e}")
        raise
    except Exception as e:
        logger.error(f"Simulation failed: {e}", exc_info=True)
        raise

    flat = [r for chunk in results for r in chunk]
    counts = Counter(bits for bits, _ in flat)
    logger.info(f"Simulated {shots} shots (seed {seed}) over {len(ctx.axis)} qubits")
    return ShotCounts(dict(counts), shots, seed, tuple(m for _, m in flat))


# Exact reference
# ---------------
@dataclass
class _Branch:
    probability: float
    state: np.ndarray
    clbits: Tuple[int, ...]


def exact_distribution(circuit: Circuit, max_repeats: int = NOISE_CHANNELS['max_rus_repeats'],
                       prune: float = EXACT_PRUNE_THRESHOLD) -> Dict[str, float]:
    """Noiseless outcome distribution by enumerating every measurement branch."""
    axis = _active_axes(circuit)
    plan = build_plan(circuit)
    matrices = {i: sv.gate_matrix(ins.kind.value, ins.params)
                for i, ins in enumerate(circuit.instructions) if ins.is_single_qubit_gate}

    def step(index: int, branches: List[_Branch]) -> List[_Branch]:
        ins = circuit.instructions[index]
        if ins.is_directive:
            return branches
        out = []
        for branch in branches:
            if ins.condition is not None and branch.clbits[ins.condition[0]] != ins.condition[1]:
                out.append(branch)
                continue
            axes = [axis[q] for q in ins.qubits]
            if ins.kind in (Op.MEASURE, Op.RESET):
                for outcome, p, state in sv.branches(branch.state, axes[0]):
                    probability = branch.probability * p
                    if probability < prune:
                        continue
                    clbits = branch.clbits
                    if ins.kind == Op.MEASURE:
                        clbits = clbits[:ins.clbit] + (outcome,) + clbits[ins.clbit + 1:]
                    elif outcome:
                        state = sv.apply_1q(state, sv.GATE_MATRICES['x'], axes[0])
                    out.append(_Branch(probability, state, clbits))
            elif ins.kind == Op.CX:
                out.append(_Branch(branch.probability, sv.apply_cx(branch.state, *axes), branch.clbits))
            elif ins.kind == Op.SWAP:
                out.append(_Branch(branch.probability, sv.apply_swap(branch.state, *axes), branch.clbits))
            else:
                out.append(_Branch(branch.probability, sv.apply_1q(branch.state, matrices[index], axes[0]),
                                   branch.clbits))
        return out

    def execute(items: Sequence[PlanItem], branches: List[_Branch]) -> List[_Branch]:
        for item in items:
            if isinstance(item, Loop):
                done: List[_Branch] = []
                active = branches
                for _ in range(min(item.block.max_repeats, max_repeats)):
                    active = execute(item.body, active)
                    flag, value = item.block.flag_clbit, item.block.success_value
                    done.extend(b for b in active if b.clbits[flag] == value)
                    active = [b for b in active if b.clbits[flag] != value]
                    if not active:
                        break
                branches = done + active
            else:
                branches = step(item, branches)
        return branches

    start = _Branch(1.0, sv.zero_state(len(axis)), (0,) * circuit.num_clbits)
    final = execute(plan, [start])
    distribution: Dict[str, float] = defaultdict(float)
    for branch in final:
        distribution[_bitstring(branch.clbits)] += branch.probability
    total = sum(distribution.values())
    return {k: v / total for k, v in sorted(distribution.items())}

"""
As-late-as-possible timing over device durations.

A mid-circuit Measure and the unconditional Reset that follows it are scheduled as one
contiguous unit; classical successors of the Measure may start once the Measure itself
has finished, qubit successors only after the Reset. Idle windows are the gaps between
occupying instructions on a qubit (leading and trailing gaps excluded), split at barriers
and delays.
"""
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.analysis import fused_resets, mcm_indices
from src.circuit.dag import build_dag
from src.circuit.ir import Circuit, Instruction, Op
from src.config import DD_LABEL, TIME_UNIT
from src.device.model import DeviceModel
from src.exceptions import InvariantViolation
from src.logging.logger import setup_logger
from src.utils import save_to_json

# Setup logger
logger = setup_logger('scheduler_logger', 'logs', 'scheduler.log')


@dataclass(frozen=True)
class IdleWindow:
    qubit: int
    start: int
    end: int
    next_index: int
    concurrent_mcm: bool = False
    neighbor_mcm: bool = False
    dd: bool = False

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class MCMWindow:
    qubit: int
    start: int
    end: int
    index: int


@dataclass(frozen=True, eq=False)
class Schedule:
    circuit: Circuit
    starts: Tuple[int, ...]
    durations: Tuple[int, ...]
    total: int
    idle_windows: Dict[int, Tuple[IdleWindow, ...]]
    mcm_windows: Tuple[MCMWindow, ...] = ()
    fused: Dict[int, int] = field(default_factory=dict)

    def end(self, index: int) -> int:
        return self.starts[index] + self.durations[index]

    def windows(self) -> List[IdleWindow]:
        return [w for q in sorted(self.idle_windows) for w in self.idle_windows[q]]

    def windows_ending_at(self) -> Dict[int, List[IdleWindow]]:
        ending: Dict[int, List[IdleWindow]] = defaultdict(list)
        for window in self.windows():
            ending[window.next_index].append(window)
        return dict(ending)

    def window_at(self, qubit: int, time: int) -> Optional[IdleWindow]:
        for window in self.idle_windows.get(qubit, ()):
            if window.start <= time < window.end:
                return window
        return None

    @property
    def dd_count(self) -> int:
        return sum(1 for ins in self.circuit.instructions if ins.label == DD_LABEL)


def instruction_duration(ins: Instruction, device: DeviceModel) -> int:
    d = device.durations
    if ins.kind == Op.BARRIER:
        return 0
    if ins.kind == Op.DELAY:
        return int(ins.duration)
    if ins.kind == Op.MEASURE:
        return d.measure
    if ins.kind == Op.RESET:
        return d.reset
    if ins.kind == Op.SWAP:
        return 3 * d.two_qubit
    if ins.kind == Op.CX:
        return d.two_qubit
    return d.single_qubit


# Unit graph
# ----------
def _unit_graph(circuit: Circuit, durations: Sequence[int]):
    """Collapse fused measure/reset pairs; edges carry the minimum start-to-start offset."""
    dag = build_dag(circuit)
    fused = {m: r for m, r in fused_resets(circuit).items() if set(dag.predecessors(r)) == {m}}
    unit_of = {i: i for i in range(len(circuit))}
    inner = {i: 0 for i in range(len(circuit))}
    unit_duration = {i: durations[i] for i in range(len(circuit))}
    for m, r in fused.items():
        unit_of[r] = m
        inner[r] = durations[m]
        unit_duration[m] = durations[m] + durations[r]
        del unit_duration[r]

    units = nx.DiGraph()
    units.add_nodes_from(unit_duration)
    for u, v in dag.edges:
        a, b = unit_of[u], unit_of[v]
        if a == b:
            continue
        offset = inner[u] + durations[u] - inner[v]
        if units.has_edge(a, b):
            units[a][b]['offset'] = max(units[a][b]['offset'], offset)
        else:
            units.add_edge(a, b, offset=offset)
    return units, unit_of, inner, unit_duration, fused


def asap_starts(circuit: Circuit, device: DeviceModel) -> Tuple[List[int], int]:
    """Earliest start of every instruction and the resulting makespan."""
    durations = [instruction_duration(ins, device) for ins in circuit.instructions]
    units, unit_of, inner, unit_duration, fused = _unit_graph(circuit, durations)
    earliest: Dict[int, int] = {}
    for u in nx.topological_sort(units):
        earliest[u] = max((earliest[p] + units[p][u]['offset'] for p in units.predecessors(u)), default=0)
    total = max((earliest[u] + unit_duration[u] for u in units), default=0)
    starts = [earliest[unit_of[i]] + inner[i] for i in range(len(circuit))]
    return starts, total


def asap_schedule(circuit: Circuit, device: DeviceModel) -> Schedule:
    durations = [instruction_duration(ins, device) for ins in circuit.instructions]
    starts, total = asap_starts(circuit, device)
    schedule = build_schedule(circuit, starts, durations, total, device)
    logger.info(f"ASAP schedule: {len(circuit)} instructions, total {total} {TIME_UNIT}")
    return schedule


def alap_schedule(circuit: Circuit, device: DeviceModel) -> Schedule:
    """Latest start for every instruction that still meets the critical-path makespan."""
    durations = [instruction_duration(ins, device) for ins in circuit.instructions]
    units, unit_of, inner, unit_duration, fused = _unit_graph(circuit, durations)

    earliest: Dict[int, int] = {}
    order = list(nx.topological_sort(units))
    for u in order:
        earliest[u] = max((earliest[p] + units[p][u]['offset'] for p in units.predecessors(u)), default=0)
    total = max((earliest[u] + unit_duration[u] for u in units), default=0)

    latest: Dict[int, int] = {}
    for u in reversed(order):
        bound = total - unit_duration[u]
        for s in units.successors(u):
            bound = min(bound, latest[s] - units[u][s]['offset'])
        latest[u] = bound

    starts = [latest[unit_of[i]] + inner[i] for i in range(len(circuit))]
    schedule = build_schedule(circuit, starts, durations, total, device, fused)
    logger.info(f"ALAP schedule: {len(circuit)} instructions, total {total} {TIME_UNIT}, "
                f"{len(schedule.windows())} idle windows")
    return schedule


SCHEDULERS = {'alap': alap_schedule, 'asap': asap_schedule}


# Idle windows
# ------------
def _overlaps(a_start: int, a_end: int, b_start: int, b_end: int) -> bool:
    return a_start < b_end and b_start < a_end


def build_schedule(circuit: Circuit, starts: Sequence[int], durations: Sequence[int], total: int,
                   device: DeviceModel, fused: Optional[Dict[int, int]] = None,
                   protected: Optional[Dict[int, List[Tuple[int, int]]]] = None) -> Schedule:
    """Assemble a Schedule from fixed start times and derive its idle and MCM windows.

    ``protected`` lists per-qubit intervals already covered by decoupling; idle windows
    inside them are flagged ``dd``.
    """
    fused = fused_resets(circuit) if fused is None else fused
    protected = protected or {}

    mcm_windows = []
    for m in sorted(mcm_indices(circuit)):
        q = circuit.instructions[m].qubits[0]
        end = starts[m] + durations[m]
        if m in fused:
            end += durations[fused[m]]
        mcm_windows.append(MCMWindow(q, starts[m], end, m))

    events: Dict[int, List[Tuple[int, int, int, bool]]] = defaultdict(list)
    for i, ins in enumerate(circuit.instructions):
        occupying = not ins.is_directive and durations[i] > 0
        boundary = ins.is_directive
        if occupying or boundary:
            for q in ins.qubits:
                events[q].append((starts[i], starts[i] + durations[i], i, occupying))

    idle: Dict[int, Tuple[IdleWindow, ...]] = {}
    for q, q_events in events.items():
        q_events.sort(key=lambda e: (e[0], e[2]))
        occupied = [e for e in q_events if e[3]]
        if not occupied:
            continue
        first_start, last_end = occupied[0][0], max(e[1] for e in occupied)
        windows = []
        cursor = None
        for start, end, index, _ in q_events:
            if cursor is not None and start > cursor and cursor >= first_start and start <= last_end:
                concurrent = any(_overlaps(cursor, start, w.start, w.end) for w in mcm_windows if w.qubit != q)
                neighbor = any(_overlaps(cursor, start, w.start, w.end) for w in mcm_windows
                               if w.qubit != q and device.are_coupled(q, w.qubit))
                dd = any(p_start <= cursor and start <= p_end for p_start, p_end in protected.get(q, ()))
                windows.append(IdleWindow(q, cursor, start, index, concurrent, neighbor, dd))
            cursor = end if cursor is None else max(cursor, end)
        idle[q] = tuple(windows)

    return Schedule(
        circuit=circuit,
        starts=tuple(int(s) for s in starts),
        durations=tuple(int(d) for d in durations),
        total=int(total),
        idle_windows=idle,
        mcm_windows=tuple(mcm_windows),
        fused=dict(fused),
    )


def validate(schedule: Schedule) -> None:
    """Raise InvariantViolation on same-qubit overlaps, broken dependencies or split MCM units."""
    circuit = schedule.circuit
    per_qubit: Dict[int, List[Tuple[int, int, int]]] = defaultdict(list)
    for i, ins in enumerate(circuit.instructions):
        if ins.is_directive or schedule.durations[i] == 0:
            continue
        for q in ins.qubits:
            per_qubit[q].append((schedule.starts[i], schedule.end(i), i))
    for q, spans in per_qubit.items():
        spans.sort()
        for (s0, e0, i0), (s1, e1, i1) in zip(spans, spans[1:]):
            if s1 < e0:
                raise InvariantViolation(f"qubit {q}: instructions {i0} and {i1} overlap")
    for u, v in build_dag(circuit).edges:
        if schedule.starts[v] < schedule.end(u):
            raise InvariantViolation(f"instruction {v} starts before its dependency {u} ends")
    for m, r in schedule.fused.items():
        if schedule.starts[r] != schedule.end(m):
            raise InvariantViolation(f"reset {r} is detached from its measurement {m}")
    if any(schedule.end(i) > schedule.total for i in range(len(circuit))):
        raise InvariantViolation("instruction ends after the schedule total")


def to_timeline(schedule: Schedule) -> Dict:
    return {
        'time_unit': TIME_UNIT,
        'total': schedule.total,
        'instructions': [
            {
                'index': i,
                'op': ins.kind.value,
                'qubits': list(ins.qubits),
                'clbit': ins.clbit,
                'label': ins.label,
                'start': schedule.starts[i],
                'duration': schedule.durations[i],
            }
            for i, ins in enumerate(schedule.circuit.instructions)
        ],
        'idle_windows': [
            {
                'qubit': w.qubit,
                'start': w.start,
                'end': w.end,
                'concurrent_mcm': w.concurrent_mcm,
                'neighbor_mcm': w.neighbor_mcm,
                'dd': w.dd,
            }
            for w in schedule.windows()
        ],
        'mcm_windows': [{'qubit': w.qubit, 'start': w.start, 'end': w.end} for w in schedule.mcm_windows],
    }


def dump_schedule(schedule: Schedule, path: Path) -> None:
    save_to_json(to_timeline(schedule), path)

"""
Context-aware dynamic decoupling: X-X pairs placed inside ALAP idle windows.

A window next to an MCM on a coupled qubit gets a pair as soon as it can hold two pulses
plus edge padding; any other window needs at least ``min_window``. Pulses sit at a
quarter and three quarters of the padded window, and coupled qubits idling at the same
time are staggered by one pulse length.
"""
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.ir import Instruction, Op
from src.config import DD_LABEL, MIN_DD_WINDOW_FRACTION
from src.device.model import DeviceModel
from src.exceptions import InvariantViolation
from src.logging.logger import setup_logger
from src.scheduling.alap import IdleWindow, Schedule, build_schedule, validate

# Setup logger
logger = setup_logger('cadd_logger', 'logs', 'cadd.log')


def _wants_dd(window: IdleWindow, pulse: int, gap: int, min_window: float) -> bool:
    if window.neighbor_mcm and window.length >= 2 * pulse + 2 * gap:
        return True
    return window.length >= min_window and window.length >= 2 * pulse + 2 * gap


def _pulse_starts(window: IdleWindow, pulse: int, gap: int, shift: int) -> Optional[Tuple[int, int]]:
    """CPMG positions at L/4 and 3L/4 of the padded window, or None if the shift leaves it."""
    lo, hi = window.start + gap, window.end - gap
    usable = hi - lo
    first = int(round(lo + usable / 4 - pulse / 2)) + shift
    second = int(round(lo + 3 * usable / 4 - pulse / 2)) + shift
    if first < lo or second + pulse > hi or second < first + pulse:
        return None
    return first, second


def _collides(starts: Tuple[int, int], others: List[Tuple[int, int]], pulse: int) -> bool:
    return any(abs(a - b) < pulse for a in starts for pair in others for b in pair)


def cadd_insert(schedule: Schedule, device: DeviceModel, min_window: Optional[float] = None) -> Schedule:
    """Return a new schedule whose circuit carries the DD pulses, emitted in start-time order."""
    pulse = device.durations.single_qubit
    gap = pulse
    if min_window is None:
        min_window = MIN_DD_WINDOW_FRACTION * device.durations.mcm_window

    placed: Dict[int, List[Tuple[IdleWindow, Tuple[int, int]]]] = {}
    windows = sorted(schedule.windows(), key=lambda w: (w.start, w.qubit))
    for window in windows:
        if not _wants_dd(window, pulse, gap, min_window):
            continue
        concurrent = [
            starts for n in device.neighbors(window.qubit) for other, starts in placed.get(n, ())
            if other.start < window.end and window.start < other.end
        ]
        chosen = None
        for shift in (0, pulse, -pulse, 2 * pulse, -2 * pulse):
            starts = _pulse_starts(window, pulse, gap, shift)
            if starts is not None and not _collides(starts, concurrent, pulse):
                chosen = starts
                break
        if chosen is None:
            chosen = _pulse_starts(window, pulse, gap, 0)
        placed.setdefault(window.qubit, []).append((window, chosen))

    circuit = schedule.circuit
    n = len(circuit)
    rows = [(schedule.starts[i], i, ins, schedule.durations[i]) for i, ins in enumerate(circuit.instructions)]
    protected: Dict[int, List[Tuple[int, int]]] = {}
    k = 0
    for q in sorted(placed):
        for window, starts in placed[q]:
            protected.setdefault(q, []).append((window.start, window.end))
            for start in starts:
                rows.append((start, n + k, Instruction(Op.X, (q,), label=DD_LABEL), pulse))
                k += 1
    rows.sort(key=lambda row: (row[0], row[1]))

    position = {row[1]: new for new, row in enumerate(rows)}
    new_circuit = circuit.with_instructions(row[2] for row in rows)
    new_fused = {position[m]: position[r] for m, r in schedule.fused.items()}
    result = build_schedule(
        new_circuit,
        [row[0] for row in rows],
        [row[3] for row in rows],
        schedule.total,
        device,
        new_fused,
        protected,
    )
    validate(result)
    validate_dd(result)
    logger.info(f"CADD inserted {k} pulses in {sum(len(v) for v in placed.values())} idle windows")
    return result


def validate_dd(schedule: Schedule) -> None:
    """No DD pulse may overlap an MCM window on its own qubit, and every qubit gets an even count."""
    counts: Dict[int, int] = {}
    for i, ins in enumerate(schedule.circuit.instructions):
        if ins.label != DD_LABEL:
            continue
        q = ins.qubits[0]
        counts[q] = counts.get(q, 0) + 1
        for window in schedule.mcm_windows:
            if window.qubit == q and schedule.starts[i] < window.end and window.start < schedule.end(i):
                raise InvariantViolation(f"DD pulse {i} overlaps the MCM window of qubit {q}")
    odd = [q for q, c in counts.items() if c % 2]
    if odd:
        raise InvariantViolation(f"odd number of DD pulses on qubits {odd}")

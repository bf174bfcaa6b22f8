"""
Per-qubit MCM error profiling.

Every profiled qubit runs X; Measure; Reset; Measure in parallel. A perfect MCM and reset
leave the qubit in |0>, so the error estimate is 1 - P(final measurement = 0). The mid
measurement is recorded but not used. Estimates fold in readout error and any
simultaneous-measurement effects; no attempt is made to isolate them.
"""
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from statsmodels.stats.proportion import proportion_confint

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.ir import Circuit, CircuitBuilder
from src.config import PROFILING_BATCH_QUBITS, PROFILING_CI_ALPHA, PROFILING_SHOTS
from src.device.model import DeviceModel
from src.exceptions import CircuitError, InvariantViolation, ZeroShots
from src.logging.logger import setup_logger
from src.simulation.noise import NoiseChannelSet
from src.simulation.simulator import ShotCounts, run
from src.utils import load_from_json, save_to_json

# Setup logger
logger = setup_logger('profiler_logger', 'logs', 'profiler.log')


@dataclass(frozen=True)
class ProfilingReport:
    device_name: str
    qubits: tuple
    estimates: tuple
    shots: int
    timestamp: str
    ci_low: tuple = ()
    ci_high: tuple = ()
    notes: Dict[str, str] = field(default_factory=lambda: {
        'crosstalk': 'estimates include readout error and simultaneous-measurement effects',
    })

    def __post_init__(self):
        if self.shots <= 0:
            raise ZeroShots("profiling report needs a positive shot count")
        if any(not 0.0 <= e <= 1.0 for e in self.estimates):
            raise InvariantViolation("MCM error estimates must lie in [0, 1]")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'qubit': list(self.qubits),
            'mcm_error': list(self.estimates),
            'ci_low': list(self.ci_low) or [np.nan] * len(self.qubits),
            'ci_high': list(self.ci_high) or [np.nan] * len(self.qubits),
            'shots': self.shots,
        })

    def to_dict(self) -> Dict:
        return {
            'device': self.device_name,
            'timestamp': self.timestamp,
            'shots': self.shots,
            'notes': dict(self.notes),
            'qubits': self.to_frame().to_dict(orient='records'),
        }

    def save(self, path: Path) -> None:
        save_to_json(self.to_dict(), path)

    @classmethod
    def load(cls, path: Path) -> 'ProfilingReport':
        data = load_from_json(path)
        frame = pd.DataFrame(data['qubits'])
        return cls(
            device_name=data['device'],
            qubits=tuple(int(q) for q in frame['qubit']),
            estimates=tuple(float(e) for e in frame['mcm_error']),
            shots=int(data['shots']),
            timestamp=data['timestamp'],
            ci_low=tuple(float(v) for v in frame['ci_low']),
            ci_high=tuple(float(v) for v in frame['ci_high']),
        )


def build_profiling_circuit(qubits: Sequence[int], num_qubits: Optional[int] = None) -> Circuit:
    """X; Measure -> c[2i]; Reset; Measure -> c[2i+1] on every listed qubit, all in parallel."""
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits):
        raise CircuitError(f"profiling qubits must be distinct, got {qubits}")
    if num_qubits is None:
        num_qubits = max(qubits) + 1 if qubits else 0
    builder = CircuitBuilder(num_qubits, 2 * len(qubits))
    for q in qubits:
        builder.x(q)
    for i, q in enumerate(qubits):
        builder.measure(q, 2 * i)
    for q in qubits:
        builder.reset(q)
    for i, q in enumerate(qubits):
        builder.measure(q, 2 * i + 1)
    return builder.build()


def _now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def estimate_mcm_errors(counts: ShotCounts, qubits: Sequence[int], device_name: str = 'unknown',
                        alpha: float = PROFILING_CI_ALPHA) -> ProfilingReport:
    """Per-qubit estimate 1 - (#final reads of 0 / shots) with Wilson intervals."""
    if counts.shots <= 0:
        raise ZeroShots("no shots to estimate from")
    qubits = list(qubits)
    width = 2 * len(qubits)
    ones = np.zeros(len(qubits), dtype=int)
    for bits, n in counts.counts.items():
        bits = bits.zfill(width)
        for i in range(len(qubits)):
            if bits[width - 1 - (2 * i + 1)] == '1':
                ones[i] += n
    estimates = ones / counts.shots
    low, high = proportion_confint(ones, counts.shots, alpha=alpha, method='wilson')
    return ProfilingReport(
        device_name=device_name,
        qubits=tuple(qubits),
        estimates=tuple(float(e) for e in estimates),
        shots=counts.shots,
        timestamp=_now(),
        ci_low=tuple(float(v) for v in np.atleast_1d(low)),
        ci_high=tuple(float(v) for v in np.atleast_1d(high)),
    )


def profile_device(device: DeviceModel, shots: int = PROFILING_SHOTS, seed: int = 0,
                   qubits: Optional[Sequence[int]] = None, channels: Optional[NoiseChannelSet] = None,
                   n_jobs: int = 1) -> ProfilingReport:
    """Run the profiling circuit on the noisy simulator in batches; batch b uses seed + b."""
    qubits = list(range(device.num_qubits)) if qubits is None else list(qubits)
    channels = channels or NoiseChannelSet.from_device(device)
    logger.info(f"Profiling {len(qubits)} qubits of '{device.name}' with {shots} shots")
    estimates: List[float] = []
    low: List[float] = []
    high: List[float] = []
    try:
        for b, start in enumerate(range(0, len(qubits), PROFILING_BATCH_QUBITS)):
            batch = qubits[start:start + PROFILING_BATCH_QUBITS]
            circuit = build_profiling_circuit(batch, device.num_qubits)
            counts = run(circuit, device, channels, shots=shots, seed=seed + b, n_jobs=n_jobs)
            partial = estimate_mcm_errors(counts, batch, device.name)
            estimates.extend(partial.estimates)
            low.extend(partial.ci_low)
            high.extend(partial.ci_high)
    except Exception as e:
        logger.error(f"Profiling failed: {e}", exc_info=True)
        raise
    report = ProfilingReport(device.name, tuple(qubits), tuple(estimates), shots, _now(), tuple(low), tuple(high))
    logger.info(f"Profiled mean MCM error {np.mean(estimates) if estimates else 0.0:.4f}")
    return report

import sys
from pathlib import Path
from typing import Mapping, Union

import numpy as np
import pandas as pd

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.analysis import mcm_indices
from src.circuit.ir import Circuit, Op
from src.device.model import DeviceModel
from src.exceptions import EmptyCounts, NotRUS
from src.simulation.simulator import ShotCounts

Histogram = Union[ShotCounts, Mapping[str, float]]


def _as_series(histogram: Histogram) -> pd.Series:
    values = histogram.counts if isinstance(histogram, ShotCounts) else histogram
    series = pd.Series(dict(values), dtype=float)
    total = series.sum()
    if series.empty or total <= 0:
        raise EmptyCounts("distribution has no mass")
    return series / total


def hellinger_fidelity(a: Histogram, b: Histogram) -> float:
    """(sum_x sqrt(p_x q_x))^2 over the union of outcomes; accepts counts or probabilities."""
    p, q = _as_series(a).align(_as_series(b), fill_value=0.0)
    overlap = float(np.sqrt(p * q).sum())
    return min(1.0, overlap ** 2)


def attempts_metric(circuit: Circuit, counts: ShotCounts) -> int:
    """Total mid-circuit measurements executed across all shots until RUS success."""
    if not circuit.is_rus:
        raise NotRUS("attempts are only defined for circuits with RUS blocks")
    return int(sum(counts.mcm_executions))


def estimated_success_probability(circuit: Circuit, device: DeviceModel) -> float:
    """Product of (1 - error) over every operation; SWAP counts as three 2Q gates."""
    mcms = mcm_indices(circuit)
    log_success = 0.0
    for i, ins in enumerate(circuit.instructions):
        if ins.is_single_qubit_gate:
            error = device.e1q[ins.qubits[0]]
        elif ins.is_two_qubit:
            a, b = ins.qubits
            rate = device.edge_error(a, b) if device.are_coupled(a, b) else \
                max(device.e2q_mean[a], device.e2q_mean[b])
            error = 1.0 - (1.0 - rate) ** 3 if ins.kind == Op.SWAP else rate
        elif ins.kind == Op.MEASURE:
            q = ins.qubits[0]
            error = 1.0 - (1.0 - device.readout_error[q]) * ((1.0 - device.mcm_error[q]) if i in mcms else 1.0)
        else:
            continue
        if error >= 1.0:
            return 0.0
        log_success += np.log1p(-error)
    return float(np.exp(log_success))

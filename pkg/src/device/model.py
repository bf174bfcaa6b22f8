"""
Hardware abstraction: coupling topology plus per-qubit and per-edge calibration.

Error rates are probabilities, times are in device time units (ns). MCM errors enter
layout only through ``normalize_mcm``, which floors each value at the normalization
threshold.
"""
import sys
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.config import CALIBRATION_MAX_AGE_HOURS, DURATIONS_NS
from src.exceptions import DisconnectedDevice, InvariantViolation
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('device_model_logger', 'logs', 'device_model.log')


@dataclass(frozen=True)
class Durations:
    single_qubit: int = DURATIONS_NS['single_qubit']
    two_qubit: int = DURATIONS_NS['two_qubit']
    measure: int = DURATIONS_NS['measure']
    reset: int = DURATIONS_NS['reset']
    mcm_window: Optional[int] = None

    def __post_init__(self):
        if self.mcm_window is None:
            object.__setattr__(self, 'mcm_window', self.measure + self.reset)
        for name in ('single_qubit', 'two_qubit', 'measure', 'reset', 'mcm_window'):
            if getattr(self, name) <= 0:
                raise InvariantViolation(f"duration '{name}' must be > 0")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs hop distances over the coupling graph."""
    values: np.ndarray

    def __call__(self, a: int, b: int) -> int:
        return int(self.values[a, b])

    @property
    def diameter(self) -> int:
        return int(self.values.max()) if self.values.size else 0


def _as_tuple(values: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class DeviceModel:
    name: str
    num_qubits: int
    edges: Tuple[Tuple[int, int], ...]
    mcm_error: Tuple[float, ...]
    e1q: Tuple[float, ...]
    readout_error: Tuple[float, ...]
    t1: Tuple[float, ...]
    t2: Tuple[float, ...]
    e2q: Tuple[float, ...]
    durations: Durations = field(default_factory=Durations)
    profiled_at: Optional[str] = None

    def __post_init__(self):
        edges = tuple((min(int(a), int(b)), max(int(a), int(b))) for a, b in self.edges)
        object.__setattr__(self, 'edges', edges)
        for name in ('mcm_error', 'e1q', 'readout_error', 't1', 't2', 'e2q'):
            object.__setattr__(self, name, _as_tuple(getattr(self, name)))
        self.validate()

    def validate(self):
        n = self.num_qubits
        for name in ('mcm_error', 'e1q', 'readout_error', 't1', 't2'):
            if len(getattr(self, name)) != n:
                raise InvariantViolation(f"'{name}' has {len(getattr(self, name))} entries for {n} qubits")
        if len(self.e2q) != len(self.edges):
            raise InvariantViolation(f"'e2q' has {len(self.e2q)} entries for {len(self.edges)} edges")
        for name in ('mcm_error', 'e1q', 'readout_error', 'e2q'):
            values = getattr(self, name)
            bad = [i for i, v in enumerate(values) if not 0.0 <= v <= 1.0]
            if bad:
                raise InvariantViolation(f"'{name}' outside [0, 1] at index {bad[0]}: {values[bad[0]]}")
        for p in range(n):
            if self.t1[p] <= 0 or self.t2[p] <= 0:
                raise InvariantViolation(f"qubit {p}: T1 and T2 must be positive")
            if self.t2[p] > 2 * self.t1[p]:
                raise InvariantViolation(f"qubit {p}: T2 {self.t2[p]} exceeds 2*T1 {2 * self.t1[p]}")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise InvariantViolation(f"self-loop on qubit {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise InvariantViolation(f"edge ({a}, {b}) outside {n} qubits")
            if (a, b) in seen:
                raise InvariantViolation(f"duplicate edge ({a}, {b})")
            seen.add((a, b))

    # Topology
    # --------
    @cached_property
    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_qubits))
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {edge: i for i, edge in enumerate(self.edges)}

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([self.graph.degree(p) for p in range(self.num_qubits)], dtype=int)

    def neighbors(self, p: int) -> List[int]:
        return sorted(self.graph.neighbors(p))

    def are_coupled(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_index

    @cached_property
    def distances(self) -> DistanceMatrix:
        return distance_matrix(self)

    # Calibration views
    # -----------------
    @cached_property
    def mcm_array(self) -> np.ndarray:
        return np.array(self.mcm_error)

    @cached_property
    def e1q_array(self) -> np.ndarray:
        return np.array(self.e1q)

    @cached_property
    def readout_array(self) -> np.ndarray:
        return np.array(self.readout_error)

    def edge_error(self, a: int, b: int) -> float:
        return self.e2q[self.edge_index[(min(a, b), max(a, b))]]

    @cached_property
    def e2q_mean(self) -> np.ndarray:
        """Per-qubit mean 2Q error over incident edges (zero for isolated qubits)."""
        totals = np.zeros(self.num_qubits)
        counts = np.zeros(self.num_qubits)
        for (a, b), err in zip(self.edges, self.e2q):
            totals[[a, b]] += err
            counts[[a, b]] += 1
        return np.divide(totals, counts, out=np.zeros_like(totals), where=counts > 0)

    def with_mcm_errors(self, mcm_error: Sequence[float], profiled_at: Optional[str] = None) -> 'DeviceModel':
        return replace(self, mcm_error=_as_tuple(mcm_error),
                       profiled_at=self.profiled_at if profiled_at is None else profiled_at)


def normalize_mcm(model: DeviceModel, tau_mcm: float) -> DeviceModel:
    """Floor every MCM error at tau_mcm; other fields are untouched."""
    if not 0.0 <= tau_mcm <= 1.0:
        raise InvariantViolation(f"tau_mcm must lie in [0, 1], got {tau_mcm}")
    normalized = np.maximum(tau_mcm, model.mcm_array)
    return model.with_mcm_errors(normalized)


def distance_matrix(model: DeviceModel) -> DistanceMatrix:
    """Exact hop counts by breadth-first search from every qubit."""
    n = model.num_qubits
    if n and not nx.is_connected(model.graph):
        raise DisconnectedDevice(f"device '{model.name}' has {nx.number_connected_components(model.graph)} components")
    values = np.zeros((n, n), dtype=int)
    for source, lengths in nx.all_pairs_shortest_path_length(model.graph):
        for target, hops in lengths.items():
            values[source, target] = hops
    return DistanceMatrix(values)


def calibration_age_hours(model: DeviceModel, now: Optional[datetime] = None) -> Optional[float]:
    """Hours since the MCM errors were profiled, or None when unknown."""
    if model.profiled_at is None:
        return None
    profiled = datetime.fromisoformat(model.profiled_at)
    if profiled.tzinfo is None:
        profiled = profiled.replace(tzinfo=timezone.utc)
    now = now or datetime.now(timezone.utc)
    return (now - profiled).total_seconds() / 3600.0


def is_stale(model: DeviceModel, max_age_hours: float = CALIBRATION_MAX_AGE_HOURS,
             now: Optional[datetime] = None) -> bool:
    age = calibration_age_hours(model, now)
    if age is not None and age > max_age_hours:
        logger.warning(f"Calibration of '{model.name}' is {age:.1f} h old (limit {max_age_hours} h)")
        return True
    return False

"""
MCM-error-aware initial placement.

Sections:
1. Layout and weights
2. Cost terms
3. Seed expansion and bridging
4. Variants and selection
"""
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.analysis import CircuitAnalysis, analyze
from src.circuit.ir import Circuit
from src.config import (DISTANCE_ONLY_LAYOUT_WEIGHTS, DISTANCE_ONLY_SEED_WEIGHTS, LAYOUT_WEIGHTS, LOOK_AHEAD,
                        N_SEED, SEED_WEIGHTS, TAU_MCM)
from src.device.model import DeviceModel, is_stale, normalize_mcm
from src.exceptions import AlreadyMapped, DeviceTooSmall, InvariantViolation, OccupiedPhysical
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('layout_logger', 'logs', 'layout.log')


# Layout and weights
# ------------------
class Layout:
    """Partial injective map from logical to physical qubits."""

    def __init__(self, num_logical: int, num_physical: int, mapping: Optional[Mapping[int, int]] = None):
        self.num_logical = num_logical
        self.num_physical = num_physical
        self.l2p: Dict[int, int] = {}
        self.p2l: Dict[int, int] = {}
        for q, p in (mapping or {}).items():
            self.assign(q, p)

    def assign(self, q: int, p: int) -> None:
        if not 0 <= q < self.num_logical:
            raise InvariantViolation(f"logical qubit {q} outside 0..{self.num_logical - 1}")
        if not 0 <= p < self.num_physical:
            raise InvariantViolation(f"physical qubit {p} outside 0..{self.num_physical - 1}")
        if q in self.l2p:
            raise AlreadyMapped(q)
        if p in self.p2l:
            raise OccupiedPhysical(p, self.p2l[p])
        self.l2p[q] = p
        self.p2l[p] = q

    def extended(self, q: int, p: int) -> 'Layout':
        layout = self.copy()
        layout.assign(q, p)
        return layout

    def copy(self) -> 'Layout':
        layout = Layout(self.num_logical, self.num_physical)
        layout.l2p = dict(self.l2p)
        layout.p2l = dict(self.p2l)
        return layout

    def swap_physical(self, a: int, b: int) -> None:
        """Exchange whatever logical qubits sit on physical a and b."""
        qa, qb = self.p2l.pop(a, None), self.p2l.pop(b, None)
        if qa is not None:
            self.l2p[qa] = b
            self.p2l[b] = qa
        if qb is not None:
            self.l2p[qb] = a
            self.p2l[a] = qb

    @property
    def is_total(self) -> bool:
        return len(self.l2p) == self.num_logical

    def physical(self, q: int) -> int:
        return self.l2p[q]

    def logical(self, p: int) -> Optional[int]:
        return self.p2l.get(p)

    def as_array(self) -> np.ndarray:
        """Physical index per logical qubit, -1 where unmapped."""
        array = np.full(self.num_logical, -1, dtype=int)
        for q, p in self.l2p.items():
            array[q] = p
        return array

    def key(self) -> Tuple[int, ...]:
        return tuple(self.as_array())

    def __eq__(self, other) -> bool:
        return isinstance(other, Layout) and self.num_physical == other.num_physical and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.num_physical, self.key()))

    def __repr__(self) -> str:
        return f"Layout({dict(sorted(self.l2p.items()))})"


@dataclass(frozen=True)
class SeedWeights:
    alpha: float = SEED_WEIGHTS['alpha']
    beta: float = SEED_WEIGHTS['beta']
    gamma: float = SEED_WEIGHTS['gamma']
    delta: float = SEED_WEIGHTS['delta']
    epsilon: float = SEED_WEIGHTS['epsilon']

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not np.isfinite(value) or value < 0:
                raise InvariantViolation(f"seed weight {name} must be finite and >= 0, got {value}")

    @classmethod
    def distance_only(cls) -> 'SeedWeights':
        return cls(**DISTANCE_ONLY_SEED_WEIGHTS)


@dataclass(frozen=True)
class LayoutWeights:
    w_dist: float = LAYOUT_WEIGHTS['w_dist']
    w_mcm: float = LAYOUT_WEIGHTS['w_mcm']
    w_2q: float = LAYOUT_WEIGHTS['w_2q']
    w_1q: float = LAYOUT_WEIGHTS['w_1q']
    w_ro: float = LAYOUT_WEIGHTS['w_ro']
    look_ahead: int = LOOK_AHEAD
    tau_mcm: float = TAU_MCM
    n_seed: int = N_SEED

    def __post_init__(self):
        for name in ('w_dist', 'w_mcm', 'w_2q', 'w_1q', 'w_ro', 'tau_mcm'):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvariantViolation(f"layout weight {name} must be finite and >= 0, got {value}")
        if self.look_ahead < 0 or self.n_seed < 1:
            raise InvariantViolation("look_ahead must be >= 0 and n_seed >= 1")

    @classmethod
    def distance_only(cls) -> 'LayoutWeights':
        return cls(**DISTANCE_ONLY_LAYOUT_WEIGHTS)


def weights_from_dict(params: Mapping) -> Tuple[SeedWeights, LayoutWeights]:
    """Split a flat parameter dict (e.g. a tuned weights file) into the two weight sets."""
    seed_keys = SeedWeights.__dataclass_fields__.keys()
    layout_keys = LayoutWeights.__dataclass_fields__.keys()
    return (SeedWeights(**{k: v for k, v in params.items() if k in seed_keys}),
            LayoutWeights(**{k: v for k, v in params.items() if k in layout_keys}))


# Cost terms
# ----------
def mcm_cost(q: int, p: int, intensity: Sequence[int], device: DeviceModel) -> float:
    """MCM intensity of q times the (already normalized) MCM error of p."""
    return float(intensity[q]) * device.mcm_error[p]


def seed_score_values(device: DeviceModel, weights: SeedWeights) -> np.ndarray:
    max_degree = device.degrees.max() if device.num_qubits else 0
    connectivity = device.degrees / max_degree if max_degree else np.zeros(device.num_qubits)
    return (weights.alpha * (1 - device.mcm_array)
            + weights.beta * (1 - device.e2q_mean)
            + weights.gamma * (1 - device.e1q_array)
            + weights.delta * (1 - device.readout_array)
            + weights.epsilon * connectivity)


def seed_scores(device: DeviceModel, weights: SeedWeights) -> List[int]:
    """Physical qubits by descending seed score, ties to the lower index."""
    scores = seed_score_values(device, weights)
    return sorted(range(device.num_qubits), key=lambda p: (-scores[p], p))


def layout_cost(layout: Layout, analysis: CircuitAnalysis, device: DeviceModel, weights: LayoutWeights) -> float:
    """Look-ahead distance over fully mapped window gates plus per-qubit error terms of mapped pairs."""
    placement = layout.as_array()
    cost = 0.0
    pairs = analysis.window_pairs
    if len(pairs) and weights.w_dist:
        ends = placement[pairs]
        mapped = (ends >= 0).all(axis=1)
        if mapped.any():
            ends = ends[mapped]
            cost += weights.w_dist * float(device.distances.values[ends[:, 0], ends[:, 1]].sum())
    qs = np.flatnonzero(placement >= 0)
    if len(qs):
        ps = placement[qs]
        cost += float(np.sum(
            weights.w_mcm * analysis.intensity[qs] * device.mcm_array[ps]
            + weights.w_2q * analysis.n2q[qs] * device.e2q_mean[ps]
            + weights.w_1q * analysis.n1q[qs] * device.e1q_array[ps]
            + weights.w_ro * analysis.nro[qs] * device.readout_array[ps]
        ))
    return cost


def incremental_cost(layout: Layout, q: int, p: int, analysis: CircuitAnalysis, device: DeviceModel,
                     weights: LayoutWeights) -> float:
    """Cost of the layout extended by (q, p); raises if q is mapped or p is taken."""
    return layout_cost(layout.extended(q, p), analysis, device, weights)


# Seed expansion and bridging
# ---------------------------
def _expansion_key(q: int, layout: Layout, analysis: CircuitAnalysis) -> Tuple:
    partners = analysis.interaction.neighbors(q)
    connected = any(r in layout.l2p for r in partners)
    return connected, int(analysis.degree[q]), int(analysis.intensity[q]), -q


def _next_logical(layout: Layout, analysis: CircuitAnalysis) -> int:
    unmapped = [q for q in range(analysis.num_qubits) if q not in layout.l2p]
    return max(unmapped, key=lambda q: _expansion_key(q, layout, analysis))


def _free_neighbors(p: int, layout: Layout, device: DeviceModel) -> List[int]:
    return [n for n in device.neighbors(p) if n not in layout.p2l]


def _frontier(layout: Layout, device: DeviceModel, radius: int = 2) -> List[int]:
    distances = device.distances.values
    mapped = list(layout.p2l)
    return [p for p in range(device.num_qubits)
            if p not in layout.p2l and distances[mapped, p].min() <= radius]


def _argmin_cost(layout: Layout, q: int, candidates: Iterable[int], analysis: CircuitAnalysis,
                 device: DeviceModel, weights: LayoutWeights, extra=lambda p: ()) -> int:
    scored = [(*extra(p), incremental_cost(layout, q, p, analysis, device, weights), p) for p in candidates]
    for entry in scored:
        logger.debug(f"q{q} -> p{entry[-1]}: {entry[:-1]}")
    return min(scored)[-1]


def _bridge(layout: Layout, analysis: CircuitAnalysis, device: DeviceModel, weights: LayoutWeights) -> None:
    distances = device.distances.values
    while not layout.is_total:
        q = _next_logical(layout, analysis)
        free = [p for p in range(device.num_qubits) if p not in layout.p2l]
        mapped = list(layout.p2l)
        hops = (lambda p: (int(distances[mapped, p].min()),)) if mapped else (lambda p: (0,))
        p = _argmin_cost(layout, q, free, analysis, device, weights, extra=hops)
        logger.debug(f"Bridged q{q} -> p{p}")
        layout.assign(q, p)


def expand_from_seed(seed: int, analysis: CircuitAnalysis, device: DeviceModel, weights: LayoutWeights) -> Layout:
    """Greedy breadth-first growth from a seed physical qubit, then shortest-path bridging."""
    n_logical = analysis.num_qubits
    if n_logical > device.num_qubits:
        raise DeviceTooSmall(f"{n_logical} logical qubits do not fit on {device.num_qubits} physical qubits")
    layout = Layout(n_logical, device.num_qubits)
    if n_logical == 0:
        return layout
    layout.assign(_next_logical(layout, analysis), seed)
    while not layout.is_total:
        candidates = _frontier(layout, device)
        if not candidates:
            break
        q = _next_logical(layout, analysis)
        open_partners = [r for r in analysis.interaction.neighbors(q) if r not in layout.l2p and r != q]
        if open_partners:
            roomy = [p for p in candidates if len(_free_neighbors(p, layout, device)) >= 1]
            candidates = roomy or candidates
        layout.assign(q, _argmin_cost(layout, q, candidates, analysis, device, weights))
    if not layout.is_total:
        _bridge(layout, analysis, device, weights)
    return layout


# Variants and selection
# ----------------------
def _reassign(candidate: Layout, logical_key, physical_key) -> Layout:
    physicals = sorted(candidate.p2l, key=physical_key)
    rank = {p: i for i, p in enumerate(physicals)}
    logicals = sorted(candidate.l2p, key=lambda q: (logical_key(q), rank[candidate.l2p[q]]))
    return Layout(candidate.num_logical, candidate.num_physical, dict(zip(logicals, physicals)))


def generate_variants(candidate: Layout, analysis: CircuitAnalysis, device: DeviceModel) -> List[Layout]:
    """MCM-aware and connectivity-aware permutations over the candidate's physical qubits.

    Returns only variants that differ from the candidate and from each other.
    """
    if not candidate.is_total:
        raise InvariantViolation("variants need a total layout")
    mcm_order = _reassign(candidate,
                          logical_key=lambda q: -int(analysis.intensity[q]),
                          physical_key=lambda p: (device.mcm_error[p], p))
    degree_order = _reassign(candidate,
                             logical_key=lambda q: -int(analysis.n2q[q]),
                             physical_key=lambda p: (-int(device.degrees[p]), p))
    variants: List[Layout] = []
    for variant in (mcm_order, degree_order):
        if variant != candidate and variant not in variants:
            variants.append(variant)
    return variants


def _candidates_for_seed(seed: int, analysis: CircuitAnalysis, device: DeviceModel,
                         weights: LayoutWeights) -> List[Layout]:
    expanded = expand_from_seed(seed, analysis, device, weights)
    return [expanded] + generate_variants(expanded, analysis, device)


def layout_candidates(analysis: CircuitAnalysis, device: DeviceModel, seed_weights: SeedWeights,
                      weights: LayoutWeights, n_jobs: int = 1) -> List[Layout]:
    """Expansions and variants of the top seeds, in generation order."""
    seeds = seed_scores(device, seed_weights)[:weights.n_seed]
    per_seed = Parallel(n_jobs=n_jobs)(
        delayed(_candidates_for_seed)(seed, analysis, device, weights) for seed in seeds
    )
    return [layout for group in per_seed for layout in group]


def select_layout(circuit: Circuit, device: DeviceModel, seed_weights: Optional[SeedWeights] = None,
                  weights: Optional[LayoutWeights] = None, n_jobs: int = 1) -> Layout:
    """Lowest-cost layout among the candidate family; ties go to the first generated."""
    seed_weights = seed_weights or SeedWeights()
    weights = weights or LayoutWeights()
    if circuit.num_qubits > device.num_qubits:
        raise DeviceTooSmall(f"{circuit.num_qubits} logical qubits do not fit on {device.num_qubits} physical qubits")
    is_stale(device)
    try:
        normalized = normalize_mcm(device, weights.tau_mcm)
        analysis = analyze(circuit, weights.look_ahead)
        candidates = layout_candidates(analysis, normalized, seed_weights, weights, n_jobs)
        costs = np.array([layout_cost(c, analysis, normalized, weights) for c in candidates])
    except Exception as e:
        logger.error(f"Layout selection failed: {e}", exc_info=True)
        raise
    best = candidates[int(np.argmin(costs))]
    logger.info(f"Selected layout {best} with cost {costs.min():.6f} among {len(candidates)} candidates")
    return best


def trivial_layout(circuit: Circuit, device: DeviceModel) -> Layout:
    if circuit.num_qubits > device.num_qubits:
        raise DeviceTooSmall(f"{circuit.num_qubits} logical qubits do not fit on {device.num_qubits} physical qubits")
    return Layout(circuit.num_qubits, device.num_qubits, {q: q for q in range(circuit.num_qubits)})

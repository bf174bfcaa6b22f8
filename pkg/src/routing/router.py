"""
SWAP insertion over the dependency DAG with a two-level candidate ranking.

Level 1 is the SABRE distance score: post-swap coupling distance summed over the front
layer plus a half-weighted sum over a look-ahead window of 2Q layers. Level 2 is the MCM
exposure of the swap: remaining MCM intensity of each relocated logical qubit times the MCM
error of its destination. Candidates within ``delta_swap`` of the best Level-1 score are
ranked by Level 2, ties going to the lower edge index.
"""
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.analysis import mcm_indices
from src.circuit.dag import build_dag
from src.circuit.ir import Circuit, Instruction, Op, rus_marker
from src.config import (DELTA_SWAP, LOOK_AHEAD, LOOKAHEAD_WEIGHT, MAX_ROUTING_ITERATIONS, ROUTING_MODES,
                        STALL_LIMIT)
from src.device.model import DeviceModel, DistanceMatrix
from src.exceptions import DisconnectedDevice, InvariantViolation, NoCandidates, RoutingStalled
from src.layout.mera_layout import Layout
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('router_logger', 'logs', 'router.log')

Pair = Tuple[int, int]


@dataclass(frozen=True)
class SwapCandidate:
    edge: Pair
    edge_index: int
    level1_cost: float
    level2_cost: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.level1_cost) and np.isfinite(self.level2_cost)):
            raise InvariantViolation(f"non-finite cost for swap {self.edge}")
        if self.level1_cost < 0 or self.level2_cost < 0:
            raise InvariantViolation(f"negative cost for swap {self.edge}")


@dataclass(frozen=True)
class RoutingConfig:
    look_ahead: int = LOOK_AHEAD
    delta_swap: float = DELTA_SWAP
    lookahead_weight: float = LOOKAHEAD_WEIGHT
    max_iterations: int = MAX_ROUTING_ITERATIONS
    stall_limit: int = STALL_LIMIT
    mode: str = 'mera'

    def __post_init__(self):
        if self.delta_swap < 0:
            raise InvariantViolation(f"delta_swap must be >= 0, got {self.delta_swap}")
        if self.look_ahead < 0 or self.max_iterations < 1 or self.stall_limit < 1:
            raise InvariantViolation("look_ahead must be >= 0, max_iterations and stall_limit >= 1")
        if self.mode not in ROUTING_MODES:
            raise InvariantViolation(f"unknown routing mode '{self.mode}', expected one of {ROUTING_MODES}")


# Cost terms
# ----------
def _moved(p: int, edge: Pair) -> int:
    a, b = edge
    return b if p == a else a if p == b else p


def level1_cost(edge: Pair, front: Sequence[Pair], window: Sequence[Pair], layout: Layout,
                distances: DistanceMatrix, lookahead_weight: float = LOOKAHEAD_WEIGHT) -> float:
    """Post-swap distance of the front-layer gates plus the weighted look-ahead distance."""
    def total(pairs):
        return sum(distances(_moved(layout.physical(q0), edge), _moved(layout.physical(q1), edge))
                   for q0, q1 in pairs)
    cost = float(total(front))
    if window:
        cost += lookahead_weight * total(window)
    return cost


def level2_cost(edge: Pair, layout: Layout, remaining: Mapping[int, int], device: DeviceModel) -> float:
    """MCM exposure of the logical qubits the swap relocates."""
    a, b = edge
    cost = 0.0
    for source, destination in ((a, b), (b, a)):
        q = layout.logical(source)
        if q is not None:
            cost += remaining.get(q, 0) * device.mcm_error[destination]
    return cost


def pick_swap(candidates: Sequence[SwapCandidate], config: RoutingConfig) -> SwapCandidate:
    if not candidates:
        raise NoCandidates("no SWAP candidates to choose from")
    if config.mode == 'distance-only':
        return min(candidates, key=lambda c: (c.level1_cost, c.edge_index))
    best = min(c.level1_cost for c in candidates)
    pool = [c for c in candidates if c.level1_cost <= best + config.delta_swap]
    return min(pool, key=lambda c: (c.level2_cost, c.edge_index))


# Routing state
# -------------
@dataclass
class _OpenBlock:
    name: str
    logical: Set[int]
    swaps: List[Pair] = field(default_factory=list)


class _Router:
    """Front-layer walk over the DAG; emits physical instructions and SWAPs."""

    def __init__(self, circuit: Circuit, layout: Layout, device: DeviceModel, config: RoutingConfig):
        self.circuit = circuit
        self.layout = layout
        self.device = device
        self.config = config
        self.distances = device.distances
        self.dag = build_dag(circuit)
        self.pending = {node: self.dag.in_degree(node) for node in self.dag.nodes}
        self.front: Set[int] = {node for node, degree in self.pending.items() if degree == 0}
        self.unexecuted_mcms = set(mcm_indices(circuit))
        self.output: List[Instruction] = []
        self.blocks: List[_OpenBlock] = []
        self.swaps = 0
        self.last_swap: Optional[Pair] = None

    # Execution
    # ---------
    def _executable(self, node: int) -> bool:
        ins = self.circuit.instructions[node]
        if not ins.is_two_qubit:
            return True
        a, b = (self.layout.physical(q) for q in ins.qubits)
        return self.device.are_coupled(a, b)

    def _emit(self, ins: Instruction) -> None:
        self.output.append(ins.remap(self.layout.l2p))

    def _execute(self, node: int) -> None:
        ins = self.circuit.instructions[node]
        marker = rus_marker(ins)
        if marker and marker[0] == 'begin':
            self.blocks.append(_OpenBlock(marker[1], set(ins.qubits)))
        elif marker and marker[0] == 'end':
            self._close_block(marker[1])
        self._emit(ins)
        self.front.discard(node)
        self.unexecuted_mcms.discard(node)
        for successor in self.dag.successors(node):
            self.pending[successor] -= 1
            if self.pending[successor] == 0:
                self.front.add(successor)

    def _close_block(self, name: str) -> None:
        for position in range(len(self.blocks) - 1, -1, -1):
            if self.blocks[position].name == name:
                block = self.blocks.pop(position)
                for edge in reversed(block.swaps):
                    self._apply_swap(edge, record=False)
                if block.swaps:
                    logger.debug(f"Undid {len(block.swaps)} swaps before the end of RUS block '{name}'")
                return

    def _drain(self) -> bool:
        """Execute every executable front node in index order; True if anything ran."""
        progressed = False
        while True:
            ready = sorted(node for node in self.front if self._executable(node))
            if not ready:
                return progressed
            for node in ready:
                self._execute(node)
            progressed = True

    # Swaps
    # -----
    def _apply_swap(self, edge: Pair, record: bool = True) -> None:
        a, b = edge
        if record:
            touched = {q for q in (self.layout.logical(a), self.layout.logical(b)) if q is not None}
            for block in reversed(self.blocks):
                if block.logical & touched:
                    block.swaps.append(edge)
                    break
        self.output.append(Instruction(Op.SWAP, (a, b)))
        self.layout.swap_physical(a, b)
        self.swaps += 1
        if self.swaps > self.config.max_iterations:
            raise RoutingStalled(f"routing exceeded {self.config.max_iterations} SWAPs")

    def _front_pairs(self) -> List[Pair]:
        return [self.circuit.instructions[n].qubits for n in sorted(self.front)
                if self.circuit.instructions[n].is_two_qubit]

    def _window_pairs(self) -> List[Pair]:
        """2Q gates of the next ``look_ahead`` 2Q layers behind the front layer."""
        if not self.config.look_ahead:
            return []
        pending = dict(self.pending)
        wave = sorted(self.front)
        pairs: List[Pair] = []
        layers = 0
        while wave and layers < self.config.look_ahead:
            following: List[int] = []
            for node in wave:
                for successor in self.dag.successors(node):
                    pending[successor] -= 1
                    if pending[successor] == 0:
                        following.append(successor)
            wave = sorted(following)
            two_qubit = [self.circuit.instructions[n].qubits for n in wave if self.circuit.instructions[n].is_two_qubit]
            if two_qubit:
                pairs.extend(two_qubit)
                layers += 1
        return pairs

    def _remaining_intensity(self) -> Dict[int, int]:
        remaining: Dict[int, int] = {}
        for index in self.unexecuted_mcms:
            q = self.circuit.instructions[index].qubits[0]
            remaining[q] = remaining.get(q, 0) + 1
        return remaining

    def _candidate_edges(self, front: Sequence[Pair], radius: int) -> List[Pair]:
        sources = {self.layout.physical(q) for pair in front for q in pair}
        if radius > 1:
            sources = {p for p in range(self.device.num_qubits)
                       if min(self.distances(p, s) for s in sources) < radius}
        return [edge for edge in self.device.edges if edge[0] in sources or edge[1] in sources]

    def _score(self, edges: Sequence[Pair], front: Sequence[Pair], window: Sequence[Pair]) -> List[SwapCandidate]:
        remaining = self._remaining_intensity()
        index = self.device.edge_index
        return [
            SwapCandidate(
                edge=edge,
                edge_index=index[edge],
                level1_cost=level1_cost(edge, front, window, self.layout, self.distances,
                                        self.config.lookahead_weight),
                level2_cost=level2_cost(edge, self.layout, remaining, self.device),
            )
            for edge in edges
        ]

    def _choose_swap(self) -> Pair:
        front = self._front_pairs()
        window = self._window_pairs()
        current = sum(self.distances(*(self.layout.physical(q) for q in pair)) for pair in front)
        edges = [e for e in self._candidate_edges(front, 1) if e != self.last_swap] or \
            self._candidate_edges(front, 1)
        candidates = self._score(edges, front, window)
        improves = any(level1_cost(c.edge, front, (), self.layout, self.distances) < current for c in candidates)
        if not improves:
            wider = [e for e in self._candidate_edges(front, 2) if e != self.last_swap]
            candidates = self._score(wider, front, window) or candidates
        return pick_swap(candidates, self.config).edge

    def _release_valve(self) -> None:
        """Walk the closest front gate's first qubit along a shortest path until adjacent."""
        front = self._front_pairs()
        q0, q1 = min(front, key=lambda pair: (self.distances(*(self.layout.physical(q) for q in pair)), pair))
        path = nx.shortest_path(self.device.graph, self.layout.physical(q0), self.layout.physical(q1))
        logger.warning(f"Routing stalled; moving q{q0} along {path}")
        for a, b in zip(path[:-2], path[1:-1]):
            self._apply_swap((min(a, b), max(a, b)))

    def run(self) -> Circuit:
        stalled = 0
        while self.front:
            if self._drain():
                stalled = 0
                continue
            if stalled >= self.config.stall_limit:
                self._release_valve()
                stalled = 0
                continue
            edge = self._choose_swap()
            self._apply_swap(edge)
            self.last_swap = edge
            stalled += 1
        return self.circuit.with_instructions(self.output, self.device.num_qubits)


def route(circuit: Circuit, initial: Layout, device: DeviceModel,
          config: Optional[RoutingConfig] = None) -> Tuple[Circuit, Layout]:
    """Route ``circuit`` onto ``device`` from ``initial``; returns the physical circuit and final layout."""
    config = config or RoutingConfig()
    if not initial.is_total or initial.num_logical != circuit.num_qubits:
        raise InvariantViolation("routing needs a total layout over the circuit's qubits")
    if device.num_qubits and not nx.is_connected(device.graph):
        raise DisconnectedDevice(f"device '{device.name}' is not connected")
    router = _Router(circuit, initial.copy(), device, config)
    try:
        routed = router.run()
    except Exception as e:
        logger.error(f"Routing failed: {e}", exc_info=True)
        raise
    check_adjacency(routed, device)
    logger.info(f"Routed {len(circuit)} instructions with {router.swaps} SWAPs ({config.mode})")
    return routed, router.layout


def check_adjacency(circuit: Circuit, device: DeviceModel) -> None:
    for index, ins in enumerate(circuit.instructions):
        if ins.is_two_qubit and not device.are_coupled(*ins.qubits):
            raise InvariantViolation(f"instruction {index} acts on uncoupled qubits {ins.qubits}")

"""
Circuit analyses consumed by layout, routing and reporting.

Sections:
1. Interaction graph
2. MCM detection and intensity
3. Path and SWAP metrics
4. Layout analysis bundle
"""
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Set, Tuple

import networkx as nx
import numpy as np

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.dag import build_dag
from src.circuit.ir import Circuit, Op
from src.config import LOOK_AHEAD


# Interaction graph
# -----------------
@dataclass(frozen=True)
class InteractionGraph:
    num_qubits: int
    edges: Dict[Tuple[int, int], int]

    def multiplicity(self, a: int, b: int) -> int:
        return self.edges.get((min(a, b), max(a, b)), 0)

    @property
    def total(self) -> int:
        return sum(self.edges.values())

    def degree(self, q: int) -> int:
        return sum(m for (a, b), m in self.edges.items() if q in (a, b))

    def neighbors(self, q: int) -> List[int]:
        return sorted({b if a == q else a for (a, b) in self.edges if q in (a, b)})

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_qubits))
        for (a, b), m in self.edges.items():
            graph.add_edge(a, b, weight=m)
        return graph


def interaction_graph(circuit: Circuit) -> InteractionGraph:
    """Each CX/SWAP adds one to the multiplicity of its unordered qubit pair."""
    counts = Counter()
    for ins in circuit.instructions:
        if ins.is_two_qubit:
            a, b = ins.qubits
            counts[(min(a, b), max(a, b))] += 1
    return InteractionGraph(circuit.num_qubits, dict(counts))


# MCM detection and intensity
# ---------------------------
def _next_on_qubit(circuit: Circuit) -> List[Dict[int, int]]:
    """For each instruction, the index of the next non-directive instruction on each of its qubits."""
    following: List[Dict[int, int]] = [dict() for _ in circuit.instructions]
    upcoming: Dict[int, int] = {}
    for index in range(len(circuit.instructions) - 1, -1, -1):
        ins = circuit.instructions[index]
        for q in ins.qubits:
            if q in upcoming:
                following[index][q] = upcoming[q]
        if not ins.is_directive:
            for q in ins.qubits:
                upcoming[q] = index
    return following


def mcm_indices(circuit: Circuit) -> Set[int]:
    """Indices of Measure instructions followed by some other operation on the same qubit."""
    following = _next_on_qubit(circuit)
    return {
        index for index, ins in enumerate(circuit.instructions)
        if ins.kind == Op.MEASURE and ins.qubits[0] in following[index]
    }


def fused_resets(circuit: Circuit) -> Dict[int, int]:
    """Map MCM index to the unconditional Reset that directly follows it on the same qubit."""
    following = _next_on_qubit(circuit)
    fused = {}
    for index in mcm_indices(circuit):
        q = circuit.instructions[index].qubits[0]
        nxt = following[index][q]
        successor = circuit.instructions[nxt]
        if successor.kind == Op.RESET and successor.condition is None:
            fused[index] = nxt
    return fused


def mcm_intensity(circuit: Circuit) -> np.ndarray:
    """Per-logical-qubit count of mid-circuit measurements."""
    intensity = np.zeros(circuit.num_qubits, dtype=int)
    for index in mcm_indices(circuit):
        intensity[circuit.instructions[index].qubits[0]] += 1
    return intensity


def remaining_mcm_intensity(circuit: Circuit, qubit: int, after_index: int, mcms: Set[int] = None) -> int:
    """MCMs on ``qubit`` at instruction indices strictly greater than ``after_index``."""
    mcms = mcm_indices(circuit) if mcms is None else mcms
    return sum(1 for i in mcms if i > after_index and circuit.instructions[i].qubits[0] == qubit)


# Path and SWAP metrics
# ---------------------
def critical_path_length(circuit: Circuit) -> int:
    """Longest dependency chain counted in instructions; barriers and delays weigh nothing."""
    dag = build_dag(circuit)
    longest: Dict[int, int] = {}
    for node in nx.topological_sort(dag):
        weight = 0 if circuit.instructions[node].is_directive else 1
        longest[node] = weight + max((longest[p] for p in dag.predecessors(node)), default=0)
    return max(longest.values(), default=0)


def count_swaps(circuit: Circuit) -> int:
    return sum(1 for ins in circuit.instructions if ins.kind == Op.SWAP)


def two_qubit_layers(circuit: Circuit) -> List[List[int]]:
    """Group 2Q gates by the number of 2Q gates on their longest dependency chain."""
    dag = build_dag(circuit)
    level: Dict[int, int] = {}
    layers: List[List[int]] = []
    for node in nx.topological_sort(dag):
        base = max((level[p] for p in dag.predecessors(node)), default=0)
        if circuit.instructions[node].is_two_qubit:
            while len(layers) <= base:
                layers.append([])
            layers[base].append(node)
            level[node] = base + 1
        else:
            level[node] = base
    return [sorted(layer) for layer in layers]


# Layout analysis bundle
# ----------------------
@dataclass(frozen=True)
class CircuitAnalysis:
    num_qubits: int
    interaction: InteractionGraph
    intensity: np.ndarray
    n1q: np.ndarray
    n2q: np.ndarray
    nro: np.ndarray
    degree: np.ndarray
    window_pairs: np.ndarray
    look_ahead: int


def analyze(circuit: Circuit, look_ahead: int = LOOK_AHEAD) -> CircuitAnalysis:
    n = circuit.num_qubits
    n1q = np.zeros(n, dtype=int)
    n2q = np.zeros(n, dtype=int)
    nro = np.zeros(n, dtype=int)
    for ins in circuit.instructions:
        if ins.is_single_qubit_gate:
            n1q[ins.qubits[0]] += 1
        elif ins.is_two_qubit:
            for q in ins.qubits:
                n2q[q] += 1
        elif ins.kind == Op.MEASURE:
            nro[ins.qubits[0]] += 1
    graph = interaction_graph(circuit)
    degree = np.array([graph.degree(q) for q in range(n)], dtype=int)
    window = [circuit.instructions[i].qubits for layer in two_qubit_layers(circuit)[:look_ahead] for i in layer]
    window_pairs = np.array(window, dtype=int).reshape(-1, 2)
    return CircuitAnalysis(
        num_qubits=n,
        interaction=graph,
        intensity=mcm_intensity(circuit),
        n1q=n1q,
        n2q=n2q,
        nro=nro,
        degree=degree,
        window_pairs=window_pairs,
        look_ahead=look_ahead,
    )

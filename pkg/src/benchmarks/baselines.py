import sys
from itertools import islice
from pathlib import Path
from typing import Iterator, List, Sequence, Set, Tuple

import numpy as np

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.analysis import mcm_intensity
from src.circuit.ir import Circuit
from src.config import EXHAUSTIVE_SUBGRAPH_LIMIT
from src.device.model import DeviceModel
from src.exceptions import DeviceTooSmall
from src.layout.mera_layout import Layout
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('baselines_logger', 'logs', 'baselines.log')


def connected_subsets(device: DeviceModel, k: int) -> Iterator[Tuple[int, ...]]:
    """Every connected k-subset of physical qubits exactly once (ESU enumeration)."""
    graph = device.graph

    def extend(subset: Set[int], frontier: List[int], root: int):
        if len(subset) == k:
            yield tuple(sorted(subset))
            return
        frontier = sorted(frontier)
        closed = subset | {n for p in subset for n in graph.neighbors(p)}
        while frontier:
            w = frontier.pop(0)
            exclusive = [n for n in graph.neighbors(w) if n > root and n not in closed and n not in frontier]
            yield from extend(subset | {w}, frontier + exclusive, root)

    if k <= 0:
        return
    for root in range(device.num_qubits):
        yield from extend({root}, [n for n in graph.neighbors(root) if n > root], root)


def grown_subsets(device: DeviceModel, k: int) -> List[Tuple[int, ...]]:
    """Greedy growth from every qubit, always adding the highest-error neighbour."""
    found: List[Tuple[int, ...]] = []
    for seed in range(device.num_qubits):
        subset = {seed}
        while len(subset) < k:
            border = {n for p in subset for n in device.neighbors(p)} - subset
            if not border:
                break
            subset.add(max(border, key=lambda p: (device.mcm_error[p], -p)))
        members = tuple(sorted(subset))
        if len(members) == k and members not in found:
            found.append(members)
    return found


def hot_assignment(subset: Sequence[int], intensity: np.ndarray, device: DeviceModel) -> Tuple[float, dict]:
    """Pair logical qubits by descending intensity with physical qubits by descending MCM error."""
    logicals = sorted(range(len(intensity)), key=lambda q: (-int(intensity[q]), q))
    physicals = sorted(subset, key=lambda p: (-device.mcm_error[p], p))
    mapping = dict(zip(logicals, physicals))
    score = float(sum(intensity[q] * device.mcm_error[p] for q, p in mapping.items()))
    return score, mapping


def worst_mapping(circuit: Circuit, device: DeviceModel) -> Layout:
    """Contiguous placement with the highest cumulative MCM cost."""
    k = circuit.num_qubits
    if k > device.num_qubits:
        raise DeviceTooSmall(f"{k} logical qubits do not fit on {device.num_qubits} physical qubits")
    # Raises DisconnectedDevice
    device.distances
    intensity = mcm_intensity(circuit)
    subsets = list(islice(connected_subsets(device, k), EXHAUSTIVE_SUBGRAPH_LIMIT + 1))
    if len(subsets) > EXHAUSTIVE_SUBGRAPH_LIMIT:
        logger.info(f"More than {EXHAUSTIVE_SUBGRAPH_LIMIT} connected {k}-subsets; growing greedily from each qubit")
        subsets = grown_subsets(device, k)
    best_score, best_mapping = -1.0, {}
    for subset in subsets:
        score, mapping = hot_assignment(subset, intensity, device)
        if score > best_score:
            best_score, best_mapping = score, mapping
    logger.info(f"Worst mapping {best_mapping} with MCM cost {best_score:.6f}")
    return Layout(k, device.num_qubits, best_mapping)

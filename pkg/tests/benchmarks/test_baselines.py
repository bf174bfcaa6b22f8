from itertools import combinations

import networkx as nx
import pytest

from src.benchmarks.baselines import connected_subsets, grown_subsets, hot_assignment, worst_mapping
from src.benchmarks.generators import bv_reuse, ghz, rus
from src.circuit.analysis import mcm_intensity
from src.device.error_map import uniform_device
from src.device.topology import Topology, grid, small_hex
from src.exceptions import DeviceTooSmall, DisconnectedDevice


def brute_force_subsets(device, k):
    return {
        subset for subset in combinations(range(device.num_qubits), k)
        if nx.is_connected(device.graph.subgraph(subset))
    }


@pytest.mark.parametrize('topology, k', [(small_hex(), k) for k in range(1, 6)] + [(grid(3, 3), 3), (grid(3, 3), 4)])
def test_enumeration_matches_brute_force(topology, k):
    device = uniform_device(topology)
    found = list(connected_subsets(device, k))
    assert len(found) == len(set(found))
    assert set(found) == brute_force_subsets(device, k)


def test_grown_subsets_are_connected(eagle_device):
    for subset in grown_subsets(eagle_device, 8):
        assert len(subset) == 8
        assert nx.is_connected(eagle_device.graph.subgraph(subset))


def test_hot_assignment_pairs_intensive_with_noisy(small_hex_device):
    score, mapping = hot_assignment((1, 5), [2, 0], small_hex_device)
    assert mapping == {0: 5, 1: 1}
    assert score == pytest.approx(2 * 0.12)


def test_worst_mapping_matches_exhaustive_search(small_hex_device):
    for circuit in (bv_reuse(4, 2), rus(4), ghz(3)):
        intensity = mcm_intensity(circuit)
        worst = worst_mapping(circuit, small_hex_device)
        score = sum(intensity[q] * small_hex_device.mcm_error[p] for q, p in worst.l2p.items())
        best = max(hot_assignment(s, intensity, small_hex_device)[0]
                   for s in brute_force_subsets(small_hex_device, circuit.num_qubits))
        assert worst.is_total
        assert score == pytest.approx(best)
    assert worst_mapping(bv_reuse(4, 2), small_hex_device).l2p == {0: 5, 1: 3}


def test_large_circuits_fall_back_to_growth(eagle_device):
    layout = worst_mapping(rus(18), eagle_device)
    assert layout.is_total
    assert nx.is_connected(eagle_device.graph.subgraph(layout.l2p.values()))


def test_worst_mapping_errors(small_hex_device):
    with pytest.raises(DeviceTooSmall):
        worst_mapping(ghz(8), small_hex_device)
    split = uniform_device(Topology('split', 4, ((0, 1), (2, 3))))
    with pytest.raises(DisconnectedDevice):
        worst_mapping(ghz(2), split)

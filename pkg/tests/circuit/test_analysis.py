import numpy as np

from src.circuit.analysis import (analyze, critical_path_length, count_swaps, fused_resets, interaction_graph,
                                  mcm_indices, mcm_intensity, remaining_mcm_intensity, two_qubit_layers)
from src.circuit.ir import CircuitBuilder


def reuse_circuit():
    # q0 is measured and reused twice; q1 is measured once at the end
    b = CircuitBuilder(2, 3)
    b.h(0).cx(0, 1).measure(0, 0).reset(0)
    b.h(0).cx(0, 1).measure(0, 1).reset(0)
    b.h(0).measure(0, 2).measure(1, 2)
    return b.build()


def test_ghz_interaction_graph_is_a_path():
    b = CircuitBuilder(4, 0).h(0)
    for q in range(3):
        b.cx(q, q + 1)
    graph = interaction_graph(b.build())
    assert graph.edges == {(0, 1): 1, (1, 2): 1, (2, 3): 1}
    assert graph.degree(1) == 2
    assert graph.neighbors(1) == [0, 2]


def test_terminal_measures_are_not_mcms():
    circuit = reuse_circuit()
    assert mcm_indices(circuit) == {2, 6}
    assert list(mcm_intensity(circuit)) == [2, 0]


def test_measure_followed_by_barrier_only_is_terminal():
    circuit = CircuitBuilder(1, 1).measure(0, 0).barrier(0).build()
    assert mcm_indices(circuit) == set()


def test_fused_resets_pair_measure_with_next_reset():
    circuit = reuse_circuit()
    assert fused_resets(circuit) == {2: 3, 6: 7}


def test_remaining_intensity_counts_later_mcms_only():
    circuit = reuse_circuit()
    assert remaining_mcm_intensity(circuit, 0, -1) == 2
    assert remaining_mcm_intensity(circuit, 0, 2) == 1
    assert remaining_mcm_intensity(circuit, 0, 6) == 0
    assert remaining_mcm_intensity(circuit, 1, -1) == 0


def test_critical_path_ignores_barriers():
    circuit = CircuitBuilder(1, 0).h(0).barrier(0).h(0).build()
    assert critical_path_length(circuit) == 2


def test_count_swaps_and_layers():
    circuit = CircuitBuilder(3, 0).cx(0, 1).swap(1, 2).cx(0, 1).build()
    assert count_swaps(circuit) == 1
    assert two_qubit_layers(circuit) == [[0], [1], [2]]


def test_analyze_bundle_counts():
    analysis = analyze(reuse_circuit(), look_ahead=1)
    assert list(analysis.n1q) == [3, 0]
    assert list(analysis.n2q) == [2, 2]
    assert list(analysis.nro) == [3, 1]
    assert list(analysis.intensity) == [2, 0]
    assert analysis.window_pairs.tolist() == [[0, 1]]
    assert np.array_equal(analysis.degree, [2, 2])

import pytest

from src.circuit.ir import CircuitBuilder
from src.device.error_map import uniform_device
from src.device.topology import line
from src.exceptions import EmptyCounts, NotRUS
from src.simulation.metrics import attempts_metric, estimated_success_probability, hellinger_fidelity
from src.simulation.simulator import ShotCounts


@pytest.mark.parametrize('a, b, expected', [
    ({'0': 10}, {'0': 1.0}, 1.0),
    ({'0': 1}, {'0': 0.5, '1': 0.5}, 0.5),
    ({'00': 5}, {'11': 5}, 0.0),
    ({'0': 1, '1': 3}, {'0': 0.25, '1': 0.75}, 1.0),
])
def test_hellinger_fidelity(a, b, expected):
    assert hellinger_fidelity(a, b) == pytest.approx(expected)


def test_hellinger_accepts_shot_counts():
    counts = ShotCounts({'01': 50, '10': 50}, shots=100)
    assert hellinger_fidelity(counts, {'01': 1.0}) == pytest.approx(0.5)


def test_empty_histogram():
    with pytest.raises(EmptyCounts):
        hellinger_fidelity({}, {'0': 1.0})


def test_attempts_needs_rus_blocks():
    circuit = CircuitBuilder(1, 1).measure(0, 0).build()
    with pytest.raises(NotRUS):
        attempts_metric(circuit, ShotCounts({'0': 1}, 1, mcm_executions=(0,)))


def test_esp_multiplies_operation_successes():
    device = uniform_device(line(2), mcm_error=0.1, e1q=0.01, e2q=0.02, readout_error=0.05)
    terminal = CircuitBuilder(2, 1).h(0).cx(0, 1).measure(0, 0).build()
    assert estimated_success_probability(terminal, device) == pytest.approx(0.99 * 0.98 * 0.95)
    mid = CircuitBuilder(1, 1).h(0).measure(0, 0).h(0).build()
    assert estimated_success_probability(mid, device) == pytest.approx(0.99 * 0.95 * 0.9 * 0.99)
    swapped = CircuitBuilder(2, 0).swap(0, 1).build()
    assert estimated_success_probability(swapped, device) == pytest.approx(0.98 ** 3)

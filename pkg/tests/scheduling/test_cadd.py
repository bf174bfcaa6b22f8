import pytest

from src.circuit.ir import CircuitBuilder
from src.config import DD_LABEL
from src.device.error_map import uniform_device
from src.device.topology import line
from src.exceptions import InvariantViolation
from src.scheduling.alap import alap_schedule, build_schedule, validate
from src.scheduling.cadd import cadd_insert, validate_dd
from src.simulation.simulator import exact_distribution


@pytest.fixture
def device():
    return uniform_device(line(2))


def mcm_next_door():
    return (CircuitBuilder(2, 2).h(0).cx(0, 1).measure(1, 0).reset(1).cx(0, 1)
            .measure(0, 1).build())


def test_pulse_pair_fills_window_next_to_mcm(device):
    schedule = cadd_insert(alap_schedule(mcm_next_door(), device), device)
    pulses = [i for i, ins in enumerate(schedule.circuit) if ins.label == DD_LABEL]
    assert schedule.dd_count == 2
    assert all(schedule.circuit[i].qubits == (0,) for i in pulses)
    assert [schedule.starts[i] for i in pulses] == [1370, 2610]
    assert all(w.dd for w in schedule.idle_windows[0] if w.start >= 720 and w.end <= 3320)
    validate(schedule)
    validate_dd(schedule)


def test_pulses_are_emitted_in_time_order(device):
    schedule = cadd_insert(alap_schedule(mcm_next_door(), device), device)
    assert list(schedule.starts) == sorted(schedule.starts)
    assert schedule.total == alap_schedule(mcm_next_door(), device).total


def test_short_quiet_window_gets_no_pulses(device):
    circuit = CircuitBuilder(2, 0).cx(0, 1).h(1).h(1).h(1).h(1).h(1).cx(0, 1).build()
    schedule = cadd_insert(alap_schedule(circuit, device), device)
    assert schedule.dd_count == 0


def test_decoupling_preserves_the_noiseless_distribution(device):
    circuit = mcm_next_door()
    schedule = cadd_insert(alap_schedule(circuit, device), device)
    assert exact_distribution(schedule.circuit) == pytest.approx(exact_distribution(circuit))


def test_validate_dd_rejects_pulse_inside_own_mcm(device):
    circuit = CircuitBuilder(1, 1).h(0).measure(0, 0).reset(0).h(0).build()
    schedule = alap_schedule(circuit, device)
    bad = CircuitBuilder(1, 1).h(0).measure(0, 0).x(0, label=DD_LABEL).x(0, label=DD_LABEL).reset(0).h(0).build()
    broken = build_schedule(bad, [0, 60, 100, 200, 1460, 2660], [60, 1400, 60, 60, 1200, 60], schedule.total,
                            device, {})
    with pytest.raises(InvariantViolation, match='overlaps'):
        validate_dd(broken)


def test_validate_dd_rejects_odd_counts(device):
    circuit = CircuitBuilder(1, 0).h(0).x(0, label=DD_LABEL).h(0).build()
    schedule = build_schedule(circuit, [0, 100, 200], [60, 60, 60], 260, device, {})
    with pytest.raises(InvariantViolation, match='odd'):
        validate_dd(schedule)

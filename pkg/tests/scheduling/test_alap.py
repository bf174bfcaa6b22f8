import json
from dataclasses import replace

import pytest

from src.circuit.ir import CircuitBuilder
from src.device.error_map import uniform_device
from src.device.topology import line
from src.exceptions import InvariantViolation
from src.scheduling.alap import (SCHEDULERS, alap_schedule, asap_schedule, asap_starts, dump_schedule,
                                 instruction_duration, validate)


@pytest.fixture
def device():
    return uniform_device(line(2))


def test_alap_delays_off_critical_path_gates(device):
    circuit = CircuitBuilder(2, 0).h(0).h(1).h(1).h(1).cx(0, 1).build()
    starts, total = asap_starts(circuit, device)
    schedule = alap_schedule(circuit, device)
    assert starts[0] == 0
    assert schedule.starts[0] == 120
    assert schedule.total == total == 180 + 660
    validate(schedule)


def test_asap_policy_starts_early_with_the_same_makespan(device):
    circuit = CircuitBuilder(2, 0).h(0).h(1).h(1).h(1).cx(0, 1).build()
    early = asap_schedule(circuit, device)
    late = SCHEDULERS['alap'](circuit, device)
    assert early.starts[0] == 0
    assert early.total == late.total
    assert all(a <= b for a, b in zip(early.starts, late.starts))
    validate(early)


def test_measure_and_reset_stay_fused(device):
    circuit = CircuitBuilder(1, 1).h(0).measure(0, 0).reset(0).h(0).build()
    schedule = alap_schedule(circuit, device)
    assert schedule.fused == {1: 2}
    assert schedule.starts == (0, 60, 1460, 2660)
    window = schedule.mcm_windows[0]
    assert (window.qubit, window.start, window.end) == (0, 60, 2660)


def test_idle_window_next_to_neighbour_mcm(device):
    circuit = CircuitBuilder(2, 1).cx(0, 1).measure(1, 0).reset(1).cx(0, 1).build()
    schedule = alap_schedule(circuit, device)
    [window] = schedule.idle_windows[0]
    assert (window.start, window.end) == (660, 3260)
    assert window.neighbor_mcm and window.concurrent_mcm
    assert window.next_index == 3
    assert schedule.window_at(0, 1000) == window
    assert schedule.window_at(1, 1000) is None


def test_directives_take_no_time(device):
    circuit = CircuitBuilder(1, 0).h(0).barrier(0).delay(300, 0).h(0).build()
    assert [instruction_duration(ins, device) for ins in circuit] == [60, 0, 300, 60]
    assert alap_schedule(circuit, device).total == 420


def test_validate_catches_overlaps(device):
    circuit = CircuitBuilder(1, 0).h(0).h(0).build()
    schedule = alap_schedule(circuit, device)
    with pytest.raises(InvariantViolation):
        validate(replace(schedule, starts=(0, 30)))
    with pytest.raises(InvariantViolation):
        validate(replace(schedule, total=60))


def test_dump_schedule(device, tmp_path):
    circuit = CircuitBuilder(2, 1).cx(0, 1).measure(1, 0).reset(1).cx(0, 1).build()
    path = tmp_path / 'timeline.json'
    dump_schedule(alap_schedule(circuit, device), path)
    timeline = json.loads(path.read_text())
    assert timeline['time_unit'] == 'ns'
    assert timeline['total'] == 3920
    assert [entry['op'] for entry in timeline['instructions']] == ['cx', 'measure', 'reset', 'cx']
    assert len(timeline['idle_windows']) == 1

import numpy as np
import pytest

from src.circuit.ir import Op
from src.device.error_map import uniform_device
from src.device.topology import line
from src.exceptions import CircuitError, InvariantViolation, ZeroShots
from src.profiling.profiler import ProfilingReport, build_profiling_circuit, estimate_mcm_errors, profile_device
from src.simulation.noise import NoiseChannelSet
from src.simulation.simulator import ShotCounts

MCM_ONLY = {'gate': False, 'readout': False, 'idle': False, 'crosstalk': False}


def test_profiling_circuit_layout():
    circuit = build_profiling_circuit([2, 0], num_qubits=4)
    assert circuit.num_qubits == 4 and circuit.num_clbits == 4
    assert [ins.kind for ins in circuit] == [Op.X, Op.X, Op.MEASURE, Op.MEASURE, Op.RESET, Op.RESET,
                                              Op.MEASURE, Op.MEASURE]
    assert [(ins.qubits[0], ins.clbit) for ins in circuit if ins.kind == Op.MEASURE] == \
        [(2, 0), (0, 2), (2, 1), (0, 3)]
    with pytest.raises(CircuitError):
        build_profiling_circuit([1, 1])


def test_estimates_read_the_final_measurements():
    counts = ShotCounts({'0000': 6, '1000': 3, '0010': 1}, shots=10)
    report = estimate_mcm_errors(counts, [4, 7], 'dev')
    assert report.qubits == (4, 7)
    assert report.estimates == pytest.approx((0.1, 0.3))
    assert all(lo <= e <= hi for lo, e, hi in zip(report.ci_low, report.estimates, report.ci_high))


def test_injected_errors_are_recovered():
    truth = [0.02, 0.1, 0.3]
    device = uniform_device(line(3)).with_mcm_errors(truth)
    channels = NoiseChannelSet.from_device(device, MCM_ONLY)
    shots = 4000
    report = profile_device(device, shots=shots, seed=4, channels=channels)
    for estimate, p in zip(report.estimates, truth):
        assert abs(estimate - p) <= 4 * np.sqrt(p * (1 - p) / shots)


def test_profiling_runs_in_batches():
    device = uniform_device(line(9))
    report = profile_device(device, shots=64, seed=0, channels=NoiseChannelSet.from_device(device, MCM_ONLY))
    assert report.qubits == tuple(range(9))
    assert report.estimates == (0.0,) * 9


def test_report_save_and_load(tmp_path):
    report = ProfilingReport('dev', (0, 3), (0.05, 0.2), 1000, '2025-01-01T00:00:00+00:00',
                             (0.04, 0.18), (0.06, 0.22))
    path = tmp_path / 'report.json'
    report.save(path)
    loaded = ProfilingReport.load(path)
    assert loaded.qubits == report.qubits
    assert loaded.estimates == report.estimates
    assert loaded.ci_high == report.ci_high
    assert list(report.to_frame().columns) == ['qubit', 'mcm_error', 'ci_low', 'ci_high', 'shots']


def test_report_validation():
    with pytest.raises(ZeroShots):
        ProfilingReport('dev', (0,), (0.1,), 0, 'now')
    with pytest.raises(InvariantViolation):
        ProfilingReport('dev', (0,), (1.5,), 10, 'now')


@pytest.mark.slow
def test_estimates_stay_within_three_sigma_across_seeds():
    truth = [0.01, 0.05, 0.10, 0.30]
    device = uniform_device(line(4)).with_mcm_errors(truth)
    channels = NoiseChannelSet.from_device(device, MCM_ONLY)
    shots = 1024
    hits = np.zeros(len(truth))
    for seed in range(100):
        report = profile_device(device, shots=shots, seed=seed, channels=channels)
        for i, (estimate, p) in enumerate(zip(report.estimates, truth)):
            hits[i] += abs(estimate - p) <= 3 * np.sqrt(p * (1 - p) / shots)
    assert (hits >= 95).all()

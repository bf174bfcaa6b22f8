import pytest

from src.benchmarks.generators import bv_reuse, rus
from src.circuit.ir import CircuitBuilder
from src.device.error_map import uniform_device
from src.device.topology import line
from src.exceptions import CircuitError, InvariantViolation, TooManyQubits, ZeroShots
from src.simulation.noise import NoiseChannelSet
from src.simulation.simulator import Loop, ShotCounts, build_plan, exact_distribution, run

READOUT_ONLY = {'gate': False, 'mcm': False, 'idle': False, 'crosstalk': False}


def coin_until_zero(max_repeats=16):
    builder = CircuitBuilder(1, 1)
    with builder.rus('coin', [0], flag_clbit=0, success_value=0, max_repeats=max_repeats):
        builder.h(0).measure(0, 0).reset(0)
    return builder.build()


def test_noiseless_run_matches_exact_distribution():
    circuit = bv_reuse(4, 2)
    assert exact_distribution(circuit) == {'111': pytest.approx(1.0)}
    counts = run(circuit, shots=200, seed=1)
    assert counts.counts == {'111': 200}


def test_rus_benchmark_succeeds_first_time_without_noise():
    circuit = rus(4)
    counts = run(circuit, shots=50, seed=0)
    assert counts.counts == {'000000': 50}
    assert set(counts.mcm_executions) == {10}


def test_rus_loop_repeats_until_success():
    circuit = coin_until_zero()
    exact = exact_distribution(circuit)
    assert exact['0'] == pytest.approx(1 - 2 ** -16)
    counts = run(circuit, shots=2000, seed=5)
    assert counts.counts.get('0', 0) >= 1999
    mean_attempts = sum(counts.mcm_executions) / counts.shots
    assert 1.8 < mean_attempts < 2.2


def test_repeat_cap_bounds_the_loop():
    counts = run(coin_until_zero(max_repeats=1), shots=2000, seed=2)
    assert 0.45 < counts.counts['1'] / 2000 < 0.55
    assert max(counts.mcm_executions) == 1


def test_plan_nests_block_members():
    plan = build_plan(coin_until_zero())
    assert len(plan) == 1 and isinstance(plan[0], Loop)
    assert plan[0].body == (0, 1, 2, 3, 4)


def test_unterminated_block_is_rejected():
    circuit = coin_until_zero()
    with pytest.raises(CircuitError):
        build_plan(circuit.with_instructions(circuit.instructions[:-1]))


def test_counts_do_not_depend_on_worker_split():
    device = uniform_device(line(2), mcm_error=0.05, e2q=0.02, readout_error=0.03)
    circuit = CircuitBuilder(2, 2).h(0).cx(0, 1).measure(0, 0).reset(0).measure(1, 1).build()
    serial = run(circuit, device, shots=300, seed=11, n_jobs=1)
    parallel = run(circuit, device, shots=300, seed=11, n_jobs=2)
    assert serial.counts == parallel.counts
    assert run(circuit, device, shots=300, seed=12).counts != serial.counts


def test_readout_error_rate():
    device = uniform_device(line(1), readout_error=0.1)
    channels = NoiseChannelSet.from_device(device, READOUT_ONLY)
    circuit = CircuitBuilder(1, 1).x(0).measure(0, 0).build()
    counts = run(circuit, device, channels, shots=4000, seed=3)
    assert counts.counts['0'] / 4000 == pytest.approx(0.1, abs=0.03)


def test_only_touched_qubits_are_simulated():
    circuit = CircuitBuilder(40, 1).x(37).measure(37, 0).build()
    assert run(circuit, shots=10).counts == {'1': 10}
    wide = CircuitBuilder(15, 0)
    for q in range(15):
        wide.h(q)
    with pytest.raises(TooManyQubits):
        run(wide.build(), shots=1)


def test_bad_arguments():
    circuit = CircuitBuilder(1, 1).measure(0, 0).build()
    with pytest.raises(ZeroShots):
        run(circuit, shots=0)
    with pytest.raises(InvariantViolation):
        ShotCounts({'0': 3}, shots=4)


def test_shot_counts_serialization():
    counts = ShotCounts({'1': 1, '0': 3}, shots=4, seed=9, mcm_executions=(1, 0, 2, 0))
    assert counts.to_dict() == {'shots': 4, 'seed': 9, 'counts': {'0': 3, '1': 1}, 'mcm_executions': 3}
    assert counts.probabilities() == {'1': 0.25, '0': 0.75}

import pytest

from src.benchmarks.generators import (BenchmarkSpec, bundled_qasm, bv_reuse, gen_benchmark, ghz, h_ladder,
                                       parse_benchmark, rus)
from src.circuit.analysis import critical_path_length, mcm_intensity
from src.circuit.ir import Op
from src.config import RUS_SIZES
from src.exceptions import InvalidSpec
from src.simulation.simulator import exact_distribution


@pytest.mark.parametrize('k', RUS_SIZES)
def test_rus_path_is_independent_of_size(k):
    circuit = rus(k)
    assert circuit.num_qubits == k
    assert critical_path_length(circuit) == 28
    assert len(circuit.rus_blocks) == 5 * k // 2
    assert mcm_intensity(circuit).tolist() == [0, 5] * (k // 2)


def test_rus_ideal_outcome_is_all_zeros():
    assert exact_distribution(rus(4)) == {'000000': pytest.approx(1.0)}


def test_bv_reuse_structure():
    circuit = bv_reuse(4, 2)
    assert (circuit.num_qubits, circuit.num_clbits) == (2, 3)
    assert critical_path_length(circuit) == 15
    assert mcm_intensity(circuit).tolist() == [2, 0]
    assert exact_distribution(circuit) == {'111': pytest.approx(1.0)}


def test_bv_reuse_round_robin_over_workers():
    circuit = bv_reuse(6, 3)
    measured = [ins.qubits[0] for ins in circuit if ins.kind == Op.MEASURE]
    assert measured == [0, 1, 0, 1, 0]
    assert mcm_intensity(circuit).tolist() == [2, 1, 0]
    assert exact_distribution(circuit) == {'11111': pytest.approx(1.0)}


def test_h_ladder_structure():
    circuit = h_ladder(3, 2)
    assert (circuit.num_qubits, circuit.num_clbits) == (2, 3)
    assert critical_path_length(circuit) == 24
    assert mcm_intensity(circuit).tolist() == [1, 0]


def test_ghz_distribution():
    assert critical_path_length(ghz(5)) == 6
    assert exact_distribution(ghz(3)) == {'000': pytest.approx(0.5), '111': pytest.approx(0.5)}


def test_bundled_ipea_reads_its_phase():
    ipea = next(p for p in bundled_qasm() if p.stem == 'ipea_3bit')
    assert exact_distribution(gen_benchmark(parse_benchmark(str(ipea))))['101'] == pytest.approx(1.0)


@pytest.mark.parametrize('text, name, logical, physical', [
    ('rus(4)', 'rus(4)', 4, 4),
    (' bv_reuse( 4 , 2 ) ', 'bv_reuse(4,2)', 4, 2),
    ('h_ladder(3,2)', 'h_ladder(3,2)', 3, 2),
    ('ghz(5)', 'ghz(5)', 5, 5),
])
def test_parse_benchmark(text, name, logical, physical):
    spec = parse_benchmark(text)
    assert (spec.name, spec.logical_qubits, spec.physical_qubits) == (name, logical, physical)


def test_parse_relative_qasm_path():
    spec = parse_benchmark('benchmarks/shor5_standin.qasm')
    assert spec.family == 'qasm' and spec.name == 'shor5_standin'
    assert gen_benchmark(spec).num_qubits == 5


@pytest.mark.parametrize('text', ['rus(3)', 'rus(0)', 'bv_reuse(2,3)', 'h_ladder(4,1)', 'qft(4)', 'rus(4,2)',
                                  'rus', 'ghz(0)'])
def test_invalid_specs(text):
    with pytest.raises(InvalidSpec):
        gen_benchmark(parse_benchmark(text))


def test_missing_qasm_file(tmp_path):
    with pytest.raises(InvalidSpec):
        gen_benchmark(BenchmarkSpec('qasm', (), tmp_path / 'absent.qasm'))

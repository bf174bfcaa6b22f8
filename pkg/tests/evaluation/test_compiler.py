import pytest

from src.benchmarks.generators import bv_reuse, gen_benchmark, parse_benchmark, rus
from src.config import COMPILERS, DEFAULT_SUITE, RUS_SIZES
from src.evaluation.compiler import compile_circuit
from src.exceptions import InvariantViolation
from src.routing.router import check_adjacency
from src.scheduling.alap import validate
from src.scheduling.cadd import validate_dd
from src.simulation.simulator import exact_distribution


@pytest.mark.parametrize('compiler', COMPILERS)
def test_every_pipeline_yields_a_valid_schedule(compiler, small_hex_device):
    circuit = bv_reuse(4, 2)
    result = compile_circuit(circuit, small_hex_device, compiler)
    assert result.compiler == compiler
    assert result.initial_layout.is_total
    check_adjacency(result.routed, small_hex_device)
    validate(result.schedule)
    validate_dd(result.schedule)
    assert exact_distribution(result.scheduled) == pytest.approx(exact_distribution(circuit))
    if compiler != 'mera':
        assert result.schedule.dd_count == 0


def test_worst_pipeline_starts_on_the_noisiest_qubit(small_hex_device):
    result = compile_circuit(bv_reuse(4, 2), small_hex_device, 'worst')
    assert result.initial_layout.physical(0) == 5


def test_mera_avoids_the_noisiest_qubit(small_hex_device):
    result = compile_circuit(bv_reuse(4, 2), small_hex_device, 'mera')
    assert result.initial_layout.physical(0) == 3


@pytest.mark.parametrize('k', RUS_SIZES)
def test_rus_suite_needs_no_swaps(k, eagle_device):
    for compiler in ('mera', 'distance-only'):
        result = compile_circuit(rus(k), eagle_device, compiler)
        assert result.swaps == 0
        assert result.path == 28


@pytest.mark.parametrize('text', DEFAULT_SUITE)
def test_suite_compiles_quickly(text, eagle_device):
    result = compile_circuit(gen_benchmark(parse_benchmark(text)), eagle_device, 'mera')
    assert result.compile_time_s < 2.0


def test_unknown_compiler(small_hex_device):
    with pytest.raises(InvariantViolation):
        compile_circuit(bv_reuse(4, 2), small_hex_device, 'qiskit')


def test_layout_and_dd_overrides(small_hex_device):
    result = compile_circuit(bv_reuse(4, 2), small_hex_device, 'mera', layout_method='trivial', dd='none')
    assert result.initial_layout.l2p == {0: 0, 1: 1}
    assert result.schedule.dd_count == 0

    worst = compile_circuit(bv_reuse(4, 2), small_hex_device, 'mera-no-cadd', layout_method='worst')
    assert worst.initial_layout.physical(0) == 5


def test_unknown_overrides(small_hex_device):
    with pytest.raises(InvariantViolation):
        compile_circuit(bv_reuse(4, 2), small_hex_device, 'mera', layout_method='random')
    with pytest.raises(InvariantViolation):
        compile_circuit(bv_reuse(4, 2), small_hex_device, 'mera', dd='xy4')
    with pytest.raises(InvariantViolation):
        compile_circuit(bv_reuse(4, 2), small_hex_device, 'mera', scheduling='greedy')


def test_asap_scheduling_keeps_the_makespan(small_hex_device):
    late = compile_circuit(rus(2), small_hex_device, 'mera-no-cadd')
    early = compile_circuit(rus(2), small_hex_device, 'mera-no-cadd', scheduling='asap')
    validate(early.schedule)
    assert early.schedule.total == late.schedule.total
    assert all(a <= b for a, b in zip(early.schedule.starts, late.schedule.starts))

import pytest

from src.circuit.ir import Circuit, CircuitBuilder, Instruction, Op, rus_marker
from src.exceptions import CircuitError


def test_builder_produces_instructions_in_order():
    circuit = CircuitBuilder(2, 1).h(0).cx(0, 1).measure(1, 0).build()
    assert [ins.kind for ins in circuit] == [Op.H, Op.CX, Op.MEASURE]
    assert circuit[1].qubits == (0, 1)
    assert circuit.used_qubits() == [0, 1]


@pytest.mark.parametrize('kwargs', [
    dict(kind=Op.CX, qubits=(0,)),
    dict(kind=Op.H, qubits=(0, 1)),
    dict(kind=Op.CX, qubits=(1, 1)),
    dict(kind=Op.RZ, qubits=(0,)),
    dict(kind=Op.H, qubits=(0,), params=(1.0,)),
    dict(kind=Op.MEASURE, qubits=(0,)),
    dict(kind=Op.X, qubits=(0,), clbit=0),
    dict(kind=Op.DELAY, qubits=(0,)),
    dict(kind=Op.BARRIER, qubits=(0,), condition=(0, 1)),
    dict(kind=Op.X, qubits=(0,), condition=(0, 2)),
])
def test_malformed_instructions_are_rejected(kwargs):
    with pytest.raises(CircuitError):
        Instruction(**kwargs)


def test_qubit_out_of_range():
    with pytest.raises(CircuitError):
        Circuit(1, 0, (Instruction(Op.CX, (0, 1)),))


def test_condition_must_follow_a_measure():
    with pytest.raises(CircuitError, match='read before'):
        CircuitBuilder(1, 1).x(0, condition=(0, 1)).build()
    CircuitBuilder(1, 1).measure(0, 0).x(0, condition=(0, 1)).build()


def test_rus_context_adds_markers_and_block():
    builder = CircuitBuilder(2, 1)
    with builder.rus('try', (0, 1), flag_clbit=0):
        builder.h(1).measure(1, 0)
    circuit = builder.build()
    assert circuit.is_rus
    assert rus_marker(circuit[0]) == ('begin', 'try')
    assert rus_marker(circuit[-1]) == ('end', 'try')
    assert circuit.rus_block('try').flag_clbit == 0
    assert rus_marker(circuit[1]) is None


def test_rus_block_without_markers_is_rejected():
    builder = CircuitBuilder(1, 1)
    with builder.rus('a', (0,), flag_clbit=0):
        builder.measure(0, 0)
    circuit = builder.build()
    with pytest.raises(CircuitError):
        Circuit(1, 1, circuit.instructions[1:], circuit.rus_blocks)


def test_remap_qubits_moves_every_operand():
    circuit = CircuitBuilder(2, 1).cx(0, 1).measure(1, 0).build()
    mapped = circuit.remap_qubits({0: 4, 1: 2}, 5)
    assert mapped.num_qubits == 5
    assert mapped[0].qubits == (4, 2)
    assert mapped[1].qubits == (2,)
    assert mapped[1].clbit == 0

import math

import numpy as np
import pytest

from src.benchmarks.generators import rus
from src.circuit.ir import CircuitBuilder, Op
from src.qasm.emitter import emit, emit_file, emit_instruction
from src.qasm.parser import parse, parse_file


def test_emit_instruction_forms():
    circuit = CircuitBuilder(2, 1).measure(0, 0).rz(0.5, 1, condition=(0, 1)).delay(120, 0).build()
    lines = [emit_instruction(ins) for ins in circuit]
    assert lines[0] == 'measure q[0] -> c[0];'
    assert lines[1] == 'if (c[0]==1) rz(0.5) q[1];'
    assert lines[2] == 'delay[120ns] q[0];'


def test_emitted_rus_circuit_parses_back_to_the_same_circuit():
    circuit = rus(4)
    assert parse(emit(circuit)) == circuit


def test_emit_file_writes_parseable_qasm(tmp_path):
    circuit = CircuitBuilder(1, 1).ry(math.pi / 3, 0).measure(0, 0).build()
    path = tmp_path / 'out' / 'c.qasm'
    emit_file(circuit, path)
    assert parse_file(path)[0].params[0] == circuit[0].params[0]


ROTATIONS = (Op.RX, Op.RY, Op.RZ)
PLAIN_GATES = (Op.H, Op.X, Op.Y, Op.Z, Op.SX)


def random_dynamic_circuit(rng, num_qubits, num_clbits, depth=30):
    """Mix of conditioned gates, delays, labelled barriers, mid-circuit measure/reset and free-angle rotations."""
    builder = CircuitBuilder(num_qubits, num_clbits)
    written = []
    for step in range(depth):
        roll = rng.random()
        q = int(rng.integers(num_qubits))
        label = f"l{step}" if rng.random() < 0.2 else None
        condition = None
        if written and rng.random() < 0.3:
            condition = (int(rng.choice(written)), int(rng.integers(2)))
        if roll < 0.25:
            angle = float(rng.uniform(-4 * math.pi, 4 * math.pi)) * float(10.0 ** rng.integers(-6, 2))
            builder.append(ROTATIONS[int(rng.integers(3))], (q,), params=(angle,), condition=condition, label=label)
        elif roll < 0.4:
            builder.append(PLAIN_GATES[int(rng.integers(5))], (q,), condition=condition, label=label)
        elif roll < 0.55 and num_qubits > 1:
            a, b = rng.choice(num_qubits, size=2, replace=False)
            builder.append(Op.CX, (int(a), int(b)), condition=condition, label=label)
        elif roll < 0.7:
            c = int(rng.integers(num_clbits))
            builder.append(Op.MEASURE, (q,), clbit=c, condition=condition, label=label)
            written.append(c)
        elif roll < 0.8:
            builder.append(Op.RESET, (q,), condition=condition, label=label)
        elif roll < 0.9:
            builder.append(Op.DELAY, (q,), duration=int(rng.integers(0, 5000)), label=label)
        else:
            width = int(rng.integers(1, num_qubits + 1))
            qubits = tuple(int(p) for p in rng.choice(num_qubits, size=width, replace=False))
            builder.append(Op.BARRIER, qubits, label=label)
    return builder.build()


@pytest.mark.parametrize('seed', range(100))
def test_random_dynamic_circuits_parse_back_unchanged(seed):
    rng = np.random.default_rng(seed)
    circuit = random_dynamic_circuit(rng, int(rng.integers(1, 6)), int(rng.integers(1, 4)))
    assert parse(emit(circuit)) == circuit

import sys
from pathlib import Path
from typing import List

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.ir import Circuit, Instruction, Op
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('qasm_emitter_logger', 'logs', 'qasm_emitter.log')

QREG = 'q'
CREG = 'c'


def _qarg(q: int) -> str:
    return f"{QREG}[{q}]"


def emit_instruction(ins: Instruction) -> str:
    """Render one instruction as a QASM statement."""
    kind = ins.kind
    if kind == Op.MEASURE:
        body = f"measure {_qarg(ins.qubits[0])} -> {CREG}[{ins.clbit}];"
    elif kind == Op.BARRIER:
        body = f"barrier {','.join(_qarg(q) for q in ins.qubits)};"
    elif kind == Op.DELAY:
        body = f"delay[{ins.duration}ns] {_qarg(ins.qubits[0])};"
    elif ins.params:
        body = f"{kind.value}({ins.params[0]!r}) {','.join(_qarg(q) for q in ins.qubits)};"
    else:
        body = f"{kind.value} {','.join(_qarg(q) for q in ins.qubits)};"
    if ins.condition is not None:
        bit, value = ins.condition
        body = f"if ({CREG}[{bit}]=={value}) {body}"
    return body


def emit(circuit: Circuit) -> str:
    """Render a circuit; labels and RUS blocks travel as annotations and pragmas."""
    lines: List[str] = ['OPENQASM 2.0;', 'include "qelib1.inc";']
    if circuit.num_qubits:
        lines.append(f"qreg {QREG}[{circuit.num_qubits}];")
    if circuit.num_clbits:
        lines.append(f"creg {CREG}[{circuit.num_clbits}];")
    for block in circuit.rus_blocks:
        lines.append(f"pragma rus {block.name} {block.flag_clbit} {block.success_value} {block.max_repeats}")
    for ins in circuit.instructions:
        if ins.label is not None:
            lines.append(f"@label {ins.label}")
        lines.append(emit_instruction(ins))
    return '\n'.join(lines) + '\n'


def emit_file(circuit: Circuit, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit(circuit), encoding='utf-8')
    logger.info(f"Wrote {len(circuit)} instructions to {path}")

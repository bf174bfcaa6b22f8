"""
Parser for the OpenQASM subset documented in docs/qasm-subset.md.

Registers are flattened into one qubit and one classical index space in declaration
order. Anything outside the subset raises UnsupportedFeature; malformed input raises
QasmSyntaxError; out-of-range indices raise IndexOutOfRange. Every error carries the
SourceSpan of the offending token.
"""
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.ir import Circuit, Instruction, Op, RusBlock
from src.exceptions import CircuitError, IndexOutOfRange, QasmSyntaxError, UnsupportedFeature
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('qasm_parser_logger', 'logs', 'qasm_parser.log')

TOKEN_RE = re.compile(
    r"""
    (?P<BLOCK_COMMENT> /\*.*?\*/)
  | (?P<LINE_COMMENT>  //[^\n]*)
  | (?P<PRAGMA>        pragma[ \t][^\n]*)
  | (?P<ANNOTATION>    @[^\n]*)
  | (?P<ID>            [A-Za-z_][A-Za-z0-9_]*)
  | (?P<NUMBER>        (?:\d+\.\d*|\d*\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<STRING>        "[^"\n]*")
  | (?P<ARROW>         ->)
  | (?P<EQ>            ==)
  | (?P<SYMBOL>        [\[\]();,=*/+\-{}])
  | (?P<NEWLINE>       \n)
  | (?P<SKIP>          [ \t\r]+)
    """,
    re.VERBOSE | re.DOTALL,
)

GATE_KINDS = {
    'h': Op.H, 'x': Op.X, 'y': Op.Y, 'z': Op.Z, 'sx': Op.SX,
    'rx': Op.RX, 'ry': Op.RY, 'rz': Op.RZ,
    'cx': Op.CX, 'CX': Op.CX, 'swap': Op.SWAP,
}
UNSUPPORTED_KEYWORDS = {
    'gate', 'opaque', 'for', 'while', 'def', 'defcal', 'cal', 'input', 'output', 'let',
    'const', 'box', 'switch', 'return', 'break', 'continue', 'else', 'ctrl', 'inv', 'pow',
    'ccx', 'cz', 'cp', 'u', 'u1', 'u2', 'u3', 't', 'tdg', 's', 'sdg', 'id',
}
SUPPORTED_VERSIONS = {'2.0', '3.0', '2', '3'}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    offset: int

    def __str__(self):
        return f"line {self.line}, column {self.column}"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan


def tokenize(text: str) -> Iterator[Token]:
    """Yield tokens with their spans; whitespace and comments are dropped."""
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        span = SourceSpan(line, pos - line_start + 1, pos)
        if match is None:
            raise QasmSyntaxError(span, f"unexpected character {text[pos]!r}")
        kind, value = match.lastgroup, match.group()
        if kind == 'NEWLINE':
            line += 1
            line_start = match.end()
        elif kind == 'BLOCK_COMMENT':
            line += value.count('\n')
            if '\n' in value:
                line_start = pos + value.rfind('\n') + 1
        elif kind not in ('SKIP', 'LINE_COMMENT'):
            yield Token(kind, value, span)
        pos = match.end()


class Parser:
    """Recursive-descent parser producing a flattened Circuit."""

    def __init__(self, text: str):
        self.tokens: List[Token] = list(tokenize(text))
        self.pos = 0
        self.qregs: Dict[str, Tuple[int, int]] = {}
        self.cregs: Dict[str, Tuple[int, int]] = {}
        self.num_qubits = 0
        self.num_clbits = 0
        self.instructions: List[Instruction] = []
        self.rus_blocks: List[RusBlock] = []
        self.written_clbits = set()
        self.pending_label: Optional[str] = None

    # Token helpers
    # -------------
    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def span(self) -> Optional[SourceSpan]:
        token = self.peek()
        if token is not None:
            return token.span
        return self.tokens[-1].span if self.tokens else SourceSpan(1, 1, 0)

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise QasmSyntaxError(self.span(), "unexpected end of input")
        self.pos += 1
        return token

    def accept(self, value: str) -> bool:
        token = self.peek()
        if token is not None and token.value == value:
            self.pos += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        token = self.peek()
        if token is None or token.value != value:
            found = 'end of input' if token is None else repr(token.value)
            raise QasmSyntaxError(self.span(), f"expected '{value}', found {found}")
        self.pos += 1
        return token

    def expect_kind(self, kind: str) -> Token:
        token = self.peek()
        if token is None or token.kind != kind:
            found = 'end of input' if token is None else repr(token.value)
            raise QasmSyntaxError(self.span(), f"expected {kind.lower()}, found {found}")
        self.pos += 1
        return token

    def expect_int(self) -> int:
        token = self.expect_kind('NUMBER')
        if not token.value.isdigit():
            raise QasmSyntaxError(token.span, f"expected integer, found {token.value!r}")
        return int(token.value)

    # Program
    # -------
    def parse(self) -> Circuit:
        self.parse_header()
        while self.peek() is not None:
            self.parse_statement()
        if self.pending_label is not None:
            raise QasmSyntaxError(self.span(), "annotation is not followed by a statement")
        try:
            return Circuit(self.num_qubits, self.num_clbits, tuple(self.instructions), tuple(self.rus_blocks))
        except CircuitError as e:
            raise QasmSyntaxError(self.span(), str(e)) from e

    def parse_header(self):
        token = self.peek()
        if token is not None and token.value == 'OPENQASM':
            self.advance()
            version = self.expect_kind('NUMBER')
            if version.value not in SUPPORTED_VERSIONS:
                raise UnsupportedFeature(version.span, f"OPENQASM {version.value}")
            self.expect(';')

    def parse_statement(self):
        token = self.peek()
        if token.kind == 'PRAGMA':
            self.advance()
            self.parse_pragma(token)
            return
        if token.kind == 'ANNOTATION':
            self.advance()
            self.parse_annotation(token)
            return
        if token.kind != 'ID':
            raise QasmSyntaxError(token.span, f"unexpected {token.value!r}")
        keyword = token.value
        if keyword == 'OPENQASM':
            raise QasmSyntaxError(token.span, "version header must come first")
        if keyword == 'include':
            self.parse_include()
        elif keyword in ('qreg', 'creg'):
            self.parse_register_decl()
        elif keyword in ('qubit', 'bit'):
            self.parse_typed_decl()
        elif keyword == 'measure':
            self.advance()
            self.parse_measure_arrow(condition=None)
        elif keyword == 'if':
            self.parse_if()
        elif keyword in self.cregs and self.peek(1) is not None and self.peek(1).value in ('[', '='):
            self.parse_measure_assign()
        else:
            self.parse_operation(condition=None)

    def parse_pragma(self, token: Token):
        words = token.value.split()
        if len(words) >= 2 and words[1] == 'rus':
            if len(words) != 6:
                raise QasmSyntaxError(token.span, "pragma rus expects: name flag_clbit success_value max_repeats")
            try:
                block = RusBlock(words[2], int(words[3]), int(words[4]), int(words[5]))
            except ValueError:
                raise QasmSyntaxError(token.span, "pragma rus fields must be integers")
            self.rus_blocks.append(block)
        else:
            logger.warning(f"Ignoring pragma at {token.span}: {token.value}")

    def parse_annotation(self, token: Token):
        words = token.value[1:].split(maxsplit=1)
        if not words or words[0] != 'label' or len(words) != 2:
            raise UnsupportedFeature(token.span, token.value)
        self.pending_label = words[1].strip()

    def parse_include(self):
        self.advance()
        name = self.expect_kind('STRING')
        if name.value.strip('"') != 'qelib1.inc' and name.value.strip('"') != 'stdgates.inc':
            raise UnsupportedFeature(name.span, f"include {name.value}")
        self.expect(';')

    def _declare(self, is_quantum: bool, name_token: Token, size: int):
        registers = self.qregs if is_quantum else self.cregs
        if name_token.value in self.qregs or name_token.value in self.cregs:
            raise QasmSyntaxError(name_token.span, f"register '{name_token.value}' redeclared")
        if is_quantum:
            registers[name_token.value] = (self.num_qubits, size)
            self.num_qubits += size
        else:
            registers[name_token.value] = (self.num_clbits, size)
            self.num_clbits += size

    def parse_register_decl(self):
        keyword = self.advance()
        name = self.expect_kind('ID')
        self.expect('[')
        size = self.expect_int()
        self.expect(']')
        self.expect(';')
        self._declare(keyword.value == 'qreg', name, size)

    def parse_typed_decl(self):
        keyword = self.advance()
        size = 1
        if self.accept('['):
            size = self.expect_int()
            self.expect(']')
        name = self.expect_kind('ID')
        self.expect(';')
        self._declare(keyword.value == 'qubit', name, size)

    # Operands
    # --------
    def parse_register_ref(self, registers: Dict[str, Tuple[int, int]], what: str) -> List[int]:
        name = self.expect_kind('ID')
        if name.value not in registers:
            raise QasmSyntaxError(name.span, f"unknown {what} register '{name.value}'")
        offset, size = registers[name.value]
        if self.accept('['):
            index_token = self.peek()
            index = self.expect_int()
            self.expect(']')
            if index >= size:
                raise IndexOutOfRange(index_token.span, f"{name.value}[{index}] exceeds size {size}")
            return [offset + index]
        return list(range(offset, offset + size))

    def parse_qargs(self) -> List[List[int]]:
        args = [self.parse_register_ref(self.qregs, 'quantum')]
        while self.accept(','):
            args.append(self.parse_register_ref(self.qregs, 'quantum'))
        return args

    def parse_angle(self) -> float:
        sign = -1.0 if self.accept('-') else 1.0
        token = self.peek()
        if token is not None and token.value == 'pi':
            self.advance()
            value = math.pi
        else:
            number = self.expect_kind('NUMBER')
            value = float(number.value)
            if self.accept('*'):
                pi_token = self.expect_kind('ID')
                if pi_token.value != 'pi':
                    raise UnsupportedFeature(pi_token.span, f"angle expression '{pi_token.value}'")
                value *= math.pi
            else:
                return sign * value
        if self.accept('/'):
            divisor = self.expect_kind('NUMBER')
            value /= float(divisor.value)
        return sign * value

    # Statements
    # ----------
    def _emit(self, kind: Op, qubits, **kwargs):
        label, self.pending_label = self.pending_label, None
        self.instructions.append(Instruction(kind, tuple(qubits), label=label, **kwargs))

    def _check_condition(self, condition, span):
        if condition is not None and condition[0] not in self.written_clbits:
            raise QasmSyntaxError(span, f"condition bit {condition[0]} is read before any measure writes it")

    def parse_operation(self, condition):
        token = self.advance()
        name = token.value
        if name in UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(token.span, name)
        if name == 'reset':
            targets = self.parse_qargs()
            self.expect(';')
            if len(targets) != 1:
                raise QasmSyntaxError(token.span, "reset takes one operand")
            for q in targets[0]:
                self._emit(Op.RESET, (q,), condition=condition)
            return
        if name == 'barrier':
            if condition is not None:
                raise UnsupportedFeature(token.span, "conditional barrier")
            qubits = list(range(self.num_qubits)) if self.peek() is not None and self.peek().value == ';' else \
                [q for group in self.parse_qargs() for q in group]
            self.expect(';')
            self._emit(Op.BARRIER, qubits)
            return
        if name == 'delay':
            if condition is not None:
                raise UnsupportedFeature(token.span, "conditional delay")
            self.expect('[')
            duration = self.expect_int()
            if self.peek() is not None and self.peek().kind == 'ID':
                unit = self.advance()
                if unit.value not in ('ns', 'dt'):
                    raise UnsupportedFeature(unit.span, f"delay unit '{unit.value}'")
            self.expect(']')
            targets = self.parse_qargs()
            self.expect(';')
            for group in targets:
                for q in group:
                    self._emit(Op.DELAY, (q,), duration=duration)
            return
        if name not in GATE_KINDS:
            raise UnsupportedFeature(token.span, name)
        kind = GATE_KINDS[name]
        params = ()
        if self.accept('('):
            params = (self.parse_angle(),)
            self.expect(')')
        targets = self.parse_qargs()
        self.expect(';')
        if kind in (Op.CX, Op.SWAP):
            if len(targets) != 2 or len(targets[0]) != 1 or len(targets[1]) != 1:
                raise UnsupportedFeature(token.span, f"{name} on registers or wrong arity")
            if targets[0][0] == targets[1][0]:
                raise QasmSyntaxError(token.span, f"{name} needs two distinct qubits")
            self._emit(kind, (targets[0][0], targets[1][0]), condition=condition)
            return
        if len(targets) != 1:
            raise QasmSyntaxError(token.span, f"{name} takes one operand")
        try:
            for q in targets[0]:
                self._emit(kind, (q,), params=params, condition=condition)
        except CircuitError as e:
            raise QasmSyntaxError(token.span, str(e)) from e

    def _emit_measures(self, qubits: List[int], clbits: List[int], span, condition):
        if len(qubits) != len(clbits):
            raise QasmSyntaxError(span, "measure operand sizes differ")
        for q, c in zip(qubits, clbits):
            self._emit(Op.MEASURE, (q,), clbit=c, condition=condition)
            self.written_clbits.add(c)

    def parse_measure_arrow(self, condition):
        span = self.span()
        qubits = self.parse_register_ref(self.qregs, 'quantum')
        self.expect('->')
        clbits = self.parse_register_ref(self.cregs, 'classical')
        self.expect(';')
        self._emit_measures(qubits, clbits, span, condition)

    def parse_measure_assign(self):
        span = self.span()
        clbits = self.parse_register_ref(self.cregs, 'classical')
        self.expect('=')
        self.expect('measure')
        qubits = self.parse_register_ref(self.qregs, 'quantum')
        self.expect(';')
        self._emit_measures(qubits, clbits, span, None)

    def parse_if(self):
        keyword = self.advance()
        self.expect('(')
        name = self.expect_kind('ID')
        if name.value not in self.cregs:
            raise QasmSyntaxError(name.span, f"unknown classical register '{name.value}'")
        offset, size = self.cregs[name.value]
        if not self.accept('['):
            raise UnsupportedFeature(name.span, "register-wide condition")
        index_token = self.peek()
        index = self.expect_int()
        self.expect(']')
        if index >= size:
            raise IndexOutOfRange(index_token.span, f"{name.value}[{index}] exceeds size {size}")
        self.expect('==')
        value_token = self.peek()
        value = self.expect_int()
        if value not in (0, 1):
            raise QasmSyntaxError(value_token.span, "condition value must be 0 or 1")
        self.expect(')')
        condition = (offset + index, value)
        self._check_condition(condition, keyword.span)
        if self.peek() is not None and self.peek().value == 'measure':
            self.advance()
            self.parse_measure_arrow(condition)
        else:
            self.parse_operation(condition)


def parse(text: str) -> Circuit:
    """Parse QASM source into a Circuit."""
    circuit = Parser(text).parse()
    logger.debug(f"Parsed circuit with {circuit.num_qubits} qubits and {len(circuit)} instructions")
    return circuit


def parse_file(path: Path) -> Circuit:
    path = Path(path)
    logger.info(f"Parsing {path}")
    try:
        return parse(path.read_text(encoding='utf-8'))
    except Exception as e:
        logger.error(f"Failed to parse {path}: {e}", exc_info=True)
        raise

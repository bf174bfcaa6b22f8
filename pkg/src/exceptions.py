"""
exceptions.py

Error hierarchy shared by every stage of the transpiler. Library code raises these;
only the command line turns them into exit codes.
"""
from typing import Optional


class TranspilerError(Exception):
    """Base class for all transpiler errors."""


class CircuitError(TranspilerError, ValueError):
    """Malformed instruction or circuit."""


class QasmError(TranspilerError, ValueError):
    """Base class for frontend errors; carries the offending source span."""

    def __init__(self, span, message: str):
        self.span = span
        self.message = message
        super().__init__(f"{span}: {message}" if span is not None else message)


class QasmSyntaxError(QasmError):
    pass


class UnsupportedFeature(QasmError):
    def __init__(self, span, construct: str):
        self.construct = construct
        super().__init__(span, f"unsupported construct '{construct}'")


class IndexOutOfRange(QasmError):
    pass


class SchemaError(TranspilerError, ValueError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"calibration field '{field}': {reason}")


class InvariantViolation(TranspilerError, ValueError):
    """A device, layout, routing or schedule invariant does not hold."""


class DisconnectedDevice(TranspilerError):
    pass


class UnknownPreset(TranspilerError, ValueError):
    pass


class InvalidProfile(TranspilerError, ValueError):
    pass


class ZeroShots(TranspilerError, ValueError):
    pass


class OccupiedPhysical(TranspilerError, ValueError):
    def __init__(self, physical: int, holder: Optional[int] = None):
        self.physical = physical
        self.holder = holder
        super().__init__(f"physical qubit {physical} already holds logical qubit {holder}")


class AlreadyMapped(TranspilerError, ValueError):
    def __init__(self, logical: int):
        self.logical = logical
        super().__init__(f"logical qubit {logical} is already mapped")


class DeviceTooSmall(TranspilerError):
    pass


class RoutingStalled(TranspilerError):
    pass


class NoCandidates(TranspilerError):
    pass


class TooManyQubits(TranspilerError):
    pass


class EmptyCounts(TranspilerError, ValueError):
    pass


class NotRUS(TranspilerError, ValueError):
    pass


class InvalidSpec(TranspilerError, ValueError):
    pass

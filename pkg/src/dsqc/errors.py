"""Exception hierarchy shared by every module."""


class DSQCError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(DSQCError, ValueError):
    """A caller broke an operation's precondition."""


class SpecError(DSQCError, ValueError):
    """A state-family description violates the dimension or selection rules."""


class SizeCapError(DSQCError):
    """A dense register would exceed the qubit cap."""


class ConsistencyError(DSQCError, RuntimeError):
    """An internal invariant failed (should never happen on valid input)."""


class AmbiguousTableError(DSQCError):
    """Two different messages produce the same announcement/outcome triple."""


class ProtocolCorruption(DSQCError):
    """Bob saw a triple that no honest run can produce."""

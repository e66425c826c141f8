"""Exception hierarchy shared by all modules."""


class MedspecError(Exception):
    pass


class InputError(MedspecError, ValueError):
    """Bad arguments: out-of-range vertices, asymmetric connection sets, ..."""


class LoopError(InputError):
    pass


class ParseError(InputError):
    """Malformed graph6 text."""


class UnsupportedError(MedspecError):
    """Request outside the supported range (size caps, field orders)."""


class DomainError(InputError):
    """Numeric parameter outside the domain of a formula."""


class PreconditionError(InputError):
    pass


class InconsistencyError(MedspecError, AssertionError):
    """A spectral identity that must hold for every graph failed."""


class CertificationError(MedspecError):
    """A certification step did not go through."""

"""Exception hierarchy shared by all fsaug modules."""


class FsaugError(Exception):
    """Base class for all fsaug errors."""


class IoError(FsaugError):
    """File could not be read or written."""


class DecodeError(FsaugError):
    """Image file is corrupt or in an unsupported format."""


class BoundsError(FsaugError):
    """Box or patch does not fit the target image."""


class ParamError(FsaugError):
    """Parameter outside its valid range."""


class DimensionError(FsaugError):
    """Operands have incompatible dimensions."""


class InsufficientDataError(FsaugError):
    """Not enough samples to compute the requested score."""


class FormatError(FsaugError):
    """Embedding file violates its format contract."""


class DivisionByZeroError(FsaugError):
    """Denominator of a ratio score is (numerically) zero."""

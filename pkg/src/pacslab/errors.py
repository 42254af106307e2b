"""Exception types shared across the package."""


class PacslabError(Exception):
    """Base class for numerical and physical errors raised by pacslab."""


class TruncationError(PacslabError):
    """Fock-space truncation too small for the requested state.

    Carries the offending tail mass so callers can resize.
    """

    def __init__(self, message: str, tail_mass: float):
        super().__init__(f"{message} (tail mass {tail_mass:.3e})")
        self.tail_mass = tail_mass


class DimensionMismatchError(PacslabError):
    """Operands live in truncated spaces of different dimension."""


class EmptyBranchError(PacslabError):
    """Conditioning on a measurement outcome of zero probability."""


class NumericalFailureError(PacslabError):
    """An iterative numerical method failed to converge or left range."""


class ConfigError(PacslabError):
    """Invalid run configuration; message lists every offending entry."""

"""Exception hierarchy shared by all starlap modules."""


class StarlapError(ValueError):
    """Base class for every error raised by starlap."""


class ShapeError(StarlapError):
    """Grid functions with mismatched signature or mesh were combined."""


class DomainError(StarlapError):
    """An argument lies outside the domain of the requested operation."""


class MeshError(StarlapError):
    """The mesh is too coarse for the requested stencil."""


class PoleError(StarlapError):
    """The spectral parameter is (numerically) a pole of a resolvent quantity.

    Attributes
    ----------
    pole : float
        The nearest pole, one of ``±(k*pi)**2``.
    """

    def __init__(self, message, pole):
        super().__init__(message)
        self.pole = pole


class SpectralIndexError(StarlapError, IndexError):
    """A root index ``k = 0`` was requested; roots are labelled by nonzero k."""


class OracleFailure(StarlapError):
    """The finite-difference oracle produced a result violating its contract."""


class OracleNonConvergence(StarlapError):
    """The iterative eigensolver behind the oracle did not converge."""

"""Exception hierarchy shared by every module."""


class HurstQVError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HurstQVError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(HurstQVError):
    """The request exceeds a dense-linear-algebra size cap."""


class EmbeddingError(HurstQVError):
    """Circulant embedding produced negative eigenvalues beyond tolerance."""


class FactorizationError(HurstQVError):
    """Cholesky factorization of a covariance matrix failed."""


class IntegrationError(HurstQVError):
    """The Euler recursion produced a non-finite value.

    ``index`` is the first grid index holding a non-finite value.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class DegeneratePathError(HurstQVError):
    """A quadratic sum needed as a denominator is exactly zero."""


class ConfigError(HurstQVError):
    """Malformed experiment configuration or command-line usage."""

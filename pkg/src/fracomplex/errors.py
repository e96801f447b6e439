"""Exception hierarchy shared by every module.

Each error carries a stable class name; the command line prints that name
on stderr when it exits with a domain error.
"""

from __future__ import annotations


class FracomplexError(Exception):
    """Base class for all library errors."""


class UsageError(FracomplexError):
    """Invalid flags or configuration values."""


class DomainError(FracomplexError):
    """Argument outside the domain of a mathematical function."""


class PoleError(DomainError):
    """Gamma function evaluated at (or within tolerance of) a pole."""


class BranchError(DomainError):
    """Argument lies on a branch cut."""


class UnknownPreset(FracomplexError):
    """Unrecognised multiplier preset name."""


class ParamDomain(DomainError):
    """Operator parameters outside the admissible range."""


class KDomain(DomainError):
    """Taylor-correction order k not admissible for the given gamma."""


class OriginSingularity(DomainError):
    """Adjoint output requested at x = 0 where it is unbounded."""


class GridTooCoarse(DomainError):
    """Sampling step too large for the reference spectrum."""


class EmptyWindow(DomainError):
    """Fit window contains too few usable samples."""


class SingularPoint(DomainError):
    """Kernel evaluated at an excluded point."""


class NonIntegrableKernel(DomainError):
    """Kernel singularity is not integrable at a coincident node."""


class ConfigDomain(DomainError):
    """Invalid noise configuration."""


class EmptyInput(DomainError):
    """Empty sample array."""


class ForbiddenBoundary(DomainError):
    """1/alpha + Re(gamma) is an integer: the process is not defined."""


class EmptyEnsemble(DomainError):
    """Ensemble has no members (or fewer than required)."""


class MomentDomain(DomainError):
    """Requested moment order does not exist for the stable law."""


class AlphaDomain(DomainError):
    """Estimator only valid for a different stability index."""


class GridDomain(DomainError):
    """Grid length not supported by the estimator."""


class OrderDomain(UserWarning):
    """Increment order below floor(Re gamma); the test is expected to fail."""


class EstimatorFailure(DomainError):
    """A statistical estimator cannot produce a trustworthy value."""

"""Exception types shared across the package."""


class InstanceError(ValueError):
    """Problem data and arguments are dimensionally or structurally inconsistent."""


class ConfigurationError(ValueError):
    """A configuration value is invalid (penalty, groups, generator settings)."""


class PureLassoMode(ValueError):
    """Signals lambda2 = 0: the (lambda, eta_gamma) parametrization is undefined.

    Callers handle the pure-Lasso case through the product lambda * eta_gamma,
    which equals lambda1.
    """


class RankError(RuntimeError):
    """The active Gram system lost positive definiteness (singular pivot)."""

    def __init__(self, pivot, message=None):
        self.pivot = pivot
        super().__init__(message or f"active Gram system is singular at pivot {pivot}")


class DegenerateDirectionError(ValueError):
    """A construction requires a nonzero direction (residual or coefficient vector)."""


class ContractViolationError(ValueError):
    """A documented precondition does not hold (e.g. backtracking from an incoherent state)."""


class MonitoringUnsupportedError(ValueError):
    """Gap certification is unavailable for this penalty (lambda2 = 0 or group Fenchel)."""

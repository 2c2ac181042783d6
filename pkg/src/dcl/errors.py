"""Exception types shared across the package."""


class DclError(Exception):
    """Base class for all package-specific errors."""


class UndecidablePrecision(DclError):
    """A certified comparison stayed undecided at the maximum precision cap.

    Raised instead of silently picking a side; callers may retry with a
    higher cap via ``precision_max_bits``.
    """


class DeltaOutOfRange(DclError):
    """Bump width delta outside the admissible open interval (0, 1/4)."""


class RangeTooLarge(DclError):
    """Sieve range exceeds the configured maximum."""


class SMaxTooSmall(DclError):
    """No continued-fraction convergent with denominator >= 2 fits the cap."""


class NoSuchN(DclError):
    """No integer N reproduces the requested floor(N^c) = s coupling."""


class MuOutOfRange(DclError):
    """mu outside (0, 1/8)."""


class NoAdmissibleMu(DclError):
    """No mu compatible with the Goldbach-mode parameter chain was found."""


class ValidationFailed(DclError):
    """A parameter bundle violates one or more of its defining inequalities.

    ``violations`` lists the failed inequality names so the caller can see
    whether raising the target denominator would fix the bundle.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("parameter validation failed: " + ", ".join(self.violations))


class HypothesisViolated(DclError):
    """An operation's stated hypothesis (e.g. N >= 16*s*P^2) does not hold."""


class PreconditionViolated(DclError):
    """Caller-supplied arguments violate an operation precondition."""


class QuadratureNotConverged(DclError):
    """Grid doubling failed to certify a quadrature value."""


class DisjointnessFailure(DclError):
    """Two major arcs intersect; indicates an invalid parameter bundle."""


class OddN(DclError):
    """Singular series requested for an odd integer."""

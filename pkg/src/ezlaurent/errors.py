"""Exception hierarchy shared by all ezlaurent modules."""


class EzlError(Exception):
    """Base class for all ezlaurent errors."""


class PoleAt1(EzlError):
    """The Riemann zeta-function was requested exactly at its pole s = 1."""


class PrecisionUnreachable(EzlError):
    """The requested tolerance cannot be certified within the configured budget."""


class OutOfDomain(EzlError):
    """Argument point lies outside the domain of absolute convergence."""


class OnSingularHyperplane(EzlError):
    """Evaluation point lies on a singular hyperplane of the multiple zeta-function.

    The offending hyperplane is recorded in ``.hyperplane`` as a human-readable
    string such as ``"s2 = 1"``.
    """

    def __init__(self, hyperplane: str):
        self.hyperplane = hyperplane
        super().__init__(f"point lies on singular hyperplane {hyperplane}")


class RegionViolation(EzlError):
    """Contour-integral region condition fails at the evaluation point."""


class OrderCapExceeded(EzlError):
    """Requested expansion order exceeds the configured cap."""


class NotPositive(EzlError):
    """Integer point has a coordinate below 1 where positivity is required."""


class TargetAbsent(EzlError):
    """Target term does not occur in the stuffle decomposition."""


class TargetAmbiguous(EzlError):
    """Target term occurs more than once in the stuffle decomposition."""


class ConsistencyFailure(EzlError):
    """Two independent computation paths disagreed beyond tolerance."""


class InvalidApproach(EzlError):
    """Approach offsets violate an admissibility condition of the limit formula."""


class UnsupportedCenter(EzlError):
    """Center configuration is outside the treated cases."""

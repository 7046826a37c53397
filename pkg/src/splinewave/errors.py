"""Exception and warning types shared across the package."""


class SplineWaveError(Exception):
    """Base class for package errors."""


class ConvergenceError(SplineWaveError):
    """A numerical stage failed its convergence certificate.

    ``stage`` names the pipeline step (for example ``"recurrence_B"``).
    """

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class RootIsolationError(ConvergenceError):
    """Sign-change bracketing did not isolate the expected number of roots."""

    def __init__(self, message: str):
        super().__init__("negative_roots", message)


class CertifiedRangeError(ValueError):
    """Evaluation point outside the range covered by the coefficient windows."""

    def __init__(self, what: str, limit: float, worst: float):
        self.limit = limit
        self.worst = worst
        super().__init__(
            f"{what} requested at |x| = {worst:g}, outside the certified range |x| <= {limit:g}"
        )


class CacheIntegrityError(SplineWaveError):
    """A cached table failed its checksum or key validation."""

    def __init__(self, path, reason: str):
        self.stage = "cache"
        self.path = path
        super().__init__(f"[cache] {path}: {reason}")


class RoundoffFloorWarning(RuntimeWarning):
    """A quadrature coefficient fell below the double-precision roundoff floor."""

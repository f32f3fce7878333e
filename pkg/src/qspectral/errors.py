"""Exception hierarchy for qspectral."""


class QSpectralError(Exception):
    """Base class for all library errors."""


class NumericalFailure(QSpectralError, ArithmeticError):
    pass


class NotNormal(QSpectralError, ValueError):
    pass


class Singular(QSpectralError, ArithmeticError):
    pass


class OnSpectrum(QSpectralError, ValueError):
    """The requested point lies (numerically) in the S-spectrum."""


class SameSphere(QSpectralError, ValueError):
    pass


class OnSphere(QSpectralError, ValueError):
    pass


class SideMismatch(QSpectralError, ValueError):
    pass


class OutOfBall(QSpectralError, ValueError):
    pass


class ContourNotAdmissible(QSpectralError, ValueError):
    pass


class NotIntrinsic(QSpectralError, ValueError):
    pass


class BadExponent(QSpectralError, ValueError):
    pass


class ProbeHitsSpectrum(QSpectralError, ValueError):
    pass


class NotBlockTriangular(QSpectralError, ValueError):
    pass

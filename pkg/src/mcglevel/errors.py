"""Exception types raised by mcglevel."""


class MCGLevelError(ValueError):
    """Base class for all library errors."""


class GenusMismatch(MCGLevelError):
    pass


class NotSymplectic(MCGLevelError):
    pass


class NotInLevel(MCGLevelError):
    pass


class NotInIgusa(MCGLevelError):
    pass


class OddLevelIgusa(MCGLevelError):
    pass


class NonOrthogonal(MCGLevelError):
    pass


class DegenerateEnhancement(MCGLevelError):
    pass


class SizeLimit(MCGLevelError):
    pass


class ZeroClass(MCGLevelError):
    pass


class DegreeOverflow(MCGLevelError):
    pass


class NotInKernel(MCGLevelError):
    pass


class NotIA(MCGLevelError):
    pass


class EvenModulus(MCGLevelError):
    pass


class NotInvertible(MCGLevelError):
    """Nielsen reduction could not certify that a tuple of words is a basis."""

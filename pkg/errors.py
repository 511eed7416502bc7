# errors.py - Exception hierarchy shared by every module


class ColombeauError(Exception):
    """Base class for lab errors."""


class ConfigError(ColombeauError, ValueError):
    """Configuration file or override failed validation."""


class TooFewSamples(ColombeauError):
    pass


class AmbiguousValuation(ColombeauError):
    pass


class NonModerateNet(ColombeauError):
    pass


class PointEscapesDomain(ColombeauError):
    pass


class WindowEmpty(ColombeauError):
    pass


class OrderTooHigh(ColombeauError):
    pass


class QuadratureNotConverged(ColombeauError):
    pass


class NoCompactSupport(ColombeauError):
    pass


class TailNotCertified(ColombeauError):
    pass


class MomentCertificationFailed(ColombeauError):
    pass


class TailBoundViolated(ColombeauError):
    pass


class CutoffDoesNotCoverTail(ColombeauError):
    pass


class CutoffDoesNotCoverSupport(ColombeauError):
    pass


class UnsupportedDistribution(ColombeauError):
    pass


class SupportNotContained(ColombeauError):
    """A restricted functional was handed an input supported outside its box."""


class UnknownCheck(ColombeauError, KeyError):
    pass

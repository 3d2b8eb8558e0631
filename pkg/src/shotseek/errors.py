"""Exception types shared across the package."""


class ShotseekError(Exception):
    """Base class for every error raised by this package."""


class MalformedRecord(ShotseekError):
    """A manifest / task line that cannot be accepted as-is."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateShot(ShotseekError):
    pass


class DanglingDocument(ShotseekError):
    pass


class EmptyRaster(ShotseekError):
    pass


class ExtractorFailure(ShotseekError):
    """Carries the failing plugin name; other plugins keep running."""

    def __init__(self, plugin: str, cause: Exception):
        super().__init__(f"extractor {plugin!r} failed: {cause}")
        self.plugin = plugin
        self.cause = cause


class UnknownChannel(ShotseekError):
    pass


class UnknownEntry(ShotseekError):
    pass


class NotJoined(ShotseekError):
    pass


class DuplicatePeerId(ShotseekError):
    pass


class SubmittedLocked(ShotseekError):
    pass


class ReservedColor(ShotseekError):
    pass


class MalformedTask(ShotseekError):
    pass


class UnknownTask(ShotseekError):
    pass


class ConfigError(ShotseekError):
    pass

"""Shared exception types."""


class HolomedError(Exception):
    pass


class InputError(HolomedError):
    """Malformed caller input (bad frame geometry, bad parameters)."""


class ValidationError(HolomedError):
    """Schema violation; carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class NotFoundError(HolomedError):
    pass


class ConflictError(HolomedError):
    """Compare-and-set revision mismatch."""


class DecodeError(HolomedError):
    """Wire envelope could not be decoded; offset is a byte position."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class PackError(HolomedError):
    """Spritesheet pack failed to load or verify."""


class AssetError(HolomedError):
    """A sheet/view lookup failed at schedule time."""


class ConfigError(HolomedError):
    pass


class FixtureParseError(HolomedError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line

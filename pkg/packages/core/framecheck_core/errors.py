class FramecheckError(ValueError):
    """Base class for every error raised by the engine."""


class SceneParseError(FramecheckError):
    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        offset: int | None = None,
        path: str | None = None,
    ) -> None:
        self.line = line
        self.column = column
        self.offset = offset
        self.path = path
        location = ""
        if line is not None:
            location = f" (line {line}, column {column}, byte {offset})"
        elif path is not None:
            location = f" (at {path})"
        super().__init__(f"{message}{location}")


class SceneValidationError(FramecheckError):
    pass


class SpanTableError(FramecheckError):
    """A span table is unreadable or lacks an entry a member needs."""


class ConfigError(FramecheckError):
    pass


class FidelityConfigError(FramecheckError):
    pass


class ViewError(FramecheckError):
    pass


class FixtureError(FramecheckError):
    pass


class MutationError(FramecheckError):
    pass


class PlanParseError(FramecheckError):
    pass

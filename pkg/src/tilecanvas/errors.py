"""Exception hierarchy shared across the package."""


class TileCanvasError(Exception):
    """Base class for all errors raised by tilecanvas."""


class InvalidConfigError(TileCanvasError, ValueError):
    pass


class InvalidInputError(TileCanvasError, ValueError):
    pass


class ShapeError(TileCanvasError, ValueError):
    pass


class IncompleteCoverError(TileCanvasError):
    pass


class NumericError(TileCanvasError, ArithmeticError):
    pass


class FormatError(TileCanvasError):
    """Container bytes do not follow the FYCT layout."""


class LengthError(FormatError):
    pass


class WindowFailure(TileCanvasError):
    """A denoiser call failed; the step was aborted before merging."""

    def __init__(self, window_index: int, cause: BaseException):
        super().__init__(f"window {window_index} failed: {cause!r}")
        self.window_index = window_index
        self.cause = cause

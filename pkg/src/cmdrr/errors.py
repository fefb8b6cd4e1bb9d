"""Exception types shared across the package."""


class CmdrrError(Exception):
    """Base class for every error raised by this library."""


class InvalidParams(CmdrrError):
    """Tournament parameters are out of range or break the parity rule."""


class AmbiguousCell(CmdrrError):
    """Two games claim the same partnership cell in the matrix view."""


class InconsistentMatrix(CmdrrError):
    """A matrix cell and its mirror cell disagree."""


class MissingGame(CmdrrError):
    """A non-spouse cell of the matrix view is empty."""


class ShapeError(CmdrrError):
    """Grid dimensions or orders do not line up."""


class UnsupportedOrder(CmdrrError):
    """No direct construction is implemented for this order."""


class NoMolsExist(CmdrrError):
    """No pair of orthogonal latin squares exists at this order (2 or 6)."""


class InvalidInput(CmdrrError):
    """An input structure fails its own verifier."""


class FillerMismatch(CmdrrError):
    """Hole count or hole sizes do not match the supplied fillers."""


class InvalidFiller(CmdrrError):
    """A hole filler is not a valid tournament of the right size."""


class WrongType(CmdrrError):
    """The hole type signature is not the one this construction needs."""


class ConstructionFailed(CmdrrError):
    """A construction step could not complete (reports the offending part)."""


class InvalidResolution(CmdrrError):
    """A round assignment repeats a player within a round or misses games."""


class NotFound(CmdrrError):
    """Unknown catalog id."""


class CatalogDefect(CmdrrError):
    """An embedded catalog payload failed its verifier; build-breaking."""


class ParseError(CmdrrError):
    """A document could not be parsed; carries a line/column diagnostic."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)

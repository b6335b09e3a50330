from typing import Any, Optional


class SteenrodDeskError(Exception):
    """Base class of every error raised by steenrod_desk."""


class WindowError(SteenrodDeskError, ValueError):
    """A computation needs data outside its degree window."""


class ShapeError(SteenrodDeskError, ValueError):
    pass


class ParseError(SteenrodDeskError, ValueError):
    pass


class BudgetError(SteenrodDeskError, ValueError):
    pass


class CoherenceError(SteenrodDeskError, ValueError):
    pass


class CheckFailure(SteenrodDeskError):
    """A mathematical check failed.

    Attributes:
        degree (int, optional): First degree at which the check failed.
        witness (any, optional): Element exhibiting the failure.
    """

    def __init__(
        self, message: str, degree: Optional[int] = None, witness: Any = None
    ) -> None:
        super().__init__(message)
        self.degree = degree
        self.witness = witness


class NotHopfError(CheckFailure):
    pass


class NormalityError(CheckFailure):
    pass

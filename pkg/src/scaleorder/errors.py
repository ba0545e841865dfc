"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class SpecError(ValueError):
    """A textual baseline/model/grid specification could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at position {position} in {text!r})"
        super().__init__(message)


class GridMismatchError(ValueError):
    """Two verdicts being combined were not produced on the same grid."""


class TheoremContradiction(RuntimeError):
    """A theorem's hypotheses were verified but its conclusion was refuted on the grid.

    This never happens for correct numerics; it signals a bug or a tolerance
    that is too tight.
    """

    def __init__(self, conclusion):
        self.conclusion = conclusion
        super().__init__(
            f"{conclusion.theorem}: predicted {conclusion.order} order but grid "
            f"check returned {conclusion.verdict.outcome}"
        )

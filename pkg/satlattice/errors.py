from __future__ import annotations

from typing import Optional


class SatLatticeError(Exception):
    pass


class LatticeArgumentError(SatLatticeError, ValueError):
    pass


class FamilyParseError(LatticeArgumentError):
    def __init__(self, message: str, *, position: int, line: Optional[int] = None) -> None:
        self.reason = message
        self.position = position
        self.line = line
        where = f"line {line}, position {position}" if line is not None else f"position {position}"
        super().__init__(f"{message} ({where})")


class ConfigError(SatLatticeError):
    pass


class NotSaturatedError(SatLatticeError):
    pass


class ExtractionError(SatLatticeError):
    """A gap interval [lower, upper) of the intersection sequence is not inside the family."""

    def __init__(self, lower: int, upper: int, missing: int) -> None:
        self.lower = lower
        self.upper = upper
        self.missing = missing
        super().__init__(f"gap [{lower:#x}, {upper:#x}) misses set {missing:#x}")


class TrichotomyError(SatLatticeError):
    def __init__(self, first: int, second: int) -> None:
        self.first = first
        self.second = second
        super().__init__(f"open downsets of {first:#x} and {second:#x} are not nested")


class ClassificationContradiction(SatLatticeError):
    def __init__(self, subcase: str, j_a: int, j_b: int, copy=None) -> None:
        self.subcase = subcase
        self.j_a = j_a
        self.j_b = j_b
        # InducedCopy when the wide gap exhibits one
        self.copy = copy
        super().__init__(f"{subcase}: j_a={j_a}, j_b={j_b}")


class CatalogIntegrityError(SatLatticeError):
    pass


class SearchRefused(SatLatticeError):
    def __init__(self, message: str, *, estimate: int) -> None:
        self.estimate = estimate
        super().__init__(f"{message} (about {estimate:,} candidate families)")

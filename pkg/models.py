"""Data classes shared across modva."""

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class RunConfig:
    """Validated parameters of one CLI or API run."""
    p: int
    carrier: str = "affine:sl2"
    level: int = 1
    c: int = 0
    max_degree: int = 6
    command: Optional[str] = None
    output_format: str = "text"
    seed: int = 0
    workers: int = 1


@dataclass
class GramRow:
    """Invariant form restricted to one degree."""
    degree: int
    basis: list[str]
    matrix: list[list[int]]
    rank: int
    radical: list[list[int]] = field(default_factory=list)

    @property
    def quotient_dim(self) -> int:
        return self.rank


@dataclass
class GramTable:
    """Gram rows for degrees 0..N of one carrier."""
    carrier: str
    p: int
    rows: list[GramRow] = field(default_factory=list)


@dataclass
class FormSpaceResult:
    dim: int
    stabilized: bool
    span_dim: int = 0
    last_growth_degree: int = 0


@dataclass
class SubsetCheck:
    """Containment of (L_{-1}^+V)_0 in (L_1^+V)_0."""
    holds: bool
    lminus: list[list[int]] = field(default_factory=list)
    lplus: list[list[int]] = field(default_factory=list)
    witness: Optional[list[int]] = None


@dataclass
class SuiteFailure:
    """One failed check: what went in and what both sides came out as."""
    inputs: str
    lhs: str
    rhs: str
    key: tuple = ()


@dataclass
class SuiteReport:
    suite: str
    params: dict[str, Any]
    attempted: int = 0
    passed: int = 0
    failures: list[SuiteFailure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.attempted == self.passed

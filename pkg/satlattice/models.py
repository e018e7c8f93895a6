from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


MAX_GROUND = 20


class Family(BaseModel):
    """A set family over [n]; members are bitmasks (element i at bit i-1), kept sorted and unique."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, le=MAX_GROUND)
    members: tuple[int, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _canonical(cls, data):
        if isinstance(data, dict) and "members" in data:
            data = {**data, "members": tuple(sorted(set(int(m) for m in data["members"])))}
        return data

    @model_validator(mode="after")
    def _in_range(self) -> "Family":
        top = 1 << self.n
        for m in self.members:
            if m < 0 or m >= top:
                raise ValueError(f"member {m} outside B_{self.n}")
        return self

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, s: object) -> bool:
        return s in self.members


class Permutation(BaseModel):
    """A relabelling of [n]: element e goes to image[e-1]."""

    model_config = ConfigDict(frozen=True)

    image: tuple[int, ...]

    @model_validator(mode="after")
    def _bijective(self) -> "Permutation":
        if sorted(self.image) != list(range(1, len(self.image) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.image)}: {self.image}")
        return self

    @property
    def n(self) -> int:
        return len(self.image)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for src, dst in enumerate(self.image, start=1):
            inv[dst - 1] = src
        return Permutation(image=tuple(inv))


class InducedCopy(BaseModel):
    """a < a_up and b < b_up are the only relations among the four sets."""

    model_config = ConfigDict(frozen=True)

    a: int
    a_up: int
    b: int
    b_up: int

    @property
    def sets(self) -> tuple[int, int, int, int]:
        return (self.a, self.a_up, self.b, self.b_up)


class OutsiderWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    outsider: int
    quadruple: InducedCopy


class SaturationCertificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    size: int
    free: bool
    saturated: bool
    internal_copy: Optional[InducedCopy] = None
    failing_outsider: Optional[int] = None
    witnesses: list[OutsiderWitness] = Field(default_factory=list)


class ExtractionTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: list[int]
    g_seq: list[int]
    # ascending, from the empty set to [n]
    chain: list[int]


class PairClassification(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["chain_between", "shackle_sandwich"]
    j: int
    j_a: int
    j_b: int


class WitnessConfig(BaseModel):
    """One way the missing shackle S_target is witnessed; d is set for case 3, j for case 2."""

    model_config = ConfigDict(frozen=True)

    case: Literal[1, 2, 3]
    target: int
    a: int
    b: int
    d: Optional[int] = None
    j: Optional[int] = None

    @property
    def participants(self) -> tuple[int, ...]:
        if self.d is None:
            return (self.a, self.b)
        return (self.a, self.b, self.d)


class SpanInfo(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    q: int

    @property
    def is_shackle(self) -> bool:
        return self.q == self.p + 2


class ElementLoad(BaseModel):
    model_config = ConfigDict(frozen=True)

    member: int
    span: SpanInfo
    load: tuple[int, ...]


class MissingShackle(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    configs: list[WitnessConfig]
    # non-chain members whose witness load contains this shackle
    witnesses: tuple[int, ...]
    covered_without_case3: bool


class Finding(BaseModel):
    model_config = ConfigDict(frozen=True)

    check: str
    detail: str
    member: Optional[int] = None
    shackle: Optional[int] = None


class AuditReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    size: int
    s: int
    k: int
    missing_shackles: list[MissingShackle]
    loads: list[ElementLoad]
    findings: list[Finding]
    inequality_holds: bool
    size_bound_holds: bool

    @property
    def ok(self) -> bool:
        return not self.findings and self.inequality_holds and self.size_bound_holds


class ConstructionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["singletons", "fstar"]
    n: int
    i: Optional[int] = None


class SearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, le=MAX_GROUND)
    min_size: int
    max_size: int
    fix_chain: bool = True
    threads: int = Field(1, ge=1)
    progress_interval: int = Field(250_000, ge=1)
    checkpoint: Optional[str] = None

    @model_validator(mode="after")
    def _sizes(self) -> "SearchConfig":
        if not (self.n + 1 <= self.min_size <= self.max_size <= 1 << self.n):
            raise ValueError(
                f"size range [{self.min_size}, {self.max_size}] outside [{self.n + 1}, {1 << self.n}]"
            )
        return self


class DualityClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    representative: Family
    partner: Optional[Family] = None

    @property
    def self_dual(self) -> bool:
        return self.partner is None


class Catalog(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    size: int
    fix_chain: bool = True
    families: list[Family]
    classes: list[DualityClass] = Field(default_factory=list)


class DualMismatch(BaseModel):
    model_config = ConfigDict(frozen=True)

    line: int
    family: Family
    transcribed: Family
    computed: Family


class DiffReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    golden_count: int
    catalog_count: int
    # in the golden file but not produced by the search
    missing: list[Family]
    # produced by the search but absent from the golden file
    extra: list[Family]
    dual_mismatches: list[DualMismatch]

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra


class AntichainCounterexample(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    lower: int
    upper: int


class AntichainReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    scanned: int
    skipped: int
    counterexamples: list[AntichainCounterexample]

"""Shackles and how a saturated family witnesses the missing ones.

Everything here assumes the family contains the prefix chain C_0 < C_1 < ... < C_n.
Witness loads are computed from the definition (induced copies in F + S_i that use
a given member); the case taxonomy is checked against them, not assumed.
"""
from __future__ import annotations

import logging
from typing import Iterable, Optional

from .errors import ClassificationContradiction, LatticeArgumentError, NotSaturatedError
from .freeness import ComparabilityIndex, is_saturated, related
from .lattice import chain_set, contains_chain, is_chain_set, off_chain, shackle
from .models import (
    AntichainCounterexample,
    AntichainReport,
    AuditReport,
    ElementLoad,
    Family,
    Finding,
    InducedCopy,
    MissingShackle,
    PairClassification,
    SpanInfo,
    WitnessConfig,
)


log = logging.getLogger(__name__)


def _trailing_ones(s: int) -> int:
    return (s ^ (s + 1)).bit_length() - 1


def span(member: int, n: int) -> SpanInfo:
    if not 0 <= member < 1 << n:
        raise LatticeArgumentError(f"set {member} outside B_{n}")
    if is_chain_set(member):
        raise LatticeArgumentError(f"set {member:#x} lies on the prefix chain")
    return SpanInfo(p=_trailing_ones(member), q=member.bit_length())


def shackle_index(s: int) -> Optional[int]:
    """i when s == S_i, else None."""
    if is_chain_set(s):
        return None
    p = _trailing_ones(s)
    return p + 1 if s.bit_length() == p + 2 else None


def _require_off_chain_member(family: Family, x: int) -> None:
    if x not in family:
        raise LatticeArgumentError(f"set {x:#x} is not a member")
    if is_chain_set(x):
        raise LatticeArgumentError(f"set {x:#x} lies on the prefix chain")


def classify_related_pair(family: Family, a: int, b: int) -> PairClassification:
    """Where b < a sits against the chain: some C_j strictly between, or a unique shackle S_j sandwiched."""
    _require_off_chain_member(family, a)
    _require_off_chain_member(family, b)
    if a == b or a & b != b:
        raise LatticeArgumentError(f"{b:#x} is not a proper subset of {a:#x}")
    j_a = _trailing_ones(a)
    j_b = b.bit_length()
    if j_a >= j_b:
        return PairClassification(kind="chain_between", j=j_b, j_a=j_a, j_b=j_b)
    gap = j_b - j_a
    if gap == 2:
        return PairClassification(kind="shackle_sandwich", j=j_a + 1, j_a=j_a, j_b=j_b)
    if gap == 1:
        raise ClassificationContradiction("gap_one", j_a, j_b)
    n = family.n
    copy = InducedCopy(a=chain_set(j_a + 1, n), a_up=chain_set(j_b - 1, n), b=b, b_up=a)
    raise ClassificationContradiction("gap_wide", j_a, j_b, copy=copy)


def config_holds(config: WitnessConfig, n: int) -> bool:
    """Re-check a configuration's defining relations straight from the bits."""
    i = config.target
    s = shackle(i, n)
    c_i = chain_set(i, n)
    a, b = config.a, config.b
    if is_chain_set(a) or is_chain_set(b) or a in (s, b) or b == s:
        return False
    if config.case == 1:
        return (
            related(a, c_i)
            and related(b, s)
            and not any(related(x, y) for x in (a, c_i) for y in (b, s))
        )
    proper = a & b == b
    if config.case == 2:
        j = config.j
        if j is None or j not in (i - 1, i + 1) or not 1 <= j <= n - 1:
            return False
        s_j = shackle(j, n)
        c_j = chain_set(j, n)
        return (
            proper
            and b & s_j == b
            and s_j & a == s_j
            and not any(related(x, y) for x in (a, b) for y in (c_j, s))
        )
    d = config.d
    if d is None or is_chain_set(d) or d in (a, b, s):
        return False
    return proper and related(d, s) and not any(related(x, y) for x in (a, b) for y in (d, s))


def _config_key(c: WitnessConfig) -> tuple:
    return (c.case, c.a, c.b, -1 if c.d is None else c.d, -1 if c.j is None else c.j)


def witness_configs(family: Family, i: int) -> list[WitnessConfig]:
    n = family.n
    s = shackle(i, n)
    if s in family:
        raise LatticeArgumentError(f"shackle S_{i} is a member")
    c_i = chain_set(i, n)
    off = off_chain(family)
    found: dict[tuple, WitnessConfig] = {}

    def add(config: WitnessConfig) -> None:
        found.setdefault((config.case, frozenset(config.participants), config.j), config)

    for a in off:
        if not related(a, c_i) or related(a, s):
            continue
        for b in off:
            if b != a and related(b, s) and not related(b, c_i) and not related(a, b):
                add(WitnessConfig(case=1, target=i, a=a, b=b))

    for a in off:
        for b in off:
            if b == a or a & b != b or related(a, s) or related(b, s):
                continue
            for j in range(1, n):
                c_j = chain_set(j, n)
                if j != i and not related(a, c_j) and not related(b, c_j):
                    add(WitnessConfig(case=2, target=i, a=a, b=b, j=j))
            for d in off:
                if d not in (a, b) and related(d, s) and not related(d, a) and not related(d, b):
                    add(WitnessConfig(case=3, target=i, a=a, b=b, d=d))

    if not found:
        raise NotSaturatedError(f"missing shackle S_{i} is not witnessed")
    return sorted(found.values(), key=_config_key)


def reduce_case3(family: Family, config: WitnessConfig) -> list[WitnessConfig]:
    """Case 1 / case 2 configurations covering each participant of a case 3 witness."""
    if config.case != 3 or config.d is None:
        raise LatticeArgumentError("reduce_case3 takes a case 3 configuration")
    n = family.n
    i = config.target
    a, b, d = config.a, config.b, config.d
    c_i = chain_set(i, n)
    cls = classify_related_pair(family, a, b)
    out: list[WitnessConfig] = []
    if cls.kind == "chain_between":
        if not cls.j_b <= i <= cls.j_a:
            raise LatticeArgumentError(f"C_j between {b:#x} and {a:#x} is related to S_{i}")
        out.append(WitnessConfig(case=1, target=i, a=a, b=d))
        out.append(WitnessConfig(case=1, target=i, a=b, b=d))
    else:
        if cls.j == i:
            raise LatticeArgumentError(f"S_{i} is sandwiched between {b:#x} and {a:#x}")
        out.append(WitnessConfig(case=2, target=i, a=a, b=b, j=cls.j))
        if a & c_i == c_i:
            out.append(WitnessConfig(case=1, target=i, a=a, b=d))
        if b & c_i == b:
            out.append(WitnessConfig(case=1, target=i, a=b, b=d))
    return [c for c in out if config_holds(c, n)]


def _load_with(index: ComparabilityIndex, family: Family, x: int) -> tuple[int, ...]:
    pos = index.position[x]
    n = family.n
    out = []
    for i in range(1, n):
        s = shackle(i, n)
        if s not in family and index.copy_with_outsider_and(s, pos) is not None:
            out.append(i)
    return tuple(out)


def witness_load(family: Family, x: int) -> set[int]:
    _require_off_chain_member(family, x)
    return set(_load_with(ComparabilityIndex(family.members), family, x))


def _load_findings(x: int, sp: SpanInfo, load: tuple[int, ...]) -> list[Finding]:
    out = []
    got = set(load)
    if sp.is_shackle:
        k = sp.p + 1
        allowed = {k - 1, k + 1}
        bound = 2
    else:
        p, q = sp.p, sp.q
        allowed = {p, p + 1, p + 2, q - 2, q - 1, q}
        bound = 4
        # with q - p <= 4 the two pairs overlap at S_{p+2}, which x may witness from either side
        if q - p >= 5:
            if {p + 1, p + 2} <= got:
                out.append(Finding(check="lower_pair", member=x, detail=f"witnesses both S_{p + 1} and S_{p + 2}"))
            if {q - 2, q - 1} <= got:
                out.append(Finding(check="upper_pair", member=x, detail=f"witnesses both S_{q - 2} and S_{q - 1}"))
    if len(got) > bound:
        out.append(Finding(check="load_bound", member=x, detail=f"load {sorted(got)} exceeds {bound}"))
    stray = got - allowed
    if stray:
        out.append(Finding(check="load_candidates", member=x, detail=f"load {sorted(stray)} outside {sorted(allowed)}"))
    return out


def _missing_shackle(family: Family, i: int, loads: dict[int, tuple[int, ...]], findings: list[Finding]) -> MissingShackle:
    n = family.n
    witnesses = tuple(x for x, load in loads.items() if i in load)
    if len(witnesses) < 2:
        findings.append(Finding(check="witness_count", shackle=i, detail=f"{len(witnesses)} non-chain witnesses"))
    try:
        configs = witness_configs(family, i)
    except NotSaturatedError:
        findings.append(Finding(check="unwitnessed", shackle=i, detail=f"no configuration witnesses S_{i}"))
        return MissingShackle(index=i, configs=[], witnesses=witnesses, covered_without_case3=False)

    direct = [c for c in configs if c.case != 3]
    for c in configs:
        if c.case != 3:
            continue
        try:
            reduced = reduce_case3(family, c)
        except (LatticeArgumentError, ClassificationContradiction) as e:
            findings.append(Finding(check="case3_reduction", shackle=i, detail=str(e)))
            continue
        direct.extend(reduced)
        missing = set(c.participants) - {x for r in reduced for x in r.participants}
        if missing:
            findings.append(
                Finding(check="case3_reduction", shackle=i, detail=f"participants {sorted(missing)} left uncovered")
            )
    for c in configs:
        if not config_holds(c, n):
            findings.append(Finding(check="config_invariant", shackle=i, detail=repr(c)))
    if not direct:
        findings.append(Finding(check="case3_only", shackle=i, detail="no case 1 / case 2 witness"))
    return MissingShackle(index=i, configs=configs, witnesses=witnesses, covered_without_case3=bool(direct))


def audit(family: Family, *, check_saturation: bool = True) -> AuditReport:
    n = family.n
    if not contains_chain(family):
        raise LatticeArgumentError("audit needs the prefix chain inside the family")
    findings: list[Finding] = []
    if check_saturation and not is_saturated(family):
        findings.append(Finding(check="not_saturated", detail="family is not induced-2C2-saturated"))

    off = off_chain(family)
    k = len(off)
    present = [i for i in range(1, n) if shackle(i, n) in family]
    index = ComparabilityIndex(family.members)

    loads: dict[int, tuple[int, ...]] = {}
    element_loads = []
    for x in off:
        sp = span(x, n)
        load = _load_with(index, family, x)
        loads[x] = load
        element_loads.append(ElementLoad(member=x, span=sp, load=load))
        findings.extend(_load_findings(x, sp, load))

    for x in off:
        for y in off:
            if y == x or x & y != y:
                continue
            try:
                classify_related_pair(family, x, y)
            except ClassificationContradiction as e:
                findings.append(Finding(check="pair_classification", member=x, detail=f"below it {y:#x}: {e}"))

    missing = [
        _missing_shackle(family, i, loads, findings) for i in range(1, n) if i not in present
    ]
    total_load = sum(len(v) for v in loads.values())
    if 2 * (n - 1) > 2 * len(present) + total_load:
        findings.append(
            Finding(check="accounting", detail=f"s={len(present)} and total load {total_load} cover fewer than {n - 1}")
        )
    report = AuditReport(
        n=n,
        size=family.size,
        s=len(present),
        k=k,
        missing_shackles=missing,
        loads=element_loads,
        findings=findings,
        inequality_holds=n - 1 <= 2 * k,
        size_bound_holds=2 * family.size >= 3 * n + 1,
    )
    if findings:
        log.info("audit of %d-set family: %d findings", family.size, len(findings))
    return report


def antichain_scan(families: Iterable[Family]) -> AntichainReport:
    """For shackle-free families, the off-chain part should be an antichain."""
    scanned = skipped = 0
    n = 0
    bad: list[AntichainCounterexample] = []
    for family in families:
        n = family.n
        off = off_chain(family)
        if any(shackle_index(x) is not None for x in off):
            skipped += 1
            continue
        scanned += 1
        for x in off:
            for y in off:
                if x != y and x & y == x:
                    bad.append(AntichainCounterexample(family=family, lower=x, upper=y))
    return AntichainReport(n=n, scanned=scanned, skipped=skipped, counterexamples=bad)


def audit_catalog(families: Iterable[Family]) -> tuple[list[AuditReport], AntichainReport]:
    fams = list(families)
    return [audit(f) for f in fams], antichain_scan(fams)

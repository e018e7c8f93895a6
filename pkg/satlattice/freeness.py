"""Induced 2C2 detection, freeness and saturation checks.

The kernel indexes a list of sets once and stores, per position, bitmasks over positions
of the sets strictly above, strictly below and comparable (including itself). Every
query then runs on word operations over those masks.
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence

from .errors import LatticeArgumentError
from .lattice import iter_bits
from .models import Family, InducedCopy, OutsiderWitness, SaturationCertificate


log = logging.getLogger(__name__)

Quad = tuple[int, int, int, int]


def related(x: int, y: int) -> bool:
    meet = x & y
    return meet == x or meet == y


def is_induced_2c2(a: int, a_up: int, b: int, b_up: int) -> bool:
    if a == a_up or b == b_up or a & a_up != a or b & b_up != b:
        return False
    return not (related(a, b) or related(a, b_up) or related(a_up, b) or related(a_up, b_up))


class ComparabilityIndex:
    __slots__ = ("members", "position", "above", "below", "comparable", "everything")

    def __init__(self, members: Sequence[int]) -> None:
        self.members = tuple(members)
        count = len(self.members)
        above = [0] * count
        below = [0] * count
        for i, x in enumerate(self.members):
            for j in range(i + 1, count):
                y = self.members[j]
                meet = x & y
                if meet == x:
                    above[i] |= 1 << j
                    below[j] |= 1 << i
                elif meet == y:
                    below[i] |= 1 << j
                    above[j] |= 1 << i
        self.above = above
        self.below = below
        self.comparable = [above[i] | below[i] | (1 << i) for i in range(count)]
        self.position = {m: i for i, m in enumerate(self.members)}
        self.everything = (1 << count) - 1

    def related_mask(self, s: int) -> int:
        """Positions whose set is comparable to an arbitrary set s."""
        mask = 0
        for i, x in enumerate(self.members):
            meet = x & s
            if meet == x or meet == s:
                mask |= 1 << i
        return mask

    def comparable_pair(self, pool: int) -> Optional[tuple[int, int]]:
        rest = pool
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            ups = self.above[u] & pool
            if ups:
                return u, (ups & -ups).bit_length() - 1
            rest ^= low
        return None

    @staticmethod
    def _orient(p: int, q: int) -> tuple[int, int]:
        return (p, q) if p & q == p else (q, p)

    def _quad(self, s: int, t: int, u: int, v: int) -> Quad:
        m = self.members
        return (*self._orient(m[t], s), m[u], m[v])

    def find_copy(self, active: Optional[int] = None) -> Optional[Quad]:
        """Any induced copy among the active positions: incomparable bottoms first, then tops."""
        act = self.everything if active is None else active
        comparable = self.comparable
        above = self.above
        for a in iter_bits(act):
            later = act & ~comparable[a] & ~((2 << a) - 1)
            for b in iter_bits(later):
                for a_up in iter_bits(above[a] & act & ~comparable[b]):
                    ups = above[b] & act & ~comparable[a] & ~comparable[a_up]
                    if ups:
                        b_up = (ups & -ups).bit_length() - 1
                        m = self.members
                        return (m[a], m[a_up], m[b], m[b_up])
        return None

    def copy_through(self, k: int, active: int) -> Optional[Quad]:
        """An induced copy inside active that uses position k (k must be active)."""
        block = self.comparable[k]
        for t in iter_bits(block & active & ~(1 << k)):
            pair = self.comparable_pair(active & ~block & ~self.comparable[t])
            if pair:
                return self._quad(self.members[k], t, *pair)
        return None

    def copy_with_outsider(self, s: int, active: Optional[int] = None) -> Optional[Quad]:
        """An induced copy in the indexed sets plus s (not indexed) that uses s."""
        act = self.everything if active is None else active
        block = self.related_mask(s)
        for t in iter_bits(block & act):
            pair = self.comparable_pair(act & ~block & ~self.comparable[t])
            if pair:
                return self._quad(s, t, *pair)
        return None

    def copy_with_outsider_and(self, s: int, x: int) -> Optional[Quad]:
        """An induced copy in the indexed sets plus s that uses both s and position x."""
        act = self.everything
        block = self.related_mask(s)
        comparable = self.comparable
        if block >> x & 1:
            pair = self.comparable_pair(act & ~block & ~comparable[x])
            if pair:
                return self._quad(s, x, *pair)
            return None
        mates = comparable[x] & act & ~block & ~(1 << x)
        for t in iter_bits(block & act & ~comparable[x]):
            ok = mates & ~comparable[t]
            if ok:
                u = (ok & -ok).bit_length() - 1
                m = self.members
                return (*self._orient(m[t], s), *self._orient(m[u], m[x]))
        return None


def _as_copy(quad: Optional[Quad]) -> Optional[InducedCopy]:
    if quad is None:
        return None
    a, a_up, b, b_up = quad
    return InducedCopy(a=a, a_up=a_up, b=b, b_up=b_up)


def find_induced_copy(family: Family) -> Optional[InducedCopy]:
    return _as_copy(ComparabilityIndex(family.members).find_copy())


def find_induced_copy_with(family: Family, s: int) -> Optional[InducedCopy]:
    if not 0 <= s < 1 << family.n:
        raise LatticeArgumentError(f"set {s} outside B_{family.n}")
    if s in family:
        raise LatticeArgumentError(f"set {s} already belongs to the family")
    return _as_copy(ComparabilityIndex(family.members).copy_with_outsider(s))


def is_free(family: Family) -> bool:
    return ComparabilityIndex(family.members).find_copy() is None


def is_saturated(family: Family) -> bool:
    index = ComparabilityIndex(family.members)
    if index.find_copy() is not None:
        return False
    present = set(family.members)
    for s in range(1 << family.n):
        if s not in present and index.copy_with_outsider(s) is None:
            return False
    return True


def saturation_certificate(family: Family, *, collect: bool = True) -> SaturationCertificate:
    """Freeness plus, per outsider, one induced copy it creates; stops at the first failure."""
    index = ComparabilityIndex(family.members)
    internal = index.find_copy()
    if internal is not None:
        return SaturationCertificate(
            n=family.n, size=family.size, free=False, saturated=False, internal_copy=_as_copy(internal)
        )
    present = set(family.members)
    witnesses: list[OutsiderWitness] = []
    for s in range(1 << family.n):
        if s in present:
            continue
        quad = index.copy_with_outsider(s)
        if quad is None:
            log.debug("outsider %#x creates no copy", s)
            return SaturationCertificate(
                n=family.n, size=family.size, free=True, saturated=False, failing_outsider=s
            )
        if collect:
            witnesses.append(OutsiderWitness(outsider=s, quadruple=_as_copy(quad)))
    return SaturationCertificate(n=family.n, size=family.size, free=True, saturated=True, witnesses=witnesses)

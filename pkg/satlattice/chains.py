"""Open downsets, the downset trichotomy and maximal-chain extraction from saturated families.

Members are ordered by their open downsets, the running intersections G_j of that
order are formed, and the half-open gaps [G_{j+1}, G_j) (all inside a saturated
family) are walked to a maximal chain.
"""
from __future__ import annotations

import logging
from typing import Optional

from .errors import ExtractionError, NotSaturatedError, TrichotomyError
from .freeness import is_saturated
from .lattice import full_set
from .models import ExtractionTrace, Family


log = logging.getLogger(__name__)


def _downset_masks(members: tuple[int, ...]) -> list[int]:
    masks = []
    for x in members:
        mask = 0
        for j, y in enumerate(members):
            if y != x and y & x == y:
                mask |= 1 << j
        masks.append(mask)
    return masks


def downset(family: Family, s: int) -> Family:
    return Family(n=family.n, members=tuple(m for m in family.members if m != s and m & s == m))


def trichotomy_violation(family: Family) -> Optional[tuple[int, int]]:
    """First pair of members whose open downsets are not nested, or None."""
    members = family.members
    masks = _downset_masks(members)
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            meet = masks[i] & masks[j]
            if meet != masks[i] and meet != masks[j]:
                return members[i], members[j]
    return None


def downset_trichotomy(family: Family) -> tuple[bool, Optional[tuple[int, int]]]:
    bad = trichotomy_violation(family)
    return bad is None, bad


def linear_extension_of_downset_preorder(family: Family) -> list[int]:
    """Members by weakly decreasing open downset; equal downsets by increasing bitmask."""
    bad = trichotomy_violation(family)
    if bad is not None:
        raise TrichotomyError(*bad)
    members = family.members
    sizes = [mask.bit_count() for mask in _downset_masks(members)]
    # downsets are nested, so inclusion order equals size order
    order = sorted(range(len(members)), key=lambda i: (-sizes[i], members[i]))
    return [members[i] for i in order]


def _gap_path(upper: int, lower: int) -> list[int]:
    """Sets of [lower, upper) from the top down, dropping the highest remaining element each step."""
    path = []
    cur = upper
    while cur != lower:
        extra = cur & ~lower
        cur &= ~(1 << (extra.bit_length() - 1))
        path.append(cur)
    return path


def _gap_members(upper: int, lower: int):
    extra = upper & ~lower
    sub = extra
    while True:
        s = lower | sub
        if s != upper:
            yield s
        if sub == 0:
            return
        sub = (sub - 1) & extra


def extract_maximal_chain(family: Family, *, verify: bool = False) -> tuple[Family, ExtractionTrace]:
    n = family.n
    if verify and not is_saturated(family):
        raise NotSaturatedError("extraction needs an induced-2C2-saturated family")
    order = linear_extension_of_downset_preorder(family)
    if not order or order[0] != full_set(n):
        raise ExtractionError(lower=order[0] if order else 0, upper=full_set(n), missing=full_set(n))
    if order[-1] != 0:
        raise ExtractionError(lower=0, upper=order[-1], missing=0)

    g_seq = [order[0]]
    for f in order[1:]:
        g_seq.append(g_seq[-1] & f)

    present = set(family.members)
    descending = [g_seq[0]]
    for upper, lower in zip(g_seq, g_seq[1:]):
        if upper == lower:
            continue
        for s in _gap_members(upper, lower):
            if s not in present:
                log.debug("gap [%#x, %#x) misses %#x", lower, upper, s)
                raise ExtractionError(lower=lower, upper=upper, missing=s)
        descending.extend(_gap_path(upper, lower))

    chain = descending[::-1]
    trace = ExtractionTrace(order=order, g_seq=g_seq, chain=chain)
    return Family(n=n, members=tuple(chain)), trace


def is_maximal_chain(sets: list[int], n: int) -> bool:
    """Ascending list from the empty set to [n], each step adding exactly one element."""
    if len(sets) != n + 1 or sets[0] != 0 or sets[-1] != full_set(n):
        return False
    return all(lo & hi == lo and (hi ^ lo).bit_count() == 1 for lo, hi in zip(sets, sets[1:]))

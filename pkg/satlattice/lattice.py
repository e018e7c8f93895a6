"""Sets of [n] as bitmasks, families, the prefix chain, shackles and the duality map.

Element i lives at bit i-1 everywhere in the package.
"""
from __future__ import annotations

from typing import Any, Iterable, Iterator

from .errors import FamilyParseError, LatticeArgumentError
from .models import MAX_GROUND, Family, InducedCopy, Permutation


SYMBOLS = "123456789abcdefghijk"
EMPTY_TOKENS = ("0", "∅")


def full_set(n: int) -> int:
    return (1 << n) - 1


def _check_ground(n: int) -> None:
    if not 1 <= n <= MAX_GROUND:
        raise LatticeArgumentError(f"ground size {n} outside 1..{MAX_GROUND}")


def elements(s: int) -> list[int]:
    out: list[int] = []
    e = 1
    while s:
        if s & 1:
            out.append(e)
        s >>= 1
        e += 1
    return out


def from_elements(elems: Iterable[int], n: int) -> int:
    s = 0
    for e in elems:
        if not 1 <= e <= n:
            raise LatticeArgumentError(f"element {e} outside [{n}]")
        s |= 1 << (e - 1)
    return s


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def chain_set(i: int, n: int) -> int:
    if not 0 <= i <= n:
        raise LatticeArgumentError(f"chain index {i} outside 0..{n}")
    return (1 << i) - 1


def shackle(i: int, n: int) -> int:
    if not 1 <= i <= n - 1:
        raise LatticeArgumentError(f"shackle index {i} outside 1..{n - 1}")
    return ((1 << (i - 1)) - 1) | (1 << i)


def chain_sets(n: int) -> tuple[int, ...]:
    return tuple((1 << i) - 1 for i in range(n + 1))


def is_chain_set(s: int) -> bool:
    return s & (s + 1) == 0


def canonical_chain(n: int) -> Family:
    _check_ground(n)
    return Family(n=n, members=chain_sets(n))


def contains_chain(family: Family) -> bool:
    return all(c in family for c in chain_sets(family.n))


def off_chain(family: Family) -> tuple[int, ...]:
    return tuple(m for m in family.members if not is_chain_set(m))


def complement(s: int, n: int) -> int:
    return full_set(n) & ~s


def reverse_labels(s: int, n: int) -> int:
    """Apply i -> n+1-i."""
    out = 0
    for e in elements(s):
        out |= 1 << (n - e)
    return out


def dual_set(s: int, n: int) -> int:
    return reverse_labels(complement(s, n), n)


def dual(family: Family) -> Family:
    n = family.n
    return Family(n=n, members=tuple(dual_set(m, n) for m in family.members))


def relabel_set(s: int, perm: Permutation) -> int:
    out = 0
    for e in elements(s):
        out |= 1 << (perm.image[e - 1] - 1)
    return out


def relabel(family: Family, perm: Permutation) -> Family:
    if perm.n != family.n:
        raise LatticeArgumentError(f"permutation of size {perm.n} used on B_{family.n}")
    return Family(n=family.n, members=tuple(relabel_set(m, perm) for m in family.members))


def make_permutation(image: Iterable[int]) -> Permutation:
    try:
        return Permutation(image=tuple(image))
    except ValueError as e:
        raise LatticeArgumentError(str(e)) from e


# --- text shorthand ---

def render_set(s: int) -> str:
    if s == 0:
        return "0"
    return "".join(SYMBOLS[e - 1] for e in elements(s))


def render_family(family: Family, *, skip_chain: bool = False) -> str:
    members = off_chain(family) if skip_chain else family.members
    return ",".join(render_set(m) for m in members)


def parse_set(token: str, n: int, *, offset: int = 0) -> int:
    """Parse one shorthand set such as "235"; offset is the token's position for error reports."""
    text = token.strip()
    lead = offset + (len(token) - len(token.lstrip()))
    if not text:
        raise FamilyParseError("empty set token", position=lead)
    if text in EMPTY_TOKENS:
        return 0
    s = 0
    for k, ch in enumerate(text):
        e = SYMBOLS.find(ch.lower()) + 1
        if e == 0:
            raise FamilyParseError(f"unexpected character {ch!r}", position=lead + k)
        if e > n:
            raise FamilyParseError(f"element {e} exceeds n={n}", position=lead + k)
        if s >> (e - 1) & 1:
            raise FamilyParseError(f"element {e} repeated", position=lead + k)
        s |= 1 << (e - 1)
    return s


def parse_members(text: str, n: int) -> list[int]:
    body = text.strip()
    start = text.find(body) if body else 0
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
        start += 1
    if not body.strip():
        return []
    out: list[int] = []
    pos = start
    for token in body.split(","):
        out.append(parse_set(token, n, offset=pos))
        pos += len(token) + 1
    return out


def parse_family(text: str, n: int, *, with_chain: bool = False) -> Family:
    _check_ground(n)
    members = parse_members(text, n)
    if with_chain:
        members.extend(chain_sets(n))
    return Family(n=n, members=tuple(members))


# --- JSON payloads ---

def family_to_payload(family: Family) -> dict[str, Any]:
    return {"n": family.n, "sets": [elements(m) for m in family.members]}


def family_from_payload(data: Any) -> Family:
    try:
        n = int(data["n"])
        _check_ground(n)
        members = tuple(from_elements(s, n) for s in data["sets"])
    except (KeyError, TypeError) as e:
        raise LatticeArgumentError(f"malformed family JSON: {e}") from e
    return Family(n=n, members=members)


def copy_to_payload(copy: InducedCopy) -> dict[str, list[int]]:
    return {
        "a": elements(copy.a),
        "a_up": elements(copy.a_up),
        "b": elements(copy.b),
        "b_up": elements(copy.b_up),
    }

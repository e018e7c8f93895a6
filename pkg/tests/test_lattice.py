import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from satlattice.errors import FamilyParseError, LatticeArgumentError
from satlattice.freeness import related
from satlattice.lattice import (
    canonical_chain,
    chain_set,
    chain_sets,
    contains_chain,
    dual,
    elements,
    family_from_payload,
    family_to_payload,
    from_elements,
    make_permutation,
    parse_family,
    relabel,
    render_family,
    shackle,
)
from satlattice.models import Family

from strategies import chained_families, families, permutations


def test_chain_set_prefixes():
    assert chain_set(0, 5) == 0
    assert elements(chain_set(3, 5)) == [1, 2, 3]
    assert elements(chain_set(5, 5)) == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("i", [-1, 6])
def test_chain_set_out_of_range(i):
    with pytest.raises(LatticeArgumentError):
        chain_set(i, 5)


def test_shackles():
    assert elements(shackle(1, 4)) == [2]
    assert elements(shackle(2, 5)) == [1, 3]
    assert elements(shackle(4, 5)) == [1, 2, 3, 5]
    with pytest.raises(ValueError):
        shackle(5, 5)
    with pytest.raises(LatticeArgumentError):
        shackle(0, 5)


def test_canonical_chain():
    assert canonical_chain(2).members == (0, 1, 3)
    assert canonical_chain(3).members == (0, 1, 3, 7)
    for n in range(1, 10):
        assert canonical_chain(n).size == n + 1


def test_family_is_sorted_and_deduplicated():
    f = Family(n=3, members=(5, 2, 2, 0))
    assert f.members == (0, 2, 5)
    assert f == Family(n=3, members=(0, 5, 2))
    assert hash(f) == hash(Family(n=3, members=(2, 0, 5)))


def test_family_rejects_large_members():
    with pytest.raises(ValidationError):
        Family(n=3, members=(8,))


def test_dual_matches_small_table():
    f = parse_family("2,23", 3, with_chain=True)
    assert dual(f) == parse_family("3,13", 3, with_chain=True)
    self_dual = parse_family("2,13", 3, with_chain=True)
    assert dual(self_dual) == self_dual


@given(families())
def test_dual_is_an_involution(f):
    assert dual(dual(f)) == f
    assert dual(f).size == f.size


@given(st.integers(1, 12))
def test_dual_fixes_the_chain(n):
    assert dual(canonical_chain(n)) == canonical_chain(n)


@given(st.data())
def test_relabel_preserves_relations(data):
    f = data.draw(families(min_n=2, max_n=6, max_members=10))
    perm = data.draw(permutations(f.n))
    g = relabel(f, perm)
    assert g.size == f.size
    assert relabel(g, perm.inverse()) == f
    moved = {m: relabel(Family(n=f.n, members=(m,)), perm).members[0] for m in f.members}
    for x in f.members:
        for y in f.members:
            assert (x & y == x) == (moved[x] & moved[y] == moved[x])


def test_relabel_rejects_wrong_size():
    with pytest.raises(LatticeArgumentError):
        relabel(canonical_chain(3), make_permutation([2, 1]))


def test_make_permutation_validates():
    with pytest.raises(LatticeArgumentError):
        make_permutation([1, 1, 3])


def test_parse_and_render_shorthand():
    f = parse_family("{2, 13}", 3, with_chain=True)
    assert contains_chain(f)
    assert render_family(f, skip_chain=True) == "2,13"
    assert render_family(canonical_chain(2)) == "0,1,12"


@pytest.mark.parametrize(
    "text, position",
    [("2,x3", 2), ("2,4", 2), ("22", 1), ("2,,3", 2)],
)
def test_parse_errors_carry_positions(text, position):
    with pytest.raises(FamilyParseError) as err:
        parse_family(text, 3)
    assert err.value.position == position


def test_empty_set_tokens():
    assert parse_family("0,∅", 2).members == (0,)


def test_json_payload():
    f = parse_family("2,13", 3, with_chain=True)
    payload = family_to_payload(f)
    assert payload == {"n": 3, "sets": [[], [1], [2], [1, 2], [1, 3], [1, 2, 3]]}
    assert family_from_payload(payload) == f
    with pytest.raises(LatticeArgumentError):
        family_from_payload({"sets": []})
    with pytest.raises(LatticeArgumentError):
        from_elements([4], 3)


def test_chain_sets_helper():
    assert chain_sets(3) == (0, 1, 3, 7)


@given(families())
def test_render_parse_roundtrip(f):
    assert parse_family(render_family(f), f.n) == f


@given(chained_families())
def test_render_parse_roundtrip_without_chain(f):
    assert parse_family(render_family(f, skip_chain=True), f.n, with_chain=True) == f


@pytest.mark.parametrize("n", range(2, 13))
def test_shackles_sit_beside_the_chain(n):
    for j in range(1, n + 1):
        added = chain_set(j, n) & ~chain_set(j - 1, n)
        assert chain_set(j - 1, n) & chain_set(j, n) == chain_set(j - 1, n)
        assert added.bit_count() == 1
    for i in range(1, n):
        s = shackle(i, n)
        assert not related(s, chain_set(i, n))
        for j in range(n + 1):
            if j != i:
                assert related(s, chain_set(j, n))

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satlattice.constructions import build_f_star
from satlattice.errors import LatticeArgumentError
from satlattice.freeness import (
    find_induced_copy,
    find_induced_copy_with,
    is_free,
    is_induced_2c2,
    is_saturated,
    related,
    saturation_certificate,
)
from satlattice.lattice import canonical_chain, dual, from_elements, make_permutation, parse_family, relabel
from satlattice.models import Family

from strategies import permutations


def S(*elems, n=5):
    return from_elements(elems, n)


def brute_force_has_copy(members):
    """Every 4-subset, every way of splitting it into two pairs."""
    for quad in combinations(members, 4):
        for first in combinations(quad, 2):
            second = tuple(x for x in quad if x not in first)
            x, y = first
            u, v = second
            if related(x, y) and related(u, v) and not any(related(p, q) for p in first for q in second):
                return True
    return False


def test_related():
    assert related(S(1), S(1, 3))
    assert not related(S(1), S(2, 3))
    assert related(S(2), S(2))


def test_is_induced_2c2():
    assert is_induced_2c2(S(1), S(1, 3), S(2), S(2, 3))
    assert not is_induced_2c2(0, S(1), S(2), S(2, 3))
    assert not is_induced_2c2(S(1), S(1, 2), S(2), S(2, 3))


def test_find_copy_examples():
    assert find_induced_copy(canonical_chain(5)) is None
    assert find_induced_copy(parse_family("2,13", 3, with_chain=True)) is None
    f = Family(n=3, members=(S(1, n=3), S(1, 3, n=3), S(2, n=3), S(2, 3, n=3)))
    copy = find_induced_copy(f)
    assert copy is not None
    assert is_induced_2c2(*copy.sets)
    assert set(copy.sets) == set(f.members)


def test_find_copy_with_outsider():
    chain = canonical_chain(4)
    for s in range(16):
        if s not in chain:
            assert find_induced_copy_with(chain, s) is None
    f = build_f_star(4, 2)
    copy = find_induced_copy_with(f, S(3, n=4))
    assert copy is not None
    assert S(3, n=4) in copy.sets
    assert is_induced_2c2(*copy.sets)


def test_find_copy_with_rejects_bad_sets():
    f = canonical_chain(3)
    with pytest.raises(LatticeArgumentError):
        find_induced_copy_with(f, 1)
    with pytest.raises(LatticeArgumentError):
        find_induced_copy_with(f, 8)


def test_saturation_examples():
    assert is_free(canonical_chain(3))
    assert not is_saturated(canonical_chain(3))
    assert is_saturated(Family(n=2, members=(0, 1, 2, 3)))
    assert is_saturated(parse_family("2,3,1235,1245", 5, with_chain=True))


def test_certificate_reports_first_failing_outsider():
    cert = saturation_certificate(canonical_chain(3))
    assert cert.free and not cert.saturated
    assert cert.failing_outsider == S(2, n=3)


def test_certificate_for_non_free_family():
    f = Family(n=3, members=(0, S(1, n=3), S(1, 3, n=3), S(2, n=3), S(2, 3, n=3), 7))
    cert = saturation_certificate(f)
    assert not cert.free and not cert.saturated
    assert is_induced_2c2(*cert.internal_copy.sets)


def test_certificate_witnesses_every_outsider():
    f = parse_family("4,13,125,235", 5, with_chain=True)
    cert = saturation_certificate(f)
    assert cert.saturated
    assert [w.outsider for w in cert.witnesses] == [s for s in range(32) if s not in f]
    for w in cert.witnesses:
        assert w.outsider in w.quadruple.sets
        assert is_induced_2c2(*w.quadruple.sets)
        assert all(x in f for x in w.quadruple.sets if x != w.outsider)


@st.composite
def small_families(draw):
    n = draw(st.integers(2, 7))
    members = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=14, unique=True))
    return Family(n=n, members=tuple(members))


@settings(max_examples=300)
@given(small_families())
def test_kernel_agrees_with_brute_force(f):
    assert is_free(f) == (not brute_force_has_copy(f.members))


@pytest.mark.slow
@settings(max_examples=10_000)
@given(small_families())
def test_kernel_agrees_with_brute_force_large_sample(f):
    assert is_free(f) == (not brute_force_has_copy(f.members))


@given(small_families(), st.data())
def test_outsider_copy_agrees_with_brute_force(f, data):
    outsiders = [s for s in range(1 << f.n) if s not in f]
    if not outsiders or not is_free(f):
        return
    s = data.draw(st.sampled_from(outsiders))
    copy = find_induced_copy_with(f, s)
    assert (copy is not None) == brute_force_has_copy((*f.members, s))


@given(small_families(), st.data())
def test_relabel_and_dual_preserve_freeness(f, data):
    perm = data.draw(permutations(f.n))
    assert is_free(relabel(f, perm)) == is_free(f)
    assert is_free(dual(f)) == is_free(f)


@settings(max_examples=60)
@given(st.data())
def test_relabel_and_dual_preserve_saturation(data):
    f = data.draw(small_families().filter(lambda g: g.n <= 5))
    perm = data.draw(permutations(f.n))
    assert is_saturated(relabel(f, perm)) == is_saturated(f)
    assert is_saturated(dual(f)) == is_saturated(f)


def test_catalog_families_stay_saturated_under_symmetries(catalogs):
    for f in catalogs[4].families:
        assert is_saturated(dual(f))
        assert is_saturated(relabel(f, make_permutation([3, 1, 4, 2])))


@given(small_families(), st.data())
def test_subfamilies_of_free_families_are_free(f, data):
    if not is_free(f):
        return
    keep = data.draw(st.lists(st.sampled_from(f.members), unique=True) if f.members else st.just([]))
    assert is_free(Family(n=f.n, members=tuple(keep)))
    for m in f.members:
        assert is_free(Family(n=f.n, members=tuple(x for x in f.members if x != m)))

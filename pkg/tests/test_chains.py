import random

import pytest

from satlattice.chains import (
    downset,
    downset_trichotomy,
    extract_maximal_chain,
    is_maximal_chain,
    linear_extension_of_downset_preorder,
)
from satlattice.errors import ExtractionError, NotSaturatedError, TrichotomyError
from satlattice.freeness import is_free
from satlattice.lattice import canonical_chain, from_elements, make_permutation, parse_family, relabel
from satlattice.models import Family
from satlattice.search import iter_free_families


NOT_NESTED = Family(n=3, members=(0b001, 0b101, 0b010, 0b110))


def test_downset_examples():
    assert downset(canonical_chain(4), 0b11).members == (0, 1)
    assert downset(canonical_chain(4), 0).members == ()
    f = parse_family("2,13", 3, with_chain=True)
    assert downset(f, 0b101).members == (0, 1)


def test_trichotomy_violation_pair():
    ok, pair = downset_trichotomy(NOT_NESTED)
    assert not ok
    assert set(pair) == {0b101, 0b110}
    assert downset_trichotomy(canonical_chain(5)) == (True, None)


def test_linear_extension_refuses_incomparable_downsets():
    with pytest.raises(TrichotomyError) as err:
        linear_extension_of_downset_preorder(NOT_NESTED)
    assert {err.value.first, err.value.second} == {0b101, 0b110}


def test_linear_extension_orders_by_downset():
    f = parse_family("2,3", 3, with_chain=True)
    order = linear_extension_of_downset_preorder(f)
    assert order[0] == 7
    assert order[-1] == 0
    # {1}, {2}, {3} share the downset {0}; ties go by bitmask
    assert order[-4:] == [1, 2, 4, 0]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trichotomy_holds_for_every_free_family_visited(n):
    count = 0
    for family in iter_free_families(n, n - 1):
        assert is_free(family)
        assert downset_trichotomy(family)[0], family
        count += 1
    assert count > 1


def _random_free_family(rng: random.Random, n: int) -> Family:
    members = [0, (1 << n) - 1]
    pool = list(range(1, (1 << n) - 1))
    rng.shuffle(pool)
    for s in pool[: rng.randint(1, len(pool))]:
        grown = Family(n=n, members=(*members, s))
        if is_free(grown):
            members.append(s)
    return Family(n=n, members=tuple(members))


@pytest.mark.parametrize("n, samples", [(5, 300), (6, 100)])
def test_trichotomy_on_sampled_free_families(n, samples):
    rng = random.Random(n)
    for _ in range(samples):
        assert downset_trichotomy(_random_free_family(rng, n))[0]


@pytest.mark.slow
@pytest.mark.parametrize("n", [5, 6])
def test_trichotomy_on_many_sampled_free_families(n):
    rng = random.Random(1000 + n)
    for _ in range(10_000):
        assert downset_trichotomy(_random_free_family(rng, n))[0]


def _check_extraction(family: Family) -> None:
    chain, trace = extract_maximal_chain(family, verify=True)
    assert is_maximal_chain(trace.chain, family.n)
    assert all(c in family for c in chain.members)
    assert chain.size == family.n + 1
    present = set(family.members)
    for upper, lower in zip(trace.g_seq, trace.g_seq[1:]):
        extra = upper & ~lower
        sub = extra
        while True:
            s = lower | sub
            assert s == upper or s in present
            if sub == 0:
                break
            sub = (sub - 1) & extra


def test_extraction_on_canonical_family():
    f = parse_family("2,3,1235,1245", 5, with_chain=True)
    chain, trace = extract_maximal_chain(f)
    assert is_maximal_chain(trace.chain, 5)
    assert trace.g_seq[0] == 31
    assert trace.g_seq[-1] == 0
    _check_extraction(f)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_extraction_after_random_relabelling(catalogs, n):
    rng = random.Random(n)
    families = catalogs[n].families
    for _ in range(100):
        image = list(range(1, n + 1))
        rng.shuffle(image)
        _check_extraction(relabel(rng.choice(families), make_permutation(image)))


@pytest.mark.slow
def test_extraction_after_random_relabelling_n6(catalog6):
    rng = random.Random(6)
    for _ in range(100):
        image = list(range(1, 7))
        rng.shuffle(image)
        _check_extraction(relabel(rng.choice(catalog6.families), make_permutation(image)))


def test_extraction_requires_saturation_when_verifying():
    with pytest.raises(NotSaturatedError):
        extract_maximal_chain(canonical_chain(3), verify=True)


def test_extraction_reports_the_failing_gap():
    f = Family(n=3, members=(0, 0b011, 0b111))
    with pytest.raises(ExtractionError) as err:
        extract_maximal_chain(f)
    assert (err.value.lower, err.value.upper, err.value.missing) == (0, 0b011, 0b010)


def test_extraction_needs_the_full_set():
    with pytest.raises(ExtractionError) as err:
        extract_maximal_chain(Family(n=2, members=(0, 1)))
    assert (err.value.lower, err.value.upper, err.value.missing) == (0b01, 0b11, 0b11)


def test_is_maximal_chain():
    assert is_maximal_chain([0, 1, 3, 7], 3)
    assert not is_maximal_chain([0, 3, 7], 3)
    assert not is_maximal_chain([0, 1, 6, 7], 3)
    assert is_maximal_chain([0, from_elements([2], 2), 3], 2)

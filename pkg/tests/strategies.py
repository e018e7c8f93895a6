from hypothesis import strategies as st

from satlattice.lattice import chain_sets
from satlattice.models import Family, Permutation


@st.composite
def families(draw, min_n=1, max_n=6, max_members=None):
    n = draw(st.integers(min_n, max_n))
    members = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=max_members or (1 << n)))
    return Family(n=n, members=tuple(members))


@st.composite
def chained_families(draw, min_n=2, max_n=6, max_extra=6):
    n = draw(st.integers(min_n, max_n))
    extra = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=max_extra))
    return Family(n=n, members=chain_sets(n) + tuple(extra))


def permutations(n):
    return st.permutations(range(1, n + 1)).map(lambda image: Permutation(image=tuple(image)))

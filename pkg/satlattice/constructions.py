from __future__ import annotations

import logging

from .errors import LatticeArgumentError
from .freeness import saturation_certificate
from .lattice import chain_sets, complement
from .models import ConstructionSpec, Family, SaturationCertificate


log = logging.getLogger(__name__)


def build_singletons(n: int) -> Family:
    """The prefix chain plus the singletons {2}, ..., {n}."""
    if n < 2:
        raise LatticeArgumentError(f"singleton construction needs n >= 2, got {n}")
    singles = tuple(1 << (e - 1) for e in range(2, n + 1))
    return Family(n=n, members=chain_sets(n) + singles)


def build_f_star(n: int, i: int) -> Family:
    """Chain plus {2}..{i} and the complements of {i}..{n-1}."""
    if not 2 <= i <= n - 1:
        raise LatticeArgumentError(f"F* index {i} outside 2..{n - 1}")
    singles = tuple(1 << (e - 1) for e in range(2, i + 1))
    antis = tuple(complement(1 << (e - 1), n) for e in range(i, n))
    return Family(n=n, members=chain_sets(n) + singles + antis)


def is_self_dual_f_star(n: int, i: int) -> bool:
    return n % 2 == 1 and 2 * i == n + 1


def build(spec: ConstructionSpec) -> Family:
    if spec.kind == "singletons":
        return build_singletons(spec.n)
    if spec.i is None:
        raise LatticeArgumentError("F* construction needs an index i")
    return build_f_star(spec.n, spec.i)


def verify_construction(spec: ConstructionSpec) -> SaturationCertificate:
    family = build(spec)
    cert = saturation_certificate(family)
    log.info("%s n=%d i=%s: saturated=%s", spec.kind, spec.n, spec.i, cert.saturated)
    return cert

"""Duality classes, golden fixture files, catalog comparison and catalog JSON."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Optional

from pydantic import BaseModel, ConfigDict

from .errors import CatalogIntegrityError, FamilyParseError, LatticeArgumentError
from .lattice import chain_sets, dual, family_from_payload, family_to_payload, parse_members
from .models import Catalog, DiffReport, DualityClass, DualMismatch, Family


CATALOG_FORMAT = "satlattice.catalog/1"
SELF_DUAL_TOKENS = ("itself", "self")


class GoldenRow(BaseModel):
    """One fixture line; dual is None when the line has no dual column."""

    model_config = ConfigDict(frozen=True)

    line: int
    family: Family
    dual: Optional[Family] = None


def _canonical(families: Iterable[Family]) -> list[Family]:
    return sorted(set(families), key=lambda f: f.members)


def group_by_duality(catalog: Catalog) -> Catalog:
    present = set(catalog.families)
    seen: set[Family] = set()
    classes: list[DualityClass] = []
    for family in _canonical(catalog.families):
        if family in seen:
            continue
        partner = dual(family)
        if partner == family:
            classes.append(DualityClass(representative=family))
        elif partner in present:
            classes.append(DualityClass(representative=family, partner=partner))
            seen.add(partner)
        else:
            raise CatalogIntegrityError(f"dual of {family.members} is missing from the catalog")
        seen.add(family)
    return catalog.model_copy(update={"families": _canonical(catalog.families), "classes": classes})


# --- golden fixtures ---

def _parse_column(text: str, n: int, *, line: int, offset: int) -> Family:
    try:
        members = parse_members(" " * offset + text, n)
    except FamilyParseError as e:
        raise FamilyParseError(e.reason, position=e.position, line=line) from e
    return Family(n=n, members=(*members, *chain_sets(n)))


def parse_golden(text: str, n: int) -> list[GoldenRow]:
    """Catalog shorthand: non-chain members per line, optional "| dual" column, # comments."""
    rows: list[GoldenRow] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        left, bar, right = body.partition("|")
        family = _parse_column(left, n, line=lineno, offset=0)
        partner: Optional[Family] = None
        if bar:
            if right.strip().lower() in SELF_DUAL_TOKENS:
                partner = family
            else:
                partner = _parse_column(right, n, line=lineno, offset=len(left) + 1)
        rows.append(GoldenRow(line=lineno, family=family, dual=partner))
    return rows


def load_golden(path: Path | str, n: int) -> list[GoldenRow]:
    return parse_golden(Path(path).read_text(encoding="utf-8"), n)


def golden_families(rows: list[GoldenRow]) -> list[Family]:
    """The set column together with the computed dual of each entry."""
    out: set[Family] = set()
    for row in rows:
        out.add(row.family)
        out.add(dual(row.family))
    return _canonical(out)


def dual_mismatches(rows: list[GoldenRow]) -> list[DualMismatch]:
    out = []
    for row in rows:
        if row.dual is None:
            continue
        computed = dual(row.family)
        if computed != row.dual:
            out.append(DualMismatch(line=row.line, family=row.family, transcribed=row.dual, computed=computed))
    return out


def catalog_diff(catalog: Catalog, golden: list[GoldenRow]) -> DiffReport:
    expected = golden_families(golden)
    want = set(expected)
    have = set(catalog.families)
    return DiffReport(
        n=catalog.n,
        golden_count=len(want),
        catalog_count=len(have),
        missing=[f for f in expected if f not in have],
        extra=_canonical(have - want),
        dual_mismatches=dual_mismatches(golden),
    )


# --- catalog JSON ---

def catalog_to_payload(catalog: Catalog) -> dict[str, Any]:
    return {
        "format": CATALOG_FORMAT,
        "n": catalog.n,
        "size": catalog.size,
        "fix_chain": catalog.fix_chain,
        "families": [family_to_payload(f) for f in catalog.families],
        "classes": [
            {
                "representative": family_to_payload(c.representative),
                "partner": family_to_payload(c.partner) if c.partner is not None else None,
                "self_dual": c.self_dual,
            }
            for c in catalog.classes
        ],
    }


def catalog_from_payload(data: Any) -> Catalog:
    if not isinstance(data, dict) or data.get("format") != CATALOG_FORMAT:
        raise LatticeArgumentError(f"not a {CATALOG_FORMAT} document")
    try:
        classes = [
            DualityClass(
                representative=family_from_payload(c["representative"]),
                partner=family_from_payload(c["partner"]) if c.get("partner") else None,
            )
            for c in data.get("classes", [])
        ]
        return Catalog(
            n=int(data["n"]),
            size=int(data["size"]),
            fix_chain=bool(data.get("fix_chain", True)),
            families=[family_from_payload(f) for f in data["families"]],
            classes=classes,
        )
    except (KeyError, TypeError) as e:
        raise LatticeArgumentError(f"malformed catalog JSON: {e}") from e


def dumps_catalog(catalog: Catalog) -> str:
    return json.dumps(catalog_to_payload(catalog), sort_keys=True, ensure_ascii=False)


def save_catalog(catalog: Catalog, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(catalog_to_payload(catalog), f, sort_keys=True, indent=2, ensure_ascii=False)
        f.write("\n")


def load_catalog(path: Path | str) -> Catalog:
    with Path(path).open("r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise LatticeArgumentError(f"{path}: {e}") from e
    return catalog_from_payload(data)

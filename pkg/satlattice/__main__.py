from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from . import __version__
from .catalog import catalog_diff, catalog_to_payload, group_by_duality, load_catalog, load_golden, save_catalog
from .chains import extract_maximal_chain
from .config import ConfigManager, Settings
from .constructions import build, verify_construction
from .errors import (
    ConfigError,
    ExtractionError,
    LatticeArgumentError,
    NotSaturatedError,
    SatLatticeError,
    SearchRefused,
    TrichotomyError,
)
from .freeness import saturation_certificate
from .lattice import copy_to_payload, elements, family_from_payload, family_to_payload, parse_family
from .models import Catalog, ConstructionSpec, Family
from .search import enumerate_at, search_min
from .ui import format_antichain, format_audit, format_catalog, format_certificate, format_diff, format_trace
from .witness import audit, audit_catalog


log = logging.getLogger("satlattice")


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps({"version": __version__, **payload}, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


def _read_family(args: argparse.Namespace) -> Family:
    if getattr(args, "family_json", None):
        raw = args.family_json
        if raw.startswith("@"):
            raw = Path(raw[1:]).read_text(encoding="utf-8")
        try:
            family = family_from_payload(json.loads(raw))
        except json.JSONDecodeError as e:
            raise LatticeArgumentError(f"--family-json: {e}") from e
        if family.n != args.n:
            raise LatticeArgumentError(f"family JSON is over n={family.n}, expected {args.n}")
        return family
    return parse_family(args.family, args.n, with_chain=not getattr(args, "no_chain", False))


def _checkpoint_path(args: argparse.Namespace, settings: Settings, low: int, high: int) -> Optional[str]:
    if args.checkpoint is None:
        return None
    if args.checkpoint:
        return args.checkpoint
    chain = "free" if args.no_fix_chain else "fixed"
    return str(Path(settings.checkpoint_dir) / f"n{args.n}-{low}-{high}-{chain}.jsonl")


def _catalog_payload(catalog: Catalog) -> dict[str, Any]:
    return {"catalog": catalog_to_payload(catalog)}


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    family = _read_family(args)
    cert = saturation_certificate(family, collect=args.certificate)
    payload: dict[str, Any] = {
        "command": "verify",
        "family": family_to_payload(family),
        "free": cert.free,
        "saturated": cert.saturated,
        "internal_copy": copy_to_payload(cert.internal_copy) if cert.internal_copy else None,
        "failing_outsider": elements(cert.failing_outsider) if cert.failing_outsider is not None else None,
    }
    if args.certificate:
        payload["witnesses"] = [
            {"outsider": elements(w.outsider), "copy": copy_to_payload(w.quadruple)} for w in cert.witnesses
        ]
    _emit(args, payload, format_certificate(family, cert, witnesses=args.certificate))
    return 0 if cert.saturated else 1


def cmd_construct(args: argparse.Namespace, settings: Settings) -> int:
    spec = ConstructionSpec(kind=args.kind, n=args.n, i=args.i)
    family = build(spec)
    payload: dict[str, Any] = {"command": "construct", "kind": spec.kind, "i": spec.i,
                               "family": family_to_payload(family)}
    if not args.verify:
        _emit(args, payload, f"{spec.kind} n={spec.n}: {family.size} sets")
        return 0
    cert = verify_construction(spec)
    payload["saturated"] = cert.saturated
    _emit(args, payload, format_certificate(family, cert))
    return 0 if cert.saturated else 1


def _search_kwargs(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    return {
        "fix_chain": not args.no_fix_chain,
        "threads": args.threads or settings.threads,
        "progress_interval": settings.progress_interval,
        "allow_large": args.allow_large,
        "max_n": settings.max_search_n,
    }


def _finish_catalog(args: argparse.Namespace, catalog: Catalog, extra: dict[str, Any]) -> int:
    catalog = group_by_duality(catalog)
    if args.out:
        save_catalog(catalog, args.out)
        log.info("catalog written to %s", args.out)
    _emit(args, {**extra, **_catalog_payload(catalog)}, format_catalog(catalog))
    return 0


def cmd_search(args: argparse.Namespace, settings: Settings) -> int:
    kwargs = _search_kwargs(args, settings)
    if args.size is not None:
        kwargs["checkpoint"] = _checkpoint_path(args, settings, args.size, args.size)
        catalog = enumerate_at(args.n, args.size, **kwargs)
        return _finish_catalog(args, catalog, {"command": "search", "min_size": None})
    kwargs["checkpoint"] = _checkpoint_path(args, settings, args.n + 2, min(2 * args.n, 1 << args.n))
    best, catalog = search_min(args.n, **kwargs)
    return _finish_catalog(args, catalog, {"command": "search", "min_size": best})


def cmd_enumerate(args: argparse.Namespace, settings: Settings) -> int:
    kwargs = _search_kwargs(args, settings)
    kwargs["checkpoint"] = _checkpoint_path(args, settings, args.size, args.size)
    catalog = enumerate_at(args.n, args.size, **kwargs)
    return _finish_catalog(args, catalog, {"command": "enumerate"})


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    if args.catalog:
        catalog = load_catalog(args.catalog)
        if catalog.n != args.n:
            raise LatticeArgumentError(f"catalog is over n={catalog.n}, expected {args.n}")
        reports, scan = audit_catalog(catalog.families)
        bad = [(f, r) for f, r in zip(catalog.families, reports) if not r.ok]
        payload = {
            "command": "analyze",
            "families": len(reports),
            "failing": [{"family": family_to_payload(f), "report": r.model_dump(mode="json")} for f, r in bad],
            "antichain": scan.model_dump(mode="json"),
        }
        text = [f"{len(reports)} families audited, {len(bad)} with findings"]
        text.extend(format_audit(r, f) for f, r in bad)
        text.append(format_antichain(scan))
        _emit(args, payload, "\n".join(text))
        return 0 if not bad and not scan.counterexamples else 1
    family = _read_family(args)
    report = audit(family)
    payload = {"command": "analyze", "family": family_to_payload(family), "ok": report.ok,
               "report": report.model_dump(mode="json")}
    _emit(args, payload, format_audit(report, family))
    return 0 if report.ok else 1


def cmd_extract_chain(args: argparse.Namespace, settings: Settings) -> int:
    family = _read_family(args)
    verify = settings.verify_extraction and not args.no_verify
    try:
        chain, trace = extract_maximal_chain(family, verify=verify)
    except (NotSaturatedError, TrichotomyError, ExtractionError) as e:
        _emit(args, {"command": "extract-chain", "error": type(e).__name__, "detail": str(e)}, f"extraction failed: {e}")
        return 1
    payload = {
        "command": "extract-chain",
        "chain": [elements(s) for s in trace.chain],
        "order": [elements(s) for s in trace.order],
        "g_seq": [elements(s) for s in trace.g_seq],
    }
    _emit(args, payload, format_trace(chain, trace))
    return 0


def cmd_catalog_diff(args: argparse.Namespace, settings: Settings) -> int:
    golden = load_golden(args.golden, args.n)
    if args.catalog:
        catalog = load_catalog(args.catalog)
    else:
        catalog = enumerate_at(args.n, 2 * args.n, threads=args.threads or settings.threads,
                               progress_interval=settings.progress_interval, max_n=settings.max_search_n)
    report = catalog_diff(catalog, golden)
    for m in report.dual_mismatches:
        log.warning("%s line %d: transcribed dual disagrees with the computed one", args.golden, m.line)
    payload = {
        "command": "catalog-diff",
        "golden_count": report.golden_count,
        "catalog_count": report.catalog_count,
        "missing": [family_to_payload(f) for f in report.missing],
        "extra": [family_to_payload(f) for f in report.extra],
        "dual_mismatches": [
            {"line": m.line, "family": family_to_payload(m.family),
             "transcribed": family_to_payload(m.transcribed), "computed": family_to_payload(m.computed)}
            for m in report.dual_mismatches
        ],
    }
    _emit(args, payload, format_diff(report))
    return 0 if report.empty else 1


SETUP_FIELDS = ("threads", "progress_interval", "checkpoint_dir", "verify_extraction", "max_search_n", "log_level")


def cmd_setup(args: argparse.Namespace, settings: Settings) -> int:
    cfg = ConfigManager()
    # start from the file alone so environment overrides are not persisted
    stored = cfg.load(apply_env=False)
    changes = {f: getattr(args, f) for f in SETUP_FIELDS if getattr(args, f, None) is not None}
    updated = Settings(**{**stored.model_dump(), **changes})
    if changes:
        cfg.save(updated)
        log.info("wrote %s", cfg.path)
    lines = [f"{cfg.path}"] + [f"  {k}: {v}" for k, v in updated.model_dump().items()]
    _emit(args, {"path": str(cfg.path), "settings": updated.model_dump(), "saved": bool(changes)}, "\n".join(lines))
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "construct": cmd_construct,
    "search": cmd_search,
    "enumerate": cmd_enumerate,
    "analyze": cmd_analyze,
    "extract-chain": cmd_extract_chain,
    "catalog-diff": cmd_catalog_diff,
    "setup": cmd_setup,
}


def build_parser() -> argparse.ArgumentParser:
    # --json is accepted before or after the verb
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Output JSON")

    p = argparse.ArgumentParser(prog="satlattice", description="Induced-2C2-saturated families in the Boolean lattice")
    p.add_argument("-v", "--verbose", action="count", default=0, help="Progress on stderr (-vv for debug)")
    p.add_argument("--json", action="store_true", default=False, help="Output JSON")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def family_args(sp: argparse.ArgumentParser, *, required: bool = True) -> None:
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--family", help='Non-chain members in shorthand, e.g. "2,3,1235,1245"')
        g.add_argument("--family-json", help='{"n": N, "sets": [[...], ...]} or @FILE')

    def search_args(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--threads", type=int, help="Worker processes (default SATLATTICE_THREADS or 1)")
        sp.add_argument("--out", help="Write the catalog JSON here")
        sp.add_argument("--checkpoint", nargs="?", const="", default=None,
                        help="Shard journal for resuming (default under the cache directory)")
        sp.add_argument("--allow-large", action="store_true", help="Lift the ground-size cap")
        sp.add_argument("--no-fix-chain", action="store_true", help="Only the empty and full sets are forced")

    p_verify = sub.add_parser("verify", parents=[common], help="Check freeness and saturation")
    p_verify.add_argument("--n", type=int, required=True)
    family_args(p_verify)
    p_verify.add_argument("--no-chain", action="store_true", help="Do not add the prefix chain to --family")
    p_verify.add_argument("--certificate", action="store_true", help="List a copy for every outsider")

    p_cons = sub.add_parser("construct", parents=[common], help="Build a known saturated family")
    p_cons.add_argument("--kind", choices=["singletons", "fstar"], required=True)
    p_cons.add_argument("--n", type=int, required=True)
    p_cons.add_argument("--i", type=int)
    p_cons.add_argument("--verify", action="store_true")

    p_search = sub.add_parser("search", parents=[common], help="Find the minimum saturated size")
    p_search.add_argument("--n", type=int, required=True)
    mode = p_search.add_mutually_exclusive_group(required=True)
    mode.add_argument("--min", action="store_true", help="Smallest size from n+2 upward")
    mode.add_argument("--size", type=int)
    search_args(p_search)

    p_enum = sub.add_parser("enumerate", parents=[common], help="All saturated families of one size")
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--size", type=int, required=True)
    search_args(p_enum)

    p_an = sub.add_parser("analyze", parents=[common], help="Witness and load audit")
    p_an.add_argument("--n", type=int, required=True)
    g = p_an.add_mutually_exclusive_group(required=True)
    g.add_argument("--family")
    g.add_argument("--family-json")
    g.add_argument("--catalog", help="Catalog JSON written by search/enumerate")

    p_ex = sub.add_parser("extract-chain", parents=[common], help="Maximal chain inside a saturated family")
    p_ex.add_argument("--n", type=int, required=True)
    family_args(p_ex)
    p_ex.add_argument("--no-verify", action="store_true", help="Skip the saturation check")

    p_diff = sub.add_parser("catalog-diff", parents=[common], help="Compare a catalog with a golden fixture")
    p_diff.add_argument("--n", type=int, required=True)
    p_diff.add_argument("--golden", required=True)
    p_diff.add_argument("--catalog", help="Catalog JSON (default: enumerate size 2n now)")
    p_diff.add_argument("--threads", type=int)

    p_setup = sub.add_parser("setup", parents=[common], help="Show or update the saved settings")
    p_setup.add_argument("--threads", type=int)
    p_setup.add_argument("--progress-interval", type=int)
    p_setup.add_argument("--checkpoint-dir")
    p_setup.add_argument("--max-search-n", type=int)
    p_setup.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    p_setup.add_argument("--verify-extraction", action=argparse.BooleanOptionalAction, default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    args = build_parser().parse_args(argv)
    try:
        settings = ConfigManager().load()
    except ConfigError as e:
        print(f"satlattice: {e}", file=sys.stderr)
        return 2

    level = getattr(logging, settings.log_level)
    if args.verbose:
        level = min(level, logging.INFO if args.verbose == 1 else logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.cmd](args, settings)
    except (LatticeArgumentError, SearchRefused, ConfigError, ValidationError, OSError) as e:
        print(f"satlattice {args.cmd}: {e}", file=sys.stderr)
        return 2
    except SatLatticeError as e:
        log.error("%s", e)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

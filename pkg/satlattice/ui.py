from __future__ import annotations

import sys
from typing import Optional

from .lattice import dual, render_family, render_set
from .models import (
    AntichainReport,
    AuditReport,
    Catalog,
    DiffReport,
    ExtractionTrace,
    Family,
    InducedCopy,
    SaturationCertificate,
)

# Ensure UTF-8 output on Windows for the set shorthand
if sys.platform == "win32":
    try:
        if hasattr(sys.stdout, "reconfigure"):
            sys.stdout.reconfigure(encoding="utf-8")
    except Exception:
        pass


def render_copy(copy: InducedCopy) -> str:
    return (
        f"{render_set(copy.a)} < {render_set(copy.a_up)}  ||  "
        f"{render_set(copy.b)} < {render_set(copy.b_up)}"
    )


def _table(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines.extend(fmt.format(*row) for row in rows)
    return "\n".join(line.rstrip() for line in lines)


def format_certificate(family: Family, cert: SaturationCertificate, *, witnesses: bool = False) -> str:
    head = f"n={family.n} |F|={family.size}  {render_family(family)}"
    if not cert.free:
        return f"{head}\nnot free: induced 2C2 {render_copy(cert.internal_copy)}"
    if not cert.saturated:
        return f"{head}\nfree but not saturated: adding {render_set(cert.failing_outsider)} creates no copy"
    out = [head, "saturated"]
    if witnesses:
        rows = [(render_set(w.outsider), render_copy(w.quadruple)) for w in cert.witnesses]
        out.append(_table(("outsider", "copy it creates"), rows))
    return "\n".join(out)


def format_trace(chain: Family, trace: ExtractionTrace) -> str:
    rows = [(str(j), render_set(g)) for j, g in enumerate(trace.g_seq)]
    return "\n".join([
        "order: " + ",".join(render_set(s) for s in trace.order),
        _table(("j", "G_j"), rows),
        "chain: " + " < ".join(render_set(s) for s in trace.chain),
    ])


def format_audit(report: AuditReport, family: Optional[Family] = None) -> str:
    out = []
    if family is not None:
        out.append(render_family(family, skip_chain=True))
    out.append(
        f"n={report.n} |F|={report.size} shackles present s={report.s} off-chain k={report.k}  "
        f"n-1<=2k: {'yes' if report.inequality_holds else 'NO'}  "
        f"2|F|>=3n+1: {'yes' if report.size_bound_holds else 'NO'}"
    )
    if report.loads:
        rows = [
            (render_set(l.member), f"{l.span.p},{l.span.q}", "shackle" if l.span.is_shackle else "",
             ",".join(str(i) for i in l.load) or "-")
            for l in report.loads
        ]
        out.append(_table(("member", "p,q", "", "load"), rows))
    for m in report.missing_shackles:
        cases = ",".join(str(c.case) for c in m.configs)
        out.append(f"missing S_{m.index}: cases [{cases}] witnessed by "
                   + (",".join(render_set(x) for x in m.witnesses) or "nobody"))
    if report.findings:
        out.append("findings:")
        out.extend(f"  [{f.check}] {f.detail}" for f in report.findings)
    else:
        out.append("no findings")
    return "\n".join(out)


def format_antichain(report: AntichainReport) -> str:
    line = f"antichain scan: {report.scanned} shackle-free families, {report.skipped} skipped"
    if not report.counterexamples:
        return line + ", no counterexamples"
    rows = [(render_family(c.family, skip_chain=True), render_set(c.lower), render_set(c.upper))
            for c in report.counterexamples]
    return line + "\n" + _table(("family", "lower", "upper"), rows)


def format_catalog(catalog: Catalog) -> str:
    head = (f"n={catalog.n} size={catalog.size}: {len(catalog.families)} families, "
            f"{len(catalog.classes)} duality classes")
    if catalog.classes:
        rows = [
            (render_family(c.representative, skip_chain=catalog.fix_chain),
             "itself" if c.self_dual else render_family(c.partner, skip_chain=catalog.fix_chain))
            for c in catalog.classes
        ]
        return head + "\n" + _table(("family", "dual"), rows)
    rows = [(render_family(f, skip_chain=catalog.fix_chain), render_family(dual(f), skip_chain=catalog.fix_chain))
            for f in catalog.families]
    return head + "\n" + _table(("family", "dual"), rows)


def format_diff(report: DiffReport) -> str:
    out = [f"n={report.n}: golden {report.golden_count} families, catalog {report.catalog_count}"]
    out.extend(f"  missing from catalog: {render_family(f, skip_chain=True)}" for f in report.missing)
    out.extend(f"  not in golden file:   {render_family(f, skip_chain=True)}" for f in report.extra)
    if report.empty:
        out.append("families agree")
    for m in report.dual_mismatches:
        out.append(
            f"  line {m.line}: dual of {render_family(m.family, skip_chain=True)} transcribed as "
            f"{render_family(m.transcribed, skip_chain=True)}, computed {render_family(m.computed, skip_chain=True)}"
        )
    return "\n".join(out)

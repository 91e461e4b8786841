"""Command line: spectrum, verify, patterns, toda.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .apposition import apposition_data, spectra, verify_mass_spectra
from .chevalley import build_lie_algebra
from .coxeter import cartan_eigenvalue
from .patterns import cluster_report, eigen_table, pf_type_analysis, pf_vector, scale_fit
from .report import VerificationReport
from .rootsys import RootSystemError, SimpleType, all_types, build_root_system
from .verify import DEFAULT_TOL, verify_type
from . import toda

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class ReportDocument:
    command: str
    type: str
    sections: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    passed: bool = True
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls(**json.loads(text))


def _clean(x):
    """JSON-safe copy: numpy scalars and arrays to python, non-finite floats to None."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    return x


def _provenance(tol: dict) -> dict:
    return {
        "library": "cartan_spectra",
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "tolerances": dict(sorted(tol.items())),
    }


def _parse_type(s: str) -> SimpleType:
    try:
        return SimpleType.parse(s)
    except (RootSystemError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _parse_tol(items: list[str] | None) -> dict:
    tol = dict(DEFAULT_TOL)
    for item in items or []:
        if "=" in item:
            k, v = item.split("=", 1)
            if k not in tol:
                raise UsageError(f"unknown tolerance key {k!r}; known: {', '.join(sorted(tol))}")
            tol[k] = float(v)
        else:
            val = float(item)
            tol = {k: (val if v > 0 else v) for k, v in tol.items()}
    return tol


def _checks(rep: VerificationReport) -> list[dict]:
    return [c.to_dict() for c in rep.checks]


# ---------------------------------------------------------------- commands


def cmd_spectrum(t: SimpleType, tol: dict) -> ReportDocument:
    rs = build_root_system(t)
    la = build_lie_algebra(rs)
    ap = apposition_data(la)
    rows = []
    for ms in spectra(ap):
        i = ms.exponent_index
        rows.append({
            "i": i,
            "exponent": ms.exponent,
            "lambda": cartan_eigenvalue(rs, i),
            "masses": ms.singular_values,
            "signed_roots": ms.signed_roots,
            "cartan_eigenvector": ms.matched_vector,
            "scale": ms.scale,
            "multiset_residual": ms.multiset_residual,
            "cartan_residual": ms.cartan_residual,
            "eigenspace_level": ms.eigenspace_level,
        })
    rep = verify_mass_spectra(la, ap, tol)
    doc = ReportDocument("spectrum", str(rs.type), passed=rep.passed)
    doc.sections = _clean({
        "rank": rs.rank,
        "coxeter_number": rs.coxeter_number,
        "exponents": list(rs.exponents),
        "spectrum": rows,
        "checks": _checks(rep),
    })
    return doc


def cmd_verify(types: list[SimpleType], tol: dict) -> ReportDocument:
    results = []
    t0 = time.perf_counter()
    for t in types:
        results.append(verify_type(t, tol))
    label = str(types[0]) if len(types) == 1 else "all"
    doc = ReportDocument("verify", label, passed=all(r.passed for r in results))
    doc.sections = _clean({
        "results": [r.to_dict() for r in results],
        "failing": [f"{r.type}:{s}" for r in results for s in r.failing_sections()],
    })
    doc.provenance = {"elapsed_seconds": round(time.perf_counter() - t0, 1)}
    return doc


def cmd_patterns(t: SimpleType, tol: dict) -> ReportDocument:
    rs = build_root_system(t)
    table = eigen_table(rs)
    clusters = [cluster_report(rs, table, i).to_dict() for i in range(1, rs.rank + 1)]
    perm = pf_type_analysis(rs, table, tol=tol["permutation"])
    rep = VerificationReport(str(rs.type))
    if perm.entries and not perm.conjectural:
        rep.add("multiset equality for gcd(k_i,h)=1", max(e["multiset_residual"] for e in perm.entries),
                tol["permutation"])
        if not perm.ambiguous:
            rep.add("permutations closed under composition", 0.0 if perm.closed else 1.0, 0.0)
            rep.add("group order = phi(h)/2", abs(len(perm.group) - perm.expected_order), 0)
    doc = ReportDocument("patterns", str(rs.type), passed=rep.passed)
    doc.sections = _clean({
        "exponents": list(rs.exponents),
        "coxeter_number": rs.coxeter_number,
        "conjectural": not rs.type.simply_laced,
        "eigenvectors": [table.vector(i) for i in range(1, rs.rank + 1)],
        "clusters": clusters,
        "permutations": perm.to_dict(),
        "checks": _checks(rep),
    })
    return doc


def cmd_toda(t: SimpleType, tol: dict, m: float = 1.0, grid: int = 32) -> ReportDocument:
    rs = build_root_system(t)
    la = build_lie_algebra(rs)
    ap = apposition_data(la)
    modes = toda.normal_modes(la, ap, m)
    rep = VerificationReport(str(rs.type))
    rows = []
    worst_an = 0.0
    for md in modes:
        boosted = md.with_momentum(0.6 * m * md.mu, m)
        an = max(toda.analytic_kg_residual(la, ap, md, m), toda.analytic_kg_residual(la, ap, boosted, m))
        worst_an = max(worst_an, an)
        rows.append({
            "j": md.j, "mu": md.mu, "k": md.k, "omega": md.omega,
            "shell_residual": md.shell_residual(m),
            "eigen_residual": toda.mode_eigen_residual(la, ap, md),
            "analytic_kg_residual": an,
        })
    mus = np.array([md.mu for md in modes])
    rep.add("masses ~ PF vector", scale_fit(mus, pf_vector(rs)), tol["multiset"])
    rep.add("analytic KG residual on the mass shell", worst_an, 1e-10)
    zero = toda.eom_residual(la, ap.e, ap.e_star, toda.FieldConfig.zeros(rs.rank, grid, 0.1, m))
    rep.add("D_e(0) = 0", max(zero.max_norm(), float(zero.off_cartan.max())), 1e-12)
    heavy = modes[-1]
    hs, errs, order = toda.kg_convergence(la, ap.e, heavy, m, sizes=(grid, 2 * grid, 4 * grid))
    rep.add("discrete KG residual order 2", abs(order - 2.0), 0.1, detail=f"fitted order {order:.3f}")
    cfg, md = toda.commensurate_config(modes[0], rs.rank, m, grid)
    eps, gaps, slope = toda.linearization_study(la, ap.e, ap.e_star, md, cfg)
    rep.add("D_e(eps phi) - eps Delta_e(phi) = O(eps^2)", max(0.0, 2.0 - slope), 0.1,
            detail=f"fitted slope {slope:.3f}")
    rep.add("[Delta_e, Delta_e'] = 0", toda.commutator_check(la, ap), tol["commutator"])
    doc = ReportDocument("toda", str(rs.type), passed=rep.passed)
    doc.sections = _clean({
        "m": m,
        "modes": rows,
        "mass_ratios": mus / mus.min() if mus.min() > 0 else mus,
        "convergence": {"spacings": hs, "residuals": errs, "order": order},
        "linearization": {"eps": eps, "gaps": gaps, "slope": slope},
        "checks": _checks(rep),
    })
    return doc


# ---------------------------------------------------------------- rendering


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, list):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def _check_lines(checks: list[dict], indent: str = "  ") -> list[str]:
    out = []
    for c in checks:
        flag = "PASS" if c["passed"] else "FAIL"
        tail = f"  ({c['detail']})" if c.get("detail") else ""
        out.append(f"{indent}[{flag}] {c['name']}: {_fmt(c['residual'])} <= {_fmt(c['tolerance'])}{tail}")
    return out


def render_table(doc: ReportDocument) -> str:
    s = doc.sections
    lines = [f"{doc.command} {doc.type}: {'PASS' if doc.passed else 'FAIL'}"]
    if doc.command == "spectrum":
        lines.append(f"  h = {s['coxeter_number']}, exponents {s['exponents']}")
        for row in s["spectrum"]:
            lines.append(f"  i={row['i']} k={row['exponent']} lambda={_fmt(row['lambda'])}")
            lines.append(f"    masses       {_fmt(row['masses'])}")
            if row["signed_roots"] is not None:
                lines.append(f"    signed roots {_fmt(row['signed_roots'])}")
            else:
                lines.append("    (doubled exponent: eigenspace-level comparison)")
        lines += _check_lines(s["checks"])
    elif doc.command == "verify":
        for r in s["results"]:
            lines.append(f"  {r['type']}: {'PASS' if r['passed'] else 'FAIL'}")
            for name, checks in r["sections"].items():
                bad = [c for c in checks if not c["passed"]]
                lines.append(f"    {name}: {len(checks) - len(bad)}/{len(checks)} checks pass")
                lines += _check_lines(bad, "      ")
        if s["failing"]:
            lines.append("  failing sections: " + ", ".join(s["failing"]))
    elif doc.command == "patterns":
        if s["conjectural"]:
            lines.append("  conjectural (non-simply-laced)")
        for c in s["clusters"]:
            parts = [f"{cl['indices']}->{cl['match']}" for cl in c["clusters"]]
            lines.append(f"  i={c['i']} k={c['exponent']} p={c['p']} q={c['q']} zeros={c['zero_indices']} "
                         + " ".join(parts))
        p = s["permutations"]
        for e in p["entries"]:
            amb = f" ({e['candidates']} candidates)" if e["candidates"] > 1 else ""
            lines.append(f"  sigma_{e['i']} (k={e['exponent']}) = {e['sigma']}{amb}")
        lines.append(f"  group {p['group']} closed={p['closed']} order={p['order']} expected={p['expected_order']}")
        lines += _check_lines(s["checks"])
    elif doc.command == "toda":
        lines.append(f"  m = {_fmt(s['m'])}")
        for row in s["modes"]:
            lines.append(f"  mode {row['j']}: mu={_fmt(row['mu'])} omega={_fmt(row['omega'])} "
                         f"KG residual {_fmt(row['analytic_kg_residual'])}")
        lines.append(f"  mass ratios {_fmt(s['mass_ratios'])}")
        lines += _check_lines(s["checks"])
    return "\n".join(lines) + "\n"


def render_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    s = doc.sections
    if doc.command == "spectrum":
        w.writerow(["type", "i", "exponent", "lambda", "j", "mass", "signed_root", "cartan_eigenvector"])
        for row in s["spectrum"]:
            for j, mass in enumerate(row["masses"]):
                sr = row["signed_roots"][j] if row["signed_roots"] is not None else ""
                cv = row["cartan_eigenvector"][j] if row["cartan_eigenvector"] is not None else ""
                w.writerow([doc.type, row["i"], row["exponent"], row["lambda"], j + 1, mass, sr, cv])
    elif doc.command == "verify":
        w.writerow(["type", "section", "check", "residual", "tolerance", "passed"])
        for r in s["results"]:
            for name, checks in r["sections"].items():
                for c in checks:
                    w.writerow([r["type"], name, c["name"], c["residual"], c["tolerance"], c["passed"]])
    elif doc.command == "patterns":
        w.writerow(["type", "i", "exponent", "p", "q", "cluster", "indices", "match", "residual"])
        for c in s["clusters"]:
            for n, cl in enumerate(c["clusters"], start=1):
                w.writerow([doc.type, c["i"], c["exponent"], c["p"], c["q"], n,
                            " ".join(map(str, cl["indices"])), cl["match"], cl["residual"]])
    elif doc.command == "toda":
        w.writerow(["type", "j", "mu", "k", "omega", "analytic_kg_residual", "eigen_residual"])
        for row in s["modes"]:
            w.writerow([doc.type, row["j"], row["mu"], row["k"], row["omega"],
                        row["analytic_kg_residual"], row["eigen_residual"]])
    return buf.getvalue()


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cartan-spectra", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="emit the JSON report document")
        fmt.add_argument("--csv", action="store_true", help="emit a flat CSV table")
        sp.add_argument("--tol", action="append", metavar="KEY=VAL|VAL",
                        help="override a tolerance (repeatable); a bare number overrides all")
        sp.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    sp = sub.add_parser("spectrum", help="mass spectra against Cartan eigenvectors")
    sp.add_argument("type")
    common(sp)
    sp = sub.add_parser("verify", help="run every check for one type or all of rank <= 8")
    sp.add_argument("type", nargs="?")
    sp.add_argument("--all", action="store_true")
    common(sp)
    sp = sub.add_parser("patterns", help="zeros, clusters and PF-type permutations")
    sp.add_argument("type")
    common(sp)
    sp = sub.add_parser("toda", help="normal modes and residual studies")
    sp.add_argument("type")
    sp.add_argument("--m", type=float, default=1.0, help="mass parameter (default 1)")
    sp.add_argument("--grid", type=int, default=32, help="coarsest grid size for the convergence study")
    common(sp)
    return p


def run(argv: list[str] | None = None) -> tuple[ReportDocument, str]:
    args = build_parser().parse_args(argv)
    tol = _parse_tol(args.tol)
    if args.command == "verify":
        if args.all == (args.type is not None):
            raise UsageError("verify needs exactly one of TYPE or --all")
        types = all_types(8) if args.all else [_parse_type(args.type)]
        doc = cmd_verify(types, tol)
    elif args.command == "spectrum":
        doc = cmd_spectrum(_parse_type(args.type), tol)
    elif args.command == "patterns":
        doc = cmd_patterns(_parse_type(args.type), tol)
    else:
        if args.m <= 0 or args.grid < 4:
            raise UsageError("--m must be positive and --grid at least 4")
        doc = cmd_toda(_parse_type(args.type), tol, args.m, args.grid)
    doc.provenance = {**_provenance(tol), **doc.provenance}
    if args.json:
        text = doc.to_json() + "\n"
    elif args.csv:
        text = render_csv(doc)
    else:
        text = render_table(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return doc, text


def main(argv: list[str] | None = None) -> int:
    try:
        doc, _ = run(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    return 0 if doc.passed else 1


if __name__ == "__main__":
    sys.exit(main())

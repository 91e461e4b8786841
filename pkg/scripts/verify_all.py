"""Run every verification layer for each type of rank <= 8 (plus A11) and tabulate worst residuals."""
import argparse
import json
import sys
import time

from cartan_spectra.rootsys import all_types
from cartan_spectra.verify import verify_type


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=8)
    ap.add_argument("--extra", nargs="*", default=["A11"])
    ap.add_argument("--json", metavar="FILE")
    args = ap.parse_args()

    types = [str(t) for t in all_types(args.max_rank)] + args.extra
    rows, ok = [], True
    t0 = time.perf_counter()
    print(f"{'type':>5} {'checks':>6} {'worst float residual':>22} {'seconds':>8}  status")
    for t in types:
        v = verify_type(t)
        checks = [c for r in v.sections.values() for c in r.checks]
        floats = [c.residual for c in checks if c.tolerance > 0]
        worst = max(floats) if floats else 0.0
        ok &= v.passed
        status = "ok" if v.passed else "FAIL " + ",".join(v.failing_sections())
        print(f"{t:>5} {len(checks):>6} {worst:>22.2e} {v.seconds:>8.2f}  {status}")
        rows.append({"type": t, "checks": len(checks), "worst": worst, "passed": v.passed})
    print(f"total {time.perf_counter() - t0:.1f}s, {'all pass' if ok else 'FAILURES'}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

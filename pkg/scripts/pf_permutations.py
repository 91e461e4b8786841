"""Zero patterns, clusters and PF-type permutations of the Cartan eigenvectors.

Default run reproduces the sl(12) cluster table and the E8 permutation group."""
import argparse

import numpy as np

from cartan_spectra.patterns import (
    cluster_report,
    cycle_string,
    e8_closed_form,
    eigen_table,
    pf_type_analysis,
    pf_vector,
)
from cartan_spectra.rootsys import build_root_system


def show(t: str) -> None:
    rs = build_root_system(t)
    tab = eigen_table(rs)
    print(f"== {t}  h={rs.coxeter_number}  exponents={list(rs.exponents)}")
    for i in range(1, rs.rank + 1):
        rep = cluster_report(rs, tab, i)
        cl = "  ".join(f"{c.indices}:{c.match}" for c in rep.clusters)
        print(f"  i={i:<2} k={rep.exponent:<2} p={rep.p} q={rep.q} zeros={rep.zero_indices}  {cl}")
    perm = pf_type_analysis(rs, tab)
    for e in perm.entries:
        print(f"  sigma for k={e['exponent']:<2}: {e['sigma']}  (candidates {e['candidates']})")
    print(f"  group: {[cycle_string(g) for g in perm.group]}  closed={perm.closed}  "
          f"order={len(perm.group)} (phi(h)/2 = {perm.expected_order})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("types", nargs="*", default=["A11", "E8"])
    args = ap.parse_args()
    for t in args.types:
        show(t)
    if "E8" in args.types:
        v = pf_vector(build_root_system("E8"))
        c = e8_closed_form()
        print(f"E8 PF vs closed form: max |diff| = {np.max(np.abs(v - c / np.linalg.norm(c))):.2e}")


if __name__ == "__main__":
    main()

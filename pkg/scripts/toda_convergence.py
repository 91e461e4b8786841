"""Toda residual studies: grid refinement of the Klein-Gordon residual and the amplitude sweep
of the nonlinear equation against its linearization, for every normal mode of one type."""
import argparse

import numpy as np

from cartan_spectra import toda
from cartan_spectra.apposition import apposition_data
from cartan_spectra.chevalley import build_lie_algebra


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("type", nargs="?", default="E6")
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4])
    args = ap.parse_args()

    la = build_lie_algebra(args.type)
    apd = apposition_data(la)
    modes = toda.normal_modes(la, apd, args.m)
    mus = np.array([md.mu for md in modes])
    print(f"{args.type}: masses {np.round(mus / mus.min(), 6).tolist()} (relative to lightest)")
    print(f"{'mode':>4} {'mu':>10} {'grid order':>10} {'eps slope':>10}  residuals on refinement")
    for md in modes:
        hs, errs, order = toda.kg_convergence(la, apd.e, md, args.m, sizes=tuple(args.sizes))
        cfg, md2 = toda.commensurate_config(md, la.rs.rank, args.m, args.sizes[0])
        _, _, slope = toda.linearization_study(la, apd.e, apd.e_star, md2, cfg, eps=tuple(args.eps))
        print(f"{md.j:>4} {md.mu:>10.6f} {order:>10.3f} {slope:>10.3f}  " + " ".join(f"{e:.2e}" for e in errs))
    print(f"commutator of linearized operators: {toda.commutator_check(la, apd):.2e}")


if __name__ == "__main__":
    main()

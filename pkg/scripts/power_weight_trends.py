"""Depth trends of the A_1 and A_p functionals for the power weights |x|^alpha.

The 1-periodic spine weight with s = 2^{-alpha-1} is the dyadic model of
|x|^alpha.  Prints the functional at each depth and the largest ratio between
consecutive depths; ratios near 1 read as bounded.

    python3 scripts/power_weight_trends.py --p 2 --alphas -0.5,0,0.5,0.9,1,1.5
"""

import argparse

from dyadic_weights import PeriodicSpec, a1_functional, ap_functional, periodic_weight


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--alphas", default="-0.75,-0.5,0,0.25,0.5,0.75,0.9,1,1.25,1.5")
    ap.add_argument("--depths", default="12,16,20,24")
    args = ap.parse_args()
    depths = [int(d) for d in args.depths.split(",")]

    for alpha in (float(a) for a in args.alphas.split(",")):
        spec = PeriodicSpec((2.0 ** (-alpha - 1.0),))
        a1, apv = [], []
        for d in depths:
            tree = periodic_weight(spec, d)
            a1.append(a1_functional(tree))
            apv.append(ap_functional(tree, args.p))
        g1 = max(b / a for a, b in zip(a1, a1[1:]))
        gp = max(b / a for a, b in zip(apv, apv[1:]))
        print(
            f"alpha={alpha:6.2f}  A_1 {[f'{v:.4g}' for v in a1]} (x{g1:.4f})  "
            f"A_{args.p:g} {[f'{v:.4g}' for v in apv]} (x{gp:.4f})"
        )


if __name__ == "__main__":
    main()

"""Paraproduct resolvent lower bounds for a certificate weight, next to RH_p of w_lambda.

    python3 scripts/resolvent_evidence.py --p 6 --depths 8,10,12,14
"""

import argparse

from dyadic_weights import build_counterexample, haar_coeffs_from_tree, periodic_weight, resolvent_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=6.0)
    ap.add_argument("--depths", default="8,10,12,14")
    ap.add_argument("--trials", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    depths = [int(d) for d in args.depths.split(",")]

    cert = build_counterexample(args.p)
    series = haar_coeffs_from_tree(periodic_weight(cert.spec_P, max(depths)))
    lams = [0.5 * cert.lam, cert.lam, 1.0]
    print(f"p={args.p:g} n={cert.n} certificate lambda={cert.lam:.4f}")
    rows = resolvent_sweep(series, args.p, depths, lams, trials=args.trials, seed=args.seed)
    for row in rows:
        print(
            f"depth {row['depth']:2d}  lambda {row['lambda']:.4f}  "
            f"norm >= {row['norm_lower_bound']:9.4f}  RH_p(w_lambda) = {row['rhp_functional_omega_lambda']:9.4f}"
        )


if __name__ == "__main__":
    main()

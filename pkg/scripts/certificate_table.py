"""Counterexample certificates across exponents, with the depth growth of both weights.

    python3 scripts/certificate_table.py --ps 1.5,2,3,6,10,50 --depth 24
"""

import argparse

from dyadic_weights import build_counterexample, minimal_period, rhp_constant_periodic
from dyadic_weights.periodic import truncated_rhp_functional


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ps", default="1.5,2,3,6,10,50")
    ap.add_argument("--depth", type=int, default=24)
    ap.add_argument("--overshoot", type=float, default=0.5)
    ap.add_argument("--period", default="auto", help="'auto', 'minimal' or an integer")
    args = ap.parse_args()
    period = int(args.period) if args.period.isdigit() else args.period

    head = f"{'p':>6} {'n_min':>5} {'n':>3} {'branch':>9} {'lambda':>8} {'margin P':>10} {'margin Pl':>10} {'RH(w)':>8} {'limit':>8} {'growth':>7}"
    print(head)
    for p in (float(x) for x in args.ps.split(",")):
        cert = build_counterexample(p, overshoot=args.overshoot, period=period)
        n = cert.n
        rh = truncated_rhp_functional(cert.spec_P, p, args.depth)
        lo = truncated_rhp_functional(cert.spec_Plam, p, n + 2)
        hi = truncated_rhp_functional(cert.spec_Plam, p, args.depth)
        print(
            f"{p:6g} {minimal_period(p):5d} {n:3d} {cert.branch:>9} {cert.lam:8.4f} "
            f"{cert.margin_P:10.3e} {cert.margin_Plam:10.3e} {rh:8.4f} "
            f"{rhp_constant_periodic(cert.spec_P, p):8.4f} {hi / lo:7.3f}"
        )


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""How the time to contact scales with the slip length.

A constant squeezing force closes the gap in finite time whenever the
surfaces slip; with no-slip surfaces it never would. This script runs
the same massless encounter over a range of slip lengths beta and
tabulates the contact time T alongside the product T * beta.

Under this drag model the slip regularization turns the 1 / h drag
divergence into a log, so T picks up only a ln(h0 / beta) dependence
and stays finite for every positive beta. That also means T * beta is
not a constant of the sweep: it shrinks with beta, both from h0 >> beta
(the early no-slip-like transit dominates) and from h0 < beta (a
residual ln(beta / h0) factor survives). The table makes the actual
scaling easy to read off either way.
"""

import argparse
import csv
import sys

from swimcollide import (
    BoundaryCondition,
    Mode,
    SwimmerScenario,
    TerminationKind,
    simulate,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument(
        "--betas",
        type=float,
        nargs="+",
        default=[0.05, 0.1, 0.2],
        help="slip lengths to sweep",
    )
    ap.add_argument("--h0", type=float, default=1.0, help="initial half-gap")
    ap.add_argument("--force", type=float, default=1.0, help="squeezing force")
    ap.add_argument("--t-max", type=float, default=5000.0, help="time horizon")
    ap.add_argument("--csv", help="also write the table to this CSV file")
    args = ap.parse_args(argv)

    rows = []
    print(f"massless passive approach, f_ext = {args.force}, h0 = {args.h0}")
    print(f"{'beta':>8}  {'T_contact':>18}  {'T * beta':>18}  {'points':>7}")
    for beta in args.betas:
        sc = SwimmerScenario(
            mode=Mode.PASSIVE_FORCED,
            bc=BoundaryCondition.navier(beta),
            h0=args.h0,
            f_ext=args.force,
        )
        traj = simulate(sc, t_max=args.t_max)
        if traj.termination is not TerminationKind.COLLISION:
            print(f"{beta:>8g}  no contact before t = {args.t_max}")
            continue
        rows.append((beta, traj.t_coll, traj.t_coll * beta, len(traj.points)))
        print(
            f"{beta:>8g}  {traj.t_coll:>18.10f}  {traj.t_coll * beta:>18.10f}"
            f"  {len(traj.points):>7d}"
        )
    if len(rows) >= 2:
        products = [r[2] for r in rows]
        spread = max(products) / min(products)
        print()
        print(f"max / min of T * beta over the sweep: {spread:.3f}")
        print(
            "Slip caps the near-contact drag at ~kappa(beta) ln(beta / h), so"
            " T grows only logarithmically as beta shrinks (no-slip surfaces"
            " would never touch at all) and the product T * beta drifts"
            " downward with beta instead of holding constant."
        )

    if args.csv:
        with open(args.csv, "w", newline="\n", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["beta", "t_contact", "t_times_beta", "points"])
            for beta, t, tb, n in rows:
                writer.writerow([f"{beta:.17g}", f"{t:.17g}", f"{tb:.17g}", n])
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

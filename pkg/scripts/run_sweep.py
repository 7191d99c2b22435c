#!/usr/bin/env python3
"""Sweep the wall solver over a (nu, h) table and write the summary CSV."""

import argparse

import neelwall as nw


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nu-list", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--h-list", type=float, nargs="+", default=[0.0, 0.3, 0.5])
    ap.add_argument("--half-length", type=float, default=40.0)
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--out", type=str, default="sweep.csv")
    args = ap.parse_args()

    table = nw.sweep(args.nu_list, args.h_list,
                     half_length=args.half_length, n_points=args.points)
    header = (f"{'nu':>6} {'h':>5} {'energy':>12} {'width':>9} "
              f"{'a_multipole':>12} {'a_tailfit':>11} {'residual':>10} conv")
    print(header)
    for r in table:
        print(f"{r.nu:6.2f} {r.h:5.2f} {r.energy_total:12.6f} "
              f"{r.wall_width:9.4f} {r.amplitude_multipole:12.6f} "
              f"{r.amplitude_tailfit:11.6f} {r.residual_sup:10.2e} "
              f"{'y' if r.converged else 'N'}")
    nw.emit(table, "csv", args.out)
    print(f"wrote {args.out}")
    raise SystemExit(0 if table.all_converged else 2)


if __name__ == "__main__":
    main()

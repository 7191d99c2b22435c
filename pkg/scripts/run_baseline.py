#!/usr/bin/env python3
"""Solve the baseline wall (nu=1, h=0) and print the verification checklist."""

import argparse
import time

import neelwall as nw


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nu", type=float, default=1.0)
    ap.add_argument("--h", type=float, default=0.0)
    ap.add_argument("--half-length", type=float, default=40.0)
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--out", type=str, default=None)
    args = ap.parse_args()

    start = time.perf_counter()
    result = nw.solve_cell(args.nu, args.h, nw.SolveOptions(tol=args.tol),
                           half_length=args.half_length, n_points=args.points)
    elapsed = time.perf_counter() - start
    print(f"solve: converged={result.converged} iterations={result.iterations} "
          f"residual={result.residual_sup:.3e} ({elapsed:.2f}s)")
    print(f"energy: {result.energy.total:.8f} = "
          f"exchange {result.energy.exchange:.8f} "
          f"+ anisotropy {result.energy.anisotropy:.8f} "
          f"+ stray {result.energy.stray:.8f}")
    if not result.converged:
        raise SystemExit(2)

    report = nw.verify(result, tol=args.tol)
    print(f"monotone_strict: {report.monotone_strict} "
          f"(margin {report.monotone_margin:.3e})")
    print(f"symmetry_defect: {report.symmetry_defect:.3e}")
    print(f"range_ok: {report.range_ok}")
    print(f"wall width: {nw.wall_width(result.profile):.6f}")
    if report.decay:
        d = report.decay
        print(f"tail: multipole amplitude {d.amplitude_multipole:.6f}, "
              f"tail-fit amplitude {d.amplitude_tailfit:.6f}, "
              f"exponent {d.exponent_fit:.3f} over "
              f"[{args.half_length / 8:g}, {args.half_length / 4:g}]")
    if args.out:
        nw.emit(result, "json", args.out)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

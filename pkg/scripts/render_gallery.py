#!/usr/bin/env python3
"""Render an SVG gallery of the uniqueness-set constructions.

Builds one example of each construction (perturbed triple, real pair,
even-optimal, and samples on three concurrent lines) on a small window and
writes one SVG per set into the output directory, with the carrier lattice
mesh drawn under the tagged point sets.
"""

import argparse
import math
import pathlib

from fockpr import (
    GeneratorConfig,
    Lattice,
    density_opt_even,
    density_opt_real,
    random_triple,
    render_svg,
    sample_points,
    three_lines,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("gallery"))
    ap.add_argument("--v", type=float, default=0.45, help="lattice side length")
    ap.add_argument("--radius", type=float, default=6.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    lat = Lattice(args.v, args.v * 1j)
    cfg = GeneratorConfig(lat, window_radius=args.radius, gamma=7.0,
                          kappa_cap=1.0, seed=args.seed)
    sets = {
        "triple": random_triple(cfg),
        "real_pair": density_opt_real(args.v, window_radius=args.radius,
                                      seed=args.seed),
        "even_optimal": density_opt_even(args.v, window_radius=args.radius,
                                         seed=args.seed),
        "three_lines": three_lines(
            [0.0, math.pi / 3.0, 2.0 * math.pi / 3.0],
            radius=args.radius, pitch=args.v,
        ),
    }
    for name, obj in sets.items():
        path = args.out / f"{name}.svg"
        render_svg(obj, path=path,
                   mesh=hasattr(obj, "lattice"),
                   title=f"{name} (v = {args.v}, seed = {args.seed})")
        count = len(obj) if not hasattr(obj, "points") else len(sample_points(obj))
        print(f"wrote {path} ({count} points)")


if __name__ == "__main__":
    main()

"""Admissible (alpha, Re gamma) region map as CSV and PNG.

Each cell of an n_alpha x n_gamma grid over (0, 2] x (0, gamma_max] is
coloured by the integrator order k = floor(1/alpha + Re gamma): dark shades
where the process is whitenable, light shades where it is not, with blue and
green alternating between neighbouring values of k.  Red marks the cells
where 1/alpha + Re gamma is an integer and no process is defined; since
those curves rarely pass through a cell centre, the image also paints red
every cell whose k differs from its neighbour along Re gamma.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np
from PIL import Image

from fracomplex import region_map

COLOURS = {
    (0, True): (20, 60, 160),
    (0, False): (150, 180, 235),
    (1, True): (20, 120, 50),
    (1, False): (160, 220, 160),
}
FORBIDDEN = (220, 30, 30)


def region_image(rows, n_alpha: int, n_gamma: int) -> np.ndarray:
    """(n_alpha, n_gamma, 3) image, alpha increasing downwards."""
    img = np.zeros((n_alpha, n_gamma, 3), dtype=np.uint8)
    ks = np.full((n_alpha, n_gamma), -1)
    for idx, row in enumerate(rows):
        i, j = divmod(idx, n_gamma)
        if row["forbidden"]:
            img[i, j] = FORBIDDEN
        else:
            ks[i, j] = row["k"]
            img[i, j] = COLOURS[(row["k"] % 2, row["whitenable"])]
    img[:, 1:][ks[:, 1:] != ks[:, :-1]] = FORBIDDEN
    return img


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-alpha", type=int, default=400)
    ap.add_argument("--n-gamma", type=int, default=600)
    ap.add_argument("--gamma-max", type=float, default=3.0)
    ap.add_argument("--out", type=Path, default=Path("region_map"), help="output prefix")
    args = ap.parse_args(argv)
    alphas = 2.0 * np.arange(1, args.n_alpha + 1) / args.n_alpha
    gammas = args.gamma_max * np.arange(1, args.n_gamma + 1) / args.n_gamma
    rows = region_map(alphas, gammas)
    with open(f"{args.out}.csv", "w") as fh:
        fh.write("alpha,re_gamma,k,whitenable,forbidden\n")
        for row in rows:
            k = "" if row["k"] is None else row["k"]
            fh.write(f"{row['alpha']!r},{row['re_gamma']!r},{k},{int(row['whitenable'])},{int(row['forbidden'])}\n")
    Image.fromarray(region_image(rows, args.n_alpha, args.n_gamma)[::-1]).save(f"{args.out}.png")
    mismatches = sum(r["whitenable"] != r["k_member"] for r in rows if not r["forbidden"])
    print(f"{len(rows)} cells, {sum(r['forbidden'] for r in rows)} forbidden, "
          f"{mismatches} whitenability / k-membership mismatches")


if __name__ == "__main__":
    main()

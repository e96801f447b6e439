"""Regenerate tests/data/gamma_oracle.csv with mpmath at 50 digits.

Rows: 60 generic (s, z) pairs for Gamma(s, z), 20 with z = 0 (the complete
gamma function Gamma(s)) and 20 with s = 0 (the exponential integral E1(z)).
"""

from __future__ import annotations

import argparse
from pathlib import Path

import mpmath as mp
import numpy as np

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "gamma_oracle.csv"


def _off_cut(rng, radius):
    while True:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(z) > 0.05 and not (z.real < 0 and abs(z.imag) < 0.05):
            return z


def rows(seed: int = 20240607):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(60):
        s = complex(rng.uniform(-4, 6), rng.uniform(-4, 4))
        out.append((s, _off_cut(rng, 10.0)))
    for _ in range(20):
        s = complex(rng.uniform(-8, 12), rng.uniform(-6, 6))
        out.append((s, 0j))
    for _ in range(20):
        out.append((0j, _off_cut(rng, 12.0)))
    return out


def oracle(s: complex, z: complex) -> complex:
    with mp.workdps(50):
        if z == 0:
            return complex(mp.gamma(mp.mpc(s)))
        return complex(mp.gammainc(mp.mpc(s), mp.mpc(z)))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args(argv)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("s_re,s_im,z_re,z_im,g_re,g_im\n")
        for s, z in rows():
            g = oracle(s, z)
            fh.write(",".join(f"{v:.17g}" for v in (s.real, s.imag, z.real, z.imag, g.real, g.imag)) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

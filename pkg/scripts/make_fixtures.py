"""Regenerate the self-fixtures in tests/data.

golden_realization.csv  one 1D realization, alpha = 2, gamma = 1.3 - 0.7i,
                        a = 1, b = -1, on a 64-point grid
golden_render.png       the colour rendering of a seeded 64 x 64 complex field

Both are regenerated from fixed seeds; the tests compare against them
byte for byte, so rerun this script only after a deliberate change of
numerics or of the colour map.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from fracomplex import ProcessSpec, UniformGrid, render_complex_png, simulate_1d, write_realization_csv

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
REALIZATION_SEED = 20240607
RENDER_SEED = 7


def golden_spec() -> ProcessSpec:
    return ProcessSpec(alpha=2.0, gamma=1.3 - 0.7j, a=1.0, b=-1.0)


def golden_grid() -> UniformGrid:
    return UniformGrid.centered(64, 0.25)


def render_field() -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=RENDER_SEED))
    return rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    spec = golden_spec()
    real = simulate_1d(spec, golden_grid(), REALIZATION_SEED)
    write_realization_csv(args.out / "golden_realization.csv", spec, real)
    render_complex_png(render_field(), args.out / "golden_render.png")


if __name__ == "__main__":
    main()

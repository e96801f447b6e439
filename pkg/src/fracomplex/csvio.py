"""Plain-text CSV formats: a ``# fracomplex <kind> v1`` line, ``# key = value``
header lines, a column row, then one row per sample written with 17
significant digits so that reading back is bit-exact."""

from __future__ import annotations

import ast

import numpy as np

from .errors import DomainError
from .operators import Signal, UniformGrid


def write_signal_csv(path, signal: Signal, header: dict | None = None) -> None:
    g = signal.grid
    with open(path, "w") as fh:
        fh.write("# fracomplex signal v1\n")
        for key, val in (("n", g.n), ("dx", g.dx), ("x0", g.x0)):
            fh.write(f"# {key} = {val!r}\n")
        for key, val in sorted((header or {}).items()):
            fh.write(f"# {key} = {val!r}\n")
        fh.write("x,re,im\n")
        for x, v in zip(g.x, signal.values):
            fh.write(f"{x:.17g},{v.real:.17g},{v.imag:.17g}\n")


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def read_table(path):
    """(kind, header dict, column names, float array) of a fracomplex CSV file."""
    header, kind, columns, rows = {}, None, None, []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if kind is None and body.startswith("fracomplex "):
                    kind = body.split()[1]
                elif "=" in body:
                    key, _, val = body.partition("=")
                    header[key.strip()] = _literal(val.strip())
            elif columns is None:
                columns = [c.strip() for c in line.split(",")]
            else:
                rows.append([float(c) for c in line.split(",")])
    if kind is None or columns is None:
        raise DomainError(f"{path} is not a fracomplex CSV file")
    data = np.array(rows, dtype=float).reshape(-1, len(columns))
    return kind, header, columns, data


def read_signal_csv(path) -> tuple[Signal, dict]:
    """Signal (and the header) from a signal or 1D realization CSV."""
    kind, header, columns, data = read_table(path)
    if columns != ["x", "re", "im"]:
        raise DomainError(f"{path}: expected columns x,re,im, got {','.join(columns)}")
    if {"n", "dx", "x0"} <= header.keys():
        grid = UniformGrid(header["n"], header["dx"], header["x0"])
        if grid.n != data.shape[0]:
            raise DomainError(f"{path}: header says n = {grid.n}, found {data.shape[0]} rows")
    else:
        x = data[:, 0]
        if x.size < 2:
            raise DomainError(f"{path}: need at least two samples")
        dx = (x[-1] - x[0]) / (x.size - 1)
        if not np.allclose(np.diff(x), dx, rtol=1e-9, atol=0):
            raise DomainError(f"{path}: samples are not uniformly spaced")
        grid = UniformGrid(x.size, dx, x[0])
    return Signal(grid, data[:, 1] + 1j * data[:, 2]), header


def read_field_csv(path) -> tuple[np.ndarray, dict]:
    """(ny, nx) complex array and header of a 2D realization CSV."""
    kind, header, columns, data = read_table(path)
    if columns != ["x", "y", "re", "im"]:
        raise DomainError(f"{path}: expected columns x,y,re,im")
    nx, ny = header["n"], header["ny"]
    return (data[:, 2] + 1j * data[:, 3]).reshape(ny, nx), header

"""On-disk formats: PSGRID1 snapshot grids, diagnostics CSV, and plain-text
overlay (trajectory dot / contour polyline) files.

PSGRID1 layout: the magic line "PSGRID1", then "key=value" header lines
(representation, component, nx, np, extents, time, hbar, endianness), a blank
line, then row-major 64-bit IEEE-754 little-endian values.
"""
from __future__ import annotations

import numpy as np

MAGIC = b"PSGRID1\n"

_HEADER_ORDER = ("representation", "component", "nx", "np",
                 "x_min", "x_max", "p_min", "p_max", "time", "hbar", "endianness")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_psgrid(path, array: np.ndarray, meta: dict) -> None:
    """Write a real 2-D array with its metadata header."""
    arr = np.ascontiguousarray(array, dtype="<f8")
    meta = dict(meta)
    meta.setdefault("endianness", "little")
    meta["np"], meta["nx"] = arr.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        for key in _HEADER_ORDER:
            fh.write(f"{key}={_fmt(meta[key])}\n".encode("utf-8"))
        fh.write(b"\n")
        fh.write(arr.tobytes())


def read_psgrid(path):
    """Read a PSGRID1 file back into (array, meta)."""
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError(f"{path}: not a PSGRID1 file")
        meta = {}
        while True:
            line = fh.readline().decode("utf-8")
            if line == "\n":
                break
            if not line or "=" not in line:
                raise ValueError(f"{path}: malformed header line {line!r}")
            key, value = line.rstrip("\n").split("=", 1)
            meta[key] = value
        nx, np_ = int(meta["nx"]), int(meta["np"])
        data = np.frombuffer(fh.read(8 * nx * np_), dtype="<f8").reshape(np_, nx)
    for key in ("x_min", "x_max", "p_min", "p_max", "time", "hbar"):
        meta[key] = float(meta[key])
    meta["nx"], meta["np"] = nx, np_
    return data.copy(), meta


def write_diagnostics_csv(path, records) -> None:
    from .analysis import DiagnosticsRecord

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(DiagnosticsRecord.csv_header() + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


def write_points(path, points) -> None:
    """Two-column text file of (coordinate, coordinate) pairs."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for a, b in points:
            fh.write(f"{a:.17g} {b:.17g}\n")


def write_polylines(path, polylines) -> None:
    """Polylines as two-column blocks separated by blank lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, line in enumerate(polylines):
            if i:
                fh.write("\n")
            for a, b in line:
                fh.write(f"{a:.17g} {b:.17g}\n")


def _clip(line, amax: float, bmax: float):
    a, b = line
    keep = (np.abs(a) <= amax) & (np.abs(b) <= bmax)
    return list(zip(a[keep].tolist(), b[keep].tolist()))


def level_set_direct(energy: float, m: float, omega: float,
                     x_max: float, p_max: float, n: int = 400):
    """Closed-form level set of H = p^2/2m - m w^2 x^2/2 = E, clipped to the
    box |x| <= x_max, |p| <= p_max. E = 0 yields the two separatrices."""
    lines = []
    if energy == 0.0:
        xs = np.linspace(-x_max, x_max, n)
        for sign in (1.0, -1.0):
            lines.append(_clip((xs, sign * m * omega * xs), x_max, p_max))
        return [ln for ln in lines if ln]
    u_max = np.arccosh(max(2.0, 2.0 * max(x_max, p_max)))
    u = np.linspace(-u_max, u_max, n)
    if energy < 0:
        x_e = np.sqrt(-2.0 * energy / (m * omega**2))
        for sign in (1.0, -1.0):
            lines.append(_clip((sign * x_e * np.cosh(u), sign * m * omega * x_e * np.sinh(u)),
                               x_max, p_max))
    else:
        p_e = np.sqrt(2.0 * m * energy)
        for sign in (1.0, -1.0):
            lines.append(_clip((p_e * np.sinh(u) / (m * omega), sign * p_e * np.cosh(u)),
                               x_max, p_max))
    return [ln for ln in lines if ln]


def level_set_reciprocal(energy: float, m: float, omega: float,
                         lam_max: float, theta_max: float, n: int = 400):
    """Level set of HH = lambda^2/2m - m w^2 theta^2/2 = E in the reciprocal
    plane; same hyperbola family with the roles of the axes exchanged."""
    lines = []
    if energy == 0.0:
        ls = np.linspace(-lam_max, lam_max, n)
        for sign in (1.0, -1.0):
            lines.append(_clip((ls, sign * ls / (m * omega)), lam_max, theta_max))
        return [ln for ln in lines if ln]
    u_max = np.arccosh(max(2.0, 2.0 * max(lam_max, theta_max)))
    u = np.linspace(-u_max, u_max, n)
    if energy > 0:
        lam_e = np.sqrt(2.0 * m * energy)
        for sign in (1.0, -1.0):
            lines.append(_clip((sign * lam_e * np.cosh(u), sign * lam_e * np.sinh(u) / (m * omega)),
                               lam_max, theta_max))
    else:
        th_e = np.sqrt(-2.0 * energy / (m * omega**2))
        for sign in (1.0, -1.0):
            lines.append(_clip((m * omega * th_e * np.sinh(u), sign * th_e * np.cosh(u)),
                               lam_max, theta_max))
    return [ln for ln in lines if ln]

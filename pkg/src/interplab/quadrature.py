"""Gauss-Legendre panel quadrature and vectorized golden-section maximization."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order < 1:
        raise ValueError("quadrature order must be positive")
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_integral(f, breaks: np.ndarray, order: int) -> float:
    """Integrate f over [breaks[0], breaks[-1]] with a fixed-order rule per panel.

    Panels are accumulated left to right in index order so repeated runs are
    bit-identical.  f must map a flat ndarray to a same-shaped ndarray.
    """
    breaks = np.asarray(breaks, dtype=float)
    if breaks.size < 2 or np.any(np.diff(breaks) < 0):
        raise ValueError("breakpoints must be nondecreasing with at least two entries")
    x, w = gauss_legendre(order)
    lo, hi = breaks[:-1], breaks[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
    per_panel = (vals * w[None, :]).sum(axis=1) * half
    total = 0.0
    for v in per_panel:
        total += float(v)
    return total


def golden_section_max(f, lo, hi, tol: float = 1e-10, max_iter: int = 200):
    """Vectorized golden-section maximization of f on brackets [lo, hi].

    f must accept an ndarray of points and return an ndarray of values; all
    brackets shrink together until the widest is below tol.  Returns midpoints
    and their values (callers keep their own running max over seeds).
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if np.any(hi < lo):
        raise ValueError("bracket endpoints out of order")
    width = float(np.max(hi - lo)) if lo.size else 0.0
    it = 0
    while width > tol and it < max_iter:
        d = _INVPHI * (hi - lo)
        x1 = hi - d
        x2 = lo + d
        keep_left = f(x1) > f(x2)
        hi = np.where(keep_left, x2, hi)
        lo = np.where(keep_left, lo, x1)
        width *= _INVPHI
        it += 1
    xm = 0.5 * (lo + hi)
    return xm, np.asarray(f(xm))

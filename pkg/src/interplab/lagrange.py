"""Lagrange basis functions, interpolation, and the Lebesgue function.

Evaluation goes through the second barycentric form with weights 1/P'(x_k)
renormalized in log space: the common rescaling cancels in every ratio, so
basis values and Lebesgue functions stay finite even when P'(x_k) itself is
far outside the double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .nodes import (
    NodeSet,
    eval_node_poly,
    nearest_node_distance,
    node_poly_deriv_at,
    node_poly_deriv_logs,
)
from .quadrature import golden_section_max, panel_integral

# treat x within this distance of a node as the node itself (removable 0/0)
NEAR_NODE = 1e-13

_CHUNK = 4096


@dataclass(frozen=True)
class LebesgueReport:
    """Sup and/or integral of the Lebesgue function over a subinterval."""

    interval: tuple[float, float]
    sup_value: float | None = None
    argmax: float | None = None
    integral_value: float | None = None
    grid_points_per_gap: int | None = None
    quadrature_order: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d


def scaled_weights(nodes: NodeSet) -> np.ndarray:
    """Barycentric weights 1/P'(x_k) rescaled so the largest magnitude is 1."""
    signs, logs = node_poly_deriv_logs(nodes)
    logw = -logs
    return signs * np.exp(logw - logw.max())


def _near_node_rows(diffs: np.ndarray) -> np.ndarray:
    return np.abs(diffs).min(axis=1) < NEAR_NODE


def lebesgue_values(nodes: NodeSet, x, weights: np.ndarray | None = None) -> np.ndarray:
    """lambda(x) = sum_k |l_k(x)| over an array of points (1 exactly at nodes)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    u = scaled_weights(nodes) if weights is None else weights
    out = np.empty(xs.size)
    flat = xs.ravel()
    for lo in range(0, flat.size, _CHUNK):
        sl = slice(lo, min(flat.size, lo + _CHUNK))
        d = flat[sl, None] - nodes.xs[None, :]
        near = _near_node_rows(d)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = u[None, :] / d
            lam = np.abs(t).sum(axis=1) / np.abs(t.sum(axis=1))
        lam[near] = 1.0
        out[sl] = lam
    return out.reshape(xs.shape)


def lebesgue_function(nodes: NodeSet, x: float) -> float:
    return float(lebesgue_values(nodes, [x])[0])


def basis_eval(nodes: NodeSet, k: int, x: float) -> float:
    """l_k(x) via the barycentric form; exact Kronecker delta at the nodes."""
    if not 0 <= k < nodes.n:
        raise IndexError(f"basis index {k} out of range for n={nodes.n}")
    d = x - nodes.xs
    j = int(np.abs(d).argmin())
    if abs(d[j]) < NEAR_NODE:
        return 1.0 if j == k else 0.0
    u = scaled_weights(nodes)
    t = u / d
    return float(t[k] / t.sum())


def interpolate(nodes: NodeSet, values, x):
    """Interpolating polynomial through (x_k, values[k]), evaluated at x."""
    values = np.asarray(values, dtype=float)
    if values.shape != (nodes.n,):
        raise ValueError(f"need exactly {nodes.n} sample values, got {values.shape}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    u = scaled_weights(nodes)
    out = np.empty(xs.size)
    flat = xs.ravel()
    for lo in range(0, flat.size, _CHUNK):
        sl = slice(lo, min(flat.size, lo + _CHUNK))
        d = flat[sl, None] - nodes.xs[None, :]
        near = _near_node_rows(d)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = u[None, :] / d
            vals = (t * values[None, :]).sum(axis=1) / t.sum(axis=1)
        if np.any(near):
            idx = np.abs(d[near]).argmin(axis=1)
            vals[near] = values[idx]
        out[sl] = vals
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def _breakpoints(nodes: NodeSet, a: float, b: float) -> np.ndarray:
    if not (-1.0 <= a < b <= 1.0):
        raise ValueError(f"need a non-degenerate interval inside [-1, 1], got [{a}, {b}]")
    inner = nodes.xs[(nodes.xs > a) & (nodes.xs < b)]
    return np.concatenate(([a], inner, [b]))


def lebesgue_sup(nodes: NodeSet, interval=(-1.0, 1.0), grid_points_per_gap: int = 32,
                 refine_tol: float = 1e-10) -> LebesgueReport:
    """sup of lambda over [a, b]: per-gap uniform seed grid, then golden section.

    lambda is smooth between consecutive nodes, so each gap is seeded with a
    uniform grid and the best cell of each gap is refined; the result is the
    max over every point ever evaluated, hence >= every sampled value.
    """
    a, b = float(interval[0]), float(interval[1])
    if grid_points_per_gap < 4:
        raise ValueError("grid_points_per_gap must be at least 4")
    u = scaled_weights(nodes)
    breaks = _breakpoints(nodes, a, b)
    lo, hi = breaks[:-1], breaks[1:]
    t = np.linspace(0.0, 1.0, grid_points_per_gap + 1)
    pts = lo[:, None] + t[None, :] * (hi - lo)[:, None]
    vals = lebesgue_values(nodes, pts.ravel(), weights=u).reshape(pts.shape)
    gaps = np.arange(lo.size)
    best = vals.argmax(axis=1)
    m = t.size
    br_lo = pts[gaps, np.maximum(best - 1, 0)]
    br_hi = pts[gaps, np.minimum(best + 1, m - 1)]
    gx, gv = golden_section_max(
        lambda q: lebesgue_values(nodes, q, weights=u), br_lo, br_hi, tol=refine_tol)
    cand_x = np.concatenate([pts.ravel(), gx])
    cand_v = np.concatenate([vals.ravel(), gv])
    i = int(cand_v.argmax())
    return LebesgueReport(interval=(a, b), sup_value=float(cand_v[i]),
                          argmax=float(cand_x[i]),
                          grid_points_per_gap=int(grid_points_per_gap))


def lebesgue_integral(nodes: NodeSet, interval=(-1.0, 1.0),
                      quadrature_order: int = 16) -> LebesgueReport:
    """integral of lambda over [a, b] by node-aligned Gauss-Legendre panels.

    Kinks of lambda occur only at nodes, so the integrand is analytic on each
    panel; panels are summed left to right for a deterministic result.
    """
    a, b = float(interval[0]), float(interval[1])
    if quadrature_order < 4:
        raise ValueError("quadrature_order must be at least 4")
    u = scaled_weights(nodes)
    breaks = _breakpoints(nodes, a, b)
    total = panel_integral(lambda q: lebesgue_values(nodes, q, weights=u),
                           breaks, quadrature_order)
    return LebesgueReport(interval=(a, b), integral_value=total,
                          quadrature_order=int(quadrature_order))


def adjacent_basis_sum_check(nodes: NodeSet, k: int, samples: int = 513):
    """min of l_k + l_{k+1} on [x_k, x_{k+1}]; passes iff >= 1 - 1e-10."""
    if not 0 <= k < nodes.n - 1:
        raise IndexError(f"need adjacent pair, got k={k} for n={nodes.n}")
    values = np.zeros(nodes.n)
    values[k] = values[k + 1] = 1.0
    grid = np.linspace(nodes.xs[k], nodes.xs[k + 1], max(3, samples))
    s = interpolate(nodes, values, grid)
    lowest = float(np.min(s))
    return lowest >= 1.0 - 1e-10, lowest


def gap_lower_bound_check(nodes: NodeSet, x: float, y: float = 0.0,
                          rel_slack: float = 1e-10):
    """Check |P(x+iy)| >= (delta(x+iy)/2) * min adjacent |P'| in log domain.

    Returns (passed, ratio) with ratio = |P| / lower bound; at a node both
    sides vanish and the check passes with ratio 1.
    """
    xs = nodes.xs
    if nodes.n < 2:
        raise ValueError("need at least two nodes")
    if x < xs[0] or x > xs[-1]:
        raise ValueError("x outside the node hull")
    k = int(np.clip(np.searchsorted(xs, x, side="right") - 1, 0, nodes.n - 2))
    d = nearest_node_distance(nodes, complex(x, y))
    if d == 0.0:
        return True, 1.0
    log_p = min(node_poly_deriv_at(nodes, k).logmag,
                node_poly_deriv_at(nodes, k + 1).logmag)
    lhs = eval_node_poly(nodes, complex(x, y)).logmag
    rhs = math.log(d / 2.0) + log_p
    return lhs - rhs >= math.log1p(-rel_slack), math.exp(lhs - rhs)

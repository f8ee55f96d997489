"""Logarithmic potential, node-density estimates, and the amplitude envelope.

The density estimator is the closed-form Poisson average of the empirical
node measure (never a finite difference), and the amplitude envelope is an
exact (max,+) convolution of log|P| with a linear cone on a uniform grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nodes import (
    NodeSet,
    eval_node_poly,
    log_abs_node_poly,
    nearest_node_distances,
    node_poly_deriv_logs,
    node_poly_log_deriv,
)

_CHUNK = 2048


def log_potential(nodes: NodeSet, z: complex) -> float:
    """Average of log 1/|z - x_i| against the node measure; +inf at a node."""
    lc = eval_node_poly(nodes, z)
    if lc.is_zero:
        return math.inf
    return -lc.logmag / nodes.n


def potential_level(nodes: NodeSet) -> float:
    """(1/n) log sum_k 1/|P'(x_k)|, via log-sum-exp over the weight logs."""
    _, logs = node_poly_deriv_logs(nodes)
    logw = -logs
    m = float(logw.max())
    return (m + math.log(float(np.sum(np.exp(logw - m))))) / nodes.n


def poisson_kernel(eta: float, x):
    """eta / (pi (x^2 + eta^2)); the half-plane harmonic-measure density."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    x = np.asarray(x, dtype=float)
    out = eta / (math.pi * (x * x + eta * eta))
    return float(out) if out.ndim == 0 else out


def density_estimate(nodes: NodeSet, x, eta: float):
    """Per-unit-length node density: (1/n) sum_i P_eta(x - x_i), closed form."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    flat = xa.ravel()
    out = np.empty(flat.size)
    step = max(1, 4_000_000 // nodes.n)
    for lo in range(0, flat.size, step):
        sl = slice(lo, min(flat.size, lo + step))
        d = flat[sl, None] - nodes.xs[None, :]
        out[sl] = np.sum(eta / (d * d + eta * eta), axis=1)
    out /= math.pi * nodes.n
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def default_smoothing(n: int) -> float:
    """Default smoothing ordinate 5 log(n)/n (must sit above log(n)/n)."""
    return 5.0 * math.log(max(n, 2)) / max(n, 2)


def arcsine_density(x):
    """1 / (pi sqrt(1 - x^2)) for |x| < 1."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) >= 1.0):
        raise ValueError("arcsine density requires |x| < 1")
    out = 1.0 / (math.pi * np.sqrt(1.0 - xa * xa))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DensityProfile:
    """Smoothed node density on a grid, with the potential level attached."""

    xs: np.ndarray
    rho: np.ndarray
    eta: float
    level: float

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if len(self.xs) != len(self.rho):
            raise ValueError("grid and density lengths differ")
        if np.any(np.asarray(self.rho) < 0):
            raise ValueError("density values must be nonnegative")

    def to_dict(self) -> dict:
        return {"eta": self.eta, "level": self.level,
                "points": len(self.xs),
                "x_min": float(self.xs[0]), "x_max": float(self.xs[-1])}


def density_profile(nodes: NodeSet, interval=(-1.0, 1.0), points: int = 257,
                    eta: float | None = None) -> DensityProfile:
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError("degenerate interval")
    eta = default_smoothing(nodes.n) if eta is None else eta
    xs = np.linspace(a, b, points)
    rho = density_estimate(nodes, xs, eta)
    return DensityProfile(xs=xs, rho=rho, eta=eta, level=potential_level(nodes))


def node_count_interval(nodes: NodeSet, interval) -> int:
    """Exact number of nodes in the closed interval."""
    return nodes.count_in(float(interval[0]), float(interval[1]))


def density_residual(nodes: NodeSet, profile: DensityProfile, interval) -> float:
    """| mu(J) - integral of the profile density over J |, trapezoid rule."""
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError("degenerate interval")
    mu = nodes.count_in(a, b) / nodes.n
    inner = profile.xs[(profile.xs > a) & (profile.xs < b)]
    pts = np.concatenate(([a], inner, [b]))
    vals = np.interp(pts, profile.xs, profile.rho)
    return abs(mu - float(np.trapz(vals, pts)))


@dataclass(frozen=True)
class AmplitudeProfile:
    """log of the cone-damped envelope sup_x' |P(x')| exp(-n^beta |x - x'|).

    Exact on its own grid: log_amp[i] = max_j (log|P(x_j)| - slope |i-j| h),
    computed by two running-max sweeps; attain[i] is the achieving j.
    """

    xs: np.ndarray
    log_amp: np.ndarray
    beta: float
    interval: tuple[float, float]
    attain: np.ndarray = field(repr=False)
    n: int = 0
    step: float = 0.0

    def log_at(self, x: float) -> float:
        return float(np.interp(x, self.xs, self.log_amp))

    def to_dict(self) -> dict:
        return {"beta": self.beta, "points": len(self.xs), "step": self.step,
                "interval": [self.interval[0], self.interval[1]], "n": self.n}


def amplitude_profile(nodes: NodeSet, interval, grid_step: float,
                      beta: float = 0.1) -> AmplitudeProfile:
    a, b = float(interval[0]), float(interval[1])
    if b < a:
        raise ValueError("interval endpoints out of order")
    slope = float(nodes.n) ** beta
    if a == b:
        xs = np.array([a])
        lp = log_abs_node_poly(nodes, xs)
        return AmplitudeProfile(xs=xs, log_amp=lp, beta=beta, interval=(a, b),
                                attain=np.array([0]), n=nodes.n, step=0.0)
    limit = float(nodes.n) ** (-beta) / 4.0
    if grid_step > limit:
        raise ValueError(
            f"grid step {grid_step:g} too coarse to resolve the cone; need <= {limit:g}")
    m = max(2, int(math.ceil((b - a) / grid_step)) + 1)
    xs = np.linspace(a, b, m)
    h = (b - a) / (m - 1)
    logp = log_abs_node_poly(nodes, xs)
    ramp = slope * h * np.arange(m)
    idx = np.arange(m)

    def sweep(vals):
        c = vals + ramp
        cm = np.maximum.accumulate(c)
        arg = np.maximum.accumulate(np.where(c >= cm, idx, -1))
        return cm - ramp, arg

    fwd, arg_f = sweep(logp)
    bwd_rev, arg_rev = sweep(logp[::-1])
    bwd = bwd_rev[::-1]
    arg_b = (m - 1) - arg_rev[::-1]
    take_f = fwd >= bwd
    log_amp = np.where(take_f, fwd, bwd)
    attain = np.where(take_f, arg_f, arg_b)
    return AmplitudeProfile(xs=xs, log_amp=log_amp, beta=beta, interval=(a, b),
                            attain=attain, n=nodes.n, step=h)


def extremizer(profile: AmplitudeProfile, x: float) -> float:
    """Grid point x' achieving the envelope sup at the grid point nearest x."""
    a, b = profile.interval
    if not a <= x <= b:
        raise ValueError(f"x={x} outside profile interval [{a}, {b}]")
    if profile.step == 0.0:
        return float(profile.xs[0])
    i = int(np.clip(round((x - a) / profile.step), 0, len(profile.xs) - 1))
    return float(profile.xs[profile.attain[i]])


def poly_floor_check(nodes: NodeSet, interval, samples: int = 1000, seed: int = 0,
                     log_slack: float = 1e-9):
    """Check delta(x) exp(-n * level) <= |P(x)| at sampled x, in log domain.

    Returns (passed, worst log margin).  Sample points hitting a node give
    -inf on both sides and pass by convention.
    """
    a, b = float(interval[0]), float(interval[1])
    if a < nodes.xs[0] or b > nodes.xs[-1]:
        raise ValueError("interval must sit inside the node hull")
    rng = np.random.default_rng(seed)
    x = rng.uniform(a, b, samples)
    lvl = potential_level(nodes)
    lhs = log_abs_node_poly(nodes, x)
    with np.errstate(divide="ignore"):
        rhs = np.log(nearest_node_distances(nodes, x)) - nodes.n * lvl
    margin = lhs - rhs
    ok = np.isfinite(margin)
    worst = float(np.min(margin[ok])) if np.any(ok) else math.inf
    return worst >= -log_slack, worst


def deriv_envelope_check(nodes: NodeSet, profile: AmplitudeProfile,
                         density: DensityProfile, x: float, slack: float = 0.2):
    """Check |P'(x)| <= (1 + slack) pi n A(x) rho(x), with P' = P * sum 1/(x - x_i).

    Returns (passed, ratio).  x must be interior to the profile and off the
    nodes (the log-derivative sum blows up at a node).
    """
    d = float(nearest_node_distances(nodes, np.array([x]))[0])
    if d < 1e-12:
        raise ValueError("x coincides with a node")
    lp = float(log_abs_node_poly(nodes, np.array([x]))[0])
    s = complex(node_poly_log_deriv(nodes, np.array([complex(x)]))[0])
    log_deriv = lp + math.log(abs(s))
    log_amp = profile.log_at(x)
    rho = density_estimate(nodes, x, density.eta)
    ratio = math.exp(log_deriv - log_amp - math.log(math.pi * nodes.n * rho))
    return ratio <= 1.0 + slack, ratio

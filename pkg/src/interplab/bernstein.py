"""Bernstein-type inequality checkers.

Global checks run on trigonometric polynomials, whose exponential type equals
the degree.  Local checks run on black-box holomorphic samplers over upper
rectangles {x + iy : x in I, 0 <= y <= y0}: the sup A is measured on the
lower edge, the type is measured from the growth of the upper edge, and each
classical inequality is tested against a configurable error budget
c1 exp(-pi L / (4 y0)) + c2 / (type * min(y0, L)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .nodes import NodeSet, eval_node_poly, eval_node_poly_batch, node_poly_log_deriv
from .quadrature import golden_section_max
from .trig import TWO_PI, TrigPoly, find_real_roots, sup_abs


class EdgeRealityError(ValueError):
    """Sampler is not real on the lower edge where the contract requires it."""


class TypeEstimateError(ValueError):
    """No usable exponential growth measured on the upper edge."""


class ZeroOnContourError(ValueError):
    pass


class WindingError(RuntimeError):
    """Argument-principle integral did not land near an integer."""


@dataclass(frozen=True)
class Rect:
    """Upper rectangle over the interval [a, b] with height y0."""

    a: float
    b: float
    y0: float

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("interval endpoints out of order")
        if not self.y0 > 0:
            raise ValueError("height must be positive")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.a, self.b)


@dataclass
class HoloSampler:
    """Deterministic evaluation contract z -> f(z) with optional derivative.

    When no derivative sampler is supplied, derivatives fall back to a central
    difference whose step the caller scales to the geometry at hand.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    domain: Rect | None = None
    deriv: Callable[[np.ndarray], np.ndarray] | None = None
    real_symmetric: bool = False
    label: str = ""

    def __call__(self, z):
        za = np.asarray(z, dtype=complex)
        out = np.asarray(self.fn(za))
        return out

    def derivative(self, z, h: float = 1e-6):
        za = np.asarray(z, dtype=complex)
        if self.deriv is not None:
            return np.asarray(self.deriv(za))
        return (self(za + h) - self(za - h)) / (2.0 * h)


@dataclass
class BernsteinReport:
    """Outcome of one global or local inequality battery.

    Every check is normalized to the rule value <= 1 + budget; margin-style
    checks store 1 - margin so the same rule applies.
    """

    kind: str
    bound: float
    exp_type: float
    checks: dict[str, dict]
    error_budget: float = 0.0
    distance: float | None = None
    constants: tuple[float, float] | None = None
    extras: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def rows(self) -> list[dict]:
        return [{"name": k, "ratio": c["ratio"], "budget": c["budget"],
                 "pass": c["pass"]} for k, c in self.checks.items()]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "exp_type": self.exp_type,
            "error_budget": self.error_budget,
            "distance": self.distance,
            "constants": list(self.constants) if self.constants else None,
            "checks": self.rows(),
            "extras": self.extras,
            "all_pass": self.all_pass,
        }


def _check(ratio: float, budget: float) -> dict:
    return {"ratio": float(ratio), "budget": float(budget),
            "pass": bool(ratio <= 1.0 + budget)}


def _circular_distance(t: np.ndarray, x0: float) -> np.ndarray:
    d = np.abs(np.mod(t - x0 + math.pi, TWO_PI) - math.pi)
    return d


def _polish_extremum(P: TrigPoly, x0: float, iters: int = 5) -> float:
    """Newton on P' around a golden-section argmax.

    Value comparisons cannot place a smooth peak better than sqrt(eps) in x;
    the derivative zero is simple, so a few Newton steps reach machine level,
    which the 1e-9 equality checks at sinusoid peaks genuinely need.
    """
    d1 = P.deriv()
    d2 = d1.deriv()
    x = x0
    for _ in range(iters):
        g = d1.eval(x)
        h = d2.eval(x)
        if h == 0.0 or not math.isfinite(g / h) or abs(g / h) > 0.1:
            break
        x -= g / h
    # only reject gross failures; values at the peak wiggle by +-eps anyway
    return x if abs(P.eval(x)) >= abs(P.eval(x0)) * (1.0 - 1e-12) else x0


def global_bernstein_report(P: TrigPoly, grid: int = 2048,
                            slack: float = 1e-9) -> BernsteinReport:
    """Derivative, Boas, growth, concavity-at-max, and zero-spacing checks.

    The exponential type of a degree-n trig polynomial is n exactly, so no
    estimation is involved; the sup A is grid seeded, golden refined, and
    Newton polished.
    """
    lam = float(P.degree)
    if P.degree < 1:
        raise ValueError("need a positive degree")
    amp, x0 = sup_abs(P, min_points=max(grid, 16 * P.degree))
    x0 = _polish_extremum(P, x0)
    amp = max(amp, abs(P.eval(x0)))
    m = max(grid, 16 * P.degree)
    xs = np.linspace(0.0, TWO_PI, m, endpoint=False)
    p = P.eval(xs)
    dp = P.deriv().eval(xs)

    r_deriv = float(np.max(np.abs(dp))) / (amp * lam)
    boas_grid = (dp * dp + lam * lam * p * p) / (lam * lam * amp * amp)
    r_boas = float(np.max(boas_grid))
    heights = (0.1, 0.5, 1.0)
    r_growth = max(
        float(np.max(np.abs(P.eval_complex(xs + 1j * h)))) / (amp * math.cosh(lam * h))
        for h in heights)

    sign = 1.0 if P.eval(x0) >= 0 else -1.0
    w = np.linspace(-math.pi / lam, math.pi / lam, 1024)[1:-1]
    margin = float(np.min(sign * P.eval(x0 + w) / amp - np.cos(lam * w)))

    roots = find_real_roots(P).roots
    gap = float(np.min(_circular_distance(roots, x0))) if roots.size else math.inf
    deficit = (math.pi / (2.0 * lam) - gap) if math.isfinite(gap) else -math.inf

    checks = {
        "bernstein": _check(r_deriv, slack),
        "boas": _check(r_boas, slack),
        "growth": _check(r_growth, slack),
        "cos_domination": _check(1.0 - margin, slack),
        "zero_spacing": _check(1.0 + deficit, slack),
    }
    extras = {"argmax": float(x0), "zero_gap": gap, "cos_margin": margin,
              "boas_peak": r_boas, "boas_floor": float(np.min(boas_grid))}
    return BernsteinReport(kind="global", bound=float(amp), exp_type=lam,
                           checks=checks, error_budget=slack, extras=extras)


def _edge_max(f: HoloSampler, xs: np.ndarray, y: float) -> tuple[float, float]:
    vals = np.abs(f(xs + 1j * y))
    i = int(vals.argmax())
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, xs.size - 1)]
    gx, gv = golden_section_max(lambda q: np.abs(f(q + 1j * y)),
                                np.array([lo]), np.array([hi]), tol=1e-12)
    if gv[0] >= vals[i]:
        return float(gv[0]), float(gx[0])
    return float(vals[i]), float(xs[i])


def measure_exponential_type(f: HoloSampler, rect: Rect,
                             edge_points: int = 2048) -> tuple[float, float]:
    """(A, type): lower-edge sup and the arccosh-based upper-edge growth rate.

    arccosh inverts the cosh profile that bounded-and-real-on-the-edge
    functions actually follow, so a pure sinusoid measures exactly its
    frequency (a plain log estimator would be low by log(2)/y0).
    """
    xs = np.linspace(rect.a, rect.b, edge_points)
    lower = f(xs + 0j)
    amp = float(np.max(np.abs(lower)))
    if amp == 0.0:
        raise TypeEstimateError("sampler vanishes on the lower edge")
    if float(np.max(np.abs(lower.imag))) > 1e-9 * amp:
        raise EdgeRealityError("sampler is not real on the lower edge")
    amp, _ = _edge_max(f, xs, 0.0)
    upper, _ = _edge_max(f, xs, rect.y0)
    growth = upper / amp
    if growth <= 1.0:
        raise TypeEstimateError(
            f"upper edge max {upper:g} does not exceed lower edge max {amp:g}")
    return amp, math.acosh(growth) / rect.y0


def local_bernstein_report(f: HoloSampler, rect: Rect, x: float,
                           c1: float = 10.0, c2: float = 10.0,
                           edge_points: int = 2048, y_points: int = 8,
                           fd_scale: float = 1e-6) -> BernsteinReport:
    """Local derivative, Boas, and growth checks at a point x of the interval."""
    if not rect.a < x < rect.b:
        raise ValueError("x must be interior to the rectangle interval")
    dist = min(x - rect.a, rect.b - x)
    amp, lam = measure_exponential_type(f, rect, edge_points)
    budget = c1 * math.exp(-math.pi * dist / (4.0 * rect.y0)) \
        + c2 / (lam * min(rect.y0, dist))
    h = fd_scale * min(rect.y0, dist, 1.0)
    fx = complex(f(np.array([complex(x)]))[0])
    dfx = complex(f.derivative(np.array([complex(x)]), h=h)[0])
    r1 = abs(dfx) / (amp * lam)
    r2 = abs(fx + 1j * dfx / lam) / amp
    ys = rect.y0 * np.arange(1, y_points + 1) / y_points
    vals = np.abs(f(x + 1j * ys))
    r3 = float(np.max(vals / (amp * np.cosh(lam * ys))))

    xs = np.linspace(rect.a, rect.b, min(edge_points, 1024))
    dsup = float(np.max(np.abs(f.derivative(xs + 0j, h=h)))) / (amp * lam)

    checks = {
        "bernstein": _check(r1, budget),
        "boas": _check(r2, budget),
        "growth": _check(r3, budget),
    }
    extras = {"deriv_sup_ratio": dsup, "f_at_x": [fx.real, fx.imag],
              "deriv_at_x": [dfx.real, dfx.imag]}
    return BernsteinReport(kind="local", bound=amp, exp_type=lam, checks=checks,
                           error_budget=budget, distance=dist,
                           constants=(c1, c2), extras=extras)


def node_poly_sampler(nodes: NodeSet) -> HoloSampler:
    """P as a plain complex sampler with exact log-derivative.

    Exponentiates the log form, so it is only usable while |log P| stays
    inside the double range (n up to a few hundred on [-1, 1]).
    """
    def fn(z):
        lm, ph = eval_node_poly_batch(nodes, z)
        return np.exp(lm + 1j * ph)

    def dfn(z):
        return fn(z) * node_poly_log_deriv(nodes, z)

    return HoloSampler(fn, deriv=dfn, real_symmetric=True,
                       label=f"nodepoly-{nodes.label}")


def unit_rescaled_poly(nodes: NodeSet, center: float,
                       density_at_center: float) -> HoloSampler:
    """P(center + z/(n rho)) / P(center), amplitude and root spacing near 1.

    Division happens in the log domain, so the result is well scaled no
    matter how small |P| is; the value at z = 0 is exactly 1.
    """
    if density_at_center <= 0:
        raise ValueError("density at the center must be positive")
    base = eval_node_poly(nodes, complex(center))
    if base.is_zero:
        raise ValueError("center coincides with a node")
    scale = 1.0 / (nodes.n * density_at_center)

    def fn(z):
        w = center + scale * np.asarray(z, dtype=complex)
        lm, ph = eval_node_poly_batch(nodes, w)
        return np.exp((lm - base.logmag) + 1j * (ph - base.phase))

    def dfn(z):
        w = center + scale * np.asarray(z, dtype=complex)
        return fn(z) * scale * node_poly_log_deriv(nodes, w)

    return HoloSampler(fn, deriv=dfn, real_symmetric=True,
                       label=f"rescaled-{nodes.label}@{center:g}")


def zero_count_disk(f: HoloSampler, center: complex, radius: float,
                    quad_points: int = 256, fd_scale: float = 1e-6) -> int:
    """Zeros inside D(center, radius) by the argument principle.

    Periodic trapezoid on the circle; rejects zeros on (or nearly on) the
    contour and non-integer windings.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    ts = TWO_PI * (np.arange(quad_points) + 0.5) / quad_points
    zs = center + radius * np.exp(1j * ts)
    fv = f(zs)
    fmax = float(np.max(np.abs(fv)))
    if fmax == 0.0 or float(np.min(np.abs(fv))) < 1e-9 * fmax:
        raise ZeroOnContourError("|f| nearly vanishes on the contour")
    dv = f.derivative(zs, h=fd_scale * radius)
    total = complex(np.mean(dv / fv * (zs - center)))
    count = total.real
    nearest = round(count)
    if abs(count - nearest) > 0.1 or abs(total.imag) > 0.1:
        raise WindingError(f"winding integral {total:.6g} is not close to an integer")
    return int(nearest)


def local_phragmen_lindelof_check(f: HoloSampler, rect: Rect, x: float, y: float,
                                  big_constant: float = 10.0,
                                  edge_points: int = 1024):
    """|f(x+iy)| <= A exp(C e^{-pi dist(x, dI)/y0} log M) with measured A, M.

    A is the larger of the upper and lower edge sups, M the side-edge excess
    over A clipped to >= 1.  Returns (passed, value, bound).
    """
    if not rect.a < x < rect.b:
        raise ValueError("x must be interior to the rectangle interval")
    if not 0 <= y <= rect.y0:
        raise ValueError("y outside the rectangle")
    xs = np.linspace(rect.a, rect.b, edge_points)
    ys = np.linspace(0.0, rect.y0, edge_points)
    lower = float(np.max(np.abs(f(xs + 0j))))
    upper = float(np.max(np.abs(f(xs + 1j * rect.y0))))
    sides = max(float(np.max(np.abs(f(rect.a + 1j * ys)))),
                float(np.max(np.abs(f(rect.b + 1j * ys)))))
    amp = max(lower, upper)
    if amp == 0.0:
        raise TypeEstimateError("sampler vanishes on the horizontal edges")
    ratio = max(1.0, sides / amp)
    dist = min(x - rect.a, rect.b - x)
    bound = amp * math.exp(big_constant * math.exp(-math.pi * dist / rect.y0)
                           * math.log(ratio))
    value = float(abs(f(np.array([complex(x, y)]))[0]))
    return value <= bound * (1.0 + 1e-12), value, bound

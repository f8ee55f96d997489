"""Real trigonometric polynomials: evaluation, prescribed-root construction,
root finding, and the sharp sup/integral/L1 lower bounds they satisfy.

Random real-rooted test polynomials are always built from prescribed roots
(a jittered uniform pattern fed to trig_from_roots), never from random
coefficients, so the 2n-distinct-real-roots hypothesis holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import golden_section_max, panel_integral

TWO_PI = 2.0 * math.pi


class TrigPolyError(ValueError):
    pass


class RootCountError(RuntimeError):
    """Root finding did not produce the expected 2n distinct real roots."""


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """a0 + sum_j a_j cos(jx) + b_j sin(jx) with real coefficients.

    a holds a_0..a_n, b holds b_1..b_n; the leading pair must not both vanish
    when the degree is positive.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 1 or b.ndim != 1 or a.size != b.size + 1:
            raise TrigPolyError("need coefficients a_0..a_n and b_1..b_n")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise TrigPolyError("coefficients must be finite")
        if a.size > 1 and a[-1] == 0.0 and b[-1] == 0.0:
            raise TrigPolyError("leading coefficient pair must not both vanish")
        a = a.copy()
        b = b.copy()
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degree(self) -> int:
        return self.b.size

    def leading_magnitude(self) -> float:
        if self.degree == 0:
            return abs(float(self.a[0]))
        return math.hypot(float(self.a[-1]), float(self.b[-1]))

    def eval(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        js = np.arange(1, self.degree + 1, dtype=float)
        ang = xa[:, None] * js[None, :]
        out = self.a[0] + np.cos(ang) @ self.a[1:] + np.sin(ang) @ self.b
        return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def eval_complex(self, z):
        za = np.atleast_1d(np.asarray(z, dtype=complex))
        js = np.arange(1, self.degree + 1, dtype=float)
        ang = za[:, None] * js[None, :]
        out = self.a[0] + np.cos(ang) @ self.a[1:] + np.sin(ang) @ self.b
        return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))

    def deriv(self) -> "TrigPoly":
        """Coefficient rotation: j (a_j, b_j) -> (j b_j, -j a_j)."""
        js = np.arange(1, self.degree + 1, dtype=float)
        if self.degree == 0:
            return TrigPoly(np.array([0.0]), np.array([]))
        return TrigPoly(np.concatenate(([0.0], js * self.b)), -js * self.a[1:])


def sinusoid(amplitude: float, degree: int, center: float) -> TrigPoly:
    """amplitude * cos(degree * (x - center))."""
    if amplitude <= 0 or degree < 1:
        raise TrigPolyError("need positive amplitude and degree")
    a = np.zeros(degree + 1)
    b = np.zeros(degree)
    a[-1] = amplitude * math.cos(degree * center)
    b[-1] = amplitude * math.sin(degree * center)
    return TrigPoly(a, b)


def trig_from_roots(roots) -> TrigPoly:
    """Degree-n real trig polynomial prod_k sin((x - r_k)/2) for 2n roots.

    The product is expanded in the exponential basis by convolving the 2n
    two-term factors; the leading coefficient magnitude is exactly 2 * 4^(-n).
    """
    r = np.mod(np.asarray(roots, dtype=float), TWO_PI)
    if r.size == 0 or r.size % 2:
        raise TrigPolyError("need a positive even number of roots")
    r = np.sort(r)
    gaps = np.diff(np.concatenate((r, [r[0] + TWO_PI])))
    if np.min(gaps) <= 1e-12:
        raise TrigPolyError("duplicate roots (mod 2 pi)")
    n = r.size // 2
    coef = np.array([1.0 + 0j])
    for rk in r:
        c = np.exp(-0.5j * rk)
        d = -np.exp(0.5j * rk)
        coef = d * np.concatenate((coef, [0j])) + c * np.concatenate(([0j], coef))
    gamma = ((-1.0) ** n / 4.0 ** n) * coef  # gamma[j + n] multiplies e^{ijx}
    a = np.empty(n + 1)
    b = np.empty(n)
    a[0] = gamma[n].real
    for j in range(1, n + 1):
        a[j] = (gamma[n + j] + gamma[n - j]).real
        b[j - 1] = (1j * (gamma[n + j] - gamma[n - j])).real
    return TrigPoly(a, b)


@dataclass(frozen=True)
class TrigRoots:
    """Roots in [0, 2pi) sorted increasing, with P' evaluated at each root."""

    roots: np.ndarray
    deriv_values: np.ndarray


def _merge_close(roots: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    if roots.size < 2:
        return roots
    r = np.sort(roots)
    keep = np.concatenate(([True], np.diff(r) > tol))
    r = r[keep]
    if r.size >= 2 and (r[0] + TWO_PI) - r[-1] <= tol:
        r = r[:-1]
    return r


def find_real_roots(P: TrigPoly, assume_all_real: bool = False,
                    samples_per_degree: int = 16, xtol: float = 1e-12) -> TrigRoots:
    """Sample, bracket sign changes, bisect; roots are returned mod 2pi.

    With assume_all_real set, the 2n count is enforced and derivative values
    are required to alternate in sign, which flags close pairs, double roots,
    and complex roots that a sign scan cannot see.
    """
    n = P.degree
    if n == 0:
        if assume_all_real:
            raise RootCountError("degree-0 polynomial has no roots")
        return TrigRoots(np.array([]), np.array([]))
    m = samples_per_degree * n
    ts = np.linspace(0.0, TWO_PI, m, endpoint=False)
    vals = P.eval(ts)
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        raise TrigPolyError("polynomial vanishes on the whole sample grid")

    exact = ts[vals == 0.0]
    signs = np.sign(np.concatenate((vals, [vals[0]])))
    tgrid = np.concatenate((ts, [TWO_PI]))
    # carry the previous nonzero sign through exact-zero samples so a crossing
    # through a sample is not double counted
    for i in range(signs.size):
        if signs[i] == 0.0:
            signs[i] = signs[i - 1] if i > 0 else signs[np.nonzero(signs)[0][0]]
    cross = signs[:-1] * signs[1:] < 0
    if exact.size:
        cross &= vals != 0.0  # crossing already accounted for by the exact root
    lo = tgrid[:-1][cross]
    hi = tgrid[1:][cross]
    flo = vals[cross]
    iters = int(math.ceil(math.log2(max(2.0, (TWO_PI / m) / xtol)))) + 2
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = P.eval(mid)
        go_left = flo * fm > 0
        lo = np.where(go_left, mid, lo)
        flo = np.where(go_left, fm, flo)
        hi = np.where(go_left, hi, mid)
    roots = _merge_close(np.mod(np.concatenate((exact, 0.5 * (lo + hi))), TWO_PI))
    dvals = P.deriv().eval(roots)
    if assume_all_real:
        if roots.size != 2 * n:
            raise RootCountError(
                f"found {roots.size} sign-change roots, expected {2 * n}; "
                "double or complex roots suspected")
        if np.max(np.abs(P.eval(roots))) > 1e-10 * scale:
            raise RootCountError("root residual above 1e-10 of the sup scale")
        s = np.sign(dvals)
        if np.any(s == 0) or np.any(s[1:] == s[:-1]):
            raise RootCountError("derivative values at roots fail to alternate")
    return TrigRoots(roots=np.asarray(roots), deriv_values=np.asarray(dvals))


def _sup_abs_on_arcs(P: TrigPoly, breaks: np.ndarray, pts_per_arc: int = 32,
                     tol: float = 1e-10) -> tuple[float, float]:
    lo, hi = breaks[:-1], breaks[1:]
    t = np.linspace(0.0, 1.0, pts_per_arc + 1)
    pts = lo[:, None] + t[None, :] * (hi - lo)[:, None]
    f = lambda q: np.abs(P.eval(q))
    vals = f(pts.ravel()).reshape(pts.shape)
    arcs = np.arange(lo.size)
    best = vals.argmax(axis=1)
    br_lo = pts[arcs, np.maximum(best - 1, 0)]
    br_hi = pts[arcs, np.minimum(best + 1, t.size - 1)]
    gx, gv = golden_section_max(f, br_lo, br_hi, tol=tol)
    cand_x = np.concatenate([pts.ravel(), gx])
    cand_v = np.concatenate([vals.ravel(), gv])
    i = int(cand_v.argmax())
    return float(cand_v[i]), float(cand_x[i])


def sup_abs(P: TrigPoly, min_points: int = 1024,
            points_per_degree: int = 64) -> tuple[float, float]:
    """(sup |P|, argmax) over one period, grid seeded and golden refined."""
    m = max(min_points, points_per_degree * max(P.degree, 1))
    breaks = np.linspace(0.0, TWO_PI, m + 1)
    return _sup_abs_on_arcs(P, breaks, pts_per_arc=4)


def trig_lebesgue_quantities(P: TrigPoly, quadrature_order: int = 16) -> tuple[float, float]:
    """(sup_x S |P(x)|, S * integral of |P|) with S = sum_k 1/|P'(x_k)|.

    Requires 2n distinct real roots; |P| integration panels split at the
    roots, where the only kinks sit.
    """
    tr = find_real_roots(P, assume_all_real=True)
    s = float(np.sum(1.0 / np.abs(tr.deriv_values)))
    breaks = np.concatenate((tr.roots, [tr.roots[0] + TWO_PI]))
    sup_p, _ = _sup_abs_on_arcs(P, breaks)
    integral_p = panel_integral(lambda q: np.abs(P.eval(q)), breaks, quadrature_order)
    return s * sup_p, s * integral_p


def l1_norm(P: TrigPoly, quadrature_order: int = 16) -> float:
    """integral of |P| over one period, panels split at the sign changes."""
    tr = find_real_roots(P)
    if tr.roots.size:
        breaks = np.concatenate((tr.roots, [tr.roots[0] + TWO_PI]))
    else:
        breaks = np.linspace(0.0, TWO_PI, 9)
    return panel_integral(lambda q: np.abs(P.eval(q)), breaks, quadrature_order)


def recip_deriv_sum(P: TrigPoly) -> float:
    """sum_k 1/|P'(x_k)| over the 2n real roots."""
    tr = find_real_roots(P, assume_all_real=True)
    return float(np.sum(1.0 / np.abs(tr.deriv_values)))


def fejer_square_wave(x, M: int, variant: str = "cos"):
    """Fejer-weighted odd-harmonic square-wave sum; bounded by 1 in magnitude."""
    if M < 1:
        raise ValueError("M must be at least 1")
    xa = np.asarray(x, dtype=float)
    ms = np.arange(1, M, 2, dtype=float)
    if ms.size == 0:
        out = np.zeros_like(xa)
        return float(out) if out.ndim == 0 else out
    w = (4.0 / math.pi) * (1.0 - ms / M) / ms
    ang = np.atleast_1d(xa)[:, None] * ms[None, :]
    if variant == "sin":
        out = np.sin(ang) @ w
    elif variant == "cos":
        out = np.cos(ang) @ (w * (-1.0) ** ((ms - 1) / 2))
    else:
        raise ValueError("variant must be 'sin' or 'cos'")
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def leading_term_residual(P: TrigPoly, height: float, grid: int = 720) -> float:
    """max_x |2 e^{-n h} P(x + ih) - (a_n - i b_n) e^{-inx}|.

    Decays like e^{-h} times the subleading coefficient mass, so it certifies
    that the leading pair controls P far above the real axis.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    n = P.degree
    if n == 0:
        raise TrigPolyError("need positive degree")
    xs = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    lhs = 2.0 * math.exp(-n * height) * P.eval_complex(xs + 1j * height)
    rhs = (P.a[-1] - 1j * P.b[-1]) * np.exp(-1j * n * xs)
    return float(np.max(np.abs(lhs - rhs)))


def random_real_rooted(degree: int, rng: np.random.Generator,
                       jitter: tuple[float, float] = (0.05, 0.35)) -> TrigPoly:
    """Real-rooted polynomial from a jittered uniform root pattern.

    Jitter stays below half the root spacing so the 2n roots remain distinct,
    and above a floor so the result is never a plain sinusoid.
    """
    if degree < 1:
        raise TrigPolyError("degree must be positive")
    two_n = 2 * degree
    spacing = TWO_PI / two_n
    amp = rng.uniform(*jitter)
    phase = rng.uniform(0.0, TWO_PI)
    offsets = amp * spacing * rng.uniform(-1.0, 1.0, two_n)
    return trig_from_roots(phase + spacing * np.arange(two_n) + offsets)


@dataclass(frozen=True)
class TrigTrial:
    index: int
    degree: int
    poly: TrigPoly
    is_sinusoid: bool


def trial_battery(count: int, max_degree: int, seed: int,
                  sinusoid_every: int = 10) -> list[TrigTrial]:
    """Deterministic battery of real-rooted polynomials, sinusoids mixed in."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        degree = int(rng.integers(1, max_degree + 1))
        if sinusoid_every and (i + 1) % sinusoid_every == 0:
            poly = sinusoid(rng.uniform(0.5, 2.0), degree, rng.uniform(0.0, TWO_PI))
            out.append(TrigTrial(i, degree, poly, True))
        else:
            out.append(TrigTrial(i, degree, random_real_rooted(degree, rng), False))
    return out

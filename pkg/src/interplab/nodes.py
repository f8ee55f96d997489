"""Interpolation node systems on [-1, 1] and log-domain polynomial evaluation.

The monic node polynomial prod_i (z - x_i) reaches magnitudes like 2**(1-n),
which leaves the double range long before n gets interesting.  Every product
formed here is therefore carried as (sign, log magnitude) for real values or
(log magnitude, phase) for complex ones; callers exponentiate only when the
result is known to be representable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_GAP_FLOOR = 1e-14

_NEG_INF = float("-inf")

# cap on elements of the (points x nodes) work matrices built per chunk
_CHUNK_BUDGET = 4_000_000


class NodeSetError(ValueError):
    """A set of abscissas violates the node-system invariants."""


@dataclass(frozen=True)
class SignedLog:
    """Real number stored as sign * exp(logmag).

    sign is -1, 0 or +1; logmag is kept at -inf (and ignored) when sign is 0.
    """

    sign: int
    logmag: float

    @staticmethod
    def from_value(v: float) -> "SignedLog":
        if v == 0.0:
            return SignedLog(0, _NEG_INF)
        return SignedLog(1 if v > 0 else -1, math.log(abs(v)))

    def value(self) -> float:
        """Collapse to a double; saturates for logmag outside the double range."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * math.inf

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        s = self.sign * other.sign
        if s == 0:
            return SignedLog(0, _NEG_INF)
        return SignedLog(s, self.logmag + other.logmag)

    def __neg__(self) -> "SignedLog":
        return SignedLog(-self.sign, self.logmag)

    def __add__(self, other: "SignedLog") -> "SignedLog":
        # pivot on the larger magnitude so the exp argument is <= 0
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.logmag >= other.logmag else (other, self)
        t = big.sign * small.sign * math.exp(small.logmag - big.logmag)
        if t == -1.0:
            return SignedLog(0, _NEG_INF)
        return SignedLog(big.sign, big.logmag + math.log1p(t))


@dataclass(frozen=True)
class LogComplex:
    """Complex number stored as exp(logmag) * exp(i * phase).

    logmag = -inf encodes an exact zero.  phase is kept in (-pi, pi].
    """

    logmag: float
    phase: float

    @staticmethod
    def zero() -> "LogComplex":
        return LogComplex(_NEG_INF, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.logmag == _NEG_INF

    def value(self) -> complex:
        if self.is_zero:
            return 0j
        try:
            r = math.exp(self.logmag)
        except OverflowError:
            r = math.inf
        return complex(r * math.cos(self.phase), r * math.sin(self.phase))

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.logmag + other.logmag,
                          wrap_phase(self.phase + other.phase))


def wrap_phase(p: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    return math.pi - (math.pi - p) % (2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Strictly increasing abscissas in [-1, 1].

    Also carries the empirical measure with atoms of mass 1/n at each node
    (see mass_below / count_in); immutable and safe to share across workers.
    """

    xs: np.ndarray
    label: str = ""
    gap_floor: float = DEFAULT_GAP_FLOOR

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        if xs.ndim != 1 or xs.size < 1:
            raise NodeSetError("need a one-dimensional, non-empty abscissa array")
        if not np.all(np.isfinite(xs)):
            raise NodeSetError("abscissas must be finite")
        if np.any(np.diff(xs) <= 0):
            raise NodeSetError("abscissas must be strictly increasing")
        if xs[0] < -1.0 or xs[-1] > 1.0:
            raise NodeSetError("abscissas must lie in [-1, 1]")
        if xs.size > 1:
            g = float(np.diff(xs).min())
            if g <= self.gap_floor:
                raise NodeSetError(
                    f"minimum node gap {g:.3g} at or below floor {self.gap_floor:.3g}")
        xs = xs.copy()
        xs.setflags(write=False)
        object.__setattr__(self, "xs", xs)

    @property
    def n(self) -> int:
        return int(self.xs.size)

    def min_gap(self) -> float:
        if self.n < 2:
            return math.inf
        return float(np.diff(self.xs).min())

    def mass_below(self, t: float) -> float:
        """Empirical-measure mass of (-inf, t]."""
        return float(np.searchsorted(self.xs, t, side="right")) / self.n

    def count_in(self, a: float, b: float) -> int:
        """Number of nodes in the closed interval [a, b]."""
        if b < a:
            raise ValueError("empty interval")
        lo = int(np.searchsorted(self.xs, a, side="left"))
        hi = int(np.searchsorted(self.xs, b, side="right"))
        return hi - lo

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "label": self.label,
            "nodes": [format(x, ".17g") for x in self.xs],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "NodeSet":
        try:
            n = int(data["n"])
            label = str(data["label"])
            xs = np.array([float(s) for s in data["nodes"]], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise NodeSetError(f"malformed node-set record: {exc}") from exc
        if xs.size != n:
            raise NodeSetError(f"record claims n={n} but carries {xs.size} nodes")
        return NodeSet(xs, label)


def write_nodeset(nodes: NodeSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(nodes.to_json_dict(), indent=2) + "\n")


def read_nodeset(path: str | Path) -> NodeSet:
    return NodeSet.from_json_dict(json.loads(Path(path).read_text()))


def _require_count(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise NodeSetError(f"node count must be a positive integer, got {n!r}")


def chebyshev_nodes(n: int, label: str | None = None) -> NodeSet:
    """Roots cos((2n-2k+1)pi/(2n)) of the monic Chebyshev polynomial, increasing."""
    _require_count(n)
    k = np.arange(1, n + 1, dtype=float)
    xs = np.cos((2 * n - 2 * k + 1) * math.pi / (2 * n))
    xs = 0.5 * (xs - xs[::-1])  # force exact antisymmetry about 0
    return NodeSet(xs, label if label is not None else f"chebyshev-{n}")


def equispaced_nodes(n: int, label: str | None = None) -> NodeSet:
    _require_count(n)
    xs = np.array([0.0]) if n == 1 else np.linspace(-1.0, 1.0, n)
    return NodeSet(xs, label if label is not None else f"equispaced-{n}")


def random_nodes(n: int, seed: int, label: str | None = None) -> NodeSet:
    """n sorted uniform draws from (-1, 1); deterministic per seed."""
    _require_count(n)
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.uniform(-1.0, 1.0, n))
    return NodeSet(xs, label if label is not None else f"random-{n}-seed{seed}")


def perturbed_nodes(base: NodeSet, magnitude: float, seed: int) -> NodeSet:
    """Jitter each node uniformly by +-magnitude, re-sort, clip to [-1, 1].

    magnitude must stay below half the minimum gap of the base set so the
    jitter cannot cross nodes; the result is still validated and rejected if
    clipping at the ends collapses a gap.
    """
    if magnitude < 0:
        raise NodeSetError("magnitude must be nonnegative")
    if base.n > 1 and magnitude >= base.min_gap() / 2:
        raise NodeSetError(
            f"magnitude {magnitude:g} not below half the minimum gap "
            f"{base.min_gap() / 2:g}")
    rng = np.random.default_rng(seed)
    xs = base.xs + rng.uniform(-magnitude, magnitude, base.n)
    xs = np.clip(np.sort(xs), -1.0, 1.0)
    return NodeSet(xs, f"perturbed({base.label},{magnitude:g},seed{seed})")


# ---------------------------------------------------------------------------
# log-domain evaluation of P(z) = prod (z - x_i) and P'(x_k)

def eval_node_poly(nodes: NodeSet, z: complex) -> LogComplex:
    """prod_i (z - x_i) as a LogComplex; exact zero sentinel when z is a node."""
    x, y = float(np.real(z)), float(np.imag(z))
    dx = x - nodes.xs
    if y == 0.0 and np.any(dx == 0.0):
        return LogComplex.zero()
    logmag = float(np.sum(np.log(np.hypot(dx, y))))
    phase = float(np.sum(np.arctan2(y, dx)))
    return LogComplex(logmag, wrap_phase(phase))


def eval_node_poly_batch(nodes: NodeSet, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(log magnitude, wrapped phase) arrays of P over an array of complex points."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    logmag = np.empty(flat.size)
    phase = np.empty(flat.size)
    step = max(1, _CHUNK_BUDGET // nodes.n)
    with np.errstate(divide="ignore"):
        for lo in range(0, flat.size, step):
            sl = slice(lo, min(flat.size, lo + step))
            dx = flat[sl].real[:, None] - nodes.xs[None, :]
            dy = flat[sl].imag[:, None]
            logmag[sl] = np.sum(np.log(np.hypot(dx, dy)), axis=1)
            phase[sl] = np.sum(np.arctan2(dy, dx), axis=1)
    phase = np.pi - np.mod(np.pi - phase, 2.0 * np.pi)
    return logmag.reshape(z.shape), phase.reshape(z.shape)


def log_abs_node_poly(nodes: NodeSet, x: np.ndarray, y: float = 0.0) -> np.ndarray:
    """log |P(x + iy)| over a real grid; -inf where x hits a node and y == 0."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.size)
    step = max(1, _CHUNK_BUDGET // nodes.n)
    with np.errstate(divide="ignore"):
        for lo in range(0, flat.size, step):
            sl = slice(lo, min(flat.size, lo + step))
            dx = flat[sl, None] - nodes.xs[None, :]
            out[sl] = np.sum(np.log(np.hypot(dx, y)), axis=1)
    return out.reshape(x.shape)


def node_poly_log_deriv(nodes: NodeSet, z: np.ndarray) -> np.ndarray:
    """P'(z)/P(z) = sum_i 1/(z - x_i) over an array of complex points."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, _CHUNK_BUDGET // nodes.n)
    for lo in range(0, flat.size, step):
        sl = slice(lo, min(flat.size, lo + step))
        out[sl] = np.sum(1.0 / (flat[sl, None] - nodes.xs[None, :]), axis=1)
    return out.reshape(z.shape)


def node_poly_deriv_logs(nodes: NodeSet) -> tuple[np.ndarray, np.ndarray]:
    """Signs and log magnitudes of P'(x_k) = prod_{i != k} (x_k - x_i), all k."""
    n = nodes.n
    if n == 1:
        return np.array([1]), np.array([0.0])
    # simple real roots of a monic real polynomial: signs alternate
    signs = np.where((n - 1 - np.arange(n)) % 2 == 0, 1, -1)
    logs = np.empty(n)
    step = max(1, _CHUNK_BUDGET // n)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        diff = np.abs(nodes.xs[lo:hi, None] - nodes.xs[None, :])
        diff[np.arange(hi - lo), np.arange(lo, hi)] = 1.0  # mask the diagonal
        logs[lo:hi] = np.sum(np.log(diff), axis=1)
    return signs, logs


def node_poly_deriv_at(nodes: NodeSet, k: int) -> SignedLog:
    """P'(x_k) as a SignedLog for a single 0-based index k."""
    n = nodes.n
    if not 0 <= k < n:
        raise IndexError(f"node index {k} out of range for n={n}")
    if n == 1:
        return SignedLog(1, 0.0)
    diff = nodes.xs[k] - nodes.xs
    diff = np.delete(diff, k)
    sign = 1 if (n - 1 - k) % 2 == 0 else -1
    return SignedLog(sign, float(np.sum(np.log(np.abs(diff)))))


def nearest_node_distance(nodes: NodeSet, z: complex) -> float:
    """min_i |z - x_i|."""
    x, y = float(np.real(z)), float(np.imag(z))
    return float(np.min(np.hypot(x - nodes.xs, y)))


def nearest_node_distances(nodes: NodeSet, x: np.ndarray, y: float = 0.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.size)
    step = max(1, _CHUNK_BUDGET // nodes.n)
    for lo in range(0, flat.size, step):
        sl = slice(lo, min(flat.size, lo + step))
        out[sl] = np.min(np.hypot(flat[sl, None] - nodes.xs[None, :], y), axis=1)
    return out.reshape(x.shape)

"""Simulated measure-preserving Z^d actions and ergodic averages along Følner sets.

Two actions are built in, both free almost everywhere:

* :class:`TorusRotation` - Z^d acts on [0, 1) by ``x -> x + <n, alpha> mod 1``;
* :class:`BernoulliShift` - Z^d shifts an i.i.d. {0, 1}-field, with
  ``(g.x)(c) = x(c + g)``. Field values are a hash of (seed, coordinate), so a
  sample point is just a seed and a shift and is never materialised.

All randomness comes from one root seed through :func:`kernels.derive_seed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import kernels
from .foelner import FolnerSequence
from .group import GroupElement, average
from .scales import PullbackScales, ScaleFunctionFamily
from .tiler import (
    DEFAULT_CELL_BUDGET,
    LadderInfeasible,
    as_fraction,
    certify_coverage,
    default_sample,
    derive_parameters,
    tile_window,
)

DEFAULT_ALPHA = math.sqrt(2.0) - 1.0


class TorusRotation:
    kind = "torus"

    def __init__(self, alpha: Union[float, Sequence[float]] = DEFAULT_ALPHA):
        self.alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
        if not ((self.alpha >= 0) & (self.alpha < 1)).all():
            raise ValueError("rotation components must lie in [0, 1)")
        self.dim = len(self.alpha)

    def orbit(self, x: float, coords) -> np.ndarray:
        """States g.x for each row g of ``coords``."""
        return np.mod(x + np.asarray(coords, dtype=np.float64) @ self.alpha, 1.0)

    def act(self, g: GroupElement, x: float) -> float:
        return float(self.orbit(x, np.asarray([g.coords]))[0])

    def sample_points(self, m: int, seed: int) -> list:
        return kernels.unit_uniform(seed, np.arange(m, dtype=np.int64).reshape(-1, 1)).tolist()

    def describe(self):
        return {"kind": self.kind, "dim": self.dim, "alpha": self.alpha.tolist()}


@dataclass(frozen=True)
class BernoulliPoint:
    seed: int
    shift: tuple

    @property
    def key(self):
        return (self.seed,) + self.shift


class BernoulliShift:
    kind = "bernoulli"

    def __init__(self, dim: int = 1, p: float = 0.5):
        if not 0 <= p <= 1:
            raise ValueError("cell probability must lie in [0, 1]")
        self.dim = dim
        self.p = float(p)

    def cells(self, x: BernoulliPoint, coords) -> np.ndarray:
        """Field values x(c) at each row c of ``coords``."""
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.dim) + np.asarray(x.shift, dtype=np.int64)
        return (kernels.unit_uniform(x.seed, coords) < self.p).astype(np.float64)

    def act(self, g: GroupElement, x: BernoulliPoint) -> BernoulliPoint:
        return BernoulliPoint(x.seed, tuple(a + b for a, b in zip(x.shift, g.coords)))

    def sample_points(self, m: int, seed: int) -> list:
        return [BernoulliPoint(kernels.derive_seed(seed, i), (0,) * self.dim) for i in range(m)]

    def describe(self):
        return {"kind": self.kind, "dim": self.dim, "p": self.p}


def make_action(kind: str, dim: int = 1, alpha=None, p: float = 0.5):
    if kind == "torus":
        if alpha is None:
            alpha = [DEFAULT_ALPHA] + [math.sqrt(q) % 1.0 for q in (3, 5, 7, 11, 13)][: dim - 1]
        act = TorusRotation(alpha)
        if act.dim != dim:
            raise ValueError(f"alpha has {act.dim} components, expected {dim}")
        return act
    if kind == "bernoulli":
        return BernoulliShift(dim, p)
    raise ValueError(f"unknown action kind {kind!r}")


@dataclass
class Observable:
    """A bounded function on the space, evaluated along orbit segments.

    ``orbit_fn(action, x, coords)`` returns f(g.x) for each row g of coords.
    ``integral`` is the exact mean, or a callable taking the action.
    """

    name: str
    orbit_fn: Callable
    integral: Union[float, Callable, None] = None

    def orbit_values(self, action, x, coords) -> np.ndarray:
        return np.asarray(self.orbit_fn(action, x, np.asarray(coords, dtype=np.int64)), dtype=np.float64)

    def at(self, action, x) -> float:
        return float(self.orbit_values(action, x, np.zeros((1, action.dim), dtype=np.int64))[0])

    def integral_for(self, action) -> float:
        if self.integral is None:
            raise ValueError(f"observable {self.name!r} has no known integral")
        return self.integral(action) if callable(self.integral) else float(self.integral)


def indicator(a: float = 0.0, b: float = 0.5) -> Observable:
    """Indicator of [a, b) on the circle (torus rotation)."""

    def fn(action, x, coords):
        s = action.orbit(x, coords)
        return ((s >= a) & (s < b)).astype(np.float64)

    return Observable(f"indicator[{a},{b})", fn, b - a)


def cell_value() -> Observable:
    """x(0), the value of the field at the identity (Bernoulli shift)."""

    def fn(action, x, coords):
        return action.cells(x, coords)

    return Observable("cell", fn, lambda action: action.p)


def constant(c: float = 1.0) -> Observable:
    return Observable(f"constant:{c}", lambda action, x, coords: np.full(len(coords), float(c)), float(c))


def make_observable(name: str, action) -> Observable:
    if name.startswith("constant"):
        _, _, val = name.partition(":")
        return constant(float(val or 1.0))
    if name == "indicator":
        return indicator(0.0, 0.5)
    if name == "cell":
        return cell_value()
    raise ValueError(f"unknown observable {name!r}")


def ergodic_average(action, f: Observable, x, n: int, seq: FolnerSequence) -> float:
    """A_f[F_n . x], the mean of f over the orbit points g.x, g in F_n."""
    coords = seq.folner_set(n).array
    vals = f.orbit_values(action, x, coords)
    return math.fsum(vals) / len(vals)


def ergodic_average_pointwise(action, f: Observable, x, n: int, seq: FolnerSequence) -> float:
    """Same value through the group-core average, one orbit point at a time."""
    return average(lambda g: f.at(action, action.act(g, x)), seq.folner_set(n))


@dataclass
class ConvergenceRow:
    n: int
    size: int
    mean_dev: float
    max_dev: float


def convergence_study(action, f: Observable, seq: FolnerSequence, schedule: Sequence[int], m: int,
                      seed: int = 0) -> list:
    """Deviation |A_f[F_n x] - integral| over m sample points, per n in the schedule."""
    target = f.integral_for(action)
    points = action.sample_points(m, seed)
    rows = []
    for n in schedule:
        devs = [abs(ergodic_average(action, f, x, n, seq) - target) for x in points]
        rows.append(ConvergenceRow(n, seq.size(n), math.fsum(devs) / len(devs), max(devs)))
    return rows


def doubling_schedule(start: int, stop: int) -> list:
    out = []
    n = start
    while n <= stop:
        out.append(n)
        n *= 2
    return out


def loglog_slope(rows: Sequence[ConvergenceRow]) -> float:
    """Least-squares slope of log(mean_dev) against log|F_n|."""
    pts = [(math.log(r.size), math.log(r.mean_dev)) for r in rows if r.mean_dev > 0]
    if len(pts) < 2:
        raise ValueError("need at least two nonzero deviations for a slope")
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def ks_uniform_statistic(values) -> float:
    """Kolmogorov-Smirnov distance between the empirical law of values and U[0, 1)."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    n = len(v)
    i = np.arange(1, n + 1)
    return float(max((i / n - v).max(), (v - (i - 1) / n).max()))


class ThresholdScales(ScaleFunctionFamily):
    """ℓ_i(y) = the i-th n <= max_index with A_f[F_n . y] > c.

    Evaluated on states of the space; pull back along an orbit with
    :class:`PullbackScales`. Averages are accumulated over the shells
    ``F_n minus F_(n-1)``, so the family must be increasing.
    """

    def __init__(self, action, f: Observable, c: float, seq: FolnerSequence, max_index: int):
        self.action, self.f, self.c, self.seq = action, f, float(c), seq
        self.max_index = max_index
        self.name = f"threshold:{c}"
        self._cache = {}
        self._shells = None

    def _shell_arrays(self):
        if self._shells is None:
            shells, prev = [], None
            for n in range(1, self.max_index + 1):
                F = self.seq.folner_set(n)
                shells.append(F.array if prev is None else F.difference(prev).array)
                prev = F
            self._shells = shells
        return self._shells

    def qualifying(self, y) -> list:
        key = y.key if hasattr(y, "key") else y
        hit = self._cache.get(key)
        if hit is None:
            hit, total, count = [], 0.0, 0
            for n, shell in enumerate(self._shell_arrays(), start=1):
                total += math.fsum(self.f.orbit_values(self.action, y, shell))
                count += len(shell)
                if total / count > self.c:
                    hit.append(n)
            self._cache[key] = hit
        return hit

    def value(self, y, i):
        q = self.qualifying(y)
        return q[i - 1] if i <= len(q) else None

    def first_at_least(self, y, p):
        for i, n in enumerate(self.qualifying(y), start=1):
            if n >= p:
                return i, n
        return None


def orbit_scale_functions(action, x, strategy: str = "synthetic", family: Optional[ScaleFunctionFamily] = None,
                          f: Optional[Observable] = None, c: Optional[float] = None,
                          seq: Optional[FolnerSequence] = None, max_index: int = 256) -> ScaleFunctionFamily:
    """A scale family on the group, read off along the orbit of x."""
    if strategy == "synthetic":
        if family is None:
            raise ValueError("synthetic strategy needs a family")
        return PullbackScales(family, action, x)
    if strategy == "threshold":
        if f is None or c is None or seq is None:
            raise ValueError("threshold strategy needs f, c and seq")
        return PullbackScales(ThresholdScales(action, f, c, seq, max_index), action, x)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class TilingPropertyReport:
    epsilon: Fraction
    m: int
    passed: bool
    pass_fraction: Fraction
    params: Optional[dict]
    per_point: list = field(default_factory=list)
    error: Optional[str] = None
    sample_defined_fraction: Optional[Fraction] = None

    def as_dict(self):
        def fr(x):
            return None if x is None else {"num": x.numerator, "den": x.denominator, "float": float(x)}

        return {
            "epsilon": fr(self.epsilon),
            "m": self.m,
            "passed": self.passed,
            "pass_fraction": fr(self.pass_fraction),
            "error": self.error,
            "sample_defined_fraction": fr(self.sample_defined_fraction),
            "params": self.params,
            "per_point": self.per_point,
        }


def verify_tiling_property(action, family: ScaleFunctionFamily, epsilon, m: int, seq: FolnerSequence, C: int,
                           seed: int = 0, ladder: str = "compact", cell_budget: int = DEFAULT_CELL_BUDGET,
                           min_window: int = 1) -> TilingPropertyReport:
    """Tile the window T.x for m sampled x and count those covered to 1 - epsilon.

    ``family`` lives on the space; it is pulled back along each sampled orbit.
    Parameters are derived once, from the orbit of the first sample point.
    """
    eps = as_fraction(epsilon)
    points = action.sample_points(m, seed)
    sample = default_sample(seq)
    ell0 = PullbackScales(family, action, points[0])
    defined = Fraction(sum(ell0.first_at_least(g, 1) is not None for g in sample), len(sample))
    try:
        params = derive_parameters(eps, C, seq, ell0, sample, ladder, cell_budget, min_window)
    except LadderInfeasible as exc:
        return TilingPropertyReport(eps, m, False, Fraction(0), None, [], f"{exc.constraint}: {exc.detail}", defined)

    T = seq.folner_set(params.window_index)
    per_point = []
    good = 0
    for j, x in enumerate(points):
        ell = PullbackScales(family, action, x)
        state = tile_window(T, ell, params, seq)
        cert = certify_coverage(state, params, seq)
        form_ok = True
        for rec in state.passes:
            L, R = rec.band
            for tile in rec.tiles:
                hit = ell.first_in_band(tile.center, L, R)
                if hit is None or hit[1] != tile.scale:
                    form_ok = False
        cov = state.covered_fraction
        ok = cov >= 1 - eps and form_ok
        good += ok
        per_point.append({
            "index": j,
            "covered_num": cov.numerator,
            "covered_den": cov.denominator,
            "covered": float(cov),
            "p_density": float(state.p_density),
            "tiles": sum(len(r.tiles) for r in state.passes),
            "tile_form_ok": form_ok,
            "certificate_passed": cert.passed,
            "ok": bool(ok),
        })
    frac = Fraction(good, m)
    return TilingPropertyReport(eps, m, frac >= 1 - eps, frac, params.as_dict(), per_point, None, defined)

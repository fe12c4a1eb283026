"""Multi-scale tiling of a window by Følner tiles, largest scales first.

The cascade runs r greedy Vitali passes over a window T. Pass k places
tiles with scales from band ``r - k`` on seeds whose whole ``F_R``-translate
is still uncovered, so every tile lands in the uncovered region. Each pass
covers at least a 1/C share of what it can reach; what it cannot reach is
split into three exclusion categories that are counted exactly:

1. seeds whose ``F_R``-translate leaves the window,
2. points where the band has no admissible scale,
3. points whose ``F_R``-translate touches tiles of an earlier pass j.

Two ladders are available. ``literal`` derives every band and the window
from the scale-separation inequalities literally; the sets it asks for are
astronomically large for any interesting epsilon and it fails fast against
the cell budget. ``compact`` keeps r, G_k, eta and the band-top selection,
but places the bands next to each other and only asks the window to beat
eta. All bounds are still checked exactly on the tiled window.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .foelner import FolnerSequence
from .group import FiniteGroupSet, GroupElement, Grid
from .scales import ScaleFunctionFamily, fraction_needed
from .vitali import Verdict, cover_arrays, verify_vitali

DEFAULT_CELL_BUDGET = 10 ** 8
ALPHA_BITS = 32
LADDERS = ("compact", "literal")


class LadderInfeasible(RuntimeError):
    """The parameter ladder cannot be realised; ``constraint`` names why."""

    def __init__(self, constraint: str, detail: str):
        super().__init__(f"{constraint}: {detail}")
        self.constraint = constraint
        self.detail = detail


class BandSelectionError(LadderInfeasible):
    def __init__(self, p: int, achieved: Fraction, needed: Fraction):
        super().__init__(
            "band_top",
            f"no p* for band start {p}: at most {float(achieved):.6f} of the sample has a scale >= {p}, "
            f"need more than {float(needed):.6f}",
        )
        self.achieved = achieved


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _to_float(x: Fraction) -> float:
    return x.numerator / x.denominator


@dataclass
class TilingParameters:
    epsilon: Fraction
    C: int
    r: int
    g: list  # g[k-1] is the slope of G_k (G_k(x) = g_k * x)
    alpha: Fraction
    eta: Fraction
    bands: list  # bands[i] = (L_i, R_i), i = 0..r-1
    delta: Fraction
    window_index: int
    window_size: int
    ladder: str = "compact"
    checks: list = field(default_factory=list)

    def G(self, k: int, x) -> Fraction:
        return self.g[k - 1] * as_fraction(x)

    def bound(self, k: int) -> Fraction:
        """Uncovered-fraction bound after pass k: ((C-1)/C)^k + G_k(eta)."""
        return Fraction(self.C - 1, self.C) ** k + self.G(k, self.eta)

    @property
    def literal_ladder_valid(self) -> bool:
        return all(c["holds"] for c in self.checks)

    def as_dict(self):
        return {
            "epsilon": _frac(self.epsilon),
            "C": self.C,
            "r": self.r,
            "G_slopes": [_frac(x) for x in self.g],
            "alpha": _frac(self.alpha),
            "eta": _frac(self.eta),
            "bands": [list(b) for b in self.bands],
            "delta": _frac(self.delta),
            "window_index": self.window_index,
            "window_size": self.window_size,
            "ladder": self.ladder,
            "literal_ladder_valid": self.literal_ladder_valid,
            "checks": self.checks,
        }


def _frac(x: Fraction):
    return {"num": x.numerator, "den": x.denominator, "float": _to_float(x)}


def pass_count(epsilon, C: int) -> int:
    """Least r with ((C-1)/C)^r < epsilon/2."""
    eps = as_fraction(epsilon)
    q = Fraction(C - 1, C)
    r = 1
    while q ** r >= eps / 2:
        r += 1
    return r


def g_slopes(C: int, r: int) -> list:
    """Slopes of G_k(x) = ((C-1)/C)^k x + sum_{j=1}^{k+1} j x, k = 1..r."""
    q = Fraction(C - 1, C)
    return [q ** k + Fraction((k + 1) * (k + 2), 2) for k in range(1, r + 1)]


def g_conditions_hold(C: int, g: Sequence[Fraction]) -> bool:
    """G_1 >= (2/C)x and G_k >= ((C-1)/C) G_{k-1} + (k+1)x, on slopes."""
    q = Fraction(C - 1, C)
    if g[0] < Fraction(2, C):
        return False
    return all(g[k - 1] >= q * g[k - 2] + (k + 1) for k in range(2, len(g) + 1))


def largest_alpha(G, target: Fraction, bits: int = ALPHA_BITS) -> Fraction:
    """Largest k/2^bits with G(k/2^bits) < target, by bisection (G monotone)."""
    scale = 1 << bits
    lo, hi = 0, scale
    if G(Fraction(hi, scale)) < target:
        return Fraction(1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if G(Fraction(mid, scale)) < target:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, scale)


def boundary_ratio(seq: FolnerSequence, m: int, n: int) -> Fraction:
    return Fraction(seq.boundary_size(m, n), seq.size(n))


def _first_index(seq, pred, start: int, budget: int, what: str) -> int:
    """Least n >= start with pred(n), assuming pred is monotone in n.

    Exponential search then bisection. Sizes past ``budget`` or past the
    family's prefix end the search with LadderInfeasible.
    """
    limit = seq.max_index

    def guard(n):
        if limit is not None and n > limit:
            raise LadderInfeasible(what, f"prefix of {limit} sets exhausted before the condition holds")
        if seq.size(n) > budget:
            raise LadderInfeasible(
                what, f"condition first holds beyond n = {n} where |F_n| = {seq.size(n)} exceeds the cell budget {budget}"
            )

    guard(start)
    if pred(start):
        return start
    lo, step = start, 1
    while True:
        hi = start + step
        guard(hi)
        if pred(hi):
            break
        lo, step = hi, step * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _checked_indices(n: int, seq: FolnerSequence):
    """Indices >= n on which 'for all n' conditions are spot-checked."""
    out = list(range(n, n + 16))
    if seq.is_box_family:
        # closed-form counts make far indices free to check
        out += [n * 2 ** j for j in range(1, 12)]
    if seq.max_index is not None:
        out = [m for m in out if m <= seq.max_index]
    return out


def _eventually(seq, pred, start, budget, what) -> int:
    """Least n >= start with pred(m) on every checked m >= n."""
    n = _first_index(seq, pred, start, budget, what)
    while True:
        bad = [m for m in _checked_indices(n, seq) if not pred(m)]
        if not bad:
            return n
        n = _first_index(seq, pred, max(bad) + 1, budget, what)


def default_sample(seq: FolnerSequence, target: int = 256) -> list:
    side = max(1, round(target ** (1.0 / seq.dim)))
    return list(FiniteGroupSet.box((0,) * seq.dim, (side,) * seq.dim))


def select_band_top(p: int, ell: ScaleFunctionFamily, sample, eta, r: int) -> int:
    """Least p* such that more than 1 - eta^2/r of the sample has a scale in [p, p*]."""
    sample = list(sample)
    if not sample:
        raise ValueError("select_band_top needs a nonempty sample")
    eta = as_fraction(eta)
    firsts = []
    for x in sample:
        hit = ell.first_at_least(x, p)
        if hit is not None:
            firsts.append(hit[1])
    need = fraction_needed(len(sample), eta, r)
    if len(firsts) < need:
        raise BandSelectionError(p, Fraction(len(firsts), len(sample)), 1 - eta * eta / r)
    firsts.sort()
    return max(p, firsts[need - 1])


def choose_window(delta, seq: FolnerSequence, band_top: int, cell_budget: int = DEFAULT_CELL_BUDGET,
                  min_size: int = 1) -> FiniteGroupSet:
    """Smallest F_m (with |F_m| >= min_size) whose F_{band_top}-boundary ratio is below delta."""
    m = window_index(delta, seq, band_top, cell_budget, min_size)
    return seq.folner_set(m)


def window_index(delta, seq, band_top, cell_budget=DEFAULT_CELL_BUDGET, min_size=1) -> int:
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    start = _first_index(seq, lambda n: seq.size(n) >= min_size, 1, cell_budget, "window")
    return _first_index(seq, lambda n: boundary_ratio(seq, band_top, n) < delta, start, cell_budget, "window")


def partial_scale(x, band: int, ell: ScaleFunctionFamily, params: TilingParameters) -> Optional[int]:
    """ℓ_j(x) for the least j with ℓ_j(x) inside band ``band``, else None."""
    L, R = params.bands[band]
    hit = ell.first_in_band(x, L, R)
    return None if hit is None else hit[1]


def derive_parameters(epsilon, C: int, seq: FolnerSequence, ell: ScaleFunctionFamily, sample=None,
                      ladder: str = "compact", cell_budget: int = DEFAULT_CELL_BUDGET,
                      min_window: int = 1, window: Optional[int] = None) -> TilingParameters:
    """Build the cascade constants for target epsilon and Tempelman integer C.

    ``window`` forces T = F_window instead of searching for it; the window
    condition is then only recorded, and may be false.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if C < 2:
        raise ValueError("C must be >= 2")
    if ladder not in LADDERS:
        raise ValueError(f"ladder must be one of {LADDERS}")
    if sample is None:
        sample = default_sample(seq)

    r = pass_count(eps, C)
    g = g_slopes(C, r)
    alpha = largest_alpha(lambda x: g[-1] * x, eps / 2)
    eta = min(alpha, eps)
    checks = [
        _check("r", Fraction(C - 1, C) ** r < eps / 2, f"((C-1)/C)^{r} < eps/2"),
        _check("G", g_conditions_hold(C, g), "G_1 >= (2/C)x, G_k >= ((C-1)/C)G_(k-1) + (k+1)x"),
        _check("G_r(eta)", g[-1] * eta < eps / 2, f"G_{r}(eta) < eps/2"),
    ]

    # L_0: least n with |∂_{F_r} F_m| / |F_m| < eta for every checked m > n
    m0 = _eventually(seq, lambda m: boundary_ratio(seq, r, m) < eta, 2, cell_budget, "L_0")
    L = [m0 - 1 if m0 > 1 else 1]
    checks.append(_check("L_0", True, f"|∂_F{r} F_n|/|F_n| < eta for checked n > {L[0]}"))
    R = []
    for i in range(r):
        top = select_band_top(L[i], ell, sample, eta, r)
        if seq.size(top) > cell_budget:
            raise LadderInfeasible(f"R_{i}", f"|F_{top}| = {seq.size(top)} exceeds the cell budget {cell_budget}")
        R.append(top)
        if i == r - 1:
            break
        sep = eta / seq.size(top)
        cond = (lambda t, s: (lambda n: boundary_ratio(seq, t, n) < s))(top, sep)
        if ladder == "literal":
            nxt = _eventually(seq, cond, top + 1, cell_budget, f"L_{i + 1}")
            checks.append(_check(f"L_{i + 1}", True, f"|∂_F{top} F_n|/|F_n| < eta/|F_{top}| for n >= {nxt}"))
        else:
            nxt = top + 1
            if seq.size(nxt) > cell_budget:
                raise LadderInfeasible(f"L_{i + 1}", f"|F_{nxt}| exceeds the cell budget {cell_budget}")
            holds = all(cond(m) for m in _checked_indices(nxt, seq))
            checks.append(_check(f"L_{i + 1}", holds, f"|∂_F{top} F_n|/|F_n| < eta/|F_{top}| for n >= {nxt}"))
        L.append(nxt)

    bands = list(zip(L, R))
    checks.append(_check("bands", all(R[i] < L[i + 1] and L[i] <= R[i] for i in range(r - 1)), "L_i <= R_i < L_(i+1)"))
    top = R[-1]
    strict_delta = eta / seq.size(top)
    delta = strict_delta if ladder == "literal" else eta
    if window is not None:
        if seq.size(window) > cell_budget:
            raise LadderInfeasible("window", f"|F_{window}| = {seq.size(window)} exceeds the cell budget {cell_budget}")
        m = window
    else:
        m = window_index(delta, seq, top, cell_budget, min_window)
    checks.append(_check("window", boundary_ratio(seq, top, m) < strict_delta,
                         f"|∂_F{top} T|/|T| < eta/|F_{top}| for T = F_{m}"))
    return TilingParameters(
        epsilon=eps, C=C, r=r, g=g, alpha=alpha, eta=eta, bands=bands, delta=delta,
        window_index=m, window_size=seq.size(m), ladder=ladder, checks=checks,
    )


def _check(name, holds, statement):
    return {"constraint": name, "holds": bool(holds), "statement": statement}


@dataclass
class PassRecord:
    k: int
    band_index: int
    band: tuple
    uncovered_before: int
    seeds: int
    tiles: list
    covered: int
    uncovered_after: int
    excl_window: int
    excl_undefined: int
    excl_collar: list  # per earlier pass j = 1..k-1
    missed: int  # |uncovered_before \ S_k|
    unexplained: int
    vitali: Verdict
    window_size: int

    @property
    def uncovered_fraction(self) -> Fraction:
        return Fraction(self.uncovered_after, self.window_size)

    @property
    def excl_collar_total(self) -> int:
        return sum(self.excl_collar)


@dataclass
class TilingState:
    T: FiniteGroupSet
    params: TilingParameters
    passes: list
    p_members: int
    cell_pass: np.ndarray  # pass index per point of T (in T.array order), 0 = uncovered

    @property
    def p_density(self) -> Fraction:
        return Fraction(self.p_members, len(self.T))

    @property
    def p_dense(self) -> bool:
        return self.p_density >= 1 - self.params.eta

    @property
    def uncovered(self) -> int:
        return int(np.count_nonzero(self.cell_pass == 0))

    @property
    def uncovered_fraction(self) -> Fraction:
        return Fraction(self.uncovered, len(self.T))

    @property
    def covered_fraction(self) -> Fraction:
        return 1 - self.uncovered_fraction

    def all_tiles(self):
        for rec in self.passes:
            yield from ((rec.k, t) for t in rec.tiles)


def _footprint_counts(mask, grid: Grid, foot: FiniteGroupSet, offs, cells) -> np.ndarray:
    """counts[i] = number of cells of ``cells[i] + foot`` set in ``mask``.

    Box footprints go through a summed-area table; other shapes through the
    kernel.
    """
    if not foot.is_box():
        return kernels.hit_counts(mask, offs, cells)
    d = len(grid.shape)
    sat = np.zeros(tuple(s + 1 for s in grid.shape), dtype=np.int64)
    sat[(slice(1, None),) * d] = mask.reshape(grid.shape)
    for ax in range(d):
        np.cumsum(sat, axis=ax, out=sat)
    flo, fhi = foot.bounds()
    pos = grid.coords(cells) - grid.lower
    lo, hi = pos + flo, pos + fhi + 1
    out = np.zeros(len(cells), dtype=np.int64)
    for corner in itertools.product((0, 1), repeat=d):
        idx = tuple(np.where(c, hi[:, j], lo[:, j]) for j, c in enumerate(corner))
        sign = -1 if (d - sum(corner)) % 2 else 1
        out += sign * sat[idx]
    return out


def tile_window(T: FiniteGroupSet, ell: ScaleFunctionFamily, params: TilingParameters,
                seq: FolnerSequence) -> TilingState:
    """Run the r passes over window T, recording exact per-pass accounting."""
    r, C = params.r, params.C
    pts = T.array
    n = len(pts)
    reach = [seq.folner_set(R).array for _, R in params.bands]
    lo = np.min([a.min(axis=0) for a in reach], axis=0)
    hi = np.max([a.max(axis=0) for a in reach], axis=0)
    grid = Grid(pts.min(axis=0) + lo, pts.max(axis=0) + hi)
    if grid.size > 4 * DEFAULT_CELL_BUDGET:
        raise LadderInfeasible("window", f"working grid of {grid.size} cells is too large")
    cells = grid.index(pts)
    in_T = np.zeros(grid.size, dtype=np.uint8)
    in_T[cells] = 1

    elements = [GroupElement(tuple(row)) for row in pts.tolist()]
    scale = np.zeros((r, n), dtype=np.int64)
    for b, (L, R) in enumerate(params.bands):
        for j, x in enumerate(elements):
            hit = ell.first_in_band(x, L, R)
            if hit is not None:
                scale[b, j] = hit[1]
    p_members = int(np.count_nonzero((scale > 0).all(axis=0)))

    owner = np.zeros(grid.size, dtype=np.int32)  # pass index per grid cell
    passes = []
    for k in range(1, r + 1):
        b = r - k
        L, R = params.bands[b]
        foot = seq.folner_set(R)
        offs = grid.offsets(foot.array)
        unc = owner[cells] == 0
        free = (in_T & (owner == 0)).astype(np.uint8)
        fits = _footprint_counts(free, grid, foot, offs, cells) == len(offs)
        inside = _footprint_counts(in_T, grid, foot, offs, cells) == len(offs)
        defined = scale[b] > 0
        seeds = unc & fits & defined

        e_window = unc & ~inside
        e_undef = unc & ~defined
        explained = e_window | e_undef
        collar = []
        for j in range(1, k):
            Kj = (owner == j).astype(np.uint8)
            touch = unc & (_footprint_counts(Kj, grid, foot, offs, cells) > 0)
            collar.append(int(np.count_nonzero(touch)))
            explained |= touch
        missed = unc & ~seeds

        S = FiniteGroupSet._from_sorted(pts[seeds], T.dim)
        sc = scale[b][seeds]
        res = cover_arrays(S, sc, seq, C)
        verdict = verify_vitali(res, S, {tuple(x): int(t) for x, t in zip(S.array.tolist(), sc.tolist())}, C)
        if len(res.K):
            kc = grid.index(res.K.array)
            if (owner[kc] != 0).any() or not in_T[kc].all():
                verdict = Verdict(False, verdict.violations + ["pass tiles leave the uncovered part of T"])
            owner[kc] = k
        before = int(np.count_nonzero(unc))
        passes.append(PassRecord(
            k=k, band_index=b, band=(L, R), uncovered_before=before, seeds=len(S), tiles=res.tiles,
            covered=len(res.K), uncovered_after=int(np.count_nonzero(owner[cells] == 0)),
            excl_window=int(np.count_nonzero(e_window)), excl_undefined=int(np.count_nonzero(e_undef)),
            excl_collar=collar, missed=int(np.count_nonzero(missed)),
            unexplained=int(np.count_nonzero(missed & ~explained)), vitali=verdict, window_size=n,
        ))
    return TilingState(T=T, params=params, passes=passes, p_members=p_members, cell_pass=owner[cells].copy())


@dataclass
class CoverageCertificate:
    passed: bool
    violations: list
    pass_bounds: list  # per pass: (uncovered_after, bound * |T|, holds)
    final_uncovered: Fraction
    final_bound: Fraction
    p_dense: bool

    def as_dict(self):
        return {
            "passed": self.passed,
            "violations": list(self.violations),
            "p_dense": self.p_dense,
            "final_uncovered": _frac(self.final_uncovered),
            "final_bound": _frac(self.final_bound),
            "per_pass": [{"uncovered": u, "bound": _frac(bd), "holds": h} for u, bd, h in self.pass_bounds],
        }


def certify_coverage(state: TilingState, params: TilingParameters, seq: Optional[FolnerSequence] = None
                     ) -> CoverageCertificate:
    """Recount everything from raw tile footprints and check the cascade bounds.

    Structural clauses: tiles disjoint, inside T, scales inside their band,
    per-pass uncovered counts equal to the recount, Vitali verdicts clean.
    Bound clauses: the P-density hypothesis, uncovered fraction after pass k
    at most ((C-1)/C)^k + G_k(eta), and the exclusion counts within the
    proof's allowances (window strip < eta|T|, undefined <= eta|T|, each
    collar <= eta|T|, all misses <= (k+1) eta |T|).
    """
    v = []
    window = state.T.tuples()
    size = len(window)
    eta_T = params.eta * size
    owner = {}
    for tid, (k, tile) in enumerate(state.all_tiles()):
        if seq is not None and tile.footprint != seq.folner_set(tile.scale).translate(tile.center):
            v.append(f"pass {k}: footprint at {tile.center.coords} is not F_{tile.scale} * center")
        for cell in tile.footprint.tuples():
            if cell not in window:
                v.append(f"pass {k}: tile at {tile.center.coords} leaves the window")
                break
            if cell in owner:
                v.append(f"pass {k}: tile at {tile.center.coords} overlaps tile #{owner[cell]}")
                break
            owner[cell] = tid

    if not state.p_dense:
        v.append(f"P-density {float(state.p_density):.6f} is below 1 - eta = {float(1 - params.eta):.6f}")

    bounds = []
    covered = 0
    for rec in state.passes:
        L, R = rec.band
        for t in rec.tiles:
            if not L <= t.scale <= R:
                v.append(f"pass {rec.k}: tile scale {t.scale} outside band [{L}, {R}]")
        covered += sum(len(t.footprint) for t in rec.tiles)
        recount = size - covered
        if recount != rec.uncovered_after:
            v.append(f"pass {rec.k}: recorded uncovered {rec.uncovered_after} != recount {recount}")
        bd = params.bound(rec.k)
        holds = Fraction(recount, size) <= bd
        bounds.append((recount, bd, holds))
        if not holds:
            v.append(f"pass {rec.k}: uncovered fraction {recount}/{size} exceeds bound {float(bd):.6f}")
        if not rec.vitali.ok:
            v.append(f"pass {rec.k}: vitali " + "; ".join(rec.vitali.violations))
        if rec.unexplained:
            v.append(f"pass {rec.k}: {rec.unexplained} missed points in no exclusion category")
        if not rec.excl_window < eta_T:
            v.append(f"pass {rec.k}: window strip {rec.excl_window} >= eta|T| = {float(eta_T):.3f}")
        if rec.excl_undefined > eta_T:
            v.append(f"pass {rec.k}: undefined-scale points {rec.excl_undefined} > eta|T| = {float(eta_T):.3f}")
        for j, c in enumerate(rec.excl_collar, start=1):
            if c > eta_T:
                v.append(f"pass {rec.k}: collar around pass {j} has {c} > eta|T| = {float(eta_T):.3f}")
        if rec.missed > (rec.k + 1) * eta_T:
            v.append(f"pass {rec.k}: missed {rec.missed} > (k+1) eta|T| = {float((rec.k + 1) * eta_T):.3f}")

    final = Fraction(size - covered, size)
    if final != state.uncovered_fraction:
        v.append("final uncovered fraction does not match the recount")
    final_bound = params.bound(params.r)
    return CoverageCertificate(
        passed=not v, violations=v, pass_bounds=bounds, final_uncovered=final,
        final_bound=final_bound, p_dense=state.p_dense,
    )


def run_cascade(epsilon, C: int, seq: FolnerSequence, ell: ScaleFunctionFamily, sample=None,
                ladder: str = "compact", cell_budget: int = DEFAULT_CELL_BUDGET, min_window: int = 1,
                window: Optional[int] = None):
    """derive_parameters -> choose_window -> tile_window -> certify_coverage."""
    params = derive_parameters(epsilon, C, seq, ell, sample, ladder, cell_budget, min_window, window)
    T = seq.folner_set(params.window_index)
    state = tile_window(T, ell, params, seq)
    return params, state, certify_coverage(state, params, seq)


def state_report(params: TilingParameters, state: TilingState, cert: CoverageCertificate) -> dict:
    per_pass = []
    for rec in state.passes:
        fr = rec.uncovered_fraction
        per_pass.append({
            "k": rec.k,
            "band": list(rec.band),
            "seeds": rec.seeds,
            "tiles": len(rec.tiles),
            "covered": rec.covered,
            "uncovered_fraction_num": fr.numerator,
            "uncovered_fraction_den": fr.denominator,
            "exclusions": [rec.excl_window, rec.excl_undefined, rec.excl_collar_total],
            "collar_per_pass": list(rec.excl_collar),
            "missed": rec.missed,
        })
    return {
        "params": params.as_dict(),
        "window": {"index": params.window_index, "size": len(state.T), "p_density": _frac(state.p_density)},
        "per_pass": per_pass,
        "final_fraction": _frac(state.covered_fraction),
        "certificate": cert.as_dict(),
    }


def cell_map_rows(state: TilingState):
    """(x, y, pass) rows for a Z^2 window; pass 0 marks uncovered cells."""
    if state.T.dim != 2:
        raise ValueError("cell maps are only defined for Z^2 windows")
    for (x, y), k in zip(state.T.array.tolist(), state.cell_pass.tolist()):
        yield x, y, k

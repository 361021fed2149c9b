"""Topological invariants of regular potentials and the verdict pipeline.

The integer vector m attached to a stability zone is recovered two ways:
by fitting the measured mean direction of open level lines against
integer combinations of the wavevectors, and by counting the monodromy
displacement of a marked open line as one wave's phase advances through
a full period.  ``classify_potential`` chains rationality, interval
estimation, direction fitting and deviation-growth checks into a single
report with an explicit budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (AmbiguousFit, BudgetExhausted, NoFit, NoOpenLines,
                     NotRegular, TrackingLost, WindowTooSmall)
from .levelset import (LevelGrid, Window, extract_level_set, open_line_interval,
                       strip_deviation_growth)
from .potential import (PotentialType, QuasiPotential, RationalityVerdict,
                        classify_rationality)

TWO_PI = 2.0 * math.pi

# declared once: deviation growth beyond this ratio over the growth span
# marks unbounded wandering (chaotic); below it, a plateau (regular)
DEVIATION_GROWTH_RATIO = 3.0
DEVIATION_GROWTH_SPAN = 8.0

UNIQUENESS_MARGIN = 10.0


# ---------------------------------------------------------------------
# integer direction fit
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerDirectionFit:
    """Irreducible integer vector m with (sum_i m_i k_i) . l ~ 0."""

    m: tuple[int, ...]
    residual: float            # |(sum m_i k_i) . l| / |sum m_i k_i|
    runner_up_residual: float
    runner_up_m: tuple[int, ...]
    shell: int                 # max |m_i| of the winner

    @property
    def margin(self) -> float:
        if self.residual == 0.0:
            return math.inf
        return self.runner_up_residual / self.residual


def _irreducible_shell(d: int, shell: int) -> np.ndarray:
    """Irreducible integer d-vectors with max|entries| == shell, first
    nonzero entry positive, one per +-pair."""
    rng = np.arange(-shell, shell + 1)
    grids = np.meshgrid(*([rng] * d), indexing="ij")
    m = np.stack([g.ravel() for g in grids], axis=1)
    m = m[np.abs(m).max(axis=1) == shell]
    g = np.gcd.reduce(np.abs(m), axis=1)
    m = m[g == 1]
    # normalize sign: first nonzero entry positive
    first = m[np.arange(len(m)), np.argmax(m != 0, axis=1)]
    keep = first > 0
    return m[keep]


def fit_integer_direction(l, wavevectors, max_coeff: int = 12,
                          tol: float = 0.03) -> IntegerDirectionFit:
    """Find the irreducible integer m whose wavevector combination is
    orthogonal to the direction l.

    Candidates are scanned in shells of increasing max-norm; the winner
    is the best candidate in the first shell achieving a normalized
    residual below ``tol``.  The runner-up is the best non-collinear
    candidate within one shell beyond the winner's, giving a uniqueness
    margin that flags near-degenerate geometries (for example the
    one-period sublattice of a type-II embedding).

    Raises NoFit when no shell fits, AmbiguousFit when the margin drops
    below 10 (the fit is attached to the exception as ``.fit``).
    """
    if max_coeff < 1:
        raise ValueError("max_coeff must be >= 1")
    l = np.asarray(l, dtype=float)
    l = l / np.linalg.norm(l)
    k = np.asarray(wavevectors, dtype=float)
    d = k.shape[0]
    kmax = float(np.linalg.norm(k, axis=1).max())

    best = None
    best_shell = None
    per_shell: list[tuple[np.ndarray, np.ndarray]] = []
    for shell in range(1, max_coeff + 1):
        cand = _irreducible_shell(d, shell)
        combo = cand @ k                          # (n, 2)
        norms = np.linalg.norm(combo, axis=1)
        ok = norms > 1e-12 * kmax                 # exclude rationality relations
        cand, combo, norms = cand[ok], combo[ok], norms[ok]
        res = np.abs(combo @ l) / norms
        per_shell.append((cand, res))
        if best is None and res.size and res.min() < tol:
            i = int(np.argmin(res))
            best = (cand[i], float(res[i]))
            best_shell = shell
            # one shell beyond the winner decides the uniqueness margin
            if shell < max_coeff:
                continue
        if best is not None and shell >= min(best_shell + 1, max_coeff):
            break
    if best is None:
        raise NoFit("no integer direction with max|m| <= %d fits within tol=%g"
                    % (max_coeff, tol))

    m_star, r_star = best
    runner = (math.inf, m_star)
    for cand, res in per_shell[: min(best_shell + 1, max_coeff)]:
        collinear = np.all(cand == m_star, axis=1)
        res = np.where(collinear, np.inf, res)
        if res.size and res.min() < runner[0]:
            i = int(np.argmin(res))
            runner = (float(res[i]), cand[i])

    fit = IntegerDirectionFit(
        m=tuple(int(x) for x in m_star),
        residual=r_star,
        runner_up_residual=runner[0],
        runner_up_m=tuple(int(x) for x in runner[1]),
        shell=best_shell)
    if fit.margin < UNIQUENESS_MARGIN:
        err = AmbiguousFit(
            "direction fit m=%s margin %.2f < %g (runner-up %s)"
            % (fit.m, fit.margin, UNIQUENESS_MARGIN, fit.runner_up_m))
        err.fit = fit
        raise err
    return fit


# ---------------------------------------------------------------------
# phase monodromy
# ---------------------------------------------------------------------

def _transversal_crossings(components, origin, direction, half_len):
    """Signed transversal coordinates where spanning polylines cross the
    segment origin +- half_len * direction."""
    n = np.asarray(direction, dtype=float)
    ts = []
    for c in components:
        if not c.spanning:
            continue
        q = c.points - origin
        a = q @ n                                  # along transversal
        b = q[:, 0] * n[1] - q[:, 1] * n[0]        # signed side of it
        sign_change = b[:-1] * b[1:] <= 0
        for i in np.nonzero(sign_change)[0]:
            denom = b[i] - b[i + 1]
            w = b[i] / denom if denom != 0 else 0.5
            t = a[i] + w * (a[i + 1] - a[i])
            if abs(t) <= half_len:
                ts.append(t)
    ts = np.sort(np.asarray(ts))
    if ts.size > 1:
        # merge duplicate crossings from polyline vertices sitting on the line
        keep = np.concatenate([[True], np.diff(ts) > 1e-9 * max(half_len, 1.0)])
        ts = ts[keep]
    return ts


def _transversal_roots(p: QuasiPotential, level: float, origin: np.ndarray,
                       direction: np.ndarray, half_len: float,
                       n_samples: int) -> np.ndarray:
    """Sorted roots of V(origin + t*direction) = level on |t| <= half_len.

    Sign changes on a fine sample grid are bisected in parallel; the
    transversal coordinate t of each root is returned.
    """
    t = np.linspace(-half_len, half_len, n_samples)
    pts = origin[None, :] + t[:, None] * direction[None, :]
    s = p.value(pts) - level
    flips = np.nonzero(np.signbit(s[:-1]) != np.signbit(s[1:]))[0]
    if flips.size == 0:
        return np.empty(0)
    lo = t[flips]
    hi = t[flips + 1]
    s_lo = s[flips]
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        sm = p.value(origin[None, :] + mid[:, None] * direction[None, :]) - level
        take_lo = np.signbit(sm) == np.signbit(s_lo)
        lo = np.where(take_lo, mid, lo)
        s_lo = np.where(take_lo, sm, s_lo)
        hi = np.where(take_lo, hi, mid)
    return np.sort(0.5 * (lo + hi))


def _match_flux(t_prev: np.ndarray, t_new: np.ndarray, stations: np.ndarray,
                match_tol: float) -> np.ndarray | None:
    """Signed crossing counts past each station between two patterns.

    Crossings are paired by mutual nearest neighbour within match_tol;
    unmatched ones are births/deaths of wiggle pairs and carry no flux.
    Returns None when the patterns cannot be matched at all.
    """
    if t_prev.size == 0 or t_new.size == 0:
        return None
    fwd = np.argmin(np.abs(t_new[None, :] - t_prev[:, None]), axis=1)
    bwd = np.argmin(np.abs(t_prev[None, :] - t_new[:, None]), axis=1)
    mutual = bwd[fwd] == np.arange(t_prev.size)
    close = np.abs(t_new[fwd] - t_prev) <= match_tol
    sel = mutual & close
    if not sel.any():
        return None
    a = t_prev[sel]
    b = t_new[fwd[sel]]
    flux = np.zeros(stations.size, dtype=np.int64)
    for s_i, s in enumerate(stations):
        crossed = (a - s) * (b - s) < 0
        flux[s_i] = int(np.sum(np.sign(b[crossed] - a[crossed])))
    return flux


def monodromy_numbers(p: QuasiPotential, level: float, wave_index: int,
                      steps: int = 64, window: Window | None = None,
                      cells_per_shortest_period: int = 16) -> int:
    """Net displacement N of the open-line pattern as wave ``wave_index``'s
    phase advances through a full period.

    The open lines' crossings with a fixed transversal (orthogonal to
    their mean direction) are matched step to step; N is the net number
    of crossings swept past a fixed station over the cycle, identical
    for every open line at the level, and obeys
    (N^1, ..., N^d) = M * (m^1, ..., m^d) with even M.

    The count is taken by majority over several stations; disagreement
    between stations, or a final pattern that fails to overlay onto the
    initial one, raises TrackingLost (retry with more steps).  Raises
    NotRegular when no spanning components exist.
    """
    if steps < 64:
        raise ValueError("steps must be >= 64")
    if not 0 <= wave_index < p.d:
        raise ValueError("wave_index out of range")

    comps = None
    if window is None:
        # size the window so several inter-line spacings fit the transversal
        for mult in (12.0, 24.0, 48.0):
            window = Window.square(mult * p.longest_period())
            comps = extract_level_set(p, level, window,
                                      cells_per_shortest_period, refine=False)
            if sum(c.spanning for c in comps) >= 4:
                break
    if comps is None:
        comps = extract_level_set(p, level, window,
                                  cells_per_shortest_period, refine=False)
    spans = [c for c in comps if c.spanning]
    if not spans:
        raise NotRegular("no spanning components at level %g" % level)

    main = max(spans, key=lambda c: len(c.points))
    if main.mean_direction is None:
        raise NotRegular("spanning component has no mean direction")
    l = main.mean_direction
    normal = np.array([l[1], -l[0]])               # fixed transversal direction
    origin = np.array(window.center)
    half_len = 0.49 * min(window.half_extent)
    n_samples = max(512, int(6.0 * half_len
                             / (p.shortest_period() / cells_per_shortest_period)))

    t0 = _transversal_roots(p, level, origin, normal, half_len, n_samples)
    if t0.size < 3:
        raise NotRegular("fewer than 3 transversal crossings")
    spacing = float(np.median(np.diff(t0)))
    if spacing <= 0:
        raise NotRegular("degenerate inter-line spacing")
    stations = np.linspace(-0.4, 0.4, 5) * half_len
    match_tol = 0.45 * spacing

    flux = np.zeros(stations.size, dtype=np.int64)
    t_prev = t0
    phase0 = p.phases.copy()
    for j in range(1, steps + 1):
        phases = phase0.copy()
        phases[wave_index] = phase0[wave_index] + TWO_PI * j / steps
        pj = p.with_phases(phases)
        tj = _transversal_roots(pj, level, origin, normal, half_len, n_samples)
        step_flux = _match_flux(t_prev, tj, stations, match_tol)
        if step_flux is None:
            raise TrackingLost("pattern match failed at step %d" % j)
        flux += step_flux
        t_prev = tj

    # a full phase period restores the potential: patterns must overlay
    inner = t0[np.abs(t0) <= 0.8 * half_len]
    if t_prev.size == 0 or inner.size == 0:
        raise TrackingLost("lost all crossings over the cycle")
    overlay = np.max(np.min(np.abs(t_prev[None, :] - inner[:, None]), axis=1))
    if overlay > 0.25 * spacing:
        raise TrackingLost("final pattern off the initial one by %.3g" % overlay)

    counts = np.bincount(flux - flux.min())
    n_major = int(np.argmax(counts)) + int(flux.min())
    if counts.max() < 4:                     # at least 4 of 5 stations agree
        raise TrackingLost("stations disagree on the flux: %s" % flux.tolist())
    return n_major


def monodromy_numbers_robust(p: QuasiPotential, level: float, wave_index: int,
                             steps: int = 64, max_steps: int = 1024,
                             **kw) -> int:
    """monodromy_numbers with step doubling on TrackingLost."""
    while True:
        try:
            return monodromy_numbers(p, level, wave_index, steps, **kw)
        except TrackingLost:
            if steps * 2 > max_steps:
                raise
            steps *= 2


def monodromy_vector(p: QuasiPotential, level: float, steps: int = 64,
                     **kw) -> tuple[int, ...]:
    """N^i for every wave, by successive single-wave phase cycles."""
    return tuple(monodromy_numbers_robust(p, level, i, steps, **kw)
                 for i in range(p.d))


def decompose_monodromy(n_vec) -> tuple[int, tuple[int, ...]]:
    """Split N = M * m with m irreducible, first nonzero entry positive.

    Zero N gives (0, zeros).  M carries the sign needed to normalize m.
    """
    n_vec = tuple(int(x) for x in n_vec)
    g = int(np.gcd.reduce(np.abs(np.asarray(n_vec, dtype=int)))) if any(n_vec) else 0
    if g == 0:
        return 0, tuple(0 for _ in n_vec)
    m = tuple(x // g for x in n_vec)
    first = next(x for x in m if x != 0)
    if first < 0:
        m = tuple(-x for x in m)
        g = -g
    return g, m


# ---------------------------------------------------------------------
# verdict pipeline
# ---------------------------------------------------------------------

class Verdict(Enum):
    REGULAR = "regular"
    CHAOTIC = "chaotic"
    PERIODIC = "periodic"
    UNDETERMINED = "undetermined"


@dataclass
class ClassifyBudget:
    """Caps on the classification pipeline's grid and window sizes."""

    max_grid_cells: int = 25_000_000       # per level-set grid
    base_window_periods: float = 15.0      # first window, in longest periods
    max_window_periods: float = 120.0
    tol: float = 0.01                      # interval bisection tolerance
    cells_per_shortest_period: int = 16
    direction_tol: float = 0.03            # ~1.7 degrees
    max_coeff: int = 12
    seed: int = 0
    with_monodromy: bool = False
    monodromy_steps: int = 64

    def grid_cells(self, p: QuasiPotential, window_periods: float) -> float:
        side = window_periods * p.longest_period()
        cell = p.shortest_period() / self.cells_per_shortest_period
        return (side / cell) ** 2


@dataclass
class ClassificationReport:
    """Evidence-backed verdict for one potential."""

    verdict: Verdict
    rationality: RationalityVerdict
    interval: tuple[float, float] | None = None
    interval_degenerate: bool | None = None
    v0: float | None = None
    direction: tuple[float, float] | None = None
    m: tuple[int, ...] | None = None
    fit_residual: float | None = None
    fit_margin: float | None = None
    ambiguous_fit: bool = False
    monodromy_n: tuple[int, ...] | None = None
    monodromy_m_factor: int | None = None   # the even factor M in N = M m
    directed: bool = False                  # type-II period-aligned lines
    deviation_curve: tuple = ()             # (window size, max strip deviation)
    deviation_ratio: float | None = None
    growth_exponent: float | None = None    # measured, never asserted
    periods: tuple = ()
    period_direction_pair: tuple[int, int] | None = None
    window_periods_used: float | None = None
    cells_spent: float = 0.0
    seed: int = 0
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "verdict": self.verdict.value,
            "rationality": self.rationality.kind.value,
            "relations": [list(r) for r in self.rationality.relations],
            "interval": list(self.interval) if self.interval else None,
            "interval_degenerate": self.interval_degenerate,
            "v0": self.v0,
            "direction": list(self.direction) if self.direction else None,
            "m": list(self.m) if self.m else None,
            "fit_residual": self.fit_residual,
            "fit_margin": self.fit_margin,
            "ambiguous_fit": self.ambiguous_fit,
            "monodromy_n": list(self.monodromy_n) if self.monodromy_n else None,
            "monodromy_m_factor": self.monodromy_m_factor,
            "directed": self.directed,
            "deviation_curve": [list(x) for x in self.deviation_curve],
            "deviation_ratio": self.deviation_ratio,
            "growth_exponent": self.growth_exponent,
            "periods": [list(e) for e in self.periods],
            "period_direction_pair": (list(self.period_direction_pair)
                                      if self.period_direction_pair else None),
            "window_periods_used": self.window_periods_used,
            "cells_spent": self.cells_spent,
            "seed": self.seed,
            "evidence": self.evidence,
        }
        return d


def _measure_direction(p, levels, window, cells) -> tuple[np.ndarray, float]:
    """Mean direction of the longest spanning component across levels.

    Returns (unit direction, max pairwise angular spread in radians).
    """
    dirs = []
    for lv in levels:
        comps = extract_level_set(p, lv, window, cells, refine=False)
        spans = [c for c in comps if c.spanning and c.mean_direction is not None]
        if not spans:
            continue
        main = max(spans, key=lambda c: len(c.points))
        dirs.append(main.mean_direction)
    if not dirs:
        raise NoOpenLines("no oriented spanning component at probe levels")
    ref = dirs[0]
    aligned = [d if d @ ref >= 0 else -d for d in dirs]
    mean = np.mean(aligned, axis=0)
    mean /= np.linalg.norm(mean)
    spread = max(math.acos(min(1.0, abs(float(d @ mean)))) for d in aligned)
    return mean, spread


def _deviation_ratio(p, level, w_top: Window, cells) -> tuple[tuple, float | None, float | None]:
    """Deviation curve over a span-8 window ladder ending at w_top."""
    sizes = [w_top.size / f for f in (8.0, 4.0, 2.0, 1.0)]
    windows = [Window.square(s, w_top.center) for s in sizes]
    try:
        curve = strip_deviation_growth(p, level, windows, cells)
    except NoOpenLines:
        return (), None, None
    ratio = curve[-1][1] / curve[0][1] if len(curve) >= 2 and curve[0][1] > 0 else None
    alpha = None
    if len(curve) >= 3 and all(d > 0 for _, d in curve):
        xs = np.log([s for s, _ in curve])
        ys = np.log([d for _, d in curve])
        alpha = float(np.polyfit(xs, ys, 1)[0])
    return tuple(curve), ratio, alpha


def classify_potential(p: QuasiPotential,
                       budget: ClassifyBudget | None = None) -> ClassificationReport:
    """Full verdict pipeline: rationality, open-line interval, direction
    fit, deviation growth.

    Doubly periodic inputs short-circuit to Periodic.  A nondegenerate
    interval with a unique direction fit and plateaued deviation yields
    Regular; a degenerate interval with growing deviation yields Chaotic;
    a degenerate interval with a plateau is a stability-zone boundary and
    stays Undetermined.  Raises BudgetExhausted (with partial evidence
    attached) when the window ladder hits the grid budget before the
    interval stabilizes.
    """
    budget = budget or ClassifyBudget()
    cells = budget.cells_per_shortest_period
    report = ClassificationReport(
        verdict=Verdict.UNDETERMINED,
        rationality=classify_rationality(p, budget.max_coeff),
        seed=budget.seed)

    if report.rationality.kind is PotentialType.TYPE_I:
        return _classify_periodic(p, budget, report)

    # window ladder: double until the interval stabilizes or budget caps it
    est_prev = None
    periods_mult = budget.base_window_periods
    while True:
        report.cells_spent += budget.grid_cells(p, periods_mult) * 1.25
        if budget.grid_cells(p, periods_mult) > budget.max_grid_cells:
            raise BudgetExhausted(
                "window of %.0f longest periods exceeds the grid budget"
                % periods_mult, evidence=report)
        w = Window.square(periods_mult * p.longest_period())
        try:
            est = open_line_interval(p, w, budget.tol, cells)
        except WindowTooSmall:
            est = None
        if est is not None and est_prev is not None:
            if (abs(est.v1 - est_prev.v1) <= 2 * budget.tol
                    and abs(est.v2 - est_prev.v2) <= 2 * budget.tol):
                break
        est_prev = est
        if periods_mult >= budget.max_window_periods:
            if est is None:
                raise BudgetExhausted("interval never stabilized", evidence=report)
            break
        periods_mult *= 2.0

    report.interval = (est.v1, est.v2)
    report.interval_degenerate = est.degenerate
    report.v0 = est.v0
    report.window_periods_used = periods_mult

    if est.degenerate:
        return _classify_degenerate(p, budget, report, w)
    return _classify_nondegenerate(p, budget, report, est, w)


def _classify_periodic(p, budget, report) -> ClassificationReport:
    report.verdict = Verdict.PERIODIC
    report.periods = report.rationality.periods
    cells = budget.cells_per_shortest_period
    # try to attach the open-line direction as an integer period pair
    try:
        w = Window.square(budget.base_window_periods * p.longest_period())
        est = open_line_interval(p, w, budget.tol, cells)
        report.interval = (est.v1, est.v2)
        report.interval_degenerate = est.degenerate
        report.v0 = est.v0
        if not est.degenerate:
            l, _ = _measure_direction(p, [est.v0], w, cells)
            report.direction = (float(l[0]), float(l[1]))
            e = np.asarray(report.periods, dtype=float)   # (2, 2)
            if e.shape == (2, 2):
                fit = fit_integer_direction(l, _rot90_rows(e), max_coeff=budget.max_coeff,
                                            tol=budget.direction_tol)
                report.period_direction_pair = (fit.m[0], fit.m[1])
    except (NoOpenLines, NoFit, AmbiguousFit, WindowTooSmall):
        pass
    return report


def _rot90_rows(e: np.ndarray) -> np.ndarray:
    """Rotate each row by 90 degrees: (rot90 e_i) . l = cross(e_i, l),
    so fitting integers against these rows finds l ~ n1 e1 + n2 e2."""
    return np.stack([-e[:, 1], e[:, 0]], axis=1)


def _classify_degenerate(p, budget, report, w_top) -> ClassificationReport:
    cells = budget.cells_per_shortest_period
    curve, ratio, alpha = _deviation_ratio(p, report.v0, w_top, cells)
    report.deviation_curve = curve
    report.deviation_ratio = ratio
    report.growth_exponent = alpha
    if ratio is not None and ratio > DEVIATION_GROWTH_RATIO:
        report.verdict = Verdict.CHAOTIC
        report.directed = report.rationality.kind is PotentialType.TYPE_II
    else:
        # degenerate interval with bounded (or unmeasurable) deviation:
        # a stability-zone boundary cannot be ruled out
        report.verdict = Verdict.UNDETERMINED
        report.evidence["degenerate_plateau"] = True
    return report


def _classify_nondegenerate(p, budget, report, est, w_top) -> ClassificationReport:
    cells = budget.cells_per_shortest_period
    levels = [est.v0, 0.5 * (est.v1 + est.v0), 0.5 * (est.v0 + est.v2)]
    w_dir = Window.square(min(w_top.size, 40.0 * p.longest_period()), w_top.center)
    try:
        l, spread = _measure_direction(p, levels, w_dir, cells)
    except NoOpenLines:
        report.verdict = Verdict.UNDETERMINED
        report.evidence["no_direction"] = True
        return report
    report.direction = (float(l[0]), float(l[1]))
    report.evidence["direction_spread_deg"] = math.degrees(spread)

    curve, ratio, alpha = _deviation_ratio(p, est.v0, w_top, cells)
    report.deviation_curve = curve
    report.deviation_ratio = ratio
    report.growth_exponent = alpha

    try:
        fit = fit_integer_direction(l, p.wavevectors, budget.max_coeff,
                                    budget.direction_tol)
        report.m = fit.m
        report.fit_residual = fit.residual
        report.fit_margin = fit.margin
    except AmbiguousFit as err:
        fit = err.fit
        report.m = fit.m
        report.fit_residual = fit.residual
        report.fit_margin = fit.margin
        report.ambiguous_fit = True
    except NoFit:
        report.verdict = Verdict.UNDETERMINED
        report.evidence["no_integer_fit"] = True
        return report

    if report.rationality.kind is PotentialType.TYPE_II:
        report.directed = _direction_matches_period(p, report)

    if ratio is None:
        report.verdict = Verdict.UNDETERMINED
        report.evidence["no_deviation_evidence"] = True
        return report
    if ratio > DEVIATION_GROWTH_RATIO:
        # open lines in a finite interval cannot wander unboundedly in a
        # stability zone; treat as unresolved rather than forcing a verdict
        report.verdict = Verdict.UNDETERMINED
        report.evidence["nondegenerate_growth"] = True
        return report

    if report.ambiguous_fit and not report.directed:
        report.verdict = Verdict.UNDETERMINED
        report.evidence["ambiguous_fit"] = True
        return report

    report.verdict = Verdict.REGULAR
    if budget.with_monodromy:
        try:
            n_vec = monodromy_vector(p, est.v0, budget.monodromy_steps,
                                     cells_per_shortest_period=cells)
            report.monodromy_n = n_vec
            m_factor, m_mono = decompose_monodromy(n_vec)
            report.monodromy_m_factor = m_factor
            if m_mono != report.m and tuple(-x for x in m_mono) != report.m:
                report.evidence["monodromy_mismatch"] = list(m_mono)
        except (TrackingLost, NotRegular) as err:
            report.evidence["monodromy_failed"] = str(err)
    return report


def _direction_matches_period(p, report) -> bool:
    """Type-II check: measured direction aligned with the exact period."""
    if not report.rationality.periods or report.direction is None:
        return False
    e = np.asarray(report.rationality.periods[0], dtype=float)
    e /= np.linalg.norm(e)
    return abs(float(e @ np.asarray(report.direction))) > math.cos(math.radians(2.0))

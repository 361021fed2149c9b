"""Level lines and sublevel regions of plane potentials in finite windows.

The extractor is a vectorized marching-squares walk on a uniform grid
sized by the shortest wave period, with per-edge root refinement against
the analytic potential.  Saddle cells are resolved by the sign of the
potential at the cell center.  Components are classified closed / open
spanning / truncated, and spanning components carry a mean direction
(principal axis) and a strip deviation (max transverse distance).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import IsotropicComponent, NoOpenLines, WindowTooSmall
from .potential import QuasiPotential

DEFAULT_CELLS_PER_PERIOD = 16

# fraction of the cell size used as the edge-root bisection target
EDGE_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle: center and positive half extents."""

    center: tuple[float, float]
    half_extent: tuple[float, float]

    def __post_init__(self):
        hx, hy = self.half_extent
        if not (hx > 0 and hy > 0):
            raise ValueError("half_extent must be positive")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "half_extent", (float(hx), float(hy)))

    @classmethod
    def square(cls, size: float, center=(0.0, 0.0)) -> "Window":
        """Square window of full side ``size``."""
        return cls(center, (size / 2.0, size / 2.0))

    @property
    def size(self) -> float:
        """Full extent along the larger axis."""
        return 2.0 * max(self.half_extent)

    def scaled(self, factor: float) -> "Window":
        return Window(self.center, (self.half_extent[0] * factor,
                                    self.half_extent[1] * factor))

    def bounds(self):
        (cx, cy), (hx, hy) = self.center, self.half_extent
        return cx - hx, cx + hx, cy - hy, cy + hy

    def axes(self, cell: float):
        """Grid node coordinates with spacing <= cell covering the window."""
        x0, x1, y0, y1 = self.bounds()
        nx = max(int(math.ceil((x1 - x0) / cell)) + 1, 2)
        ny = max(int(math.ceil((y1 - y0) / cell)) + 1, 2)
        return np.linspace(x0, x1, nx), np.linspace(y0, y1, ny)


@dataclass(frozen=True)
class LevelComponent:
    """One traced connected component of {V = level} inside a window."""

    points: np.ndarray                 # (n, 2) polyline vertices
    closed: bool
    touches_boundary: bool
    boundary_sides: frozenset          # subset of {"left","right","bottom","top"}
    level: float
    mean_direction: np.ndarray | None = None   # unit 2-vector, spanning only
    strip_deviation: float | None = None

    @property
    def spanning(self) -> bool:
        s = self.boundary_sides
        return ("left" in s and "right" in s) or ("bottom" in s and "top" in s)


class ComponentClass:
    CLOSED = "closed"
    OPEN_SPANNING = "open-spanning"
    TRUNCATED = "truncated"


def classify_component(c: LevelComponent, w: Window) -> str:
    """Closed loop, window-spanning open line, or boundary-truncated arc."""
    if c.closed:
        return ComponentClass.CLOSED
    if c.spanning:
        return ComponentClass.OPEN_SPANNING
    return ComponentClass.TRUNCATED


# ---------------------------------------------------------------------
# Grid cache: node values reused across levels on the same window
# ---------------------------------------------------------------------

class LevelGrid:
    """Sampled potential on a window grid, shared by all level queries.

    The node values depend only on the window and resolution, so interval
    bisection reuses one grid across every probed level.
    """

    def __init__(self, p: QuasiPotential, w: Window,
                 cells_per_shortest_period: int = DEFAULT_CELLS_PER_PERIOD):
        if cells_per_shortest_period < 8:
            raise ValueError("need at least 8 cells per shortest period")
        self.potential = p
        self.window = w
        self.cell = p.shortest_period() / cells_per_shortest_period
        self.xs, self.ys = w.axes(self.cell)
        self.values = p.value_grid(self.xs, self.ys)
        self.nx = self.xs.size
        self.ny = self.ys.size

    @property
    def n_cells(self) -> int:
        return (self.nx - 1) * (self.ny - 1)

    # -- edge/segment extraction (shared by predicate and polylines) --

    def _segments(self, level: float):
        """Marching-squares connectivity at a level.

        Returns (seg_a, seg_b, h_mask, v_mask): segments as pairs of
        global edge ids, plus the crossing masks for horizontal edges
        (ny, nx-1) and vertical edges (ny-1, nx).
        """
        above = self.values > level
        nx, ny = self.nx, self.ny

        h_cross = above[:, :-1] != above[:, 1:]          # (ny, nx-1)
        v_cross = above[:-1, :] != above[1:, :]          # (ny-1, nx)
        n_h = ny * (nx - 1)

        bl = above[:-1, :-1]
        br = above[:-1, 1:]
        tr = above[1:, 1:]
        tl = above[1:, :-1]
        case = (bl.astype(np.uint8) + (br.astype(np.uint8) << 1)
                + (tr.astype(np.uint8) << 2) + (tl.astype(np.uint8) << 3))

        ii, jj = np.meshgrid(np.arange(ny - 1), np.arange(nx - 1), indexing="ij")
        e_bottom = ii * (nx - 1) + jj
        e_top = (ii + 1) * (nx - 1) + jj
        e_left = n_h + ii * nx + jj
        e_right = n_h + ii * nx + jj + 1

        # case -> pair of edges, for the 14 unambiguous patterns
        simple = {
            1: ("left", "bottom"), 14: ("left", "bottom"),
            2: ("bottom", "right"), 13: ("bottom", "right"),
            3: ("left", "right"), 12: ("left", "right"),
            4: ("top", "right"), 11: ("top", "right"),
            6: ("bottom", "top"), 9: ("bottom", "top"),
            7: ("left", "top"), 8: ("left", "top"),
        }
        edges = {"bottom": e_bottom, "top": e_top, "left": e_left, "right": e_right}
        seg_a, seg_b = [], []
        for code, (ea, eb) in simple.items():
            m = case == code
            if m.any():
                seg_a.append(edges[ea][m])
                seg_b.append(edges[eb][m])

        # saddle cells: connect according to the sign at the cell center
        for code in (5, 10):
            m = case == code
            if not m.any():
                continue
            cx = (self.xs[:-1] + self.xs[1:]) / 2.0
            cy = (self.ys[:-1] + self.ys[1:]) / 2.0
            pts = np.stack([cx[jj[m]], cy[ii[m]]], axis=1)
            center_above = self.potential.value(pts) > level
            if code == 5:
                # bl & tr above: center above joins them diagonally
                a1, b1, a2, b2 = "bottom", "right", "left", "top"
                a3, b3, a4, b4 = "left", "bottom", "top", "right"
            else:
                # br & tl above
                a1, b1, a2, b2 = "left", "bottom", "top", "right"
                a3, b3, a4, b4 = "bottom", "right", "left", "top"
            for sel, (pa, pb, pc, pd) in ((center_above, (a1, b1, a2, b2)),
                                          (~center_above, (a3, b3, a4, b4))):
                if sel.any():
                    seg_a.append(edges[pa][m][sel])
                    seg_b.append(edges[pb][m][sel])
                    seg_a.append(edges[pc][m][sel])
                    seg_b.append(edges[pd][m][sel])

        if seg_a:
            seg_a = np.concatenate(seg_a)
            seg_b = np.concatenate(seg_b)
        else:
            seg_a = np.empty(0, dtype=np.int64)
            seg_b = np.empty(0, dtype=np.int64)
        return seg_a, seg_b, h_cross, v_cross

    def _boundary_side_of(self, edge_ids: np.ndarray) -> np.ndarray:
        """0 none, 1 left, 2 right, 3 bottom, 4 top for each global edge id."""
        nx, ny = self.nx, self.ny
        n_h = ny * (nx - 1)
        out = np.zeros(edge_ids.shape, dtype=np.int8)
        is_h = edge_ids < n_h
        hrow = np.where(is_h, edge_ids // (nx - 1), -1)
        out[is_h & (hrow == 0)] = 3
        out[is_h & (hrow == ny - 1)] = 4
        vcol = np.where(~is_h, (edge_ids - n_h) % nx, -1)
        out[~is_h & (vcol == 0)] = 1
        out[~is_h & (vcol == nx - 1)] = 2
        return out

    def spanning_exists(self, level: float) -> bool:
        """True iff some level-line component joins opposite window edges.

        Pure connectivity query: no root refinement, no polyline assembly.
        """
        seg_a, seg_b, _, _ = self._segments(level)
        if seg_a.size == 0:
            return False
        nodes, idx = np.unique(np.concatenate([seg_a, seg_b]), return_inverse=True)
        a = idx[: seg_a.size]
        b = idx[seg_a.size:]
        n = nodes.size
        g = coo_matrix((np.ones(a.size, dtype=np.int8), (a, b)), shape=(n, n))
        _, labels = connected_components(g, directed=False)
        side = self._boundary_side_of(nodes)
        if not (side > 0).any():
            return False
        for lo, hi in ((1, 2), (3, 4)):
            la = np.unique(labels[side == lo])
            lb = np.unique(labels[side == hi])
            if np.intersect1d(la, lb, assume_unique=True).size:
                return True
        return False

    def _refined_crossings(self, level: float, h_cross, v_cross,
                           refine: bool = True):
        """Root positions on all crossing edges.

        With ``refine`` the root is bisected against the analytic
        potential to EDGE_ROOT_TOL of the cell size; otherwise it is the
        linear interpolant of the node values (cheap, used for tracking
        and direction statistics).  Returns a dense (n_edges, 2) array
        indexed by global edge id.
        """
        nx, ny = self.nx, self.ny
        n_h = ny * (nx - 1)
        n_edges = n_h + (ny - 1) * nx
        pos = np.zeros((n_edges, 2))

        for horiz, cross in ((True, h_cross), (False, v_cross)):
            ii, jj = np.nonzero(cross)
            if ii.size == 0:
                continue
            p0 = np.stack([self.xs[jj], self.ys[ii]], axis=1)
            if horiz:
                p1 = np.stack([self.xs[jj + 1], self.ys[ii]], axis=1)
                ids = ii * (nx - 1) + jj
                s1 = self.values[ii, jj + 1] - level
            else:
                p1 = np.stack([self.xs[jj], self.ys[ii + 1]], axis=1)
                ids = n_h + ii * nx + jj
                s1 = self.values[ii + 1, jj] - level
            s0 = self.values[ii, jj] - level
            if refine:
                lo = np.zeros(ii.size)
                hi = np.ones(ii.size)
                s0_pos = s0 > 0
                n_iter = int(math.ceil(-math.log2(EDGE_ROOT_TOL)))
                for _ in range(n_iter):
                    mid = 0.5 * (lo + hi)
                    pm = p0 + mid[:, None] * (p1 - p0)
                    sm = self.potential.value(pm) - level
                    take_lo = (sm > 0) == s0_pos
                    lo = np.where(take_lo, mid, lo)
                    hi = np.where(take_lo, hi, mid)
                t = 0.5 * (lo + hi)
            else:
                denom = s0 - s1
                t = np.where(denom != 0, s0 / np.where(denom == 0, 1.0, denom), 0.5)
                t = np.clip(t, 0.0, 1.0)
            pos[ids] = p0 + t[:, None] * (p1 - p0)
        return pos

    def extract(self, level: float, refine: bool = True) -> list[LevelComponent]:
        """All level-line components at a level, as polylines."""
        seg_a, seg_b, h_cross, v_cross = self._segments(level)
        if seg_a.size == 0:
            return []
        pos = self._refined_crossings(level, h_cross, v_cross, refine)

        nodes, idx = np.unique(np.concatenate([seg_a, seg_b]), return_inverse=True)
        a = idx[: seg_a.size]
        b = idx[seg_a.size:]
        n = nodes.size
        # every node has degree 1 (window boundary) or 2 (interior)
        ends = np.concatenate([a, b])
        partners = np.concatenate([b, a])
        order = np.argsort(ends, kind="stable")
        se, sp = ends[order], partners[order]
        cnt = np.bincount(ends, minlength=n)
        starts = np.concatenate([[0], np.cumsum(cnt)[:-1]])
        nb = np.full((n, 2), -1, dtype=np.int64)
        has1 = cnt >= 1
        nb[has1, 0] = sp[starts[has1]]
        has2 = cnt >= 2
        nb[has2, 1] = sp[starts[has2] + 1]

        side = self._boundary_side_of(nodes)
        side_name = {1: "left", 2: "right", 3: "bottom", 4: "top"}
        visited = np.zeros(n, dtype=bool)
        comps = []

        def walk(start, first):
            chain = [start, first]
            visited[start] = visited[first] = True
            prev, cur = start, first
            while True:
                n1, n2 = nb[cur]
                nxt = n1 if n1 != prev else n2
                if nxt == -1 or nxt == start:
                    return chain, nxt == start
                chain.append(nxt)
                visited[nxt] = True
                prev, cur = cur, nxt

        endpoints = np.nonzero(cnt == 1)[0]
        for e in endpoints:
            if visited[e]:
                continue
            chain, _ = walk(e, nb[e, 0])
            comps.append((chain, False))
        for s in range(n):
            if visited[s] or cnt[s] == 0:
                continue
            chain, is_cycle = walk(s, nb[s, 0])
            comps.append((chain, is_cycle))

        out = []
        for chain, is_cycle in comps:
            ids = nodes[np.asarray(chain)]
            pts = pos[ids]
            if is_cycle:
                pts = np.vstack([pts, pts[:1]])
            sides = frozenset(side_name[s] for s in side[np.asarray(chain)] if s > 0)
            comp = LevelComponent(
                points=pts, closed=is_cycle,
                touches_boundary=bool(sides), boundary_sides=sides,
                level=level)
            if comp.spanning:
                try:
                    d = mean_direction(comp)
                    comp = replace(comp, mean_direction=d,
                                   strip_deviation=strip_deviation(comp, d))
                except IsotropicComponent:
                    pass
            out.append(comp)
        return out

    # -- occupancy labelling of {V <= level} --------------------------

    def sublevel_spanning(self, level: float, super_level: bool = False) -> bool:
        """4-connected occupancy percolation of {V <= level} (or >=)."""
        occ = self.values >= level if super_level else self.values <= level
        if not occ.any():
            return False
        labels, _ = ndimage.label(occ)
        for sa, sb in ((labels[:, 0], labels[:, -1]), (labels[0, :], labels[-1, :])):
            common = np.intersect1d(sa[sa > 0], sb[sb > 0])
            if common.size:
                return True
        return False


# ---------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------

def extract_level_set(p: QuasiPotential, level: float, w: Window,
                      cells_per_shortest_period: int = DEFAULT_CELLS_PER_PERIOD,
                      refine: bool = True) -> list[LevelComponent]:
    """Extract every component of {V = level} inside the window.

    Components touching the window boundary are left open and flagged;
    spanning components carry their mean direction and strip deviation.
    """
    return LevelGrid(p, w, cells_per_shortest_period).extract(level, refine)


def mean_direction(c: LevelComponent) -> np.ndarray:
    """Principal axis of the component's points, normalized to the upper
    half-plane.

    Raises IsotropicComponent when the two principal variances differ by
    less than 5%, in which case no direction is meaningful.
    """
    pts = c.points
    if len(pts) < 3:
        raise IsotropicComponent("too few points for a direction")
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / len(pts)
    evals, evecs = np.linalg.eigh(cov)
    lam1, lam2 = float(evals[1]), float(evals[0])   # descending: lam1 major
    if lam1 <= 0 or (lam1 - lam2) / lam1 < 0.05:
        raise IsotropicComponent(
            "principal variances within 5%%: %.3g vs %.3g" % (lam1, lam2))
    d = evecs[:, 1]
    if d[1] < 0 or (d[1] == 0 and d[0] < 0):
        d = -d
    return d


def strip_deviation(c: LevelComponent, direction: np.ndarray | None = None) -> float:
    """Max transverse distance from the mean-direction line through the
    component centroid."""
    if direction is None:
        direction = mean_direction(c)
    normal = np.array([-direction[1], direction[0]])
    centered = c.points - c.points.mean(axis=0)
    return float(np.abs(centered @ normal).max())


def strip_deviation_growth(p: QuasiPotential, level: float, windows,
                           cells_per_shortest_period: int = DEFAULT_CELLS_PER_PERIOD,
                           ) -> list[tuple[float, float]]:
    """Max strip deviation among spanning components, per window.

    Regular potentials plateau as windows grow; chaotic ones keep
    growing.  Raises NoOpenLines when no window has a spanning component.
    """
    sizes = [w.size for w in windows]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("windows must be strictly increasing")
    out = []
    for w in windows:
        comps = extract_level_set(p, level, w, cells_per_shortest_period,
                                  refine=False)
        devs = [c.strip_deviation for c in comps
                if c.spanning and c.strip_deviation is not None]
        # spanning components whose direction failed the isotropy test
        # still count as unbounded wandering: use half the window size
        iso = [c for c in comps if c.spanning and c.strip_deviation is None]
        if iso:
            devs.append(w.size / 2.0)
        if devs:
            out.append((w.size, max(devs)))
    if not out:
        raise NoOpenLines("no spanning component in any window at level %g" % level)
    return out


@dataclass(frozen=True)
class OpenIntervalEstimate:
    """Estimated energy interval carrying window-spanning level lines."""

    v1: float
    v2: float
    degenerate: bool
    confidence_window: Window
    tol: float

    @property
    def v0(self) -> float:
        return 0.5 * (self.v1 + self.v2)

    @property
    def width(self) -> float:
        return self.v2 - self.v1


N_PROBE_LEVELS = 17


def open_line_interval(p: QuasiPotential, w_max: Window, tol: float,
                       cells_per_shortest_period: int = DEFAULT_CELLS_PER_PERIOD,
                       ) -> OpenIntervalEstimate:
    """Bisect the energy interval where open (window-spanning) level
    lines exist.

    A level counts as open only when a spanning component exists in the
    full window and is reproduced in the half window, which suppresses
    truncation artifacts.  The two interval edges are bisected
    independently (the interval is connected).  When no probed level is
    open, the estimate degenerates to the single level bracketed by the
    sublevel / superlevel percolation thresholds.

    Raises WindowTooSmall when the two window scales disagree on more
    than 10% of the probe levels.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vmin, vmax = p.value_bounds()
    if vmax - vmin <= 0:
        raise ValueError("potential has no energy range")

    grid_full = LevelGrid(p, w_max, cells_per_shortest_period)
    grid_half = LevelGrid(p, w_max.scaled(0.5), cells_per_shortest_period)
    cache: dict[float, tuple[bool, bool]] = {}

    def verdicts(level: float) -> tuple[bool, bool]:
        if level not in cache:
            cache[level] = (grid_full.spanning_exists(level),
                            grid_half.spanning_exists(level))
        return cache[level]

    def is_open(level: float) -> bool:
        full, half = verdicts(level)
        return full and half

    probes = np.linspace(vmin, vmax, N_PROBE_LEVELS + 2)[1:-1]
    open_levels = [lv for lv in probes if is_open(lv)]

    disagree = sum(1 for lv in probes if verdicts(lv)[0] != verdicts(lv)[1])
    if disagree > 0.10 * len(probes):
        raise WindowTooSmall(
            "full/half-window spanning verdicts disagree on %d of %d probe levels"
            % (disagree, len(probes)))

    if not open_levels:
        return _degenerate_interval(p, grid_full, grid_half, is_open, w_max,
                                    tol, vmin, vmax)

    lo_open, hi_open = min(open_levels), max(open_levels)

    def bisect(lo, hi, open_at_lo):
        # invariant: is_open(lo) == open_at_lo, is_open(hi) == not open_at_lo
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if is_open(mid) == open_at_lo:
                lo = mid
            else:
                hi = mid
        return lo, hi

    below = max([lv for lv in probes if lv < lo_open and not is_open(lv)],
                default=vmin)
    above = min([lv for lv in probes if lv > hi_open and not is_open(lv)],
                default=vmax)
    lo1, hi1 = bisect(below, lo_open, open_at_lo=False)
    v1 = 0.5 * (lo1 + hi1)
    lo2, hi2 = bisect(hi_open, above, open_at_lo=True)
    v2 = 0.5 * (lo2 + hi2)

    degenerate = (v2 - v1) <= 2.0 * tol
    _check_family_symmetry(p, v1, v2, tol)
    return OpenIntervalEstimate(v1, v2, degenerate, w_max, tol)


def _degenerate_interval(p, grid_full, grid_half, is_open, w_max, tol,
                         vmin, vmax) -> OpenIntervalEstimate:
    """Locate the single open level via percolation thresholds."""
    def sub_spans(level):
        return grid_full.sublevel_spanning(level) and grid_half.sublevel_spanning(level)

    def super_spans(level):
        return (grid_full.sublevel_spanning(level, super_level=True)
                and grid_half.sublevel_spanning(level, super_level=True))

    def bisect(lo, hi, pred):
        # pred is monotone: False at lo, True at hi
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if pred(mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    tau1 = bisect(vmin, vmax, sub_spans)                  # sublevel starts spanning
    tau2 = -bisect(-vmax, -vmin, lambda lv: super_spans(-lv))  # superlevel stops
    v0 = 0.5 * (tau1 + tau2)

    if is_open(v0):
        # a narrow but genuine interval around v0: bisect its edges
        lo1 = bisect(vmin, v0, lambda lv: is_open(lv))
        hi2 = -bisect(-vmax, -v0, lambda lv: is_open(-lv))
        degenerate = (hi2 - lo1) <= 2.0 * tol
        _check_family_symmetry(p, lo1, hi2, tol)
        return OpenIntervalEstimate(lo1, hi2, degenerate, w_max, tol)
    return OpenIntervalEstimate(v0, v0, True, w_max, tol)


def _check_family_symmetry(p: QuasiPotential, v1: float, v2: float, tol: float):
    """The equal-amplitude three-cosine family has v1 = -v2; warn if not."""
    amp = p.amplitudes
    if p.d == 3 and p.offset == 0.0 and np.allclose(amp, amp[0]):
        if abs(v1 + v2) > max(4.0 * tol, 0.02 * (abs(v1) + abs(v2))):
            warnings.warn(
                "equal-amplitude family interval [%.4f, %.4f] is not "
                "symmetric about zero; increase the window" % (v1, v2),
                stacklevel=3)


# ---------------------------------------------------------------------
# sublevel occupancy labelling
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SublevelLabeling:
    """Occupancy bitmap of {V <= level} with 4-connected component labels."""

    level: float
    window: Window
    xs: np.ndarray                    # cell-center coordinates
    ys: np.ndarray
    occupancy: np.ndarray             # (ny, nx) bool
    labels: np.ndarray                # (ny, nx) int, 0 = unoccupied
    n_components: int
    bounding_boxes: tuple             # per label, (xmin, xmax, ymin, ymax)
    spans_horizontal: tuple           # per label, bool
    spans_vertical: tuple


def sublevel_region(p: QuasiPotential, level: float, w: Window,
                    resolution: int = DEFAULT_CELLS_PER_PERIOD) -> SublevelLabeling:
    """Label the 4-connected components of {V <= level} on a cell grid.

    Occupancy is evaluated at cell centers; ``resolution`` counts cells
    per shortest wave period.
    """
    cell = p.shortest_period() / resolution
    nodes_x, nodes_y = w.axes(cell)
    xs = 0.5 * (nodes_x[:-1] + nodes_x[1:])
    ys = 0.5 * (nodes_y[:-1] + nodes_y[1:])
    occ = p.value_grid(xs, ys) <= level
    labels, n = ndimage.label(occ)

    boxes, spans_h, spans_v = [], [], []
    if n:
        objs = ndimage.find_objects(labels)
        for lab, sl in enumerate(objs, start=1):
            ysl, xsl = sl
            boxes.append((float(xs[xsl.start]), float(xs[xsl.stop - 1]),
                          float(ys[ysl.start]), float(ys[ysl.stop - 1])))
            spans_h.append(xsl.start == 0 and xsl.stop == xs.size
                           and lab in labels[:, 0] and lab in labels[:, -1])
            spans_v.append(ysl.start == 0 and ysl.stop == ys.size
                           and lab in labels[0, :] and lab in labels[-1, :])
    return SublevelLabeling(
        level=level, window=w, xs=xs, ys=ys, occupancy=occ, labels=labels,
        n_components=int(n), bounding_boxes=tuple(boxes),
        spans_horizontal=tuple(bool(b) for b in spans_h),
        spans_vertical=tuple(bool(b) for b in spans_v))

"""Plane-wave superposition potentials and their torus-lift geometry.

A potential here is a finite sum of plane-wave cosines

    V(r) = sum_i  A_i * cos(k_i . r + phase_i)

which is the restriction of the d-periodic function sum_i A_i*cos(X^i)
to the affine plane X^i = k_i . r + phase_i in R^d.  The number of
waves d is the number of quasiperiods.  All objects are immutable and
safe to share across worker processes.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AmbiguousNearRelation, DegenerateDirection

TWO_PI = 2.0 * math.pi

# Parallel-to-axis threshold for embedding directions (sin of the angle).
AXIS_PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class Wave:
    """One plane-wave cosine: amplitude * cos(k . r + phase).

    ``k`` is the wavevector in radians per unit length, ``phase`` is
    normalized into [0, 2*pi).  A zero wavevector is rejected; a zero
    amplitude is allowed only when constructed explicitly (potentials
    strip such waves by default).
    """

    k: tuple[float, float]
    amplitude: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        kx, ky = float(self.k[0]), float(self.k[1])
        if kx == 0.0 and ky == 0.0:
            raise ValueError("wavevector must be nonzero")
        if not (math.isfinite(kx) and math.isfinite(ky) and math.isfinite(self.amplitude)):
            raise ValueError("wave parameters must be finite")
        object.__setattr__(self, "k", (kx, ky))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)

    @property
    def k_norm(self) -> float:
        return math.hypot(self.k[0], self.k[1])

    @property
    def period(self) -> float:
        """Spatial period of this wave along its wavevector."""
        return TWO_PI / self.k_norm


class QuasiPotential:
    """Immutable superposition of plane-wave cosines on the plane.

    Parameters
    ----------
    waves : sequence of Wave
        At least one wave.  Waves with zero amplitude are dropped unless
        ``keep_zero_amplitude`` is set (useful for free-particle controls).
    offset : float
        Constant energy offset.  Nonzero only for degenerate embeddings
        where a wave collapsed to a constant.
    """

    def __init__(self, waves, offset: float = 0.0, keep_zero_amplitude: bool = False):
        waves = tuple(waves)
        if not keep_zero_amplitude:
            waves = tuple(w for w in waves if w.amplitude != 0.0)
        if not waves:
            raise ValueError("a potential needs at least one wave")
        self._waves = waves
        self._offset = float(offset)
        k = np.array([w.k for w in waves], dtype=float)
        amp = np.array([w.amplitude for w in waves], dtype=float)
        phase = np.array([w.phase for w in waves], dtype=float)
        for a in (k, amp, phase):
            a.flags.writeable = False
        self._k = k
        self._amp = amp
        self._phase = phase

    @property
    def waves(self) -> tuple[Wave, ...]:
        return self._waves

    @property
    def d(self) -> int:
        """Number of quasiperiods (number of waves)."""
        return len(self._waves)

    @property
    def offset(self) -> float:
        return self._offset

    @property
    def wavevectors(self) -> np.ndarray:
        """(d, 2) array of wavevectors; read-only."""
        return self._k

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amp

    @property
    def phases(self) -> np.ndarray:
        return self._phase

    def __repr__(self):
        return "QuasiPotential(%d waves, offset=%g)" % (self.d, self._offset)

    # -- evaluation ----------------------------------------------------

    def lift(self, r) -> np.ndarray:
        """Torus lift X^i = k_i . r + phase_i; r shape (..., 2) -> (..., d)."""
        r = np.asarray(r, dtype=float)
        return r @ self._k.T + self._phase

    def value(self, r):
        """Potential energy at r (shape (..., 2) -> (...))."""
        return np.cos(self.lift(r)) @ self._amp + self._offset

    __call__ = value

    def value_grid(self, xs, ys) -> np.ndarray:
        """Evaluate on the tensor grid xs x ys; returns (len(ys), len(xs)).

        Same sum as :meth:`value` but avoids materializing the (N, 2)
        point array; used by the level-set extractors on large windows.
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        out = np.full((ys.size, xs.size), self._offset)
        for (kx, ky), a, ph in zip(self._k, self._amp, self._phase):
            out += a * np.cos((kx * xs)[None, :] + (ky * ys)[:, None] + ph)
        return out

    def gradient(self, r) -> np.ndarray:
        """Analytic gradient dV/dr = -sum_i A_i sin(k_i . r + phase_i) k_i."""
        r = np.asarray(r, dtype=float)
        s = np.sin(self.lift(r)) * self._amp
        return -(s @ self._k)

    def force(self, r) -> np.ndarray:
        """-grad V, the classical force."""
        r = np.asarray(r, dtype=float)
        s = np.sin(self.lift(r)) * self._amp
        return s @ self._k

    def value_bounds(self) -> tuple[float, float]:
        """Closure [V_min, V_max] of the value set of the torus function.

        For a cosine sum this is offset -/+ sum |A_i|; for aperiodic
        embeddings the planar values are dense in this interval.
        """
        s = float(np.abs(self._amp).sum())
        return self._offset - s, self._offset + s

    # -- geometry ------------------------------------------------------

    def shortest_period(self) -> float:
        """Smallest single-wave period (sets the grid resolution scale)."""
        return TWO_PI / float(np.linalg.norm(self._k, axis=1).max())

    def longest_period(self) -> float:
        """Largest single-wave period (sets the window size scale)."""
        return TWO_PI / float(np.linalg.norm(self._k, axis=1).min())

    def max_force(self) -> float:
        """Upper bound sum_i |A_i| |k_i| on |grad V|."""
        return float((np.abs(self._amp) * np.linalg.norm(self._k, axis=1)).sum())

    # -- transforms ----------------------------------------------------

    def with_phases(self, phases) -> "QuasiPotential":
        """Copy with the phases replaced (wavevectors and amplitudes kept)."""
        phases = np.asarray(phases, dtype=float)
        if phases.shape != (self.d,):
            raise ValueError("need one phase per wave")
        waves = [Wave(w.k, w.amplitude, ph) for w, ph in zip(self._waves, phases)]
        return QuasiPotential(waves, self._offset, keep_zero_amplitude=True)

    def shifted(self, s) -> "QuasiPotential":
        """Potential translated by s: V'(r) = V(r + s).

        Equivalent to advancing every phase by k_i . s.
        """
        s = np.asarray(s, dtype=float)
        return self.with_phases(self._phase + self._k @ s)


# ---------------------------------------------------------------------
# Rationality of the embedding (potential types I / II / III)
# ---------------------------------------------------------------------

class PotentialType(Enum):
    TYPE_I = "doubly-periodic"
    TYPE_II = "one-period"
    TYPE_III = "aperiodic"


@dataclass(frozen=True)
class RationalityVerdict:
    """Outcome of the integer-period search for a potential.

    ``periods`` holds 0-2 verified plane period vectors, ``relations``
    the irreducible integer vectors annihilating the wavevector list.
    """

    kind: PotentialType
    periods: tuple[tuple[float, float], ...]
    relations: tuple[tuple[int, ...], ...]
    max_coeff: int
    tol: float


def _first_nonzero_positive(m: np.ndarray) -> np.ndarray:
    nz = np.nonzero(m)[0]
    if nz.size and m[nz[0]] < 0:
        return -m
    return m


def _integer_tuples(d: int, max_coeff: int) -> np.ndarray:
    """All integer d-tuples with |entries| <= max_coeff, excluding zero."""
    rng = np.arange(-max_coeff, max_coeff + 1)
    grids = np.meshgrid(*([rng] * d), indexing="ij")
    m = np.stack([g.ravel() for g in grids], axis=1)
    return m[np.any(m != 0, axis=1)]


def classify_rationality(p: QuasiPotential, max_coeff: int = 12,
                         tol: float = 1e-9) -> RationalityVerdict:
    """Detect exact plane periods of the potential by integer search.

    A vector e is a period iff k_i . e = 2*pi*n_i with integers n_i for
    every wave, i.e. iff the integer tuple n lies (to ``tol``, relative)
    in the column span of the wavevector matrix.  The rank of the
    resulting period group gives the type: 2 -> doubly periodic (I),
    1 -> single period direction (II), 0 -> aperiodic (III).  Candidate
    periods are verified by direct evaluation at probe points.

    Raises
    ------
    AmbiguousNearRelation
        if any candidate's residual falls in (tol, 10*tol): the verdict
        would be sensitive to the tolerance, tighten the inputs.
    """
    if max_coeff < 1:
        raise ValueError("max_coeff must be >= 1")
    k = p.wavevectors
    d = p.d
    kmax = float(np.linalg.norm(k, axis=1).max())

    if d > 5 and (2 * max_coeff + 1) ** d > 5e7:
        raise ValueError("integer search too large for d=%d waves" % d)
    cand = _integer_tuples(d, max_coeff).astype(float)
    norms = np.linalg.norm(cand, axis=1)

    # integer relations: m with sum_i m_i k_i = 0
    rel_residual = np.linalg.norm(cand @ k, axis=1) / (norms * kmax)
    in_band = (rel_residual > tol) & (rel_residual < 10 * tol)
    if np.any(in_band):
        worst = cand[np.argmin(np.where(in_band, rel_residual, np.inf))]
        raise AmbiguousNearRelation(
            "relation residual for m=%s lies within (tol, 10*tol)" % worst.astype(int))
    relations = _independent_rows(cand[rel_residual <= tol])

    # integer period candidates: n consistent with the column span of k
    proj = k @ np.linalg.pinv(k)          # projector onto span{col(k)} in R^d
    consistency = np.linalg.norm(cand - cand @ proj.T, axis=1) / norms
    in_band = (consistency > tol) & (consistency < 10 * tol)
    if np.any(in_band):
        worst = cand[np.argmin(np.where(in_band, consistency, np.inf))]
        raise AmbiguousNearRelation(
            "period residual for n=%s lies within (tol, 10*tol)" % worst.astype(int))
    good = cand[consistency <= tol]
    periods = _period_basis(good, k, p)

    kind = {0: PotentialType.TYPE_III,
            1: PotentialType.TYPE_II,
            2: PotentialType.TYPE_I}[len(periods)]
    return RationalityVerdict(
        kind=kind,
        periods=tuple(tuple(e) for e in periods),
        relations=tuple(tuple(int(x) for x in m) for m in relations),
        max_coeff=max_coeff,
        tol=tol,
    )


def _independent_rows(m: np.ndarray) -> list[np.ndarray]:
    """Greedy selection of an irreducible, sign-normalized independent set."""
    out: list[np.ndarray] = []
    if m.size == 0:
        return out
    order = np.argsort(np.abs(m).sum(axis=1))
    for row in m[order]:
        row = row.astype(int)
        g = int(np.gcd.reduce(np.abs(row)))
        if g == 0:
            continue
        row = row // g
        row = _first_nonzero_positive(row)
        trial = out + [row]
        if np.linalg.matrix_rank(np.array(trial, dtype=float)) == len(trial):
            out.append(row)
    return out


def _period_basis(n_good: np.ndarray, k: np.ndarray, p: QuasiPotential) -> list[np.ndarray]:
    """Solve k e = 2*pi*n for each admissible n and reduce to a short basis."""
    if n_good.size == 0:
        return []
    pinv = np.linalg.pinv(k)
    es = TWO_PI * (n_good @ pinv.T)
    # verify each candidate by direct evaluation at scattered probe points
    rng = np.random.default_rng(0)
    probes = rng.uniform(-5.0, 5.0, size=(32, 2)) * p.longest_period()
    scale = max(abs(b) for b in p.value_bounds()) or 1.0
    ok = [e for e in es
          if np.max(np.abs(p.value(probes + e) - p.value(probes))) < 1e-8 * scale]
    if not ok:
        return []
    ok.sort(key=lambda e: float(np.hypot(*e)))
    basis: list[np.ndarray] = []
    for e in ok:
        if not basis:
            basis.append(e)
            continue
        if len(basis) == 1:
            cross = basis[0][0] * e[1] - basis[0][1] * e[0]
            if abs(cross) > 1e-9 * np.hypot(*basis[0]) * np.hypot(*e):
                basis.append(e)
                break
    return _gauss_reduce(basis)


def _gauss_reduce(basis: list[np.ndarray]) -> list[np.ndarray]:
    """Lagrange-Gauss reduction of a rank-<=2 plane lattice basis."""
    if len(basis) < 2:
        return basis
    a, b = basis
    for _ in range(64):
        if np.dot(a, a) > np.dot(b, b):
            a, b = b, a
        mu = round(float(np.dot(a, b) / np.dot(a, a)))
        if mu == 0:
            break
        b = b - mu * a
    return [a, b]


# ---------------------------------------------------------------------
# Sphere-direction construction for the three-cosine family
# ---------------------------------------------------------------------

def from_sphere_direction(n, phases=(0.0, 0.0, 0.0)) -> QuasiPotential:
    """Build the unit-amplitude three-cosine potential with embedded-plane
    normal ``n``.

    The plane orthogonal to the unit vector n is spanned by the
    orthonormal pair u = (-n2, n1, 0)/hypot(n1, n2) and v = n x u, which
    puts the planar x axis along the intersection with the (X^1, X^2)
    coordinate plane (so the third wave has zero x-component).  Wave i
    gets the wavevector (u_i, v_i) and phase phases[i].

    Directions parallel to a coordinate axis (within 1e-12) collapse one
    wave to a constant; the degenerate potential is still returned, with
    the constant folded into ``offset``, and a DegenerateDirection
    warning is issued.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    nn = float(np.linalg.norm(n))
    if abs(nn - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector (|n|-1 = %g)" % (nn - 1.0))
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (3,):
        raise ValueError("need three phases")

    s = math.hypot(n[0], n[1])
    degenerate = any(math.sqrt(max(0.0, 1.0 - n[i] ** 2)) < AXIS_PARALLEL_TOL
                     for i in range(3))
    if s < AXIS_PARALLEL_TOL:
        # plane is the (X^1, X^2) coordinate plane; pick axes along it
        u = np.array([0.0, math.copysign(1.0, n[2]), 0.0])
    else:
        u = np.array([-n[1], n[0], 0.0]) / s
    v = np.cross(n, u)

    waves, offset = [], 0.0
    for i in range(3):
        kx, ky = float(u[i]), float(v[i])
        if math.hypot(kx, ky) < AXIS_PARALLEL_TOL:
            offset += math.cos(float(phases[i]))
            continue
        waves.append(Wave((kx, ky), 1.0, float(phases[i])))
    if degenerate:
        warnings.warn(
            "embedding direction parallel to a coordinate axis: "
            "potential degenerates to fewer quasiperiods", DegenerateDirection,
            stacklevel=2)
    return QuasiPotential(waves, offset=offset, keep_zero_amplitude=True)


def plane_normal(p: QuasiPotential) -> np.ndarray:
    """Unit normal of the embedded plane of a three-wave potential.

    The plane direction in R^3 is spanned by the per-coordinate rows of
    the wavevector list; the normal is their cross product.  Inverse of
    :func:`from_sphere_direction` on non-degenerate inputs.
    """
    if p.d != 3:
        raise ValueError("plane normal is defined for three-wave potentials")
    u = p.wavevectors[:, 0]
    v = p.wavevectors[:, 1]
    n = np.cross(u, v)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("embedding is rank-deficient")
    n = n / norm
    return _first_nonzero_positive_float(n)


def _first_nonzero_positive_float(n: np.ndarray) -> np.ndarray:
    nz = np.nonzero(np.abs(n) > 1e-15)[0]
    if nz.size and n[nz[0]] < 0:
        return -n
    return n


# ---------------------------------------------------------------------
# Bundled example potentials of the equal-amplitude three-cosine family
# ---------------------------------------------------------------------

# Nine decimal coefficient strings each: (a1, b1, c1, a2, b2, c2, a3, b3, c3)
# for cos(a1 x + b1 y + c1) + cos(a2 x + b2 y + c2) + cos(a3 x + b3 y + c3).
# Kept as strings so config files round-trip them digit for digit.
PRESET_COEFFICIENTS: dict[str, tuple[str, ...]] = {
    # deep inside the largest stability zone, invariant (1, 0, 0)
    "regular-100": (
        "-0.12251993420338196", "-0.2250221718850486", "1.5505542426422338",
        "0.9924660526802913", "-0.02777898711920925", "0.12374024573075965",
        "0", "0.9739575709622912", "3.1548761694687415",
    ),
    # inside the stability zone with invariant (1, 1, 1)
    "regular-111": (
        "-0.6194151736623348", "-0.44502823229775823", "1.4421279589366298",
        "0.7850635914605004", "-0.3511272752829312", "0.8986352554278761",
        "0", "0.8238079321117983", "2.3379002628621635",
    ),
    # chaotic open level lines, occurring only at energy 0
    "chaotic": (
        "-0.6190763027420052", "-0.2572674789786692", "1.311209111211166",
        "0.7853308419916342", "-0.20280395367888493", "0.8662242771884692",
        "0", "0.9448195598272575", "2.950743051151684",
    ),
}


def preset_potential(name: str) -> QuasiPotential:
    """One of the bundled three-cosine example potentials.

    Available names: ``regular-100`` (stability zone (1,0,0)),
    ``regular-111`` (zone (1,1,1)), ``chaotic`` (open lines only at 0).
    """
    try:
        c = [float(x) for x in PRESET_COEFFICIENTS[name]]
    except KeyError:
        raise KeyError("unknown preset %r; have %s"
                       % (name, sorted(PRESET_COEFFICIENTS))) from None
    waves = [Wave((c[0], c[1]), 1.0, c[2]),
             Wave((c[3], c[4]), 1.0, c[5]),
             Wave((c[6], c[7]), 1.0, c[8])]
    return QuasiPotential(waves)

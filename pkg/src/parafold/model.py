"""Geometry and dynamics of the model field z' = z^{k+1} - eps on the sphere.

The module computes the exact combinatorial-geometric data (singularities,
periods, period-gon, homoclinic angles, zig-zag invariant) and provides an
adaptive complex-plane integrator for trajectories and separatrices, so every
combinatorial answer can be cross-checked dynamically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.integrate import quad

TWO_PI = 2.0 * math.pi


class DegenerateParameter(ValueError):
    """eps = 0: the singular point is multiple, geometric queries undefined."""


class AtBifurcation(RuntimeError):
    """The invariant is requested at (or numerically on) a homoclinic value."""


class StepSizeUnderflow(RuntimeError):
    """The adaptive integrator could not meet the tolerance."""


class PathThroughSingularity(ValueError):
    """A quadrature path passes within the capture radius of a singularity."""


class SeriesOutOfDomain(ValueError):
    """Series branch of the rectifying coordinate evaluated inside its cut."""


class RadiusTooSmall(ValueError):
    """Eyelet radius below the geometric lower bound of the strip model."""


@dataclass(frozen=True)
class ModelField:
    """The vector field z' = z^{k+1} - eps."""

    k: int
    epsilon: complex

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    def rhs(self, z):
        return z ** (self.k + 1) - self.epsilon

    def d_rhs(self, z):
        return (self.k + 1) * z**self.k

    @property
    def scale(self):
        """|eps|^{1/(k+1)}: the radius of the singular-gon."""
        return abs(self.epsilon) ** (1.0 / (self.k + 1))

    def theta(self):
        """arg(eps) normalised to [0, 2*pi)."""
        return cmath.phase(self.epsilon) % TWO_PI


def singularities(fld: ModelField) -> np.ndarray:
    """The k+1 roots of z^{k+1} = eps, counterclockwise from the principal one."""
    if fld.epsilon == 0:
        raise DegenerateParameter("eps = 0")
    k1 = fld.k + 1
    ang = (fld.theta() + TWO_PI * np.arange(k1)) / k1
    return fld.scale * np.exp(1j * ang)


def bifurcation_angles(k: int) -> np.ndarray:
    """The 2k homoclinic angles theta_j in [0, 2*pi)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    j = np.arange(2 * k)
    if k % 2 == 1:
        return j * math.pi / k
    return math.pi / (2 * k) + j * math.pi / k


@dataclass(frozen=True)
class PeriodGon:
    """Periods of the singular points and the closed polygon they span.

    ``vertices[l]`` is the vertex between the sides of singularities l and
    l+1 (half-integer index l+1/2 in the usual convention); consecutive
    differences along sides are the negated periods.  For the model field
    the sides close up exactly and ``gap`` is 0; period data extracted from
    an unfolding carries a nonzero gap and no closed polygon.
    """

    k: int
    epsilon: complex
    singularities: np.ndarray
    eigenvalues: np.ndarray
    periods: np.ndarray
    vertices: np.ndarray | None
    gap: complex = 0.0

    @property
    def scale(self):
        if self.vertices is not None:
            return float(np.abs(self.vertices).max())
        return float(np.abs(self.periods).max())

    def side(self, ell):
        """Endpoints (start, end) of the side carrying singularity ``ell``."""
        k1 = self.k + 1
        return self.vertices[(ell - 1) % k1], self.vertices[ell % k1]


def periods(fld: ModelField) -> PeriodGon:
    """Eigenvalues, periods and the centred period-gon of the model field."""
    sing = singularities(fld)
    eig = fld.d_rhs(sing)
    mu = 2j * math.pi / eig
    partial = -np.cumsum(mu)
    vertices = partial - partial.mean()
    return PeriodGon(
        k=fld.k,
        epsilon=fld.epsilon,
        singularities=sing,
        eigenvalues=eig,
        periods=mu,
        vertices=vertices,
        gap=0.0,
    )


def vertex_scale(k: int) -> float:
    """Circumradius constant of the period-gon at |eps| = 1."""
    return (math.pi / (k + 1)) / math.sin(math.pi / (k + 1))


def homoclinic_defect(fld: ModelField, gon: PeriodGon | None = None):
    """Distance (on normalised heights) from the vertical-symmetry locus.

    Returns ``(defect, pairs)`` where pairs are the vertex index pairs at
    (nearly) equal height.  Symmetry of the period-gon about the imaginary
    axis is the homoclinic criterion; for k = 1 the symmetric position with
    both vertices on the axis has no equal-height pair, so the on-axis
    defect is included there.
    """
    gon = periods(fld) if gon is None else gon
    v = gon.vertices
    scale = gon.scale
    k1 = fld.k + 1
    heights = v.imag / scale
    best = math.inf
    pairs = []
    for i in range(k1):
        for j in range(i + 1, k1):
            d = abs(heights[i] - heights[j])
            best = min(best, d)
            pairs.append(((i, j), d))
    if fld.k == 1:
        best = min(best, float(np.abs(v.real).min()) / scale)
    return best, pairs


def is_homoclinic(fld: ModelField, tol: float = 1e-9):
    """Whether arg(eps) sits on a homoclinic ray, with witness vertex pairs."""
    defect, pairs = homoclinic_defect(fld)
    flagged = defect <= tol
    witnesses = [p for p, d in pairs if d <= tol] if flagged else []
    return flagged, witnesses


# ---------------------------------------------------------------------------
# trajectory integration
# ---------------------------------------------------------------------------


class Termination(str, Enum):
    LANDED = "landed"
    ESCAPED = "escaped"
    TIME_CAP = "time_cap"
    HIT_BOUNDARY = "hit_boundary"


@dataclass(frozen=True)
class IntegratorControls:
    rtol: float = 1e-10
    atol: float = 1e-13
    capture_radius: float | None = None  # default 1e-6 * |eps|^{1/(k+1)}
    escape_radius: float | None = None  # default 10 * |eps|^{1/(k+1)} + 10
    boundary_radius: float | None = None  # e.g. the disk radius r, if restricted
    time_cap: float = 1e4
    max_steps: int = 200_000
    h_init: float = 1e-3
    h_min: float = 1e-14
    h_max: float = 1.0

    def resolved(self, fld: ModelField):
        cap = self.capture_radius
        esc = self.escape_radius
        if cap is None:
            cap = 1e-6 * fld.scale
        if esc is None:
            esc = 10.0 * fld.scale + 10.0
        return replace(self, capture_radius=cap, escape_radius=esc)


@dataclass
class Trajectory:
    points: np.ndarray
    times: np.ndarray
    termination: Termination
    landed_index: int | None = None
    direction: int = 1
    launch_angle: float | None = None
    orientation: str | None = None

    def to_dict(self):
        term = self.termination.value
        if self.termination is Termination.LANDED:
            term = f"landed:{self.landed_index}"
        return {
            "points": [[float(z.real), float(z.imag)] for z in self.points],
            "termination": term,
        }


# Dormand-Prince 5(4) tableau
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def integrate(
    fld: ModelField,
    z0: complex,
    direction: int = 1,
    controls: IntegratorControls | None = None,
) -> Trajectory:
    """Adaptive RK5(4) integration of z' = z^{k+1} - eps until a stop fires.

    ``direction = -1`` integrates in reversed time.  Times are the
    (positive, increasing) integration parameter.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    ctl = (controls or IntegratorControls()).resolved(fld)
    sing = singularities(fld)
    if np.abs(sing - z0).min() < ctl.capture_radius:
        raise ValueError("z0 lies within the capture radius of a singularity")

    z_big = 1e120 ** (1.0 / (fld.k + 1))

    def f(z):
        # overflow guard: absurd trial stages force a step rejection
        if abs(z) > z_big:
            return direction * complex(1e120)
        return direction * fld.rhs(z)

    zs = [complex(z0)]
    ts = [0.0]
    z = complex(z0)
    t = 0.0
    h = min(ctl.h_init, 1e-2 / (1.0 + abs(f(z0))))
    termination = None
    landed = None
    ks = [0j] * 7
    for _ in range(ctl.max_steps):
        if h < ctl.h_min:
            raise StepSizeUnderflow(f"step size {h:g} below floor at t={t:g}")
        h = min(h, ctl.h_max, ctl.time_cap - t)
        ks[0] = f(z)
        for i in range(1, 7):
            acc = 0j
            for j, a in enumerate(_DP_A[i]):
                acc += a * ks[j]
            ks[i] = f(z + h * acc)
        z5 = z + h * sum(b * kk for b, kk in zip(_DP_B5, ks))
        z4 = z + h * sum(b * kk for b, kk in zip(_DP_B4, ks))
        err = abs(z5 - z4) / (ctl.atol + ctl.rtol * max(abs(z), abs(z5)))
        if err <= 1.0:
            t += h
            z = z5
            zs.append(z)
            ts.append(t)
            dist = np.abs(sing - z)
            if dist.min() <= ctl.capture_radius:
                termination = Termination.LANDED
                landed = int(dist.argmin())
                break
            if ctl.boundary_radius is not None and abs(z) >= ctl.boundary_radius:
                termination = Termination.HIT_BOUNDARY
                break
            if abs(z) >= ctl.escape_radius:
                termination = Termination.ESCAPED
                break
            if t >= ctl.time_cap:
                termination = Termination.TIME_CAP
                break
        factor = 0.9 * (err + 1e-300) ** -0.2
        h *= min(5.0, max(0.2, factor))
    if termination is None:
        termination = Termination.TIME_CAP
    return Trajectory(
        points=np.array(zs),
        times=np.array(ts),
        termination=termination,
        landed_index=landed,
        direction=direction,
    )


def separatrix_directions(k: int) -> np.ndarray:
    """Asymptotic directions arg z = pi*j/k, alternately outgoing/incoming."""
    return np.arange(2 * k) * math.pi / k


def separatrices(
    fld: ModelField,
    launch_radius: float | None = None,
    controls: IntegratorControls | None = None,
) -> list[Trajectory]:
    """The 2k separatrices, integrated inward from a far-field launch circle.

    Outgoing separatrices (even j) are integrated in reversed time so that
    every trajectory runs from the launch point towards its landing point.
    """
    if fld.epsilon == 0:
        raise DegenerateParameter("eps = 0")
    ctl = (controls or IntegratorControls()).resolved(fld)
    if launch_radius is None:
        launch_radius = 0.995 * ctl.escape_radius
    if launch_radius <= fld.scale:
        raise ValueError("launch radius must exceed |eps|^{1/(k+1)}")
    if launch_radius >= ctl.escape_radius:
        ctl = replace(ctl, escape_radius=launch_radius / 0.995)
    out = []
    for j, ang in enumerate(separatrix_directions(fld.k)):
        outgoing = j % 2 == 0
        traj = integrate(
            fld,
            launch_radius * cmath.exp(1j * ang),
            direction=-1 if outgoing else 1,
            controls=ctl,
        )
        traj.launch_angle = float(ang)
        traj.orientation = "outgoing" if outgoing else "incoming"
        out.append(traj)
    return out


# ---------------------------------------------------------------------------
# Douady-Sentenac combinatorial invariant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DSInvariant:
    """Zig-zag chain of singularity indices plus the attachment datum."""

    k: int
    epsilon: complex
    order: tuple
    attachment: int

    @property
    def edges(self):
        return frozenset(
            frozenset((self.order[i], self.order[i + 1])) for i in range(len(self.order) - 1)
        )

    def normalised(self):
        if self.order[0] > self.order[-1]:
            return replace(self, order=tuple(reversed(self.order)))
        return self

    def to_dict(self):
        return {
            "k": self.k,
            "order": list(self.order),
            "attachment": self.attachment,
        }


def _side_intervals(gon: PeriodGon):
    """Per-side imaginary-axis projection [lo, hi] and interpolation data."""
    k1 = gon.k + 1
    sides = []
    for ell in range(k1):
        a, b = gon.side(ell)
        sides.append((ell, a, b))
    return sides


def _band_edges(gon: PeriodGon, tol: float):
    """Edges of the trunk from overlapping side projections, via a band sweep."""
    v = gon.vertices
    scale = gon.scale
    heights = np.sort(v.imag)
    if np.diff(heights).min() <= tol * scale:
        raise AtBifurcation("two period-gon vertices share a height")
    sides = _side_intervals(gon)
    edges = []
    for lo, hi in zip(heights[:-1], heights[1:]):
        y = 0.5 * (lo + hi)
        cover = []
        for ell, a, b in sides:
            ia, ib = a.imag, b.imag
            if min(ia, ib) < y < max(ia, ib):
                x = a.real + (b.real - a.real) * (y - ia) / (ib - ia)
                cover.append((x, ell))
        if len(cover) != 2:
            raise AtBifurcation(f"band at height {y:g} covered by {len(cover)} sides")
        cover.sort()
        edges.append((cover[0][1], cover[1][1]))
    return edges


def _walk_path(edges, n_vertices):
    adj = {i: [] for i in range(n_vertices)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    ends = [i for i, nbrs in adj.items() if len(nbrs) == 1]
    if len(ends) != 2 or any(len(nbrs) > 2 for nbrs in adj.values()):
        raise AtBifurcation("projection overlaps do not form a trunk")
    start = min(ends)
    order = [start]
    prev = None
    cur = start
    while len(order) < n_vertices:
        nxt = [w for w in adj[cur] if w != prev]
        if len(nxt) != 1:
            raise AtBifurcation("projection overlaps do not form a trunk")
        prev, cur = cur, nxt[0]
        order.append(cur)
    return tuple(order)


def _attachment(fld: ModelField, controls=None) -> int:
    """Landing index of the separatrix with asymptotic direction arg z = 0."""
    ctl = (controls or IntegratorControls()).resolved(fld)
    launch = 0.995 * ctl.escape_radius
    traj = integrate(fld, launch + 0j, direction=-1, controls=ctl)
    if traj.termination is not Termination.LANDED:
        raise AtBifurcation("distinguished separatrix failed to land")
    return traj.landed_index


def ds_invariant(
    fld: ModelField,
    tol: float = 1e-9,
    validate: bool = False,
    controls: IntegratorControls | None = None,
) -> DSInvariant:
    """The combinatorial invariant, from side-projection overlaps.

    The trunk ordering comes from the band sweep of the period-gon; the
    attachment comes from integrating the distinguished separatrix
    (asymptotic direction nearest arg z = 0).  With ``validate=True`` the
    trunk is recomputed from integrated trajectories and must agree.
    """
    flagged, _ = is_homoclinic(fld, tol)
    if flagged:
        raise AtBifurcation("arg eps lies on a homoclinic ray")
    gon = periods(fld)
    order = _walk_path(_band_edges(gon, tol), fld.k + 1)
    inv = DSInvariant(
        k=fld.k, epsilon=fld.epsilon, order=order, attachment=_attachment(fld, controls)
    ).normalised()
    if validate:
        other = ds_invariant_integrated(fld, controls=controls)
        if other.order != inv.order:
            raise AtBifurcation(
                f"projection trunk {inv.order} != integrated trunk {other.order}"
            )
    return inv


def ds_invariant_integrated(
    fld: ModelField,
    n_angles: int = 24,
    seed_scale: float = 0.2,
    controls: IntegratorControls | None = None,
) -> DSInvariant:
    """The invariant recovered purely dynamically.

    Orbits seeded on circles around each singularity are integrated both
    ways; each generic orbit joins two singular points, and the collected
    connections must assemble into the trunk.
    """
    sing = singularities(fld)
    k1 = fld.k + 1
    gaps = [abs(sing[i] - sing[j]) for i in range(k1) for j in range(i + 1, k1)]
    rho = seed_scale * min(gaps)
    edges = set()
    for ell in range(k1):
        for m in range(n_angles):
            seed = sing[ell] + rho * cmath.exp(2j * math.pi * m / n_angles)
            fwd = integrate(fld, seed, 1, controls)
            bwd = integrate(fld, seed, -1, controls)
            if (
                fwd.termination is Termination.LANDED
                and bwd.termination is Termination.LANDED
                and fwd.landed_index != bwd.landed_index
            ):
                edges.add(frozenset((fwd.landed_index, bwd.landed_index)))
    order = _walk_path([tuple(sorted(e)) for e in edges], k1)
    return DSInvariant(
        k=fld.k, epsilon=fld.epsilon, order=order, attachment=_attachment(fld, controls)
    ).normalised()


def apply_transition(order, parity: int):
    """Rewire a trunk across a homoclinic bifurcation.

    Erase every other segment (those with index = parity mod 2), swap the
    endpoints of each surviving segment, and keep the segment order; lone
    vertices keep their place in the chain.
    """
    chain = list(order)
    n_seg = len(chain) - 1
    kept = [(chain[i], chain[i + 1]) for i in range(parity, n_seg, 2)]
    groups = []
    covered = set()
    for a, b in kept:
        covered.add(a)
        covered.add(b)
    i = 0
    while i < len(chain):
        if i + 1 < len(chain) and (chain[i], chain[i + 1]) in kept:
            groups.append([chain[i + 1], chain[i]])
            i += 2
        elif chain[i] not in covered:
            groups.append([chain[i]])
            i += 1
        else:
            i += 1
    return tuple(x for g in groups for x in g)


def ds_transition(k: int, j: int, probe_offset: float = 1e-3, abs_eps: float = 1.0):
    """DS invariants on the two sides of the homoclinic angle theta_j."""
    if not 0 <= j < 2 * k:
        raise ValueError("angle index out of range")
    theta_j = bifurcation_angles(k)[j]
    before = ds_invariant(ModelField(k, abs_eps * cmath.exp(1j * (theta_j - probe_offset))))
    after = ds_invariant(ModelField(k, abs_eps * cmath.exp(1j * (theta_j + probe_offset))))
    return before, after


def transition_rule_holds(before: DSInvariant, after: DSInvariant) -> bool:
    """Whether the erase-alternate-and-swap rule maps one invariant to the other.

    The singularity labels of the two sides are matched geometrically first:
    indexing is by normalised arg(eps), which wraps when a probe crosses
    zero, while the rule presumes the continuous labelling.
    """
    sb = singularities(ModelField(before.k, before.epsilon))
    sa = singularities(ModelField(after.k, after.epsilon))
    relabel = {i: int(np.abs(sa - z).argmin()) for i, z in enumerate(sb)}
    if sorted(relabel.values()) != list(range(len(sa))):
        raise ValueError("probe offsets too large to match singularities")
    order_b = tuple(relabel[i] for i in before.order)
    targets = {after.order, tuple(reversed(after.order))}
    for order in (order_b, tuple(reversed(order_b))):
        for parity in (0, 1):
            if apply_transition(order, parity) in targets:
                return True
    return False


def is_zigzag(order, points, strict_margin: float = 1e-12) -> bool:
    """Whether a linear order of planar points is a zig-zag ordering.

    True iff some rotation makes the real parts strictly increasing along
    the order, i.e. all steps fit in an open half-plane of directions.
    """
    steps = [points[b] - points[a] for a, b in zip(order[:-1], order[1:])]
    args = [cmath.phase(s) for s in steps]
    # need phi with cos(arg + phi) > 0 for every step
    candidates = []
    for a in args:
        candidates.extend([-a, -a + math.pi / 2 - 1e-9, -a - math.pi / 2 + 1e-9])
    for phi in candidates:
        if all(math.cos(a + phi) > strict_margin for a in args):
            return True
    return False


# ---------------------------------------------------------------------------
# rectifying coordinate
# ---------------------------------------------------------------------------


def xi_series(fld: ModelField, z: complex, tol: float = 1e-18, max_terms: int = 20000):
    """Monodromy-free branch of int dz/(z^{k+1}-eps) outside the root disk.

    xi(z) = -sum_n eps^n / (a_n z^{a_n}) with a_n = (n+1)(k+1) - 1.
    """
    k1 = fld.k + 1
    if abs(z) ** k1 <= abs(fld.epsilon):
        raise SeriesOutOfDomain("|z|^{k+1} must exceed |eps|")
    ratio = fld.epsilon / z**k1
    zk = z**fld.k
    acc = 0j
    power = 1.0 + 0.0j  # eps^n / z^{n(k+1)}
    for n in range(max_terms):
        a_n = (n + 1) * k1 - 1
        term = power / (a_n * zk)
        acc -= term
        if abs(term) < tol * max(abs(acc), 1e-300):
            break
        power *= ratio
    return acc


def rectify(
    fld: ModelField,
    z: complex,
    mode: str = "quadrature",
    capture_radius: float | None = None,
) -> complex:
    """Complex time t = int_0^z dz/(z^{k+1}-eps).

    ``quadrature`` integrates along the straight segment from the origin and
    refuses paths passing through a capture neighbourhood of a singularity;
    ``series`` evaluates the monodromy-free branch xi valid outside the
    singular-gon (offset by a period-gon vertex it equals the quadrature
    branch on each sector).
    """
    if mode == "series":
        return xi_series(fld, z)
    if mode != "quadrature":
        raise ValueError("mode must be 'quadrature' or 'series'")
    if fld.epsilon == 0:
        raise DegenerateParameter("eps = 0")
    cap = 1e-6 * fld.scale if capture_radius is None else capture_radius
    for s in singularities(fld):
        # distance from segment [0, z] to s
        t_proj = (s.real * z.real + s.imag * z.imag) / (abs(z) ** 2)
        t_proj = min(1.0, max(0.0, t_proj))
        if abs(s - t_proj * z) < cap:
            raise PathThroughSingularity(f"segment passes near singularity {s:.6g}")

    def integrand(s):
        return z / fld.rhs(s * z)

    val, _ = quad(integrand, 0.0, 1.0, complex_func=True, limit=200, epsabs=1e-13, epsrel=1e-12)
    return val


def sector_index(fld: ModelField, z: complex, slit_tol: float = 1e-12):
    """Index of the radial-slit sector containing z.

    Sector l spans the angles between the slits through singularities l and
    l+1.  On a slit the point is nudged counterclockwise; the flag reports
    it.
    """
    theta = fld.theta()
    k1 = fld.k + 1
    ang = (cmath.phase(z) - theta / k1) % TWO_PI
    ell = int(ang / (TWO_PI / k1)) % k1
    rel = ang - ell * TWO_PI / k1
    on_slit = min(rel, TWO_PI / k1 - rel) < slit_tol
    if on_slit:
        ang = (ang + 2 * slit_tol) % TWO_PI
        ell = int(ang / (TWO_PI / k1)) % k1
    return ell, on_slit


# ---------------------------------------------------------------------------
# the tau-model translation surface
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TauModel:
    """Polygon-with-strips model of the rectified surface.

    2(k+1) vertices alternate long sides (the negated periods, by increasing
    argument) and short gap sides; half-infinite strips sit orthogonally on
    the long sides; eyelet disks of radius R are removed at the short-side
    midpoints.
    """

    k: int
    vertices: np.ndarray  # 2(k+1) polygon vertices, centred
    periods: np.ndarray  # the periods in construction order
    gap: complex
    eyelet_radius: float
    strip_axes: np.ndarray  # outward unit normal of each long side
    eyelet_centers: np.ndarray

    @property
    def long_sides(self):
        return [(self.vertices[2 * i], self.vertices[2 * i + 1]) for i in range(self.k + 1)]

    @property
    def short_sides(self):
        n = 2 * (self.k + 1)
        return [
            (self.vertices[(2 * i + 1) % n], self.vertices[(2 * i + 2) % n])
            for i in range(self.k + 1)
        ]

    def closure_residual(self):
        side_sum = (self.k + 1) * self.gap - np.sum(self.periods)
        return abs(side_sum)


def build_tau_model(gon: PeriodGon, eyelet_radius: float) -> TauModel:
    """Assemble the 2(k+1)-gon with strips and eyelets from period data.

    For a nonzero gap the radius must exceed (3/4)|a| cot(pi/(2(k+1))), the
    bound that keeps the crossing point of consecutive strip boundaries
    inside the removed disk; the pure model (gap 0) accepts any R > 0.
    """
    k = gon.k
    k1 = k + 1
    a = complex(gon.gap)
    if eyelet_radius <= 0:
        raise RadiusTooSmall("eyelet radius must be positive")
    if a != 0:
        bound = 0.75 * abs(a) / math.tan(math.pi / (2 * k1))
        if eyelet_radius <= bound:
            raise RadiusTooSmall(f"eyelet radius must exceed {bound:g}")
    neg = -gon.periods
    order = np.argsort(np.angle(neg))
    mu_sorted = gon.periods[order]
    verts = np.empty(2 * k1, dtype=complex)
    cur = 0j
    for i in range(k1):
        verts[2 * i] = cur
        cur += -mu_sorted[i]
        verts[2 * i + 1] = cur
        cur += a
    verts -= verts.mean()
    axes = np.empty(k1, dtype=complex)
    centers = np.empty(k1, dtype=complex)
    centroid = verts.mean()  # 0 after centring
    for i in range(k1):
        e = verts[2 * i + 1] - verts[2 * i]
        n_hat = -1j * e / abs(e)
        mid = 0.5 * (verts[2 * i] + verts[2 * i + 1])
        if (n_hat.real * (mid - centroid).real + n_hat.imag * (mid - centroid).imag) < 0:
            n_hat = -n_hat
        axes[i] = n_hat
        s0, s1 = verts[(2 * i + 1) % (2 * k1)], verts[(2 * i + 2) % (2 * k1)]
        centers[i] = 0.5 * (s0 + s1)
    return TauModel(
        k=k,
        vertices=verts,
        periods=mu_sorted,
        gap=a,
        eyelet_radius=eyelet_radius,
        strip_axes=axes,
        eyelet_centers=centers,
    )

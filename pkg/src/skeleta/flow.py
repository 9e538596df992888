"""Numerics for the idealized kinetic Hamiltonian on T*R^n near L_K.

The stratum of a face sigma is
``L_sigma = {x_i = 0, y_i >= 0 (i in sigma), y_j = 0 (j not in sigma)}`` and
``H = 1/2 min_sigma dist^2(., L_sigma)``.  Where sigma is the unique nearest
stratum the Hamiltonian field is

    x_j' = y_j  (j not in sigma),     y_i' = -x_i  (i in sigma),

which is constant along its own orbits, so the flow is piecewise linear in t.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, root

from .errors import InputError, OnSingularLocus, SingularCrossing
from .lincat import Report
from .simplicial import Face, SimplicialComplex, full_simplex, sorted_faces


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if x.shape != y.shape:
            raise InputError("x and y must have the same length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InputError("phase point has non-finite entries")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size

    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_vector(cls, v) -> "PhasePoint":
        v = np.asarray(v, dtype=float)
        n = v.size // 2
        return cls(v[:n], v[n:])

    def __add__(self, v):
        return PhasePoint.from_vector(self.vector() + np.asarray(v))


@dataclass(frozen=True)
class FlowParams:
    epsilon: float = 0.5
    w: float = 4.0
    dt: float = 1e-3
    tol: float = 1e-6

    def __post_init__(self):
        if not (self.epsilon > 0 and self.dt > 0 and self.tol > 0 and self.w > 0):
            raise InputError("epsilon, w, dt and tol must all be positive")


def _mask(sigma: Face, n: int) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    for i in sigma:
        m[i - 1] = True
    return m


def distance_sq_stratum(p: PhasePoint, sigma: Face) -> float:
    s = _mask(sigma, p.n)
    return float(np.sum(p.x[s] ** 2) + np.sum(np.maximum(-p.y[s], 0.0) ** 2) + np.sum(p.y[~s] ** 2))


def project_to_stratum(p: PhasePoint, sigma: Face) -> PhasePoint:
    s = _mask(sigma, p.n)
    x = np.where(s, 0.0, p.x)
    y = np.where(s, np.maximum(p.y, 0.0), 0.0)
    return PhasePoint(x, y)


def stratum_distances(p: PhasePoint, K: SimplicialComplex) -> list[tuple[float, Face]]:
    out = [(distance_sq_stratum(p, s), s) for s in sorted_faces(K.faces)]
    out.sort(key=lambda t: (t[0], len(t[1]), t[1].sort_key()))
    return out


def kinetic_energy(p: PhasePoint, K: SimplicialComplex) -> tuple[float, Face]:
    d, s = stratum_distances(p, K)[0]
    return 0.5 * d, s


def nearest_strata(p: PhasePoint, K: SimplicialComplex, tol: float = 1e-6) -> list[Face]:
    ds = stratum_distances(p, K)
    return [s for d, s in ds if d - ds[0][0] < tol]


def _genuine(p: PhasePoint, sigma: Face, tau: Face) -> bool:
    """Whether ``tau`` overtakes ``sigma`` somewhere on the segment from ``p`` to
    the nearest point of ``L_tau``; equivalently that nearest point is off ``L_sigma``."""
    q = project_to_stratum(p, tau)
    scale = 1.0 + float(np.sum(p.vector() ** 2))
    return distance_sq_stratum(q, sigma) > 1e-18 * scale


def singular_margin(p: PhasePoint, K: SimplicialComplex) -> float:
    """Energy gap to the nearest competing stratum that could actually take over.

    Ties with coinciding nearest points (where H stays differentiable) do not count.
    """
    ds = stratum_distances(p, K)
    d0, sigma = ds[0]
    best = np.inf
    for d, tau in ds[1:]:
        if d - d0 < best and _genuine(p, sigma, tau):
            best = d - d0
    return float(best)


def is_singular(p: PhasePoint, K: SimplicialComplex, tol: float = 1e-6) -> bool:
    return singular_margin(p, K) < tol


def field_on_stratum(p: PhasePoint, sigma: Face) -> np.ndarray:
    s = _mask(sigma, p.n)
    xdot = np.where(s, 0.0, p.y)
    ydot = np.where(s, -p.x, 0.0)
    return np.concatenate([xdot, ydot])


def hamiltonian_field(p: PhasePoint, K: SimplicialComplex, tol: float = 1e-6) -> np.ndarray:
    """The field of the nearest stratum; raises :class:`OnSingularLocus` within ``tol``."""
    if is_singular(p, K, tol):
        raise OnSingularLocus(f"{p} is within {tol} of the singular locus")
    return field_on_stratum(p, kinetic_energy(p, K)[1])


@dataclass
class Orbit:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    crossings: list = field(default_factory=list)

    def point(self, k: int = -1) -> PhasePoint:
        return PhasePoint(self.x[k], self.y[k])

    def to_csv(self) -> str:
        n = self.x.shape[1]
        buf = io.StringIO()
        buf.write(",".join(["t"] + [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]) + "\n")
        for k in range(self.t.size):
            row = [self.t[k], *self.x[k], *self.y[k]]
            buf.write(",".join(f"{v:.12g}" for v in row) + "\n")
        return buf.getvalue()


def _region(p: PhasePoint, K) -> Face:
    return kinetic_energy(p, K)[1]


def _crossing_time(p: PhasePoint, q: PhasePoint, K, sigma: Face, h: float) -> float:
    """Fraction of the step ``p -> q`` at which ``sigma`` stops being nearest."""
    def g(s):
        r = PhasePoint.from_vector((1 - s) * p.vector() + s * q.vector())
        return distance_sq_stratum(r, sigma) - stratum_distances(r, K)[0][0] - 1e-15
    try:
        return brentq(g, 0.0, 1.0, xtol=1e-14) * h
    except ValueError:
        return h


class _Strata:
    """Face masks of K in (size, lex) order for vectorized distance evaluation."""

    def __init__(self, K: SimplicialComplex):
        n = K.n
        self.faces = sorted(K.faces, key=lambda f: (len(f), f.sort_key()))
        self.M = np.array([_mask(f, n) for f in self.faces], dtype=float).reshape(len(self.faces), n)
        # within the region of a face the field is linear: v' = A v, v = (x, y)
        self.A = []
        for f in self.faces:
            s = _mask(f, n)
            A = np.zeros((2 * n, 2 * n))
            for j in range(n):
                if s[j]:
                    A[n + j, j] = -1.0
                else:
                    A[j, n + j] = 1.0
            self.A.append(A)

    def distances(self, V: np.ndarray) -> np.ndarray:
        """Squared distances, shape (batch, faces)."""
        n = self.M.shape[1]
        x, y = V[:, :n], V[:, n:]
        return (x ** 2 + np.maximum(-y, 0.0) ** 2) @ self.M.T + (y ** 2) @ (1.0 - self.M).T

    def regions(self, V: np.ndarray) -> np.ndarray:
        return np.argmin(self.distances(V), axis=1)

    def propagators(self, h: float) -> list[np.ndarray]:
        """Classical RK4 step ``I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24`` per face."""
        out = []
        for A in self.A:
            B = h * A
            B2 = B @ B
            out.append(np.eye(A.shape[0]) + B + B2 / 2 + B2 @ B / 6 + B2 @ B2 / 24)
        return out


def integrate_orbits(points: Sequence[PhasePoint], K: SimplicialComplex, params: FlowParams, T: float,
                     on_singular: str = "raise", record: int = 1) -> list[Orbit]:
    """Classical RK4 for a batch of starting points sharing one step size."""
    if on_singular not in ("raise", "continue"):
        raise ValueError("on_singular must be 'raise' or 'continue'")
    S = _Strata(K)
    steps = max(1, int(np.ceil(T / params.dt)))
    h = T / steps
    P = S.propagators(h * params.w)
    V = np.array([p.vector() for p in points], dtype=float)
    B = V.shape[0]
    crossings: list[list[float]] = [[] for _ in range(B)]
    for b, p in enumerate(points):
        if is_singular(p, K, params.tol):
            if on_singular == "raise":
                raise SingularCrossing(0.0)
            crossings[b].append(0.0)
    reg = S.regions(V)
    ts, traj = [0.0], [V.copy()]
    for k in range(1, steps + 1):
        new = np.empty_like(V)
        for r in np.unique(reg):
            rows = reg == r
            new[rows] = V[rows] @ P[r].T
        new_reg = S.regions(new)
        for b in np.flatnonzero(new_reg != reg):
            sigma, tau = S.faces[reg[b]], S.faces[new_reg[b]]
            p0, p1 = PhasePoint.from_vector(V[b]), PhasePoint.from_vector(new[b])
            off = _crossing_time(p0, p1, K, sigma, h)
            mid = PhasePoint.from_vector(V[b] + off / h * (new[b] - V[b]))
            if _genuine(mid, sigma, tau) or _genuine(mid, tau, sigma):
                tc = float((k - 1) * h + off)
                if on_singular == "raise":
                    raise SingularCrossing(tc)
                crossings[b].append(tc)
        V, reg = new, new_reg
        if k % record == 0 or k == steps:
            ts.append(k * h)
            traj.append(V.copy())
    tarr = np.array(ts)
    arr = np.array(traj)
    n = K.n
    return [Orbit(tarr, arr[:, b, :n], arr[:, b, n:], crossings[b]) for b in range(B)]


def integrate_orbit(p: PhasePoint, K: SimplicialComplex, params: FlowParams, T: float,
                    method: str = "rk4", on_singular: str = "raise", record: int = 1) -> Orbit:
    """Flow of ``w * X`` for time ``T``.

    ``method="rk4"`` steps with ``params.dt``; ``method="exact"`` uses the
    piecewise-linear closed form region by region.  A switch of nearest
    stratum with distinct nearest points is a singular crossing: it raises
    :class:`SingularCrossing` or, with ``on_singular="continue"``, is recorded.
    """
    if on_singular not in ("raise", "continue"):
        raise ValueError("on_singular must be 'raise' or 'continue'")
    if method == "exact":
        return _integrate_exact(p, K, params, T, on_singular)
    if method != "rk4":
        raise ValueError(f"unknown method {method!r}")
    return integrate_orbits([p], K, params, T, on_singular, record)[0]


def _first_switch(p: PhasePoint, v: np.ndarray, K, sigma: Face, horizon: float) -> float | None:
    """Earliest ``t in (0, horizon]`` where another stratum ties with ``sigma``
    along ``p + t v`` and overtakes it; exact on each piece where the gaps are quadratic."""
    n = p.n
    vy = v[n:]
    breaks = {0.0, horizon}
    for i in range(n):
        if vy[i] != 0:
            t = -p.y[i] / vy[i]
            if 0 < t < horizon:
                breaks.add(t)
    breaks = sorted(breaks)
    pv = p.vector()

    def gap(tau, t):
        q = PhasePoint.from_vector(pv + t * v)
        return distance_sq_stratum(q, tau) - distance_sq_stratum(q, sigma)

    best = None
    for tau in K.faces:
        if tau == sigma:
            continue
        for a, b in zip(breaks, breaks[1:]):
            m = 0.5 * (a + b)
            ga, gm, gb = gap(tau, a), gap(tau, m), gap(tau, b)
            # quadratic through the three samples
            A = 2 * (ga - 2 * gm + gb) / (b - a) ** 2
            B = (gb - ga) / (b - a) - A * (a + b)
            C = ga - A * a * a - B * a
            if abs(A) < 1e-14:
                cands = [-C / B] if abs(B) > 1e-14 else []
            else:
                disc = B * B - 4 * A * C
                if disc < 0:
                    continue
                sq = np.sqrt(disc)
                cands = [(-B - sq) / (2 * A), (-B + sq) / (2 * A)]
            for t in cands:
                if a - 1e-12 <= t <= b and t > 1e-12 and (best is None or t < best):
                    eta = 1e-9 * max(1.0, t)
                    if gap(tau, min(t + eta, horizon)) < 0 or (t + eta > horizon and gap(tau, t) <= 0):
                        best = t
    return best


def _integrate_exact(p: PhasePoint, K, params: FlowParams, T: float, on_singular: str) -> Orbit:
    w = params.w
    t = 0.0
    cur = p
    ts, xs, ys, crossings = [0.0], [p.x.copy()], [p.y.copy()], []
    if is_singular(cur, K, params.tol):
        if on_singular == "raise":
            raise SingularCrossing(0.0)
        crossings.append(0.0)
    sigma = _region(cur, K)
    for _ in range(10_000):
        v = w * field_on_stratum(cur, sigma)
        remaining = T - t
        if remaining <= 0:
            break
        if not np.any(v):
            t = T
            ts.append(t); xs.append(cur.x.copy()); ys.append(cur.y.copy())
            break
        s = _first_switch(cur, v, K, sigma, remaining)
        if s is None:
            cur = PhasePoint.from_vector(cur.vector() + remaining * v)
            t = T
            ts.append(t); xs.append(cur.x.copy()); ys.append(cur.y.copy())
            break
        at = PhasePoint.from_vector(cur.vector() + s * v)
        ahead = PhasePoint.from_vector(at.vector() + 1e-9 * max(1.0, s) * v)
        new_sigma = _region(ahead, K)
        t += float(s)
        if new_sigma != sigma and (_genuine(at, sigma, new_sigma) or _genuine(at, new_sigma, sigma)):
            if on_singular == "raise":
                raise SingularCrossing(t)
            crossings.append(t)
        cur = at
        sigma = new_sigma
        ts.append(t); xs.append(cur.x.copy()); ys.append(cur.y.copy())
    return Orbit(np.array(ts), np.array(xs), np.array(ys), crossings)


# --- transversals and intersection counts ------------------------------------

def lperp(p: PhasePoint, K: SimplicialComplex) -> tuple[Face, np.ndarray]:
    """``(sigma, free)``: the transversal through ``p`` fixes every coordinate
    except those flagged in ``free`` (fibre ``y_j`` off sigma, base ``x_i`` on sigma)."""
    sigma = kinetic_energy(p, K)[1]
    s = _mask(sigma, p.n)
    free = np.concatenate([s, ~s])
    return sigma, free


def count_flow_intersections(p1: PhasePoint, p2: PhasePoint, K: SimplicialComplex, params: FlowParams,
                             grid: int = 201, T: float = 1.0) -> int:
    """Number of points of the transversal at ``p1`` (free coordinates within
    ``[-epsilon, epsilon]`` of ``p1``) whose time-``T`` flow lies on the transversal at ``p2``."""
    _, free1 = lperp(p1, K)
    _, free2 = lperp(p2, K)
    fixed2 = ~free2
    base = p1.vector()
    idx = np.flatnonzero(free1)
    eps = params.epsilon
    target = p2.vector()[fixed2]

    def endpoint(r):
        v = base.copy()
        v[idx] = base[idx] + r
        orb = integrate_orbit(PhasePoint.from_vector(v), K, params, T, method="exact", on_singular="continue")
        return orb.point().vector()[fixed2] - target

    k = idx.size
    if k == 1:
        rs = np.linspace(-eps, eps, grid)
        vals = np.array([endpoint(np.array([r]))[0] for r in rs])
        count = 0
        for a, b, fa, fb in zip(rs, rs[1:], vals, vals[1:]):
            if fa == 0:
                count += 1
            elif fa * fb < 0:
                brentq(lambda r: endpoint(np.array([r]))[0], a, b)
                count += 1
        if vals[-1] == 0:
            count += 1
        return count
    # several free directions: Newton-type solves from a coarse grid, deduplicated
    axes = [np.linspace(-eps, eps, max(3, int(round(grid ** (1 / k))))) for _ in range(k)]
    sols: list[np.ndarray] = []
    for start in np.array(np.meshgrid(*axes)).reshape(k, -1).T:
        res = root(endpoint, start, method="hybr")
        if not res.success or np.linalg.norm(endpoint(res.x)) > 1e-8:
            continue
        if np.any(np.abs(res.x) > eps + 1e-12):
            continue
        if not any(np.linalg.norm(res.x - s) < 1e-6 for s in sols):
            sols.append(res.x)
    return len(sols)


def energy_drift(orbit: Orbit, K: SimplicialComplex) -> float:
    """Largest relative change of H along ``orbit``, per unit time."""
    H = np.array([kinetic_energy(orbit.point(k), K)[0] for k in range(orbit.t.size)])
    scale = max(abs(H[0]), 1e-300)
    span = max(orbit.t[-1] - orbit.t[0], 1e-300)
    return float(np.max(np.abs(H - H[0])) / scale / span)


def orbit_margin(orbit: Orbit, K: SimplicialComplex) -> float:
    return min(singular_margin(orbit.point(k), K) for k in range(orbit.t.size))


def point_complex() -> SimplicialComplex:
    return full_simplex(1)


def flow_battery(params: FlowParams | None = None, grid: int = 201, horizon: float = 50.0) -> Report:
    """Numerical checks of the transversal-flow claims for n <= 2."""
    params = params or FlowParams(epsilon=0.5, w=4.0)
    rep = Report("flow")
    K1 = point_complex()
    w_ok = params.w >= 2 / params.epsilon
    rep.add("w >= 2/epsilon", w_ok, {"w": params.w, "epsilon": params.epsilon})

    worst_margin, worst_drift = np.inf, 0.0
    rs = np.linspace(-params.epsilon, params.epsilon, 21)
    orbits = integrate_orbits([PhasePoint([1.0], [r]) for r in rs], K1, params, horizon, record=50)
    for r, orb in zip(rs, orbits):
        worst_margin = min(worst_margin, orbit_margin(orb, K1))
        if r != 0:
            worst_drift = max(worst_drift, energy_drift(orb, K1))
    rep.add("transversal at (1,0) stays off Sing for t in [0,50]", worst_margin >= params.tol,
            {"margin": worst_margin})
    rep.add("energy drift per unit time < 1e-6", worst_drift < 1e-6, {"drift": worst_drift})

    fwd = count_flow_intersections(PhasePoint([1.0], [0.0]), PhasePoint([-1.0], [0.0]), K1, params, grid)
    rev = count_flow_intersections(PhasePoint([-1.0], [0.0]), PhasePoint([1.0], [0.0]), K1, params, grid)
    rep.add("count (1,0)->(-1,0)", fwd == 1, {"count": fwd})
    rep.add("count (-1,0)->(1,0)", rev == 0, {"count": rev})

    K2 = full_simplex(2)
    two = count_flow_intersections(PhasePoint([1.0, 1.0], [0.0, 0.0]), PhasePoint([-1.0, -1.0], [0.0, 0.0]),
                                   K2, params, grid)
    rep.add("count (1,1)->(-1,-1) in R^2", two == 1, {"count": two})
    return rep

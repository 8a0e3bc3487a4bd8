"""Semi-discrete optimal transport: weights making each cell carry a prescribed mass.

Damped Newton on the concave dual. The step direction comes from the mass
Jacobian restricted to the gauge subspace (last weight pinned to zero); a
halving line search keeps every cell above a mass guard, and a scaled gradient
ascent takes over for a few iterations whenever Newton stalls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DegenerateProblemError, InvalidInputError
from .geometry import ConvexPolygon
from .measures import DensityMeasure, integrate_polygon, total_mass, _U01, _W01
from .power_diagram import PowerPartition, WeightedConfiguration, build_partition

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100
ASCENT_ITERS = 20


@dataclass(frozen=True)
class TransportProblem:
    """Body, source density, sites and positive target masses summing to the total."""

    K: ConvexPolygon
    mu: DensityMeasure
    sites: np.ndarray
    targets: np.ndarray

    def __init__(self, K: ConvexPolygon, mu: DensityMeasure,
                 sites: Sequence[Sequence[float]], targets: Sequence[float]):
        s = np.atleast_2d(np.asarray(sites, dtype=float))
        t = np.asarray(targets, dtype=float)
        if t.shape != (len(s),):
            raise InvalidInputError("one target mass per site required")
        if np.any(t <= 0):
            raise InvalidInputError("target masses must be positive")
        total = total_mass(mu, K)
        if abs(float(t.sum()) - total) > 1e-9 * total:
            raise InvalidInputError("target masses must sum to the total mass of the body")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sites", s)
        object.__setattr__(self, "targets", t)

    @property
    def n(self) -> int:
        return len(self.sites)


@dataclass
class TransportSolution:
    weights: np.ndarray
    partition: PowerPartition
    mass_error: float
    iterations: int


def _cell_masses(problem: TransportProblem, weights: np.ndarray):
    part = build_partition(problem.K, WeightedConfiguration(problem.sites, weights))
    masses = np.array([integrate_polygon(problem.mu, c) if c is not None else 0.0
                       for c in part.cells])
    return part, masses


def dual_gradient(problem: TransportProblem, weights: Sequence[float]) -> np.ndarray:
    """Optimality residual: target mass minus current cell mass, per site."""
    _, masses = _cell_masses(problem, np.asarray(weights, dtype=float))
    return problem.targets - masses


def _wall_integral(mu: DensityMeasure, p: np.ndarray, q: np.ndarray) -> float:
    """Line integral of the density along a wall segment."""
    length = float(np.hypot(*(q - p)))
    if length == 0.0:
        return 0.0
    if mu.kind == "uniform":
        return mu.params["value"] * length
    pts = p[None, :] + _U01[:, None] * (q - p)[None, :]
    return length * float(np.sum(_W01 * mu.density(pts)))


def transport_hessian(problem: TransportProblem, weights: Sequence[float],
                      partition: PowerPartition | None = None) -> np.ndarray:
    """Jacobian of cell masses with respect to the weights.

    Off-diagonal (i, j) is -(wall density integral) / (2 |x_i - x_j|) for
    adjacent cells, zero otherwise; each diagonal entry is minus its row sum,
    so rows sum to zero.
    """
    w = np.asarray(weights, dtype=float)
    part = partition if partition is not None else _cell_masses(problem, w)[0]
    if any(c is None for c in part.cells):
        raise DegenerateProblemError("empty cell: the mass Jacobian is not defined")
    n = problem.n
    H = np.zeros((n, n))
    for (i, j), (p, q) in part.walls.items():
        dist = float(np.hypot(*(problem.sites[i] - problem.sites[j])))
        val = -_wall_integral(problem.mu, p, q) / (2.0 * dist)
        H[i, j] = val
        H[j, i] = val
    np.fill_diagonal(H, 0.0)
    np.fill_diagonal(H, -H.sum(axis=1))
    return H


def _newton_direction(H: np.ndarray, g: np.ndarray) -> np.ndarray | None:
    """Solve H d = g on the gauge subspace (last coordinate pinned to zero)."""
    n = len(g)
    Hr = H[: n - 1, : n - 1]
    gr = g[: n - 1]
    try:
        d = np.linalg.solve(Hr, gr)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(d)):
        return None
    return np.concatenate([d, [0.0]])


def solve_weights(problem: TransportProblem, tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER, trace: list | None = None) -> TransportSolution:
    """Find weights whose cells carry the target masses within tol * total mass."""
    if tol <= 0:
        raise InvalidInputError("tolerance must be positive")
    nu = problem.targets
    n = problem.n
    total = float(nu.sum())
    if n == 1:
        part, masses = _cell_masses(problem, np.zeros(1))
        return TransportSolution(np.zeros(1), part, float(abs(total - masses[0])), 0)

    w = np.zeros(n)
    part, masses = _cell_masses(problem, w)
    err = float(np.max(np.abs(nu - masses)))
    best = (err, w.copy())
    iterations = 0
    eta0 = 0.5 * problem.K.diameter ** 2 / total
    stall_phases = 0

    def record(kind, step):
        if trace is not None:
            trace.append({"iteration": iterations, "mass_error": err, "step": step, "kind": kind})

    while err > tol * total:
        if iterations >= max_iter:
            raise ConvergenceError("transport solver exceeded max_iter",
                                   best=TransportSolution(best[1], part, err, iterations))
        g = nu - masses
        direction = None
        if np.min(masses) > 0.0 and all(c is not None for c in part.cells):
            H = transport_hessian(problem, w, part)
            direction = _newton_direction(H, g)
        stepped = False
        if direction is not None:
            guard = 0.5 * min(float(np.min(nu)), float(np.min(masses)))
            t = 1.0
            while t > 1e-10:
                w_try = w + t * direction
                part_try, masses_try = _cell_masses(problem, w_try)
                err_try = float(np.max(np.abs(nu - masses_try)))
                nonempty = all(c is not None for c in part_try.cells)
                if nonempty and np.min(masses_try) >= guard and err_try <= (1.0 - 0.5 * t) * err:
                    w, part, masses, err = w_try, part_try, masses_try, err_try
                    iterations += 1
                    record("newton", t)
                    stepped = True
                    break
                t *= 0.5
        if not stepped:
            # Newton unavailable or stalled: scaled gradient ascent for a few rounds
            progressed = False
            eta = eta0
            for _ in range(ASCENT_ITERS):
                if iterations >= max_iter or err <= tol * total:
                    break
                g = nu - masses
                accepted = False
                while eta > 1e-14 * eta0:
                    w_try = w + eta * g
                    w_try -= w_try[-1]
                    part_try, masses_try = _cell_masses(problem, w_try)
                    err_try = float(np.max(np.abs(nu - masses_try)))
                    if err_try <= err + 1e-12 * total:
                        improved = err_try < err - 1e-14 * total \
                            or float(np.min(masses_try)) > float(np.min(masses))
                        w, part, masses, err = w_try, part_try, masses_try, err_try
                        iterations += 1
                        record("ascent", eta)
                        accepted = True
                        if improved:
                            progressed = True
                        eta *= 1.5
                        break
                    eta *= 0.5
                if not accepted:
                    break
            if not progressed:
                stall_phases += 1
                if stall_phases >= 2:
                    if any(c is None for c in part.cells) or np.min(masses) <= 0.0:
                        raise DegenerateProblemError(
                            "vanished-cell lock: damping cannot keep every cell populated")
                    raise ConvergenceError("transport solver stalled",
                                           best=TransportSolution(w - w[-1], part, err, iterations))
            else:
                stall_phases = 0
        if err < best[0]:
            best = (err, w.copy())

    w_fixed = w - w[-1]
    part, masses = _cell_masses(problem, w_fixed)
    err = float(np.max(np.abs(nu - masses)))
    return TransportSolution(w_fixed, part, err, iterations)

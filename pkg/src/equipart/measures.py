"""Absolutely continuous measures on a convex body and on its boundary.

Interior integration fan-triangulates the polygon from its centroid and applies
a product Gauss rule on each triangle that is exact for densities of total
degree <= 8. Boundary integration uses Gauss-Legendre per arc, exact for
polynomial-in-arclength densities of degree <= 8.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInputError, InvalidMeasureError
from .geometry import BoundaryArcSet, ConvexPolygon

QUAD_DEGREE = 8

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)
_U01 = 0.5 * (_GL_NODES + 1.0)
_W01 = 0.5 * _GL_WEIGHTS


def _duffy_rule():
    """Quadrature on the unit triangle (0,0),(1,0),(0,1), exact to degree 8."""
    u, v = np.meshgrid(_U01, _U01, indexing="ij")
    wu, wv = np.meshgrid(_W01, _W01, indexing="ij")
    x = (u * (1.0 - v)).ravel()
    y = (u * v).ravel()
    w = (wu * wv * u).ravel()  # Jacobian of the square-to-triangle map is u
    return np.column_stack([x, y]), w


_TRI_POINTS, _TRI_WEIGHTS = _duffy_rule()


class DensityMeasure:
    """Measure on the plane given by a pointwise density, restricted to a body.

    Kinds: uniform, polynomial (coeffs[i][j] * x^i * y^j), gaussian_mixture
    (truncated to the body, not renormalized), grid (raster with bilinear
    interpolation, edge-clamped outside).
    """

    def __init__(self, kind: str, density: Callable[[np.ndarray], np.ndarray], params: dict):
        self.kind = kind
        self._density = density
        self.params = params

    def density(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vals = np.asarray(self._density(pts), dtype=float)
        if np.any(vals < -1e-12 * max(1.0, float(np.max(np.abs(vals))))):
            raise InvalidMeasureError(f"{self.kind} density sampled negative")
        return np.maximum(vals, 0.0)

    @classmethod
    def uniform(cls, value: float = 1.0) -> "DensityMeasure":
        if value <= 0:
            raise InvalidMeasureError("uniform density must be positive")
        return cls("uniform", lambda p: np.full(len(p), float(value)), {"value": float(value)})

    @classmethod
    def polynomial(cls, coeffs: Sequence[Sequence[float]]) -> "DensityMeasure":
        c = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if c.shape[0] + c.shape[1] - 2 > QUAD_DEGREE:
            raise InvalidInputError(f"polynomial density degree exceeds {QUAD_DEGREE}")

        def dens(p):
            return np.polynomial.polynomial.polyval2d(p[:, 0], p[:, 1], c)

        return cls("polynomial", dens, {"coeffs": c.tolist()})

    @classmethod
    def gaussian_mixture(cls, components: Sequence[dict]) -> "DensityMeasure":
        comps = []
        for comp in components:
            weight = float(comp["weight"])
            mean = np.asarray(comp["mean"], dtype=float)
            cov = np.asarray(comp.get("cov", np.eye(2) * comp.get("sigma", 1.0) ** 2), dtype=float)
            if weight <= 0:
                raise InvalidMeasureError("mixture weights must be positive")
            inv = np.linalg.inv(cov)
            norm = weight / (2.0 * np.pi * math.sqrt(np.linalg.det(cov)))
            comps.append((mean, inv, norm))

        def dens(p):
            total = np.zeros(len(p))
            for mean, inv, norm in comps:
                d = p - mean
                q = d[:, 0] ** 2 * inv[0, 0] + 2 * d[:, 0] * d[:, 1] * inv[0, 1] + d[:, 1] ** 2 * inv[1, 1]
                total += norm * np.exp(-0.5 * q)
            return total

        return cls("gaussian_mixture", dens,
                   {"components": [{"weight": float(c["weight"]),
                                    "mean": list(map(float, c["mean"])),
                                    "cov": np.asarray(c.get("cov", np.eye(2) * c.get("sigma", 1.0) ** 2),
                                                      dtype=float).tolist()}
                                   for c in components]})

    @classmethod
    def grid(cls, values: Sequence[Sequence[float]], extent: Sequence[float]) -> "DensityMeasure":
        """Raster density over extent (x0, y0, x1, y1); bilinear, edge-clamped."""
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 2 or np.any(vals < 0):
            raise InvalidMeasureError("grid raster must be 2-D and nonnegative")
        x0, y0, x1, y1 = map(float, extent)
        ny, nx = vals.shape

        def dens(p):
            # cell centers at (i + 0.5) steps; clamp outside the raster
            fx = (p[:, 0] - x0) / (x1 - x0) * nx - 0.5
            fy = (p[:, 1] - y0) / (y1 - y0) * ny - 0.5
            fx = np.clip(fx, 0.0, nx - 1.0)
            fy = np.clip(fy, 0.0, ny - 1.0)
            ix = np.clip(np.floor(fx).astype(int), 0, nx - 2) if nx > 1 else np.zeros(len(p), int)
            iy = np.clip(np.floor(fy).astype(int), 0, ny - 2) if ny > 1 else np.zeros(len(p), int)
            tx = fx - ix if nx > 1 else np.zeros(len(p))
            ty = fy - iy if ny > 1 else np.zeros(len(p))
            ix1 = np.minimum(ix + 1, nx - 1)
            iy1 = np.minimum(iy + 1, ny - 1)
            return (vals[iy, ix] * (1 - tx) * (1 - ty) + vals[iy, ix1] * tx * (1 - ty)
                    + vals[iy1, ix] * (1 - tx) * ty + vals[iy1, ix1] * tx * ty)

        return cls("grid", dens, {"values": vals.tolist(), "extent": [x0, y0, x1, y1]})

    @classmethod
    def from_json(cls, obj: dict) -> "DensityMeasure":
        kind = obj.get("kind")
        if kind == "uniform":
            return cls.uniform(obj.get("value", 1.0))
        if kind == "polynomial":
            return cls.polynomial(obj["coeffs"])
        if kind == "gaussian_mixture":
            return cls.gaussian_mixture(obj["components"])
        if kind == "grid":
            return cls.grid(obj["values"], obj["extent"])
        raise InvalidInputError(f"unknown measure kind {kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}


class BoundaryDensity:
    """Density along the boundary of a body, as a function of arc length s."""

    def __init__(self, kind: str, density: Callable[[np.ndarray], np.ndarray], params: dict):
        self.kind = kind
        self._density = density
        self.params = params

    def density(self, s: np.ndarray) -> np.ndarray:
        vals = np.asarray(self._density(np.atleast_1d(np.asarray(s, dtype=float))), dtype=float)
        if np.any(vals < -1e-12 * max(1.0, float(np.max(np.abs(vals))))):
            raise InvalidMeasureError(f"{self.kind} boundary density sampled negative")
        return np.maximum(vals, 0.0)

    @classmethod
    def uniform(cls, value: float = 1.0) -> "BoundaryDensity":
        if value <= 0:
            raise InvalidMeasureError("uniform density must be positive")
        return cls("uniform", lambda s: np.full(len(s), float(value)), {"value": float(value)})

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "BoundaryDensity":
        c = np.asarray(coeffs, dtype=float)
        if len(c) - 1 > QUAD_DEGREE:
            raise InvalidInputError(f"boundary density degree exceeds {QUAD_DEGREE}")
        return cls("polynomial", lambda s: np.polynomial.polynomial.polyval(s, c),
                   {"coeffs": c.tolist()})

    @classmethod
    def gaussian_mixture(cls, components: Sequence[dict]) -> "BoundaryDensity":
        comps = [(float(c["weight"]), float(c["mean"]), float(c["sigma"])) for c in components]
        if any(w <= 0 or sig <= 0 for w, _, sig in comps):
            raise InvalidMeasureError("mixture weights and sigmas must be positive")

        def dens(s):
            total = np.zeros(len(s))
            for w, m, sig in comps:
                total += w / (sig * math.sqrt(2 * math.pi)) * np.exp(-0.5 * ((s - m) / sig) ** 2)
            return total

        return cls("gaussian_mixture", dens,
                   {"components": [{"weight": w, "mean": m, "sigma": sig} for w, m, sig in comps]})

    @classmethod
    def grid(cls, values: Sequence[float], length: float) -> "BoundaryDensity":
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or np.any(vals < 0):
            raise InvalidMeasureError("boundary raster must be 1-D and nonnegative")
        n = len(vals)

        def dens(s):
            f = np.clip(s / length * n - 0.5, 0.0, n - 1.0)
            i = np.clip(np.floor(f).astype(int), 0, max(n - 2, 0))
            t = f - i if n > 1 else np.zeros(len(s))
            i1 = np.minimum(i + 1, n - 1)
            return vals[i] * (1 - t) + vals[i1] * t

        return cls("grid", dens, {"values": vals.tolist(), "length": float(length)})

    @classmethod
    def from_json(cls, obj: dict) -> "BoundaryDensity":
        kind = obj.get("kind")
        if kind == "uniform":
            return cls.uniform(obj.get("value", 1.0))
        if kind == "polynomial":
            return cls.polynomial(obj["coeffs"])
        if kind == "gaussian_mixture":
            return cls.gaussian_mixture(obj["components"])
        if kind == "grid":
            return cls.grid(obj["values"], obj["length"])
        raise InvalidInputError(f"unknown boundary measure kind {kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}


def integrate_polygon(mu: DensityMeasure, P: ConvexPolygon) -> float:
    """Mass of mu over the polygon."""
    if mu.kind == "uniform":
        return mu.params["value"] * P.area
    c = P.centroid
    v = P.vertices
    w = np.roll(v, -1, axis=0)
    # stack the mapped quadrature points of every fan triangle (c, v_k, v_{k+1})
    e1 = v - c
    e2 = w - c
    pts = (c[None, None, :]
           + _TRI_POINTS[None, :, 0, None] * e1[:, None, :]
           + _TRI_POINTS[None, :, 1, None] * e2[:, None, :])
    jac = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]  # = 2 * triangle area
    wts = jac[:, None] * _TRI_WEIGHTS[None, :]
    dens = mu.density(pts.reshape(-1, 2)).reshape(wts.shape)
    return float(np.sum(wts * dens))


def integrate_boundary(sigma: BoundaryDensity, arcs: BoundaryArcSet, K: ConvexPolygon) -> float:
    """Mass of sigma over the given arcs of the boundary of K."""
    if not arcs:
        return 0.0
    lengths = K.edge_lengths()
    starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    total = 0.0
    for k, t0, t1 in arcs.arcs:
        s0 = starts[k] + t0 * lengths[k]
        s1 = starts[k] + t1 * lengths[k]
        if s1 <= s0:
            continue
        s = s0 + (s1 - s0) * _U01
        total += (s1 - s0) * float(np.sum(_W01 * sigma.density(s)))
    return total


def full_boundary(K: ConvexPolygon) -> BoundaryArcSet:
    return BoundaryArcSet(tuple((k, 0.0, 1.0) for k in range(len(K.vertices))))


def total_mass(mu: DensityMeasure, K: ConvexPolygon) -> float:
    m = integrate_polygon(mu, K)
    if m <= 0.0:
        raise InvalidMeasureError("total interior mass must be positive")
    return m


def total_boundary_mass(sigma: BoundaryDensity, K: ConvexPolygon) -> float:
    m = integrate_boundary(sigma, full_boundary(K), K)
    if m <= 0.0:
        raise InvalidMeasureError("total boundary mass must be positive")
    return m

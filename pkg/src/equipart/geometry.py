"""Exact-orientation planar convex geometry: polygons, half-plane clipping, metrics, boundary arcs.

All polygons are strictly convex, counterclockwise vertex chains. Vertex merging,
on-line tests and emptiness decisions use a tolerance of EPS_SCALE times the
polygon diameter, so everything stays scale free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ContainmentError, InvalidInputError

# Relative tolerance for vertex merging, on-line tests and emptiness.
EPS_SCALE = 1e-12


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {(x, y) : a*x + b*y <= c}. (a, b) must not both vanish."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and math.isfinite(self.c)):
            raise InvalidInputError("half-plane coefficients must be finite")
        if self.a == 0.0 and self.b == 0.0:
            raise InvalidInputError("half-plane normal must be nonzero")


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Collinear and near-duplicate vertices are merged on construction; the
    result must have at least 3 vertices and positive turning at every one.
    """

    __slots__ = ("vertices", "_area", "_perimeter", "_centroid", "_diameter")

    def __init__(self, vertices: Sequence[Sequence[float]]):
        arr = np.asarray(vertices, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
            raise InvalidInputError("polygon needs at least 3 planar vertices")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("polygon vertices must be finite")
        diam = float(np.hypot(*(arr.max(axis=0) - arr.min(axis=0))))
        if diam <= 0.0:
            raise InvalidInputError("polygon is degenerate (zero diameter)")
        eps = EPS_SCALE * diam
        arr = _merge_chain(arr, eps)
        if arr.shape[0] < 3:
            raise InvalidInputError("polygon collapses to fewer than 3 vertices")
        cross = _turn_cross(arr)
        if np.all(cross < 0.0):
            raise InvalidInputError("polygon vertices must be counterclockwise")
        if not np.all(cross > 0.0):
            raise InvalidInputError("polygon is not strictly convex")
        self.vertices = arr
        self.vertices.setflags(write=False)
        self._area = None
        self._perimeter = None
        self._centroid = None
        self._diameter = diam

    @property
    def area(self) -> float:
        if self._area is None:
            x, y = self.vertices[:, 0], self.vertices[:, 1]
            self._area = float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
        return self._area

    @property
    def perimeter(self) -> float:
        if self._perimeter is None:
            d = np.roll(self.vertices, -1, axis=0) - self.vertices
            self._perimeter = float(np.sum(np.hypot(d[:, 0], d[:, 1])))
        return self._perimeter

    @property
    def centroid(self) -> np.ndarray:
        if self._centroid is None:
            v = self.vertices
            w = np.roll(v, -1, axis=0)
            cr = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
            c = ((v + w) * cr[:, None]).sum(axis=0) / (6.0 * self.area)
            self._centroid = c
        return self._centroid

    @property
    def diameter(self) -> float:
        return self._diameter

    @property
    def eps(self) -> float:
        return EPS_SCALE * self._diameter

    def edges(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        for k in range(len(v)):
            yield v[k], v[(k + 1) % len(v)]

    def edge_lengths(self) -> np.ndarray:
        d = np.roll(self.vertices, -1, axis=0) - self.vertices
        return np.hypot(d[:, 0], d[:, 1])

    def contains(self, point: Sequence[float], slack: float = 0.0) -> bool:
        """True when the point is inside or on the boundary, with extra slack."""
        p = np.asarray(point, dtype=float)
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cr = (w[:, 0] - v[:, 0]) * (p[1] - v[:, 1]) - (w[:, 1] - v[:, 1]) * (p[0] - v[:, 0])
        return bool(np.all(cr >= -(self.eps + slack)))

    def translated(self, offset: Sequence[float]) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(offset, dtype=float))

    def to_json(self) -> list[list[float]]:
        """Counterclockwise [x, y] pairs, first vertex not repeated."""
        return [[float(x), float(y)] for x, y in self.vertices]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]]) -> "ConvexPolygon":
        return cls(data)

    def __repr__(self):
        return f"ConvexPolygon({self.vertices.tolist()!r})"


@dataclass(frozen=True)
class BoundaryArcSet:
    """Arcs of the body boundary, as (edge index, t0, t1) parameter intervals."""

    arcs: tuple[tuple[int, float, float], ...]

    def total_length(self, body: ConvexPolygon) -> float:
        lengths = body.edge_lengths()
        return float(sum((t1 - t0) * lengths[k] for k, t0, t1 in self.arcs))

    def __bool__(self):
        return bool(self.arcs)


def _merge_chain(arr: np.ndarray, eps: float) -> np.ndarray:
    """Drop near-duplicate and collinear vertices from a closed chain."""
    # duplicates first
    keep = []
    m = len(arr)
    for k in range(m):
        nxt = arr[(k + 1) % m]
        if np.hypot(*(nxt - arr[k])) > eps:
            keep.append(k)
    arr = arr[keep]
    if len(arr) < 3:
        return arr
    # collinear vertices: | e1 x e2 | small relative to edge lengths
    out = []
    m = len(arr)
    for k in range(m):
        prv, cur, nxt = arr[k - 1], arr[k], arr[(k + 1) % m]
        e1, e2 = cur - prv, nxt - cur
        if abs(e1[0] * e2[1] - e1[1] * e2[0]) > eps * (np.hypot(*e1) + np.hypot(*e2)):
            out.append(cur)
    return np.asarray(out)


def _turn_cross(arr: np.ndarray) -> np.ndarray:
    prv = np.roll(arr, 1, axis=0)
    nxt = np.roll(arr, -1, axis=0)
    e1 = arr - prv
    e2 = nxt - arr
    return e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]


def clip_chain(points: np.ndarray, labels: np.ndarray, a: float, b: float, c: float,
               eps: float) -> tuple[np.ndarray, np.ndarray] | None:
    """Clip a labeled convex chain by a*x + b*y <= c.

    labels[k] tags the edge from points[k] to points[k+1]; edges created on the
    cut line get label CUT_LABEL (the caller rewrites it). Returns None when
    the intersection has empty interior.
    """
    side = c - (a * points[:, 0] + b * points[:, 1])
    inside = side >= -eps
    if bool(np.all(inside)):
        return points, labels
    if not bool(np.any(inside)):
        return None
    m = len(points)
    out_pts: list[np.ndarray] = []
    out_lab: list[int] = []
    for k in range(m):
        k1 = (k + 1) % m
        pk, pk1 = points[k], points[k1]
        if inside[k]:
            out_pts.append(pk)
            out_lab.append(int(labels[k]))
            if not inside[k1]:
                t = side[k] / (side[k] - side[k1])
                out_pts.append(pk + t * (pk1 - pk))
                out_lab.append(CUT_LABEL)
        elif inside[k1]:
            t = side[k] / (side[k] - side[k1])
            out_pts.append(pk + t * (pk1 - pk))
            out_lab.append(int(labels[k]))
    if len(out_pts) < 3:
        return None
    pts = np.asarray(out_pts)
    lab = np.asarray(out_lab, dtype=int)
    pts, lab = _dedupe_labeled(pts, lab, eps)
    if len(pts) < 3:
        return None
    # reject slivers whose area is at tolerance scale
    x, y = pts[:, 0], pts[:, 1]
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if area <= eps * eps:
        return None
    return pts, lab


CUT_LABEL = -(10**9)


def _dedupe_labeled(pts: np.ndarray, lab: np.ndarray, eps: float):
    m = len(pts)
    keep_pts, keep_lab = [], []
    for k in range(m):
        nxt = pts[(k + 1) % m]
        if np.hypot(*(nxt - pts[k])) > eps:
            keep_pts.append(pts[k])
            keep_lab.append(lab[k])
        # zero-length edge: its label disappears with it
    return np.asarray(keep_pts), np.asarray(keep_lab, dtype=int)


def clip_halfplane(P: ConvexPolygon, H: HalfPlane) -> ConvexPolygon | None:
    """Intersect a convex polygon with a closed half-plane.

    Returns None when the intersection has empty interior; emptiness is a
    value here, not an error, so callers can observe vanished cells.
    """
    labels = np.arange(len(P.vertices))
    res = clip_chain(P.vertices, labels, H.a, H.b, H.c, P.eps)
    if res is None:
        return None
    pts, _ = res
    try:
        return ConvexPolygon(pts)
    except InvalidInputError:
        return None


def polygon_metrics(P: ConvexPolygon) -> tuple[float, float, np.ndarray]:
    """(area, perimeter, centroid) of a convex polygon."""
    return P.area, P.perimeter, P.centroid


def segment_range_in_polygon(p0: np.ndarray, p1: np.ndarray, poly: ConvexPolygon,
                             eps: float) -> tuple[float, float] | None:
    """Parameter interval [t0, t1] of the part of segment p0 + t*(p1-p0), t in [0,1],
    inside the convex polygon, or None if the chord is empty."""
    v = poly.vertices
    w = np.roll(v, -1, axis=0)
    ex, ey = w[:, 0] - v[:, 0], w[:, 1] - v[:, 1]
    elen = np.hypot(ex, ey)
    # interior is left of each edge: cross(edge, p - v) >= 0; normalize to distances
    a0 = (ex * (p0[1] - v[:, 1]) - ey * (p0[0] - v[:, 0])) / elen
    a1 = (ex * (p1[1] - v[:, 1]) - ey * (p1[0] - v[:, 0])) / elen
    t_lo, t_hi = 0.0, 1.0
    for c0, c1 in zip(a0, a1):
        d = c1 - c0
        if abs(d) <= eps:
            if c0 < -eps:
                return None
            continue
        t = -c0 / d
        if d > 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo >= t_hi:
            return None
    if t_hi - t_lo <= eps:
        return None
    return t_lo, t_hi


def boundary_portion(cell: ConvexPolygon, K: ConvexPolygon) -> BoundaryArcSet:
    """Arcs of the boundary of K contained in the cell.

    The cell must be contained in K (up to numerical slack). Arcs from distinct
    cells of one partition are disjoint up to endpoints.
    """
    slack = 1e-9 * K.diameter
    for p in cell.vertices:
        if not K.contains(p, slack=slack):
            raise ContainmentError("cell is not contained in the body")
    arcs = []
    eps_t = 1e-12
    for k, (p0, p1) in enumerate(K.edges()):
        rng = segment_range_in_polygon(p0, p1, cell, cell.eps)
        if rng is None:
            continue
        t0, t1 = max(0.0, rng[0]), min(1.0, rng[1])
        if t1 - t0 > eps_t:
            arcs.append((k, t0, t1))
    return BoundaryArcSet(tuple(arcs))


def regular_ngon(m: int, circumradius: float, center: Sequence[float] = (0.0, 0.0),
                 phase: float = 0.0) -> ConvexPolygon:
    """Regular m-gon, counterclockwise, first vertex at angle `phase`."""
    if not isinstance(m, (int, np.integer)) or m < 3:
        raise InvalidInputError("regular polygon needs m >= 3")
    if not (circumradius > 0.0):
        raise InvalidInputError("circumradius must be positive")
    cx, cy = float(center[0]), float(center[1])
    theta = phase + 2.0 * np.pi * np.arange(m) / m
    pts = np.column_stack([cx + circumradius * np.cos(theta),
                           cy + circumradius * np.sin(theta)])
    return ConvexPolygon(pts)


def unit_square() -> ConvexPolygon:
    return ConvexPolygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])

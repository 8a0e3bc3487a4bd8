"""Weighted-site (Laguerre) partitions of a convex body by half-plane clipping.

Cell i is the body clipped by the bisector half-planes
2 <x_j - x_i, x> <= |x_j|^2 - |x_i|^2 + r_i - r_j for all j != i, so a point
belongs to the site minimizing |x - x_i|^2 - r_i. With equal weights this is
the Voronoi diagram clipped to the body.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidConfigurationError, InvalidInputError
from .geometry import CUT_LABEL, ConvexPolygon, clip_chain

# Minimum site separation, relative to the body diameter.
SEP_SCALE = 1e-9


@dataclass(frozen=True)
class WeightedConfiguration:
    """n pairwise-distinct sites with real weights (squared-length units)."""

    sites: np.ndarray
    weights: np.ndarray

    def __init__(self, sites: Sequence[Sequence[float]], weights: Sequence[float] | None = None):
        s = np.atleast_2d(np.asarray(sites, dtype=float))
        if s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 1:
            raise InvalidInputError("sites must be an (n, 2) array with n >= 1")
        w = np.zeros(len(s)) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (len(s),):
            raise InvalidInputError("weights must match the number of sites")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(w))):
            raise InvalidInputError("sites and weights must be finite")
        object.__setattr__(self, "sites", s)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.sites)

    def min_separation(self) -> float:
        if len(self.sites) < 2:
            return np.inf
        d = self.sites[:, None, :] - self.sites[None, :, :]
        dist = np.hypot(d[..., 0], d[..., 1])
        return float(np.min(dist[np.triu_indices(len(self.sites), 1)]))


@dataclass
class PowerPartition:
    """Cells of a weighted-site partition; cell i belongs to site i, empty cells are None."""

    body: ConvexPolygon
    sites: np.ndarray
    weights: np.ndarray
    cells: list[ConvexPolygon | None]
    walls: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.cells)

    def areas(self) -> np.ndarray:
        return np.array([c.area if c is not None else 0.0 for c in self.cells])

    def to_json(self) -> dict:
        return {
            "cells": [c.to_json() if c is not None else None for c in self.cells],
            "owners": list(range(self.n)),
            "sites": self.sites.tolist(),
            "weights": self.weights.tolist(),
            "walls": [{"i": i, "j": j, "segment": [p.tolist(), q.tolist()]}
                      for (i, j), (p, q) in sorted(self.walls.items())],
        }


def build_partition(K: ConvexPolygon, W: WeightedConfiguration) -> PowerPartition:
    """Partition K by the weighted sites; cells keep their site's index."""
    sites, weights = W.sites, W.weights
    n = len(sites)
    if n > 1 and W.min_separation() <= SEP_SCALE * K.diameter:
        raise InvalidConfigurationError("sites closer than the separation threshold")
    sq = np.sum(sites * sites, axis=1)
    eps = K.eps
    cells: list[ConvexPolygon | None] = []
    walls: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    base_labels = -np.arange(1, len(K.vertices) + 1)
    for i in range(n):
        pts = K.vertices
        labels = base_labels
        # clip nearest sites first so far half-planes get rejected cheaply
        order = np.argsort(np.sum((sites - sites[i]) ** 2, axis=1))
        alive = True
        for j in order:
            if j == i:
                continue
            a = 2.0 * (sites[j] - sites[i])
            c = sq[j] - sq[i] + weights[i] - weights[j]
            res = clip_chain(pts, labels, a[0], a[1], c, eps)
            if res is None:
                alive = False
                break
            pts, labels = res
            if np.any(labels == CUT_LABEL):
                labels = np.where(labels == CUT_LABEL, j, labels)
        if not alive:
            cells.append(None)
            continue
        try:
            cell = ConvexPolygon(pts)
        except InvalidInputError:
            cells.append(None)
            continue
        cells.append(cell)
        for k, lab in enumerate(labels):
            if lab >= 0:
                key = (min(i, int(lab)), max(i, int(lab)))
                if key not in walls or i < lab:
                    p, q = pts[k], pts[(k + 1) % len(pts)]
                    walls[key] = (p.copy(), q.copy())
    # drop walls whose neighbor cell vanished entirely
    walls = {(i, j): seg for (i, j), seg in walls.items()
             if cells[i] is not None and cells[j] is not None}
    return PowerPartition(K, sites.copy(), weights.copy(), cells, walls)


def cell_adjacency(P: PowerPartition) -> list[tuple[int, int]]:
    """Pairs of cells sharing a wall of positive length."""
    eps = P.body.eps
    out = []
    for (i, j), (p, q) in sorted(P.walls.items()):
        if float(np.hypot(*(q - p))) > eps:
            out.append((i, j))
    return out

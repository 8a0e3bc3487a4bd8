"""Continuous functionals on convex cells: perimeter, Steiner coefficients,
measure masses, boundary masses, projected centroids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ContainmentError, InvalidInputError
from .geometry import ConvexPolygon, boundary_portion
from .measures import BoundaryDensity, DensityMeasure, integrate_boundary, integrate_polygon


@dataclass(frozen=True)
class Perimeter:
    kind = "perimeter"

    def evaluate(self, cell: ConvexPolygon, K: ConvexPolygon) -> float:
        return cell.perimeter

    def to_json(self):
        return {"kind": "perimeter"}


@dataclass(frozen=True)
class SteinerCoefficient:
    """Coefficient of t^i in area(cell + t * unit disk): area, perimeter, or pi."""

    index: int

    def __post_init__(self):
        if self.index not in (0, 1, 2):
            raise InvalidInputError("Steiner coefficient index must be 0, 1 or 2")

    kind = "steiner"

    def evaluate(self, cell: ConvexPolygon, K: ConvexPolygon) -> float:
        if self.index == 0:
            return cell.area
        if self.index == 1:
            return cell.perimeter
        return math.pi

    def to_json(self):
        return {"kind": "steiner", "index": self.index}


@dataclass(frozen=True)
class MeasureMass:
    measure: DensityMeasure

    kind = "measure"

    def evaluate(self, cell: ConvexPolygon, K: ConvexPolygon) -> float:
        return integrate_polygon(self.measure, cell)

    def to_json(self):
        return {"kind": "measure", "measure": self.measure.to_json()}


@dataclass(frozen=True)
class BoundaryMass:
    measure: BoundaryDensity

    kind = "boundary"

    def evaluate(self, cell: ConvexPolygon, K: ConvexPolygon) -> float:
        return integrate_boundary(self.measure, boundary_portion(cell, K), K)

    def to_json(self):
        return {"kind": "boundary", "measure": self.measure.to_json()}


@dataclass(frozen=True)
class CenterImage:
    """Scalar projection of the area centroid onto a unit direction."""

    direction: tuple[float, float]

    def __init__(self, direction: Sequence[float]):
        d = np.asarray(direction, dtype=float)
        norm = float(np.hypot(*d))
        if not norm > 0:
            raise InvalidInputError("projection direction must be nonzero")
        d = d / norm
        object.__setattr__(self, "direction", (float(d[0]), float(d[1])))

    kind = "center_image"

    def evaluate(self, cell: ConvexPolygon, K: ConvexPolygon) -> float:
        c = cell.centroid
        return float(self.direction[0] * c[0] + self.direction[1] * c[1])

    def to_json(self):
        return {"kind": "center_image", "direction": list(self.direction)}


Functional = Union[Perimeter, SteinerCoefficient, MeasureMass, BoundaryMass, CenterImage]


def evaluate(phi: Functional, cell: ConvexPolygon, K: ConvexPolygon) -> float:
    """Value of the functional on a cell of K; the cell must lie inside K."""
    slack = 1e-9 * K.diameter
    for p in cell.vertices:
        if not K.contains(p, slack=slack):
            raise ContainmentError("cell is not contained in the body")
    return phi.evaluate(cell, K)


def functional_from_json(obj: dict) -> Functional:
    kind = obj.get("kind")
    if kind == "perimeter":
        return Perimeter()
    if kind == "steiner":
        return SteinerCoefficient(int(obj["index"]))
    if kind == "measure":
        return MeasureMass(DensityMeasure.from_json(obj["measure"]))
    if kind == "boundary":
        return BoundaryMass(BoundaryDensity.from_json(obj["measure"]))
    if kind == "center_image":
        return CenterImage(obj["direction"])
    raise InvalidInputError(f"unknown functional kind {kind!r}")

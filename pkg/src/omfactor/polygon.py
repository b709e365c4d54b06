"""Lower Newton polygons over exact rational ordinates.

Points are pairs (s, u) with integer abscissa s >= 0 and rational ordinate.
Polygons keep only their vertices: strictly increasing abscissae, strictly
increasing slopes. Principal sides are the ones of negative slope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError

Point = tuple[int, Fraction]


@dataclass(frozen=True)
class Component:
    """A closed stretch of a support line on a polygon; left may equal right."""

    left: Point
    right: Point
    slope: Fraction

    @property
    def length(self) -> int:
        return self.right[0] - self.left[0]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[Point, ...]

    def sides(self) -> list[Component]:
        out = []
        for a, b in zip(self.vertices, self.vertices[1:]):
            slope = Fraction(b[1] - a[1], b[0] - a[0])
            out.append(Component(a, b, slope))
        return out

    def principal_sides(self) -> list[Component]:
        return [side for side in self.sides() if side.slope < 0]


def _norm_points(points: Iterable[Sequence]) -> list[Point]:
    best: dict[int, Fraction] = {}
    for s, u in points:
        s = int(s)
        if s < 0:
            raise PreconditionError("polygon abscissae must be nonnegative")
        u = Fraction(u)
        if s not in best or u < best[s]:
            best[s] = u
    return sorted(best.items())


def lower_hull(points: Iterable[Sequence]) -> NewtonPolygon:
    """Lower convex hull of a point cloud.

    Points sharing an abscissa are reduced to the minimal ordinate first;
    collinear interior points are removed, so the vertex set is minimal.
    """
    pts = _norm_points(points)
    if not pts:
        raise PreconditionError("lower_hull of an empty point set")
    verts: list[Point] = []
    for pt in pts:
        while len(verts) >= 2:
            (s0, u0), (s1, u1) = verts[-2], verts[-1]
            if (u1 - u0) * (pt[0] - s1) >= (pt[1] - u1) * (s1 - s0):
                verts.pop()
            else:
                break
        verts.append(pt)
    return NewtonPolygon(tuple(verts))


def component_of(polygon: NewtonPolygon, lam: Fraction) -> Component:
    """Stretch of the support line of slope -lam touching the polygon.

    The component may degenerate to a single vertex, which is a valid
    outcome, not an error.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError("component_of requires lam > 0")
    vals = [u + lam * s for s, u in polygon.vertices]
    lo = min(vals)
    touch = [v for v, val in zip(polygon.vertices, vals) if val == lo]
    return Component(touch[0], touch[-1], -lam)


def apply_affinity(polygon: NewtonPolygon, lam0: Fraction) -> NewtonPolygon:
    """Shear (s, u) -> (s, u - lam0 * s); hulls map to hulls."""
    lam0 = Fraction(lam0)
    return NewtonPolygon(tuple((s, u - lam0 * s) for s, u in polygon.vertices))

"""The affine plane AG(2, q) and its projective closure.

Lines are kept as normalized projective coefficient triples ``(a, b, c)``
for the locus ``aX + bY + cZ = 0``, so parallel lines meet at a
first-class point at infinity.  The line at infinity itself is excluded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import CoincidentPoints, IdenticalLines, LineAtInfinity
from .ff import Field, FieldElement, element_from_json


@dataclass(frozen=True, slots=True)
class AffinePoint:
    x: FieldElement
    y: FieldElement

    @property
    def field(self) -> Field:
        return self.x.field

    @property
    def key(self) -> tuple[int, int]:
        return (self.x.value, self.y.value)

    def __lt__(self, other: "AffinePoint"):
        return self.key < other.key

    def projective(self) -> "ProjPoint":
        return ProjPoint(self.x, self.y, self.field.one)

    def to_json(self):
        return [self.x.to_json(), self.y.to_json()]

    def __repr__(self):
        return f"({self.x!r}, {self.y!r})"


@dataclass(frozen=True, slots=True)
class ProjPoint:
    """A point of P^2 with the last nonzero coordinate scaled to 1."""

    X: FieldElement
    Y: FieldElement
    Z: FieldElement

    @classmethod
    def normalized(cls, X: FieldElement, Y: FieldElement, Z: FieldElement) -> "ProjPoint":
        for lead in (Z, Y, X):
            if lead:
                s = lead.inverse()
                return cls(X * s, Y * s, Z * s)
        raise ValueError("(0:0:0) is not a projective point")

    @property
    def field(self) -> Field:
        return self.X.field

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.X.value, self.Y.value, self.Z.value)

    def __lt__(self, other: "ProjPoint"):
        return self.key < other.key

    @property
    def at_infinity(self) -> bool:
        return not self.Z

    def affine(self) -> AffinePoint | None:
        return None if self.at_infinity else AffinePoint(self.X, self.Y)

    def to_json(self):
        return [self.X.to_json(), self.Y.to_json(), self.Z.to_json()]

    def __repr__(self):
        return f"({self.X!r}:{self.Y!r}:{self.Z!r})"


HORIZONTAL = "horizontal"
VERTICAL = "vertical"


def direction(field: Field, name: str) -> ProjPoint:
    """Point at infinity shared by all horizontal or all vertical lines."""
    if name == HORIZONTAL:
        return ProjPoint(field.one, field.zero, field.zero)
    if name == VERTICAL:
        return ProjPoint(field.zero, field.one, field.zero)
    raise ValueError(f"unknown direction {name!r}")


@dataclass(frozen=True, slots=True)
class Line:
    """Affine line ``a x + b y + c = 0``; first nonzero coefficient is 1."""

    a: FieldElement
    b: FieldElement
    c: FieldElement

    @classmethod
    def normalized(cls, a: FieldElement, b: FieldElement, c: FieldElement) -> "Line":
        if a:
            s = a.inverse()
        elif b:
            s = b.inverse()
        else:
            raise LineAtInfinity("(a, b) = (0, 0) describes the line at infinity")
        return cls(a * s, b * s, c * s)

    @classmethod
    def slope_intercept(cls, m: FieldElement, b: FieldElement) -> "Line":
        """The line y = m x + b."""
        return cls.normalized(m, -m.field.one, b)

    @classmethod
    def vertical(cls, c: FieldElement) -> "Line":
        return cls.normalized(c.field.one, c.field.zero, -c)

    @classmethod
    def horizontal(cls, c: FieldElement) -> "Line":
        return cls.normalized(c.field.zero, c.field.one, -c)

    @property
    def field(self) -> Field:
        return self.a.field

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.a.value, self.b.value, self.c.value)

    def __lt__(self, other: "Line"):
        return self.key < other.key

    @property
    def is_horizontal(self) -> bool:
        return not self.a

    @property
    def is_vertical(self) -> bool:
        return not self.b

    @property
    def point_at_infinity(self) -> ProjPoint:
        return ProjPoint.normalized(self.b, -self.a, self.field.zero)

    def parallel_to(self, other: "Line") -> bool:
        return self.point_at_infinity == other.point_at_infinity

    def contains(self, pt: AffinePoint | ProjPoint) -> bool:
        if isinstance(pt, AffinePoint):
            return not (self.a * pt.x + self.b * pt.y + self.c)
        return not (self.a * pt.X + self.b * pt.Y + self.c * pt.Z)

    def at_x(self, x: FieldElement) -> AffinePoint:
        """The point of a nonvertical line with abscissa x."""
        return AffinePoint(x, -(self.a * x + self.c) / self.b)

    def at_y(self, y: FieldElement) -> AffinePoint:
        """The point of a nonhorizontal line with ordinate y."""
        return AffinePoint(-(self.b * y + self.c) / self.a, y)

    def to_json(self):
        return [self.a.to_json(), self.b.to_json(), self.c.to_json()]

    def __repr__(self):
        return f"[{self.a!r}x + {self.b!r}y + {self.c!r}]"


def line_through(p1: AffinePoint, p2: AffinePoint) -> Line:
    if p1 == p2:
        raise CoincidentPoints(f"{p1} given twice")
    # cross product of (x1, y1, 1) and (x2, y2, 1)
    return Line.normalized(p1.y - p2.y, p2.x - p1.x, p1.x * p2.y - p2.x * p1.y)


def intersect(l1: Line, l2: Line) -> ProjPoint:
    if l1 == l2:
        raise IdenticalLines(f"{l1} given twice")
    return ProjPoint.normalized(
        l1.b * l2.c - l1.c * l2.b,
        l1.c * l2.a - l1.a * l2.c,
        l1.a * l2.b - l1.b * l2.a,
    )


def on_parabola(pt: AffinePoint) -> bool:
    return pt.y == pt.x * pt.x


def parabola_meet(line: Line) -> list[AffinePoint]:
    """Points of ``line`` on the parabola y = x^2, in canonical x order."""
    F = line.field
    if line.is_vertical:
        x = -line.c / line.a
        return [AffinePoint(x, x * x)]
    # y = m x + k, so x^2 - m x - k = 0 with discriminant m^2 + 4k
    m = -line.a / line.b
    k = -line.c / line.b
    s = (m * m + 4 * k).sqrt()
    if s is None:
        return []
    half = F(2).inverse()
    xs = sorted({(m + s) * half, (m - s) * half})
    return [AffinePoint(x, x * x) for x in xs]


def enumerate_lines(field: Field, not_parallel_to: ProjPoint | str | None = None) -> Iterator[Line]:
    """All q^2 + q affine lines in canonical order, optionally dropping one direction class."""
    if isinstance(not_parallel_to, str):
        not_parallel_to = direction(field, not_parallel_to)
    elems = list(field.elements())
    zero, one = field.zero, field.one
    candidates = [Line(zero, one, c) for c in elems]
    candidates += [Line(one, b, c) for b in elems for c in elems]
    for line in candidates:
        if not_parallel_to is None or line.point_at_infinity != not_parallel_to:
            yield line


def lines_in_direction(field: Field, dirn: ProjPoint) -> list[Line]:
    """The q lines through the point at infinity ``dirn``, in canonical order."""
    return [l for l in enumerate_lines(field) if l.point_at_infinity == dirn]


def point_from_json(field: Field, data) -> AffinePoint:
    return AffinePoint(element_from_json(field, data[0]), element_from_json(field, data[1]))


def line_from_json(field: Field, data) -> Line:
    a, b, c = (element_from_json(field, d) for d in data)
    line = Line.normalized(a, b, c)
    if line.key != (a.value, b.value, c.value):
        raise ValueError(f"line {data} is not normalized")
    return line

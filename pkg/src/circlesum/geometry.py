"""Exact integer lattice geometry: convex hulls, lattice polygons, edges,
point classification, vertex weights, and edge integrals.

All orientation and membership tests use exact integer arithmetic (Python
ints never overflow); floating point enters only in angle weights and
quadrature.  Polygons are counter-clockwise with strictly convex vertex
sequences: collinear hull points are dropped from the vertex list but are
still counted among the boundary lattice points through the edge data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .quadrature import QuadratureResult, integrate_1d


def isqrt(n: int) -> int:
    """Exact floor square root of a non-negative integer."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.isqrt(n)


class LatticePoint(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Edge:
    """Directed polygon edge with its lattice data.

    ``lam`` is the gcd of the coordinate spans, so the edge carries lam + 1
    lattice points; ``primitive`` is the step between consecutive ones and
    ``outward_normal`` the minimal integral normal pointing away from the
    polygon interior.  The normalized edge measure gives the segment total
    measure lam (consecutive lattice points at distance one).
    """
    start: LatticePoint
    end: LatticePoint
    lam: int
    primitive: tuple[int, int]
    outward_normal: tuple[int, int]

    def point_at(self, s: float) -> tuple[float, float]:
        return (self.start.x + s * self.primitive[0],
                self.start.y + s * self.primitive[1])

    def lattice_points(self) -> list[LatticePoint]:
        px, py = self.primitive
        return [LatticePoint(self.start.x + k * px, self.start.y + k * py)
                for k in range(self.lam + 1)]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[tuple[int, int]]) -> list[LatticePoint]:
    """Strict convex hull (collinear boundary points dropped), CCW order.

    Monotone chain with integer cross products only.
    """
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) == 0:
        raise ValueError("no points")
    if len(pts) <= 2:
        return [LatticePoint(*p) for p in pts]
    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return [LatticePoint(*p) for p in hull]


class LatticePolygon:
    """Convex lattice polygon, counter-clockwise, strictly convex vertices."""

    def __init__(self, vertices: Iterable[tuple[int, int]]):
        verts = [LatticePoint(int(v[0]), int(v[1])) for v in vertices]
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        n = len(verts)
        area2 = 0
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            area2 += a.x * b.y - b.x * a.y
        if area2 <= 0:
            raise ValueError("vertices must be counter-clockwise with positive area")
        for i in range(n):
            o, a, b = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            if _cross(o, a, b) <= 0:
                raise ValueError("vertex sequence must be strictly convex")
        self.vertices: tuple[LatticePoint, ...] = tuple(verts)
        self._area2 = area2
        self.edges: tuple[Edge, ...] = tuple(self._build_edges())

    def _build_edges(self) -> list[Edge]:
        edges = []
        n = len(self.vertices)
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            dx, dy = b.x - a.x, b.y - a.y
            lam = math.gcd(abs(dx), abs(dy))
            px, py = dx // lam, dy // lam
            # right-hand normal of the direction = outward for CCW polygons
            edges.append(Edge(a, b, lam, (px, py), (py, -px)))
        return edges

    @property
    def area(self) -> float:
        return self._area2 / 2.0

    def x_range(self) -> tuple[int, int]:
        xs = [v.x for v in self.vertices]
        return min(xs), max(xs)

    def y_range(self) -> tuple[int, int]:
        ys = [v.y for v in self.vertices]
        return min(ys), max(ys)

    def contains(self, p: tuple[int, int]) -> bool:
        """Exact closed-polygon membership for an integer point."""
        px, py = int(p[0]), int(p[1])
        for e in self.edges:
            nx, ny = e.outward_normal
            if nx * (px - e.start.x) + ny * (py - e.start.y) > 0:
                return False
        return True

    def chains(self) -> tuple[list[LatticePoint], list[LatticePoint]]:
        """Lower and upper boundary chains with non-decreasing x.

        Vertical edges at the extreme x's leave duplicate x-values; callers
        that need single-valued chains keep the min y (lower) / max y
        (upper) per x.
        """
        verts = self.vertices
        n = len(verts)
        i_min = min(range(n), key=lambda i: (verts[i].x, verts[i].y))
        i_max = max(range(n), key=lambda i: (verts[i].x, verts[i].y))
        lower = [verts[i_min]]
        i = i_min
        while i != i_max:
            i = (i + 1) % n
            lower.append(verts[i])
        upper = [verts[i_max]]
        while i != i_min:
            i = (i + 1) % n
            upper.append(verts[i])
        upper.reverse()
        return lower, upper


def disk_hull(t: int, Q: int = 1) -> LatticePolygon:
    """Convex hull of the integer points (m, n) with m^2 + n^2 <= Q^2 t.

    This is the refined-lattice polygon (in the Q-scaled integer frame)
    whose 1/Q rescaling approximates the disk of radius sqrt(t).  Streams
    one column of extremes at a time, so memory stays O(sqrt(Q^2 t)).
    """
    t = int(t)
    Q = int(Q)
    if t <= 0:
        raise ValueError("t must be a positive integer (degenerate hull otherwise)")
    if Q < 1 or Q % 2 == 0:
        raise ValueError("Q must be an odd integer >= 1")
    bound = Q * Q * t
    M = isqrt(bound)
    pts = []
    for m in range(-M, M + 1):
        h = isqrt(bound - m * m)
        pts.append((m, h))
        pts.append((m, -h))
    hull = convex_hull(pts)
    return LatticePolygon(hull)


def edge_data(polygon: LatticePolygon) -> tuple[Edge, ...]:
    return polygon.edges


def boundary_lattice_points(polygon: LatticePolygon) -> list[LatticePoint]:
    """All lattice points on the boundary, each exactly once."""
    pts = []
    for e in polygon.edges:
        px, py = e.primitive
        for k in range(e.lam):      # endpoint belongs to the next edge
            pts.append(LatticePoint(e.start.x + k * px, e.start.y + k * py))
    return pts


def enumerate_lattice_points(polygon: LatticePolygon) -> np.ndarray:
    """All lattice points in the closed polygon, as an (N, 2) int64 array.

    Row sweep with exact integer bounds from the edge half-planes.
    """
    ylo, yhi = polygon.y_range()
    rows = []
    for y in range(ylo, yhi + 1):
        lo, hi = _row_bounds(polygon, y)
        if lo > hi:
            continue
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        rows.append(np.stack([xs, np.full_like(xs, y)], axis=1))
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(rows, axis=0)


def _row_bounds(polygon: LatticePolygon, y: int) -> tuple[int, int]:
    """Exact integer x-range of the closed polygon at height y."""
    lo, hi = None, None
    for e in polygon.edges:
        nx, ny = e.outward_normal
        c = nx * e.start.x + ny * e.start.y    # constraint nx*x + ny*y <= c
        rhs = c - ny * y
        if nx > 0:
            bound = rhs // nx                  # floor division is exact
            hi = bound if hi is None else min(hi, bound)
        elif nx < 0:
            q, r = divmod(rhs, nx)             # divmod floors toward -inf
            bound = q if r == 0 else q + 1     # exact ceiling of rhs/nx
            lo = bound if lo is None else max(lo, bound)
        else:
            if rhs < 0:
                return 1, 0
    xlo, xhi = polygon.x_range()
    lo = xlo if lo is None else max(lo, xlo)
    hi = xhi if hi is None else min(hi, xhi)
    return lo, hi


def classify_lattice_points(polygon: LatticePolygon):
    """Partition the polygon's lattice points into interior / edge / vertex.

    Returns three lists of LatticePoint, classified exactly.
    """
    all_pts = enumerate_lattice_points(polygon)
    boundary = boundary_lattice_points(polygon)
    bset = {(p.x, p.y) for p in boundary}
    vset = {(v.x, v.y) for v in polygon.vertices}
    interior, edge_pts, vertex_pts = [], [], []
    for x, y in all_pts:
        key = (int(x), int(y))
        if key in vset:
            vertex_pts.append(LatticePoint(*key))
        elif key in bset:
            edge_pts.append(LatticePoint(*key))
        else:
            interior.append(LatticePoint(*key))
    return interior, edge_pts, vertex_pts


def vertex_weight(polygon: LatticePolygon, v: tuple[int, int]) -> float:
    """Interior angle at vertex v divided by 2 pi."""
    key = LatticePoint(int(v[0]), int(v[1]))
    verts = polygon.vertices
    if key not in verts:
        raise ValueError(f"{v} is not a vertex of the polygon")
    i = verts.index(key)
    prev_v = verts[i - 1]
    next_v = verts[(i + 1) % len(verts)]
    a1 = math.atan2(prev_v.y - key.y, prev_v.x - key.x)
    a2 = math.atan2(next_v.y - key.y, next_v.x - key.x)
    ang = (a1 - a2) % (2.0 * math.pi)
    return ang / (2.0 * math.pi)


def lattice_weight(polygon: LatticePolygon, p: tuple[int, int]) -> float:
    """Weight w(p): 1 in the interior, 1/2 on edge interiors, angle/2pi at vertices."""
    key = (int(p[0]), int(p[1]))
    if key in {(v.x, v.y) for v in polygon.vertices}:
        return vertex_weight(polygon, key)
    if not polygon.contains(key):
        raise ValueError(f"{p} is outside the polygon")
    for e in polygon.edges:
        nx, ny = e.outward_normal
        if nx * (key[0] - e.start.x) + ny * (key[1] - e.start.y) == 0:
            return 0.5
    return 1.0


def edge_integral(edge: Edge, g, tol: float, *, breakpoints=(),
                  freq_hint: float = 0.0) -> QuadratureResult:
    """Integral of g over the edge with normalized lattice measure.

    Parameterized by s in [0, lam] through start + s * primitive, under
    which the normalized measure is exactly ds (total measure lam); this
    covers vertical edges with no special casing.  g takes vectorized
    (x, y) arrays.  ``breakpoints`` are s-values; ``freq_hint`` is in
    cycles per unit s.
    """
    px, py = edge.primitive
    x0, y0 = edge.start

    def f(s):
        return g(x0 + s * px, y0 + s * py)

    return integrate_1d(f, 0.0, float(edge.lam), tol,
                        breakpoints=breakpoints, freq_hint=freq_hint)


def polygon_lattice_area_check(polygon: LatticePolygon) -> tuple[float, float]:
    """Pick's theorem pair (area, I + B/2 - 1) for exact-arithmetic tests."""
    interior, edge_pts, vertex_pts = classify_lattice_points(polygon)
    b = len(edge_pts) + len(vertex_pts)
    i = len(interior)
    return polygon.area, i + b / 2.0 - 1.0

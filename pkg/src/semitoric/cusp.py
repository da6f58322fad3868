"""Cusp cross-section geometry for real quadratic tube quotients.

The lattice points of a rank-two module sitting inside its totally positive
cone have a convex hull whose boundary polyline is periodic under the
totally positive unit.  One period of that polyline determines the cycle of
rational curves resolving the cusp, with self-intersection numbers -b_j read
off from the relation v_{j-1} + v_{j+1} = b_j v_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd

from .errors import DegenerateInputError, ResourceBoundError
from .fans import Decomposition, GroupElement, Support
from .lattice import Cone, IntMatrix, Vector
from .quadfield import CuspData, cusp_cone, cusp_cone_normals


def _cone_points(cusp: CuspData, box: int) -> list:
    """Integer coordinate pairs (c1, c2) with c1*alpha + c2*beta totally
    positive and both coordinates in [-box, box]."""
    n1, n2 = cusp_cone_normals(cusp.ideal)
    pts = []
    for c1 in range(-box, box + 1):
        lo, hi = -box, box
        empty = False
        for (a_c, b_c) in (n1, n2):
            # constraint c1*a_c + c2*b_c > 0
            const = a_c * c1
            sb = b_c.sign()
            if sb == 0:
                if const.sign() <= 0:
                    empty = True
                    break
                continue
            bound = (-const) / b_c
            if sb > 0:
                lo = max(lo, bound.floor() + 1)
            else:
                hi = min(hi, _strict_ceil_minus_one(bound))
        if empty or lo > hi:
            continue
        pts.extend((c1, c2) for c2 in range(lo, hi + 1))
    return pts


def _strict_ceil_minus_one(x) -> int:
    # largest integer strictly below x
    f = x.floor()
    return f - 1 if x == f else f


def _cross(p, q) -> int:
    return p[0] * q[1] - p[1] * q[0]


def _hull(points: list) -> list:
    """Convex hull in counterclockwise order (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(
            (lower[-1][0] - lower[-2][0], lower[-1][1] - lower[-2][1]),
            (p[0] - lower[-2][0], p[1] - lower[-2][1]),
        ) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(
            (upper[-1][0] - upper[-2][0], upper[-1][1] - upper[-2][1]),
            (p[0] - upper[-2][0], p[1] - upper[-2][1]),
        ) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _origin_facing_boundary(hull: list) -> set:
    """Lattice points on hull edges whose outer side contains the origin,
    including points interior to those edges."""
    out = set()
    n = len(hull)
    for i in range(n):
        p, q = hull[i], hull[(i + 1) % n]
        if _cross(p, q) >= 0:
            continue
        dx, dy = q[0] - p[0], q[1] - p[1]
        g = gcd(abs(dx), abs(dy))
        sx, sy = dx // g, dy // g
        for k in range(g + 1):
            out.add((p[0] + k * sx, p[1] + k * sy))
    return out


@dataclass(frozen=True)
class VertexChain:
    """One period of the boundary polyline of the lattice hull.

    ``vertices`` starts at the minimal-norm point of the period window and
    follows increasing ratio x/x'; ``b`` holds the integers from
    v_{j-1} + v_{j+1} = b_j v_j, aligned with ``vertices``.  Consecutive
    vertices (with the unit-translate wraparound) always have determinant
    one, every b_j is at least 2, and at least one exceeds 2.
    """

    cusp: CuspData
    vertices: tuple
    b: tuple
    box_used: int

    def __post_init__(self):
        if len(self.vertices) != len(self.b) or not self.vertices:
            raise DegenerateInputError("chain needs matching vertices and b values")
        E = self.cusp.unit_action()
        prev = _apply_int(E.inverse_unimodular(), self.vertices[-1])
        ext = [prev] + list(self.vertices) + [E.apply_int(self.vertices[0])]
        for j in range(1, len(ext)):
            if _cross(ext[j - 1], ext[j]) != 1:
                raise DegenerateInputError("consecutive chain vertices must span the lattice")
        for j in range(1, len(ext) - 1):
            bj = self.b[j - 1]
            if bj < 2:
                raise DegenerateInputError("every b value must be at least 2")
            for t in range(2):
                if ext[j - 1][t] + ext[j + 1][t] != bj * ext[j][t]:
                    raise DegenerateInputError("b values do not match the chain relation")
        if all(bj == 2 for bj in self.b):
            raise DegenerateInputError("a hyperbolic unit forces some b value above 2")

    @property
    def m(self) -> int:
        return len(self.vertices)

    def element(self, v):
        return self.cusp.ideal.element(Fraction(v[0]), Fraction(v[1]))

    def norms(self) -> tuple:
        return tuple(self.element(v).norm() for v in self.vertices)

    def extended_vertices(self, periods: int = 1) -> tuple:
        """Vertices over several consecutive unit translates of the period."""
        if periods < 1:
            raise DegenerateInputError("periods must be positive")
        E = self.cusp.unit_action()
        out = []
        power = IntMatrix.identity(2)
        for _ in range(periods):
            out.extend(_apply_int(power, v) for v in self.vertices)
            power = E * power
        out.append(_apply_int(power, self.vertices[0]))
        return tuple(out)

    def extended_b(self, periods: int = 1) -> tuple:
        return self.b * periods


def _apply_int(M: IntMatrix, v) -> tuple:
    return M.apply_int(v)


def _ratio_cmp(cusp: CuspData):
    ideal = cusp.ideal

    def cmp(u, v):
        xu = ideal.element(Fraction(u[0]), Fraction(u[1]))
        xv = ideal.element(Fraction(v[0]), Fraction(v[1]))
        return (xu * xv.conjugate() - xv * xu.conjugate()).sign()

    return cmp


def _extract_period(cusp: CuspData, boundary: set):
    """Window the boundary points to one unit period and certify the chain.
    Returns (window points, b values) or None when the box was too small."""
    ideal = cusp.ideal
    E = cusp.unit_action()
    Einv = E.inverse_unimodular()
    scale = cusp.unit * cusp.unit  # ratio multiplier of the unit action
    path = sorted(boundary, key=cmp_to_key(_ratio_cmp(cusp)))
    window, prev_pt, next_pt = [], None, None
    for p in path:
        x = ideal.element(Fraction(p[0]), Fraction(p[1]))
        below = (x - x.conjugate()).sign() < 0  # ratio < 1
        above = (x - x.conjugate() * scale).sign() >= 0  # ratio >= scale
        if below:
            prev_pt = p
        elif above:
            next_pt = p
            break
        else:
            window.append(p)
    if not window or prev_pt is None or next_pt is None:
        return None
    if prev_pt != _apply_int(Einv, window[-1]) or next_pt != _apply_int(E, window[0]):
        return None
    ext = [prev_pt] + window + [next_pt]
    b = []
    for j in range(1, len(ext) - 1):
        if _cross(ext[j - 1], ext[j]) != 1 or _cross(ext[j], ext[j + 1]) != 1:
            return None
        num = ext[j - 1][0] + ext[j + 1][0]
        den = ext[j][0]
        if den == 0:
            num, den = ext[j - 1][1] + ext[j + 1][1], ext[j][1]
        if num % den != 0:
            return None
        bj = num // den
        if bj < 2:
            return None
        if any(ext[j - 1][t] + ext[j + 1][t] != bj * ext[j][t] for t in range(2)):
            return None
        b.append(bj)
    if all(bj == 2 for bj in b):
        return None
    return tuple(window), tuple(b)


def _box_estimate(cusp: CuspData) -> int:
    """Coordinate size the chain certificate is expected to need, from the
    entries of the squared unit action."""
    E2 = cusp.unit_action().power(2)
    biggest = max(abs(e) for row in E2.rows for e in row)
    return 4 * biggest + 8


def hull_vertices(cusp: CuspData, box_start: int = 8, box_limit: int = 4096) -> VertexChain:
    """Boundary polyline of the hull of the cone lattice points, one period.

    Grows the enumeration box until the extracted period is certified and
    stable across a doubling.  Raises ResourceBoundError when the predicted
    or actual box size exceeds ``box_limit``.
    """
    est = _box_estimate(cusp)
    if est > box_limit:
        raise ResourceBoundError(
            f"chain certificate needs coordinates near {est}, over the box limit {box_limit}"
        )
    box = box_start
    previous = None
    while box <= box_limit:
        boundary = _origin_facing_boundary(_hull(_cone_points(cusp, box)))
        got = _extract_period(cusp, boundary) if boundary else None
        if got is not None and got == previous:
            window, b = got
            return _chain_from_window(cusp, window, b, box)
        previous = got
        box *= 2
    raise ResourceBoundError(f"hull did not stabilize within the box limit {box_limit}")


def _chain_from_window(cusp: CuspData, window, b, box) -> VertexChain:
    ideal = cusp.ideal
    norms = [ideal.element(Fraction(p[0]), Fraction(p[1])).norm() for p in window]
    start = min(range(len(window)), key=lambda i: (norms[i], window[i]))
    E = cusp.unit_action()
    vertices = list(window[start:]) + [_apply_int(E, p) for p in window[:start]]
    b_rot = b[start:] + b[:start]
    return VertexChain(cusp, tuple(vertices), tuple(b_rot), box)


@dataclass(frozen=True)
class CycleResolution:
    """Cycle of rational curves resolving the cusp: curve j has
    self-intersection -b[j].  ``b`` is the lexicographically smallest
    rotation of the chain values; ``offset`` says where it starts in the
    chain."""

    chain: VertexChain
    b: tuple
    offset: int

    @property
    def m(self) -> int:
        return len(self.b)

    def self_intersection_numbers(self) -> tuple:
        return tuple(-x for x in self.b)

    def euler_contribution(self) -> int:
        return len(self.b)


def _lex_min_rotation(cycle: tuple):
    rotations = [(cycle[i:] + cycle[:i], i) for i in range(len(cycle))]
    rotations.sort(key=lambda r: (r[0], r[1]))
    return rotations[0]


def self_intersections(source, strict: bool = True) -> CycleResolution:
    """Self-intersection cycle from a cusp or a precomputed chain.

    With ``strict`` the chain certificate is recomputed from scratch; the
    chain constructor re-checks the determinant and b relations either way.
    """
    chain = hull_vertices(source) if isinstance(source, CuspData) else source
    if strict and not isinstance(source, CuspData):
        fresh = hull_vertices(chain.cusp, box_limit=max(4096, chain.box_used * 2))
        if fresh.b != chain.b or fresh.vertices != chain.vertices:
            raise DegenerateInputError("chain does not match the recomputed hull")
    b_min, offset = _lex_min_rotation(chain.b)
    return CycleResolution(chain, b_min, offset)


def build_fan(source) -> Decomposition:
    """Decomposition of the open cusp cone into the rays through the chain
    vertices and the sectors between consecutive ones, with the unit action
    as symmetry group."""
    chain = hull_vertices(source) if isinstance(source, CuspData) else source
    cusp = chain.cusp
    E = cusp.unit_action()
    verts = list(chain.vertices) + [E.apply_int(chain.vertices[0])]
    members = []
    for j in range(chain.m):
        members.append(Cone(2, [Vector(verts[j])], relint=True))
        members.append(Cone(2, [Vector(verts[j]), Vector(verts[j + 1])], relint=True))
    support = Support(
        cusp_cone(cusp.ideal).closure(), interior_only=True, include_origin=False
    )
    return Decomposition(2, tuple(members), (GroupElement(E),), support)


def emit_figure(obj, kind: str = "hull") -> str:
    """Deterministic SVG picture of a chain hull or a resolution cycle."""
    from . import figures

    if kind == "hull":
        chain = obj.chain if isinstance(obj, CycleResolution) else obj
        return figures.hull_figure(chain)
    if kind == "cycle":
        cycle = obj if isinstance(obj, CycleResolution) else self_intersections(obj, strict=False)
        return figures.cycle_figure(cycle)
    raise DegenerateInputError(f"unknown figure kind: {kind}")

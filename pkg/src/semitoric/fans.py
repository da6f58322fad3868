"""Locally rational polyhedral decompositions of a support cone.

A Decomposition holds finitely many representative cones (as relative
interiors), a finitely generated symmetry group acting by lattice
automorphisms, and the support region.  Validation checks the four defining
conditions on the representatives together with one shell of group
translates; for infinite groups the reports are certificates on the explored
region, not global decision procedures.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateInputError, GroupMismatchError, RequiresRationalConeError
from .lattice import (
    Cone,
    IntMatrix,
    Vector,
    as_vector,
    complete_to_basis,
    cone_from_inequalities,
    cone_intersection,
    faces,
    is_strongly_convex,
    is_unimodular_part_of_basis,
    mat_rank,
)


@dataclass(frozen=True)
class GroupElement:
    """Affine symmetry: integer linear part (a lattice automorphism) plus an
    integer translation.  Only the linear part acts on cones."""

    linear: IntMatrix
    translation: tuple = ()

    def __post_init__(self):
        if not self.linear.is_unimodular():
            raise DegenerateInputError("group element linear part must be unimodular")
        object.__setattr__(self, "translation", tuple(int(t) for t in self.translation))

    def act(self, cone: Cone) -> Cone:
        return Cone(
            cone.rank,
            [self.linear.apply(g) for g in cone.generators],
            relint=cone.relint,
        )

    def inverse_linear(self) -> IntMatrix:
        return self.linear.inverse_unimodular()


@dataclass(frozen=True)
class Support:
    """Support region: a cone with interpretation flags.

    ``interior_only`` restricts to the relative interior (used when the
    boundary rays are irrational and carry no lattice points); the origin is
    included or excluded explicitly, independent of the other flags.
    """

    cone: Cone
    interior_only: bool = False
    include_origin: bool = True

    def contains_point(self, v) -> bool:
        v = as_vector(v, self.cone.rank)
        if v.is_zero:
            return self.include_origin
        return self.cone.contains(v, relint=self.interior_only)

    @property
    def is_rational(self) -> bool:
        return self.cone.is_rational

    def boundary_normals(self):
        return self.cone.dual_description()[0]

    def same_as(self, other: "Support") -> bool:
        return (
            self.cone.same_rays(other.cone)
            and self.interior_only == other.interior_only
            and self.include_origin == other.include_origin
        )


def zero_cone(rank: int) -> Cone:
    return Cone(rank, [], relint=True)


@dataclass(frozen=True)
class Decomposition:
    rank: int
    members: tuple
    group: tuple
    support: Support

    def __post_init__(self):
        members = tuple(
            m if m.relint else m.relative_interior() for m in self.members
        )
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "group", tuple(self.group))

    # -- group exploration ----------------------------------------------------

    def linear_ball(self, depth: int) -> list:
        """Products of at most ``depth`` generator linear parts and inverses."""
        gens = []
        for g in self.group:
            gens.append(g.linear)
            gens.append(g.inverse_linear())
        ball = [IntMatrix.identity(self.rank)]
        seen = {ball[0].rows}
        frontier = list(ball)
        for _ in range(depth):
            new_frontier = []
            for m in frontier:
                for g in gens:
                    cand = g * m
                    if cand.rows not in seen:
                        seen.add(cand.rows)
                        new_frontier.append(cand)
            ball.extend(new_frontier)
            frontier = new_frontier
        return ball

    def translated_members(self, depth: int) -> dict:
        """Map canonical cone -> (word matrix, base member) over the ball."""
        out = {}
        for t in self.linear_ball(depth):
            for m in self.members:
                c = _act_linear(t, m)
                if c not in out:
                    out[c] = (t, m)
        return out

    def member_containing(self, point, depth: int = 2):
        """The translated member whose relative interior holds the point."""
        point = as_vector(point, self.rank)
        hits = [c for c in self.translated_members(depth) if c.contains(point)]
        return hits

    def canonical_member_keys(self, depth: int = 0) -> set:
        keys = set()
        for t in self.linear_ball(depth):
            for m in self.members:
                keys.add(_act_linear(t, m).generators)
        return keys


def _act_linear(t: IntMatrix, cone: Cone) -> Cone:
    if t.rows == IntMatrix.identity(cone.rank).rows:
        return cone
    return Cone(cone.rank, [t.apply(g) for g in cone.generators], relint=cone.relint)


_FACE_CACHE: dict = {}


def cached_faces(cone: Cone) -> list:
    key = (cone.rank, cone.generators)
    if key not in _FACE_CACHE:
        _FACE_CACHE[key] = faces(cone.closure())
    return _FACE_CACHE[key]


# -- validation ---------------------------------------------------------------


@dataclass
class ConditionReport:
    name: str
    passed: bool
    details: str = ""
    witnesses: list = field(default_factory=list)


@dataclass
class ValidationReport:
    conditions: list
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionReport:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        lines = [
            f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.details}"
            for c in self.conditions
        ]
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def _quick_separation(a: Cone, b: Cone) -> bool:
    """Separation certificate ruling out a relint overlap without computing
    the intersection: a facet normal of b that is nonpositive on all of a,
    or a span equation of b with a fixed strict sign on the interior of a."""
    normals, equations = b.dual_description()
    for n in normals:
        if all(n.dot(g).sign() <= 0 for g in a.generators):
            return True
    for e in equations:
        signs = [e.dot(g).sign() for g in a.generators]
        if any(signs) and (all(s >= 0 for s in signs) or all(s <= 0 for s in signs)):
            return True
    return False


def _relint_overlap(a: Cone, b: Cone) -> bool:
    """Whether the relative interiors of two cones intersect."""
    if not a.generators or not b.generators:
        return not a.generators and not b.generators
    if _quick_separation(a, b) or _quick_separation(b, a):
        return False
    inter = cone_intersection(a, b)
    if not inter.generators:
        return False
    s = inter.interior_sample()
    return a.closure().contains(s, relint=True) and b.closure().contains(s, relint=True)


def _meets_probe(member: Cone, probe: Cone) -> bool:
    """Whether the (relint) member meets the closed probe cone."""
    if not member.generators:
        return True  # the origin lies in every closed probe cone
    normals, equations = probe.dual_description()
    for n in normals:
        signs = [n.dot(g).sign() for g in member.generators]
        if any(s < 0 for s in signs) and all(s <= 0 for s in signs):
            return False
    for e in equations:
        signs = [e.dot(g).sign() for g in member.generators]
        if any(signs) and (all(s >= 0 for s in signs) or all(s <= 0 for s in signs)):
            return False
    inter = cone_intersection(member.closure(), probe)
    if not inter.generators:
        return False
    s = inter.interior_sample()
    return member.closure().contains(s, relint=True)


def validate_decomposition(
    P: Decomposition,
    probes=None,
    shell_depth: int = 1,
    face_ball: int = 2,
    samples_per_probe: int = 200,
    probe_radius_cap: int = 16,
    seed: int = 0,
) -> ValidationReport:
    """Check the four decomposition conditions on representatives plus one
    shell of group translates.

    (i)   members are pairwise disjoint, lie in the support, and full-
          dimensional members match across every interior facet; sampled
          points of each probe are covered exactly once;
    (ii)  the linear span of every member is defined over Q;
    (iii) every face of a member closure that lies in the support is again a
          member, up to the group action;
    (iv)  each probe cone meets only finitely many members, certified by an
          explicit meeting list that stabilizes over group shells.
    """
    rng = random.Random(seed)
    notes = []
    sup = P.support
    if not sup.is_rational and not sup.include_origin:
        notes.append(
            "support has irrational boundary; origin excluded from the support by convention"
        )
    translated = P.translated_members(shell_depth)
    all_cones = list(translated)
    d_max = sup.cone.dim()

    # condition (i): containment, disjointness, facet matching
    witnesses_i = []
    for m in P.members:
        if not m.generators:
            if not sup.include_origin:
                witnesses_i.append((m, "zero member but origin not in support"))
            continue
        if not all(sup.cone.contains(g) for g in m.generators):
            witnesses_i.append((m, "member not contained in support closure"))
            continue
        if not sup.contains_point(m.interior_sample()):
            witnesses_i.append((m, "member interior escapes the support"))
    for i in range(len(all_cones)):
        for j in range(i + 1, len(all_cones)):
            a, b = all_cones[i], all_cones[j]
            if a.dim() != b.dim() and a.dim() * b.dim() == 0:
                continue  # zero cone cannot overlap a relint of positive dim
            if _relint_overlap(a, b):
                witnesses_i.append((a, f"relative interiors overlap with {b}"))
    support_normals = sup.boundary_normals()
    for m in P.members:
        if m.dim() != d_max or not m.generators:
            continue
        closure = m.closure()
        for f in cached_faces(closure):
            if f.dim() != d_max - 1:
                continue
            sf = f.interior_sample()
            if any(n.dot(sf).sign() == 0 for n in support_normals):
                continue  # facet sits on the support boundary
            normal = _facet_normal(closure, f)
            matched = False
            for other in all_cones:
                if other.dim() != d_max or other.generators == m.generators:
                    continue
                if normal.dot(other.interior_sample()).sign() >= 0:
                    continue
                if all(other.closure().contains(g) for g in f.generators):
                    matched = True
                    break
            if not matched:
                witnesses_i.append(
                    (f, "interior facet of a full-dimensional member has no "
                        "neighbor on the other side")
                )
    cond1 = ConditionReport(
        "disjoint-cover",
        not witnesses_i,
        "representatives plus one shell of translates",
        witnesses_i,
    )

    # condition (ii): rational spans
    witnesses_ii = []
    for m in P.members:
        if not _span_defined_over_Q(m):
            witnesses_ii.append((m, "linear span is not defined over Q"))
    cond2 = ConditionReport("rational-span", not witnesses_ii, "", witnesses_ii)

    # condition (iii): face closure up to the group
    witnesses_iii = []
    member_keys = P.canonical_member_keys(depth=face_ball)
    if (
        sup.include_origin
        and any(m.generators for m in P.members)
        and not any(not m.generators for m in P.members)
    ):
        witnesses_iii.append((zero_cone(P.rank), "zero face missing from members"))
    for m in P.members:
        if not m.generators:
            continue
        for f in cached_faces(m.closure()):
            if f.generators == m.generators or not f.generators:
                continue
            if not sup.contains_point(f.interior_sample()):
                continue
            if f.generators not in member_keys:
                witnesses_iii.append(
                    (f, "face of a member closure is absent up to the group")
                )
    cond3 = ConditionReport("face-closure", not witnesses_iii, "", witnesses_iii)

    # condition (iv): local finiteness against probes
    if probes is None:
        probes = _default_probes(P, d_max)
        if not probes:
            notes.append("no rational probe available; local finiteness not probed")
    witnesses_iv = []
    meeting_sets = []
    for probe in probes:
        if not probe.is_rational:
            witnesses_iv.append((probe, "probe must be rational polyhedral"))
            continue
        meeting = set()
        stable_at = None
        for radius in range(probe_radius_cap + 1):
            added = False
            for t in _sphere(P, radius):
                for m in P.members:
                    c = _act_linear(t, m)
                    if c in meeting:
                        continue
                    if _meets_probe(c, probe):
                        meeting.add(c)
                        added = True
            if radius > 0 and not added:
                stable_at = radius
                break
        if stable_at is None:
            witnesses_iv.append(
                (probe, f"meeting set did not stabilize within radius {probe_radius_cap}")
            )
        meeting_sets.append((probe, sorted(meeting, key=lambda c: [g.key() for g in c.generators])))
        # sampled exact-cover check on the probe
        misses = _sampled_cover_check(
            P, probe, translated, rng, samples_per_probe
        )
        witnesses_i.extend(misses)
    if witnesses_i and cond1.passed:
        cond1.passed = False
        cond1.witnesses = witnesses_i
    cond4 = ConditionReport(
        "local-finiteness",
        not witnesses_iv,
        f"{len(meeting_sets)} probes certified",
        witnesses_iv,
    )

    report = ValidationReport([cond1, cond2, cond3, cond4], notes)
    report.meeting_sets = meeting_sets
    return report


def _sphere(P: Decomposition, radius: int) -> list:
    if radius == 0:
        return [IntMatrix.identity(P.rank)]
    ball_prev = {m.rows for m in P.linear_ball(radius - 1)}
    return [m for m in P.linear_ball(radius) if m.rows not in ball_prev]


def _default_probes(P: Decomposition, d_max: int) -> list:
    """Rational probe cones: full-dimensional rational member closures when
    present, else a cone on interior integer directions of the support."""
    rational = [
        m.closure()
        for m in P.members
        if m.dim() == d_max and m.generators and m.is_rational
    ]
    if rational:
        return rational[:4]
    sup = P.support
    rays = []
    seen = set()
    for radius in (2, 4, 8, 16, 32):
        for pt in _box_lattice_points(P.rank, radius):
            v = Vector(pt)
            if v.is_zero or not sup.cone.contains(v, relint=True):
                continue
            key = v.primitive().key()
            if key not in seen:
                seen.add(key)
                rays.append(v.primitive())
        if len(rays) >= max(2, d_max):
            break
    if not rays:
        return []
    return [Cone(P.rank, rays[: 2 * d_max])]


def _box_lattice_points(rank: int, radius: int):
    if rank == 1:
        for x in range(-radius, radius + 1):
            yield (x,)
        return
    for rest in _box_lattice_points(rank - 1, radius):
        for x in range(-radius, radius + 1):
            yield (x,) + rest


def _sampled_cover_check(P, probe, translated, rng, count) -> list:
    gens = list(probe.generators)
    if not gens:
        return []
    misses = []
    deep = None
    for _ in range(count):
        coeffs = [rng.randrange(0, 4) for _ in gens]
        if not any(coeffs):
            coeffs[rng.randrange(len(gens))] = 1
        pt = gens[0].scale(coeffs[0])
        for c, g in zip(coeffs[1:], gens[1:]):
            pt = pt + g.scale(c)
        if not P.support.contains_point(pt):
            continue
        hits = sum(1 for c in translated if c.contains(pt))
        if hits != 1 and P.group:
            if deep is None:
                deep = P.translated_members(3)
            hits = sum(1 for c in deep if c.contains(pt))
        if hits != 1:
            misses.append((pt, f"covered {hits} times"))
            if len(misses) >= 5:
                break
    return misses


def _facet_normal(cone: Cone, facet: Cone) -> Vector:
    """Facet normal of ``cone`` vanishing on ``facet``, positive inside."""
    normals, _ = cone.dual_description()
    for n in normals:
        if all(n.dot(g).sign() == 0 for g in facet.generators) and facet.generators:
            return n
    raise DegenerateInputError("facet normal not found")


def _span_defined_over_Q(cone: Cone) -> bool:
    if not cone.generators:
        return True
    if cone.is_rational:
        return True
    rows = [list(g) for g in cone.generators]
    conj = [[e.conjugate() for e in row] for row in rows]
    return mat_rank(rows) == mat_rank(rows + conj)


# -- standard constructions ---------------------------------------------------


def sbb_decomposition(support: Support, group=()) -> Decomposition:
    """Decomposition into the relative interiors of the nonempty faces of the
    support.  When the support has irrational boundary, the only rational
    faces are the interior (and the origin when included): restricted mode."""
    rank = support.cone.rank
    members = []
    if support.is_rational and not support.interior_only:
        for f in cached_faces(support.cone):
            if not f.generators:
                if support.include_origin:
                    members.append(zero_cone(rank))
                continue
            members.append(f.relative_interior())
    else:
        members.append(support.cone.relative_interior())
        if support.include_origin:
            members.append(zero_cone(rank))
    return Decomposition(rank, tuple(members), tuple(group), support)


def is_mumford_type(P: Decomposition) -> bool:
    """True iff every member closure is generated by part of a Z-basis."""
    for m in P.members:
        if not m.generators:
            continue
        if not m.is_rational:
            raise RequiresRationalConeError(
                "Mumford-type test needs rational members"
            )
        if not is_unimodular_part_of_basis(m.closure()):
            return False
    return True


@dataclass(frozen=True)
class Stratum:
    cone: Cone
    complex_dim: int
    torus_dim: int


def strata(P: Decomposition) -> list:
    """One stratum per representative member: a member of dimension k yields
    a boundary stratum of complex dimension rank - k, whose distinguished
    limit points sweep a torus of the same dimension."""
    out = []
    for m in P.members:
        k = m.dim()
        out.append(Stratum(m, P.rank - k, P.rank - k))
    out.sort(key=lambda s: (s.complex_dim, [g.key() for g in s.cone.generators]))
    return out


@dataclass(frozen=True)
class Chart:
    """Boundary chart data for a Mumford-type cone: the cone generators as
    the first k vectors of a Z-basis, plus coordinate names."""

    cone: Cone
    basis: IntMatrix
    k: int
    rank: int
    coordinate_names: tuple

    def disc_coordinates(self) -> tuple:
        return self.coordinate_names[: self.k]

    def torus_coordinates(self) -> tuple:
        return self.coordinate_names[self.k :]


def boundary_chart(cone: Cone, rank=None) -> Chart:
    rank = cone.rank if rank is None else rank
    if not is_unimodular_part_of_basis(cone.closure()):
        raise DegenerateInputError("chart requires a unimodular cone")
    rows = [g.as_integers() for g in cone.generators]
    k = len(rows)
    basis = complete_to_basis(rows, rank) if rows else IntMatrix.identity(rank)
    names = tuple(f"w_{i+1}" for i in range(rank))
    return Chart(cone.closure(), basis, k, rank, names)


# -- refinements ----------------------------------------------------------------


def _require_same_setting(P1: Decomposition, P2: Decomposition):
    if P1.rank != P2.rank:
        raise DegenerateInputError("decompositions live in different ranks")
    if not P1.support.same_as(P2.support):
        raise DegenerateInputError("decompositions have different supports")
    g1 = sorted((g.linear.rows, g.translation) for g in P1.group)
    g2 = sorted((g.linear.rows, g.translation) for g in P2.group)
    if g1 != g2:
        raise GroupMismatchError("decompositions carry different group generators")


def is_refinement(fine: Decomposition, coarse: Decomposition, ball_depth: int = 1) -> bool:
    """True iff every member of ``fine`` lies inside a member of ``coarse``
    (up to the group action)."""
    _require_same_setting(fine, coarse)
    coarse_cones = list(coarse.translated_members(ball_depth))
    for m in fine.members:
        if not m.generators:
            if any(not c.generators for c in coarse.members):
                continue
            return False
        sample = m.interior_sample()
        found = False
        for c in coarse_cones:
            if not c.generators:
                continue
            if c.contains(sample) and all(
                c.closure().contains(g) for g in m.generators
            ):
                found = True
                break
        if not found:
            return False
    return True


def common_refinement(P1: Decomposition, P2: Decomposition, ball_depth: int = 1) -> Decomposition:
    """Decomposition whose members are the nonempty intersections of the
    relative interiors of members of the two inputs."""
    _require_same_setting(P1, P2)
    depth = ball_depth if P1.group else 0
    second = list(P2.translated_members(depth))
    members = []
    seen = set()
    ball = P1.linear_ball(2) if P1.group else [IntMatrix.identity(P1.rank)]
    for a in P1.members:
        for b in second:
            if not a.generators and not b.generators:
                piece = zero_cone(P1.rank)
            elif not a.generators or not b.generators:
                continue
            else:
                inter = cone_intersection(a, b)
                if not inter.generators:
                    continue
                s = inter.interior_sample()
                if not (a.contains(s) and b.contains(s)):
                    continue
                piece = inter.relative_interior()
            if piece.generators in seen:
                continue
            orbit_hit = False
            for t in ball:
                if _act_linear(t, piece).generators in seen:
                    orbit_hit = True
                    break
            if orbit_hit:
                continue
            seen.add(piece.generators)
            members.append(piece)
    return Decomposition(P1.rank, tuple(members), P1.group, P1.support)


# -- admissibility ---------------------------------------------------------------


@dataclass
class AdmissibilityReport:
    certified: bool
    witness: Vector | None
    cells_checked: int

    def __bool__(self):
        return self.certified


def admissibility_check(
    rank: int,
    support: Support,
    group_generators,
    pi: Cone,
    certificate,
    probe: Cone,
) -> AdmissibilityReport:
    """Verify that the translates g . pi over the certificate cover the probe.

    The probe is split along every facet hyperplane of every translate; each
    full-dimensional cell is then tested exactly.  Returns a certificate on
    the probe or an uncovered witness point.  This is a checker for the
    supplied certificate, not a search.
    """
    if not probe.is_rational:
        raise RequiresRationalConeError("probe must be rational polyhedral")
    pieces = []
    for g in certificate:
        linear = g.linear if isinstance(g, GroupElement) else g
        moved = Cone(rank, [linear.apply(v) for v in pi.generators])
        inter = cone_intersection(moved, probe)
        if inter.dim() == probe.dim():
            pieces.append(inter)
    hyperplanes = []
    seen = set()
    for piece in pieces:
        normals, _ = piece.dual_description()
        for n in normals:
            key = min(n.key(), (-n).key())
            if key not in seen:
                seen.add(key)
                hyperplanes.append(n)
    cells_checked = 0
    base_normals, base_eqs = probe.dual_description()
    witness = None
    target_dim = probe.dim()
    work = [(0, list(base_normals))]
    while work:
        level, ineqs = work.pop()
        cell = cone_from_inequalities(ineqs, base_eqs, rank)
        if cell.dim() < target_dim:
            continue
        if level == len(hyperplanes):
            cells_checked += 1
            sample = cell.interior_sample()
            if not any(p.contains(sample) for p in pieces):
                witness = sample
                break
            continue
        n = hyperplanes[level]
        work.append((level + 1, ineqs + [n]))
        work.append((level + 1, ineqs + [-n]))
    return AdmissibilityReport(witness is None, witness, cells_checked)


# -- comparison helper ------------------------------------------------------------


def decompositions_match(P1: Decomposition, P2: Decomposition, ball_depth: int = 2) -> bool:
    """Equality of member sets up to relabeling and the group action."""
    if P1.rank != P2.rank:
        return False
    k1 = _orbit_keys(P1, ball_depth)
    k2 = _orbit_keys(P2, ball_depth)
    return k1 == k2


def _orbit_keys(P: Decomposition, depth: int) -> set:
    ball = P.linear_ball(depth)
    keys = set()
    for m in P.members:
        orbit = []
        for t in ball:
            c = _act_linear(t, m)
            orbit.append(tuple(g.key() for g in c.generators))
        keys.add(min(orbit))
    return keys

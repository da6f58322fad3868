"""Versioned JSON encodings for the data the command line moves around.

Scalars are strings "p/q" for rationals or objects {"a","b","D"} for
quadratic values a + b sqrt(D).  Serialization is canonical (sorted keys,
compact separators, trailing newline) so identical data always produces
identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .connection import BoundaryAtlas, MaxDepthPoint, NondescentWitness
from .cusp import CycleResolution, VertexChain
from .errors import FormatError
from .fans import Decomposition, GroupElement, Support
from .lattice import Cone, ExactScalar, IntMatrix, Vector
from .quadfield import CuspData, QuadIdeal
from .series import FormalSeries

FAN_FORMAT = "fan/1"
CHAIN_FORMAT = "chain/1"
CYCLE_FORMAT = "cycle/1"
ATLAS_FORMAT = "atlas/1"
MONODROMY_FORMAT = "monodromy/1"
SERIES_FORMAT = "series/1"


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_frac(obj, path: str) -> Fraction:
    if isinstance(obj, bool):
        raise FormatError(f"{path}: expected a rational, got a boolean")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"{path}: bad rational {obj!r}: {e}") from None
    raise FormatError(f"{path}: expected a rational, got {type(obj).__name__}")


def dump_scalar(x: ExactScalar):
    if x.D is None:
        return frac_str(x.a)
    return {"a": frac_str(x.a), "b": frac_str(x.b), "D": x.D}


def parse_scalar(obj, path: str) -> ExactScalar:
    if isinstance(obj, dict):
        for key in ("a", "b", "D"):
            if key not in obj:
                raise FormatError(f"{path}: scalar object needs the key {key!r}")
        D = obj["D"]
        if not isinstance(D, int):
            raise FormatError(f"{path}.D: expected an integer")
        return ExactScalar(
            parse_frac(obj["a"], f"{path}.a"), parse_frac(obj["b"], f"{path}.b"), D
        )
    return ExactScalar(parse_frac(obj, path))


def dump_vector(v: Vector) -> list:
    return [dump_scalar(x) for x in v]


def parse_vector(obj, rank: int, path: str) -> Vector:
    if not isinstance(obj, list) or len(obj) != rank:
        raise FormatError(f"{path}: expected a list of {rank} scalars")
    return Vector([parse_scalar(x, f"{path}[{i}]") for i, x in enumerate(obj)])


def _require(obj, key, path: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected an object")
    if key not in obj:
        raise FormatError(f"{path}: missing the key {key!r}")
    return obj[key]


def _check_format(obj, expected: str, path: str):
    got = _require(obj, "format", path)
    if got != expected:
        raise FormatError(f"{path}.format: expected {expected!r}, got {got!r}")


# -- support / fan -----------------------------------------------------------------


def dump_support(s: Support) -> dict:
    return {
        "generators": [dump_vector(g) for g in s.cone.generators],
        "rank": s.cone.rank,
        "interior_only": s.interior_only,
        "include_origin": s.include_origin,
    }


def parse_support(obj, path: str) -> Support:
    rank = _require(obj, "rank", path)
    if not isinstance(rank, int) or rank < 1:
        raise FormatError(f"{path}.rank: expected a positive integer")
    gens = _require(obj, "generators", path)
    if not isinstance(gens, list):
        raise FormatError(f"{path}.generators: expected a list")
    vectors = [
        parse_vector(g, rank, f"{path}.generators[{i}]") for i, g in enumerate(gens)
    ]
    return Support(
        Cone(rank, vectors),
        bool(obj.get("interior_only", False)),
        bool(obj.get("include_origin", True)),
    )


def dump_group_element(g: GroupElement) -> dict:
    return {
        "linear": [list(row) for row in g.linear.rows],
        "translation": list(g.translation),
    }


def parse_group_element(obj, rank: int, path: str) -> GroupElement:
    linear = _require(obj, "linear", path)
    if (
        not isinstance(linear, list)
        or len(linear) != rank
        or any(not isinstance(r, list) or len(r) != rank for r in linear)
        or any(not isinstance(x, int) for r in linear for x in r)
    ):
        raise FormatError(f"{path}.linear: expected a {rank}x{rank} integer matrix")
    translation = obj.get("translation", [])
    if not isinstance(translation, list) or any(
        not isinstance(x, int) for x in translation
    ):
        raise FormatError(f"{path}.translation: expected a list of integers")
    try:
        return GroupElement(IntMatrix([tuple(r) for r in linear]), tuple(translation))
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


def dump_fan(P: Decomposition) -> dict:
    return {
        "format": FAN_FORMAT,
        "rank": P.rank,
        "support": dump_support(P.support),
        "members": [
            {"generators": [dump_vector(g) for g in m.generators]} for m in P.members
        ],
        "group": [dump_group_element(g) for g in P.group],
    }


def load_fan(obj, path: str = "fan") -> Decomposition:
    _check_format(obj, FAN_FORMAT, path)
    rank = _require(obj, "rank", path)
    if not isinstance(rank, int) or rank < 1:
        raise FormatError(f"{path}.rank: expected a positive integer")
    support = parse_support(_require(obj, "support", path), f"{path}.support")
    members_obj = _require(obj, "members", path)
    if not isinstance(members_obj, list):
        raise FormatError(f"{path}.members: expected a list")
    members = []
    for i, m in enumerate(members_obj):
        gens_obj = _require(m, "generators", f"{path}.members[{i}]")
        vectors = [
            parse_vector(g, rank, f"{path}.members[{i}].generators[{j}]")
            for j, g in enumerate(gens_obj)
        ]
        members.append(Cone(rank, vectors, relint=True))
    group = [
        parse_group_element(g, rank, f"{path}.group[{i}]")
        for i, g in enumerate(obj.get("group", []))
    ]
    try:
        return Decomposition(rank, tuple(members), tuple(group), support)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


# -- chains and cycles ----------------------------------------------------------------


def dump_chain(chain: VertexChain) -> dict:
    return {
        "format": CHAIN_FORMAT,
        "discriminant": chain.cusp.ideal.D,
        "alpha": dump_scalar(chain.cusp.ideal.alpha),
        "beta": dump_scalar(chain.cusp.ideal.beta),
        "unit": dump_scalar(chain.cusp.unit),
        "vertices": [list(v) for v in chain.vertices],
        "b": list(chain.b),
        "box": chain.box_used,
    }


def load_chain(obj, path: str = "chain") -> VertexChain:
    _check_format(obj, CHAIN_FORMAT, path)
    D = _require(obj, "discriminant", path)
    if not isinstance(D, int):
        raise FormatError(f"{path}.discriminant: expected an integer")
    alpha = parse_scalar(_require(obj, "alpha", path), f"{path}.alpha")
    beta = parse_scalar(_require(obj, "beta", path), f"{path}.beta")
    unit = parse_scalar(_require(obj, "unit", path), f"{path}.unit")
    vertices = _require(obj, "vertices", path)
    b = _require(obj, "b", path)
    if not isinstance(vertices, list) or any(
        not isinstance(v, list) or len(v) != 2 or any(not isinstance(x, int) for x in v)
        for v in vertices
    ):
        raise FormatError(f"{path}.vertices: expected a list of integer pairs")
    if not isinstance(b, list) or any(not isinstance(x, int) for x in b):
        raise FormatError(f"{path}.b: expected a list of integers")
    box = obj.get("box", 0)
    try:
        cusp = CuspData(QuadIdeal(alpha, beta, D), unit)
        return VertexChain(cusp, tuple(tuple(v) for v in vertices), tuple(b), box)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


def dump_cycle(res: CycleResolution) -> dict:
    return {
        "format": CYCLE_FORMAT,
        "m": res.m,
        "b": list(res.b),
        "self_intersections": list(res.self_intersection_numbers()),
        "offset": res.offset,
    }


# -- atlases ---------------------------------------------------------------------------


def dump_atlas(atlas: BoundaryAtlas) -> dict:
    return {
        "format": ATLAS_FORMAT,
        "rank": atlas.rank,
        "points": [
            {
                "label": p.label,
                "cone": [[int(x) for x in g.as_integers()] for g in p.cone.generators],
                "frame": [[frac_str(x) for x in row] for row in p.frame],
            }
            for p in atlas.points
        ],
        "group": [dump_group_element(g) for g in atlas.group],
        "covers_boundary": atlas.covers_boundary,
        "support": dump_support(atlas.support_hint) if atlas.support_hint else None,
    }


def load_atlas(obj, path: str = "atlas") -> BoundaryAtlas:
    _check_format(obj, ATLAS_FORMAT, path)
    rank = _require(obj, "rank", path)
    if not isinstance(rank, int) or rank < 1:
        raise FormatError(f"{path}.rank: expected a positive integer")
    points = []
    points_obj = _require(obj, "points", path)
    if not isinstance(points_obj, list):
        raise FormatError(f"{path}.points: expected a list")
    for i, p in enumerate(points_obj):
        ppath = f"{path}.points[{i}]"
        label = _require(p, "label", ppath)
        cone_rows = _require(p, "cone", ppath)
        if not isinstance(cone_rows, list) or any(
            not isinstance(r, list) or len(r) != rank for r in cone_rows
        ):
            raise FormatError(f"{ppath}.cone: expected generator rows of length {rank}")
        frame_rows = _require(p, "frame", ppath)
        if not isinstance(frame_rows, list):
            raise FormatError(f"{ppath}.frame: expected a matrix")
        frame = tuple(
            tuple(parse_frac(x, f"{ppath}.frame[{r}][{c}]") for c, x in enumerate(row))
            for r, row in enumerate(frame_rows)
        )
        try:
            points.append(
                MaxDepthPoint(str(label), Cone(rank, [Vector(r) for r in cone_rows]), frame)
            )
        except ValueError as e:
            raise FormatError(f"{ppath}: {e}") from None
    group = [
        parse_group_element(g, rank, f"{path}.group[{i}]")
        for i, g in enumerate(obj.get("group", []))
    ]
    support = obj.get("support")
    support = parse_support(support, f"{path}.support") if support else None
    try:
        return BoundaryAtlas(
            rank,
            tuple(points),
            tuple(group),
            bool(obj.get("covers_boundary", True)),
            support,
        )
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


# -- monodromy ---------------------------------------------------------------------------


def _parse_frac_matrix(obj, path: str) -> tuple:
    if not isinstance(obj, list) or not obj:
        raise FormatError(f"{path}: expected a nonempty matrix")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise FormatError(f"{path}[{i}]: expected a list")
        rows.append(tuple(parse_frac(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)))
    return tuple(rows)


def load_monodromy(obj, path: str = "monodromy") -> dict:
    _check_format(obj, MONODROMY_FORMAT, path)
    ops_obj = _require(obj, "operators", path)
    if not isinstance(ops_obj, list) or not ops_obj:
        raise FormatError(f"{path}.operators: expected a nonempty list of matrices")
    operators = tuple(
        _parse_frac_matrix(T, f"{path}.operators[{i}]") for i, T in enumerate(ops_obj)
    )
    out = {"operators": operators, "pairing": None, "omega0": None, "basis": None, "weight": None}
    if obj.get("pairing") is not None:
        out["pairing"] = _parse_frac_matrix(obj["pairing"], f"{path}.pairing")
    if obj.get("omega0") is not None:
        om = obj["omega0"]
        if not isinstance(om, list):
            raise FormatError(f"{path}.omega0: expected a list")
        out["omega0"] = tuple(parse_frac(x, f"{path}.omega0[{i}]") for i, x in enumerate(om))
    if obj.get("basis") is not None:
        b = obj["basis"]
        g0 = _require(b, "g0", f"{path}.basis")
        gs = _require(b, "gs", f"{path}.basis")
        out["basis"] = (
            tuple(parse_frac(x, f"{path}.basis.g0[{i}]") for i, x in enumerate(g0)),
            [tuple(parse_frac(x, f"{path}.basis.gs[{k}][{i}]") for i, x in enumerate(g))
             for k, g in enumerate(gs)],
        )
    if obj.get("weight") is not None:
        w = obj["weight"]
        if not isinstance(w, int):
            raise FormatError(f"{path}.weight: expected an integer")
        out["weight"] = w
    return out


def dump_monodromy(operators, pairing=None, omega0=None, basis=None, weight=None) -> dict:
    out = {
        "format": MONODROMY_FORMAT,
        "operators": [[[frac_str(Fraction(x)) for x in row] for row in T] for T in operators],
        "pairing": None,
        "omega0": None,
        "basis": None,
        "weight": weight,
    }
    if pairing is not None:
        out["pairing"] = [[frac_str(Fraction(x)) for x in row] for row in pairing]
    if omega0 is not None:
        out["omega0"] = [frac_str(Fraction(x)) for x in omega0]
    if basis is not None:
        g0, gs = basis
        out["basis"] = {
            "g0": [frac_str(Fraction(x)) for x in g0],
            "gs": [[frac_str(Fraction(x)) for x in g] for g in gs],
        }
    return out


# -- series ---------------------------------------------------------------------------


def dump_series(s: FormalSeries) -> dict:
    return {
        "format": SERIES_FORMAT,
        "rank": s.rank,
        "truncation": s.truncation,
        "complete_order": s.complete_order,
        "terms": [
            {"exponent": list(e), "coefficient": frac_str(c)} for e, c in s.terms
        ],
    }


def load_series(obj, path: str = "series") -> FormalSeries:
    _check_format(obj, SERIES_FORMAT, path)
    rank = _require(obj, "rank", path)
    truncation = _require(obj, "truncation", path)
    if not isinstance(rank, int) or rank < 1:
        raise FormatError(f"{path}.rank: expected a positive integer")
    if not isinstance(truncation, int) or truncation < 0:
        raise FormatError(f"{path}.truncation: expected a nonnegative integer")
    complete = obj.get("complete_order", truncation)
    if not isinstance(complete, int):
        raise FormatError(f"{path}.complete_order: expected an integer")
    terms_obj = _require(obj, "terms", path)
    if not isinstance(terms_obj, list):
        raise FormatError(f"{path}.terms: expected a list")
    terms = []
    for i, t in enumerate(terms_obj):
        tpath = f"{path}.terms[{i}]"
        expo = _require(t, "exponent", tpath)
        if (
            not isinstance(expo, list)
            or len(expo) != rank
            or any(not isinstance(x, int) for x in expo)
        ):
            raise FormatError(f"{tpath}.exponent: expected {rank} integers")
        coeff = parse_frac(_require(t, "coefficient", tpath), f"{tpath}.coefficient")
        terms.append((tuple(expo), coeff))
    try:
        return FormalSeries(rank, tuple(terms), truncation, complete)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


# -- reports (output only) ---------------------------------------------------------------


def dump_validation_report(rep) -> dict:
    return {
        "passed": rep.passed,
        "conditions": [
            {
                "name": c.name,
                "passed": c.passed,
                "details": c.details,
                "witnesses": [str(w) for w in c.witnesses],
            }
            for c in rep.conditions
        ],
        "notes": list(getattr(rep, "notes", [])),
    }


def dump_compatibility_report(rep) -> dict:
    return {
        "passed": rep.passed,
        "conditions": [
            {"name": c.name, "passed": c.passed, "details": c.details}
            for c in rep.conditions
        ],
        "lattice": [list(r) for r in rep.lattice[1]] if rep.lattice else None,
        "lattice_denominator": rep.lattice[0] if rep.lattice else None,
    }


def dump_unipotency_report(rep) -> dict:
    return {
        "passed": rep.passed,
        "weight": rep.weight,
        "dims": dict(rep.dims),
        "draws": rep.draws,
        "conditions": [
            {"name": c.name, "passed": c.passed, "details": c.details}
            for c in rep.conditions
        ],
    }


def dump_coordinates(qc) -> dict:
    def poly(p):
        return [
            {"exponent": list(e), "coefficient": frac_str(c)}
            for e, c in sorted(p.items())
        ]

    return {
        "f": [poly(f) for f in qc.fs],
        "constants": [frac_str(c) for c in qc.constants],
        "remainders": [poly(r) for r in qc.remainders],
        "m": [[frac_str(x) for x in row] for row in qc.m],
        "exact": qc.exact,
        "degenerate": qc.degenerate,
        "q": list(qc.q_descriptions()),
        "order": qc.order,
    }


def dump_nondescent_witness(w: NondescentWitness) -> dict:
    def laurent(d):
        return [{"power": k, "coefficient": frac_str(v)} for k, v in sorted(d.items())]

    return {
        "sample_section": laurent(w.sample_section),
        "sample_nabla": laurent(w.sample_nabla),
        "pole_order": w.pole_order,
        "lead_coefficient": frac_str(w.lead_coefficient),
        "scaling_obstruction": laurent(w.scaling_obstruction),
        "translation_obstruction": laurent(w.translation_obstruction),
        "descends_under_scalings": w.descends_under_scalings,
        "obstructed_under_translations": w.obstructed_under_translations,
    }

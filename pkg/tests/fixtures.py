"""Shared builders for randomized test fans and monodromy fixtures."""

import oracles
from semitoric import Cone, Decomposition, IntMatrix, Support, Vector
from semitoric.fans import zero_cone


def quadrant_support():
    cone = Cone(2, [Vector((1, 0)), Vector((0, 1))]).closure()
    return Support(cone, interior_only=False, include_origin=True)


def octant_support():
    cone = Cone(3, [Vector((1, 0, 0)), Vector((0, 1, 0)), Vector((0, 0, 1))]).closure()
    return Support(cone, interior_only=False, include_origin=True)


def stern_brocot_fan(rng, steps: int) -> Decomposition:
    """Random unimodular fan refining the first quadrant."""
    rays = oracles.stern_brocot_rays(rng, steps)
    members = [zero_cone(2)]
    members += [Cone(2, [Vector(r)]) for r in rays]
    members += [
        Cone(2, [Vector(rays[i]), Vector(rays[i + 1])]) for i in range(len(rays) - 1)
    ]
    return Decomposition(2, tuple(members), (), quadrant_support())


def octant_fan(rng, steps: int) -> Decomposition:
    """Random unimodular fan refining the positive octant."""
    tops = oracles.octant_tops(rng, steps)
    seen = {}
    for t in tops:
        for fs in oracles.simplicial_faces(t):
            key = tuple(sorted(fs))
            if key not in seen:
                seen[key] = Cone(3, [Vector(v) for v in fs]) if fs else zero_cone(3)
    return Decomposition(3, tuple(seen.values()), (), octant_support())


def random_simplicial_cone(rng, ambient=None) -> Cone:
    """Strongly convex simplicial cone with independent integer generators."""
    ambient = ambient if ambient is not None else rng.choice((2, 3, 4))
    k = rng.randint(1, ambient)
    rows = oracles.random_unimodular(rng, ambient)[:k]
    mixed = []
    for i in range(k):
        w = [rng.randint(1, 3) * x for x in rows[i]]
        for j in range(i):
            c = rng.randint(0, 2)
            w = [a + c * b for a, b in zip(w, rows[j])]
        mixed.append(tuple(w))
    return Cone(ambient, [Vector(w) for w in mixed])


def unipotent_from_nilpotent(N):
    n = len(N)
    exp = oracles.oracle_exp(N)
    assert all(x.denominator == 1 for row in exp for x in row)
    return IntMatrix(tuple(tuple(int(x) for x in row) for row in exp))


def chain_nilpotent(size: int):
    """Single shift block: e_j goes to e_{j+1}."""
    return [[1 if i == j + 1 else 0 for j in range(size)] for i in range(size)]


def elliptic_operator() -> IntMatrix:
    return IntMatrix(((1, 1), (0, 1)))


def quintic_like_operator() -> IntMatrix:
    return IntMatrix(((1, 0, 0, 0), (1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1)))


def product_operators():
    N1 = [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]]
    N2 = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]]
    T1 = IntMatrix(tuple(tuple(int(i == j) + N1[i][j] for j in range(4)) for i in range(4)))
    T2 = IntMatrix(tuple(tuple(int(i == j) + N2[i][j] for j in range(4)) for i in range(4)))
    return T1, T2


def antidiagonal_pairing(size: int):
    return [[1 if i + j == size - 1 else 0 for j in range(size)] for i in range(size)]


def max_unipotency_battery():
    """(name, operators, weight, expected verdict) fixtures, 10 of each."""
    import random

    def chain_op(size):
        N = chain_nilpotent(size)
        return IntMatrix(
            tuple(tuple(int(i == j) + N[i][j] for j in range(size)) for i in range(size))
        )

    T1, T2 = product_operators()
    rngU = random.Random(97)
    U2 = oracles.random_unimodular(rngU, 2)
    U4 = oracles.random_unimodular(rngU, 4)
    two_chains = IntMatrix(((1, 0, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 1, 1)))
    dup_composite = T1 * T2
    cases = [
        ("chain-2", (chain_op(2),), 1, True),
        ("chain-3", (chain_op(3),), 2, True),
        ("chain-4", (chain_op(4),), 3, True),
        ("chain-5", (chain_op(5),), 4, True),
        ("chain-6", (chain_op(6),), 5, True),
        ("product", (T1, T2), 2, True),
        ("chain-2-conjugated", (conjugate_operator(chain_op(2), U2),), 1, True),
        ("chain-4-conjugated", (conjugate_operator(chain_op(4), U4),), 3, True),
        (
            "product-conjugated",
            (conjugate_operator(T1, U4), conjugate_operator(T2, U4)),
            2,
            True,
        ),
        ("product-mixed", (T1, T1 * T2), 2, True),
        ("identity", (IntMatrix.identity(2),), 1, False),
        ("semisimple", (IntMatrix(((2, 0), (0, 1))),), 1, False),
        ("rotation", (IntMatrix(((0, -1), (1, 0))),), 1, False),
        ("minus-unipotent", (IntMatrix(((-1, 1), (0, -1))),), 1, False),
        (
            "non-commuting",
            (IntMatrix(((1, 0), (1, 1))), IntMatrix(((1, 1), (0, 1)))),
            1,
            False,
        ),
        ("two-chains", (two_chains,), 1, False),
        ("duplicate-chain-4", (chain_op(4), chain_op(4)), 3, False),
        ("duplicate-composite", (dup_composite, dup_composite), 2, False),
        ("chain-2-plus-fixed", (IntMatrix(((1, 0, 0), (1, 1, 0), (0, 0, 1))),), 1, False),
        ("wrong-weight-chain-4", (chain_op(4),), 2, False),
    ]
    return cases


def conjugate_operator(T: IntMatrix, U) -> IntMatrix:
    Ui = oracles.invert_unimodular(U)
    rows = oracles.mat_mul(oracles.mat_mul(U, [list(r) for r in T.rows]), Ui)
    return IntMatrix(tuple(tuple(int(x) for x in row) for row in rows))

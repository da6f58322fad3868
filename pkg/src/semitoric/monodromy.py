"""Monodromy weight data and quasi-canonical coordinates.

All operators are rational matrices acting on column vectors.  Logarithms of
unipotent operators terminate exactly; weight spaces come from images and
kernels of powers; the coordinate construction pairs an exponential of the
log operators against an adapted integral basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, lcm

from .errors import DegenerateInputError, NotUnipotentError
from .fans import ConditionReport
from .lattice import (
    IntMatrix,
    Vector,
    hermite_normal_form,
    integer_kernel,
    kernel_basis,
    mat_inverse,
    mat_rank,
    mat_rref,
)


def _frac(x) -> Fraction:
    if hasattr(x, "D"):
        if x.b != 0:
            raise DegenerateInputError("irrational entry in monodromy data")
        return Fraction(x.a)
    return Fraction(x)


def _mat(rows) -> tuple:
    out = tuple(tuple(_frac(x) for x in row) for row in rows)
    d = len(out)
    if any(len(row) != d for row in out):
        raise DegenerateInputError("operators must be square matrices")
    return out


def _identity(d: int) -> tuple:
    return tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(d)) for i in range(d))


def _mat_mul(A, B) -> tuple:
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
        for i in range(len(A))
    )


def _mat_add(A, B) -> tuple:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _mat_scale(A, c) -> tuple:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in A)


def _mat_pow(A, k: int) -> tuple:
    out = _identity(len(A))
    for _ in range(k):
        out = _mat_mul(out, A)
    return out


def _is_zero(A) -> bool:
    return all(x == 0 for row in A for x in row)


def _apply(A, v) -> tuple:
    return tuple(sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A)))


# -- logarithm and minimal polynomial -------------------------------------------


def minimal_polynomial(T) -> list:
    """Monic minimal polynomial, coefficients ascending."""
    T = _mat(T)
    d = len(T)
    power = _identity(d)
    flat_rows = []
    for _ in range(d + 1):
        flat = [x for row in power for x in row]
        rows = flat_rows + [flat]
        if mat_rank([list(r) for r in rows]) < len(rows):
            coeffs = _solve_dependency(flat_rows, flat)
            return [-c for c in coeffs] + [Fraction(1)]
        flat_rows.append(flat)
        power = _mat_mul(power, T)
    raise DegenerateInputError("no minimal polynomial found")  # unreachable


def _solve_dependency(rows, target) -> list:
    """Coefficients expressing target as a combination of the given rows."""
    n = len(rows)
    aug = [[rows[i][j] for i in range(n)] for j in range(len(target))]
    from .lattice import solve_linear

    sol = solve_linear(aug, list(target))
    if sol is None:
        raise DegenerateInputError("dependency solve failed")
    return [Fraction(x) for x in sol]


def _poly_eval(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divide_linear_root_one(p) -> list:
    """Divide p by (x - 1); requires p(1) == 0."""
    out = [Fraction(0)] * (len(p) - 1)
    carry = Fraction(0)
    for k in range(len(p) - 1, 0, -1):
        carry = p[k] + carry
        out[k - 1] = carry
    return out


def _poly_str(p) -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = "x"
        else:
            mono = f"x^{k}"
        mag = abs(c)
        coeff = "" if (mag == 1 and mono) else str(mag) + ("*" if mono else "")
        piece = coeff + mono
        if not terms:
            terms.append(("-" if c < 0 else "") + piece)
        else:
            terms.append(("- " if c < 0 else "+ ") + piece)
    return " ".join(terms) if terms else "0"


def unipotent_log(T) -> tuple:
    """Exact logarithm of a unipotent operator.

    Raises NotUnipotentError naming the minimal-polynomial factor left after
    removing every (x - 1); verifies exp(log T) == T before returning.
    """
    T = _mat(T)
    d = len(T)
    Nil = _mat_add(T, _mat_scale(_identity(d), -1))
    power = Nil
    k = 1
    while k <= d and not _is_zero(power):
        power = _mat_mul(power, Nil)
        k += 1
    if not _is_zero(power):
        p = minimal_polynomial(T)
        while len(p) > 1 and _poly_eval(p, Fraction(1)) == 0:
            p = _poly_divide_linear_root_one(p)
        raise NotUnipotentError(
            f"operator is not unipotent: minimal polynomial keeps the factor {_poly_str(p)}"
        )
    log = tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d))
    term = Nil
    j = 1
    while not _is_zero(term):
        log = _mat_add(log, _mat_scale(term, Fraction((-1) ** (j + 1), j)))
        term = _mat_mul(term, Nil)
        j += 1
    if _mat_exp(log) != T:
        raise DegenerateInputError("logarithm verification failed")
    return log


def _mat_exp(N) -> tuple:
    d = len(N)
    out = _identity(d)
    term = _identity(d)
    j = 1
    while True:
        term = _mat_scale(_mat_mul(term, N), Fraction(1, j))
        if _is_zero(term):
            return out
        out = _mat_add(out, term)
        j += 1


# -- subspace helpers --------------------------------------------------------------


def _row_basis(rows) -> list:
    if not rows:
        return []
    rref, pivots = mat_rref([list(r) for r in rows])
    return [tuple(rref[i]) for i in range(len(pivots))]


def image_basis(A) -> list:
    cols = [tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0]))]
    return _row_basis(cols)


def kernel_of(A) -> list:
    return [tuple(v) for v in kernel_basis([list(r) for r in A])]


def span_intersection(basis_a, basis_b) -> list:
    """Basis of the intersection of two spans."""
    if not basis_a or not basis_b:
        return []
    d = len(basis_a[0])
    stacked = [list(r) for r in basis_a] + [[-x for x in r] for r in basis_b]
    transposed = [[stacked[i][j] for i in range(len(stacked))] for j in range(d)]
    combos = kernel_basis(transposed)
    vecs = []
    for y in combos:
        x = [Fraction(0)] * d
        for i, row in enumerate(basis_a):
            for j in range(d):
                x[j] += Fraction(y[i]) * row[j]
        if any(x):
            vecs.append(tuple(x))
    return _row_basis(vecs)


def weight_spaces(N, n: int) -> tuple:
    """Bases of the bottom pieces of the weight structure attached to a
    nilpotent operator of nilpotency degree n: image of N^n, image of
    N^(n-1) meeting ker N, image of N^(n-2) meeting ker N^2.  Powers with
    nonpositive exponent are read as the identity."""
    N = _mat(N)
    d = len(N)

    def power_image(k):
        if k <= 0:
            return _row_basis(_identity(d))
        return image_basis(_mat_pow(N, k))

    def power_kernel(k):
        return kernel_of(_mat_pow(N, k))

    w0 = power_image(n)
    w1 = span_intersection(power_image(n - 1), power_kernel(1))
    w2 = span_intersection(power_image(n - 2), power_kernel(2))
    return w0, w1, w2


# -- the maximal unipotency test ----------------------------------------------------


@dataclass(frozen=True)
class MonodromySet:
    """Commuting monodromy operators around the branches of a normal
    crossings boundary point."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(_mat(T) for T in self.operators)
        if not ops:
            raise DegenerateInputError("need at least one operator")
        d = len(ops[0])
        if any(len(T) != d for T in ops):
            raise DegenerateInputError("operators must share a dimension")
        object.__setattr__(self, "operators", ops)

    @property
    def r(self) -> int:
        return len(self.operators)

    @property
    def dim(self) -> int:
        return len(self.operators[0])

    def commuting(self) -> bool:
        ops = self.operators
        return all(
            _mat_mul(ops[i], ops[j]) == _mat_mul(ops[j], ops[i])
            for i in range(len(ops))
            for j in range(i + 1, len(ops))
        )

    def logs(self) -> tuple:
        return tuple(unipotent_log(T) for T in self.operators)


@dataclass
class MaxUnipotencyReport:
    conditions: list
    weight: int | None
    dims: dict = field(default_factory=dict)
    draws: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionReport:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        head = f"weight {self.weight}, dims {self.dims}, {self.draws} draws"
        lines = [head]
        lines += [
            f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.details}"
            for c in self.conditions
        ]
        return "\n".join(lines)


def combined_log(logs, a) -> tuple:
    N = _mat_scale(logs[0], a[0])
    for c, L in zip(a[1:], logs[1:]):
        N = _mat_add(N, _mat_scale(L, c))
    return N


def is_maximally_unipotent(
    operators, weight: int | None = None, draws: int = 20, seed: int = 7
) -> MaxUnipotencyReport:
    """Three conditions, checked for a = (1,...,1) and for ``draws`` random
    positive integer combinations N_a of the logs:

    1. the operators commute and every one is unipotent;
    2. the two bottom weight pieces of N_a are lines, with the nilpotency
       degree equal to the expected weight for every draw;
    3. the piece above them has dimension r + 1, so the coordinate count
       matches the number of operators, and the pairing matrix m of the
       adapted basis is invertible.
    """
    mset = operators if isinstance(operators, MonodromySet) else MonodromySet(tuple(operators))
    conds = []
    commuting = mset.commuting()
    try:
        logs = mset.logs()
        unip_detail = "all operators unipotent"
        unip_ok = True
    except NotUnipotentError as e:
        logs = None
        unip_ok = False
        unip_detail = str(e)
    conds.append(
        ConditionReport(
            "commuting-unipotent",
            commuting and unip_ok,
            unip_detail if not unip_ok else ("operators commute, " + unip_detail),
        )
    )
    if logs is None or not commuting:
        return MaxUnipotencyReport(
            conds
            + [
                ConditionReport("bottom-weight", False, "skipped"),
                ConditionReport("coordinate-count", False, "skipped"),
            ],
            None,
        )

    rng = random.Random(seed)
    samples = [tuple([1] * mset.r)]
    for _ in range(draws):
        samples.append(tuple(rng.randint(1, 9) for _ in range(mset.r)))

    weights = set()
    dims0, dims1, dims2 = set(), set(), set()
    for a in samples:
        N = combined_log(logs, a)
        n = 0
        power = _identity(mset.dim)
        while True:
            nxt = _mat_mul(power, N)
            if _is_zero(nxt):
                break
            power = nxt
            n += 1
        weights.add(n)
        w0, w1, w2 = weight_spaces(N, n)
        dims0.add(len(w0))
        dims1.add(len(w1))
        dims2.add(len(w2))

    stable = len(weights) == 1 and len(dims0) == 1 and len(dims1) == 1 and len(dims2) == 1
    n_obs = max(weights)
    weight_ok = weight is None or (weights == {weight})
    d0 = max(dims0)
    d1 = max(dims1)
    d2 = max(dims2)
    conds.append(
        ConditionReport(
            "bottom-weight",
            stable and weight_ok and d0 == 1 and d1 == 1,
            f"nilpotency degree {sorted(weights)}, dim W0 {sorted(dims0)}, "
            f"dim W1 {sorted(dims1)} over {len(samples)} draws",
        )
    )
    lines_ok = stable and d0 == 1 and d1 == 1 and d2 == mset.r + 1
    m_ok = False
    m_detail = "pairing matrix not computed"
    if lines_ok:
        try:
            g0, gs = integral_normalization(mset)
            m = m_matrix(logs, tuple(g0.as_fractions()), [g.as_fractions() for g in gs])
            m_ok = mat_inverse([list(row) for row in m]) is not None
            m_detail = (
                "pairing matrix m invertible" if m_ok else "pairing matrix m is singular"
            )
        except DegenerateInputError as e:
            m_detail = str(e)
    conds.append(
        ConditionReport(
            "coordinate-count",
            stable and d2 == mset.r + 1 and m_ok,
            f"dim W2 {sorted(dims2)}, expected {mset.r + 1}; {m_detail}",
        )
    )
    return MaxUnipotencyReport(
        conds,
        n_obs,
        {"W0": d0, "W1": d1, "W2": d2},
        len(samples),
    )


# -- adapted integral basis -----------------------------------------------------------


def integral_normalization(operators) -> tuple:
    """Adapted integral basis (g0, (g1..gr)) for a maximally unipotent set.

    g0 is the primitive integral generator of the bottom weight line, sign
    normalized; the gk complete it to a basis of the saturated lattice of
    vectors that every log operator sends into the g0 line, reduced to
    Hermite form.
    """
    mset = operators if isinstance(operators, MonodromySet) else MonodromySet(tuple(operators))
    logs = mset.logs()
    d = mset.dim
    N1 = combined_log(logs, tuple([1] * mset.r))
    n = 0
    power = _identity(d)
    while not _is_zero(_mat_mul(power, N1)):
        power = _mat_mul(power, N1)
        n += 1
    w0 = weight_spaces(N1, n)[0]
    if len(w0) != 1:
        raise DegenerateInputError("bottom weight piece is not a line")
    g0 = _primitive_integer(w0[0])

    # lattice of v with N_j v in the g0 line, as constraints against a
    # rational complement of g0
    complement = _complement_functionals(g0)
    constraint_rows = []
    for L in logs:
        for func in complement:
            constraint_rows.append(
                tuple(sum(func[i] * L[i][j] for i in range(d)) for j in range(d))
            )
    den = lcm(*(x.denominator for row in constraint_rows for x in row))
    int_rows = [tuple(int(x * den) for x in row) for row in constraint_rows]
    if any(any(r) for r in int_rows):
        basis_rows = [tuple(v) for v in integer_kernel(IntMatrix(int_rows))]
    else:
        basis_rows = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    if len(basis_rows) != mset.r + 1:
        raise DegenerateInputError(
            f"adapted lattice has rank {len(basis_rows)}, expected {mset.r + 1}"
        )
    # rewrite so g0 is the first basis vector, then Hermite-reduce the rest
    coords = _integer_coordinates(basis_rows, g0)
    U = _complete_unimodular(coords)
    new_basis = [
        tuple(sum(U[i][k] * basis_rows[k][j] for k in range(len(basis_rows))) for j in range(d))
        for i in range(len(basis_rows))
    ]
    assert new_basis[0] == tuple(g0) or new_basis[0] == tuple(-x for x in g0)
    if new_basis[0] != tuple(g0):
        new_basis[0] = tuple(-x for x in new_basis[0])
    H, _ = hermite_normal_form(IntMatrix([tuple(r) for r in new_basis[1:]]))
    rest = [row for row in H.rows if any(row)]
    return Vector(g0), tuple(Vector(r) for r in rest)


def _primitive_integer(vec) -> tuple:
    den = lcm(*(Fraction(x).denominator for x in vec))
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            return tuple(ints) if x > 0 else tuple(-y for y in ints)
    raise DegenerateInputError("zero vector cannot be normalized")


def _complement_functionals(g0) -> list:
    """Rational functionals vanishing nowhere jointly except along g0."""
    d = len(g0)
    pivot = next(i for i, x in enumerate(g0) if x != 0)
    out = []
    for i in range(d):
        if i == pivot:
            continue
        func = [Fraction(0)] * d
        func[i] = Fraction(1)
        func[pivot] = Fraction(-g0[i], g0[pivot])
        out.append(tuple(func))
    return out


def _integer_coordinates(basis_rows, target) -> tuple:
    from .lattice import solve_linear

    cols = [[Fraction(basis_rows[k][j]) for k in range(len(basis_rows))] for j in range(len(target))]
    sol = solve_linear(cols, [Fraction(x) for x in target])
    if sol is None or any(Fraction(x).denominator != 1 for x in sol):
        raise DegenerateInputError("bottom vector is not in the adapted lattice")
    return tuple(int(x) for x in sol)


def _complete_unimodular(coords) -> list:
    """Unimodular matrix whose first row is the given primitive vector."""
    from .lattice import complete_to_basis

    M = complete_to_basis([tuple(coords)], len(coords))
    return [list(row) for row in M.rows]


# -- quasi-canonical coordinates ---------------------------------------------------------


def m_matrix(logs, g0, gs) -> list:
    """Pairing matrix m[j][k] with N_j g^k = m[j][k] g0."""
    out = []
    for L in logs:
        row = []
        for g in gs:
            img = _apply(L, tuple(_frac(x) for x in g))
            coeff = _multiple_of(img, g0)
            row.append(coeff)
        out.append(row)
    return out


def _multiple_of(vec, g0) -> Fraction:
    coeff = None
    for x, y in zip(vec, g0):
        y = _frac(y)
        if y == 0:
            if x != 0:
                raise DegenerateInputError("vector is not a multiple of the bottom vector")
            continue
        c = _frac(x) / y
        if coeff is None:
            coeff = c
        elif coeff != c:
            raise DegenerateInputError("vector is not a multiple of the bottom vector")
    return coeff if coeff is not None else Fraction(0)


def _poly_add(a, b) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
        if out[k] == 0:
            del out[k]
    return out


def _poly_scale(a, c) -> dict:
    c = Fraction(c)
    return {k: c * v for k, v in a.items() if c * v != 0}


def _poly_mul(a, b, cap) -> dict:
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if sum(k) > cap:
                continue
            out[k] = out.get(k, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _poly_inverse(a, r, cap) -> dict:
    zero = tuple([0] * r)
    c0 = a.get(zero, Fraction(0))
    if c0 == 0:
        raise DegenerateInputError("pairing against the bottom vector vanishes at the origin")
    u = _poly_scale(_poly_add(a, {zero: -c0}), Fraction(1, c0))
    inv = {zero: Fraction(1)}
    term = {zero: Fraction(1)}
    for _ in range(cap):
        term = _poly_scale(_poly_mul(term, u, cap), -1)
        if not term:
            break
        inv = _poly_add(inv, term)
    return _poly_scale(inv, Fraction(1, c0))


@dataclass(frozen=True)
class QuasiCanonicalCoordinates:
    """Coordinates f_j = z_j + c_j + rho_j.

    ``fs`` holds the full polynomials keyed by exponent tuples; ``exact`` is
    set when no truncation was needed; ``degenerate`` is set when some
    linear part is not exactly z_j, with the offending coefficients kept for
    inspection."""

    fs: tuple
    constants: tuple
    remainders: tuple
    m: tuple
    exact: bool
    degenerate: bool
    linear_parts: tuple
    order: int

    def q_descriptions(self) -> tuple:
        out = []
        for j, c in enumerate(self.constants):
            parts = []
            for k, a in enumerate(self.linear_parts[j]):
                if a == 0:
                    continue
                var = f"z_{k+1}"
                if a == 1:
                    parts.append(f"+ {var}" if parts else var)
                elif a == -1:
                    parts.append(f"- {var}" if parts else f"-{var}")
                else:
                    parts.append(f"+ {a}*{var}" if parts and a > 0 else f"{a}*{var}")
            linear = " ".join(parts) if parts else "0"
            shift = "" if c == 0 else f" + {c}" if c > 0 else f" - {-c}"
            tail = " + ..." if any(self.remainders[j]) else ""
            out.append(f"q_{j+1} = exp(2*pi*i*({linear}{shift}{tail}))")
        return tuple(out)


def pairing(Q, g, w) -> Fraction:
    return sum(
        _frac(g[i]) * _frac(Q[i][j]) * _frac(w[j])
        for i in range(len(g))
        for j in range(len(w))
    )


def quasi_canonical_coordinates(
    operators, Q, omega0, basis=None, order: int = 6
) -> QuasiCanonicalCoordinates:
    """Coordinates from the pairings of an adapted basis against
    omega(z) = exp(sum z_j N_j) omega0.

    The caller supplies the pairing matrix Q; the adapted basis defaults to
    the integral normalization.  f_j collects the inverse pairing matrix
    against the numerator pairings, divided by the pairing with g0.
    """
    mset = operators if isinstance(operators, MonodromySet) else MonodromySet(tuple(operators))
    logs = mset.logs()
    r = mset.r
    if basis is None:
        basis = integral_normalization(mset)
    g0, gs = basis
    g0 = tuple(_frac(x) for x in g0)
    gs = [tuple(_frac(x) for x in g) for g in gs]
    if len(gs) != r:
        raise DegenerateInputError("adapted basis must have one vector per operator")
    m = m_matrix(logs, g0, gs)
    m_inv = mat_inverse([list(row) for row in m])
    if m_inv is None:
        raise DegenerateInputError("pairing matrix m is singular")

    # omega(z) up to total degree cap, as exponent -> vector
    omega0 = tuple(_frac(x) for x in omega0)
    zero = tuple([0] * r)
    level = {zero: omega0}
    omega = {zero: omega0}
    cap = order
    truncated = False
    for _deg in range(1, cap + 1):
        nxt = {}
        for expo, vec in level.items():
            for j in range(r):
                e2 = tuple(x + (1 if t == j else 0) for t, x in enumerate(expo))
                if e2 in nxt or e2 in omega:
                    continue
                img = _apply(logs[j], vec)
                if any(img):
                    nxt[e2] = img
        if not nxt:
            break
        for e2, vec in nxt.items():
            omega[e2] = vec
        level = nxt
    else:
        truncated = bool(level)

    # scalar polynomials <g | omega(z)>, with the 1/beta! weights
    def pairing_poly(g):
        out = {}
        for expo, vec in omega.items():
            w = Fraction(1)
            for e in expo:
                w /= factorial(e)
            val = pairing(Q, g, vec) * w
            if val != 0:
                out[expo] = val
        return out

    denom = pairing_poly(g0)
    numers = [pairing_poly(g) for g in gs]
    denom_inv = _poly_inverse(denom, r, cap)
    exact = not truncated and len(denom) == 1
    fs = []
    for j in range(r):
        total = {}
        for k in range(r):
            coeff = m_inv[k][j]
            if coeff == 0:
                continue
            total = _poly_add(total, _poly_scale(numers[k], coeff))
        fs.append(_poly_mul(total, denom_inv, cap))
    constants, remainders, linear_parts = [], [], []
    degenerate = False
    for j, f in enumerate(fs):
        constants.append(f.get(zero, Fraction(0)))
        lin = tuple(
            f.get(tuple(1 if t == i else 0 for t in range(r)), Fraction(0)) for i in range(r)
        )
        linear_parts.append(lin)
        expect = tuple(Fraction(1) if i == j else Fraction(0) for i in range(r))
        if lin != expect:
            degenerate = True
        rem = {k: v for k, v in f.items() if sum(k) >= 2}
        remainders.append(rem)
    return QuasiCanonicalCoordinates(
        tuple(fs),
        tuple(constants),
        tuple(remainders),
        tuple(tuple(row) for row in m),
        exact,
        degenerate,
        tuple(linear_parts),
        cap,
    )

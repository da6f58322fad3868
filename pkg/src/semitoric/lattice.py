"""Exact scalars, integer matrices and rational polyhedral cones.

Scalars live in Q or in a fixed real quadratic field Q(sqrt(D)); all
arithmetic and sign decisions are exact.  Cones are given by finitely many
generators and carry a closed / relative-interior interpretation flag.
Facet enumeration is done by brute force over generator subsets, which is
adequate for ambient rank up to 4 (the supported bound).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import (
    DegenerateInputError,
    MixedDiscriminantError,
    RequiresRationalConeError,
    UnsupportedRankError,
)

MAX_CONE_RANK = 4


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _cmp_int_vs_sqrt(y: int, q: int, d: int) -> int:
    """Sign of y - q*sqrt(d) for integers y, q and squarefree d >= 2."""
    rhs_sign = (q > 0) - (q < 0)
    lhs_sign = (y > 0) - (y < 0)
    if lhs_sign != rhs_sign:
        if lhs_sign == rhs_sign == 0:
            return 0
        return 1 if lhs_sign > rhs_sign else -1
    if lhs_sign == 0:
        return 0
    # same nonzero sign: compare squares (sqrt(d) irrational, so never equal)
    diff = y * y - q * q * d
    if lhs_sign > 0:
        return 1 if diff > 0 else -1
    return 1 if diff < 0 else -1


class ExactScalar:
    """Element a + b*sqrt(D) with rational a, b; purely rational when b == 0."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a=0, b=0, D=None):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            D = None
        else:
            if D is None:
                raise MixedDiscriminantError("irrational part without a discriminant")
            if not isinstance(D, int) or D < 2 or not is_squarefree(D):
                raise DegenerateInputError(f"discriminant must be squarefree >= 2, got {D!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- coercion -----------------------------------------------------------

    @staticmethod
    def lift(x, D=None) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        return ExactScalar(Fraction(x), 0, None)

    def _join(self, other) -> "tuple[ExactScalar, ExactScalar]":
        other = ExactScalar.lift(other)
        if self.D is not None and other.D is not None and self.D != other.D:
            raise MixedDiscriminantError(
                f"cannot mix sqrt({self.D}) with sqrt({other.D})"
            )
        return self, other

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        s, o = self._join(other)
        return ExactScalar(s.a + o.a, s.b + o.b, s.D or o.D)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-ExactScalar.lift(other))

    def __rsub__(self, other):
        return ExactScalar.lift(other) - self

    def __mul__(self, other):
        s, o = self._join(other)
        D = s.D or o.D
        a = s.a * o.a + (s.b * o.b * D if D is not None else 0)
        b = s.a * o.b + s.b * o.a
        return ExactScalar(a, b, D)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.D is None:
            return ExactScalar(1 / self.a)
        n = self.norm()
        return ExactScalar(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        s, o = self._join(other)
        return s * o.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.lift(other) / self

    # -- field-theoretic data -----------------------------------------------

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        """a^2 - b^2 D, the product of the two embeddings."""
        if self.D is None:
            return self.a * self.a
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.conjugate().sign() > 0

    # -- order --------------------------------------------------------------

    def sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        # sign of a + b sqrt(D): compare |a| against |b| sqrt(D)
        y = self.a.numerator * self.b.denominator
        q = -self.b.numerator * self.a.denominator
        return _cmp_int_vs_sqrt(y, q, self.D)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        try:
            s, o = self._join(other)
        except (TypeError, ValueError):
            return NotImplemented
        return s.a == o.a and s.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- rational access ----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise DegenerateInputError(f"{self} is irrational")
        return self.a

    def floor(self) -> int:
        if self.b == 0:
            return self.a.numerator // self.a.denominator
        r = self.a.denominator * self.b.denominator // math.gcd(
            self.a.denominator, self.b.denominator
        )
        P = self.a.numerator * (r // self.a.denominator)
        Q = self.b.numerator * (r // self.b.denominator)
        # value = (P + Q sqrt(D)) / r; bracket Q sqrt(D) between integers
        t = math.isqrt(Q * Q * self.D)
        if Q > 0:
            k = (P + t) // r
        else:
            k = (P - t - 1) // r
        # adjust: floor = max { k : k*r - P <= Q sqrt(D) }
        while _cmp_int_vs_sqrt((k + 1) * r - P, Q, self.D) <= 0:
            k += 1
        while _cmp_int_vs_sqrt(k * r - P, Q, self.D) > 0:
            k -= 1
        return k

    def ceil(self) -> int:
        return -((-self).floor())

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        head = "" if self.a == 0 else f"{self.a}"
        coef = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        tail = f"{coef}sqrt({self.D})"
        if self.a == 0:
            return tail if self.b > 0 else f"-{tail}"
        return f"{head}{'+' if self.b > 0 else '-'}{tail}"


ZERO = ExactScalar(0)
ONE = ExactScalar(1)


class Vector:
    """Immutable vector of ExactScalar entries."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        object.__setattr__(
            self, "entries", tuple(ExactScalar.lift(e) for e in entries)
        )

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other):
        return Vector(x + y for x, y in zip(self.entries, other.entries))

    def __sub__(self, other):
        return Vector(x - y for x, y in zip(self.entries, other.entries))

    def __neg__(self):
        return Vector(-x for x in self.entries)

    def scale(self, c) -> "Vector":
        c = ExactScalar.lift(c)
        return Vector(c * x for x in self.entries)

    def dot(self, other) -> ExactScalar:
        acc = ZERO
        for x, y in zip(self.entries, other.entries):
            acc = acc + x * y
        return acc

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    @property
    def is_rational(self) -> bool:
        return all(e.is_rational for e in self.entries)

    def as_fractions(self) -> tuple:
        return tuple(e.as_fraction() for e in self.entries)

    def as_integers(self) -> tuple:
        out = []
        for e in self.entries:
            f = e.as_fraction()
            if f.denominator != 1:
                raise DegenerateInputError(f"{self} is not integral")
            out.append(f.numerator)
        return tuple(out)

    def primitive(self) -> "Vector":
        """Canonical representative of the positive ray through this vector.

        Rational vectors scale to primitive integer vectors; irrational ones
        scale so the first nonzero entry is +-1.  Only positive scalings are
        used, so the ray direction is preserved.
        """
        if self.is_zero:
            return self
        if self.is_rational:
            fr = self.as_fractions()
            den = 1
            for f in fr:
                den = den * f.denominator // math.gcd(den, f.denominator)
            ints = [f.numerator * (den // f.denominator) for f in fr]
            g = 0
            for v in ints:
                g = math.gcd(g, v)
            return Vector(Fraction(v, g) for v in ints)
        for e in self.entries:
            if e:
                return self.scale(abs(e).inverse())
        return self

    def key(self):
        return tuple((e.a, e.b, e.D) for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "(" + ", ".join(repr(e) for e in self.entries) + ")"


def as_vector(v, rank=None) -> Vector:
    vec = v if isinstance(v, Vector) else Vector(v)
    if rank is not None and vec.rank != rank:
        raise DegenerateInputError(f"expected rank {rank}, got vector of rank {vec.rank}")
    return vec


class IntMatrix:
    """Immutable integer matrix with arbitrary-precision entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        mat = tuple(tuple(int(x) for x in row) for row in rows)
        if mat and any(len(r) != len(mat[0]) for r in mat):
            raise DegenerateInputError("ragged matrix")
        object.__setattr__(self, "rows", mat)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, i):
        return self.rows[i]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.rows))) if self.rows else IntMatrix([])

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            bt = list(zip(*other.rows))
            return IntMatrix(
                [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.rows]
            )
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def apply(self, v: Vector) -> Vector:
        return Vector(
            sum((ExactScalar.lift(c) * x for c, x in zip(row, v)), start=ZERO)
            for row in self.rows
        )

    def apply_int(self, v) -> tuple:
        return tuple(sum(c * x for c, x in zip(row, v)) for row in self.rows)

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise DegenerateInputError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        # Bareiss fraction-free elimination
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.nrows == self.ncols and self.det() in (1, -1)

    def inverse_unimodular(self) -> "IntMatrix":
        d = self.det()
        if d not in (1, -1):
            raise DegenerateInputError(f"matrix has determinant {d}, not a lattice automorphism")
        n = self.nrows
        inv = mat_inverse([[Fraction(x) for x in row] for row in self.rows])
        return IntMatrix([[int(x) for x in row] for row in inv])

    def power(self, k: int) -> "IntMatrix":
        base = self if k >= 0 else self.inverse_unimodular()
        k = abs(k)
        out = IntMatrix.identity(self.nrows)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return "IntMatrix(" + repr([list(r) for r in self.rows]) + ")"


# -- generic exact linear algebra (works over Fraction and ExactScalar) ------


def mat_rref(rows):
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c] ** -1 if isinstance(m[r][c], Fraction) else m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def mat_rank(rows) -> int:
    return len(mat_rref(rows)[1])


def kernel_basis(rows, ncols=None):
    """Basis of the right kernel {x : rows . x = 0} over the field."""
    if not rows:
        if ncols is None:
            raise DegenerateInputError("kernel of an empty matrix needs ncols")
        zero, one = _zero_one_like(Fraction(1))
        return [
            [one if i == j else zero for i in range(ncols)] for j in range(ncols)
        ]
    ncols = len(rows[0])
    zero, one = _zero_one_like(rows[0][0])
    rref, pivots = mat_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, p in enumerate(pivots):
            vec[p] = -rref[r][f]
        basis.append(vec)
    return basis


def _zero_one_like(sample):
    if isinstance(sample, ExactScalar):
        return ZERO, ONE
    return Fraction(0), Fraction(1)


def mat_mul(A, B):
    bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in A]


def mat_vec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def mat_inverse(A):
    """Inverse of a square matrix over Fraction; None if singular."""
    n = len(A)
    zero, one = _zero_one_like(A[0][0]) if n else (Fraction(0), Fraction(1))
    aug = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    rref, pivots = mat_rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in rref[:n]]


def solve_linear(A, b):
    """One solution x of A x = b over the field, or None."""
    if not A:
        return None
    n = len(A[0])
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    rref, pivots = mat_rref(aug)
    if n in pivots:
        return None
    zero, one = _zero_one_like(A[0][0])
    x = [zero] * n
    for r, p in enumerate(pivots):
        x[p] = rref[r][n]
    return x


# -- integer normal forms -----------------------------------------------------


def hermite_normal_form(M: IntMatrix):
    """Row-style Hermite normal form.

    Returns (H, U) with H = U * M, U unimodular, pivots positive, and entries
    above each pivot reduced into [0, pivot).
    """
    if M.nrows == 0 or M.ncols == 0 or all(all(x == 0 for x in r) for r in M.rows):
        raise DegenerateInputError("Hermite form of a zero or empty matrix")
    h = [list(r) for r in M.rows]
    u = [[1 if i == j else 0 for j in range(M.nrows)] for i in range(M.nrows)]
    row = 0
    for col in range(M.ncols):
        # clear below (row) in this column by gcd row operations
        while True:
            idx = [i for i in range(row, len(h)) if h[i][col] != 0]
            if not idx:
                break
            i0 = min(idx, key=lambda i: abs(h[i][col]))
            if i0 != row:
                h[row], h[i0] = h[i0], h[row]
                u[row], u[i0] = u[i0], u[row]
            done = True
            for i in range(row + 1, len(h)):
                if h[i][col] != 0:
                    q = h[i][col] // h[row][col]
                    h[i] = [a - q * b for a, b in zip(h[i], h[row])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[row])]
                    if h[i][col] != 0:
                        done = False
            if done:
                break
        if row < len(h) and h[row][col] != 0:
            if h[row][col] < 0:
                h[row] = [-a for a in h[row]]
                u[row] = [-a for a in u[row]]
            for i in range(row):
                q = h[i][col] // h[row][col]
                if q:
                    h[i] = [a - q * b for a, b in zip(h[i], h[row])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[row])]
            row += 1
            if row == len(h):
                break
    return IntMatrix(h), IntMatrix(u)


def smith_normal_form(M: IntMatrix):
    """Smith normal form.  Returns (D, U, V) with D = U * M * V diagonal,
    each diagonal entry nonnegative and dividing the next."""
    a = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot in the remaining block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0:
                    if piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            reduced = True
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        reduced = False
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        reduced = False
            if reduced:
                break
        # divisibility: pivot must divide the rest of the block
        fixed = True
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    add_row(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            t += 1
    return IntMatrix(a), IntMatrix(u), IntMatrix(v)


def elementary_divisors(M: IntMatrix) -> list:
    d, _, _ = smith_normal_form(M)
    out = []
    for i in range(min(d.nrows, d.ncols)):
        if d[i][i] != 0:
            out.append(d[i][i])
    return out


def integer_kernel(M: IntMatrix) -> list:
    """Basis of {x in Z^ncols : M x = 0} (saturated by construction)."""
    h, u = hermite_normal_form(M.transpose())
    out = []
    for i, row in enumerate(h.rows):
        if all(x == 0 for x in row):
            out.append(tuple(u[i]))
    return out


def complete_to_basis(vectors, rank: int) -> IntMatrix:
    """Unimodular matrix whose first rows are the given saturated integer rows."""
    vectors = [
        v.as_integers() if isinstance(v, Vector) else tuple(int(x) for x in v)
        for v in vectors
    ]
    G = IntMatrix(vectors)
    d, u, v = smith_normal_form(G)
    k = G.nrows
    for i in range(k):
        if d[i][i] != 1:
            raise DegenerateInputError("rows are not part of a lattice basis")
    vinv = v.inverse_unimodular()
    rows = [list(r) for r in vectors]
    for i in range(k, rank):
        rows.append(list(vinv[i]))
    B = IntMatrix(rows)
    if not B.is_unimodular():
        raise DegenerateInputError("basis completion failed")
    return B


# -- cones --------------------------------------------------------------------


class Cone:
    """Finitely generated convex cone, interpreted closed or as its relative
    interior according to the ``relint`` flag.

    Generators are reduced to a canonical minimal set on construction
    (primitive representatives of the extremal rays, sorted), so equality and
    hashing are structural for strongly convex cones.
    """

    __slots__ = ("rank", "generators", "relint", "_dual")

    def __init__(self, rank, generators, relint=False, _reduce=True):
        rank = int(rank)
        if rank > MAX_CONE_RANK:
            raise UnsupportedRankError(
                f"cones support rank <= {MAX_CONE_RANK}, got {rank}"
            )
        gens = []
        seen = set()
        for g in generators:
            v = as_vector(g, rank).primitive()
            if v.is_zero:
                continue
            if v.key() in seen:
                continue
            seen.add(v.key())
            gens.append(v)
        if _reduce:
            gens = _extremal_subset(gens, rank)
        gens.sort(key=Vector.key)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "relint", bool(relint))
        object.__setattr__(self, "_dual", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    # -- basic structure ----------------------------------------------------

    def dim(self) -> int:
        if not self.generators:
            return 0
        return mat_rank([list(g) for g in self.generators])

    @property
    def is_rational(self) -> bool:
        return all(g.is_rational for g in self.generators)

    def dual_description(self):
        """(facet normals, span equations): the closure is the set of x with
        <n, x> >= 0 for every normal and <e, x> = 0 for every equation."""
        if self._dual is None:
            desc = _dual_description(self.generators, self.rank)
            object.__setattr__(self, "_dual", desc)
        return self._dual

    def closure(self) -> "Cone":
        return self if not self.relint else Cone(self.rank, self.generators, relint=False, _reduce=False)

    def relative_interior(self) -> "Cone":
        return self if self.relint else Cone(self.rank, self.generators, relint=True, _reduce=False)

    def contains(self, v, relint=None) -> bool:
        v = as_vector(v, self.rank)
        strict = self.relint if relint is None else relint
        normals, equations = self.dual_description()
        if any(e.dot(v) for e in equations):
            return False
        if strict:
            if not self.generators:
                return v.is_zero
            return all(n.dot(v).sign() > 0 for n in normals)
        return all(n.dot(v).sign() >= 0 for n in normals)

    def interior_sample(self) -> Vector:
        """A point of the relative interior (the sum of the generators)."""
        if not self.generators:
            return Vector([0] * self.rank)
        acc = self.generators[0]
        for g in self.generators[1:]:
            acc = acc + g
        return acc

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.relint == other.relint
            and self.generators == other.generators
        )

    def same_rays(self, other) -> bool:
        return self.rank == other.rank and self.generators == other.generators

    def __hash__(self):
        return hash((self.rank, self.relint, self.generators))

    def __repr__(self):
        tag = "relint " if self.relint else ""
        return f"Cone({tag}rank={self.rank}, gens={list(self.generators)})"


def _extremal_subset(gens, rank):
    """Drop generators lying in the cone of the others."""
    if len(gens) <= 1:
        return list(gens)
    if len(gens) <= rank and mat_rank([list(g) for g in gens]) == len(gens):
        return list(gens)  # simplicial: every generator is extremal
    out = list(gens)
    changed = True
    while changed:
        changed = False
        for i in range(len(out)):
            rest = out[:i] + out[i + 1 :]
            if _cone_membership(out[i], rest, rank):
                out.pop(i)
                changed = True
                break
    return out


def _cone_membership(v, gens, rank) -> bool:
    normals, equations = _dual_description(tuple(gens), rank)
    if any(e.dot(v) for e in equations):
        return False
    return all(n.dot(v).sign() >= 0 for n in normals)


def _dual_description(gens, rank):
    """Facet normals and span equations for cone(gens) in ambient ``rank``."""
    if rank > MAX_CONE_RANK:
        raise UnsupportedRankError(
            f"facet enumeration supports rank <= {MAX_CONE_RANK}, got {rank}"
        )
    gens = [as_vector(g, rank) for g in gens if not as_vector(g, rank).is_zero]
    rows = [list(g) for g in gens]
    equations = [Vector(k).primitive() for k in kernel_basis(rows, ncols=rank)]
    d = rank - len(equations)
    if d == 0:
        return (), tuple(equations)
    normals = []
    seen = set()
    eq_rows = [list(e) for e in equations]
    for subset in combinations(range(len(gens)), d - 1):
        sys_rows = [rows[i] for i in subset] + eq_rows
        kern = kernel_basis(sys_rows, ncols=rank)
        if len(kern) != 1:
            continue
        n = Vector(kern[0]).primitive()
        signs = [n.dot(g).sign() for g in gens]
        if all(s >= 0 for s in signs):
            pass
        elif all(s <= 0 for s in signs):
            n = (-n).primitive()
        else:
            continue
        if n.key() not in seen:
            seen.add(n.key())
            normals.append(n)
    normals.sort(key=Vector.key)
    return tuple(normals), tuple(equations)


def cone_from_inequalities(normals, equations, rank: int) -> Cone:
    """Closed cone {x : <n,x> >= 0, <e,x> = 0} via double duality."""
    dual_gens = [as_vector(n, rank) for n in normals]
    for e in equations:
        e = as_vector(e, rank)
        dual_gens.append(e)
        dual_gens.append(-e)
    dn, de = _dual_description(tuple(dual_gens), rank)
    gens = list(dn)
    for e in de:
        gens.append(e)
        gens.append(-e)
    return Cone(rank, gens)


def cone_intersection(a: Cone, b: Cone) -> Cone:
    """Intersection of the closures of two cones in the same ambient rank."""
    if a.rank != b.rank:
        raise DegenerateInputError("cones live in different ambient ranks")
    na, ea = a.dual_description()
    nb, eb = b.dual_description()
    return cone_from_inequalities(list(na) + list(nb), list(ea) + list(eb), a.rank)


def is_strongly_convex(c: Cone) -> bool:
    """True iff the closure contains no line (equivalently, no nontrivial
    nonnegative combination of generators vanishes)."""
    normals, equations = c.dual_description()
    rows = [list(n) for n in normals] + [list(e) for e in equations]
    if not rows:
        return c.rank == 0
    return mat_rank(rows) == c.rank


def faces(c: Cone) -> list:
    """All faces of the closure (including {0} and the cone itself), as closed
    cones, sorted by dimension then generators.  Requires strong convexity."""
    if not is_strongly_convex(c):
        raise DegenerateInputError("face enumeration requires a strongly convex cone")
    start = c.closure()
    seen = {}
    stack = [start]
    while stack:
        cur = stack.pop()
        key = (cur.generators,)
        if key in seen:
            continue
        seen[key] = cur
        normals, _ = cur.dual_description()
        for n in normals:
            sub = [g for g in cur.generators if n.dot(g).sign() == 0]
            stack.append(Cone(c.rank, sub, _reduce=False))
    out = list(seen.values())
    out.sort(key=lambda f: (f.dim(), [g.key() for g in f.generators]))
    return out


def is_unimodular_part_of_basis(c: Cone, rank=None) -> bool:
    """True iff the minimal generators are primitive integer vectors that
    extend to a Z-basis (gcd of the maximal minors of the generator matrix
    is 1, and the generators are linearly independent)."""
    rank = c.rank if rank is None else rank
    if not c.generators:
        return True
    if not c.is_rational:
        raise RequiresRationalConeError("unimodularity needs rational generators")
    rows = []
    for g in c.generators:
        fr = g.as_fractions()
        if any(f.denominator != 1 for f in fr):
            return False
        rows.append([f.numerator for f in fr])
    k = len(rows)
    if mat_rank([[Fraction(x) for x in row] for row in rows]) != k:
        return False
    g = 0
    for cols in combinations(range(rank), k):
        minor = IntMatrix([[row[c_] for c_ in cols] for row in rows]).det()
        g = math.gcd(g, minor)
        if g == 1:
            return True
    return g == 1

"""Real quadratic fields: units, ideal bases, tube coordinates, cusp cones.

Elements of Q(sqrt(D)) are ExactScalar values.  The two real embeddings are
always ordered as (identity, conjugate); everything downstream relies on that
order staying fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateInputError, ResourceBoundError
from .lattice import Cone, ExactScalar, IntMatrix, Vector, is_squarefree, solve_linear

QuadNum = ExactScalar

PELL_BOUND = 10**8


def check_discriminant(D: int) -> int:
    if not isinstance(D, int) or D < 2 or not is_squarefree(D):
        raise DegenerateInputError(f"discriminant must be a squarefree integer >= 2, got {D!r}")
    return D


def sqrtD(D: int) -> QuadNum:
    return ExactScalar(0, 1, check_discriminant(D))


def ring_basis(D: int) -> tuple:
    """Z-basis (1, w) of the maximal order: w = (1+sqrt(D))/2 if D = 1 mod 4,
    else w = sqrt(D)."""
    check_discriminant(D)
    if D % 4 == 1:
        w = ExactScalar(Fraction(1, 2), Fraction(1, 2), D)
    else:
        w = sqrtD(D)
    return ExactScalar(1), w


def fundamental_unit(D: int, bound: int = PELL_BOUND) -> QuadNum:
    """Smallest unit > 1 of the maximal order, by Pell search on the
    coefficient of sqrt(D).  Raises ResourceBoundError beyond ``bound``."""
    check_discriminant(D)
    if D % 4 == 1:
        # x = (p + q sqrt(D))/2 with p = q mod 2 and p^2 - D q^2 = +-4
        for q in range(1, bound + 1):
            for target in (D * q * q - 4, D * q * q + 4):
                if target < 0:
                    continue
                p = math.isqrt(target)
                if p * p == target and (p - q) % 2 == 0:
                    return ExactScalar(Fraction(p, 2), Fraction(q, 2), D)
    else:
        for q in range(1, bound + 1):
            for target in (D * q * q - 1, D * q * q + 1):
                p = math.isqrt(target)
                if p * p == target:
                    return ExactScalar(p, q, D)
    raise ResourceBoundError(
        f"no unit found for D={D} with sqrt coefficient <= {bound}"
    )


def fundamental_totally_positive_unit(D: int, bound: int = PELL_BOUND) -> QuadNum:
    """Smallest totally positive unit > 1: the fundamental unit if its norm
    is +1, else its square."""
    eps = fundamental_unit(D, bound)
    if eps.norm() == 1:
        return eps
    return eps * eps


@dataclass(frozen=True)
class QuadIdeal:
    """Fractional-ideal data: an ordered Z-basis (alpha, beta) of a rank-2
    module in Q(sqrt(D))."""

    alpha: QuadNum
    beta: QuadNum
    D: int

    def __post_init__(self):
        check_discriminant(self.D)
        for x in (self.alpha, self.beta):
            if x.D not in (None, self.D):
                raise DegenerateInputError("basis element from the wrong field")
        if not self.twist():
            raise DegenerateInputError(
                "basis is degenerate: alpha*beta' - alpha'*beta = 0"
            )

    def twist(self) -> QuadNum:
        return self.alpha * self.beta.conjugate() - self.alpha.conjugate() * self.beta

    def coordinates(self, x: QuadNum) -> tuple:
        """(c1, c2) in Q^2 with x = c1*alpha + c2*beta."""
        rows = [
            [self.alpha.a, self.beta.a],
            [self.alpha.b, self.beta.b],
        ]
        sol = solve_linear(rows, [ExactScalar.lift(x).a, ExactScalar.lift(x).b])
        if sol is None:
            raise DegenerateInputError(f"{x} is not in the span of the basis")
        return tuple(sol)

    def element(self, c1, c2) -> QuadNum:
        return ExactScalar.lift(c1) * self.alpha + ExactScalar.lift(c2) * self.beta

    @staticmethod
    def maximal_order(D: int) -> "QuadIdeal":
        one, w = ring_basis(D)
        return QuadIdeal(one, w, D)


def tube_coordinates(ideal: QuadIdeal):
    """Matrix of the coordinate change sending the embedding pair
    (x, x') of a module element to its integer coordinates in (alpha, beta):
    (w1, w2) |-> (beta'*w1 - beta*w2, -alpha'*w1 + alpha*w2) / (alpha*beta' - alpha'*beta).
    Returned as a 2x2 array of ExactScalar."""
    t = ideal.twist()
    ti = t.inverse()
    a, b = ideal.alpha, ideal.beta
    return (
        (b.conjugate() * ti, -b * ti),
        (-a.conjugate() * ti, a * ti),
    )


def cusp_cone(ideal: QuadIdeal) -> Cone:
    """Open cone C = {(y1, y2) : alpha y1 + beta y2 > 0, alpha' y1 + beta' y2 > 0}
    in the tube coordinate plane, returned as a relative interior."""
    a, b = ideal.alpha, ideal.beta
    n1 = Vector([a, b])
    n2 = Vector([a.conjugate(), b.conjugate()])
    # edge directions: orthogonal to one normal, positive on the other
    g1 = Vector([b.conjugate(), -a.conjugate()])
    if n1.dot(g1).sign() < 0:
        g1 = -g1
    g2 = Vector([b, -a])
    if n2.dot(g2).sign() < 0:
        g2 = -g2
    cone = Cone(2, [g1, g2], relint=True)
    if cone.dim() != 2:
        raise DegenerateInputError("cusp cone is degenerate")
    return cone


def cusp_cone_normals(ideal: QuadIdeal) -> tuple:
    a, b = ideal.alpha, ideal.beta
    return (
        Vector([a, b]),
        Vector([a.conjugate(), b.conjugate()]),
    )


@dataclass(frozen=True)
class CuspData:
    """A cusp: module basis plus a totally positive unit stabilizing it."""

    ideal: QuadIdeal
    unit: QuadNum

    def __post_init__(self):
        eps = self.unit
        if eps.norm() != 1:
            raise DegenerateInputError(f"unit must have norm +1, got norm {eps.norm()}")
        if not eps.is_totally_positive():
            raise DegenerateInputError("unit must be totally positive")
        if eps == ExactScalar(1):
            raise DegenerateInputError("unit must differ from 1")
        # stabilization: eps * basis must stay in the Z-span of the basis
        self.unit_action()

    def unit_action(self) -> IntMatrix:
        """Matrix of multiplication by the unit on (alpha, beta) coordinates:
        column j holds the coordinates of unit * basis_j."""
        cols = []
        for x in (self.ideal.alpha, self.ideal.beta):
            c1, c2 = self.ideal.coordinates(self.unit * x)
            for c in (c1, c2):
                if c.denominator != 1:
                    raise DegenerateInputError(
                        "unit does not stabilize the module: non-integer action"
                    )
            cols.append((c1.numerator, c2.numerator))
        E = IntMatrix([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
        if E.det() != 1:
            raise DegenerateInputError("unit action must have determinant 1")
        return E

    @staticmethod
    def standard(D: int, bound: int = PELL_BOUND) -> "CuspData":
        """Maximal order with its fundamental totally positive unit."""
        return CuspData(
            QuadIdeal.maximal_order(D),
            fundamental_totally_positive_unit(D, bound),
        )

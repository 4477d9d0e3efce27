"""Exact scalars over Z/m and Q, plus Smith normal form over Z.

Integer matrices are plain lists of row lists.  Everything here is exact;
no floating point is ever involved.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonInvertible, TypeMismatch


@dataclass(frozen=True)
class BaseRing:
    """Either Z/modulus (modulus >= 2) or the rationals (modulus None)."""

    modulus: int | None

    def __post_init__(self):
        if self.modulus is not None and (not isinstance(self.modulus, int) or self.modulus < 2):
            raise ValueError(f"modulus must be an integer >= 2, got {self.modulus!r}")

    @classmethod
    def zmod(cls, m: int) -> "BaseRing":
        return cls(int(m))

    @classmethod
    def rationals(cls) -> "BaseRing":
        return cls(None)

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def is_finite(self) -> bool:
        return self.modulus is not None

    @property
    def free_order(self) -> int:
        """Order recorded for a free cyclic generator (0 stands for Q)."""
        return 0 if self.modulus is None else self.modulus

    def reduce(self, value):
        if self.modulus is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                return int(value.numerator * _inverse_mod(value.denominator, self.modulus)) % self.modulus
            value = value.numerator
        return int(value) % self.modulus

    def __call__(self, value) -> "Scalar":
        return Scalar(value, self)

    def __str__(self):
        return "Q" if self.modulus is None else f"Z/{self.modulus}"


def GF(p: int) -> BaseRing:
    """Prime field Z/p (primality is the caller's business)."""
    return BaseRing.zmod(p)


QQ = BaseRing.rationals()


def _inverse_mod(a: int, m: int) -> int:
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NonInvertible(f"{a} is not invertible modulo {m}") from None


class Scalar:
    """An element of a BaseRing, always stored in canonical form."""

    __slots__ = ("value", "ring")

    def __init__(self, value, ring: BaseRing):
        self.ring = ring
        self.value = ring.reduce(value)

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise TypeMismatch(f"scalars over {self.ring} and {other.ring}")
            return other
        return Scalar(other, self.ring)

    def __add__(self, other):
        return Scalar(self.value + self._coerce(other).value, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.value - self._coerce(other).value, self.ring)

    def __rsub__(self, other):
        return Scalar(self._coerce(other).value - self.value, self.ring)

    def __mul__(self, other):
        return Scalar(self.value * self._coerce(other).value, self.ring)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.ring)

    def inv(self) -> "Scalar":
        if self.ring.modulus is None:
            if self.value == 0:
                raise NonInvertible("0 has no inverse in Q")
            return Scalar(1 / self.value, self.ring)
        return Scalar(_inverse_mod(self.value, self.ring.modulus), self.ring)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.ring.reduce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ring))

    def __repr__(self):
        return f"Scalar({self.value}, {self.ring})"


def add(x: Scalar, y: Scalar) -> Scalar:
    return x + y


def mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def neg(x: Scalar) -> Scalar:
    return -x


def inv(x: Scalar) -> Scalar:
    return x.inv()


# ---------------------------------------------------------------- integer matrices

def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b) -> list[list[int]]:
    """Product of two integer matrices given as row lists."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    if len(a[0]) != inner:
        raise TypeMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {inner}x{cols}")
    bt = list(zip(*b)) if b else [()] * cols
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def smith_normal_form(M):
    """Return (U, D, V) with U*M*V = D, U and V unimodular.

    D is diagonal with nonnegative entries d_1 | d_2 | ... .  The pivot
    is always the entry of smallest nonzero absolute value in the active
    block, ties broken by lowest (row, col).
    """
    U, _, D, V, _ = smith_form_full(M)
    return U, D, V


def smith_form_full(M, track_inverses: bool = True):
    """Smith form with transforms and their inverses.

    Returns (U, U_inv, D, V, V_inv).  When track_inverses is False the
    inverse slots are None.
    """
    A = [[int(x) for x in row] for row in M]
    r = len(A)
    c = len(A[0]) if r else 0
    U = identity_matrix(r)
    V = identity_matrix(c)
    Ui = identity_matrix(r) if track_inverses else None
    Vi = identity_matrix(c) if track_inverses else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_axpy(dst, src, q):
        # row_dst += q * row_src
        a_d, a_s = A[dst], A[src]
        for k in range(c):
            if a_s[k]:
                a_d[k] += q * a_s[k]
        u_d, u_s = U[dst], U[src]
        for k in range(r):
            if u_s[k]:
                u_d[k] += q * u_s[k]
        if Ui is not None:
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def col_axpy(dst, src, q):
        # col_dst += q * col_src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        if Vi is not None:
            v_d, v_s = Vi[dst], Vi[src]
            for k in range(c):
                if v_d[k]:
                    v_s[k] -= q * v_d[k]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        if Ui is not None:
            for row in Ui:
                row[i] = -row[i]

    def find_pivot(t):
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best
        return best

    t = 0
    while t < min(r, c):
        best = find_pivot(t)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        p = A[t][t]
        clean = True
        for i in range(t + 1, r):
            if A[i][t]:
                row_axpy(i, t, -(A[i][t] // p))
                if A[i][t]:
                    clean = False
        for j in range(t + 1, c):
            if A[t][j]:
                col_axpy(j, t, -(A[t][j] // p))
                if A[t][j]:
                    clean = False
        if not clean:
            continue
        bad = None
        if abs(p) != 1:
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p), None)
        if bad is not None:
            row_axpy(t, bad[0], 1)
            continue
        if p < 0:
            negate_row(t)
        t += 1
    return U, Ui, A, V, Vi

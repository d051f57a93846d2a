"""Dilated Chebyshev polynomials of the second kind and q-number arithmetic.

The family is pinned by U_0 = 1, U_1 = x and the three-term recursion
x*U_a = U_{a-1} + U_{a+1}.  Values at x = q + 1/q feed every eigenvalue and
quantum dimension downstream, so two evaluation routes coexist: exact integer
coefficients for structural identities, and a value-domain two-term
recurrence (exact on rational inputs, mpmath otherwise) that is O(degree)
and stable for x >= 2.  Large-degree evaluation must never expand
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .precision import precision_bits, to_mpf, working_precision

__all__ = [
    "ChebyshevPoly",
    "QParameter",
    "build_poly",
    "poly_value",
    "poly_derivative",
    "poly_value_and_derivative",
    "q_number",
]


@dataclass(frozen=True)
class ChebyshevPoly:
    """One member of the family, held as exact integer coefficients.

    coeffs is ascending: coeffs[k] multiplies x**k.  The leading coefficient
    is 1 and coefficients of parity opposite to the degree vanish.
    """

    degree: int
    coeffs: tuple

    def value(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative_coeffs(self):
        return tuple(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def derivative_value(self, x):
        acc = 0 * x
        for c in reversed(self.derivative_coeffs()):
            acc = acc * x + c
        return acc


_COEFF_CACHE = [(1,), (0, 1)]


def build_poly(alpha):
    """Exact coefficient vector of the degree-alpha member."""
    if alpha < 0:
        raise ValueError("degree must be a natural number")
    while len(_COEFF_CACHE) <= alpha:
        prev, cur = _COEFF_CACHE[-2], _COEFF_CACHE[-1]
        # x*cur shifts coefficients up one slot; subtract prev
        nxt = [0] + list(cur)
        for k, c in enumerate(prev):
            nxt[k] -= c
        _COEFF_CACHE.append(tuple(nxt))
    return ChebyshevPoly(alpha, _COEFF_CACHE[alpha])


def poly_value(alpha, x):
    """U_alpha(x) by the two-term recurrence in the arithmetic of x."""
    if alpha < 0:
        raise ValueError("degree must be a natural number")
    one = x ** 0
    if alpha == 0:
        return one
    prev, cur = one, x
    for _ in range(alpha - 1):
        prev, cur = cur, x * cur - prev
    return cur


def poly_value_and_derivative(alpha, x):
    """(U_alpha(x), U_alpha'(x)) by the simultaneous recurrence.

    Differentiating the exact recursion gives u'_{k+1} = u_k + x*u'_k -
    u'_{k-1}; this is exact differentiation of the coefficient polynomial,
    not a finite difference.
    """
    if alpha < 0:
        raise ValueError("degree must be a natural number")
    one = x ** 0
    zero = 0 * x
    if alpha == 0:
        return one, zero
    u_prev, u = one, x
    du_prev, du = zero, one
    for _ in range(alpha - 1):
        u_prev, u, du_prev, du = u, x * u - u_prev, du, u + x * du - du_prev
    return u, du


def poly_derivative(alpha, x):
    """U_alpha'(x), computed from exact data (never by finite differences)."""
    return poly_value_and_derivative(alpha, x)[1]


class QParameter:
    """Deformation data (q, N) for one quantum group model.

    Admissible inputs satisfy 0 < q <= 1, integer N >= 2, and q + 1/q >= N
    (equivalently q no larger than the smallest positive root of
    x^2 - N*x + 1).  Rational q (Fraction or int) keeps all derived values
    exact; float/str/mpf inputs run on the mpmath side.
    """

    __slots__ = ("q", "N")

    def __init__(self, q, N):
        if not isinstance(N, int) or N < 2:
            raise ValueError("N must be an integer >= 2")
        if isinstance(q, bool):
            raise ValueError("q must be a number in (0, 1]")
        if isinstance(q, int):
            q = Fraction(q)
        elif isinstance(q, (float, str)):
            q = mpmath.mpf(q)
        elif not isinstance(q, (Fraction, mpmath.mpf)):
            raise TypeError("q must be Fraction, int, float, str or mpf")
        if not 0 < q <= 1:
            raise ValueError("q must lie in (0, 1]")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "N", N)
        if float(self.nq) < N - 1e-9:
            raise ValueError(
                "q + 1/q = %s is below N = %d; q may not exceed the "
                "smallest positive root of x^2 - N*x + 1" % (float(self.nq), N)
            )

    def __setattr__(self, name, value):
        raise AttributeError("QParameter is immutable")

    @classmethod
    def kac(cls, N):
        """The tracial model at this N: q equal to the small root exactly."""
        if N == 2:
            return cls(Fraction(1), 2)
        with working_precision(max(precision_bits(), 256)):
            q = (N - mpmath.sqrt(N * N - 4)) / 2
        return cls(q, N)

    @property
    def nq(self):
        """q + 1/q in the arithmetic of q."""
        if isinstance(self.q, Fraction):
            return self.q + 1 / self.q
        with working_precision():
            return self.q + 1 / self.q

    @property
    def q0(self):
        """Smallest positive root of x^2 - N*x + 1 (exactly 1 at N = 2)."""
        if self.N == 2:
            return 1
        with working_precision():
            return (self.N - mpmath.sqrt(self.N * self.N - 4)) / 2

    @property
    def is_kac(self):
        return abs(float(self.q) - float(self.q0)) <= 1e-9

    def q_mpf(self):
        """q as mpf at the current working precision."""
        return to_mpf(self.q)

    def __eq__(self, other):
        if not isinstance(other, QParameter):
            return NotImplemented
        if self.N != other.N:
            return False
        try:
            return self.q == other.q
        except TypeError:
            return False

    def __hash__(self):
        return hash((self.N, self.q))

    def __repr__(self):
        return "QParameter(q=%r, N=%d)" % (self.q, self.N)


def q_number(n, param):
    """[n]_q = U_{n-1}(q + 1/q), with [0] = 0 and [1] = 1."""
    if n < 0:
        raise ValueError("q-number index must be a natural number")
    nq = param.nq
    if n == 0:
        return 0 * nq
    if isinstance(nq, Fraction):
        return poly_value(n - 1, nq)
    with working_precision():
        return poly_value(n - 1, nq)

"""Formal calculus of reduced words over a free product of state-equipped algebras.

Words are tuples of letters; a letter carries an algebra label, a flat
tuple of primitive factors, and a circled flag meaning the letter has
been mean-centered.  Primitive factors are tagged tuples: ("a", name,
starred) for an atom, ("g", factors) for a letter wrapped by the formal
generator.  Atoms are assumed mean-zero, so the scalar symbol phi of a
single atom is structurally zero; every other phi is an opaque symbol
and expressions are polynomials in these symbols with Fraction
coefficients.  The junction rewrite for same-algebra neighbours u, v
with contents C, D is

    u v = (CD) circled + phi(CD) 1 - [u circled] phi(C) v
          - [v circled] phi(D) u - [both circled] phi(C) phi(D) 1

which keeps every letter of a normal form mean-zero or a bare generator
wrap, and makes normal forms unique regardless of rewrite order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import ResourceLimitError


class Letter(NamedTuple):
    algebra: object
    factors: tuple
    circled: bool


class PhiSymbol(NamedTuple):
    algebra: object
    factors: tuple


def atom(algebra, name, star=False):
    """A single mean-zero letter of the given algebra."""
    return Letter(algebra, (("a", str(name), bool(star)),), False)


def word(*letters):
    """A reduced word: adjacent letters must carry distinct algebra labels."""
    for lt in letters:
        if not isinstance(lt, Letter):
            raise TypeError("words are built from Letter values")
    for left, right in zip(letters, letters[1:]):
        if left.algebra == right.algebra:
            raise ValueError("adjacent letters share an algebra; word is not reduced")
    return tuple(letters)


def _phi(algebra, factors):
    """The scalar symbol of a same-algebra product; None when structurally zero."""
    if len(factors) == 1 and factors[0][0] == "a":
        return None
    return PhiSymbol(algebra, factors)


def _is_centered(letter):
    return letter.circled or (
        len(letter.factors) == 1 and letter.factors[0][0] == "a"
    )


class Expression:
    """Linear combination of reduced words with phi-symbol coefficients.

    Terms are keyed by (word, sorted phi multiset); coefficients are
    Fractions, and zero coefficients are pruned, so equality of
    expressions is plain dict equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    self.terms[key] = Fraction(coeff)

    @classmethod
    def from_word(cls, letters, coeff=1, phis=()):
        out = cls()
        out._add(tuple(letters), tuple(phis), Fraction(coeff))
        return out

    def _add(self, letters, phis, coeff):
        if not coeff:
            return
        key = (tuple(letters), tuple(sorted(phis)))
        total = self.terms.get(key, 0) + coeff
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    def _add_scaled(self, other, extra_phis, scale):
        for (w, phis), coeff in other.terms.items():
            self._add(w, phis + tuple(extra_phis), coeff * scale)

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def word_lengths(self):
        return [len(w) for (w, _phis) in self.terms]

    def __eq__(self, other):
        return isinstance(other, Expression) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = Expression(dict(self.terms))
        out._add_scaled(other, (), Fraction(1))
        return out

    def __sub__(self, other):
        out = Expression(dict(self.terms))
        out._add_scaled(other, (), Fraction(-1))
        return out

    def __neg__(self):
        return Expression({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Expression):
            return multiply(self, other)
        out = Expression()
        for (w, phis), coeff in self.terms.items():
            out._add(w, phis, coeff * Fraction(other))
        return out

    __rmul__ = __mul__

    def __repr__(self):
        if not self.terms:
            return "Expression(0)"
        bits = []
        for (w, phis), coeff in self.items():
            bits.append(f"{coeff}*phi{list(phis)}*word{list(w)}")
        return "Expression(" + " + ".join(bits) + ")"


def _concat_words(w1, w2):
    """Expression for the product of two reduced words."""
    if not w1 or not w2:
        return Expression.from_word(w1 + w2)
    u, v = w1[-1], w2[0]
    if u.algebra != v.algebra:
        return Expression.from_word(w1 + w2)
    out = Expression()
    merged = u.factors + v.factors
    fused = Letter(u.algebra, merged, True)
    out._add(w1[:-1] + (fused,) + w2[1:], (), Fraction(1))
    inner = _concat_words(w1[:-1], w2[1:])
    out._add_scaled(inner, (PhiSymbol(u.algebra, merged),), Fraction(1))
    pu = _phi(u.algebra, u.factors) if u.circled else None
    pv = _phi(v.algebra, v.factors) if v.circled else None
    if u.circled and pu is not None:
        out._add(w1[:-1] + (v,) + w2[1:], (pu,), Fraction(-1))
    if v.circled and pv is not None:
        out._add(w1[:-1] + (u,) + w2[1:], (pv,), Fraction(-1))
    if u.circled and v.circled and pu is not None and pv is not None:
        out._add_scaled(inner, (pu, pv), Fraction(-1))
    return out


def multiply(e1, e2):
    """Product of two expressions, reducing every junction."""
    out = Expression()
    for (w1, p1), c1 in e1.terms.items():
        for (w2, p2), c2 in e2.terms.items():
            out._add_scaled(_concat_words(w1, w2), p1 + p2, c1 * c2)
    return out


def reduce_product(b, x, a):
    """Full reduced expansion of the three-word product b x a."""
    eb = Expression.from_word(word(*b))
    ex = Expression.from_word(word(*x))
    ea = Expression.from_word(word(*a))
    return multiply(multiply(eb, ex), ea)


def apply_generator(expr):
    """Leibniz sum wrapping each letter; scalars map to zero.

    Wrapping ignores circling: the generator of a centered letter equals
    the generator of the raw product, and the generator of a scalar is 0.
    """
    out = Expression()
    for (w, phis), coeff in expr.terms.items():
        for j, letter in enumerate(w):
            wrapped = Letter(letter.algebra, (("g", letter.factors),), False)
            out._add(w[:j] + (wrapped,) + w[j + 1 :], phis, coeff)
    return out


def circle(expr):
    """Mean-center an expression: drop scalars, center single letters."""
    out = Expression()
    for (w, phis), coeff in expr.terms.items():
        if len(w) == 0:
            continue
        if len(w) == 1 and not _is_centered(w[0]):
            lt = w[0]
            out._add((Letter(lt.algebra, lt.factors, True),), phis, coeff)
            continue
        if len(w) > 1 and not all(_is_centered(lt) for lt in w):
            raise ValueError("cannot center a long word with uncentered letters")
        out._add(w, phis, coeff)
    return out


def _star_primary(p):
    if p[0] == "a":
        return ("a", p[1], not p[2])
    return ("g", tuple(_star_primary(f) for f in reversed(p[1])))


def star(expr):
    """Formal adjoint: reverse each word, star letters, star phi contents."""
    out = Expression()
    for (w, phis), coeff in expr.terms.items():
        rw = tuple(
            Letter(
                lt.algebra,
                tuple(_star_primary(f) for f in reversed(lt.factors)),
                lt.circled,
            )
            for lt in reversed(w)
        )
        rp = tuple(
            PhiSymbol(p.algebra, tuple(_star_primary(f) for f in reversed(p.factors)))
            for p in phis
        )
        out._add(rw, rp, coeff)
    return out


def gradient_commutator(b, x, a):
    """b D(x a) - D(b x a) - b D(x) a + D(b x) a for reduced words."""
    eb = Expression.from_word(word(*b))
    ex = Expression.from_word(word(*x))
    ea = Expression.from_word(word(*a))
    xa = multiply(ex, ea)
    bx = multiply(eb, ex)
    bxa = multiply(eb, xa)
    t1 = multiply(eb, apply_generator(xa))
    t2 = apply_generator(bxa)
    t3 = multiply(multiply(eb, apply_generator(ex)), ea)
    t4 = multiply(apply_generator(bx), ea)
    return t1 - t2 - t3 + t4


def _boundary_main_sum(b, x, a):
    """Sum over junction positions of scalar pairs around a centered local term."""
    n, k, m = len(x), len(b), len(a)
    total = Expression()
    for i in range(max(1, n - m + 1), min(n, k) + 1):
        phis = []
        dead = False
        for j in range(1, i):
            bb, xx = b[k - j], x[j - 1]
            if bb.algebra != xx.algebra:
                dead = True
                break
            phis.append(PhiSymbol(bb.algebra, bb.factors + xx.factors))
        if dead:
            continue
        for j in range(i + 1, n + 1):
            xx, aa = x[j - 1], a[n - j]
            if xx.algebra != aa.algebra:
                dead = True
                break
            phis.append(PhiSymbol(xx.algebra, xx.factors + aa.factors))
        if dead:
            continue
        mid_b, mid_x, mid_a = b[k - i], x[i - 1], a[n - i]
        if not mid_b.algebra == mid_x.algebra == mid_a.algebra:
            continue
        middle = circle(gradient_commutator((mid_b,), (mid_x,), (mid_a,)))
        term = multiply(Expression.from_word(b[: k - i]), middle)
        term = multiply(term, Expression.from_word(a[n - i + 1 :]))
        total._add_scaled(term, tuple(phis), Fraction(1))
    return total


@dataclass(frozen=True)
class RemainderLedger:
    """Leftover short-word terms, grouped by (length, algebra signature)."""

    groups: dict
    max_word_length: int
    bound: int
    within_bound: bool


@dataclass(frozen=True)
class ExpansionReport:
    b_types: tuple
    x_types: tuple
    a_types: tuple
    lhs_is_zero: bool
    must_vanish: bool
    ledger: RemainderLedger
    residual: Expression
    passed: bool


def _check_reduced_types(types):
    for left, right in zip(types, types[1:]):
        if left == right:
            raise ValueError("type pattern is not reduced")


def verify_boundary_expansion(b_types, x_types, a_types, *, max_x=4, max_side=3):
    """Check the junction expansion of the commutator against its boundary sum.

    Fresh atoms are substituted into the type pattern, the left side is
    expanded symbolically, the boundary main sum is subtracted, and the
    leftover ledger must consist of words no longer than len(b) + len(a);
    patterns with a middle word longer than len(b) + len(a) - 1 must
    cancel to zero outright.
    """
    b_types = tuple(b_types)
    x_types = tuple(x_types)
    a_types = tuple(a_types)
    for seq in (b_types, x_types, a_types):
        _check_reduced_types(seq)
    if len(x_types) > max_x or max(len(b_types), len(a_types)) > max_side:
        raise ResourceLimitError(
            f"pattern sizes ({len(b_types)}, {len(x_types)}, {len(a_types)}) "
            f"exceed limits ({max_side}, {max_x}, {max_side})"
        )
    b = tuple(atom(t, f"b{i}") for i, t in enumerate(b_types, 1))
    x = tuple(atom(t, f"x{i}") for i, t in enumerate(x_types, 1))
    a = tuple(atom(t, f"a{i}") for i, t in enumerate(a_types, 1))
    lhs = gradient_commutator(b, x, a)
    ledger_expr = lhs - _boundary_main_sum(b, x, a)

    n, k, m = len(x), len(b), len(a)
    bound = k + m
    groups = {}
    residual = Expression()
    max_len = 0
    for (w, phis), coeff in ledger_expr.terms.items():
        sig = (len(w), tuple(lt.algebra for lt in w))
        groups.setdefault(sig, Expression())._add(w, phis, coeff)
        max_len = max(max_len, len(w))
        if len(w) > bound:
            residual._add(w, phis, coeff)
    must_vanish = n > k + m - 1
    lhs_zero = lhs.is_zero()
    ledger = RemainderLedger(
        groups=groups,
        max_word_length=max_len,
        bound=bound,
        within_bound=residual.is_zero(),
    )
    passed = residual.is_zero() and (lhs_zero or not must_vanish)
    return ExpansionReport(
        b_types=b_types,
        x_types=x_types,
        a_types=a_types,
        lhs_is_zero=lhs_zero,
        must_vanish=must_vanish,
        ledger=ledger,
        residual=residual,
        passed=passed,
    )


def _reduced_sequences(labels, length):
    if length == 0:
        yield ()
        return
    for head in labels:
        for tail in _reduced_sequences(labels, length - 1):
            if not tail or tail[0] != head:
                yield (head,) + tail


def _canonical_pattern(b_types, x_types, a_types):
    relabel = {}
    flat = []
    for seq in (b_types, x_types, a_types):
        out = []
        for t in seq:
            if t not in relabel:
                relabel[t] = len(relabel)
            out.append(relabel[t])
        flat.append(tuple(out))
    return tuple(flat)


def expansion_sweep(*, max_x=4, max_side=3, algebras=3):
    """Verify every type pattern up to the size limits, one per relabeling class."""
    labels = tuple(range(algebras))
    seen = set()
    reports = []
    side_patterns = [
        seq
        for ln in range(max_side + 1)
        for seq in _reduced_sequences(labels, ln)
    ]
    mid_patterns = [
        seq for ln in range(max_x + 1) for seq in _reduced_sequences(labels, ln)
    ]
    for bt, xt, at in itertools.product(side_patterns, mid_patterns, side_patterns):
        canon = _canonical_pattern(bt, xt, at)
        if canon in seen:
            continue
        seen.add(canon)
        reports.append(
            verify_boundary_expansion(
                canon[0], canon[1], canon[2], max_x=max_x, max_side=max_side
            )
        )
    return reports


def hs_propagation_bound(per_algebra, scalar_bound, a_bound, b_bound, m, k, ledger_hs):
    """Numeric propagation bound from per-algebra values and word-norm bounds.

    Computes 2*ledger_hs + 2*(k+m-1)^2 * scalar_bound^(m+k) * a_bound^(2m)
    * b_bound^(2k) * max(per_algebra values); monotone in every argument.
    """
    values = list(per_algebra.values()) if hasattr(per_algebra, "values") else list(per_algebra)
    if any(v < 0 for v in values):
        raise ValueError("per-algebra values must be nonnegative")
    for name, v in (
        ("scalar_bound", scalar_bound),
        ("a_bound", a_bound),
        ("b_bound", b_bound),
        ("ledger_hs", ledger_hs),
    ):
        if v < 0:
            raise ValueError(f"{name} must be nonnegative")
    if m < 0 or k < 0:
        raise ValueError("word lengths must be nonnegative")
    peak = max(values, default=0.0)
    weight = (
        2
        * (k + m - 1) ** 2
        * scalar_bound ** (m + k)
        * a_bound ** (2 * m)
        * b_bound ** (2 * k)
    )
    return 2 * ledger_hs + weight * peak

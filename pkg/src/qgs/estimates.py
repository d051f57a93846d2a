"""Quantitative spectral estimates: second-difference gap bounds, the
Hilbert-Schmidt summability certificate, and regime classification.

The gap functional compares |delta_{a+g} - delta_a - delta_b + delta_{b-g}|
against a three-term power bound.  Both sides live at the scale q^(2a), far
below the O(a) size of the eigenvalues themselves, so floating evaluation
raises the working precision to roughly 2*depth*log2(1/q) + 64 bits before
subtracting; rational q bypasses the issue entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from operator import index

import mpmath

from .chebyshev import QParameter, poly_value_and_derivative
from .fusion import dims
from .precision import precision_bits, to_mpf, working_precision
from .spectrum import eigenvalue


def _needed_bits(param, depth):
    """Mantissa width resolving q^(2*depth) under O(depth) magnitudes."""
    q = float(param.q_mpf())
    if q >= 1:
        return precision_bits()
    return max(precision_bits(), int(2 * depth * math.log2(1 / q)) + 64)


def _check_labels(alpha, beta, gamma):
    alpha, beta, gamma = index(alpha), index(beta), index(gamma)
    if alpha < 0 or beta < 0:
        raise ValueError("labels must be >= 0")
    if alpha + gamma < 0 or beta - gamma < 0:
        raise ValueError("shifted labels alpha+gamma and beta-gamma must be >= 0")
    if abs(gamma) > max(alpha, beta):
        raise ValueError("|gamma| must not exceed max(alpha, beta)")
    return alpha, beta, gamma


def _gap_sides_from_tables(alpha, beta, gamma, deltas, qpow):
    lhs = abs(deltas[alpha + gamma] - deltas[alpha] - deltas[beta] + deltas[beta - gamma])
    rhs = (
        abs(gamma) * abs(qpow[2 * alpha + 2 * gamma] - qpow[2 * beta + 2 * gamma])
        + beta * abs(qpow[2 * beta] - qpow[2 * beta - 2 * gamma])
        + alpha * abs(qpow[2 * alpha] - qpow[2 * alpha + 2 * gamma])
    )
    return lhs, rhs


def _delta_table(nq, top):
    """Eigenvalues for labels 0..top in the arithmetic of nq."""
    one = nq ** 0
    zero = 0 * one
    u_prev, u = zero, one
    du_prev, du = zero, zero
    out = []
    for _ in range(top + 1):
        out.append(du / u)
        u_prev, u, du_prev, du = u, nq * u - u_prev, du, u + nq * du - du_prev
    return out


def _power_span(q, lo, hi):
    """q**e for every integer exponent lo <= e <= hi, keyed by exponent.

    Exponents below zero occur in the bound when beta + gamma < 0; there
    the corresponding power exceeds 1 and the bound is merely weak, never
    invalid.
    """
    table = {0: q ** 0}
    for e in range(1, hi + 1):
        table[e] = table[e - 1] * q
    inv = 1 / q
    for e in range(-1, lo - 1, -1):
        table[e] = table[e + 1] * inv
    return table


@dataclass(frozen=True)
class GapEvaluation:
    """One evaluation of the second-difference gap functional.

    ``ratio`` is lhs/rhs, defined as 0 when both sides vanish and as
    infinity when only the bound side does (which happens at q = 1, where
    every power of q collapses to 1).
    """

    alpha: int
    beta: int
    gamma: int
    lhs: object
    rhs: object
    ratio: object


def gap(param: QParameter, alpha: int, beta: int, gamma: int) -> GapEvaluation:
    """Evaluate the gap functional at one index cell."""
    alpha, beta, gamma = _check_labels(alpha, beta, gamma)
    top = max(alpha, beta) + abs(gamma)
    exact = isinstance(param.q, Fraction)
    bits = precision_bits() if exact else _needed_bits(param, top + 1)
    with working_precision(bits):
        if exact:
            q = param.q
            nq = param.nq
        else:
            q = param.q_mpf()
            nq = q + 1 / q
        deltas = {}
        for k in {alpha + gamma, alpha, beta, beta - gamma}:
            u, du = poly_value_and_derivative(k, nq)
            deltas[k] = du / u
        qpow = _power_span(q, -2 * abs(gamma), 2 * top)
        lhs, rhs = _gap_sides_from_tables(alpha, beta, gamma, deltas, qpow)
        if rhs == 0:
            ratio = 0 if lhs == 0 else math.inf
        else:
            ratio = lhs / rhs
    return GapEvaluation(alpha, beta, gamma, lhs, rhs, ratio)


@dataclass(frozen=True)
class GapScan:
    """Grid supremum of the gap ratio with a two-window stability check."""

    param: QParameter
    alpha_max: int
    gamma_max: int
    sup_ratio: float
    argmax: tuple[int, int, int]
    window_low_sup: float
    window_high_sup: float
    stable: bool


def gap_constant_scan(param: QParameter, alpha_max: int, gamma_max: int) -> GapScan:
    """Scan the gap ratio over alpha, beta <= alpha_max, |gamma| <= gamma_max.

    beta is restricted to |beta - alpha| <= 2*gamma_max (the only window in
    which the functional arises downstream).  Stability compares the
    supremum over alpha in [alpha_max/2, alpha_max] with the one over
    [alpha_max/4, alpha_max/2): agreement within 10% is the finite-grid
    evidence that the ratio stays bounded.
    """
    alpha_max, gamma_max = index(alpha_max), index(gamma_max)
    if alpha_max < 10:
        raise ValueError("alpha_max must be >= 10")
    if gamma_max < 0:
        raise ValueError("gamma_max must be >= 0")
    top = alpha_max + gamma_max
    exact = isinstance(param.q, Fraction)
    bits = precision_bits() if exact else _needed_bits(param, top + 1)
    sup = 0.0
    argmax = (0, 0, 0)
    half = alpha_max // 2
    quarter = alpha_max // 4
    low_sup = 0.0
    high_sup = 0.0
    with working_precision(bits):
        if exact:
            deltas = _delta_table(param.nq, top)
            qpow = _power_span(param.q, -2 * gamma_max, 2 * top)
        else:
            qm = param.q_mpf()
            deltas = _delta_table(qm + 1 / qm, top)
            qpow = _power_span(qm, -2 * gamma_max, 2 * top)
        for a in range(alpha_max + 1):
            b_lo = max(0, a - 2 * gamma_max)
            b_hi = min(alpha_max, a + 2 * gamma_max)
            for b in range(b_lo, b_hi + 1):
                for g in range(-gamma_max, gamma_max + 1):
                    if a + g < 0 or b - g < 0 or abs(g) > max(a, b):
                        continue
                    lhs, rhs = _gap_sides_from_tables(a, b, g, deltas, qpow)
                    if rhs == 0:
                        ratio = 0.0 if lhs == 0 else math.inf
                    else:
                        ratio = float(lhs / rhs)
                    if ratio > sup:
                        sup = ratio
                        argmax = (a, b, g)
                    if quarter <= a < half and ratio > low_sup:
                        low_sup = ratio
                    if half <= a and ratio > high_sup:
                        high_sup = ratio
    if low_sup == high_sup == 0.0:
        stable = True
    else:
        stable = abs(high_sup - low_sup) <= 0.1 * max(high_sup, low_sup)
    return GapScan(
        param, alpha_max, gamma_max, sup, argmax, low_sup, high_sup, stable
    )


@dataclass(frozen=True)
class HSCoefficient:
    """The three scalar factors of one summand in the coefficient bound."""

    alpha: int
    beta: int
    gamma: int
    t: float
    gap_coefficient: object
    step_coefficient: object
    damping: object


def hs_coefficient(param: QParameter, alpha, beta, gamma, t) -> HSCoefficient:
    """Gap factor, single-step eigenvalue difference, and damping exp(-t*delta_beta)."""
    alpha, beta, gamma = _check_labels(alpha, beta, gamma)
    if float(t) < 0:
        raise ValueError("t must be >= 0")
    ev = gap(param, alpha, beta, gamma)
    with working_precision():
        delta_b = eigenvalue(param, beta)
        step = abs(delta_b - eigenvalue(param, beta - gamma))
        damping = mpmath.exp(-to_mpf(t) * to_mpf(delta_b))
    return HSCoefficient(alpha, beta, gamma, float(t), ev.lhs, step, damping)


@dataclass(frozen=True)
class HSCertificate:
    """Summability evidence for the squared Hilbert-Schmidt norm series.

    ``terms`` is the exact-term series n_a^2 (q^(2a) + q^a)^2 exp(-2ta);
    ``compressed_terms`` drops the (1 + q^a)^2 factor, the form the ratio
    test addresses.  The verdict is a three-way call with explicit margins,
    never a proof.
    """

    param: QParameter
    t: float
    alpha_max: int
    terms: tuple[float, ...]
    compressed_terms: tuple[float, ...]
    partial_sums: tuple[float, ...]
    ratio_value: float
    verdict: str


def hs_certificate(
    param: QParameter,
    t,
    alpha_max: int,
    *,
    margin: float = 0.01,
    tail_floor: float = 1e-3,
) -> HSCertificate:
    """Ratio-test certificate for the summability of the HS-norm series.

    Divergent when the ratio-test value at the probe exceeds 1 + margin or
    the last term has not decayed below tail_floor times the early-term
    scale; finite when the ratio-test value is below 1 - margin; otherwise
    inconclusive.
    """
    alpha_max = index(alpha_max)
    if alpha_max < 20:
        raise ValueError("alpha_max must be >= 20")
    if float(t) < 0:
        raise ValueError("t must be >= 0")
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    table = dims(param, alpha_max)
    terms = []
    compressed = []
    with working_precision():
        qm = param.q_mpf()
        tm = to_mpf(t)
        qa = mpmath.mpf(1)
        for a in range(alpha_max + 1):
            damp = mpmath.exp(-2 * tm * a)
            n2 = mpmath.mpf(table.n[a]) ** 2
            terms.append(float(n2 * (qa * qa + qa) ** 2 * damp))
            compressed.append(float(n2 * qa * qa * damp))
            qa = qa * qm
        ratio_value = float(
            mpmath.exp(2 * mpmath.log(mpmath.mpf(table.n[alpha_max])) / alpha_max)
            * qm ** 2
            * mpmath.exp(-2 * tm)
        )
    sums = []
    acc = 0.0
    for v in terms:
        acc += v
        sums.append(acc)
    early_scale = max(terms[1:11])
    if ratio_value >= 1 + margin:
        verdict = "divergent"
    elif terms[-1] >= tail_floor * early_scale:
        verdict = "divergent"
    elif ratio_value <= 1 - margin:
        verdict = "finite"
    else:
        verdict = "inconclusive"
    return HSCertificate(
        param,
        float(t),
        alpha_max,
        tuple(terms),
        tuple(compressed),
        tuple(sums),
        ratio_value,
        verdict,
    )


@dataclass(frozen=True)
class RegimeClassification:
    """Summability regime flags for one parameter point.

    ``ighs`` (damped summability for every t > 0) holds throughout the
    admissible range; ``ghs`` (summability already at t = 0) needs q
    strictly below the Kac point q0; ``kac`` flags q = q0 itself.
    """

    kac: bool
    ighs: bool
    ghs: bool


def regime_classify(param: QParameter) -> RegimeClassification:
    ghs = float(param.q_mpf()) < float(param.q0) - 1e-9
    return RegimeClassification(kac=param.is_kac, ighs=True, ghs=ghs)

"""Second-difference gap bounds, summability certificates, regime flags.

The spot values for the gap functional at q = 1/2, alpha = beta = 5,
gamma = 1 were derived by hand: the bound side is
5|q^10 - q^8| + 5|q^10 - q^12| = 75/4096, and the eigenvalue side is the
discrete second difference checked against the hyperbolic closed form.
"""

import math
from fractions import Fraction

import mpmath
import pytest

from qgs.chebyshev import QParameter
from qgs.estimates import (
    GapEvaluation,
    gap,
    gap_constant_scan,
    hs_certificate,
    hs_coefficient,
    regime_classify,
)


def hyperbolic_eigenvalue(q, alpha):
    if alpha == 0:
        return mpmath.mpf(0)
    with mpmath.workprec(192):
        s = mpmath.log(1 / mpmath.mpf(q))
        return ((alpha + 1) * mpmath.coth((alpha + 1) * s) - mpmath.coth(s)) / (
            2 * mpmath.sinh(s)
        )


def test_gap_zero_shift_vanishes():
    p = QParameter(Fraction(1, 2), 2)
    ev = gap(p, 7, 4, 0)
    assert ev.lhs == 0
    assert ev.rhs == 0
    assert ev.ratio == 0


def test_gap_spot_values():
    p = QParameter(Fraction(1, 2), 2)
    ev = gap(p, 5, 5, 1)
    assert isinstance(ev.lhs, Fraction)
    assert ev.rhs == Fraction(75, 4096)
    want = abs(
        hyperbolic_eigenvalue(0.5, 6)
        - 2 * hyperbolic_eigenvalue(0.5, 5)
        + hyperbolic_eigenvalue(0.5, 4)
    )
    assert abs(float(ev.lhs) - float(want)) <= 1e-9
    assert float(ev.lhs) == pytest.approx(0.003180, abs=1e-6)
    assert float(ev.ratio) == pytest.approx(0.174, abs=2e-3)


def test_gap_symmetric_case_is_second_difference():
    from qgs.spectrum import eigenvalue

    p = QParameter(Fraction(2, 5), 2)
    for a in (3, 6, 11):
        for g in (1, 2, 3):
            ev = gap(p, a, a, g)
            second = abs(
                eigenvalue(p, a + g) + eigenvalue(p, a - g) - 2 * eigenvalue(p, a)
            )
            assert ev.lhs == second


def test_gap_swap_antisymmetry_exact():
    # (alpha, beta, gamma) -> (beta, alpha, -gamma) maps lhs to itself
    p = QParameter(Fraction(1, 2), 2)
    for a in range(20):
        for b in range(20):
            for g in range(-5, 6):
                if a + g < 0 or b - g < 0 or abs(g) > max(a, b):
                    continue
                if b + (-g) < 0 or a - (-g) < 0 or abs(g) > max(b, a):
                    continue
                assert gap(p, a, b, g).lhs == gap(p, b, a, -g).lhs


def test_gap_domain_validation():
    p = QParameter(0.5, 2)
    with pytest.raises(ValueError):
        gap(p, 1, 5, -2)  # alpha + gamma < 0
    with pytest.raises(ValueError):
        gap(p, 5, 1, 2)  # beta - gamma < 0
    with pytest.raises(ValueError):
        gap(p, 2, 2, 3)  # |gamma| > max(alpha, beta)


def test_gap_degenerate_regime_ratio_is_inf():
    ev = gap(QParameter(1, 2), 5, 7, 1)
    assert ev.rhs == 0
    assert float(ev.lhs) > 0
    assert ev.ratio == math.inf


def test_gap_scan_gamma_zero_grid():
    scan = gap_constant_scan(QParameter(0.5, 2), 20, 0)
    assert scan.sup_ratio == 0
    assert scan.stable


def test_gap_scan_moderate_grid():
    scan = gap_constant_scan(QParameter(0.5, 2), 60, 3)
    assert 0 < scan.sup_ratio < 100
    a, b, g = scan.argmax
    assert 0 <= a <= 60 and 0 <= b <= 60 and abs(g) <= 3
    assert scan.window_low_sup > 0
    assert scan.window_high_sup > 0
    assert scan.stable


def test_gap_scan_rational_matches_float():
    exact = gap_constant_scan(QParameter(Fraction(3, 10), 2), 40, 2)
    approx = gap_constant_scan(QParameter(0.3, 2), 40, 2)
    assert exact.sup_ratio == pytest.approx(approx.sup_ratio, rel=1e-9)
    assert exact.argmax == approx.argmax


def test_gap_scan_validation():
    with pytest.raises(ValueError):
        gap_constant_scan(QParameter(0.5, 2), 5, 2)


def test_hs_coefficient_spots():
    from qgs.spectrum import eigenvalue

    p = QParameter(0.5, 2)
    rec = hs_coefficient(p, 5, 5, 1, 0)
    assert float(rec.gap_coefficient) == pytest.approx(0.003180, abs=1e-6)
    step = float(eigenvalue(p, 5) - eigenvalue(p, 4))
    assert float(rec.step_coefficient) == pytest.approx(step, rel=1e-12)
    assert float(rec.damping) == 1
    zero = hs_coefficient(p, 5, 5, 0, 1.0)
    assert zero.gap_coefficient == 0
    assert zero.step_coefficient == 0
    damped = hs_coefficient(p, 5, 5, 1, 50.0)
    assert float(damped.damping) < 1e-20
    with pytest.raises(ValueError):
        hs_coefficient(p, 5, 5, 1, -0.5)


def test_hs_certificate_regimes():
    kac = QParameter.kac(3)
    assert hs_certificate(kac, 0.1, 200).verdict == "finite"
    assert hs_certificate(kac, 0, 200).verdict == "divergent"
    strict = QParameter(0.25, 3)
    assert hs_certificate(strict, 0, 200).verdict == "finite"


def test_hs_certificate_kac_terms_plateau():
    cert = hs_certificate(QParameter.kac(3), 0, 200)
    tail = cert.terms[-40:]
    assert min(tail) > 0.1 * max(cert.terms[1:11])


def test_hs_certificate_agrees_with_regime_classify():
    q0 = float(QParameter.kac(3).q)
    for q in (q0 - 0.1, None, 0.25):
        param = QParameter.kac(3) if q is None else QParameter(q, 3)
        flags = regime_classify(param)
        cert = hs_certificate(param, 0, 200)
        assert flags.ghs == (cert.verdict == "finite")


def test_hs_certificate_monotone_in_t():
    p = QParameter.kac(3)
    c0 = hs_certificate(p, 0, 60)
    c1 = hs_certificate(p, 0.2, 60)
    c2 = hs_certificate(p, 0.5, 60)
    for lo, hi in ((c1, c0), (c2, c1)):
        for a in range(61):
            assert lo.terms[a] <= hi.terms[a] * (1 + 1e-12)


def test_hs_certificate_term_shapes():
    cert = hs_certificate(QParameter(0.25, 3), 0.3, 40)
    assert len(cert.terms) == 41
    assert len(cert.compressed_terms) == 41
    assert len(cert.partial_sums) == 41
    for exact, compressed in zip(cert.terms, cert.compressed_terms):
        assert compressed <= exact * (1 + 1e-12)
    for x, y in zip(cert.partial_sums, cert.partial_sums[1:]):
        assert y >= x
    assert cert.partial_sums[0] == cert.terms[0]


def test_hs_certificate_margin_override():
    cert = hs_certificate(QParameter.kac(3), 0.1, 200, margin=0.2)
    assert cert.verdict == "inconclusive"


def test_hs_certificate_validation():
    p = QParameter(0.5, 2)
    with pytest.raises(ValueError):
        hs_certificate(p, 0, 10)
    with pytest.raises(ValueError):
        hs_certificate(p, -0.5, 40)


def test_regime_classify_flags():
    kac3 = regime_classify(QParameter.kac(3))
    assert kac3.kac is True
    assert kac3.ighs is True
    assert kac3.ghs is False
    strict = regime_classify(QParameter(0.25, 3))
    assert strict.kac is False
    assert strict.ghs is True
    n2 = regime_classify(QParameter(1, 2))
    assert n2.kac is True
    assert n2.ghs is False

"""Spectral data of the central heat semigroup on a free orthogonal quantum group.

The generator acts diagonally on matrix coefficients of the irreducible of
label alpha, with eigenvalue U'_alpha(N_q)/U_alpha(N_q) computed from exact
Chebyshev data.  Everything here is a pure function of a QParameter; rational
q gives exact rational eigenvalues, floating q is evaluated in mpmath at the
configured working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import islice
from operator import index
from typing import Callable, Iterable, Iterator, Mapping

import mpmath

from .chebyshev import QParameter, poly_value, poly_value_and_derivative
from .errors import DegenerateRegimeError, InvalidVectorError
from .fusion import dims
from .precision import to_mpf, working_precision


def eigenvalue(param: QParameter, alpha: int):
    """Generator eigenvalue on the irreducible of label alpha.

    Exact (a Fraction) when q is rational; an mpf otherwise.  The value is
    0 at alpha = 0 and strictly increasing in alpha.
    """
    alpha = index(alpha)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    with working_precision():
        u, du = poly_value_and_derivative(alpha, param.nq)
        return du / u


def gap_limit(param: QParameter):
    """Limit of consecutive eigenvalue gaps, 1/sqrt(N_q^2 - 4).

    Raises DegenerateRegimeError at q = 1, where the gaps grow linearly
    instead of converging.
    """
    with working_precision():
        nq = to_mpf(param.nq)
        if nq <= 2:
            raise DegenerateRegimeError("eigenvalue gaps diverge at q = 1")
        return 1 / mpmath.sqrt(nq * nq - 4)


def semigroup_coeff(param: QParameter, alpha: int, t):
    """Interpolation coefficient (U_alpha(q^t + q^-t) / U_alpha(N_q))^3.

    Lies in (0, 1] for t in (-1, 1] and equals 1 at t = 1.  Values of t
    above 1 are accepted so the derivative at the endpoint can be probed.
    """
    alpha = index(alpha)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if param.q == 1:
        raise DegenerateRegimeError("interpolation coefficients need q < 1")
    with working_precision():
        tm = to_mpf(t)
        if tm <= -1:
            raise ValueError("t must be > -1")
        qt = mpmath.power(param.q_mpf(), tm)
        num = poly_value(alpha, qt + 1 / qt)
        den = poly_value(alpha, to_mpf(param.nq))
        return (num / den) ** 3


def semigroup_rate(param: QParameter, alpha: int):
    """d/dt of semigroup_coeff at t = 1: 3 (q - 1/q) log(q) times the eigenvalue."""
    if param.q == 1:
        raise DegenerateRegimeError("interpolation coefficients need q < 1")
    with working_precision():
        qm = param.q_mpf()
        delta = to_mpf(eigenvalue(param, alpha))
        return 3 * delta * mpmath.log(qm) * (qm - 1 / qm)


def multiplier(param: QParameter, alpha: int, t):
    """Semigroup multiplier exp(-t * eigenvalue) for t >= 0."""
    with working_precision():
        tm = to_mpf(t)
        if tm < 0:
            raise ValueError("t must be >= 0")
        return mpmath.exp(-tm * to_mpf(eigenvalue(param, alpha)))


def cesaro_sum(func: Callable[[float], float], k: int) -> float:
    """Finite-k value of k(-P(0) + (1/k) sum_{l=k+1}^{2k} P(1/l)).

    Converges to log(2) * P'(0) as k grows for P smooth near 0.
    """
    k = index(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    tail = math.fsum(float(func(1.0 / l)) for l in range(k + 1, 2 * k + 1))
    return tail - k * float(func(0.0))


@dataclass(frozen=True)
class SpectralDatum:
    """One eigenvalue with its label, dimension and L2 multiplicity."""

    alpha: int
    delta: object
    n: int
    multiplicity: int


def spectral_stream(param: QParameter) -> Iterator[SpectralDatum]:
    """Yield SpectralDatum for alpha = 0, 1, 2, ... indefinitely.

    Runs the value and derivative recurrences incrementally, so each step
    costs O(1) arithmetic operations.
    """
    with working_precision():
        nq = param.nq
        one = nq ** 0
    zero = 0 * one
    u_prev, u = zero, one
    du_prev, du = zero, zero
    n_prev, n = 0, 1
    alpha = 0
    while True:
        with working_precision():
            delta = du / u
        yield SpectralDatum(alpha, delta, n, n * n)
        with working_precision():
            u_prev, u, du_prev, du = u, nq * u - u_prev, du, u + nq * du - du_prev
        n_prev, n = n, param.N * n - n_prev
        alpha += 1


def spectral_data(param: QParameter, alpha_max: int) -> list[SpectralDatum]:
    alpha_max = index(alpha_max)
    if alpha_max < 0:
        raise ValueError("alpha_max must be >= 0")
    return list(islice(spectral_stream(param), alpha_max + 1))


@dataclass(frozen=True)
class SpectralRow:
    """One row of the tabulated spectrum: label, dimensions, eigenvalue, gap."""

    alpha: int
    n: int
    qdim: object
    delta: object
    gap: object


def spectral_rows(param: QParameter, alpha_max: int) -> list[SpectralRow]:
    """Tabulate label, dimension, quantum dimension, eigenvalue and gap."""
    table = dims(param, alpha_max)
    rows = []
    prev = None
    for d in spectral_data(param, alpha_max):
        with working_precision():
            gap = 0 * d.delta if prev is None else d.delta - prev
        rows.append(SpectralRow(d.alpha, d.n, table.qdim[d.alpha], d.delta, gap))
        prev = d.delta
    return rows


def dirichlet_form(param: QParameter, vector: Mapping):
    """Quadratic form sum of eigenvalue * |amplitude|^2 over the support.

    ``vector`` maps (alpha, i, j) with 1-based matrix indices to an
    amplitude; indices outside 1..n_alpha raise InvalidVectorError.
    """
    if not vector:
        return 0
    keys = []
    for key in vector:
        if not (isinstance(key, tuple) and len(key) == 3):
            raise InvalidVectorError(f"expected (alpha, i, j) key, got {key!r}")
        a, i, j = key
        if not all(isinstance(v, int) for v in (a, i, j)) or a < 0:
            raise InvalidVectorError(f"bad index triple {key!r}")
        keys.append(key)
    table = dims(param, max(k[0] for k in keys))
    deltas = {}
    total = 0
    for key in sorted(keys):
        a, i, j = key
        if not (1 <= i <= table.n[a] and 1 <= j <= table.n[a]):
            raise InvalidVectorError(
                f"matrix indices {key!r} outside 1..{table.n[a]}"
            )
        if a not in deltas:
            deltas[a] = eigenvalue(param, a)
        with working_precision():
            total = total + deltas[a] * abs(vector[key]) ** 2
    return total


def gradient_norm(param: QParameter, vector: Mapping):
    """Squared derivation norm of the associated multiplier; coincides with
    the Dirichlet form by construction."""
    return dirichlet_form(param, vector)


@dataclass(frozen=True)
class ResolventCoeff:
    """Resolvent and regularized-generator coefficients at one label."""

    alpha: int
    eps: float
    resolvent: object
    regularized: object


def resolvent_coeff(param: QParameter, alpha: int, eps) -> ResolventCoeff:
    """Coefficients 1/(1 + eps*delta) and delta/(1 + eps*delta), eps > 0."""
    if not float(eps) > 0:
        raise ValueError("eps must be > 0")
    delta = eigenvalue(param, alpha)
    with working_precision():
        den = 1 + eps * delta
        return ResolventCoeff(index(alpha), float(eps), 1 / den, delta / den)


@dataclass(frozen=True)
class AmenabilityReport:
    """Finite-sample probe of eigenvalue growth against log of the count.

    ``ratios[i]`` is lambda_n / log(n) at checkpoint n = checkpoints[i],
    where lambda_n enumerates the eigenvalues with their L2 multiplicities.
    ``envelope`` is the suffix minimum of the ratios, and the verdict holds
    when the envelope stays above ``threshold`` on the top octave of
    checkpoints.  This is numerical evidence about an asymptotic statement,
    never a proof.
    """

    n_max: int
    warmup: int
    threshold: float
    checkpoints: tuple[int, ...]
    ratios: tuple[float, ...]
    envelope: tuple[float, ...]
    liminf_estimate: float
    satisfied: bool
    verdict: str
    note: str = "numerical evidence"


def amenability_criterion(
    spectrum: Iterable[SpectralDatum],
    n_max: int,
    *,
    warmup: int = 1000,
    threshold: float = 50.0,
) -> AmenabilityReport:
    """Probe whether lambda_n / log(n) diverges along the given spectrum.

    ``spectrum`` yields eigenvalues in ascending order with multiplicities;
    it must cover at least n_max eigenvalues.  Checkpoints double from the
    warm-up index up to n_max.
    """
    n_max = index(n_max)
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    warmup = index(warmup)
    if warmup < 2:
        raise ValueError("warmup must be >= 2")
    checkpoints = [min(warmup, n_max)]
    while checkpoints[-1] * 2 <= n_max:
        checkpoints.append(checkpoints[-1] * 2)
    if checkpoints[-1] != n_max:
        checkpoints.append(n_max)

    it = iter(spectrum)
    covered = 0
    current = None
    last_delta = None
    lambdas = []
    for cp in checkpoints:
        while covered < cp:
            try:
                current = next(it)
            except StopIteration:
                raise ValueError(
                    f"spectrum exhausted after {covered} eigenvalues, need {cp}"
                ) from None
            d = float(current.delta)
            if last_delta is not None and d < last_delta:
                raise ValueError("spectrum must be sorted ascending")
            last_delta = d
            if current.multiplicity < 1:
                raise ValueError("multiplicities must be >= 1")
            covered += current.multiplicity
        lambdas.append(float(current.delta))

    ratios = tuple(lam / math.log(cp) for lam, cp in zip(lambdas, checkpoints))
    envelope = []
    running = math.inf
    for r in reversed(ratios):
        running = min(running, r)
        envelope.append(running)
    envelope = tuple(reversed(envelope))
    window = [i for i, cp in enumerate(checkpoints) if 2 * cp >= n_max]
    liminf_estimate = min(ratios[i] for i in window)
    satisfied = liminf_estimate > threshold
    return AmenabilityReport(
        n_max=n_max,
        warmup=warmup,
        threshold=float(threshold),
        checkpoints=tuple(checkpoints),
        ratios=ratios,
        envelope=envelope,
        liminf_estimate=liminf_estimate,
        satisfied=satisfied,
        verdict="satisfied" if satisfied else "not-satisfied",
    )

"""Fusion data for the irreducibles of a free orthogonal quantum group.

Irreducible representations are labelled by naturals.  The tensor product
of labels ``a`` and ``b`` decomposes multiplicity-free along
``|a-b|, |a-b|+2, ..., a+b``, so a plain ordered list is a faithful
description of the fusion channels.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from operator import index

import mpmath

from .chebyshev import QParameter
from .precision import working_precision


def fuse(alpha: int, beta: int) -> list[int]:
    """Fusion channels of the tensor product of irreducibles alpha and beta.

    Returns the ordered list ``[|alpha-beta|, |alpha-beta|+2, ..., alpha+beta]``;
    every channel appears with multiplicity one.
    """
    alpha, beta = index(alpha), index(beta)
    if alpha < 0 or beta < 0:
        raise ValueError("irreducible labels must be >= 0")
    return list(range(abs(alpha - beta), alpha + beta + 1, 2))


@dataclass(frozen=True)
class DimensionTable:
    """Classical and quantum dimensions of the irreducibles up to a cutoff.

    ``n[a]`` is the exact integer dimension, satisfying N*n[a] = n[a+1] + n[a-1]
    with n[0] = 1 and n[1] = N.  ``qdim[a]`` is the quantum dimension
    [a+1]_q, exact rational when q is a Fraction.
    """

    param: QParameter
    n: tuple[int, ...]
    qdim: tuple

    @property
    def alpha_max(self) -> int:
        return len(self.n) - 1


@functools.lru_cache(maxsize=None)
def dims(param: QParameter, alpha_max: int) -> DimensionTable:
    """Build the dimension table for labels 0..alpha_max."""
    alpha_max = index(alpha_max)
    if alpha_max < 0:
        raise ValueError("alpha_max must be >= 0")
    n = [1, param.N]
    while len(n) <= alpha_max:
        n.append(param.N * n[-1] - n[-2])
    with working_precision():
        nq = param.nq
        qdim = [nq ** 0, nq]
        while len(qdim) <= alpha_max:
            qdim.append(nq * qdim[-1] - qdim[-2])
    return DimensionTable(param, tuple(n[: alpha_max + 1]), tuple(qdim[: alpha_max + 1]))


@dataclass(frozen=True)
class GrowthProbe:
    """Finite-cutoff probe of the exponential growth of dimensions.

    ``limsup_product`` approximates lim sup n_a^{1/a} * q, which is 1 in the
    Kac regime q = q0 and strictly smaller for q < q0.
    """

    alpha_probe: int
    q0: float
    n_root: float
    limsup_product: float


def growth_rate(param: QParameter, alpha_probe: int) -> GrowthProbe:
    alpha_probe = index(alpha_probe)
    if alpha_probe < 1:
        raise ValueError("alpha_probe must be >= 1")
    table = dims(param, alpha_probe)
    with working_precision():
        root = mpmath.exp(mpmath.log(mpmath.mpf(table.n[alpha_probe])) / alpha_probe)
        product = root * param.q_mpf()
    return GrowthProbe(alpha_probe, float(param.q0), float(root), float(product))


@dataclass(frozen=True)
class FusionCheck:
    """Result of checking both dimension sum rules on one channel list."""

    param: QParameter
    alpha: int
    beta: int
    channels: list[int]
    n_product: int
    n_sum: int
    qdim_product: object
    qdim_sum: object
    classical_ok: bool
    quantum_ok: bool


def fusion_check(param: QParameter, alpha: int, beta: int) -> FusionCheck:
    """Verify n_a*n_b and [a+1][b+1] against the sums over fusion channels.

    The classical rule is checked in exact integer arithmetic.  The quantum
    rule is exact for rational q; for floating q the comparison allows a
    relative slack of 1e-12.
    """
    channels = fuse(alpha, beta)
    table = dims(param, alpha + beta)
    n_product = table.n[alpha] * table.n[beta]
    n_sum = sum(table.n[g] for g in channels)
    with working_precision():
        qdim_product = table.qdim[alpha] * table.qdim[beta]
        qdim_sum = sum(table.qdim[g] for g in channels)
        if isinstance(qdim_product, Fraction):
            quantum_ok = qdim_product == qdim_sum
        else:
            quantum_ok = abs(qdim_product - qdim_sum) <= 1e-12 * abs(qdim_product)
    return FusionCheck(
        param,
        alpha,
        beta,
        channels,
        n_product,
        n_sum,
        qdim_product,
        qdim_sum,
        n_product == n_sum,
        quantum_ok,
    )

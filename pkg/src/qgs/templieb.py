"""Temperley-Lieb operators on qubit chains and the isometries built from them.

The loop parameter is d = q + 1/q.  Each generator acts on a pair of
adjacent sites as the rank-one operator |w><w| for the defining vector
w = sqrt(q)|01> - (1/sqrt(q))|10>, with site 1 stored in the most
significant bit.  Top-label projections are built by the one-step
recursion p_{n} = p_{n-1} - ([n-1]/[n]) p_{n-1} e_{n-1} p_{n-1} carried
out on compressed coordinates: only an orthonormal basis of each image
is kept, so a chain of n sites costs O(2^n * n^2) rather than O(4^n).

All public arrays are float64 and read-only.  A failed eigenvalue
separation during the projection build triggers one extended-precision
rebuild; if that fails too, NumericalDegradationError is raised.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from .chebyshev import q_number
from .errors import NumericalDegradationError, ResourceLimitError
from .fusion import fuse

MAX_STRANDS = 14
DENSE_LIMIT = 12

_EIG_TOL = 1e-9
_GRAM_TOL = 1e-8

_JW_CACHE = {}
_ISO_CACHE = {}


class _ChainFailure(Exception):
    def __init__(self, residual):
        self.residual = residual


def _qfloat(param):
    return float(param.q_mpf())


def _defining_vector(q, dtype=np.float64):
    root = math.sqrt(q)
    return np.array([0.0, root, -1.0 / root, 0.0], dtype=dtype)


def _apply_pair(mat4, i, n, block):
    """Apply a two-site operator at sites (i, i+1) to the columns of block."""
    left = 2 ** (i - 1)
    tail = block.shape[1:]
    shaped = block.reshape(left, 4, -1)
    out = np.einsum("ab,xby->xay", mat4, shaped)
    return out.reshape((2 ** n,) + tail)


def _weight_diag(param, n):
    """Diagonal of the n-fold product of diag(1/q, q), in site order."""
    q = _qfloat(param)
    site = np.array([1.0 / q, q])
    d = np.ones(1)
    for _ in range(n):
        d = np.kron(d, site)
    return d


class TLRep:
    """Temperley-Lieb generators e_1 .. e_{n-1} on an n-site qubit chain."""

    def __init__(self, param, n, e4):
        self.param = param
        self.n = n
        self.delta = float(param.nq)
        self._e4 = e4

    def _check_index(self, i):
        if not 1 <= i <= self.n - 1:
            raise ValueError(f"generator index {i} out of range for {self.n} sites")

    def apply(self, i, block):
        """e_i applied to a vector or to the columns of a matrix."""
        self._check_index(i)
        return _apply_pair(self._e4, i, self.n, np.asarray(block, dtype=float))

    def generator_matrix(self, i):
        self._check_index(i)
        if self.n > DENSE_LIMIT:
            raise ResourceLimitError(
                f"dense generator needs 4^{self.n} entries; limit is {DENSE_LIMIT} sites"
            )
        left = np.eye(2 ** (i - 1))
        right = np.eye(2 ** (self.n - i - 1))
        return np.kron(np.kron(left, self._e4), right)


def tl_rep(param, n):
    n = operator.index(n)
    if n < 1:
        raise ValueError("need at least one site")
    if n > MAX_STRANDS:
        raise ResourceLimitError(f"{n} sites exceeds the {MAX_STRANDS}-site limit")
    w = _defining_vector(_qfloat(param))
    return TLRep(param, n, np.outer(w, w))


def _orthonormalize(m):
    """Two-pass modified Gram-Schmidt on the columns of m, in m's dtype."""
    m = m.copy()
    for j in range(m.shape[1]):
        col = m[:, j]
        for _ in range(2):
            for i in range(j):
                col = col - (m[:, i] @ col) * m[:, i]
        nrm = np.sqrt(col @ col)
        if nrm == 0:
            raise _ChainFailure(np.inf)
        m[:, j] = col / nrm
    return m


def _wenzl_step(param, prev, m, dtype, refine):
    """Image basis on m sites from the basis on m-1 sites."""
    w = _defining_vector(_qfloat(param), dtype)
    e4 = np.outer(w, w)
    c = np.kron(prev, np.eye(2, dtype=dtype))
    hit = _apply_pair(e4, m - 1, m, c)
    ratio = float(q_number(m - 1, param) / q_number(m, param))
    k = np.eye(2 * m, dtype=dtype) - ratio * (c.T @ hit)
    k = (k + k.T) / 2
    vals, vecs = np.linalg.eigh(k.astype(np.float64))
    keep = vals > 0.5
    if int(keep.sum()) != m + 1:
        raise _ChainFailure(float(np.max(np.abs(vals - np.round(vals)))))
    if not refine:
        residual = float(np.max(np.abs(vals - np.round(vals))))
        if residual > _EIG_TOL:
            raise _ChainFailure(residual)
        return c @ vecs[:, keep], residual
    # one step of subspace iteration in extended precision, then re-orthonormalize
    v = _orthonormalize(k @ vecs[:, keep].astype(dtype))
    gram = v.T @ (k @ v)
    residual = float(np.max(np.abs(gram - np.eye(m + 1, dtype=dtype))))
    if residual > _EIG_TOL:
        raise _ChainFailure(residual)
    return c @ v, residual


def _wenzl_chain(param, n, dtype, refine):
    bases = [np.ones((1, 1), dtype=dtype), np.eye(2, dtype=dtype)]
    residuals = [0.0, 0.0]
    worst = 0.0
    for m in range(2, n + 1):
        nxt, residual = _wenzl_step(param, bases[m - 1], m, dtype, refine)
        worst = max(worst, residual)
        bases.append(nxt)
        residuals.append(worst)
    return bases, residuals


class JWProjection:
    """Top-label projection on n sites, stored through an orthonormal image basis."""

    def __init__(self, param, n, basis, eig_residual):
        self.param = param
        self.n = n
        self.basis = basis
        self.rank = basis.shape[1]
        self.eig_residual = eig_residual

    def matrix(self):
        if self.n > DENSE_LIMIT:
            raise ResourceLimitError(
                f"dense projection needs 4^{self.n} entries; limit is {DENSE_LIMIT} sites"
            )
        return self.basis @ self.basis.T

    def quantum_trace(self):
        """Trace against the product of diag(1/q, q); equals [n+1] up to roundoff."""
        d = _weight_diag(self.param, self.n)
        return float(np.einsum("x,xj,xj->", d, self.basis, self.basis))


def jones_wenzl(param, n):
    n = operator.index(n)
    if n < 0:
        raise ValueError("label must be nonnegative")
    if n > MAX_STRANDS:
        raise ResourceLimitError(f"label {n} exceeds the {MAX_STRANDS}-site limit")
    key = (param, n)
    hit = _JW_CACHE.get(key)
    if hit is not None:
        return hit
    try:
        bases, residuals = _wenzl_chain(param, n, np.float64, refine=False)
    except _ChainFailure:
        try:
            bases, residuals = _wenzl_chain(param, n, np.longdouble, refine=True)
            bases = [b.astype(np.float64) for b in bases]
        except _ChainFailure as fail:
            raise NumericalDegradationError(
                "projection eigenvalues failed to separate", residual=fail.residual
            ) from None
    for m, basis in enumerate(bases):
        basis.setflags(write=False)
        _JW_CACHE.setdefault((param, m), JWProjection(param, m, basis, residuals[m]))
    return _JW_CACHE[key]


def weight_matrix(param, alpha):
    """Positive matrix on the image basis with trace [alpha+1]; identity at q = 1."""
    jw = jones_wenzl(param, alpha)
    d = _weight_diag(param, alpha)
    m = jw.basis.T @ (d[:, None] * jw.basis)
    return (m + m.T) / 2


def _nested_cups(q, m):
    """Chain-ordered vector of m nested arcs on 2m adjacent sites."""
    w2 = _defining_vector(q).reshape(2, 2)
    cup = np.ones(1)
    for _ in range(m):
        cup = np.einsum("ab,i->aib", w2, cup).reshape(-1)
    return cup


class FusionIsometry:
    """Isometric embedding of the label-gamma image into the alpha (x) beta chain."""

    def __init__(self, param, alpha, beta, gamma, v, compressed, scale, gram_residual):
        self.param = param
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.V = v
        self.compressed = compressed
        self.scale = scale
        self.gram_residual = gram_residual


def fusion_isometry(param, alpha, beta, gamma):
    alpha = operator.index(alpha)
    beta = operator.index(beta)
    gamma = operator.index(gamma)
    if min(alpha, beta, gamma) < 0:
        raise ValueError("labels must be nonnegative")
    if alpha + beta > MAX_STRANDS:
        raise ResourceLimitError(
            f"{alpha + beta} sites exceeds the {MAX_STRANDS}-site limit"
        )
    if gamma not in fuse(alpha, beta):
        raise ValueError(f"label {gamma} is not a channel of {alpha} and {beta}")
    key = (param, alpha, beta, gamma)
    cached = _ISO_CACHE.get(key)
    if cached is not None:
        return cached

    m = (alpha + beta - gamma) // 2
    ba = jones_wenzl(param, alpha).basis
    bb = jones_wenzl(param, beta).basis
    bg = jones_wenzl(param, gamma).basis
    cup = _nested_cups(_qfloat(param), m)
    split = bg.reshape(2 ** (alpha - m), 2 ** (beta - m), gamma + 1)
    t = np.einsum("xyk,c->xcyk", split, cup).reshape(2 ** alpha, 2 ** beta, gamma + 1)
    comp = np.einsum("ai,abk->ibk", ba, t)
    comp = np.einsum("bj,ibk->ijk", bb, comp)
    flat = comp.reshape((alpha + 1) * (beta + 1), gamma + 1)
    gram = flat.T @ flat
    scale = float(np.trace(gram)) / (gamma + 1)
    if scale <= 0:
        raise NumericalDegradationError("fusion overlap collapsed", residual=scale)
    gram_residual = float(np.max(np.abs(gram - scale * np.eye(gamma + 1)))) / scale
    if gram_residual > _GRAM_TOL:
        raise NumericalDegradationError(
            "fusion overlap is not a scalar multiple of the identity",
            residual=gram_residual,
        )
    flat = flat / math.sqrt(scale)
    comp3 = flat.reshape(alpha + 1, beta + 1, gamma + 1)
    v = np.einsum("ai,ijk->ajk", ba, comp3)
    v = np.einsum("bj,ajk->abk", bb, v).reshape(2 ** (alpha + beta), gamma + 1)
    v.setflags(write=False)
    flat.setflags(write=False)
    iso = FusionIsometry(param, alpha, beta, gamma, v, flat, scale, gram_residual)
    _ISO_CACHE[key] = iso
    return iso


def _check_channel(gamma, left, right):
    if gamma < 0 or gamma not in fuse(left, right):
        raise ValueError(f"label {gamma} is not a channel of {left} and {right}")


def _pentagon_sides(param, alpha, r, s, k, l):
    """The two bracketings of the double fusion, as chain maps out of the source."""
    for label in (alpha, r, s, alpha + l, alpha + k, alpha + k + l):
        if label < 0:
            raise ValueError("labels and shifted labels must be nonnegative")
    _check_channel(alpha + l, alpha, r)
    _check_channel(alpha + k + l, s, alpha + l)
    _check_channel(alpha + k, s, alpha)
    _check_channel(alpha + k + l, alpha + k, r)
    if s + alpha + r > MAX_STRANDS:
        raise ResourceLimitError(
            f"{s + alpha + r} sites exceeds the {MAX_STRANDS}-site limit"
        )

    inner_a = fusion_isometry(param, alpha, r, alpha + l)
    outer_a = fusion_isometry(param, s, alpha + l, alpha + k + l)
    u = inner_a.V @ jones_wenzl(param, alpha + l).basis.T
    a_side = np.tensordot(
        u, outer_a.V.reshape(2 ** s, 2 ** (alpha + l), -1), axes=([1], [1])
    )
    a_side = a_side.transpose(1, 0, 2).reshape(2 ** (s + alpha + r), -1)

    inner_b = fusion_isometry(param, s, alpha, alpha + k)
    outer_b = fusion_isometry(param, alpha + k, r, alpha + k + l)
    u2 = inner_b.V @ jones_wenzl(param, alpha + k).basis.T
    b_side = np.tensordot(
        u2, outer_b.V.reshape(2 ** (alpha + k), 2 ** r, -1), axes=([1], [0])
    )
    b_side = b_side.reshape(2 ** (s + alpha + r), -1)
    return a_side, b_side


def _aligned_difference(a_side, b_side, align_phase):
    z = 1.0
    if align_phase:
        overlap = float(np.sum(a_side * b_side))
        if overlap < 0:
            z = -1.0
    return a_side - z * b_side


def pentagon_defect(param, alpha, r, s, k, l, align_phase=True):
    """Operator norm of the gap between the two bracketings of a double fusion.

    The phase freedom of each isometry is fixed, when align_phase is set,
    by the scalar of modulus one closest to the two sides in the
    Frobenius sense; for real matrices that is a sign.
    """
    a_side, b_side = _pentagon_sides(param, alpha, r, s, k, l)
    diff = _aligned_difference(a_side, b_side, align_phase)
    return float(np.linalg.svd(diff, compute_uv=False)[0])


def pentagon_bound(param, alpha, r, k):
    """Decay reference q^(alpha + (k - r)/2) for the bracketing gap."""
    return _qfloat(param) ** (alpha + (k - r) / 2)


@dataclass(frozen=True)
class CommutatorEstimate:
    alpha: int
    r: int
    s: int
    k: int
    l: int
    weighted_defect: float
    reference: float
    ratio: float
    constant: int
    passed: bool


def _weighted_defect(param, alpha, k, l):
    """Worst bracketing-gap pairing against weighted basis vectors, r = s = 1."""
    a_side, b_side = _pentagon_sides(param, alpha, 1, 1, k, l)
    diff = _aligned_difference(a_side, b_side, align_phase=True)
    qa = weight_matrix(param, alpha)
    q1 = weight_matrix(param, 1)
    za = jones_wenzl(param, alpha).basis @ qa
    probe = np.einsum("am,bi,cn->abcmin", q1, za, q1)
    probe = probe.reshape(2 ** (alpha + 2), -1)
    hit = diff.T @ probe
    norms = np.linalg.norm(hit, axis=0)
    n1 = np.linalg.norm(q1, axis=0)
    na = np.linalg.norm(za, axis=0)
    scales = np.einsum("m,i,n->min", n1, na, n1).reshape(-1)
    return float(np.max(norms / scales))


def commutator_estimate(param, alpha, r, s, k, l):
    """Weighted bracketing-gap estimate for single-letter outer factors."""
    if r != 1 or s != 1:
        raise ValueError("estimate is implemented for r = s = 1")
    if k not in (-1, 1) or l not in (-1, 1):
        raise ValueError("shifts k and l must be +1 or -1")
    if alpha + k < 0 or alpha + l < 0 or alpha + k + l < 0:
        raise ValueError("shifted labels must stay nonnegative")
    if (k, l) == (-1, -1):
        parts = [
            commutator_estimate(param, alpha, 1, 1, kk, ll)
            for kk, ll in ((1, 1), (1, -1), (-1, 1))
        ]
        weighted = sum(p.weighted_defect for p in parts)
        constant = 6
    else:
        weighted = _weighted_defect(param, alpha, k, l)
        constant = 2
    reference = _qfloat(param) ** alpha
    ratio = weighted / reference
    return CommutatorEstimate(
        alpha=alpha,
        r=1,
        s=1,
        k=k,
        l=l,
        weighted_defect=weighted,
        reference=reference,
        ratio=ratio,
        constant=constant,
        passed=ratio <= constant + 1e-9,
    )


def commutator_suite(param, alphas):
    """Estimates over all admissible sign pairs for each label in alphas."""
    rows = []
    for alpha in alphas:
        for k, l in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            if alpha + k < 0 or alpha + l < 0 or alpha + k + l < 0:
                continue
            rows.append(commutator_estimate(param, alpha, 1, 1, k, l))
    return rows


@dataclass(frozen=True)
class JWReportRow:
    n: int
    rank: int
    idempotency: float
    annihilation: float
    trace_error: float
    eig_residual: float


def jw_report(param, n_max):
    """Per-level diagnostics for the top-label projections up to n_max sites."""
    n_max = operator.index(n_max)
    if n_max < 1:
        raise ValueError("need at least one site")
    rows = []
    for n in range(1, n_max + 1):
        jw = jones_wenzl(param, n)
        b = jw.basis
        idem = float(np.linalg.norm(b.T @ b - np.eye(n + 1), 2))
        rep = tl_rep(param, n)
        ann = 0.0
        for i in range(1, n):
            sv = np.linalg.svd(rep.apply(i, b), compute_uv=False)
            ann = max(ann, float(sv[0]))
        target = float(q_number(n + 1, param))
        rows.append(
            JWReportRow(
                n=n,
                rank=jw.rank,
                idempotency=idem,
                annihilation=ann,
                trace_error=abs(jw.quantum_trace() - target),
                eig_residual=jw.eig_residual,
            )
        )
    return rows

"""Figures of merit for projector quorums.

Everything is derived from the traceless parts Q_j = P_j - (l/n) 1 and their
Hilbert-Schmidt inner products Tr(Q_i Q_j): the Gram matrix, the spanned
volume (quality), its analytic upper bound, the non-orthogonality sum L,
chordal distances, and the complement extension to the maximal set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .hilbert import Quorum, traceless_part

__all__ = [
    "QualityResult",
    "MetricsReport",
    "MaximalSet",
    "OrthoplexReport",
    "gram_matrix",
    "quality_from_gram",
    "quality_from_det",
    "quality_measure",
    "upper_bound",
    "non_orthogonality",
    "chordal_distance_sq",
    "orthoplex_report",
    "extend_to_maximal",
    "repetition_overhead",
    "worst_pairs",
    "evaluate_quorum",
]

# Eigenvalues of the Gram matrix below this are clamped before taking logs,
# so the optimizer can traverse rank-deficient regions without blowing up.
EIG_CLAMP = 1e-14


class QualityResult(NamedTuple):
    quality: float
    log_quality: float
    degenerate: bool


@dataclass(frozen=True)
class OrthoplexReport:
    """Pairwise chordal-distance summary against the bound l(n-l)/n."""

    bound: float
    min_d2: float
    max_d2: float
    pairs_total: int
    at_bound: int          # |d^2 - bound| <= tol
    at_bound_strict: int   # |d^2 - bound| <= 1e-10
    tol: float
    all_unbiased: bool


@dataclass(frozen=True)
class MaximalSet:
    """A quorum together with its complements: 2(n^2 - 1) projectors.

    Element j + (n^2 - 1) is exactly 1 - element j.
    """

    projectors: np.ndarray
    n: int
    l: int


@dataclass(frozen=True)
class MetricsReport:
    quality: float
    log_quality: float
    upper_bound: float
    relative_deviation: float
    non_orthogonality_l: float
    ln_l: float
    min_chordal_sq: float
    max_chordal_sq: float
    repetition_overhead: float
    degenerate: bool


def _pairwise_hs(projectors: np.ndarray) -> np.ndarray:
    """Real symmetric matrix of Hilbert-Schmidt products Tr(P_i P_j)."""
    m = projectors.shape[0]
    v = projectors.reshape(m, -1)
    g = (v @ v.conj().T).real
    return 0.5 * (g + g.T)


def gram_matrix(q: Quorum) -> np.ndarray:
    """Gram matrix G_ij = Tr(Q_i Q_j) of the traceless parts.

    Diagonal entries equal l - l^2/n; the matrix is exactly symmetric and
    positive semidefinite up to rounding.
    """
    shift = q.l * q.l / q.n
    return _pairwise_hs(q.projectors) - shift


def quality_from_gram(gram: np.ndarray) -> QualityResult:
    """Volume (and log-volume) spanned by the traceless parts, from their Gram.

    The log path clamps eigenvalues below EIG_CLAMP, flags the result as
    degenerate, and reports quality 0 in that case; it never raises.
    """
    eigs = np.linalg.eigvalsh(gram)
    degenerate = bool(eigs[0] < EIG_CLAMP)
    clamped = np.maximum(eigs, EIG_CLAMP)
    log_quality = 0.5 * float(np.sum(np.log(clamped)))
    quality = 0.0 if degenerate else float(np.exp(log_quality))
    return QualityResult(quality=quality, log_quality=log_quality, degenerate=degenerate)


def quality_from_det(gram: np.ndarray) -> float:
    """Direct sqrt(det G) path, kept for cross-validation at small m."""
    det = float(np.linalg.det(gram))
    return float(np.sqrt(max(det, 0.0)))


def quality_measure(q: Quorum) -> QualityResult:
    """Quality of a quorum: sqrt of the Gram determinant, computed in log space."""
    return quality_from_gram(gram_matrix(q))


def upper_bound(n: int, l: int) -> float:
    """Analytic ceiling (l(1 - l/n))^((n^2-1)/2), attained only when all
    distinct traceless parts are orthogonal."""
    if not 1 <= l < n:
        raise ValueError(f"invalid dimensions n={n}, l={l}; need 1 <= l < n")
    return float((l * (1.0 - l / n)) ** ((n * n - 1) / 2.0))


def non_orthogonality(q: Quorum) -> tuple[float, float]:
    """(L, ln L) where L sums |Tr(Q_i Q_j)| over ordered pairs i != j.

    Both (i, j) and (j, i) are counted.  ln L is -inf when L is exactly zero.
    """
    gram = gram_matrix(q)
    return non_orthogonality_from_gram(gram)


def non_orthogonality_from_gram(gram: np.ndarray) -> tuple[float, float]:
    a = np.abs(gram)
    l_sum = float(a.sum() - np.trace(a))
    ln_l = float(np.log(l_sum)) if l_sum > 0.0 else float("-inf")
    return l_sum, ln_l


def chordal_distance_sq(p_i: np.ndarray, p_j: np.ndarray) -> float:
    """Squared chordal distance l - Tr(P_i P_j) between equal-rank projectors."""
    p_i = np.asarray(p_i, dtype=complex)
    p_j = np.asarray(p_j, dtype=complex)
    if p_i.shape != p_j.shape or p_i.ndim != 2 or p_i.shape[0] != p_i.shape[1]:
        raise ValueError(f"projector shape mismatch: {p_i.shape} vs {p_j.shape}")
    l_i = np.trace(p_i).real
    l_j = np.trace(p_j).real
    if abs(l_i - l_j) > 1e-8:
        raise ValueError(f"rank mismatch: traces {l_i:.6f} vs {l_j:.6f}")
    val = l_i - np.einsum("ab,ba->", p_i, p_j).real
    return float(np.clip(val, 0.0, l_i))


def _pairwise_d2(projectors: np.ndarray, l: float) -> np.ndarray:
    return l - _pairwise_hs(projectors)


def orthoplex_report(projectors, tol: float = 1e-6) -> OrthoplexReport:
    """Summarize pairwise chordal distances of a projector set against the
    orthoplex value l(n-l)/n."""
    p = np.asarray(projectors, dtype=complex)
    if p.ndim != 3 or p.shape[0] < 2:
        raise ValueError("need at least two projectors of common shape")
    n = p.shape[-1]
    l = float(np.round(np.trace(p[0]).real))
    d2 = _pairwise_d2(p, l)
    iu = np.triu_indices(p.shape[0], k=1)
    vals = d2[iu]
    bound = l * (n - l) / n
    dev = np.abs(vals - bound)
    return OrthoplexReport(
        bound=bound,
        min_d2=float(vals.min()),
        max_d2=float(vals.max()),
        pairs_total=int(vals.size),
        at_bound=int(np.count_nonzero(dev <= tol)),
        at_bound_strict=int(np.count_nonzero(dev <= 1e-10)),
        tol=tol,
        all_unbiased=bool(np.all(dev <= tol)),
    )


def extend_to_maximal(q: Quorum) -> MaximalSet:
    """Append the complements 1 - P_j, doubling the set to 2(n^2 - 1) elements.

    Only defined for half-dimensional subspaces (l = n/2).
    """
    if 2 * q.l != q.n:
        raise ValueError(f"complement extension needs l = n/2, got n={q.n}, l={q.l}")
    eye = np.eye(q.n, dtype=complex)
    complements = eye[None, :, :] - q.projectors
    return MaximalSet(
        projectors=np.concatenate([q.projectors, complements], axis=0), n=q.n, l=q.l
    )


def repetition_overhead(relative_deviation: float, n: int) -> float:
    """Relative increase in measurement repetitions caused by a quality deficit.

    First order in the deviation: (2/(n^2-1)) * dev / (1 - dev).
    """
    if not 0.0 <= relative_deviation < 1.0:
        raise ValueError(f"relative deviation must be in [0, 1), got {relative_deviation}")
    return (2.0 / (n * n - 1)) * relative_deviation / (1.0 - relative_deviation)


def worst_pairs(gram: np.ndarray, count: int = 10) -> list[tuple[int, int, float]]:
    """The `count` largest |Tr(Q_i Q_j)| over pairs i < j, sorted descending."""
    iu = np.triu_indices(gram.shape[0], k=1)
    vals = np.abs(gram[iu])
    order = np.argsort(vals)[::-1][:count]
    return [(int(iu[0][k]), int(iu[1][k]), float(vals[k])) for k in order]


def evaluate_quorum(q: Quorum) -> MetricsReport:
    """All scalar figures of merit for one quorum, in a single report."""
    gram = gram_matrix(q)
    qual = quality_from_gram(gram)
    l_sum, ln_l = non_orthogonality_from_gram(gram)
    ub = upper_bound(q.n, q.l)
    rel_dev = (ub - qual.quality) / ub
    d2 = _pairwise_d2(q.projectors, q.l)
    iu = np.triu_indices(len(q), k=1)
    dev = min(max(rel_dev, 0.0), 1.0)
    overhead = float("inf") if dev >= 1.0 else repetition_overhead(dev, q.n)
    return MetricsReport(
        quality=qual.quality,
        log_quality=qual.log_quality,
        upper_bound=ub,
        relative_deviation=rel_dev,
        non_orthogonality_l=l_sum,
        ln_l=ln_l,
        min_chordal_sq=float(d2[iu].min()),
        max_chordal_sq=float(d2[iu].max()),
        repetition_overhead=overhead,
        degenerate=qual.degenerate,
    )

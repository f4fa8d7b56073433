"""Analytic reference sets: mutually unbiased bases and the quorums built
from them that attain the quality upper bound exactly.

These exist in dimensions 2 and 4 (and the bases alone in 3) and serve as
end-to-end oracles for the metrics and the optimizer.  A numerically found
near-optimal dimension-6 chart ships with the package as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .hilbert import Quorum, projector_from_vectors
from .metrics import MaximalSet, extend_to_maximal, orthoplex_report

__all__ = [
    "MubFamily",
    "mub_family",
    "verify_mub_family",
    "rank1_optimal_quorum_n2",
    "halfdim_optimal_quorum_n4",
    "extend_and_verify_n4",
    "chart_n2_oracle",
    "bundled_chart_n6",
    "BUNDLED_CHART_N6",
]

BUNDLED_CHART_N6 = "quorum_n6_rank3.json"


@dataclass(frozen=True)
class MubFamily:
    """n+1 mutually unbiased orthonormal bases of C^n.

    ``bases`` is a list of (n, n) arrays whose *columns* are the basis
    vectors.  All cross-basis overlaps satisfy |<e_i|f_j>|^2 = 1/n.
    """

    n: int
    bases: list


def _mubs_dim2() -> list:
    s = 1.0 / np.sqrt(2.0)
    b0 = np.eye(2, dtype=complex)
    b1 = s * np.array([[1, 1], [1, -1]], dtype=complex)
    b2 = s * np.array([[1, 1], [1j, -1j]], dtype=complex)
    return [b0, b1, b2]


def _mubs_dim3() -> list:
    w = np.exp(2j * np.pi / 3.0)
    s = 1.0 / np.sqrt(3.0)
    bases = [np.eye(3, dtype=complex)]
    k = np.arange(3)
    for a in range(3):
        cols = [s * w ** ((a * k * k + b * k) % 3) for b in range(3)]
        bases.append(np.stack(cols, axis=1))
    return bases


def _mubs_dim4() -> list:
    i = 1j
    b0 = np.eye(4, dtype=complex)
    b1 = 0.5 * np.array(
        [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]], dtype=complex
    )
    b2 = 0.5 * np.array(
        [[1, 1, 1, 1], [-1, -1, 1, 1], [-i, i, i, -i], [-i, i, -i, i]], dtype=complex
    )
    b3 = 0.5 * np.array(
        [[1, 1, 1, 1], [-i, -i, i, i], [-i, i, i, -i], [-1, 1, -1, 1]], dtype=complex
    )
    b4 = 0.5 * np.array(
        [[1, 1, 1, 1], [-i, -i, i, i], [-1, 1, 1, -1], [-i, i, -i, i]], dtype=complex
    )
    return [b0, b1, b2, b3, b4]


def mub_family(n: int) -> MubFamily:
    """A complete family of n+1 mutually unbiased bases (n in {2, 3, 4})."""
    if n == 2:
        bases = _mubs_dim2()
    elif n == 3:
        bases = _mubs_dim3()
    elif n == 4:
        bases = _mubs_dim4()
    else:
        raise ValueError(f"no MUB construction implemented for n={n}")
    fam = MubFamily(n=n, bases=bases)
    verify_mub_family(fam)
    return fam


def verify_mub_family(fam: MubFamily, tol: float = 1e-12) -> None:
    """Check orthonormality within bases and |overlap|^2 = 1/n across bases."""
    n = fam.n
    for idx, b in enumerate(fam.bases):
        dev = np.max(np.abs(b.conj().T @ b - np.eye(n)))
        if dev > tol:
            raise ValueError(f"basis {idx} is not orthonormal (deviation {dev:.3e})")
    for a in range(len(fam.bases)):
        for b in range(a + 1, len(fam.bases)):
            ov = np.abs(fam.bases[a].conj().T @ fam.bases[b]) ** 2
            dev = np.max(np.abs(ov - 1.0 / n))
            if dev > tol:
                raise ValueError(
                    f"bases {a} and {b} are not unbiased (deviation {dev:.3e})"
                )


def rank1_optimal_quorum_n2() -> Quorum:
    """Three rank-1 projectors on C^2 whose traceless parts are orthogonal.

    Projects onto |0>, |+>, |+i>; attains the quality bound (1/2)^(3/2)
    with zero non-orthogonality.
    """
    fam = mub_family(2)
    vectors = [fam.bases[0][:, 0], fam.bases[1][:, 0], fam.bases[2][:, 0]]
    projectors = np.stack([projector_from_vectors(v) for v in vectors])
    return Quorum(projectors=projectors, n=2, l=1)


def halfdim_optimal_quorum_n4() -> Quorum:
    """Fifteen rank-2 projectors on C^4 attaining the quality bound of 1.

    From each of the 5 MUBs with vectors {e1..e4}, take the projectors onto
    span{e1,e2}, span{e1,e3}, span{e1,e4}.  Sharing the first vector makes
    same-basis pairs satisfy Tr(P_a P_b) = 1, and unbiasedness makes all
    cross-basis pairs satisfy the same, so every Tr(Q_a Q_b) vanishes.
    """
    fam = mub_family(4)
    projectors = []
    for b in fam.bases:
        for partner in (1, 2, 3):
            projectors.append(projector_from_vectors(b[:, 0], b[:, partner]))
    q = Quorum(projectors=np.stack(projectors), n=4, l=2)
    gram_off = _max_offdiag_gram(q)
    if gram_off > 1e-10:
        raise AssertionError(
            f"half-dimensional construction failed: max |Tr(Q_a Q_b)| = {gram_off:.3e}"
        )
    return q


def _max_offdiag_gram(q: Quorum) -> float:
    from .metrics import gram_matrix

    g = gram_matrix(q)
    return float(np.max(np.abs(g - np.diag(np.diag(g)))))


def extend_and_verify_n4(tol: float = 1e-10):
    """Complement-extend the n=4 oracle to 30 projectors and verify the packing.

    Returns (MaximalSet, OrthoplexReport).  Every non-complementary pair sits
    at d^2 = 1 and complementary pairs at d^2 = 2.
    """
    q = halfdim_optimal_quorum_n4()
    maximal = extend_to_maximal(q)
    report = orthoplex_report(maximal.projectors, tol=tol)
    m = len(q)
    comp_d2 = np.array(
        [
            2.0 - np.einsum("ab,ba->", maximal.projectors[j], maximal.projectors[j + m]).real
            for j in range(m)
        ]
    )
    if np.max(np.abs(comp_d2 - 2.0)) > 1e-12:
        raise AssertionError("complementary pairs are not at chordal distance 2")
    return maximal, report


def chart_n2_oracle() -> np.ndarray:
    """The 4-angle chart whose quorum is exactly the n=2 oracle.

    Each free vector is (cos t, sin t e^{ip}); |+> is (t, p) = (pi/4, 0) and
    |+i> is (pi/4, pi/2).  The fixed first projector |0><0| matches the
    oracle's first element.
    """
    return np.array([np.pi / 4, 0.0, np.pi / 4, np.pi / 2])


def bundled_chart_n6() -> np.ndarray:
    """The shipped 612-angle chart of a near-optimal dimension-6 quorum.

    Found by the package's own alternating optimizer (2 restarts, 14 phases);
    its quality sits within 3.3e-5 relative of the (3/2)^(35/2) bound.
    """
    from .fileio import read_chart

    path = resources.files("tomopack.data") / BUNDLED_CHART_N6
    with resources.as_file(path) as real_path:
        angles, n, l, _meta = read_chart(real_path)
    if (n, l) != (6, 3):
        raise AssertionError(f"bundled chart has unexpected dimensions n={n}, l={l}")
    return angles

"""Numeric block unitarization for complex semigroups with circle spectra.

Floating-point companion of the exact engine: generators whose spectra
sit on circles r_S * T are normalized to unimodular determinant scale,
their closure is enumerated with tolerance deduplication, the invariant
subspace lattice is refined by numeric spinning, and each diagonal block
of size > 1 is conjugated into scaled-unitary form by averaging S*S over
the block's closure and taking a Cholesky factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

RANK_RTOL = 1e-9  # relative singular-value threshold for numeric rank


class SingularInput(ValueError):
    """An operation needed an invertible matrix."""


class NotPositiveDefinite(ValueError):
    """The averaged Gram matrix failed its Cholesky factorization."""


class ClosureNotFinite(RuntimeError):
    """The normalized closure exceeded its cap; input is out of scope."""


class NotOnCircle(ValueError):
    """A generator's spectrum does not lie on a single circle."""

    def __init__(self, index: int, report: "CircleSpectrumReport"):
        super().__init__(f"generator {index} spectrum off-circle "
                         f"(max deviation {report.max_deviation:.3e})")
        self.index = index
        self.report = report


@dataclass(frozen=True)
class CircleSpectrumReport:
    on_circle: bool
    r: float
    max_deviation: float


@dataclass(frozen=True)
class BlockUnitarizeResult:
    similarity: np.ndarray
    block_dims: tuple
    kinds: tuple       # "Scalar1x1" | "ScaledUnitary" per block
    residuals: tuple   # unitarity residual per block (normalized elements)


def spectrum_on_circle(A, tol: float = 1e-8) -> CircleSpectrumReport:
    """Do all eigenvalue moduli agree (within tol) with their mean?"""
    A = np.asarray(A, dtype=complex)
    mods = np.abs(np.linalg.eigvals(A))
    r = float(mods.mean())
    dev = float(np.max(np.abs(mods - r))) if mods.size else 0.0
    return CircleSpectrumReport(dev <= tol, r, dev)


def normalize_scale(A):
    """Split A into |det A|^{1/n} and a unimodular-determinant part."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    d = abs(np.linalg.det(A))
    if not np.isfinite(d) or d < 1e-250:
        raise SingularInput("matrix is numerically singular")
    r = d ** (1.0 / n)
    return r, A / r


def closure_numeric(gens, cap: int, dedup_tol: float = 1e-9) -> list:
    """Breadth-first closure with tolerance deduplication."""
    elems: list[np.ndarray] = []

    def known(M):
        scale = max(1.0, float(np.linalg.norm(M)))
        return any(np.linalg.norm(M - E) <= dedup_tol * scale for E in elems)

    for g in gens:
        M = np.asarray(g, dtype=complex)
        if not known(M):
            elems.append(M)
    head = 0
    while head < len(elems):
        w = elems[head]
        head += 1
        for g in gens:
            P = w @ g
            if not known(P):
                if len(elems) + 1 > cap:
                    raise ClosureNotFinite(
                        f"normalized closure exceeded cap {cap}")
                elems.append(P)
    return elems


def unitarize_bounded_group(C, tol: float = 1e-8) -> np.ndarray:
    """Similarity R making every element of the finite closure C unitary.

    Averages S*S over C (invariant under right translation when C is a
    group), factors the positive-definite mean as R*R, and returns R.
    """
    C = [np.asarray(S, dtype=complex) for S in C]
    n = C[0].shape[0]
    P = sum(S.conj().T @ S for S in C) / len(C)
    try:
        L = np.linalg.cholesky(P)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    R = L.conj().T
    return R


def unitarity_residual(S, R=None) -> float:
    """Frobenius distance of (R S R^{-1})* (R S R^{-1}) from the identity."""
    S = np.asarray(S, dtype=complex)
    if R is not None:
        S = R @ S @ np.linalg.inv(R)
    n = S.shape[0]
    return float(np.linalg.norm(S.conj().T @ S - np.eye(n)))


# ---------------------------------------------------------------------------
# numeric invariant subspaces


def _orthonormal_rank(cols) -> np.ndarray:
    M = np.column_stack(cols)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0:
        return u[:, :0]
    r = int(np.sum(s > RANK_RTOL * s[0]))
    return u[:, :r]


def _spin_numeric(v, gens) -> np.ndarray:
    """Orthonormal basis of the smallest invariant subspace containing v."""
    n = v.shape[0]
    Q = _orthonormal_rank([v])
    while True:
        cols = [Q[:, j] for j in range(Q.shape[1])]
        for A in gens:
            prod = A @ Q
            cols.extend(prod[:, j] for j in range(prod.shape[1]))
        Q2 = _orthonormal_rank(cols)
        if Q2.shape[1] == Q.shape[1] or Q2.shape[1] == n:
            return Q2
        Q = Q2


def _find_invariant_numeric(gens, seed: int):
    """Proper invariant subspace found by spinning, or None.

    Candidate start vectors are the standard basis vectors in index order
    followed by a few seeded real vectors.  Complex eigenvector candidates
    are deliberately not used, so real irreducible blocks (for example
    plane rotations) stay whole instead of splitting into complex lines.
    """
    n = gens[0].shape[0]
    rng = random.Random(seed ^ 0xB10C)
    cands = [np.eye(n, dtype=complex)[:, i] for i in range(n)]
    for _ in range(3):
        cands.append(np.array([rng.uniform(-1, 1) for _ in range(n)],
                              dtype=complex))
    for v in cands:
        if np.linalg.norm(v) < 1e-12:
            continue
        Q = _spin_numeric(v, gens)
        k = Q.shape[1]
        if 0 < k < n:
            return Q
    return None


def _complement(Q: np.ndarray) -> np.ndarray:
    n = Q.shape[0]
    u, _s, _vh = np.linalg.svd(Q, full_matrices=True)
    return u[:, Q.shape[1]:]


def _chop_numeric(gens, seed: int):
    """Recursive refinement; returns (unitary basis, block dimensions)."""
    n = gens[0].shape[0]
    if n == 1:
        return np.eye(1, dtype=complex), [1]
    Q = _find_invariant_numeric(gens, seed)
    if Q is None:
        return np.eye(n, dtype=complex), [n]
    Qc = _complement(Q)
    top = [Q.conj().T @ A @ Q for A in gens]
    bot = [Qc.conj().T @ A @ Qc for A in gens]
    U1, d1 = _chop_numeric(top, seed + 1)
    U2, d2 = _chop_numeric(bot, seed + 2)
    U = np.hstack([Q @ U1, Qc @ U2])
    return U, d1 + d2


def block_unitarize(gens, cap: int = 500, tol: float = 1e-8,
                    seed: int = 0) -> BlockUnitarizeResult:
    """Block triangularize and unitarize a circle-spectrum semigroup.

    Raises NotOnCircle when a generator violates the spectral hypothesis,
    SingularInput on a singular generator, and ClosureNotFinite when the
    normalized closure does not close up within the cap.
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    for i, g in enumerate(gens):
        rep = spectrum_on_circle(g, tol=max(tol, 1e-8))
        if not rep.on_circle:
            raise NotOnCircle(i, rep)
    normed = []
    for g in gens:
        _r, A1 = normalize_scale(g)
        normed.append(A1)
    C = closure_numeric(normed, cap)
    U, dims = _chop_numeric(C, seed)
    n = gens[0].shape[0]
    blocks = []
    offs = 0
    kinds, residuals, factors = [], [], []
    for d in dims:
        sl = slice(offs, offs + d)
        restricted = [(U.conj().T @ E @ U)[sl, sl] for E in C]
        if d == 1:
            kinds.append("Scalar1x1")
            residuals.append(max(abs(abs(B[0, 0]) - 1.0) for B in restricted))
            factors.append(np.eye(1, dtype=complex))
        else:
            R = unitarize_bounded_group(restricted, tol=tol)
            kinds.append("ScaledUnitary")
            residuals.append(max(unitarity_residual(B, R) for B in restricted))
            factors.append(R)
        offs += d
    big = np.zeros((n, n), dtype=complex)
    offs = 0
    for d, R in zip(dims, factors):
        big[offs:offs + d, offs:offs + d] = R
        offs += d
    similarity = big @ U.conj().T
    return BlockUnitarizeResult(similarity, tuple(dims), tuple(kinds),
                                tuple(float(x) for x in residuals))

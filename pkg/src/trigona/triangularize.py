"""Simultaneous triangularization by recursive chop.

Find a common invariant subspace, extend its basis, restrict and pass to
the quotient, recurse, splice the child flags back together.  Every
emitted flag is re-verified against the generators before being returned.
Triangularization never assumes any spectral hypothesis; inputs outside
the supported classes simply surface as an irreducible block or Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

from .invariant import (IRREDUCIBLE, REDUCIBLE, ReducibilityVerdict,
                        find_invariant_subspace)
from .linalg import (DimensionMismatch, Flag, Matrix, Subspace,
                     basis_extension, is_nilpotent, verify_flag)
from .semigroup import closure
from .spectrum import SpectrumReport, singleton_spectrum


class NotNilpotent(ValueError):
    """A generator handed to the nilpotent fast path is not nilpotent."""


class FlagInvalid(ValueError):
    """The flag does not triangularize the given generators."""


@dataclass(frozen=True)
class LevelInfo:
    """Which pipeline stage produced the invariant subspace at one level.

    ``path`` addresses the recursion tree: 0 descends into the restriction,
    1 into the quotient.
    """

    path: tuple
    dim: int
    stage: str
    subspace_dim: int


@dataclass(frozen=True)
class TriangularizationResult:
    outcome: str  # "flag" | "irreducible" | "unknown"
    flag: Flag = None
    level: int = None
    certificate: str = None
    diagnostics: tuple = ()

    @property
    def ok(self) -> bool:
        return self.outcome == "flag"


@dataclass(frozen=True)
class HypothesisReport:
    checked_elements: int
    all_singleton: bool
    witnesses: tuple  # up to 3 (Matrix, SpectrumReport) pairs
    closure_truncated: bool


class _Blocked(Exception):
    def __init__(self, status: str, level: int, certificate):
        self.status = status
        self.level = level
        self.certificate = certificate


def _validate(gens):
    if not gens:
        raise ValueError("need at least one generator")
    f, n = gens[0].field, gens[0].n
    for g in gens[1:]:
        if g.n != n:
            raise DimensionMismatch("generators of different dimensions")
        f.check_same(g.field)
    return f, n


def _block_diag(f, A: Matrix, B: Matrix) -> Matrix:
    n = A.n + B.n
    rows = [[f.zero] * n for _ in range(n)]
    for i in range(A.n):
        for j in range(A.n):
            rows[i][j] = A.entry(i, j)
    for i in range(B.n):
        for j in range(B.n):
            rows[A.n + i][A.n + j] = B.entry(i, j)
    return Matrix.from_rows(f, rows)


def _split_blocks(B: Matrix, d: int):
    rows = B.scalar_rows()
    top = [r[:d] for r in rows[:d]]
    bot = [r[d:] for r in rows[d:]]
    return (Matrix.from_rows(B.field, top), Matrix.from_rows(B.field, bot))


def triangularize(gens, seed: int = 0) -> TriangularizationResult:
    """Build a full simultaneous triangularizing flag, or report why not."""
    f, n = _validate(gens)
    diags = []

    def rec(sub_gens, path):
        m = sub_gens[0].n
        if m == 1:
            return Matrix.identity(f, 1)
        verdict = find_invariant_subspace(sub_gens, seed=seed)
        if verdict.status != REDUCIBLE:
            raise _Blocked(verdict.status, len(path), verdict.certificate)
        W = verdict.subspace
        d = W.dim
        diags.append(LevelInfo(path, m, verdict.stage, d))
        T0 = basis_extension(W)
        conj = [T0.inv() * g * T0 for g in sub_gens]
        tops, bots = zip(*(_split_blocks(B, d) for B in conj))
        T1 = rec(list(tops), path + (0,))
        T2 = rec(list(bots), path + (1,))
        return T0 * _block_diag(f, T1, T2)

    try:
        T = rec(list(gens), ())
    except _Blocked as b:
        outcome = "irreducible" if b.status == IRREDUCIBLE else "unknown"
        return TriangularizationResult(outcome, level=b.level,
                                       certificate=b.certificate,
                                       diagnostics=tuple(diags))
    flag = Flag(T)
    if not verify_flag(gens, flag):
        raise AssertionError("internal error: emitted flag failed verification")
    return TriangularizationResult("flag", flag=flag, diagnostics=tuple(diags))


def levitzki_triangularize(gens) -> Flag:
    """Fast path for all-nilpotent generator sets.

    Builds the descending chain W_0 = F^n, W_{k+1} = span{g w : w in W_k};
    when the generated algebra is nilpotent the chain hits 0 and any
    refinement of it is a triangularizing flag.  If the chain stagnates
    the general triangularizer is tried instead.
    """
    f, n = _validate(gens)
    for g in gens:
        if not is_nilpotent(g):
            raise NotNilpotent("a generator is not nilpotent")
    chain = [Subspace.full(f, n)]
    W = chain[0]
    while W.dim > 0:
        images = [g.apply(r) for g in gens for r in W.rows]
        W2 = Subspace.from_vectors(f, n, images)
        if W2.dim >= W.dim:
            res = triangularize(gens)
            if res.ok:
                return res.flag
            raise ValueError("generators span a non-nilpotent algebra; "
                             "no triangularizing flag exists")
        chain.append(W2)
        W = W2
    # refine the chain to a full flag: intermediate subspaces between
    # consecutive chain members are automatically invariant because each
    # step already maps W_k into W_{k+1}
    from .invariant import _Echelon
    acc = _Echelon(f, n)
    cols = []
    for W in reversed(chain):
        for v in W.rows:
            if acc.add(v) is not None:
                cols.append(list(v))
    T = Matrix.from_columns(f, cols)
    flag = Flag(T)
    if not verify_flag(gens, flag):
        raise AssertionError("internal error: chain refinement failed")
    return flag


def check_kaplansky_hypothesis(gens, cap: int = 10_000) -> HypothesisReport:
    """Enumerate the closure and test every element for singleton spectrum.

    A truncated closure means the hypothesis was only confirmed on the
    enumerated sample.
    """
    C = closure(gens, cap)
    witnesses = []
    all_singleton = True
    for M in C.elements:
        rep = singleton_spectrum(M)
        if not rep.singleton:
            all_singleton = False
            if len(witnesses) < 3:
                witnesses.append((M, rep))
    return HypothesisReport(len(C.elements), all_singleton,
                            tuple(witnesses), C.truncated)


def diagonal_of(gens, flag: Flag) -> list:
    """Diagonals of the conjugated generators, in generator order."""
    if not verify_flag(gens, flag):
        raise FlagInvalid("flag does not triangularize the generators")
    return [flag.conjugated(g).diagonal() for g in gens]

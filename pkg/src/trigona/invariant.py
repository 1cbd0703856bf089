"""Common invariant subspaces: search pipeline, oracles and splitting.

``find_invariant_subspace`` runs a staged pipeline; the first stage that
produces a verified nontrivial invariant subspace wins, and within a
stage ties break to the lexicographically smallest canonical basis.
Stages, in order:

  0. scalar family shortcut (every subspace is invariant),
  1. common kernel of the generators,
  2. column spins of nilpotent short words,
  3. base-field spectral splits of short words (summands tested for
     invariance under the whole generator set),
  4. kernels of singleton-spectrum words shifted by their eigenvalue,
     then the common eigenspace of an all-singleton generator set,
  5. kernel-vector spinning against rank-deficient shifted words, on the
     primal and on the transposed (dual) side,
  6. full-algebra certificate (spanned algebra has dimension n^2),
  7. exhaustive subspace enumeration over small prime fields.

Every reducibility verdict is re-verified before being returned.  Over Q
irreducibility is only certified by the full-algebra test; a fall-through
yields Unknown rather than a guess.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product

from .linalg import (Matrix, Polynomial, Subspace, charpoly, is_nilpotent,
                     kernel, kernel_of_rows, rref_rows)
from .scalar import Field
from .spectrum import singleton_spectrum


class ZeroVector(ValueError):
    """Spinning requires a nonzero start vector."""


class BudgetExceeded(ValueError):
    """The exhaustive subspace enumeration would be too large."""


REDUCIBLE = "reducible"
IRREDUCIBLE = "irreducible"
UNKNOWN = "unknown"

FULL_ALGEBRA = "full_algebra"
EXHAUSTIVE = "exhaustive_search"

SUBSPACE_BUDGET = 1 << 16


@dataclass(frozen=True)
class ReducibilityVerdict:
    status: str
    subspace: Subspace = None
    certificate: str = None
    stage: str = None

    @property
    def reducible(self) -> bool:
        return self.status == REDUCIBLE


# ---------------------------------------------------------------------------
# spinning and algebra dimension


class _Echelon:
    """Incremental echelon accumulator for absorbing vectors."""

    def __init__(self, field: Field, width: int):
        self.field = field
        self.width = width
        self.rows = []
        self.pivots = []

    def add(self, vec):
        """Absorb vec; return the reduced residual if it was new, else None."""
        f = self.field
        v = list(vec)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != f.zero:
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        pc = next((i for i, x in enumerate(v) if x != f.zero), None)
        if pc is None:
            return None
        s = f.inv(v[pc])
        v = [f.mul(s, x) for x in v]
        self.rows.append(tuple(v))
        self.pivots.append(pc)
        return tuple(v)

    @property
    def dim(self) -> int:
        return len(self.rows)


def _spin_vectors(vecs, gens) -> Subspace:
    f, n = gens[0].field, gens[0].n
    acc = _Echelon(f, n)
    queue = []
    for v in vecs:
        r = acc.add(v)
        if r is not None:
            queue.append(r)
    head = 0
    while head < len(queue) and acc.dim < n:
        w = queue[head]
        head += 1
        for g in gens:
            r = acc.add(g.apply(w))
            if r is not None:
                queue.append(r)
    return Subspace.from_vectors(f, n, acc.rows)


def spin(v, gens) -> Subspace:
    """Smallest subspace containing v and invariant under every generator."""
    f = gens[0].field
    v = tuple(f.coerce(x) for x in v)
    if all(x == f.zero for x in v):
        raise ZeroVector("cannot spin the zero vector")
    return _spin_vectors([v], gens)


def burnside_dimension(gens) -> int:
    """Dimension of the unital algebra spanned by words in the generators.

    Saturates a flat (n^2-coordinate) basis under left multiplication,
    starting from the identity.  Equals n^2 iff the generators act
    irreducibly (full matrix algebra).
    """
    f, n = gens[0].field, gens[0].n
    acc = _Echelon(f, n * n)
    ident = Matrix.identity(f, n)
    acc.add([x for row in ident.scalar_rows() for x in row])
    queue = [ident]
    while queue:
        M = queue.pop(0)
        for g in gens:
            P = g * M
            if acc.add([x for row in P.scalar_rows() for x in row]) is not None:
                queue.append(P)
    return acc.dim


# ---------------------------------------------------------------------------
# base-field roots and spectral splitting


def _divisors(m: int, trial_limit: int = 1_000_000) -> list:
    # trial division is capped, so divisors of huge coefficients may be
    # incomplete; any root candidate that is found is still verified
    m = abs(m)
    out = []
    d = 1
    while d * d <= m and d <= trial_limit:
        if m % d == 0:
            out.append(d)
            if d != m // d:
                out.append(m // d)
        d += 1
    return sorted(out)


def _squarefree_part(poly: Polynomial) -> Polynomial:
    """poly / gcd(poly, poly'), monic.

    Collapses repeated roots, so rational-root candidates come from the
    (small) coefficients of the squarefree part instead of huge repeated
    products.  Only used over Q, where the derivative cannot vanish.
    """
    f = poly.field
    a = poly.monic()
    b = poly.derivative()
    while b.degree >= 0 and b.coeffs:
        a, b = b.monic(), a.divmod(b.monic())[1]
    g = a  # gcd(poly, poly'), monic
    if g.degree < 1:
        return poly.monic()
    return poly.divmod(g)[0].monic()


def base_field_roots(poly: Polynomial):
    """All roots of poly in its base field, with multiplicities.

    Returns (sorted list of (root, multiplicity), remaining factor).  Over
    Q candidate roots come from the rational root theorem applied to the
    squarefree part after clearing denominators; over GF(p) every residue
    is scanned.
    """
    f = poly.field
    if poly.degree < 1:
        return [], poly
    if f.p is not None:
        cands = list(range(f.p))
    else:
        from fractions import Fraction
        from math import lcm
        sf = _squarefree_part(poly)
        den = 1
        for c in sf.coeffs:
            den = lcm(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in sf.coeffs]
        t = next(i for i, c in enumerate(ints) if c != 0)
        cset = {Fraction(0)} if t > 0 else set()
        nums = _divisors(ints[t])
        dens = _divisors(ints[-1])
        if len(nums) * len(dens) <= 1_000_000:
            for u in nums:
                for v in dens:
                    cset.add(Fraction(u, v))
                    cset.add(Fraction(-u, v))
        cands = sorted(cset)
    roots = []
    q = poly
    for c in cands:
        m = 0
        while q.degree >= 1:
            quot, rem = q.deflate(c)
            if rem != f.zero:
                break
            q = quot
            m += 1
        if m:
            roots.append((c, m))
    return roots, q


def spectral_split(B: Matrix) -> list:
    """B-invariant direct summands from the base-field spectrum of B.

    One summand, the full generalized eigenspace ker((B - cI)^n), per
    base-field root c of the characteristic polynomial; if a factor
    without base-field roots remains, its kernel ker(h(B)) is appended as
    a final summand.  The summands are pairwise independent and sum to
    F^n; a singleton list means no split exists.
    """
    f, n = B.field, B.n
    cp = charpoly(B)
    roots, rem = base_field_roots(cp)
    if not roots:
        return [Subspace.full(f, n)]
    subs = []
    for c, m in roots:
        Z = B - Matrix.scalar(f, n, c)
        if f.p is None and Z.den != 1:
            # kernels are scale invariant; drop the denominator so the
            # power stays in integer arithmetic
            Z = Matrix(f, n, Z.ents, 1)
        # the index of an eigenvalue never exceeds its algebraic
        # multiplicity, so ker((B-c)^m) already is the full generalized
        # eigenspace ker((B-c)^n)
        subs.append(kernel(Z ** m))
    if rem.degree >= 1:
        subs.append(kernel(rem.at_matrix(B)))
    assert sum(s.dim for s in subs) == n
    return subs


# ---------------------------------------------------------------------------
# exhaustive oracle over small prime fields


def _gaussian_binomial(n: int, d: int, p: int) -> int:
    num = den = 1
    for i in range(d):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def brute_force_invariant_subspaces(gens) -> list:
    """Every nontrivial proper invariant subspace, by enumeration.

    Walks all reduced-echelon bases of each dimension 1..n-1 over GF(p).
    Raises BudgetExceeded when the total subspace count passes 2^16.
    """
    f, n = gens[0].field, gens[0].n
    p = f.p
    if p is None:
        raise ValueError("exhaustive enumeration needs a prime field")
    total = sum(_gaussian_binomial(n, d, p) for d in range(1, n))
    if total > SUBSPACE_BUDGET:
        raise BudgetExceeded(f"{total} subspaces exceed the budget {SUBSPACE_BUDGET}")
    found = []
    for d in range(1, n):
        for piv in combinations(range(n), d):
            pivset = set(piv)
            free_pos = [(i, j) for i in range(d) for j in range(n)
                        if j > piv[i] and j not in pivset]
            for vals in product(range(p), repeat=len(free_pos)):
                rows = [[0] * n for _ in range(d)]
                for i in range(d):
                    rows[i][piv[i]] = 1
                for (i, j), v in zip(free_pos, vals):
                    rows[i][j] = v
                W = Subspace(f, n, tuple(tuple(r) for r in rows), piv)
                if _is_invariant(W, gens):
                    found.append(W)
    return found


def _is_invariant(W: Subspace, gens) -> bool:
    return all(W.contains(g.apply(r)) for g in gens for r in W.rows)


def _certify(W: Subspace, gens, stage: str) -> ReducibilityVerdict:
    n = gens[0].n
    assert 0 < W.dim < n, f"stage {stage} produced a trivial subspace"
    assert _is_invariant(W, gens), f"stage {stage} produced a non-invariant subspace"
    return ReducibilityVerdict(REDUCIBLE, W, stage=stage)


# ---------------------------------------------------------------------------
# the pipeline


def _short_words(gens, max_len: int = 4, limit: int = 200) -> list:
    seen = set()
    words, layer = [], []
    for g in gens:
        k = g._key()
        if k not in seen:
            seen.add(k)
            words.append(g)
            layer.append(g)
    for _ in range(max_len - 1):
        nxt = []
        for w in layer:
            for g in gens:
                m = w * g
                k = m._key()
                if k not in seen:
                    seen.add(k)
                    words.append(m)
                    nxt.append(m)
                    if len(words) >= limit:
                        return words
        layer = nxt
        if not layer:
            break
    return words


class _WordInfo:
    """Per-word cache of charpoly roots (and the rootless factor)."""

    def __init__(self):
        self._info = {}

    def get(self, w: Matrix):
        k = w._key()
        info = self._info.get(k)
        if info is None:
            roots, rem = base_field_roots(charpoly(w))
            info = self._info[k] = (roots, rem)
        return info


def _kernel_probe_vectors(K: Subspace, rng: random.Random) -> list:
    """Vectors of the kernel worth spinning, deterministically ordered.

    Over a small prime field all projective kernel vectors are listed;
    otherwise the echelon basis plus a couple of seeded combinations.
    """
    f = K.field
    d = K.dim
    vecs = list(K.rows)
    if f.p is not None and f.p ** d <= 64:
        vecs = []
        for coef in product(range(f.p), repeat=d):
            nz = next((c for c in coef if c), None)
            if nz != 1:  # one representative per projective point
                continue
            v = [f.zero] * K.ambient
            for c, row in zip(coef, K.rows):
                if c:
                    v = [f.add(x, f.mul(c, y)) for x, y in zip(v, row)]
            vecs.append(tuple(v))
        return vecs
    if d > 1:
        for _ in range(2):
            if f.p is None:
                coef = [rng.randint(-3, 3) for _ in range(d)]
            else:
                coef = [rng.randrange(f.p) for _ in range(d)]
            if all(c == 0 for c in coef):
                coef[0] = 1
            v = [f.zero] * K.ambient
            for c, row in zip(coef, K.rows):
                v = [f.add(x, f.mul(f.from_int(c), y)) for x, y in zip(v, row)]
            if any(x != f.zero for x in v):
                vecs.append(tuple(v))
    return vecs


def find_invariant_subspace(gens, seed: int = 0) -> ReducibilityVerdict:
    """Common nontrivial invariant subspace of the generators, or a
    certificate of irreducibility, or Unknown.

    Evaluation order is fixed, so the first success within a stage is
    deterministic: words in breadth-first order, roots ascending.
    """
    if not gens:
        raise ValueError("need at least one generator")
    f, n = gens[0].field, gens[0].n
    if n < 2:
        raise ValueError("ambient dimension must be at least 2")

    # stage 0: scalar families leave every subspace invariant
    if all(g.is_scalar() for g in gens):
        e1 = Subspace.from_vectors(
            f, n, [tuple(f.one if i == 0 else f.zero for i in range(n))])
        return _certify(e1, gens, "scalar_family")

    # stage 1: common kernel
    stacked = [row for g in gens for row in g.scalar_rows()]
    K = kernel_of_rows(f, stacked, n)
    if 0 < K.dim < n:
        return _certify(K, gens, "common_kernel")

    # generators and pairwise products feed the cheap stages; the spin
    # stage later widens to words of length up to 4
    words = _short_words(gens, max_len=2)
    info = _WordInfo()

    # stage 2: column spins of nilpotent words
    for w in words:
        if not w.is_zero() and is_nilpotent(w):
            cols = [w.column(j) for j in range(n)]
            cols = [c for c in cols if any(x != f.zero for x in c)]
            V = _spin_vectors(cols, gens)
            if 0 < V.dim < n:
                return _certify(V, gens, "nilpotent_word")

    # stage 3: spectral splits tested for invariance under the whole set
    for w in words:
        roots, rem = info.get(w)
        pieces = len(roots) + (1 if rem.degree >= 1 else 0)
        if pieces < 2:
            continue
        for V in spectral_split(w):
            if 0 < V.dim < n and _is_invariant(V, gens):
                return _certify(V, gens, "spectral_split")

    # stage 4: kernels of singleton words shifted by their eigenvalue
    reports = {}
    for w in words:
        rep = singleton_spectrum(w)
        reports[w._key()] = rep
        if rep.singleton and not w.is_scalar():
            V = kernel(w - Matrix.scalar(f, n, rep.c))
            if 0 < V.dim < n and _is_invariant(V, gens):
                return _certify(V, gens, "singleton_kernel")

    # stage 4b: common eigenspace of an all-singleton generator set;
    # if v is killed by every g - c_g I then g v = c_g v stays inside
    gen_reports = [reports.get(g._key()) or singleton_spectrum(g) for g in gens]
    if all(r.singleton for r in gen_reports):
        stacked = []
        for g, r in zip(gens, gen_reports):
            stacked.extend((g - Matrix.scalar(f, n, r.c)).scalar_rows())
        K = kernel_of_rows(f, stacked, n)
        if 0 < K.dim < n:
            return _certify(K, gens, "common_eigenspace")

    # stage 5: kernel-vector spinning against rank-deficient shifted words,
    # primal and dual
    long_words = _short_words(gens, max_len=4)
    zs = []
    zseen = set()
    for w in long_words:
        roots, _rem = info.get(w)
        for c, _m in roots:
            z = w - Matrix.scalar(f, n, c)
            if not z.is_zero() and z._key() not in zseen:
                zseen.add(z._key())
                zs.append(z)
        if not w.is_zero() and w.det() == f.zero and w._key() not in zseen:
            zseen.add(w._key())
            zs.append(w)
    rng = random.Random(seed ^ 0x5EED5)
    gensT = None
    for z in zs:
        K = kernel(z)
        if 0 < K.dim < n:
            for v in _kernel_probe_vectors(K, rng):
                V = _spin_vectors([v], gens)
                if 0 < V.dim < n:
                    return _certify(V, gens, "norton_spin")
        KT = kernel(z.transpose())
        if 0 < KT.dim < n:
            if gensT is None:
                gensT = [g.transpose() for g in gens]
            for v in _kernel_probe_vectors(KT, rng):
                U = _spin_vectors([v], gensT)
                if 0 < U.dim < n:
                    W = U.annihilator()
                    if 0 < W.dim < n and _is_invariant(W, gens):
                        return _certify(W, gens, "norton_dual")

    # stage 6: full-algebra certificate
    if burnside_dimension(gens) == n * n:
        return ReducibilityVerdict(IRREDUCIBLE, certificate=FULL_ALGEBRA,
                                   stage="burnside")

    # stage 7: exhaustive oracle over small prime fields
    if f.p is not None:
        try:
            subs = brute_force_invariant_subspaces(gens)
        except BudgetExceeded:
            subs = None
        if subs is not None:
            if subs:
                return _certify(subs[0], gens, "brute_force")
            return ReducibilityVerdict(IRREDUCIBLE, certificate=EXHAUSTIVE,
                                       stage="brute_force")

    return ReducibilityVerdict(UNKNOWN)

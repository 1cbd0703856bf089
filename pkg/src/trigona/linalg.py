"""Dense exact matrix algebra over Q and GF(p).

Matrices are immutable and stored as a flat tuple of integers plus one
common positive denominator (always 1 over a prime field).  Keeping the
entries integral makes products cheap (one gcd pass per product instead
of one per entry) and makes equality, hashing and canonical text forms
trivial.  Entry (i, j) as a field scalar is ``Fraction(ents[i*n+j], den)``
over Q and ``ents[i*n+j]`` over GF(p).

Subspaces are kept in reduced row echelon form, so two equal subspaces
have identical representations and can be compared bytewise.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from operator import mul as _mul

from .scalar import Field, FieldMismatch, Q


class SingularMatrix(ValueError):
    """A matrix required to be invertible is singular."""


class NotInvariant(ValueError):
    """A subspace claimed invariant is not preserved by the matrix."""


class DimensionMismatch(ValueError):
    """Matrices of different sizes (or vs. vector length) were combined."""


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable square matrix over one field."""

    __slots__ = ("field", "n", "ents", "den")

    def __init__(self, field: Field, n: int, ents: tuple, den: int):
        # internal constructor: callers must pass normalized data
        self.field = field
        self.n = n
        self.ents = ents
        self.den = den

    # -- construction ------------------------------------------------------

    @staticmethod
    def _normalized(field: Field, n: int, ents, den: int) -> "Matrix":
        p = field.p
        if p is not None:
            return Matrix(field, n, tuple(e % p for e in ents), 1)
        if den < 0:
            den = -den
            ents = [-e for e in ents]
        g = den
        for e in ents:
            g = gcd(g, e)
            if g == 1:
                break
        if g > 1:
            ents = [e // g for e in ents]
            den //= g
        return Matrix(field, n, tuple(ents), den)

    @classmethod
    def from_rows(cls, field: Field, rows) -> "Matrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        if field.p is not None:
            ents = [field.coerce(x) for row in rows for x in row]
            return cls._normalized(field, n, ents, 1)
        fracs = [field.coerce(x) for row in rows for x in row]
        den = 1
        for f in fracs:
            den = lcm(den, f.denominator)
        ents = [f.numerator * (den // f.denominator) for f in fracs]
        return cls._normalized(field, n, ents, den)

    @classmethod
    def from_columns(cls, field: Field, cols) -> "Matrix":
        n = len(cols)
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        return cls.from_rows(field, rows)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        ents = [0] * (n * n)
        for i in range(n):
            ents[i * n + i] = 1
        return cls._normalized(field, n, ents, 1)

    @classmethod
    def zeros(cls, field: Field, n: int) -> "Matrix":
        return cls(field, n, (0,) * (n * n), 1)

    @classmethod
    def scalar(cls, field: Field, n: int, c) -> "Matrix":
        return cls.identity(field, n).scale(field.coerce(c))

    # -- basic views ---------------------------------------------------------

    def _key(self):
        return (self.field.kind, self.field.p, self.n, self.ents, self.den)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def entry(self, i: int, j: int):
        e = self.ents[i * self.n + j]
        if self.field.p is not None:
            return e
        return Fraction(e, self.den)

    def scalar_rows(self) -> list:
        """Entries as a list of lists of field scalars."""
        n, den = self.n, self.den
        if self.field.p is not None:
            return [list(self.ents[i * n:(i + 1) * n]) for i in range(n)]
        return [[Fraction(e, den) for e in self.ents[i * n:(i + 1) * n]]
                for i in range(n)]

    def diagonal(self) -> tuple:
        return tuple(self.entry(i, i) for i in range(self.n))

    def column(self, j: int) -> tuple:
        return tuple(self.entry(i, j) for i in range(self.n))

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_strings()})"

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Matrix"):
        self.field.check_same(other.field)
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        n = self.n
        a, b = self.ents, other.ents
        cols = [b[j::n] for j in range(n)]
        out = []
        for i in range(n):
            row = a[i * n:(i + 1) * n]
            for col in cols:
                out.append(sum(map(_mul, row, col)))
        p = self.field.p
        if p is not None:
            return Matrix(self.field, n, tuple(e % p for e in out), 1)
        return Matrix._normalized(self.field, n, out, self.den * other.den)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        p = self.field.p
        if p is not None:
            ents = [(x + y) % p for x, y in zip(self.ents, other.ents)]
            return Matrix(self.field, self.n, tuple(ents), 1)
        d = lcm(self.den, other.den)
        sa, sb = d // self.den, d // other.den
        ents = [x * sa + y * sb for x, y in zip(self.ents, other.ents)]
        return Matrix._normalized(self.field, self.n, ents, d)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        p = self.field.p
        if p is not None:
            return Matrix(self.field, self.n, tuple((-e) % p for e in self.ents), 1)
        return Matrix(self.field, self.n, tuple(-e for e in self.ents), self.den)

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        if self.field.p is not None:
            return Matrix(self.field, self.n,
                          tuple((e * c) % self.field.p for e in self.ents), 1)
        ents = [e * c.numerator for e in self.ents]
        return Matrix._normalized(self.field, self.n, ents, self.den * c.denominator)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inv() ** (-k)
        result = Matrix.identity(self.field, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        n = self.n
        ents = tuple(self.ents[j * n + i] for i in range(n) for j in range(n))
        return Matrix(self.field, n, ents, self.den)

    def apply(self, vec) -> tuple:
        """Matrix times column vector of field scalars."""
        n = self.n
        if len(vec) != n:
            raise DimensionMismatch("vector length does not match")
        p = self.field.p
        if p is not None:
            return tuple(sum(map(_mul, self.ents[i * n:(i + 1) * n], vec)) % p
                         for i in range(n))
        d = self.den
        return tuple(Fraction(1, 1) * sum(e * x for e, x in
                                          zip(self.ents[i * n:(i + 1) * n], vec)) / d
                     for i in range(n))

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.ents)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.field, self.n)

    def is_scalar(self) -> bool:
        n = self.n
        c = self.ents[0]
        for i in range(n):
            for j in range(n):
                e = self.ents[i * n + j]
                if i == j:
                    if e != c:
                        return False
                elif e != 0:
                    return False
        return True

    def is_upper_triangular(self) -> bool:
        n = self.n
        return all(self.ents[i * n + j] == 0
                   for i in range(1, n) for j in range(i))

    def trace(self):
        n = self.n
        t = sum(self.ents[i * n + i] for i in range(n))
        if self.field.p is not None:
            return t % self.field.p
        return Fraction(t, self.den)

    def det(self):
        d = _int_det(self.ents, self.n)
        if self.field.p is not None:
            return d % self.field.p
        return Fraction(d, self.den ** self.n)

    def inv(self) -> "Matrix":
        f, n = self.field, self.n
        rows = self.scalar_rows()
        aug = [rows[i] + [f.one if j == i else f.zero for j in range(n)]
               for i in range(n)]
        red, piv = rref_rows(f, aug, 2 * n)
        if list(piv[:n]) != list(range(n)):
            raise SingularMatrix("matrix is not invertible")
        return Matrix.from_rows(f, [list(r[n:]) for r in red])

    # -- text form -----------------------------------------------------------

    def to_strings(self) -> list:
        f, n = self.field, self.n
        return [[f.format(self.entry(i, j)) for j in range(n)] for i in range(n)]

    @classmethod
    def parse(cls, field: Field, rows) -> "Matrix":
        return cls.from_rows(field, [[field.parse(str(x)) for x in row] for row in rows])


def _int_det(ents, n: int) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    if n == 0:
        return 1
    m = [list(ents[i * n:(i + 1) * n]) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi, mk = m[i], m[k]
            a = mi[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pivot - a * mk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def is_nilpotent(A: Matrix) -> bool:
    """True iff some power of A vanishes (checked exactly via A^n)."""
    B = A
    k = 1
    while k < A.n:
        B = B * B
        k *= 2
    return B.is_zero()


# ---------------------------------------------------------------------------
# row reduction and subspaces


def rref_rows(field: Field, rows, width: int):
    """Reduced row echelon form over the field.

    Returns (tuple of nonzero row tuples, tuple of pivot columns).
    """
    mat = [list(r) for r in rows]
    zero, one = field.zero, field.one
    piv = []
    r = 0
    nrows = len(mat)
    for c in range(width):
        pr = None
        for i in range(r, nrows):
            if mat[i][c] != zero:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        if mat[r][c] != one:
            s = field.inv(mat[r][c])
            mat[r] = [field.mul(s, x) for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != zero:
                fac = mat[i][c]
                row_r = mat[r]
                mat[i] = [field.sub(x, field.mul(fac, y))
                          for x, y in zip(mat[i], row_r)]
        piv.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(piv)


def kernel_of_rows(field: Field, rows, width: int) -> "Subspace":
    """Canonical basis of the joint kernel of the given row constraints."""
    red, piv = rref_rows(field, rows, width)
    pivset = set(piv)
    basis = []
    for fc in range(width):
        if fc in pivset:
            continue
        v = [field.zero] * width
        v[fc] = field.one
        for ridx, pc in enumerate(piv):
            v[pc] = field.neg(red[ridx][fc])
        basis.append(tuple(v))
    return Subspace.from_vectors(field, width, basis)


class Subspace:
    """A subspace of F^n held as canonical reduced-echelon basis rows."""

    __slots__ = ("field", "ambient", "rows", "pivots")

    def __init__(self, field: Field, ambient: int, rows: tuple, pivots: tuple):
        self.field = field
        self.ambient = ambient
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, field: Field, ambient: int, vecs) -> "Subspace":
        vecs = [tuple(field.coerce(x) for x in v) for v in vecs]
        rows, piv = rref_rows(field, vecs, ambient)
        return cls(field, ambient, rows, piv)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls.from_vectors(field, ambient,
                                [tuple(field.one if j == i else field.zero
                                       for j in range(ambient))
                                 for i in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field.kind, self.field.p, self.ambient, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rows={self.rows})"

    def reduce(self, vec) -> tuple:
        """Residual of vec after elimination against the basis rows."""
        f = self.field
        v = [f.coerce(x) for x in vec]
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != f.zero:
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, vec) -> bool:
        return all(x == self.field.zero for x in self.reduce(vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def sum_with(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(self.field, self.ambient,
                                     list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        # Zassenhaus: echelonize [r|r] over self and [s|0] over other; rows
        # whose left half vanished carry the intersection in the right half.
        f, n = self.field, self.ambient
        stacked = [tuple(r) + tuple(r) for r in self.rows]
        stacked += [tuple(s) + (f.zero,) * n for s in other.rows]
        red, _ = rref_rows(f, stacked, 2 * n)
        vecs = [r[n:] for r in red if all(x == f.zero for x in r[:n])]
        return Subspace.from_vectors(f, n, vecs)

    def annihilator(self) -> "Subspace":
        """Vectors orthogonal (standard dot) to every basis vector."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient)
        return kernel_of_rows(self.field, list(self.rows), self.ambient)


def kernel(A: Matrix) -> Subspace:
    """Canonical echelon basis of the null space of A."""
    return kernel_of_rows(A.field, A.scalar_rows(), A.n)


def rank(A: Matrix) -> int:
    red, _ = rref_rows(A.field, A.scalar_rows(), A.n)
    return len(red)


def conjugate(A: Matrix, T: Matrix) -> Matrix:
    """T^{-1} A T; raises SingularMatrix when T is not invertible."""
    A._check(T)
    return T.inv() * A * T


def basis_extension(W: Subspace) -> Matrix:
    """Invertible matrix whose first dim(W) columns are the basis of W.

    The completion greedily appends standard basis vectors in index order
    (the non-pivot coordinates), which keeps the output deterministic.
    """
    f, n = W.field, W.ambient
    cols = [list(r) for r in W.rows]
    pivset = set(W.pivots)
    for j in range(n):
        if j not in pivset:
            cols.append([f.one if i == j else f.zero for i in range(n)])
    return Matrix.from_columns(f, cols)


def restrict_and_quotient(A: Matrix, W: Subspace):
    """Restriction of A to the invariant subspace W and the quotient action.

    Extends the basis of W to a basis of F^n; in that basis A is block
    upper triangular and the two diagonal blocks are returned.
    """
    if A.field != W.field or A.n != W.ambient:
        raise DimensionMismatch("matrix and subspace do not match")
    d = W.dim
    if not 0 < d < A.n:
        raise NotInvariant("subspace must be proper and nonzero")
    for r in W.rows:
        if not W.contains(A.apply(r)):
            raise NotInvariant("subspace is not invariant under the matrix")
    T = basis_extension(W)
    B = conjugate(A, T)
    n = A.n
    f = A.field
    rows = B.scalar_rows()
    top = [row[:d] for row in rows[:d]]
    bot = [row[d:] for row in rows[d:]]
    assert all(x == f.zero for row in rows[d:] for x in row[:d])
    return Matrix.from_rows(f, top), Matrix.from_rows(f, bot)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Dense polynomial over a field, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        coeffs = [field.coerce(c) for c in coeffs]
        while coeffs and coeffs[-1] == field.zero:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.kind, self.field.p, self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.coeffs})"

    def __call__(self, x):
        f = self.field
        x = f.coerce(x)
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def at_matrix(self, M: Matrix) -> Matrix:
        acc = Matrix.zeros(M.field, M.n)
        ident = Matrix.identity(M.field, M.n)
        for c in reversed(self.coeffs):
            acc = acc * M + ident.scale(c)
        return acc

    def mul(self, other: "Polynomial") -> "Polynomial":
        f = self.field
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(f, out)

    def deflate(self, c):
        """Synthetic division by (x - c); returns (quotient, remainder)."""
        f = self.field
        c = f.coerce(c)
        if not self.coeffs:
            return Polynomial(f, []), f.zero
        quot = [f.zero] * (len(self.coeffs) - 1)
        carry = f.zero
        for i in range(len(self.coeffs) - 1, 0, -1):
            carry = f.add(self.coeffs[i], f.mul(c, carry))
            quot[i - 1] = carry
        rem = f.add(self.coeffs[0], f.mul(c, carry))
        return Polynomial(f, quot), rem

    def derivative(self) -> "Polynomial":
        f = self.field
        return Polynomial(f, [f.mul(f.from_int(i), c)
                              for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "Polynomial"):
        """Long division; the divisor's leading coefficient is inverted."""
        f = self.field
        if other.degree < 0:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead_inv = f.inv(other.coeffs[-1])
        quot = [f.zero] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            q = f.mul(rem[i], lead_inv)
            quot[i - d] = q
            if q != f.zero:
                for j, oc in enumerate(other.coeffs):
                    rem[i - d + j] = f.sub(rem[i - d + j], f.mul(q, oc))
        return Polynomial(f, quot), Polynomial(f, rem[:d])

    def monic(self) -> "Polynomial":
        f = self.field
        if not self.coeffs or self.coeffs[-1] == f.one:
            return self
        s = f.inv(self.coeffs[-1])
        return Polynomial(f, [f.mul(s, c) for c in self.coeffs])


def charpoly(A: Matrix) -> Polynomial:
    """Characteristic polynomial det(xI - A), division-free.

    Uses the Berkowitz vector recursion so the same code path serves Q and
    every GF(p); no division by integers that could vanish mod p occurs.
    """
    f, n = A.field, A.n
    rows = A.scalar_rows()
    V = [f.one]
    for k in range(1, n + 1):
        a = rows[k - 1][k - 1]
        t = [f.one, f.neg(a)]
        if k > 1:
            R = rows[k - 1][:k - 1]
            w = [rows[i][k - 1] for i in range(k - 1)]
            s = f.zero
            for x, y in zip(R, w):
                s = f.add(s, f.mul(x, y))
            t.append(f.neg(s))
            for _ in range(k - 2):
                w = [_dot(f, rows[i][:k - 1], w) for i in range(k - 1)]
                s = f.zero
                for x, y in zip(R, w):
                    s = f.add(s, f.mul(x, y))
                t.append(f.neg(s))
        new = []
        for i in range(k + 1):
            acc = f.zero
            for j in range(max(0, i - k), min(i, k - 1) + 1):
                acc = f.add(acc, f.mul(t[i - j], V[j]))
            new.append(acc)
        V = new
    return Polynomial(f, list(reversed(V)))


def _dot(f: Field, xs, ys):
    acc = f.zero
    for x, y in zip(xs, ys):
        acc = f.add(acc, f.mul(x, y))
    return acc


# ---------------------------------------------------------------------------
# flags


class Flag:
    """Full chain of nested subspaces encoded by a basis-change matrix.

    The first j columns of T span the j-th chain subspace; conjugating a
    matrix that preserves the chain by T makes it upper triangular.
    """

    __slots__ = ("T", "Tinv")

    def __init__(self, T: Matrix):
        self.T = T
        self.Tinv = T.inv()  # raises SingularMatrix on bad input

    @property
    def dims(self) -> tuple:
        return tuple(range(self.T.n + 1))

    def conjugated(self, A: Matrix) -> Matrix:
        return self.Tinv * A * self.T

    def __repr__(self):
        return f"Flag(n={self.T.n})"


def verify_flag(gens, flag: Flag) -> bool:
    """True iff T^{-1} S T is exactly upper triangular for every S."""
    for g in gens:
        if g.n != flag.T.n or g.field != flag.T.field:
            return False
        if not flag.conjugated(g).is_upper_triangular():
            return False
    return True

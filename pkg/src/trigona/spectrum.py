"""Singleton-spectrum detection over Q and GF(p).

A matrix has singleton spectrum iff it equals cI + N with N nilpotent.
The candidate eigenvalue c always lies in the base field for the fields
supported here:

* ch 0, or ch p with p not dividing n: a singleton spectrum {c} forces
  n*c = trace(A), so c = trace(A)/n is already in the base field.
* p | n: write n = p^e * m with p not dividing m.  If the spectrum is {c}
  then the characteristic polynomial is (x - c)^n = (x^{p^e} - c^{p^e})^m,
  whose coefficient at x^{p^e(m-1)} equals -m * c^{p^e}.  Dividing by -m
  (invertible mod p) recovers c^{p^e}; on a prime field the p-power map is
  the identity, so c itself falls out via frobenius_root.

Either way the candidate is verified exactly by checking (A - cI)^n = 0,
so the decision is total and never leaves the base field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, charpoly
from .scalar import frobenius_root


@dataclass(frozen=True)
class SpectrumReport:
    """Outcome of the singleton-spectrum test.

    c and nil_index are only present when singleton is true; nil_index is
    the least k with (A - cI)^k = 0.
    """

    singleton: bool
    c: object = None
    nil_index: int = None

    def to_jsonable(self, field) -> dict:
        return {
            "singleton": self.singleton,
            "c": field.format(self.c) if self.singleton else None,
            "nil_index": self.nil_index,
        }


def _nil_index(B: Matrix, bound: int):
    P = B
    for k in range(1, bound + 1):
        if P.is_zero():
            return k
        P = P * B
    return None


def singleton_spectrum(A: Matrix) -> SpectrumReport:
    """Decide whether A = cI + N with N nilpotent and extract c."""
    f, n = A.field, A.n
    p = f.p
    if p is None or n % p != 0:
        c = f.div(A.trace(), f.from_int(n))
    else:
        e, m = 0, n
        while m % p == 0:
            m //= p
            e += 1
        q = p ** e
        cp = charpoly(A)
        coeff = cp.coeffs[q * (m - 1)] if q * (m - 1) < len(cp.coeffs) else f.zero
        c_q = f.div(f.neg(coeff), f.from_int(m))
        c = frobenius_root(f, c_q, e)
    B = A - Matrix.scalar(f, n, c)
    k = _nil_index(B, n)
    if k is None:
        return SpectrumReport(False)
    return SpectrumReport(True, c, k)


def is_unipotent(A: Matrix) -> bool:
    """True iff (A - I)^n = 0."""
    B = A - Matrix.identity(A.field, A.n)
    return _nil_index(B, A.n) is not None

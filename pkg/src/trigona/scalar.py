"""Exact coefficient fields: arbitrary-precision rationals and GF(p).

Scalar values are plain Python objects (``fractions.Fraction`` for the
rationals, canonical residues as ``int`` for a prime field).  A ``Field``
object carries the descriptor together with the arithmetic, so containers
such as matrices can hold bare values and stay cheap.
"""

from __future__ import annotations

from fractions import Fraction


class DivisionByZero(ZeroDivisionError):
    """Raised when inverting or dividing by the zero element of a field."""


class FieldMismatch(ValueError):
    """Raised when values or containers over distinct fields are combined."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


class Field:
    """Descriptor plus arithmetic for one supported coefficient field.

    Subclasses provide ``zero``, ``one`` and the operation family
    add/sub/mul/neg/div/inv, all total except division by zero.
    """

    kind: str = "?"
    p = None  # modulus for a prime field, None for the rationals

    def check_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatch(f"cannot mix {self} and {other}")

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def descriptor(self) -> dict:
        if self.p is None:
            return {"kind": "Q"}
        return {"kind": "GFp", "p": self.p}

    def __repr__(self):
        return self.kind if self.p is None else f"GF({self.p})"


class RationalField(Field):
    """The rationals, backed by ``fractions.Fraction`` (always reduced)."""

    kind = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def from_int(self, k: int) -> Fraction:
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("1/0 in Q")
        return 1 / a

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {text!r}: {exc}") from None

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    """GF(p) for a prime p; elements are residues in [0, p)."""

    kind = "GFp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x) -> int:
        if isinstance(x, str):
            x = int(x.strip())
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise TypeError(f"cannot coerce {x} into GF({self.p})")
            x = x.numerator
        if not isinstance(x, int):
            raise TypeError(f"cannot coerce {x!r} into GF({self.p})")
        return x % self.p

    def from_int(self, k: int) -> int:
        return k % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"1/0 in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def parse(self, text: str) -> int:
        try:
            return int(text.strip()) % self.p
        except ValueError as exc:
            raise ValueError(f"bad residue literal {text!r}: {exc}") from None

    def format(self, a) -> str:
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GFp", self.p))


Q = RationalField()

_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    """Return the (cached) prime field with modulus p."""
    f = _GF_CACHE.get(p)
    if f is None:
        f = _GF_CACHE[p] = PrimeField(p)
    return f


def field_from_descriptor(desc: dict) -> Field:
    kind = desc.get("kind")
    if kind == "Q":
        return Q
    if kind == "GFp":
        return GF(int(desc["p"]))
    raise ValueError(f"unknown field descriptor {desc!r}")


def frobenius_root(field: Field, a, e: int):
    """Invert the e-fold p-power map on a prime field.

    On GF(p) the p-power map is the identity (Fermat), so the root is the
    element itself.  The function exists as a named seam so extension
    fields could slot in later without touching callers.
    """
    if field.p is None:
        raise FieldMismatch("frobenius_root is only defined over a prime field")
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return field.coerce(a)

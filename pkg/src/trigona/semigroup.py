"""Finite multiplicative closures of matrix generator sets.

The closure is enumerated breadth first by right-multiplying discovered
elements with the generators (every word of length k+1 is a shorter word
times a generator), deduplicating on the canonical matrix representation.
Enumeration is deterministic: generators first in the order given, then
products in discovery order.

The zero matrix is dropped by default; the ``include_zero`` flag adjoins
it instead.  Consequently "closed under multiplication" is understood
modulo the dropped zero: a product of elements is either an element or
the excluded zero matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, is_nilpotent
from .scalar import FieldMismatch


class TruncatedClosure(ValueError):
    """An operation that needs a complete closure got a truncated one."""


@dataclass(frozen=True)
class SemigroupClosure:
    elements: tuple
    generator_count: int
    cap: int
    truncated: bool
    include_zero: bool


def closure(gens, cap: int = 10_000, include_zero: bool = False) -> SemigroupClosure:
    """Breadth-first product saturation of the generator set.

    Stops with ``truncated=True`` the moment the distinct-element count
    would exceed ``cap``.
    """
    if not gens:
        raise ValueError("need at least one generator")
    f, n = gens[0].field, gens[0].n
    for g in gens[1:]:
        if g.field != f:
            raise FieldMismatch("generators over different fields")
        if g.n != n:
            raise ValueError("generators of different dimensions")
    if cap < len(gens):
        raise ValueError("cap must be at least the generator count")

    elements: list[Matrix] = []
    seen: set = set()
    truncated = False

    def add(M: Matrix) -> bool:
        nonlocal truncated
        if M.is_zero() and not include_zero:
            return False
        k = M._key()
        if k in seen:
            return False
        if len(elements) + 1 > cap:
            truncated = True
            return False
        seen.add(k)
        elements.append(M)
        return True

    for g in gens:
        add(g)
        if truncated:
            break
    if include_zero and not truncated:
        add(Matrix.zeros(f, n))

    head = 0
    while head < len(elements) and not truncated:
        w = elements[head]
        head += 1
        for g in gens:
            add(w * g)
            if truncated:
                break

    return SemigroupClosure(tuple(elements), len(gens), cap, truncated, include_zero)


def nilpotent_ideal(C: SemigroupClosure) -> list:
    """Nilpotent elements of a complete closure.

    On a complete closure this sublist is a two-sided semigroup ideal
    (products SJ and JS land back in it, modulo the dropped zero matrix).
    """
    if C.truncated:
        raise TruncatedClosure("nilpotent ideal is only certified on a complete closure")
    return [M for M in C.elements if is_nilpotent(M)]


def unit_determinant_subsemigroup(C: SemigroupClosure) -> list:
    """Elements of determinant exactly one."""
    return [M for M in C.elements if M.det() == M.field.one]

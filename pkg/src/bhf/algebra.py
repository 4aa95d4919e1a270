"""The genus-1 surface algebra.

Eight nonzero basis elements (two idempotents iota0, iota1 and six Reeb
chords rho1, rho2, rho3, rho12, rho23, rho123) plus zero.  Multiplication
is the concatenation of chord intervals; everything not forced by the unit
laws or the four chord concatenations is zero.  The algebra carries no
differential.
"""
from __future__ import annotations

from enum import Enum


class Idempotent(Enum):
    I0 = "iota0"
    I1 = "iota1"

    def __repr__(self) -> str:
        return self.value

    def __lt__(self, other: "Idempotent") -> bool:
        return self.value < other.value


class AlgebraElement(Enum):
    ZERO = "0"
    I0 = "iota0"
    I1 = "iota1"
    R1 = "rho1"
    R2 = "rho2"
    R3 = "rho3"
    R12 = "rho12"
    R23 = "rho23"
    R123 = "rho123"

    def __repr__(self) -> str:
        return self.value

    def __lt__(self, other: "AlgebraElement") -> bool:
        return self.value < other.value


_BY_NAME = {e.value: e for e in AlgebraElement}

# (left idempotent, right idempotent) of each nonzero element.
_IDEMS = {
    AlgebraElement.I0: (Idempotent.I0, Idempotent.I0),
    AlgebraElement.I1: (Idempotent.I1, Idempotent.I1),
    AlgebraElement.R1: (Idempotent.I0, Idempotent.I1),
    AlgebraElement.R2: (Idempotent.I1, Idempotent.I0),
    AlgebraElement.R3: (Idempotent.I0, Idempotent.I1),
    AlgebraElement.R12: (Idempotent.I0, Idempotent.I0),
    AlgebraElement.R23: (Idempotent.I1, Idempotent.I1),
    AlgebraElement.R123: (Idempotent.I0, Idempotent.I1),
}

# Nonzero chord concatenations.
_PRODUCTS = {
    (AlgebraElement.R1, AlgebraElement.R2): AlgebraElement.R12,
    (AlgebraElement.R2, AlgebraElement.R3): AlgebraElement.R23,
    (AlgebraElement.R1, AlgebraElement.R23): AlgebraElement.R123,
    (AlgebraElement.R12, AlgebraElement.R3): AlgebraElement.R123,
}

NONZERO = tuple(e for e in AlgebraElement if e is not AlgebraElement.ZERO)
CHORDS = tuple(e for e in NONZERO if e not in (AlgebraElement.I0, AlgebraElement.I1))


def element_from_name(name: str) -> AlgebraElement:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown algebra element {name!r}") from None


def idem_from_name(name: str) -> Idempotent:
    for i in Idempotent:
        if i.value == name:
            return i
    raise ValueError(f"unknown idempotent {name!r}")


def is_idempotent(a: AlgebraElement) -> bool:
    return a in (AlgebraElement.I0, AlgebraElement.I1)


def idem_element(i: Idempotent) -> AlgebraElement:
    return AlgebraElement.I0 if i is Idempotent.I0 else AlgebraElement.I1


def left_idem(a: AlgebraElement) -> Idempotent:
    if a is AlgebraElement.ZERO:
        raise ValueError("zero has no left idempotent")
    return _IDEMS[a][0]


def right_idem(a: AlgebraElement) -> Idempotent:
    if a is AlgebraElement.ZERO:
        raise ValueError("zero has no right idempotent")
    return _IDEMS[a][1]


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product of two basis elements; returns ZERO when they don't compose."""
    Z = AlgebraElement.ZERO
    if a is Z or b is Z:
        return Z
    if right_idem(a) is not left_idem(b):
        return Z
    if is_idempotent(a):
        return b
    if is_idempotent(b):
        return a
    return _PRODUCTS.get((a, b), Z)

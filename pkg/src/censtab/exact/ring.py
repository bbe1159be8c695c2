"""Coefficient rings: the rationals, prime fields and the integers."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class Ring:
    name = "?"
    is_field = True
    characteristic = 0

    def coerce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def parse(self, s: str):
        return self.coerce(Fraction(s.strip()))

    def format(self, x) -> str:
        return str(x)

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)


class Rationals(Ring):
    name = "Q"

    def coerce(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)


class PrimeField(Ring):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)


class Integers(Ring):
    name = "Z"
    is_field = False

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def inv(self, x):
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")


QQ = Rationals()
ZZ = Integers()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def ring_from_name(name: str) -> Ring:
    """'Q', 'Z', 'F2', 'F3', ... (also 'GF(p)')."""
    s = name.strip().upper().replace("GF(", "F").rstrip(")")
    if s in ("Q", "QQ"):
        return QQ
    if s in ("Z", "ZZ"):
        return ZZ
    if s.startswith("F") and s[1:].isdigit():
        return GF(int(s[1:]))
    raise ValueError(f"unknown ring {name!r}")

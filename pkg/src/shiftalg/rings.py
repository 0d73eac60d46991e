"""Exact coefficient rings: integers, rationals, prime fields."""
from fractions import Fraction

from .errors import RingMismatch


class Ring:
    name = "?"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name

    def parse(self, text):
        text = text.strip()
        if "/" in text:
            return self.norm(Fraction(text))
        return self.norm(int(text))

    def fmt(self, x):
        return str(x)


class Integers(Ring):
    name = "ZZ"

    def norm(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise RingMismatch(f"{x} is not an integer")
            return int(x.numerator)
        return int(x)


class Rationals(Ring):
    name = "QQ"

    def norm(self, x):
        return Fraction(x)


class PrimeField(Ring):
    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def norm(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p


ZZ = Integers()
QQ = Rationals()


def ring_from_name(name):
    name = name.strip()
    if name == "ZZ":
        return ZZ
    if name == "QQ":
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    raise ValueError(f"unknown ring {name!r}")

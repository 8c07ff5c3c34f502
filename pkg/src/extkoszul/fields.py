"""Exact coefficient fields: the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

__all__ = ["FieldSpec", "QQ", "GF"]


@dataclass(frozen=True)
class FieldSpec:
    """An exact field. ``p is None`` means the rationals, otherwise GF(p).

    Rational scalars are ``gmpy2.mpq`` (always reduced, positive denominator);
    GF(p) scalars are Python ints in ``range(p)``.
    """

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or self.p < 2 or not gmpy2.is_prime(self.p):
                raise ValueError(f"modulus {self.p!r} is not prime")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def name(self) -> str:
        return "QQ" if self.p is None else f"F{self.p}"

    def __str__(self):
        return self.name

    @property
    def zero(self):
        return mpq(0) if self.p is None else 0

    @property
    def one(self):
        return mpq(1) if self.p is None else 1

    def __call__(self, x):
        """Coerce an int, Fraction, mpq or numeric string into the field."""
        if hasattr(x, "__index__"):
            x = int(x)
            return mpq(x) if self.p is None else x % self.p
        if isinstance(x, Fraction):
            x = mpq(x.numerator, x.denominator)
        if self.p is None:
            return mpq(x)
        q = mpq(x)
        den = int(q.denominator) % self.p
        if den == 0:
            raise ZeroDivisionError(f"{x} has no image in {self.name}")
        return int(q.numerator) * pow(den, -1, self.p) % self.p

    def norm(self, x):
        """Canonical representative of a value produced by ring operations."""
        return x if self.p is None else x % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return mpq(1) / x
        return pow(int(x), -1, self.p)

    def neg(self, x):
        return -x if self.p is None else (-x) % self.p

    def to_fraction(self, x) -> Fraction:
        if self.p is None:
            return Fraction(int(x.numerator), int(x.denominator))
        return Fraction(int(x))

    def format(self, x) -> str:
        return str(x)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """``QQ`` or ``F<p>``."""
        if text == "QQ":
            return cls()
        if text.startswith("F") and text[1:].isdigit():
            return cls(int(text[1:]))
        raise ValueError(f"unknown field {text!r} (expected QQ or F<p>)")


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)

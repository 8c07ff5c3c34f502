"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = ["TruncSeries", "hilbert_series", "series_invert", "froberg_obstruction",
           "poincare_truncation"]


@dataclass(frozen=True)
class TruncSeries:
    """``c_0 + c_1 t + ... + c_N t^N + O(t^(N+1))``.

    ``polynomial=True`` records that every coefficient past ``N`` is exactly
    zero (Hilbert series of finite-dimensional algebras), which lets the
    series be read at any order.
    """

    coeffs: tuple[Fraction, ...]
    polynomial: bool = False

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least c_0")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Iterable, N: int | None = None, polynomial: bool = False):
        cs = [Fraction(c) for c in coeffs]
        if N is not None:
            cs = (cs + [Fraction(0)] * (N + 1))[: N + 1]
        return cls(tuple(cs), polynomial)

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        if i < 0:
            return Fraction(0)
        if i > self.trunc_order:
            if self.polynomial:
                return Fraction(0)
            raise IndexError(f"coefficient {i} is beyond the truncation order {self.trunc_order}")
        return self.coeffs[i]

    def truncate(self, N: int) -> "TruncSeries":
        if N > self.trunc_order and not self.polynomial:
            raise ValueError(f"cannot extend a series known only through t^{self.trunc_order}")
        return TruncSeries(tuple(self[i] for i in range(N + 1)), self.polynomial and N >= self.trunc_order)

    def at_minus_t(self) -> "TruncSeries":
        return TruncSeries(tuple(-c if i % 2 else c for i, c in enumerate(self.coeffs)), self.polynomial)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        N = self._common_order(other)
        return TruncSeries(tuple(self[i] + other[i] for i in range(N + 1)),
                           self.polynomial and other.polynomial)

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs), self.polynomial)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return TruncSeries(tuple(c * other for c in self.coeffs), self.polynomial)
        N = self._common_order(other)
        if self.polynomial and other.polynomial:
            N = self.trunc_order + other.trunc_order
        out = [sum((self[k] * other[i - k] for k in range(i + 1)), Fraction(0)) for i in range(N + 1)]
        return TruncSeries(tuple(out), self.polynomial and other.polynomial)

    __rmul__ = __mul__

    def _common_order(self, other):
        if self.polynomial and other.polynomial:
            return max(self.trunc_order, other.trunc_order)
        if self.polynomial:
            return other.trunc_order
        if other.polynomial:
            return self.trunc_order
        return min(self.trunc_order, other.trunc_order)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def as_ints(self) -> list:
        return [int(c) if c.denominator == 1 else c for c in self.coeffs]

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            s = "0"
        else:
            s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
            s += "".join(f" {sign} {body}" for sign, body in parts[1:])
        return s if self.polynomial else f"{s} + O(t^{self.trunc_order + 1})"


def hilbert_series(G) -> TruncSeries:
    """Hilbert series of ``ring/I`` from a reduced Groebner basis of ``I``."""
    from .groebner import standard_monomials

    n = G.ring.n
    return TruncSeries(tuple(len(standard_monomials(G, d)) for d in range(n + 1)), polynomial=True)


def series_invert(H: TruncSeries, N: int) -> TruncSeries:
    """The series ``S`` with ``S*H = 1`` through ``t^N``."""
    c0 = H[0]
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    s = [Fraction(1) / c0]
    for i in range(1, N + 1):
        acc = sum((H[k] * s[i - k] for k in range(1, i + 1)), Fraction(0))
        s.append(-acc / c0)
    return TruncSeries(tuple(s))


def froberg_obstruction(H: TruncSeries, N: int) -> int | None:
    """Least ``i <= N`` where ``1/H(-t)`` has a negative coefficient, if any."""
    inv = series_invert(H.at_minus_t(), N)
    for i, c in enumerate(inv.coeffs):
        if c < 0:
            return i
    return None


def poincare_truncation(B) -> TruncSeries:
    """Total Betti numbers ``sum_j beta_ij`` as a series truncated at ``i_max``."""
    return TruncSeries(tuple(B.total(i) for i in range(B.i_max + 1)))

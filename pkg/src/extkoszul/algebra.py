"""Arithmetic in exterior and square-zero commutative algebras.

Monomials are squarefree and encoded as int bitmasks: bit ``i`` is the i-th
declared variable. The basis element attached to a mask is the product of its
variables in increasing index order; every stored coefficient refers to that
ordered product.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Mapping

from .fields import FieldSpec, QQ

__all__ = [
    "Mode", "RingSpec", "Element", "CoordinateChange",
    "mono_mul", "merge_sign", "elem_mul", "elem_add", "scalar_mul",
    "substitute", "basis_monomials", "popcount", "bits",
]

MAX_VARS = 64


class Mode(str, Enum):
    EXTERIOR = "exterior"
    SQUAREZERO = "squarezero"


def popcount(mask: int) -> int:
    return mask.bit_count()


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def merge_sign(a: int, b: int) -> int:
    """Sign of reordering (a's variables)(b's variables) into increasing order.

    Each variable of ``b`` moves left past every variable of ``a`` above it.
    Supports must be disjoint.
    """
    crossings = 0
    while b:
        low = b & -b
        crossings += (a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if crossings & 1 else 1


def mono_mul(a: int, b: int, mode: Mode = Mode.EXTERIOR):
    """Product of two monomials: ``None`` if it vanishes, else ``(sign, mask)``."""
    if a & b:
        return None
    if mode is Mode.SQUAREZERO:
        return 1, a | b
    return merge_sign(a, b), a | b


@dataclass(frozen=True)
class RingSpec:
    """E = k<v_1..v_n> (exterior) or k[v_1..v_n]/(v_i^2) (square-zero)."""

    mode: Mode
    vars: tuple[str, ...]
    field: FieldSpec = QQ

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "vars", tuple(self.vars))
        if not 1 <= len(self.vars) <= MAX_VARS:
            raise ValueError(f"need 1..{MAX_VARS} variables, got {len(self.vars)}")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable names must be unique")

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def exterior(self) -> bool:
        return self.mode is Mode.EXTERIOR

    def mul_monomials(self, a: int, b: int):
        return mono_mul(a, b, self.mode)

    def sign(self, a: int, b: int) -> int:
        """Sign of ``a*b`` for disjoint supports."""
        return merge_sign(a, b) if self.mode is Mode.EXTERIOR else 1

    # constructors
    def element(self, terms: Mapping[int, object] | Iterable = ()) -> "Element":
        return Element(self, terms)

    @property
    def zero(self) -> "Element":
        return Element(self, {})

    @property
    def one(self) -> "Element":
        return Element(self, {0: 1})

    def monomial(self, mask: int, coeff=1) -> "Element":
        return Element(self, {mask: coeff})

    def var(self, i: int | str) -> "Element":
        if isinstance(i, str):
            i = self.vars.index(i)
        return Element(self, {1 << i: 1})

    def gens(self) -> list["Element"]:
        return [self.var(i) for i in range(self.n)]

    def linear_form(self, coeffs: Iterable) -> "Element":
        return Element(self, {1 << i: c for i, c in enumerate(coeffs)})

    def mono_str(self, mask: int) -> str:
        if not mask:
            return "1"
        return "*".join(self.vars[i] for i in bits(mask))

    def __str__(self):
        return f"{self.mode.value} {self.field} [{','.join(self.vars)}]"


class Element:
    """An immutable linear combination of squarefree monomials."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms=(), *, _canonical: bool = False):
        self.ring = ring
        if _canonical:
            self.terms = terms
        else:
            f = ring.field
            limit = 1 << ring.n
            acc: dict[int, object] = {}
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mask, c in items:
                if not 0 <= mask < limit:
                    raise ValueError(f"monomial {mask:#x} outside the ring")
                acc[mask] = f(c) + acc[mask] if mask in acc else f(c)
            self.terms = {m: f.norm(acc[m]) for m in sorted(acc) if f.norm(acc[m])}
        self._hash = None

    @classmethod
    def _make(cls, ring, acc):
        norm = ring.field.norm
        terms = {}
        for m in sorted(acc):
            c = norm(acc[m])
            if c:
                terms[m] = c
        return cls(ring, terms, _canonical=True)

    # queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a nonzero homogeneous element, else ``None``."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def coefficient(self, mask: int):
        return self.terms.get(mask, self.ring.field.zero)

    def support(self) -> int:
        out = 0
        for m in self.terms:
            out |= m
        return out

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self.terms.items())))
        return self._hash

    # arithmetic
    def _check(self, other: "Element"):
        if other.ring != self.ring:
            raise ValueError("elements belong to different rings")

    def __add__(self, other):
        if not isinstance(other, Element):
            if other == 0:
                return self
            other = self.ring.one * other
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return Element._make(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Element(self.ring, {m: f.neg(c) for m, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero
        return Element(self.ring, {m: f.norm(c * v) for m, v in self.terms.items()}, _canonical=True)

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        ext = ring.mode is Mode.EXTERIOR
        acc: dict[int, object] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                if a & b:
                    continue
                c = ca * cb
                if ext and merge_sign(a, b) < 0:
                    c = -c
                m = a | b
                acc[m] = acc[m] + c if m in acc else c
        return Element._make(ring, acc)

    def __rmul__(self, other):
        # scalars commute with everything
        return self.scale(other)

    def times_monomial(self, mask: int, coeff=1, left: bool = True) -> "Element":
        """``(coeff*mask)*self`` (or ``self*(coeff*mask)`` when ``left`` is false)."""
        ring = self.ring
        f = ring.field
        coeff = f(coeff)
        ext = ring.mode is Mode.EXTERIOR
        terms = {}
        for t, c in self.terms.items():
            if t & mask:
                continue
            v = coeff * c
            if ext and (merge_sign(mask, t) if left else merge_sign(t, mask)) < 0:
                v = -v
            terms[t | mask] = f.norm(v)
        return Element._make(ring, terms)

    def __pow__(self, k: int):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    # display
    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        parts = []
        for m, c in self.terms.items():
            neg = False
            if f.is_rational and c < 0:
                neg, c = True, -c
            mono = self.ring.mono_str(m)
            if c == 1:
                s = mono
            elif not m:
                s = f.format(c)
            else:
                coeff = f.format(c)
                s = f"({coeff})*{mono}" if "/" in coeff else f"{coeff}*{mono}"
            parts.append(("- " if neg else "+ ", s))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "- " else "") + first
        for sign, s in parts[1:]:
            out += f" {sign}{s}"
        return out

    def __repr__(self):
        return f"Element({self})"


def elem_mul(a: Element, b: Element) -> Element:
    return a * b


def elem_add(a: Element, b: Element) -> Element:
    if not isinstance(b, Element) or a.ring != b.ring:
        raise ValueError("elements belong to different rings")
    return a + b


def scalar_mul(c, a: Element) -> Element:
    return a.scale(c)


def basis_monomials(ring: RingSpec | int, d: int) -> list[int]:
    """All squarefree masks of degree ``d``, ascending as integers."""
    n = ring if isinstance(ring, int) else ring.n
    if d < 0 or d > n:
        return []
    return sorted(sum(1 << i for i in c) for c in combinations(range(n), d))


class CoordinateChange:
    """Linear substitution ``v_i -> sum_j U[j][i] v_j``; ``U`` must be invertible."""

    def __init__(self, ring: RingSpec, matrix):
        from . import linalg

        self.ring = ring
        f = ring.field
        n = ring.n
        rows = [[f(x) for x in row] for row in matrix]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"coordinate change must be {n}x{n}")
        if linalg.rank(linalg.matrix(rows, n, f), f) != n:
            raise ValueError("coordinate change is singular")
        self.matrix = tuple(tuple(r) for r in rows)
        self.images = tuple(
            ring.linear_form(rows[j][i] for j in range(n)) for i in range(n)
        )

    @classmethod
    def identity(cls, ring: RingSpec) -> "CoordinateChange":
        n = ring.n
        return cls(ring, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, ring: RingSpec, perm) -> "CoordinateChange":
        """Send ``v_i`` to ``v_{perm[i]}``."""
        n = ring.n
        return cls(ring, [[int(perm[i] == j) for i in range(n)] for j in range(n)])

    def compose(self, other: "CoordinateChange") -> "CoordinateChange":
        """Matrix product ``self @ other``: apply ``other`` first, then ``self``."""
        f = self.ring.field
        n = self.ring.n
        A, B = self.matrix, other.matrix
        return CoordinateChange(
            self.ring,
            [[f.norm(sum(A[i][k] * B[k][j] for k in range(n))) for j in range(n)] for i in range(n)],
        )

    __matmul__ = compose

    def inverse(self) -> "CoordinateChange":
        from . import linalg

        return CoordinateChange(self.ring, linalg.inverse(self.matrix, self.ring.field))

    def __eq__(self, other):
        return isinstance(other, CoordinateChange) and self.ring == other.ring and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.ring, self.matrix))

    def __repr__(self):
        return f"CoordinateChange({[list(map(str, r)) for r in self.matrix]})"


def substitute(f: Element, U: CoordinateChange) -> Element:
    """Apply the ring endomorphism sending each variable to its image under ``U``."""
    if f.ring != U.ring:
        raise ValueError("coordinate change belongs to a different ring")
    ring = f.ring
    cache: dict[int, Element] = {0: ring.one}

    def image(mask: int) -> Element:
        if mask not in cache:
            high = 1 << (mask.bit_length() - 1)
            cache[mask] = image(mask ^ high) * U.images[high.bit_length() - 1]
        return cache[mask]

    out = ring.zero
    for m, c in f.terms.items():
        out = out + image(m).scale(c)
    return out

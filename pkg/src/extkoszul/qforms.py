"""Quadratic forms of an exterior algebra as alternating matrices.

``h = sum_{i<j} A[i][j] v_i v_j``; a substitution with matrix ``U`` acts by
``A -> U A U^T``. Rank is always even and ``h`` factors into two linear forms
exactly when the rank is at most 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import CoordinateChange, Element, Mode, RingSpec

__all__ = [
    "AlternatingMatrix", "NormalFormResult", "qform_to_matrix", "matrix_to_qform",
    "rank_alternating", "symplectic_normal_form", "is_reducible", "factor_reducible",
    "standard_form",
]


@dataclass(frozen=True)
class AlternatingMatrix:
    ring: RingSpec
    rows: tuple[tuple, ...]

    def __post_init__(self):
        f = self.ring.field
        rows = tuple(tuple(f(x) for x in r) for r in self.rows)
        n = self.ring.n
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"alternating matrix must be {n}x{n}")
        for i in range(n):
            if rows[i][i]:
                raise ValueError("alternating matrix needs a zero diagonal")
            for j in range(i):
                if f.norm(rows[i][j] + rows[j][i]):
                    raise ValueError("matrix is not skew-symmetric")
        object.__setattr__(self, "rows", rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def n(self) -> int:
        return self.ring.n


def _check_quadratic(h: Element):
    if h.ring.mode is not Mode.EXTERIOR:
        raise ValueError("quadratic forms are handled in exterior mode only")
    if h and h.degree != 2:
        raise ValueError(f"{h} is not a quadratic form")


def qform_to_matrix(h: Element) -> AlternatingMatrix:
    _check_quadratic(h)
    ring = h.ring
    f = ring.field
    n = ring.n
    A = [[f.zero] * n for _ in range(n)]
    for m, c in h.terms.items():
        i = (m & -m).bit_length() - 1
        j = m.bit_length() - 1
        A[i][j] = c
        A[j][i] = f.neg(c)
    return AlternatingMatrix(ring, A)


def matrix_to_qform(A: AlternatingMatrix) -> Element:
    n = A.n
    return Element(A.ring, {(1 << i) | (1 << j): A[i, j] for i in range(n) for j in range(i + 1, n) if A[i, j]})


def rank_alternating(A: AlternatingMatrix) -> int:
    f = A.ring.field
    return linalg.rank(linalg.matrix(A.rows, A.n, f), f)


def standard_form(ring: RingSpec, r: int) -> Element:
    """``v_1 v_2 + v_3 v_4 + ... + v_{2r-1} v_{2r}``."""
    out = ring.zero
    for k in range(r):
        out = out + ring.var(2 * k) * ring.var(2 * k + 1)
    return out


@dataclass(frozen=True)
class NormalFormResult:
    rank: int
    change: CoordinateChange
    normal_form: Element

    @property
    def r(self) -> int:
        return self.rank // 2

    def new_coordinates(self) -> list[Element]:
        """Linear forms ``y_i`` (in the old variables) with ``h = y_1 y_2 + ... ``."""
        inv = self.change.inverse()
        return list(inv.images)


def symplectic_normal_form(h: Element) -> NormalFormResult:
    """Find ``U`` with ``substitute(h, U) = v_1 v_2 + ... + v_{2r-1} v_{2r}``.

    Symplectic Gram-Schmidt: the rows of ``U`` are a basis ``u_a`` with
    ``B(u_a, u_b) = (U A U^T)[a][b]`` standard. Pivot pairs are taken
    lexicographically first among the vectors still to be processed.
    """
    A = qform_to_matrix(h)
    ring = h.ring
    f = ring.field
    n = ring.n

    def form(x, y):
        return f.norm(sum(x[i] * A[i, j] * y[j] for i in range(n) if x[i] for j in range(n) if y[j] and A[i, j]))

    remaining = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]
    done = []
    while True:
        pair = next(((a, b) for a in range(len(remaining)) for b in range(a + 1, len(remaining))
                     if form(remaining[a], remaining[b])), None)
        if pair is None:
            break
        a, b = pair
        p = remaining[a]
        scale = f.inv(form(p, remaining[b]))
        q = [f.norm(scale * x) for x in remaining[b]]
        rest = []
        for k, r in enumerate(remaining):
            if k in (a, b):
                continue
            c_q, c_p = form(r, q), form(r, p)
            rest.append([f.norm(r[i] - c_q * p[i] + c_p * q[i]) for i in range(n)])
        done += [p, q]
        remaining = rest
    U = CoordinateChange(ring, done + remaining)
    rank = len(done)
    return NormalFormResult(rank, U, standard_form(ring, rank // 2))


def is_reducible(h: Element) -> bool:
    """True iff ``h`` is a product of two linear forms (rank <= 2; ``h = 0`` included)."""
    return rank_alternating(qform_to_matrix(h)) <= 2


def factor_reducible(h: Element):
    """``(l1, l2)`` with ``l1*l2 == h`` when ``rank(h) == 2``, else ``None``.

    ``None`` is also returned for ``h = 0``; callers tell the two cases apart
    with ``h.is_zero()``.
    """
    A = qform_to_matrix(h)
    if not h or rank_alternating(A) != 2:
        return None
    ring = h.ring
    f = ring.field
    i = min((m & -m).bit_length() - 1 for m in h.terms)
    j = next(k for k in range(ring.n) if A[i, k])
    row_i = ring.linear_form(A.rows[i])
    row_j = ring.linear_form(A.rows[j])
    # row_i * row_j == A[i,j] * h
    l1 = row_j.scale(f.neg(f.inv(A[i, j])))
    return l1, row_i

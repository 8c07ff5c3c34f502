"""Degree-truncated minimal free resolutions over ``ring/I``.

Everything is exact linear algebra on standard-monomial bases. Modules are left
modules; a free module element is stored as ``{(generator, basis index): c}``
meaning ``sum c * basis[index] * generator``.

Each internal degree is further split by the finest multigrading for which the
ideal and the presentation are homogeneous (computed as a rational nullspace),
so that kernels are taken block by block.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .algebra import Element, RingSpec, bits
from .fields import QQ
from .groebner import GroebnerBasis, Ideal, QuotientRing, buchberger
from .series import TruncSeries

__all__ = [
    "GradedFreeModule", "GradedMatrix", "BettiTable", "Resolver",
    "minimal_free_resolution", "betti_of_k", "residue_field_presentation",
    "cyclic_presentation", "t_degree", "is_linear_through", "euler_consistency",
    "format_betti_m2", "check_complex", "check_minimal", "IncompleteColumn",
]


class IncompleteColumn(ValueError):
    """A query needed a Betti column that the truncation window does not determine."""


@dataclass(frozen=True)
class GradedFreeModule:
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))

    @property
    def rank(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True, eq=False)
class GradedMatrix:
    """Map ``source -> target``; ``columns[c][r]`` is the coefficient of target gen ``r``
    in the image of source gen ``c``."""

    target: GradedFreeModule
    source: GradedFreeModule
    columns: tuple[tuple[Element, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(c) for c in self.columns))
        if len(self.columns) != self.source.rank:
            raise ValueError("one column per source generator required")
        for c, col in enumerate(self.columns):
            if len(col) != self.target.rank:
                raise ValueError("column length must equal the target rank")
            for r, e in enumerate(col):
                if e and (not e.is_homogeneous()
                          or e.degree != self.source.degrees[c] - self.target.degrees[r]):
                    raise ValueError(f"entry ({r},{c}) = {e} has the wrong degree")

    def entry(self, r: int, c: int) -> Element:
        return self.columns[c][r]

    def nonzero_entries(self):
        for c, col in enumerate(self.columns):
            for r, e in enumerate(col):
                if e:
                    yield r, c, e


def residue_field_presentation(ring: RingSpec) -> GradedMatrix:
    """``R^n --(v_1 ... v_n)--> R``: cokernel is ``k``."""
    return GradedMatrix(GradedFreeModule((0,)), GradedFreeModule((1,) * ring.n),
                        [(v,) for v in ring.gens()])


def cyclic_presentation(gens: Sequence[Element]) -> GradedMatrix:
    """Presentation of ``R/(gens)`` as a cyclic module."""
    gens = [g for g in gens if g]
    return GradedMatrix(GradedFreeModule((0,)), GradedFreeModule(tuple(g.degree for g in gens)),
                        [(g,) for g in gens])


@dataclass
class BettiTable:
    """Graded Betti numbers ``beta[i, j]`` for ``i <= i_max``, ``j <= j_max``.

    ``complete[i]`` is true when column ``i`` is known to have no entries past
    ``j_max``; entries with ``j <= j_max`` are always exact.
    """

    entries: dict
    i_max: int
    j_max: int
    complete: tuple[bool, ...]

    def __getitem__(self, ij) -> int:
        i, j = ij
        if i > self.i_max or j > self.j_max:
            raise IncompleteColumn(f"beta[{i},{j}] lies outside the computed window")
        return self.entries.get((i, j), 0)

    def column(self, i: int) -> dict:
        return {j: v for (a, j), v in sorted(self.entries.items()) if a == i}

    def total(self, i: int) -> int:
        return sum(self.column(i).values())

    def totals(self) -> list[int]:
        return [self.total(i) for i in range(self.i_max + 1)]

    def to_json(self) -> dict:
        return {
            "i_max": self.i_max,
            "j_max": self.j_max,
            "complete": list(self.complete),
            "totals": self.totals(),
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
        }


def _require_complete(B: BettiTable, i: int):
    if i > B.i_max or not B.complete[i]:
        raise IncompleteColumn(f"column {i} is not complete within j_max={B.j_max}")


def t_degree(B: BettiTable, i: int):
    """Largest ``j`` with ``beta[i, j] != 0``; ``-inf`` for an empty column."""
    _require_complete(B, i)
    col = B.column(i)
    return max(col) if col else -math.inf


def is_linear_through(B: BettiTable, i_max: int) -> bool:
    for i in range(i_max + 1):
        _require_complete(B, i)
    return all(j == i for (i, j), v in B.entries.items() if i <= i_max and v)


def euler_consistency(B: BettiTable, H_R: TruncSeries, d_max: int, H_M: TruncSeries | None = None) -> bool:
    """Check ``sum (-1)^i beta_ij t^j * H_R(t) == H_M(t)`` through ``t^d_max``.

    ``H_M`` defaults to 1 (the module ``k``). Needs ``d_max <= j_max`` and
    ``d_max <= i_max + (lowest generator degree)``.
    """
    low = min((j for (i, j) in B.entries if i == 0), default=0)
    if d_max > B.j_max or d_max > B.i_max + low:
        raise IncompleteColumn(f"window (i_max={B.i_max}, j_max={B.j_max}) does not determine degree {d_max}")
    chi = [Fraction(0)] * (d_max + 1)
    for (i, j), v in B.entries.items():
        if j <= d_max:
            chi[j] += (-1) ** i * v
    lhs = TruncSeries(tuple(chi)) * H_R.truncate(d_max) if d_max <= H_R.trunc_order or H_R.polynomial else None
    if lhs is None:
        raise IncompleteColumn("Hilbert series is truncated below d_max")
    rhs = H_M if H_M is not None else TruncSeries((Fraction(1),), polynomial=True)
    return all(lhs[d] == rhs[d] for d in range(d_max + 1))


def format_betti_m2(B: BettiTable) -> str:
    """Render in Macaulay2's ``betti`` layout (no output-prompt prefix)."""
    cols = list(range(B.i_max + 1))
    nz = {(i, j): v for (i, j), v in B.entries.items() if v}
    shifts = [j - i for (i, j) in nz]
    rows = list(range(min(shifts), max(shifts) + 1)) if shifts else []
    cells = {}
    for i in cols:
        cells["total", i] = str(B.total(i))
        for r in rows:
            v = nz.get((i, i + r))
            cells[r, i] = str(v) if v else "."
    width = {i: max([len(str(i))] + [len(cells[key, i]) for key in ["total"] + rows]) for i in cols}
    label = max([len("total:")] + [len(f"{r}:") for r in rows])
    lines = [" " * label + "".join(" " + str(i).rjust(width[i]) for i in cols)]
    for key in ["total"] + rows:
        lines.append(f"{key}:".rjust(label) + "".join(" " + cells[key, i].rjust(width[i]) for i in cols))
    return "\n".join(lines) + "\n"


def _integral(vec) -> tuple[int, ...]:
    den = 1
    for x in vec:
        den = math.lcm(den, Fraction(x).denominator)
    return tuple(int(Fraction(x) * den) for x in vec)


def fine_grading(gb: GroebnerBasis, presentation: GradedMatrix):
    """Finest rational grading making the ideal and the presentation homogeneous.

    Returns integer weight tuples for the variables, the target generators and
    the source generators of ``presentation``.
    """
    ring = gb.ring
    n, r0, r1 = ring.n, presentation.target.rank, presentation.source.rank
    width = n + r0 + r1
    rows = []

    def expo(mask):
        v = [0] * width
        for b in bits(mask):
            v[b] = 1
        return v

    for g in gb.generators:
        ms = list(g.terms)
        e0 = expo(ms[0])
        for m in ms[1:]:
            rows.append([a - b for a, b in zip(expo(m), e0)])
    for r, c, e in presentation.nonzero_entries():
        for t in e.terms:
            v = [-x for x in expo(t)]
            v[n + r] -= 1
            v[n + r0 + c] += 1
            rows.append(v)
    if rows:
        basis = linalg.nullspace(linalg.matrix(rows, width, QQ), QQ)
        vecs = [_integral(basis[k]) for k in range(basis.shape[0])]
    else:
        vecs = [tuple(int(a == b) for a in range(width)) for b in range(width)]
    wt = [tuple(v[k] for v in vecs) for k in range(width)]
    return wt[:n], wt[n:n + r0], wt[n + r0:]


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class Resolver:
    """Incremental minimal free resolution: each :meth:`step` adds one column."""

    def __init__(self, R, presentation: GradedMatrix, j_max: int, threads: int = 1):
        if isinstance(R, GroebnerBasis):
            R = QuotientRing(R)
        elif isinstance(R, Ideal):
            R = QuotientRing(buchberger(R))
        self.Q: QuotientRing = R
        self.field = R.field
        self.j_max = j_max
        self.threads = max(1, threads)
        self.presentation = presentation
        for _, _, e in presentation.nonzero_entries():
            if e.ring != R.ring:
                raise ValueError("presentation entries belong to a different ring")
            if e.degree < 1 and R.gb.normal_form(e):
                raise ValueError("presentation has a unit entry; the resolution would not be minimal")
        vw, tw, sw = fine_grading(R.gb, presentation)
        self._mdeg_basis = [self._mono_weight(m, vw) for m in R.basis]
        self._linear = [R.index[m] for m in R.by_degree[1]] if len(R.by_degree) > 1 else []
        self._src_weights = sw
        # per homological degree: generator (degree, multidegree) and images
        self.gens: list[list[tuple[int, tuple]]] = [list(zip(presentation.target.degrees, tw))]
        self.images: list[list[dict]] = [[]]
        self.complete: list[bool] = [True]
        self._block_cache: dict = {}

    @staticmethod
    def _mono_weight(mask, vw):
        w = tuple(0 for _ in vw[0]) if vw else ()
        for b in bits(mask):
            w = _add(w, vw[b])
        return w

    @property
    def length(self) -> int:
        return len(self.gens) - 1

    def betti(self) -> BettiTable:
        entries = {}
        for i, gs in enumerate(self.gens):
            for d, _ in gs:
                entries[i, d] = entries.get((i, d), 0) + 1
        return BettiTable(entries, self.length, self.j_max, tuple(self.complete))

    def _blocks(self, i: int, j: int) -> dict:
        """Basis of ``(F_i)_j`` split by multidegree: ``{w: [(gen, basis index)]}``."""
        key = (i, j)
        if key not in self._block_cache:
            Q = self.Q
            out: dict = {}
            for g, (d, w) in enumerate(self.gens[i]):
                e = j - d
                if 0 <= e < len(Q.by_degree):
                    for m in Q.by_degree[e]:
                        s = Q.index[m]
                        out.setdefault(_add(w, self._mdeg_basis[s]), []).append((g, s))
            self._block_cache[key] = out
            self._block_cache.pop((i, j - 2), None)
        return self._block_cache[key]

    def _act(self, s: int, vec: dict, out: dict, scale=1):
        """``out += scale * basis[s] * vec`` for a free-module vector ``vec``."""
        mul = self.Q.mul
        for (r, t), c in vec.items():
            for u, c2 in mul(s, t).items():
                key = (r, u)
                out[key] = out.get(key, 0) + scale * c * c2

    def _to_matrix(self, vecs, index, ncols):
        f = self.field
        M = linalg.zeros((len(vecs), ncols), f)
        for k, vec in enumerate(vecs):
            for key, c in vec.items():
                M[k, index[key]] = c
        if f.p is not None:
            M %= f.p
        return M

    def _lift(self, prev: dict, w, B, Bidx):
        """Rows of ``R_1 * V_{j-1}`` landing in block ``w`` (coordinates of ``B``)."""
        rows = []
        for x in self._linear:
            got = prev.get(_sub(w, self._mdeg_basis[x]))
            if got is None:
                continue
            Bp, V = got
            for k in range(V.shape[0]):
                vec: dict = {}
                for col in np.flatnonzero(V[k] != 0) if V.dtype == object else np.flatnonzero(V[k]):
                    g, s = Bp[col]
                    for u, c in self.Q.mul(x, s).items():
                        key = (g, u)
                        vec[key] = vec.get(key, 0) + V[k, col] * c
                rows.append(vec)
        return self._to_matrix(rows, Bidx, len(B))

    def _map(self, fn, items):
        if self.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                return list(ex.map(fn, items))
        return [fn(it) for it in items]

    def _first_column(self):
        pres = self.presentation
        cols = []
        for c, col in enumerate(pres.columns):
            vec = {}
            for r, e in enumerate(col):
                for u, a in self.Q.element_vector(e).items():
                    vec[r, u] = a
            cols.append((pres.source.degrees[c], self._src_weights[c], vec))
        degs = [d for d, _, _ in cols]
        if not degs:
            return [], True
        lo, hi = min(degs), max(degs)
        prev: dict = {}
        new = []
        for j in range(lo, min(hi, self.j_max) + 1):
            blocks = self._blocks(0, j)
            gens_by_block: dict = {}
            for d, w, vec in cols:
                if d > j:
                    continue
                ds = j - d
                if ds >= len(self.Q.by_degree):
                    continue
                for m in self.Q.by_degree[ds]:
                    s = self.Q.index[m]
                    out: dict = {}
                    self._act(s, vec, out)
                    gens_by_block.setdefault(_add(w, self._mdeg_basis[s]), []).append(out)

            def work(item, j=j, prev=prev):
                w, B = item
                Bidx = {b: k for k, b in enumerate(B)}
                V = self._to_matrix(gens_by_block.get(w, []), Bidx, len(B))
                V = linalg.rref(V, self.field)[0]
                P = self._lift(prev, w, B, Bidx)
                return w, B, V, linalg.complement(V, P, self.field)

            cur, found = self._collect(blocks, work, j)
            new.extend(found)
            prev = cur
        return new, hi <= self.j_max

    def _collect(self, blocks, work, j):
        cur, found = {}, []
        for w, B, V, C in self._map(work, sorted(blocks.items())):
            cur[w] = (B, V)
            for row in C:
                vec = {B[k]: row[k] for k in (np.flatnonzero(row != 0) if row.dtype == object else np.flatnonzero(row))}
                found.append((j, w, vec))
        return cur, found

    def _kernel_column(self, i: int):
        Q = self.Q
        gens = self.gens[i]
        if not gens:
            return [], self.complete[i]
        lo = min(d for d, _ in gens)
        hi = max(d for d, _ in gens) + Q.top_degree
        images = self.images[i]
        prev: dict = {}
        new = []
        for j in range(lo, min(hi, self.j_max) + 1):
            blocks = self._blocks(i, j)

            def work(item, prev=prev):
                w, B = item
                Bidx = {b: k for k, b in enumerate(B)}
                rows, tidx = [], {}
                for g, s in B:
                    out: dict = {}
                    self._act(s, images[g], out)
                    for key in out:
                        if key not in tidx:
                            tidx[key] = len(tidx)
                    rows.append(out)
                A = self._to_matrix(rows, tidx, len(tidx))
                K = linalg.left_kernel(A, self.field)
                P = self._lift(prev, w, B, Bidx)
                return w, B, K, linalg.complement(K, P, self.field)

            cur, found = self._collect(blocks, work, j)
            new.extend(found)
            prev = cur
        return new, self.complete[i] and hi <= self.j_max

    def step(self) -> dict:
        """Compute the next column; returns ``{j: beta_ij}`` for it."""
        i = self.length
        if i == 0:
            found, complete = self._first_column()
        else:
            found, complete = self._kernel_column(i)
        f = self.field
        self.gens.append([(j, w) for j, w, _ in found])
        self.images.append([{k: f(c) for k, c in vec.items()} for _, _, vec in found])
        self.complete.append(complete)
        col: dict = {}
        for j, _, _ in found:
            col[j] = col.get(j, 0) + 1
        return col

    def columns(self) -> Iterator[dict]:
        while True:
            yield self.step()

    def differential(self, i: int) -> GradedMatrix:
        """``d_i : F_i -> F_{i-1}`` with entries as ring elements."""
        ring, Q = self.Q.ring, self.Q
        tgt = GradedFreeModule(tuple(d for d, _ in self.gens[i - 1]))
        src = GradedFreeModule(tuple(d for d, _ in self.gens[i]))
        cols = []
        for vec in self.images[i]:
            acc: dict = {}
            for (r, s), c in vec.items():
                acc.setdefault(r, {})[Q.basis[s]] = c
            cols.append(tuple(Element(ring, acc.get(r, {})) for r in range(tgt.rank)))
        return GradedMatrix(tgt, src, cols)


def minimal_free_resolution(R, M: GradedMatrix, i_max: int = 5, j_max: int | None = None,
                            threads: int = 1):
    """Resolve ``coker(M)`` over ``R`` through ``F_{i_max}``.

    ``R`` is a GroebnerBasis (or QuotientRing / Ideal). Returns
    ``(differentials, betti_table)`` where ``differentials[i-1]`` is ``d_i``.
    """
    if j_max is None:
        j_max = 2 * i_max + 2
    res = Resolver(R, M, j_max, threads)
    for _ in range(i_max):
        res.step()
    return [res.differential(i) for i in range(1, i_max + 1)], res.betti()


def betti_of_k(R, i_max: int = 5, j_max: int | None = None, threads: int = 1) -> BettiTable:
    if j_max is None:
        j_max = 2 * i_max + 2
    ring = R.ring if not isinstance(R, Ideal) else R.ring
    res = Resolver(R, residue_field_presentation(ring), j_max, threads)
    for _ in range(i_max):
        res.step()
    return res.betti()


def check_complex(differentials: Sequence[GradedMatrix], gb: GroebnerBasis) -> bool:
    """``d_i o d_{i+1} == 0`` in ``ring/I``, by multiplying the entries out."""
    for d_low, d_high in zip(differentials, differentials[1:]):
        for col in d_high.columns:
            acc: dict = {}
            for r, a in enumerate(col):
                if not a:
                    continue
                for q, b in enumerate(d_low.columns[r]):
                    if b:
                        acc[q] = acc.get(q, a.ring.zero) + a * b
            if any(gb.normal_form(v) for v in acc.values()):
                return False
    return True


def check_minimal(differentials: Sequence[GradedMatrix]) -> bool:
    """Every nonzero entry has positive degree."""
    return all(e.degree >= 1 for d in differentials for _, _, e in d.nonzero_entries())

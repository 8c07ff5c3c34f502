"""Groebner bases of homogeneous ideals in exterior / square-zero algebras.

Completion follows the exterior-algebra version of Buchberger's criterion: a
set G is a Groebner basis once every S-pair and every product ``v*g`` with
``v`` dividing the leading monomial of ``g`` reduces to zero. The products are
needed because ``v*lm(g) = 0`` in the quotient by the squares, so ``v*g`` can
have a leading term that no leading monomial of G accounts for.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from . import linalg
from .algebra import Element, RingSpec, basis_monomials, bits

__all__ = [
    "TermOrder", "Ideal", "GroebnerBasis", "QuotientRing",
    "normal_form", "buchberger", "groebner", "standard_monomials",
    "ideal_membership", "colon_by_linear", "max_gb_degree", "dim_oracle",
]


@dataclass(frozen=True)
class TermOrder:
    """Degree-refining order. ``priority[0]`` is the largest variable."""

    kind: str = "degrevlex"
    priority: tuple[int, ...] = ()
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("deglex", "degrevlex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        object.__setattr__(self, "priority", tuple(self.priority))
        if sorted(self.priority) != list(range(len(self.priority))):
            raise ValueError("priority must be a permutation of variable indices")

    @classmethod
    def for_ring(cls, ring: RingSpec, kind: str = "degrevlex", vars: Sequence[str] | None = None):
        """Order on ``ring`` with variable priority given by names (default: declaration order)."""
        if vars is None:
            return cls(kind, tuple(range(ring.n)))
        if sorted(vars) != sorted(ring.vars):
            raise ValueError("variable priority must list every ring variable exactly once")
        return cls(kind, tuple(ring.vars.index(v) for v in vars))

    def key(self, mask: int):
        """Sort key: larger key means larger monomial."""
        k = self._cache.get(mask)
        if k is None:
            n = len(self.priority)
            rank = self._rank
            if self.kind == "deglex":
                x = sum(1 << (n - 1 - rank[b]) for b in bits(mask))
            else:
                x = -sum(1 << rank[b] for b in bits(mask))
            k = (mask.bit_count(), x)
            self._cache[mask] = k
        return k

    @cached_property
    def _rank(self):
        r = [0] * len(self.priority)
        for pos, v in enumerate(self.priority):
            r[v] = pos
        return r

    def leading(self, f: Element) -> int:
        return max(f.terms, key=self.key)

    def describe(self, ring: RingSpec) -> str:
        return f"{self.kind}({','.join(ring.vars[i] for i in self.priority)})"


def _default_order(ring: RingSpec) -> TermOrder:
    return TermOrder("degrevlex", tuple(range(ring.n)))


class Ideal:
    """A homogeneous ideal given by generators; zero generators are dropped."""

    def __init__(self, ring: RingSpec, gens: Iterable[Element] = ()):
        self.ring = ring
        out = []
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator belongs to a different ring")
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
            if g:
                out.append(g)
        self.gens = tuple(out)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.gens
        return Ideal(self.ring, self.gens + tuple(other))

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens))})"


def _reduce_step(work: dict, m: int, c, u: int, lc, g: Element, ring: RingSpec):
    """Cancel the term ``c*m`` of ``work`` using ``g`` (leading monomial ``u``)."""
    f = ring.field
    q = m ^ u
    factor = c * f.inv(ring.sign(q, u) * lc)
    for t, cg in g.terms.items():
        if t == u or t & q:
            continue
        v = factor * cg
        if ring.sign(q, t) < 0:
            v = -v
        key = q | t
        new = f.norm(work.get(key, 0) - v)
        if new:
            work[key] = new
        else:
            work.pop(key, None)


def _leads(G, order):
    return [(order.leading(g), g.terms[order.leading(g)], g) for g in G if g]


def normal_form(f: Element, G: Sequence[Element], order: TermOrder | None = None) -> Element:
    """Fully reduce ``f`` modulo ``G`` (and the variable squares).

    Always rewrites the largest reducible monomial first, with the first
    generator in list order whose leading monomial divides it.
    """
    ring = f.ring
    order = order or _default_order(ring)
    return _nf(f, _leads(G, order), order)


def _nf(f, leads, order):
    ring = f.ring
    work = dict(f.terms)
    rem = {}
    key = order.key
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for u, lc, g in leads:
            if m & u == u:
                _reduce_step(work, m, c, u, lc, g, ring)
                break
        else:
            rem[m] = c
    return Element._make(ring, rem)


def _monic(g: Element, order: TermOrder) -> Element:
    lc = g.terms[order.leading(g)]
    return g.scale(g.ring.field.inv(lc))


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """Reduced Groebner basis; generators are monic and sorted by leading monomial."""

    ring: RingSpec
    order: TermOrder
    generators: tuple[Element, ...]

    @cached_property
    def leads(self) -> tuple[int, ...]:
        return tuple(self.order.leading(g) for g in self.generators)

    @cached_property
    def _lead_data(self):
        return _leads(self.generators, self.order)

    def normal_form(self, f: Element) -> Element:
        if f.ring != self.ring:
            raise ValueError("element belongs to a different ring")
        return _nf(f, self._lead_data, self.order)

    def contains(self, f: Element) -> bool:
        return not self.normal_form(f)

    def is_standard(self, mask: int) -> bool:
        return not any(mask & u == u for u in self.leads)

    def key(self):
        """Hashable canonical form; equal keys iff equal ideals (same order)."""
        return tuple(tuple(g.terms.items()) for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and self.key() == other.key()

    def __hash__(self):
        return hash((self.ring, self.key()))

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.generators)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def buchberger(I: Ideal | Sequence[Element], order: TermOrder | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of a homogeneous ideal."""
    if not isinstance(I, Ideal):
        gens = list(I)
        if not gens:
            raise ValueError("cannot infer the ring of an empty generator list")
        I = Ideal(gens[0].ring, gens)
    ring = I.ring
    order = order or _default_order(ring)

    G: list[Element] = []
    leads: list = []
    queue: list = []
    counter = 0

    def push(deg, item):
        nonlocal counter
        heapq.heappush(queue, (deg, counter, item))
        counter += 1

    def add(g: Element):
        g = _monic(g, order)
        u = order.leading(g)
        idx = len(G)
        for k in range(idx):
            push((u | leads[k][0]).bit_count(), ("s", k, idx))
        for v in bits(u):
            push(u.bit_count() + 1, ("v", idx, v))
        G.append(g)
        leads.append((u, g.terms[u], g))

    for g in I.gens:
        push(g.degree, ("g", g))
    while queue:
        _, _, item = heapq.heappop(queue)
        if item[0] == "g":
            h = item[1]
        elif item[0] == "v":
            _, k, v = item
            h = G[k].times_monomial(1 << v)
        else:
            _, a, b = item
            (ua, ca, ga), (ub, cb, gb) = leads[a], leads[b]
            lcm = ua | ub
            pa = ga.times_monomial(lcm ^ ua)
            pb = gb.times_monomial(lcm ^ ub)
            h = pa.scale(pb.terms[lcm]) - pb.scale(pa.terms[lcm])
        if not h:
            continue
        h = _nf(h, leads, order)
        if h:
            add(h)
    return _interreduce(ring, order, G)


def _interreduce(ring, order, G):
    minimal = []
    us = [order.leading(g) for g in G]
    for i, g in enumerate(G):
        u = us[i]
        if any(j != i and u & us[j] == us[j] and (us[j] != u or j < i) for j in range(len(G))):
            continue
        minimal.append(g)
    minimal.sort(key=lambda g: order.key(order.leading(g)))
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        u = order.leading(g)
        tail = g - g.ring.monomial(u, g.terms[u])
        r = _nf(tail, _leads(others, order), order)
        out.append(_monic(g.ring.monomial(u, g.terms[u]) + r, order))
    return GroebnerBasis(ring, order, tuple(out))


groebner = buchberger


def standard_monomials(G: GroebnerBasis, d: int) -> list[int]:
    return [m for m in basis_monomials(G.ring, d) if G.is_standard(m)]


def ideal_membership(f: Element, G: GroebnerBasis) -> bool:
    if f.ring != G.ring:
        raise ValueError("element belongs to a different ring")
    return G.contains(f)


def max_gb_degree(G: GroebnerBasis) -> int:
    return max((g.degree for g in G.generators), default=0)


def dim_oracle(I: Ideal, d: int) -> int:
    """dim (ring/I)_d by ranking all products ``m*g``; no Groebner machinery."""
    ring = I.ring
    n = ring.n
    if d < 0 or d > n:
        return 0
    index = {m: k for k, m in enumerate(basis_monomials(ring, d))}
    rows = []
    for g in I.gens:
        e = g.degree
        if e > d:
            continue
        for m in basis_monomials(ring, d - e):
            p = g.times_monomial(m)
            if p:
                rows.append({index[t]: c for t, c in p.terms.items()})
    if not rows:
        return comb(n, d)
    return comb(n, d) - linalg.rank(linalg.matrix(rows, len(index), ring.field), ring.field)


class QuotientRing:
    """Standard-monomial model of ``ring/I`` with a cached multiplication table."""

    def __init__(self, gb: GroebnerBasis):
        self.gb = gb
        self.ring = gb.ring
        self.field = gb.ring.field
        self.by_degree: list[list[int]] = []
        basis: list[int] = []
        for d in range(self.ring.n + 1):
            std = standard_monomials(gb, d)
            self.by_degree.append(std)
            basis.extend(std)
        self.basis = basis
        self.index = {m: k for k, m in enumerate(basis)}
        while len(self.by_degree) > 1 and not self.by_degree[-1]:
            self.by_degree.pop()
        self.top_degree = len(self.by_degree) - 1 if self.by_degree[-1] else -1
        self._nf_cache: dict[int, dict] = {}
        self._mul_cache: dict = {}

    @classmethod
    def from_ideal(cls, I: Ideal, order: TermOrder | None = None) -> "QuotientRing":
        return cls(buchberger(I, order))

    def dim(self, d: int) -> int:
        return len(self.by_degree[d]) if 0 <= d < len(self.by_degree) else 0

    def hilbert(self) -> list[int]:
        return [len(b) for b in self.by_degree]

    def nf_monomial(self, mask: int) -> dict:
        """Normal form of a monomial as ``{basis index: coeff}``."""
        out = self._nf_cache.get(mask)
        if out is None:
            r = self.gb.normal_form(self.ring.monomial(mask))
            out = {self.index[m]: c for m, c in r.terms.items()}
            self._nf_cache[mask] = out
        return out

    def mul(self, a: int, b: int) -> dict:
        """Normal form of ``basis[a]*basis[b]`` as ``{basis index: coeff}``."""
        key = (a, b)
        out = self._mul_cache.get(key)
        if out is None:
            ma, mb = self.basis[a], self.basis[b]
            if ma & mb:
                out = {}
            else:
                nf = self.nf_monomial(ma | mb)
                if self.ring.sign(ma, mb) < 0:
                    f = self.field
                    out = {k: f.neg(c) for k, c in nf.items()}
                else:
                    out = nf
            self._mul_cache[key] = out
        return out

    def element_vector(self, f: Element) -> dict:
        r = self.gb.normal_form(f)
        return {self.index[m]: c for m, c in r.terms.items()}

    def vector_element(self, v: dict) -> Element:
        return Element(self.ring, {self.basis[k]: c for k, c in v.items()})


def colon_by_linear(J: Ideal, x: Element, order: TermOrder | None = None) -> Ideal:
    """Generators of ``(J : x) = {f : f*x in J}``, found degree by degree."""
    if not x:
        raise ValueError("colon by the zero element")
    if x.degree != 1:
        raise ValueError(f"{x} is not a linear form")
    ring = J.ring
    fld = ring.field
    Q = QuotientRing(buchberger(J, order))
    new: list[Element] = []
    for d in range(ring.n + 1):
        src = Q.by_degree[d] if d < len(Q.by_degree) else []
        if not src:
            continue
        tgt = Q.by_degree[d + 1] if d + 1 < len(Q.by_degree) else []
        tidx = {m: k for k, m in enumerate(tgt)}
        rows = []
        for m in src:
            v = Q.gb.normal_form(ring.monomial(m) * x)
            rows.append({tidx[t]: c for t, c in v.terms.items()})
        K = linalg.left_kernel(linalg.matrix(rows, len(tgt), fld), fld)
        if K.shape[0] == 0:
            continue
        # part already generated by lower-degree colon elements
        sidx = {m: k for k, m in enumerate(src)}
        prows = []
        for c in new:
            for m in basis_monomials(ring, d - c.degree):
                v = Q.gb.normal_form(c.times_monomial(m))
                if v:
                    prows.append({sidx[t]: a for t, a in v.terms.items()})
        P = linalg.matrix(prows, len(src), fld)
        for row in linalg.complement(K, P, fld):
            new.append(Element(ring, {src[k]: row[k] for k in range(len(src)) if row[k]}))
    return Ideal(ring, J.gens + tuple(new))

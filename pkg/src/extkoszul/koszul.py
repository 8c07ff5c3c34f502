"""Koszulness verdicts with re-checkable certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

from . import linalg
from .algebra import Element, Mode, RingSpec
from .groebner import GroebnerBasis, Ideal, TermOrder, buchberger, colon_by_linear
from .qforms import is_reducible, symplectic_normal_form
from .resolution import Resolver, residue_field_presentation
from .series import froberg_obstruction, hilbert_series, series_invert

__all__ = [
    "Filtration", "SearchResult", "FrobergNegative", "NonlinearBetti", "KoszulVerdict",
    "Prediction", "CrossValidation", "verify_filtration", "check_filtration",
    "find_koszul_filtration", "koszul_check", "classify_hypersurface", "cross_validate",
]

log = logging.getLogger(__name__)


def _as_gb(R) -> GroebnerBasis:
    if isinstance(R, GroebnerBasis):
        return R
    if isinstance(R, Ideal):
        return buchberger(R)
    if isinstance(R, RingSpec):
        return buchberger(Ideal(R, []))
    raise TypeError(f"cannot interpret {R!r} as a quotient ring")


@dataclass(frozen=True)
class Filtration:
    """Ideals of ``R`` generated by linear forms, with witnesses.

    ``witnesses[k]`` is ``(a, x, b)``: ``ideals[k] = ideals[a] + (x)`` and
    ``(ideals[a] : x) = ideals[b]``; ``None`` marks the zero ideal.
    """

    ideals: tuple[tuple[Element, ...], ...]
    witnesses: tuple[tuple[int, Element, int] | None, ...]

    def __len__(self):
        return len(self.ideals)

    def to_json(self) -> dict:
        return {
            "ideals": [[str(g) for g in gens] for gens in self.ideals],
            "witnesses": [None if w is None else {"ideal": w[0], "x": str(w[1]), "colon": w[2]}
                          for w in self.witnesses],
        }


@dataclass(frozen=True)
class SearchResult:
    filtration: Filtration | None
    budget_exceeded: bool = False
    ideals_examined: int = 0

    def __bool__(self):
        return self.filtration is not None


def _ideal_gb(base: GroebnerBasis, gens) -> GroebnerBasis:
    return buchberger(Ideal(base.ring, base.generators + tuple(gens)), base.order)


def check_filtration(R, F: Filtration) -> list[str]:
    """Every axiom violation found in ``F`` (empty list means a valid filtration)."""
    base = _as_gb(R)
    ring = base.ring
    problems = []
    if len(F.witnesses) != len(F.ideals):
        return ["one witness slot per ideal is required"]
    for k, gens in enumerate(F.ideals):
        for g in gens:
            if g.ring != ring or g.degree != 1:
                problems.append(f"ideal {k}: generator {g} is not a linear form of the ring")
    if problems:
        return problems
    gbs = [_ideal_gb(base, gens) for gens in F.ideals]
    zero = base
    maximal = _ideal_gb(base, ring.gens())
    if zero not in gbs:
        problems.append("the zero ideal is missing")
    if maximal not in gbs:
        problems.append("the maximal ideal is missing")
    for k, w in enumerate(F.witnesses):
        if gbs[k] == zero:
            continue
        if w is None:
            problems.append(f"ideal {k} is nonzero but has no witness")
            continue
        a, x, b = w
        if not (0 <= a < len(gbs) and 0 <= b < len(gbs)):
            problems.append(f"ideal {k}: witness indices out of range")
            continue
        if x.ring != ring or x.degree != 1:
            problems.append(f"ideal {k}: witness element {x} is not linear")
            continue
        if gbs[a] == gbs[k]:
            problems.append(f"ideal {k}: witness ideal {a} is not a proper subideal")
        if _ideal_gb(base, F.ideals[a] + (x,)) != gbs[k]:
            problems.append(f"ideal {k} != ideal {a} + ({x})")
        colon = buchberger(colon_by_linear(gbs[a].ideal, x, base.order), base.order)
        if colon != gbs[b]:
            problems.append(f"ideal {k}: (ideal {a} : {x}) != ideal {b}")
    return problems


def verify_filtration(R, F: Filtration) -> bool:
    problems = check_filtration(R, F)
    for p in problems:
        log.info("filtration axiom failed: %s", p)
    return not problems


def find_koszul_filtration(R, pool: Sequence[Element] | None = None, max_ideals: int = 5000) -> SearchResult:
    """Largest Koszul filtration among ideals generated by subsets of ``pool``.

    All subset ideals are enumerated breadth-first (smallest subsets first);
    then ideals lacking a witness inside the family are pruned until nothing
    changes. The surviving family is a filtration when it still contains the
    zero and the maximal ideal.
    """
    base = _as_gb(R)
    ring = base.ring
    pool = list(pool) if pool is not None else ring.gens()
    for x in pool:
        if x.ring != ring or x.degree != 1:
            raise ValueError(f"pool element {x} is not a linear form")

    fld = ring.field
    vectors = [[x.coefficient(1 << i) for i in range(ring.n)] for x in pool]
    nodes: dict = {}  # key -> (generators, gb)
    examined = 0
    exceeded = False
    # a span of pool elements is spanned by an independent subset of size <= n
    for size in range(min(len(pool), ring.n) + 1):
        for combo in combinations(range(len(pool)), size):
            if size > 1 and linalg.rank(linalg.matrix([vectors[k] for k in combo], ring.n, fld), fld) < size:
                continue
            if examined >= max_ideals:
                exceeded = True
                break
            examined += 1
            gens = tuple(pool[k] for k in combo)
            gb = _ideal_gb(base, gens)
            nodes.setdefault(gb.key(), (gens, gb))
        if exceeded:
            break
    zero_key = base.key()
    max_key = _ideal_gb(base, ring.gens()).key()
    if zero_key not in nodes or max_key not in nodes:
        return SearchResult(None, exceeded, examined)

    edges: dict = {key: [] for key in nodes}
    # fixed traversal order keeps the chosen witnesses deterministic
    keys = list(nodes)
    for jkey in keys:
        jgens, jgb = nodes[jkey]
        for x in pool:
            if jgb.contains(x):
                continue
            ikey = _ideal_gb(base, jgens + (x,)).key()
            if ikey not in nodes:
                continue
            ckey = buchberger(colon_by_linear(jgb.ideal, x, base.order), base.order).key()
            if ckey in nodes:
                edges[ikey].append((jkey, x, ckey))

    alive = set(keys)
    changed = True
    while changed:
        changed = False
        for key in keys:
            if key == zero_key or key not in alive:
                continue
            if not any(j in alive and c in alive for j, _, c in edges[key]):
                alive.discard(key)
                changed = True
    if zero_key not in alive or max_key not in alive:
        return SearchResult(None, exceeded, examined)

    members = [k for k in keys if k in alive]
    pos = {k: i for i, k in enumerate(members)}
    witnesses = []
    for key in members:
        if key == zero_key:
            witnesses.append(None)
            continue
        j, x, c = next((j, x, c) for j, x, c in edges[key] if j in alive and c in alive)
        witnesses.append((pos[j], x, pos[c]))
    F = Filtration(tuple(nodes[k][0] for k in members), tuple(witnesses))
    return SearchResult(F, exceeded, examined)


@dataclass(frozen=True)
class FrobergNegative:
    index: int
    coefficient: object = None

    def to_json(self):
        return {"type": "FrobergNegative", "index": self.index, "coefficient": str(self.coefficient)}


@dataclass(frozen=True)
class NonlinearBetti:
    i: int
    j: int
    value: int = 0

    def to_json(self):
        return {"type": "NonlinearBetti", "i": self.i, "j": self.j, "value": self.value}


class VerdictKind(str, Enum):
    KOSZUL = "CertifiedKoszul"
    NON_KOSZUL = "CertifiedNonKoszul"
    INCONCLUSIVE = "LinearThroughWindow"


@dataclass(frozen=True)
class KoszulVerdict:
    kind: VerdictKind
    certificate: Filtration | FrobergNegative | NonlinearBetti | None = None
    linear_through: int | None = None
    window: dict = field(default_factory=dict)

    @property
    def is_koszul(self) -> bool:
        return self.kind is VerdictKind.KOSZUL

    @property
    def is_non_koszul(self) -> bool:
        return self.kind is VerdictKind.NON_KOSZUL

    @property
    def exit_code(self) -> int:
        return {VerdictKind.KOSZUL: 0, VerdictKind.NON_KOSZUL: 10, VerdictKind.INCONCLUSIVE: 20}[self.kind]

    def to_json(self) -> dict:
        return {
            "verdict": self.kind.value,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "linear_through": self.linear_through,
            "window": dict(self.window),
        }


def koszul_check(R, i_max: int = 6, depth: int | None = None, j_max: int | None = None,
                 pool: Sequence[Element] | None = None, max_ideals: int = 5000,
                 threads: int = 1) -> KoszulVerdict:
    """Series obstruction, then Betti nonlinearity, then a filtration search."""
    gb = _as_gb(R)
    ring = gb.ring
    depth = 2 * ring.n if depth is None else depth
    j_max = 2 * i_max + 2 if j_max is None else j_max
    window = {"i_max": i_max, "j_max": j_max, "depth": depth}

    H = hilbert_series(gb)
    idx = froberg_obstruction(H, depth)
    if idx is not None:
        coeff = series_invert(H.at_minus_t(), idx)[idx]
        return KoszulVerdict(VerdictKind.NON_KOSZUL, FrobergNegative(idx, coeff), window=window)

    res = Resolver(gb, residue_field_presentation(ring), j_max, threads)
    linear_through = 0
    for i in range(1, i_max + 1):
        col = res.step()
        off = sorted(j for j in col if j != i)
        if off:
            return KoszulVerdict(VerdictKind.NON_KOSZUL, NonlinearBetti(i, off[0], col[off[0]]),
                                 window=window)
        if res.complete[i] and linear_through == i - 1:
            linear_through = i

    search = find_koszul_filtration(gb, pool, max_ideals)
    if search.filtration is not None:
        return KoszulVerdict(VerdictKind.KOSZUL, search.filtration, linear_through, window)
    if search.budget_exceeded:
        window["filtration_budget_exceeded"] = True
    return KoszulVerdict(VerdictKind.INCONCLUSIVE, None, linear_through, window)


class Prediction(str, Enum):
    KOSZUL = "Koszul"
    NOT_KOSZUL = "NotKoszul"


def classify_hypersurface(E: RingSpec, h: Element) -> Prediction:
    """Koszul iff ``h`` is a product of two linear forms (``h = 0`` included)."""
    if E.mode is not Mode.EXTERIOR:
        raise ValueError("the hypersurface classifier applies to exterior algebras")
    if h.ring != E:
        raise ValueError("form belongs to a different ring")
    if h and h.degree != 2:
        raise ValueError(f"{h} is not a quadratic form")
    return Prediction.KOSZUL if is_reducible(h) else Prediction.NOT_KOSZUL


@dataclass(frozen=True)
class CrossValidation:
    h: Element
    predicted: Prediction
    verdict: KoszulVerdict
    rank: int

    @property
    def agrees(self) -> bool:
        if self.predicted is Prediction.NOT_KOSZUL:
            return self.verdict.is_non_koszul
        return not self.verdict.is_non_koszul

    def to_json(self) -> dict:
        return {"h": str(self.h), "rank": self.rank, "predicted": self.predicted.value,
                "agrees": self.agrees, **self.verdict.to_json()}


def cross_validate(E: RingSpec, h: Element, i_max: int = 6, depth: int = 12,
                   order: TermOrder | None = None, threads: int = 1) -> CrossValidation:
    """Compare the rank-based prediction with the certificate pipeline on ``E/(h)``.

    For reducible ``h`` the filtration pool is a coordinate system in which
    ``h`` is in normal form, so a positive certificate can be found.
    """
    predicted = classify_hypersurface(E, h)
    nf = symplectic_normal_form(h)
    pool = nf.new_coordinates() if predicted is Prediction.KOSZUL else None
    gb = buchberger(Ideal(E, [h]), order)
    verdict = koszul_check(gb, i_max=i_max, depth=depth, pool=pool, threads=threads)
    return CrossValidation(h, predicted, verdict, nf.rank)

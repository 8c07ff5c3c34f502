"""Session files: a ring declaration plus named elements and ideals.

::

    ring exterior QQ [e1,e2,f1,f2];
    element h = e1*f1 + e2*f2;
    ideal I = (h);

Statements end with ``;``; ``#`` starts a comment. Expressions use ``+ - *``,
integer scalars (``/`` by an integer is allowed), parentheses, variables and
previously named elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import Element, RingSpec
from .fields import FieldSpec

__all__ = ["SessionError", "SessionSpec", "parse_session", "format_session"]


class SessionError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


@dataclass
class SessionSpec:
    ring: RingSpec
    elements: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)

    def ideal(self, name: str | None = None) -> tuple[Element, ...]:
        if name is None:
            return list(self.ideals.values())[-1] if self.ideals else ()
        if name not in self.ideals:
            raise SessionError(f"no ideal named {name!r}")
        return self.ideals[name]

    def element(self, name: str | None = None) -> Element:
        if name is not None:
            if name not in self.elements:
                raise SessionError(f"no element named {name!r}")
            return self.elements[name]
        if self.elements:
            return list(self.elements.values())[-1]
        gens = self.ideal()
        if len(gens) == 1:
            return gens[0]
        raise SessionError("no element selected: declare one or give an ideal with one generator")


_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(p):
        lo = 0
        for k, s in enumerate(line_starts):
            if s <= p:
                lo = k
        return lo + 1, p - line_starts[lo] + 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        pos = m.end()
        if m.lastindex is None or m.group(1) is not None:
            continue
        line, col = where(start)
        if m.group(2) is not None:
            toks.append(_Tok("num", m.group(2), line, col))
        elif m.group(3) is not None:
            toks.append(_Tok("name", m.group(3), line, col))
        elif m.group(4).strip():
            toks.append(_Tok("op", m.group(4), line, col))
    line, col = where(len(text))
    toks.append(_Tok("end", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.k = 0
        self.ring: RingSpec | None = None
        self.elements: dict = {}
        self.ideals: dict = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise SessionError(msg, tok.line, tok.col)

    def take(self, text=None, kind=None) -> _Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            self.error(f"expected {want}, found {t.text or 'end of input'!r}")
        self.k += 1
        return t

    def session(self) -> SessionSpec:
        while self.tok.kind != "end":
            t = self.take(kind="name")
            if t.text == "ring":
                self.ring_stmt(t)
            elif t.text in ("ideal", "element", "elem"):
                if self.ring is None:
                    self.error("the ring must be declared first", t)
                name_tok = self.take(kind="name")
                self.check_name(name_tok)
                self.take("=")
                if t.text == "ideal":
                    self.ideals[name_tok.text] = self.ideal_body()
                else:
                    self.elements[name_tok.text] = self.expr()
            else:
                self.error(f"unknown statement {t.text!r}", t)
            self.take(";")
        if self.ring is None:
            self.error("no ring declared")
        return SessionSpec(self.ring, self.elements, self.ideals)

    def check_name(self, tok):
        if tok.text in self.ring.vars or tok.text in self.elements or tok.text in self.ideals:
            self.error(f"name {tok.text!r} is already in use", tok)

    def ring_stmt(self, t):
        if self.ring is not None:
            self.error("ring declared twice", t)
        mode_tok = self.take(kind="name")
        if mode_tok.text not in ("exterior", "squarezero"):
            self.error(f"unknown ring mode {mode_tok.text!r} (exterior or squarezero)", mode_tok)
        fld_tok = self.take(kind="name")
        try:
            fld = FieldSpec.parse(fld_tok.text)
        except ValueError as exc:
            self.error(str(exc), fld_tok)
        self.take("[")
        names = [self.take(kind="name")]
        while self.tok.text == ",":
            self.take(",")
            names.append(self.take(kind="name"))
        self.take("]")
        seen = set()
        for nt in names:
            if nt.text in seen:
                self.error(f"duplicate variable {nt.text!r}", nt)
            seen.add(nt.text)
        try:
            self.ring = RingSpec(mode_tok.text, tuple(nt.text for nt in names), fld)
        except ValueError as exc:
            self.error(str(exc), t)

    def ideal_body(self) -> tuple[Element, ...]:
        self.take("(")
        gens = []
        if self.tok.text != ")":
            gens.append(self.generator())
            while self.tok.text == ",":
                self.take(",")
                gens.append(self.generator())
        self.take(")")
        return tuple(gens)

    def generator(self) -> Element:
        start = self.tok
        g = self.expr()
        if not g:
            self.error("generator reduces to 0", start)
        if not g.is_homogeneous():
            self.error(f"generator {g} is not homogeneous", start)
        return g

    def expr(self) -> Element:
        out = self.term()
        while self.tok.text in "+-" and self.tok.kind == "op":
            op = self.take().text
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Element:
        out = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take()
            if op.text == "*":
                out = out * self.factor()
            else:
                den = self.factor()
                if den.support() or not den:
                    self.error("can only divide by a nonzero integer scalar", op)
                out = out.scale(self.ring.field.inv(den.coefficient(0)))
        return out

    def factor(self) -> Element:
        t = self.tok
        ring = self.ring
        if t.kind == "op" and t.text in "+-":
            self.take()
            f = self.factor()
            return -f if t.text == "-" else f
        if t.kind == "num":
            self.take()
            return ring.one.scale(int(t.text))
        if t.kind == "name":
            self.take()
            if t.text in ring.vars:
                return ring.var(t.text)
            if t.text in self.elements:
                return self.elements[t.text]
            self.error(f"unknown variable {t.text!r}", t)
        if t.text == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        self.error(f"unexpected {t.text or 'end of input'!r}")


def parse_session(text: str) -> SessionSpec:
    return _Parser(text).session()


def format_session(spec: SessionSpec) -> str:
    r = spec.ring
    lines = [f"ring {r.mode.value} {r.field.name} [{','.join(r.vars)}];"]
    for name, e in spec.elements.items():
        lines.append(f"element {name} = {e};")
    for name, gens in spec.ideals.items():
        lines.append(f"ideal {name} = ({', '.join(map(str, gens))});")
    return "\n".join(lines) + "\n"

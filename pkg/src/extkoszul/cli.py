"""Command-line front end.

Every command reads a session file (``-`` for stdin) and prints a small
``--`` header with the settings it used, then the result. ``--json`` swaps
the text output for a single JSON document.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import combinations

from . import __version__
from .algebra import Element, Mode
from .groebner import Ideal, TermOrder, buchberger, dim_oracle, max_gb_degree, standard_monomials
from .koszul import (Filtration, cross_validate, find_koszul_filtration, check_filtration,
                     classify_hypersurface, koszul_check)
from .qforms import factor_reducible, is_reducible, qform_to_matrix, rank_alternating, symplectic_normal_form
from .resolution import (Resolver, cyclic_presentation, format_betti_m2, residue_field_presentation)
from .series import hilbert_series
from .session import SessionError, SessionSpec, parse_session

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NON_KOSZUL = 10
EXIT_INCONCLUSIVE = 20


class CommandError(Exception):
    pass


def _read_session(path: str) -> SessionSpec:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_session(text)


def _order(spec: SessionSpec, args) -> TermOrder:
    names = None
    if args.vars:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
    try:
        return TermOrder.for_ring(spec.ring, args.order, names)
    except ValueError as exc:
        raise CommandError(str(exc)) from None


def _ideal(spec: SessionSpec, name) -> tuple[str, tuple[Element, ...]]:
    if name is None and spec.ideals:
        name = list(spec.ideals)[-1]
    if name is None:
        return "0", ()
    return name, spec.ideal(name)


def _fmt_ideal(name, gens) -> str:
    return f"{name} = ({', '.join(map(str, gens))})"


def _header(spec: SessionSpec, **fields) -> list[str]:
    r = spec.ring
    out = [f"-- ring: {r.mode.value} {r.field.name} [{','.join(r.vars)}]"]
    out += [f"-- {k}: {v}" for k, v in fields.items()]
    return out


def _pool(ring, kind: str):
    pool = ring.gens()
    if kind == "pairs":
        for a, b in combinations(ring.gens(), 2):
            pool += [a + b, a - b]
    return pool


def cmd_gb(spec, args, out):
    order = _order(spec, args)
    name, gens = _ideal(spec, args.ideal)
    G = buchberger(Ideal(spec.ring, gens), order)
    top = max_gb_degree(G)
    if args.json:
        return EXIT_OK, {"ideal": name, "order": order.describe(spec.ring),
                         "generators": [str(g) for g in G], "max_degree": top}
    out += _header(spec, ideal=_fmt_ideal(name, gens), order=order.describe(spec.ring))
    out += [str(g) for g in G]
    out.append(f"max degree: {top}")
    return EXIT_OK, None


def cmd_hilbert(spec, args, out):
    order = _order(spec, args)
    name, gens = _ideal(spec, args.ideal)
    H = hilbert_series(buchberger(Ideal(spec.ring, gens), order))
    if args.json:
        return EXIT_OK, {"ideal": name, "coefficients": H.as_ints()}
    out += _header(spec, ideal=_fmt_ideal(name, gens), order=order.describe(spec.ring))
    out.append(f"H(t) = {H}")
    return EXIT_OK, None


def cmd_betti(spec, args, out):
    order = _order(spec, args)
    i_max = args.imax
    j_max = args.jmax if args.jmax is not None else 2 * i_max + 2
    ring = spec.ring
    name, gens = _ideal(spec, args.ideal)
    if args.module == "k":
        base_name, base_gens = name, gens
        R = buchberger(Ideal(ring, base_gens), order)
        M = residue_field_presentation(ring)
        module = "k"
    else:
        base_name, base_gens = ("0", ()) if args.base is None else (args.base, spec.ideal(args.base))
        R = buchberger(Ideal(ring, base_gens), order)
        nonzero = [g for g in gens if R.normal_form(g)]
        if not nonzero:
            raise CommandError("the cyclic module needs a generator outside the base ideal")
        M = cyclic_presentation(nonzero)
        module = f"ring/({', '.join(map(str, gens))})"
    res = Resolver(R, M, j_max, args.threads)
    for _ in range(i_max):
        res.step()
    B = res.betti()
    if args.json:
        return EXIT_OK, {"base": base_name, "module": args.module, "order": order.describe(ring),
                         **B.to_json()}
    out += _header(spec, base=_fmt_ideal(base_name, base_gens), module=module,
                   order=order.describe(ring), imax=i_max, jmax=j_max)
    incomplete = [i for i, c in enumerate(B.complete) if not c]
    if incomplete:
        out.append(f"-- columns possibly missing entries past jmax: {','.join(map(str, incomplete))}")
    out.append(format_betti_m2(B).rstrip("\n"))
    return EXIT_OK, None


def cmd_koszul(spec, args, out):
    order = _order(spec, args)
    name, gens = _ideal(spec, args.ideal)
    ring = spec.ring
    depth = args.depth if args.depth is not None else 2 * ring.n
    jmax = args.jmax if args.jmax is not None else 2 * args.imax + 2
    G = buchberger(Ideal(ring, gens), order)
    v = koszul_check(G, i_max=args.imax, depth=depth, j_max=jmax, pool=_pool(ring, args.pool),
                     max_ideals=args.budget, threads=args.threads)
    if args.json:
        return v.exit_code, {"ideal": name, "order": order.describe(ring), **v.to_json()}
    out += _header(spec, ideal=_fmt_ideal(name, gens), order=order.describe(ring), imax=args.imax,
                   jmax=jmax, depth=depth, pool=args.pool)
    out.append(f"verdict: {v.kind.value}")
    cert = v.certificate
    if isinstance(cert, Filtration):
        out.append(f"certificate: Koszul filtration with {len(cert)} ideals")
    elif cert is not None:
        desc = ", ".join(f"{k}={val}" for k, val in cert.to_json().items() if k != "type")
        out.append(f"certificate: {type(cert).__name__}({desc})")
    if v.linear_through is not None:
        out.append(f"linear through column {v.linear_through}")
    return v.exit_code, None


def _form(spec, args) -> Element:
    h = spec.element(args.element)
    if spec.ring.mode is not Mode.EXTERIOR:
        raise CommandError("qform commands need an exterior ring")
    return h


def cmd_qform(spec, args, out):
    h = _form(spec, args)
    ring = spec.ring
    try:
        A = qform_to_matrix(h)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    rank = rank_alternating(A)
    if args.action == "classify":
        red = is_reducible(h)
        pred = classify_hypersurface(ring, h)
        if args.json:
            return EXIT_OK, {"h": str(h), "rank": rank, "reducible": red, "prediction": pred.value}
        out += _header(spec, form=str(h))
        out.append(f"{'reducible' if red else 'irreducible'}, rank {rank}")
        out.append(f"prediction: {pred.value}")
    elif args.action == "normalform":
        nf = symplectic_normal_form(h)
        ys = nf.new_coordinates()
        if args.json:
            return EXIT_OK, {"h": str(h), "rank": nf.rank, "normal_form": str(nf.normal_form),
                             "matrix": [[ring.field.format(c) for c in row] for row in nf.change.matrix],
                             "coordinates": [str(y) for y in ys]}
        out += _header(spec, form=str(h))
        out.append(f"rank {nf.rank}")
        out.append(f"normal form: {nf.normal_form}")
        for k, y in enumerate(ys):
            out.append(f"y{k + 1} = {y}")
    else:
        fac = factor_reducible(h)
        if args.json:
            return EXIT_OK, {"h": str(h), "rank": rank,
                             "factors": None if fac is None else [str(fac[0]), str(fac[1])]}
        out += _header(spec, form=str(h))
        if not h:
            out.append("zero form")
        elif fac is None:
            out.append(f"irreducible (rank {rank})")
        else:
            out.append(f"l1 = {fac[0]}")
            out.append(f"l2 = {fac[1]}")
    return EXIT_OK, None


def _linear(ring, text: str) -> Element:
    try:
        e = parse_session(f"ring {ring.mode.value} {ring.field.name} [{','.join(ring.vars)}]; "
                          f"element x = {text};").elements["x"]
    except SessionError as exc:
        raise CommandError(f"bad linear form {text!r}: {exc.message}") from None
    return e


def _load_filtration(ring, path: str) -> Filtration:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    data = data.get("filtration", data)
    ideals = tuple(tuple(_linear(ring, g) for g in gens) for gens in data["ideals"])
    witnesses = tuple(None if w is None else (int(w["ideal"]), _linear(ring, w["x"]), int(w["colon"]))
                      for w in data["witnesses"])
    return Filtration(ideals, witnesses)


def cmd_filtration(spec, args, out):
    order = _order(spec, args)
    name, gens = _ideal(spec, args.ideal)
    G = buchberger(Ideal(spec.ring, gens), order)
    if args.action == "find":
        res = find_koszul_filtration(G, _pool(spec.ring, args.pool), args.budget)
        code = EXIT_OK if res else EXIT_INCONCLUSIVE
        payload = {"ideal": name, "pool": args.pool, "found": bool(res),
                   "ideals_examined": res.ideals_examined, "budget_exceeded": res.budget_exceeded,
                   "filtration": res.filtration.to_json() if res else None}
        if args.json:
            return code, payload
        out += _header(spec, ideal=_fmt_ideal(name, gens), order=order.describe(spec.ring),
                       pool=args.pool, budget=args.budget)
        if not res:
            out.append(f"no filtration found ({res.ideals_examined} ideals examined)")
            return code, None
        F = res.filtration
        out.append(f"filtration with {len(F)} ideals ({res.ideals_examined} ideals examined)")
        for k, (ids, w) in enumerate(zip(F.ideals, F.witnesses)):
            gen = ", ".join(map(str, ids)) or "0"
            wit = "" if w is None else f"  = [{w[0]}] + ({w[1]}),  [{w[0]}] : ({w[1]}) = [{w[2]}]"
            out.append(f"[{k}] ({gen}){wit}")
        return code, None
    if not args.certificate:
        raise CommandError("filtration verify needs --certificate FILE")
    F = _load_filtration(spec.ring, args.certificate)
    problems = check_filtration(G, F)
    code = EXIT_OK if not problems else EXIT_NON_KOSZUL
    if args.json:
        return code, {"ideal": name, "valid": not problems, "problems": problems}
    out += _header(spec, ideal=_fmt_ideal(name, gens), order=order.describe(spec.ring),
                   certificate=args.certificate)
    out.append("valid" if not problems else "invalid")
    out += [f"  {p}" for p in problems]
    return code, None


def cmd_oracle(spec, args, out):
    order = _order(spec, args)
    name, gens = _ideal(spec, args.ideal)
    I = Ideal(spec.ring, gens)
    G = buchberger(I, order)
    rows = []
    for d in range(spec.ring.n + 1):
        rows.append({"degree": d, "standard": len(standard_monomials(G, d)), "oracle": dim_oracle(I, d)})
    ok = all(r["standard"] == r["oracle"] for r in rows)
    code = EXIT_OK if ok else EXIT_ERROR
    if args.json:
        return code, {"ideal": name, "order": order.describe(spec.ring), "agree": ok, "degrees": rows}
    out += _header(spec, ideal=_fmt_ideal(name, gens), order=order.describe(spec.ring))
    out.append("degree  standard  oracle")
    for r in rows:
        out.append(f"{r['degree']:>6}  {r['standard']:>8}  {r['oracle']:>6}")
    out.append("agree" if ok else "DISAGREE")
    return code, None


def cmd_crossval(spec, args, out):
    ring = spec.ring
    if ring.mode is not Mode.EXTERIOR:
        raise CommandError("crossval needs an exterior ring")
    if ring.field.is_rational:
        raise CommandError("crossval samples coefficients from a finite field")
    rng = random.Random(args.seed)
    p = ring.field.characteristic
    depth = args.depth if args.depth is not None else 12
    pairs = [(1 << i) | (1 << j) for i, j in combinations(range(ring.n), 2)]
    reports = []
    for _ in range(args.count):
        h = Element(ring, {m: rng.randrange(p) for m in pairs})
        reports.append(cross_validate(ring, h, i_max=args.imax, depth=depth, threads=args.threads))
    bad = [r for r in reports if not r.agrees]
    code = EXIT_OK if not bad else EXIT_ERROR
    if args.json:
        return code, {"seed": args.seed, "count": args.count, "disagreements": len(bad),
                      "reports": [r.to_json() for r in reports]}
    out += _header(spec, seed=args.seed, count=args.count, imax=args.imax, depth=depth)
    for r in reports:
        flag = "ok " if r.agrees else "BAD"
        out.append(f"{flag} rank {r.rank} predicted {r.predicted.value:<9} verdict {r.verdict.kind.value}  h = {r.h}")
    out.append(f"disagreements: {len(bad)}")
    return code, None


COMMANDS = {
    "gb": cmd_gb, "hilbert": cmd_hilbert, "betti": cmd_betti, "koszul": cmd_koszul,
    "qform": cmd_qform, "filtration": cmd_filtration, "oracle": cmd_oracle, "crossval": cmd_crossval,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ideal", help="ideal to use (default: the last one declared)")
    common.add_argument("--order", choices=["deglex", "degrevlex"], default="degrevlex")
    common.add_argument("--vars", help="comma-separated variable priority, largest first")
    common.add_argument("--imax", type=int, help="homological window (default 5; 6 for koszul and crossval)")
    common.add_argument("--jmax", type=int)
    common.add_argument("--depth", type=int, help="obstruction depth (default 2n; 12 for crossval)")
    common.add_argument("--json", action="store_true")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="extkoszul", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "gb": "reduced Groebner basis",
        "hilbert": "Hilbert series of ring/I",
        "betti": "graded Betti table",
        "koszul": "Koszulness verdict with certificate",
        "qform": "quadratic form tools",
        "filtration": "Koszul filtration search and verification",
        "oracle": "Groebner counts against direct linear algebra",
        "crossval": "random quadratics: classifier against certificates",
    }
    actions = {"qform": ["classify", "normalform", "factor"], "filtration": ["find", "verify"]}
    cmd = {}
    for name, text in helps.items():
        c = sub.add_parser(name, parents=[common], help=text)
        if name in actions:
            c.add_argument("action", choices=actions[name])
        c.add_argument("session", help="session file, or - for stdin")
        cmd[name] = c
    cmd["betti"].add_argument("--module", choices=["k", "cyclic"], default="k",
                              help="k over ring/I, or ring/I as a cyclic module over ring/BASE")
    cmd["betti"].add_argument("--base", help="ideal defining the base ring for --module cyclic (default 0)")
    for name in ("koszul", "filtration"):
        cmd[name].add_argument("--pool", choices=["vars", "pairs"], default="vars",
                               help="linear forms for the filtration search; pairs adds every v+w and v-w")
        cmd[name].add_argument("--budget", type=int, default=5000, help="maximum ideals the search examines")
    cmd["filtration"].add_argument("--certificate", help="JSON from 'filtration find --json'")
    cmd["qform"].add_argument("--element", help="element to use (default: the last one declared)")
    cmd["crossval"].add_argument("--count", type=int, default=20)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.imax is None:
        args.imax = 6 if args.command in ("koszul", "crossval") else 5
    try:
        spec = _read_session(args.session)
        out: list[str] = []
        code, payload = COMMANDS[args.command](spec, args, out)
    except (SessionError, CommandError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    if payload is not None:
        print(json.dumps(payload, indent=2, sort_keys=True), file=stdout)
    else:
        print("\n".join(out), file=stdout)
    return code


def main(argv=None):
    sys.exit(run(argv))

"""Tangle parser and the ``anchor-calc`` command line.

Grammar::

    expr  := term ("o" INT term)*          left-associative
    term  := atom | "(" expr ")" | "braid(" expr "," STRING ")"
    atom  := unit | id(n) | cap(n,i) | cup(n,i) | mult(i,j) | trac(i,j) | tracinv(i,j)

Every command prints JSON on stdout.  Exit codes: 0 success, 1 a check
failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from . import apa
from . import catmodel as cm
from . import tangle as tg
from .adjunction import AdjunctionError

DEFAULT_TOL = 1e-8


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r'\s*(?:(?P<str>"[^"]*")|(?P<int>\d+)|(?P<name>[A-Za-z_]+)|(?P<punct>[(),]))')
_ARITY = {"unit": 0, "id": 1, "cap": 2, "cup": 2, "mult": 2, "trac": 2, "tracinv": 2}


def _tokenize(text: str) -> list:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", *_where(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    return toks


def _where(text: str, pos: int) -> tuple[int, int]:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str, tok=None):
        pos = tok[2] if tok else len(self.text)
        raise ParseError(msg, *_where(self.text, pos))

    def take(self, kind: str, value: str | None = None):
        t = self.peek()
        if t is None or t[0] != kind or (value is not None and t[1] != value):
            want = value or kind
            self.error(f"expected {want!r}" + (f", got {t[1]!r}" if t else ", got end of input"), t)
        self.i += 1
        return t

    def expr(self):
        e = self.term()
        while (t := self.peek()) is not None and t[0] == "name" and t[1] == "o":
            self.i += 1
            slot = int(self.take("int")[1])
            rhs = self.term()
            e = tg.compose(e, slot, rhs)
        return e

    def term(self):
        t = self.peek()
        if t is None:
            self.error("expected a tangle, got end of input")
        if t[0] == "punct" and t[1] == "(":
            self.i += 1
            e = self.expr()
            self.take("punct", ")")
            return e
        if t[0] != "name":
            self.error(f"expected a tangle, got {t[1]!r}", t)
        self.i += 1
        name = t[1]
        if name == "braid":
            self.take("punct", "(")
            e = self.expr()
            self.take("punct", ",")
            s = self.take("str")
            self.take("punct", ")")
            return tg.braid(e, s[1][1:-1])
        if name not in _ARITY:
            self.error(f"unknown generator {name!r}", t)
        args = []
        if _ARITY[name]:
            self.take("punct", "(")
            for k in range(_ARITY[name]):
                if k:
                    self.take("punct", ",")
                args.append(int(self.take("int")[1]))
            self.take("punct", ")")
        try:
            return tg.Gen(name, *args)
        except tg.TangleError as exc:
            self.error(str(exc), t)


def parse_tangle(text: str) -> tg.TangleExpr:
    p = _Parser(text)
    e = p.expr()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek()[1]!r}", p.peek())
    tg.type_of(e)
    return e


# --------------------------------------------------------------------------
# JSON helpers


def _num(z) -> float | list:
    z = complex(z)
    return [z.real, z.imag]


def mor_report(f: cm.Mor) -> dict:
    if f.source.total_dim() == 1 and f.target.total_dim() == 1:
        return {"scalar": _num(f.vec()[0])}
    return {"source": repr(f.source), "target": repr(f.target),
            "blocks": {str(s): [[_num(z) for z in row] for row in b] for s, b in f.blocks.items() if b.size}}


def _matrix(G: np.ndarray) -> list:
    if np.max(np.abs(G.imag), initial=0.0) < 1e-12:
        return G.real.tolist()
    return [[_num(z) for z in row] for row in G]


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return _num(x)
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def _emit(obj) -> None:
    print(json.dumps(_clean(obj)))


def load_instance(name: str, n_max: int) -> apa.APAInstance:
    if name == "fermion" or name.startswith("tl:"):
        return apa.builtin(name, n_max)
    if os.path.exists(name):
        return apa.load(name)
    raise apa.APAError(f"no built-in instance or file named {name!r}")


def _tol(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("ANCHOR_CALC_TOL")
    return float(env) if env else DEFAULT_TOL


# --------------------------------------------------------------------------
# commands


def cmd_dims(args) -> int:
    A = load_instance(args.instance, args.n)
    if args.n > A.n_max and A.model is None:
        raise apa.CutoffExceeded(f"instance stops at n_max={A.n_max}")
    _emit(A.dims(args.n))
    return 0


def cmd_eval(args) -> int:
    e = parse_tangle(args.expr)
    t = tg.type_of(e)
    need = max([t.output, *t.inputs, args.nmax or 0])
    A = load_instance(args.instance, need)
    _emit(mor_report(A.evaluate(e)))
    return 0


def cmd_check(args) -> int:
    A = load_instance(args.instance, args.nmax or 6)
    axioms = args.axioms.split(",") if args.axioms else None
    if axioms:
        bad = set(axioms) - set(apa.ALL_AXIOMS)
        if bad:
            raise ValueError(f"unknown axioms {sorted(bad)}")
    rep = apa.check_axioms(A, seed=args.seed, axioms=axioms, tol=_tol(args))
    _emit(rep.to_json())
    return 0 if rep.ok else 1


def cmd_gram(args) -> int:
    A = load_instance(args.instance, max(args.n, args.nmax or 0))
    G = apa.gram(A, args.n)
    ev = np.linalg.eigvalsh((G + G.conj().T) / 2) if G.size else np.zeros(0)
    _emit({"n": args.n, "matrix": _matrix(G), "eigenvalues": ev.tolist()})
    return 0


def cmd_delta(args) -> int:
    from . import delta as dl

    A = load_instance(args.instance, args.nmax or 4)
    D = dl.Delta(A)
    rng = np.random.default_rng(args.seed)
    nmax = min(args.nmax or 4, A.n_max)
    one = cm.unit_obj(A.V)
    if args.report == "dims":
        vs = [one] + [cm.simple_obj(A.V, s) for s in A.V.simples() if s not in A.V.unit_simples()]
        _emit(dl.dims_table(D, vs, nmax))
        return 0
    if args.report == "projections":
        out = []
        for n in range(nmax + 1):
            rep = dl.projection_report(D, dl.simple_decomposition(D, dl.C0Obj(one, n), args.seed))
            out.append({"object": [repr(one), n], **rep})
        _emit(out)
        return 0
    tol = _tol(args)
    res = dict(dl.dagger_checks(D, rng, nmax, 10))
    res["associativity"] = dl.associativity_check(D, rng, min(nmax, 3), 10)
    res["interchange"] = dl.interchange_check(D, rng, min(nmax, 2), 10)
    res["zigzag"] = max(dl.zigzag_check(D, dl.C0Obj(one, n)) for n in range(min(nmax, 2) + 1))
    res["pivotal_unitarity"] = max(dl.pivotal_unitarity(D, dl.C0Obj(one, n)) for n in range(min(nmax, 2) + 1))
    res["adjunction"] = dl.unitary_adjunction_check(D, rng, nmax)
    pos = dl.linking_positivity(D, D.x, D.x, rng)
    res = {k: float(v) for k, v in res.items()}
    ok = all(v <= tol for v in res.values()) and pos > -tol
    _emit({"residuals": res, "linking_min_eigenvalue": pos, "tol": tol, "ok": ok})
    return 0 if ok else 1


def cmd_roundtrip(args) -> int:
    from .lambda_ import roundtrip_check

    A = load_instance(args.instance, args.nmax or 4)
    rep = roundtrip_check(A, args.nmax, seed=args.seed, tol=_tol(args))
    _emit(rep)
    return 0 if rep["ok"] else 1


def cmd_lambda(args) -> int:
    from .adjunction import builtin_module
    from .lambda_ import lambda_apa

    M = builtin_module(args.module)
    A = lambda_apa(M, args.nmax or 4, tau_mode="rotation")
    print(apa.dumps(A))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nmax", type=int, default=None, help="box cutoff")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="check tolerance (env ANCHOR_CALC_TOL)")

    p = argparse.ArgumentParser(prog="anchor-calc", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("dims", parents=[common], help="box dimensions up to n")
    s.add_argument("instance")
    s.add_argument("n", type=int)
    s.set_defaults(fn=cmd_dims)
    s = sub.add_parser("eval", parents=[common], help="evaluate a tangle")
    s.add_argument("instance")
    s.add_argument("expr")
    s.set_defaults(fn=cmd_eval)
    s = sub.add_parser("check", parents=[common], help="run the axiom suite")
    s.add_argument("instance")
    s.add_argument("--axioms", default=None, help="comma separated subset of " + ",".join(apa.ALL_AXIOMS))
    s.set_defaults(fn=cmd_check)
    s = sub.add_parser("gram", parents=[common], help="Gram matrix of the pairing on P[n]")
    s.add_argument("instance")
    s.add_argument("n", type=int)
    s.set_defaults(fn=cmd_gram)
    s = sub.add_parser("delta", parents=[common], help="reports on the Δ category")
    s.add_argument("instance")
    s.add_argument("--report", choices=("properties", "dims", "projections"), default="properties")
    s.set_defaults(fn=cmd_delta)
    s = sub.add_parser("roundtrip", parents=[common], help="compare Λ(Δ(P)) with P")
    s.add_argument("instance")
    s.set_defaults(fn=cmd_roundtrip)
    s = sub.add_parser("lambda", parents=[common], help="print Λ of a built-in module as APA JSON")
    s.add_argument("module", help="svect, matrix, matrix-nonspherical or zN")
    s.set_defaults(fn=cmd_lambda)
    return p


_INPUT_ERRORS = (ParseError, tg.TangleError, apa.APAError, cm.CategoryError, AdjunctionError, ValueError,
                 KeyError, OSError, json.JSONDecodeError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

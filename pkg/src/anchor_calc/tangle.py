"""Anchored planar tangles as generator terms.

Tangles are trees over seven generator families, operadic composition and
ribbon braid moves on the inputs.  Nothing here decides isotopy; relations
between terms are only ever checked after evaluation.

Strands of a box of size n are numbered 1..n clockwise from its anchor
point.  ``Trac{i,j}`` carries the last j strands around the back of the
disk to the front, ``TracInv{i,j}`` is its inverse, ``Cap{n,i}`` joins
strands i+1 and i+2, and ``Cup{n,i}`` creates strands i+1 and i+2.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Union


class TangleError(Exception):
    pass


class ArityMismatch(TangleError):
    pass


class BadSlot(TangleError):
    pass


class BadBraidLetter(TangleError):
    pass


@dataclass(frozen=True)
class TangleType:
    inputs: tuple
    output: int

    def __iter__(self):
        return iter((list(self.inputs), self.output))

    def __repr__(self):
        return f"({list(self.inputs)};{self.output})"


GEN_KINDS = ("unit", "cap", "cup", "mult", "trac", "tracinv", "id")


@dataclass(frozen=True)
class Gen:
    kind: str
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.kind not in GEN_KINDS:
            raise TangleError(f"unknown generator {self.kind!r}")
        if self.a < 0 or self.b < 0:
            raise TangleError("generator parameters must be non-negative")
        if self.kind in ("cap", "cup") and self.b > self.a:
            raise TangleError(f"{self.kind}({self.a},{self.b}) needs 0 <= i <= n")

    def type(self) -> TangleType:
        k, a, b = self.kind, self.a, self.b
        if k == "unit":
            return TangleType((), 0)
        if k == "cap":
            return TangleType((a + 2,), a)
        if k == "cup":
            return TangleType((a,), a + 2)
        if k == "mult":
            return TangleType((a, b), a + b)
        if k in ("trac", "tracinv"):
            return TangleType((a + b,), a + b)
        return TangleType((a,), a)


@dataclass(frozen=True)
class Compose:
    outer: "TangleExpr"
    slot: int
    inner: "TangleExpr"


@dataclass(frozen=True)
class Letter:
    """σ_m (kind 's') or θ_m (kind 't'), possibly inverted."""

    kind: str
    m: int
    inv: bool = False

    def __str__(self):
        return f"{self.kind}{self.m}{chr(39) if self.inv else ''}"


@dataclass(frozen=True)
class RibbonMove:
    expr: "TangleExpr"
    word: tuple


TangleExpr = Union[Gen, Compose, RibbonMove]


# constructors


def unit() -> Gen:
    return Gen("unit")


def cap(n: int, i: int) -> Gen:
    return Gen("cap", n, i)


def cup(n: int, i: int) -> Gen:
    return Gen("cup", n, i)


def mult(i: int, j: int) -> Gen:
    return Gen("mult", i, j)


def trac(i: int, j: int) -> Gen:
    return Gen("trac", i, j)


def tracinv(i: int, j: int) -> Gen:
    return Gen("tracinv", i, j)


def ident(n: int) -> Gen:
    return Gen("id", n)


def parse_word(text: str) -> tuple:
    out = []
    for tok in text.split():
        inv = tok.endswith("'")
        body = tok.rstrip("'")
        if len(body) < 2 or body[0] not in "st" or not body[1:].isdigit():
            raise BadBraidLetter(f"bad braid letter {tok!r}")
        out.append(Letter(body[0], int(body[1:]), inv))
    return tuple(out)


def compose(S: TangleExpr, i: int, T: TangleExpr) -> Compose:
    e = Compose(S, i, T)
    type_of(e)
    return e


def braid(e: TangleExpr, word) -> RibbonMove:
    if isinstance(word, str):
        word = parse_word(word)
    r = RibbonMove(e, tuple(word))
    type_of(r)
    return r


# typing


def _apply_letters(inputs: list, word) -> list:
    inputs = list(inputs)
    for w in word:
        if w.kind == "s":
            if not 1 <= w.m < len(inputs):
                raise BadBraidLetter(f"σ_{w.m} needs positions {w.m},{w.m + 1} among {len(inputs)} inputs")
            inputs[w.m - 1], inputs[w.m] = inputs[w.m], inputs[w.m - 1]
        elif w.kind == "t":
            if not 1 <= w.m <= len(inputs):
                raise BadBraidLetter(f"θ_{w.m} needs an input at position {w.m}")
        else:
            raise BadBraidLetter(f"unknown letter kind {w.kind!r}")
    return inputs


def type_of(e: TangleExpr) -> TangleType:
    if isinstance(e, Gen):
        return e.type()
    if isinstance(e, Compose):
        so = type_of(e.outer)
        ti = type_of(e.inner)
        if not 1 <= e.slot <= len(so.inputs):
            raise BadSlot(f"slot {e.slot} out of range for {so}")
        want = so.inputs[e.slot - 1]
        if ti.output != want:
            raise ArityMismatch(f"slot {e.slot} wants {want}, inner tangle {to_text(e.inner)} gives {ti.output}")
        ins = so.inputs[:e.slot - 1] + ti.inputs + so.inputs[e.slot:]
        return TangleType(tuple(ins), so.output)
    if isinstance(e, RibbonMove):
        t = type_of(e.expr)
        return TangleType(tuple(_apply_letters(t.inputs, e.word)), t.output)
    raise TangleError(f"not a tangle expression: {e!r}")


# reflection


def _reflect_letter(w: Letter, k: int) -> Letter:
    if w.kind == "s":
        return Letter("s", k - w.m, not w.inv)
    return Letter("t", k + 1 - w.m, not w.inv)


def reflect(e: TangleExpr) -> TangleExpr:
    """Mirror image; reverses the order of the inputs."""
    if isinstance(e, Gen):
        k, a, b = e.kind, e.a, e.b
        if k in ("cap", "cup"):
            return Gen(k, a, a - b)
        if k == "mult":
            return Gen("mult", b, a)
        if k == "trac":
            return Gen("tracinv", a, b)
        if k == "tracinv":
            return Gen("trac", a, b)
        return e
    if isinstance(e, Compose):
        m = len(type_of(e.outer).inputs)
        return Compose(reflect(e.outer), m + 1 - e.slot, reflect(e.inner))
    if isinstance(e, RibbonMove):
        # letters act on the inputs of the moved term, one after the other
        ins = list(type_of(e.expr).inputs)
        k = len(ins)
        return RibbonMove(reflect(e.expr), tuple(_reflect_letter(w, k) for w in e.word))
    raise TangleError(f"not a tangle expression: {e!r}")


def inside_out(e: TangleExpr) -> TangleExpr:
    """Reflection of an annular tangle across its circles: caps and cups trade places."""
    if isinstance(e, Gen):
        k, a, b = e.kind, e.a, e.b
        if k == "cap":
            return Gen("cup", a, b)
        if k == "cup":
            return Gen("cap", a, b)
        if k == "trac":
            return Gen("tracinv", a, b)
        if k == "tracinv":
            return Gen("trac", a, b)
        if k == "id":
            return e
        raise TangleError(f"{k} is not annular")
    if isinstance(e, Compose):
        if len(type_of(e.outer).inputs) != 1 or len(type_of(e.inner).inputs) != 1:
            raise TangleError("inside_out needs annular pieces")
        return Compose(inside_out(e.inner), 1, inside_out(e.outer))
    raise TangleError("inside_out needs annular pieces")


# standard tangles


def rotation(n: int) -> TangleExpr:
    """One-click rotation of an n-box: the last strand moves to the front."""
    if n == 0:
        return ident(0)
    return trac(n - 1, 1)


def power(e: TangleExpr, k: int) -> TangleExpr:
    out = ident(type_of(e).output)
    for _ in range(k):
        out = Compose(out, 1, e)
    return out


def nest_caps(e: TangleExpr, left: int, n: int) -> TangleExpr:
    """Cap off 2n consecutive strands after the first ``left``, innermost pair first."""
    out = type_of(e).output
    rest = out - left - 2 * n
    if rest < 0:
        raise ArityMismatch("not enough strands to cap")
    for t in range(n - 1, -1, -1):
        e = Compose(cap(left + rest + 2 * t, left + t), 1, e)
    return e


def nest_cups(e: TangleExpr, left: int, n: int) -> TangleExpr:
    """Create 2n consecutive strands after the first ``left``, outermost pair first."""
    out = type_of(e).output
    for t in range(n):
        e = Compose(cup(out + 2 * t, left + t), 1, e)
    return e


def rainbow(n: int) -> TangleExpr:
    """Nested caps closing up a 2n-box: strand s meets strand 2n+1-s."""
    return nest_caps(ident(2 * n), 0, n)


def through_strands(n: int) -> TangleExpr:
    """The element of P[2n] with strand s joined to strand 2n+1-s."""
    return nest_cups(unit(), 0, n)


def pairing(n: int) -> TangleExpr:
    """Rainbow closure of two n-boxes side by side."""
    return nest_caps(mult(n, n), 0, n)


def contraction(p: int, n: int, k: int) -> TangleExpr:
    """Glue a (p+n)-box on top of an (n+k)-box along n strands."""
    return nest_caps(mult(p + n, n + k), p, n)


# printing and enumeration


def to_text(e: TangleExpr) -> str:
    if isinstance(e, Gen):
        k, a, b = e.kind, e.a, e.b
        if k == "unit":
            return "unit"
        if k == "id":
            return f"id({a})"
        return f"{k}({a},{b})"
    if isinstance(e, Compose):
        inner = to_text(e.inner)
        if isinstance(e.inner, Compose):
            inner = f"({inner})"
        return f"{to_text(e.outer)} o{e.slot} {inner}"
    if isinstance(e, RibbonMove):
        word = " ".join(str(w) for w in e.word)
        return f'braid({to_text(e.expr)}, "{word}")'
    raise TangleError(f"not a tangle expression: {e!r}")


def generators_with_output(n: int, nmax: int) -> list[Gen]:
    out: list[Gen] = [ident(n)]
    if n == 0:
        out.append(unit())
    if n + 2 <= nmax:
        out += [cap(n, i) for i in range(n + 1)]
    if n >= 2:
        out += [cup(n - 2, i) for i in range(n - 1)]
    out += [mult(i, n - i) for i in range(n + 1)]
    out += [trac(i, n - i) for i in range(n + 1)]
    out += [tracinv(i, n - i) for i in range(n + 1)]
    return out


def random_tangle(rng: random.Random, output: int, nmax: int, depth: int,
                  even: bool = False, braids: bool = True) -> TangleExpr:
    """A well-typed random term with the given output, all boxes ≤ nmax."""
    gens = generators_with_output(output, nmax)
    if even:
        gens = [g for g in gens if all(x % 2 == 0 for x in g.type().inputs)]
    e: TangleExpr = rng.choice(gens)
    if depth > 0:
        ins = list(type_of(e).inputs)
        for slot in range(len(ins), 0, -1):
            if rng.random() < 0.6:
                inner = random_tangle(rng, ins[slot - 1], nmax, depth - 1, even, braids)
                e = Compose(e, slot, inner)
    ins = type_of(e).inputs
    if braids and len(ins) >= 2 and rng.random() < 0.3:
        word = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.7:
                word.append(Letter("s", rng.randint(1, len(ins) - 1), rng.random() < 0.5))
            else:
                word.append(Letter("t", rng.randint(1, len(ins)), rng.random() < 0.5))
        e = RibbonMove(e, tuple(word))
    return e

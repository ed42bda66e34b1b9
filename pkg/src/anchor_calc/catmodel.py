"""Finite semisimple C* categories with strict tensor products.

An object is a *word*: a tuple of primitive objects, each primitive being a
sorted tuple of ``(simple, multiplicity)`` pairs.  Tensoring objects
concatenates words, so associators and unitors are identities.  The basis of
a word in the isotypic block of a simple ``s`` consists of *paths*
``((s1, k1), ..., (sm, km))`` whose letters fuse to ``s``, sorted
lexicographically.  Since the built-in backends have fusion rules with at
most one summand, these paths are an orthonormal basis of the multiplicity
space and every morphism is a dictionary of matrices, one per simple.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

Simple = tuple
Prim = tuple
Word = tuple
Path = tuple

EPS_NUM = 1e-9


class CategoryError(Exception):
    pass


class BackendMismatch(CategoryError):
    pass


class NotBraided(CategoryError):
    pass


class ShapeMismatch(CategoryError):
    pass


# --------------------------------------------------------------------------
# backends


@dataclass(frozen=True)
class HilbFd:
    """Finite dimensional Hilbert spaces: one simple, labelled ``(0,)``."""

    kind = "hilb"

    def simples(self) -> list[Simple]:
        return [(0,)]

    def fuse(self, a: Simple, b: Simple) -> Simple | None:
        return (0,)

    def unit_simples(self) -> list[Simple]:
        return [(0,)]

    def conj(self, a: Simple) -> Simple:
        return a

    def braid_scalar(self, a: Simple, b: Simple) -> complex:
        return 1.0

    def ev_coeff(self, s: Simple) -> float:
        return 1.0

    def state_weight(self, u: Simple) -> float:
        return 1.0

    @property
    def braided(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": "hilb"}


@dataclass(frozen=True)
class GroupPointed:
    """Vect(G) for G a product of cyclic groups, braided by a bicharacter.

    ``q[a][b]`` is the value of the bicharacter on the a-th and b-th
    generators; it must be a root of unity of order dividing both factors.
    """

    factors: tuple
    q: tuple

    kind = "group"

    def __post_init__(self):
        k = len(self.factors)
        if len(self.q) != k or any(len(row) != k for row in self.q):
            raise CategoryError("q must be a square matrix over the generators")
        for a in range(k):
            for b in range(k):
                z = complex(self.q[a][b])
                if abs(abs(z) - 1) > 1e-12:
                    raise CategoryError("bicharacter values must have modulus 1")
                for n in (self.factors[a], self.factors[b]):
                    if abs(z ** n - 1) > 1e-9:
                        raise CategoryError("q(e_a,e_b) is not compatible with the group orders")

    def simples(self) -> list[Simple]:
        out = [()]
        for n in self.factors:
            out = [g + (r,) for g in out for r in range(n)]
        return out

    def fuse(self, a: Simple, b: Simple) -> Simple:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.factors))

    def unit_simples(self) -> list[Simple]:
        return [tuple(0 for _ in self.factors)]

    def conj(self, a: Simple) -> Simple:
        return tuple((-x) % n for x, n in zip(a, self.factors))

    def braid_scalar(self, g: Simple, h: Simple) -> complex:
        z = 1.0 + 0j
        for a, ga in enumerate(g):
            for b, hb in enumerate(h):
                if ga and hb:
                    z *= complex(self.q[a][b]) ** (ga * hb)
        return z

    def ev_coeff(self, s: Simple) -> float:
        return 1.0

    def state_weight(self, u: Simple) -> float:
        return 1.0

    @property
    def braided(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": "group", "factors": list(self.factors),
                "q": [[_cjson(z) for z in row] for row in self.q], "weights": None}


@dataclass(frozen=True)
class MatrixCat:
    """Matrix units M_r(Hilb): simples ``(i, j)`` with ``(i,j)(j,k) = (i,k)``.

    ``psi`` fixes the dual functor through pi_ij = psi_i / psi_j.  ``state``
    is the state on End(1) used by the unitary trace; it defaults to ``psi``,
    which is the spherical choice.
    """

    r: int
    psi: tuple
    state: tuple | None = None

    kind = "matrix"

    def __post_init__(self):
        if len(self.psi) != self.r or min(self.psi) <= 0:
            raise CategoryError("psi must be r positive weights")
        if self.state is not None and (len(self.state) != self.r or min(self.state) <= 0):
            raise CategoryError("state must be r positive weights")

    def simples(self) -> list[Simple]:
        return [(i, j) for i in range(1, self.r + 1) for j in range(1, self.r + 1)]

    def fuse(self, a: Simple, b: Simple) -> Simple | None:
        return (a[0], b[1]) if a[1] == b[0] else None

    def unit_simples(self) -> list[Simple]:
        return [(i, i) for i in range(1, self.r + 1)]

    def conj(self, a: Simple) -> Simple:
        return (a[1], a[0])

    def braid_scalar(self, a, b):
        raise NotBraided("matrix categories carry no braiding")

    def pi(self, i: int, j: int) -> float:
        return self.psi[i - 1] / self.psi[j - 1]

    def ev_coeff(self, s: Simple) -> float:
        # ev loop lands in p_j with value pi_ij^{1/2}, coev loop in p_i with pi_ij^{-1/2}
        return self.pi(s[0], s[1]) ** 0.25

    def state_weight(self, u: Simple) -> float:
        w = self.psi if self.state is None else self.state
        return w[u[0] - 1] / sum(w)

    @property
    def braided(self) -> bool:
        return False

    def to_json(self) -> dict:
        d = {"kind": "matrix", "r": self.r, "psi": list(self.psi)}
        if self.state is not None:
            d["state"] = list(self.state)
        return d


Backend = HilbFd | GroupPointed | MatrixCat

HILB = HilbFd()


def sVect() -> GroupPointed:
    return GroupPointed((2,), ((-1.0 + 0j,),))


def backend_from_json(d: dict) -> Backend:
    kind = d.get("kind")
    if kind == "hilb":
        return HILB
    if kind == "group":
        q = tuple(tuple(_cparse(z) for z in row) for row in d["q"])
        return GroupPointed(tuple(int(n) for n in d["factors"]), q)
    if kind == "matrix":
        st = d.get("state")
        return MatrixCat(int(d["r"]), tuple(float(x) for x in d["psi"]),
                         None if st is None else tuple(float(x) for x in st))
    raise CategoryError(f"unknown backend kind {kind!r}")


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _cparse(z) -> complex:
    if isinstance(z, (list, tuple)):
        return complex(float(z[0]), float(z[1]))
    return complex(z)


# --------------------------------------------------------------------------
# objects


def prim(mults: dict) -> Prim:
    return tuple(sorted((tuple(s), int(m)) for s, m in mults.items() if m > 0))


@functools.lru_cache(maxsize=None)
def _blocks(backend: Backend, word: Word) -> dict:
    if not word:
        return {u: [()] for u in backend.unit_simples()}
    cur: dict = {}
    for s, m in word[0]:
        cur.setdefault(s, []).extend(((s, k),) for k in range(m))
    for pr in word[1:]:
        nxt: dict = {}
        for s, paths in cur.items():
            for t, m in pr:
                u = backend.fuse(s, t)
                if u is None:
                    continue
                lst = nxt.setdefault(u, [])
                for p in paths:
                    lst.extend(p + ((t, k),) for k in range(m))
        cur = nxt
    return {s: sorted(v) for s, v in sorted(cur.items()) if v}


@functools.lru_cache(maxsize=None)
def _index(backend: Backend, word: Word) -> dict:
    return {s: {p: i for i, p in enumerate(ps)} for s, ps in _blocks(backend, word).items()}


def path_simple(backend: Backend, p: Path) -> Simple:
    s = p[0][0]
    for t, _ in p[1:]:
        s = backend.fuse(s, t)
    return s


@dataclass(frozen=True)
class Obj:
    backend: Backend
    word: Word = ()

    def blocks(self) -> dict:
        return _blocks(self.backend, self.word)

    def index(self) -> dict:
        return _index(self.backend, self.word)

    def dim(self, s: Simple) -> int:
        return len(self.blocks().get(s, ()))

    def multiplicities(self) -> dict:
        return {s: len(ps) for s, ps in self.blocks().items()}

    def total_dim(self) -> int:
        return sum(len(ps) for ps in self.blocks().values())

    def __matmul__(self, other: "Obj") -> "Obj":
        return tensor_obj(self, other)

    def __repr__(self):
        parts = []
        for pr in self.word:
            parts.append("+".join(f"{m}*{s}" if m > 1 else f"{s}" for s, m in pr) or "0")
        return "Obj(" + " ⊗ ".join(parts) + ")" if parts else "Obj(1)"


def obj(backend: Backend, *prims: dict | Prim) -> Obj:
    return Obj(backend, tuple(p if isinstance(p, tuple) else prim(p) for p in prims))


def simple_obj(backend: Backend, s: Simple) -> Obj:
    return Obj(backend, (((tuple(s), 1),),))


def unit_obj(backend: Backend) -> Obj:
    return Obj(backend, ())


def tensor_obj(a: Obj, b: Obj) -> Obj:
    if a.backend != b.backend:
        raise BackendMismatch("objects live in different backends")
    return Obj(a.backend, a.word + b.word)


def tensor_objs(objs: Iterable[Obj], backend: Backend) -> Obj:
    word: tuple = ()
    for o in objs:
        word += o.word
    return Obj(backend, word)


def conj_prim(backend: Backend, pr: Prim) -> Prim:
    return tuple(sorted((backend.conj(s), m) for s, m in pr))


def conj_obj(a: Obj) -> Obj:
    return Obj(a.backend, tuple(conj_prim(a.backend, pr) for pr in reversed(a.word)))


def conj_path(backend: Backend, p: Path) -> Path:
    return tuple((backend.conj(s), k) for s, k in reversed(p))


# --------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class Mor:
    source: Obj
    target: Obj
    blocks: dict = field(default_factory=dict)

    @property
    def backend(self) -> Backend:
        return self.source.backend

    def block(self, s: Simple) -> np.ndarray:
        b = self.blocks.get(s)
        if b is None:
            return np.zeros((self.target.dim(s), self.source.dim(s)), dtype=complex)
        return b

    def __matmul__(self, other: "Mor") -> "Mor":
        return compose(self, other)

    def __add__(self, other: "Mor") -> "Mor":
        _check_parallel(self, other)
        return Mor(self.source, self.target,
                   {s: self.block(s) + other.block(s) for s in self.blocks})

    def __sub__(self, other: "Mor") -> "Mor":
        return self + other * (-1)

    def __mul__(self, c) -> "Mor":
        return Mor(self.source, self.target, {s: b * c for s, b in self.blocks.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return max((float(np.max(np.abs(b))) for b in self.blocks.values() if b.size), default=0.0)

    def vec(self) -> np.ndarray:
        parts = [self.blocks[s].ravel() for s in sorted(self.blocks)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def scalar(self) -> complex:
        """Value of an endomorphism of the unit of a one-unit backend."""
        vals = [b for b in self.blocks.values() if b.size]
        if len(vals) != 1 or vals[0].shape != (1, 1):
            raise ShapeMismatch("not a scalar morphism")
        return complex(vals[0][0, 0])

    def __repr__(self):
        return f"Mor({self.source!r} -> {self.target!r})"


def _shared(a: Obj, b: Obj) -> list:
    ba, bb = a.blocks(), b.blocks()
    return [s for s in ba if s in bb]


def _check_parallel(f: Mor, g: Mor):
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch(f"morphisms are not parallel: {f!r} vs {g!r}")


def zero_mor(a: Obj, b: Obj) -> Mor:
    return Mor(a, b, {s: np.zeros((b.dim(s), a.dim(s)), dtype=complex) for s in _shared(a, b)})


def identity(a: Obj) -> Mor:
    return Mor(a, a, {s: np.eye(len(ps), dtype=complex) for s, ps in a.blocks().items()})


def from_blocks(a: Obj, b: Obj, blocks: dict) -> Mor:
    out = {}
    for s in _shared(a, b):
        m = np.asarray(blocks.get(s, np.zeros((b.dim(s), a.dim(s)))), dtype=complex)
        if m.shape != (b.dim(s), a.dim(s)):
            raise ShapeMismatch(f"block {s} has shape {m.shape}, expected {(b.dim(s), a.dim(s))}")
        out[s] = m
    return Mor(a, b, out)


def from_vec(a: Obj, b: Obj, v: np.ndarray) -> Mor:
    out, pos = {}, 0
    for s in sorted(_shared(a, b)):
        n = b.dim(s) * a.dim(s)
        out[s] = np.asarray(v[pos:pos + n], dtype=complex).reshape(b.dim(s), a.dim(s))
        pos += n
    return Mor(a, b, out)


def hom_dim(a: Obj, b: Obj) -> int:
    return sum(a.dim(s) * b.dim(s) for s in _shared(a, b))


def hom_basis(a: Obj, b: Obj) -> list[Mor]:
    """Matrix units of Hom(a, b), in the order used by ``vec``."""
    out = []
    n = hom_dim(a, b)
    for k in range(n):
        v = np.zeros(n, dtype=complex)
        v[k] = 1
        out.append(from_vec(a, b, v))
    return out


def random_mor(a: Obj, b: Obj, rng: np.random.Generator) -> Mor:
    return Mor(a, b, {s: rng.normal(size=(b.dim(s), a.dim(s))) + 1j * rng.normal(size=(b.dim(s), a.dim(s)))
                      for s in _shared(a, b)})


def compose(g: Mor, f: Mor) -> Mor:
    if f.target != g.source:
        raise ShapeMismatch(f"cannot compose {g!r} after {f!r}")
    return Mor(f.source, g.target, {s: g.block(s) @ f.block(s) for s in _shared(f.source, g.target)})


def compose_all(*ms: Mor) -> Mor:
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = compose(m, out)
    return out


def dagger(f: Mor) -> Mor:
    return Mor(f.target, f.source, {s: b.conj().T for s, b in f.blocks.items()})


def allclose(f: Mor, g: Mor, tol: float = EPS_NUM) -> bool:
    return residual(f, g) <= tol


def residual(f: Mor, g: Mor) -> float:
    _check_parallel(f, g)
    return max((float(np.max(np.abs(f.block(s) - g.block(s)))) for s in _shared(f.source, f.target)
                if f.target.dim(s) and f.source.dim(s)), default=0.0)


@functools.lru_cache(maxsize=None)
def _tensor_plan(backend: Backend, wa: Word, wb: Word) -> dict:
    """(s1, s2) -> (product simple, index array into the block of wa+wb)."""
    ba, bb = _blocks(backend, wa), _blocks(backend, wb)
    idx = _index(backend, wa + wb)
    plan = {}
    for s1, ps in ba.items():
        for s2, qs in bb.items():
            u = backend.fuse(s1, s2)
            if u is None:
                continue
            pos = idx[u]
            plan[(s1, s2)] = (u, np.array([pos[p + q] for p in ps for q in qs], dtype=int))
    return plan


def tensor_mor(f: Mor, g: Mor) -> Mor:
    if f.backend != g.backend:
        raise BackendMismatch("morphisms live in different backends")
    src = tensor_obj(f.source, g.source)
    tgt = tensor_obj(f.target, g.target)
    out = {s: np.zeros((tgt.dim(s), src.dim(s)), dtype=complex) for s in _shared(src, tgt)}
    ps = _tensor_plan(f.backend, f.source.word, g.source.word)
    pt = _tensor_plan(f.backend, f.target.word, g.target.word)
    for key, (u, cols) in ps.items():
        if key not in pt:
            continue
        s1, s2 = key
        fb, gb = f.blocks.get(s1), g.blocks.get(s2)
        if fb is None or gb is None:
            continue
        rows = pt[key][1]
        out[u][np.ix_(rows, cols)] = np.kron(fb, gb)
    return Mor(src, tgt, out)


def tensor_all(ms: Iterable[Mor], backend: Backend) -> Mor:
    out = identity(unit_obj(backend))
    for m in ms:
        out = tensor_mor(out, m)
    return out


def _perm_mor(a: Obj, b: Obj, fn) -> Mor:
    """Morphism sending basis path p of a to coeff * (basis path q of b) with (q, coeff) = fn(p)."""
    out = {s: np.zeros((b.dim(s), a.dim(s)), dtype=complex) for s in _shared(a, b)}
    bi = b.index()
    for s, ps in a.blocks().items():
        for j, p in enumerate(ps):
            res = fn(s, p)
            if res is None:
                continue
            q, t, c = res
            out[t][bi[t][q], j] += c
    return Mor(a, b, out)


def braiding(a: Obj, b: Obj) -> Mor:
    be = a.backend
    if not be.braided:
        raise NotBraided("backend has no braiding")
    na = len(a.word)

    def fn(s, p):
        if na == 0:
            return p, s, 1.0
        if len(p) == 0:
            return p, s, 1.0
        pa, pb = p[:na], p[na:]
        ga = path_simple(be, pa) if pa else None
        gb = path_simple(be, pb) if pb else None
        c = be.braid_scalar(ga, gb) if (pa and pb) else 1.0
        return pb + pa, s, c

    return _perm_mor(tensor_obj(a, b), tensor_obj(b, a), fn)


def braiding_inv(a: Obj, b: Obj) -> Mor:
    """Inverse of ``braiding(a, b)``: b⊗a → a⊗b."""
    return dagger(braiding(a, b))


def _unit_block_of(backend: Backend, s: Simple, side: str) -> Simple:
    if isinstance(backend, MatrixCat):
        return (s[0], s[0]) if side == "left" else (s[1], s[1])
    return backend.unit_simples()[0]


def ev(a: Obj) -> Mor:
    """ev_a: ā⊗a → 1."""
    be = a.backend
    src = tensor_obj(conj_obj(a), a)
    one = unit_obj(be)
    out = {s: np.zeros((1, src.dim(s)), dtype=complex) for s in _shared(src, one)}
    idx = src.index()
    for s, ps in a.blocks().items():
        u = _unit_block_of(be, s, "right")
        for p in ps:
            out[u][0, idx[u][conj_path(be, p) + p]] = be.ev_coeff(s)
    return Mor(src, one, out)


def coev(a: Obj) -> Mor:
    """coev_a: 1 → a⊗ā."""
    be = a.backend
    tgt = tensor_obj(a, conj_obj(a))
    one = unit_obj(be)
    out = {s: np.zeros((tgt.dim(s), 1), dtype=complex) for s in _shared(one, tgt)}
    idx = tgt.index()
    for s, ps in a.blocks().items():
        u = _unit_block_of(be, s, "left")
        for p in ps:
            out[u][idx[u][p + conj_path(be, p)], 0] = 1.0 / be.ev_coeff(s)
    return Mor(one, tgt, out)


def dual_mor(f: Mor) -> Mor:
    """f^∨: b̄ → ā for f: a → b."""
    a, b = f.source, f.target
    ia, ib = identity(conj_obj(a)), identity(conj_obj(b))
    return compose_all(
        tensor_mor(ev(b), ia),
        tensor_mor(tensor_mor(identity(conj_obj(b)), f), ia),
        tensor_mor(ib, coev(a)),
    )


def conj_mor(f: Mor) -> Mor:
    """f̄ = (f^∨)†: ā → b̄; entrywise conjugation along p ↦ p̄."""
    be = f.backend
    a, b = f.source, f.target
    ca, cb = conj_obj(a), conj_obj(b)
    out = {}
    ia, ib = ca.index(), cb.index()
    for s in _shared(a, b):
        t = be.conj(s)
        m = np.zeros((cb.dim(t), ca.dim(t)), dtype=complex)
        rows = [ib[t][conj_path(be, q)] for q in b.blocks()[s]]
        cols = [ia[t][conj_path(be, p)] for p in a.blocks()[s]]
        m[np.ix_(rows, cols)] = f.block(s).conj()
        out[t] = m
    return Mor(ca, cb, out)


def nu(a: Obj, b: Obj) -> Mor:
    """ν_{a,b}: ā⊗b̄ → (b⊗a)‾, the identity on words."""
    src = tensor_obj(conj_obj(a), conj_obj(b))
    tgt = conj_obj(tensor_obj(b, a))
    assert src == tgt
    return identity(src)


def pivotal_phi(a: Obj) -> Mor:
    """φ_a = (coev_a†⊗1)(1⊗coev_ā): a → ā̄."""
    ca = conj_obj(a)
    return compose(tensor_mor(dagger(coev(a)), identity(conj_obj(ca))),
                   tensor_mor(identity(a), coev(ca)))


def twist(a: Obj) -> Mor:
    """θ_a = (1⊗coev†)(β_{a,a}⊗1)(1⊗coev)."""
    ia, ica = identity(a), identity(conj_obj(a))
    return compose_all(tensor_mor(ia, dagger(coev(a))),
                       tensor_mor(braiding(a, a), ica),
                       tensor_mor(ia, coev(a)))


# --------------------------------------------------------------------------
# traces and states


def tr_L(f: Mor) -> Mor:
    """Left closure ev_a (1⊗f) ev_a†."""
    a = f.source
    return compose_all(ev(a), tensor_mor(identity(conj_obj(a)), f), dagger(ev(a)))


def tr_R(f: Mor) -> Mor:
    """Right closure coev_a† (f⊗1) coev_a."""
    a = f.source
    return compose_all(dagger(coev(a)), tensor_mor(f, identity(conj_obj(a))), coev(a))


def state(f: Mor) -> complex:
    """The backend state applied to an endomorphism of the unit."""
    be = f.backend
    return complex(sum(be.state_weight(u) * f.block(u)[0, 0] for u in be.unit_simples()
                       if f.block(u).size))


def unitary_trace(f: Mor) -> complex:
    return state(tr_R(f))


def unitary_trace_fast(f: Mor) -> complex:
    """Closed form of ``unitary_trace`` without building coev."""
    be = f.backend
    tot = 0j
    for s, b in f.blocks.items():
        if not b.size:
            continue
        tot += np.trace(b) * be.state_weight(_unit_block_of(be, s, "left")) / be.ev_coeff(s) ** 2
    return complex(tot)


def inner_product(f: Mor, g: Mor) -> complex:
    """⟨f, g⟩ = Tr(g†∘f)."""
    _check_parallel(f, g)
    return unitary_trace_fast(compose(dagger(g), f))


def dim_simple(backend: Backend, s: Simple) -> float:
    return unitary_trace_fast(identity(simple_obj(backend, s))).real


def spherical_state_from_loops(n: int, loops: dict) -> tuple | None:
    """Weights w on the n unit summands with w_i L_i(c) = w_j R_j(c) for all c.

    ``loops`` maps a simple c between summands i and j to the pair of loop
    values (coev loop in p_i, ev loop in p_j).
    """
    rows = []
    for (i, j), (li, rj) in loops.items():
        row = np.zeros(n)
        row[i - 1] += li
        row[j - 1] -= rj
        rows.append(row)
    rows.append(np.ones(n))
    A = np.array(rows)
    rhs = np.zeros(len(rows))
    rhs[-1] = 1
    w, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.max(np.abs(A @ w - rhs)) > 1e-9 or np.min(w) <= 0:
        return None
    return tuple(float(x) for x in w)


def spherical_state_solve(backend: Backend) -> tuple | None:
    """The unique state equalising ψ∘tr_L and ψ∘tr_R, or None."""
    if not isinstance(backend, MatrixCat):
        return (1.0,)
    loops = {}
    for s in backend.simples():
        c = simple_obj(backend, s)
        li = tr_R(identity(c)).block((s[0], s[0]))[0, 0].real
        rj = tr_L(identity(c)).block((s[1], s[1]))[0, 0].real
        loops[s] = (li, rj)
    return spherical_state_from_loops(backend.r, loops)


def spherical_state_from_pi(pi: np.ndarray) -> tuple | None:
    """Same, for dual data given directly as a matrix pi_ij (loops pi^{∓1/2})."""
    pi = np.asarray(pi, dtype=float)
    n = pi.shape[0]
    loops = {(i + 1, j + 1): (pi[i, j] ** -0.5, pi[i, j] ** 0.5) for i in range(n) for j in range(n)}
    return spherical_state_from_loops(n, loops)


def is_spherical(backend: Backend, tol: float = 1e-9) -> bool:
    if not isinstance(backend, MatrixCat):
        return True
    w = spherical_state_solve(backend)
    if w is None:
        return False
    cur = [backend.state_weight(u) for u in backend.unit_simples()]
    return max(abs(x - y) for x, y in zip(w, cur)) <= tol


# --------------------------------------------------------------------------
# serialization of morphisms


def mor_to_json(f: Mor) -> dict:
    return {"blocks": [{"simple": list(s), "re": b.real.tolist(), "im": b.imag.tolist()}
                       for s, b in sorted(f.blocks.items())]}


def mor_from_json(a: Obj, b: Obj, d: dict) -> Mor:
    blocks = {}
    for ent in d["blocks"]:
        re = np.array(ent["re"], dtype=float).reshape(b.dim(tuple(ent["simple"])), -1)
        im = np.array(ent["im"], dtype=float).reshape(re.shape)
        blocks[tuple(ent["simple"])] = re + 1j * im
    return from_blocks(a, b, blocks)


def prim_to_json(pr: Prim) -> list:
    return [[list(s), m] for s, m in pr]


def prim_from_json(d: list) -> Prim:
    return tuple(sorted((tuple(s), int(m)) for s, m in d))

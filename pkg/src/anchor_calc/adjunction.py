"""Unitary right adjoints and the categorified trace.

A *module category* here is anything implementing :class:`ModuleCategory`:
a C* tensor category C with duals and a state, a tensor functor Φ from a
braided backend V, half-braidings e_{Φ(v),c}, and a real generator
(x, r_x).  :class:`BackendModule` realises the interface on the concrete
backends; the Δ construction realises it on its own category.

:class:`TraceAdjoint` computes the right adjoint Tr of Φ object by object:
Tr(c) has multiplicity dim C(Φ(a) → c) at the simple a, with a basis of
C(Φ(a) → c) orthonormal for d_a^{-1}⟨·,·⟩_C.  Mates, the counit ε, the
multiplication μ, the unit i, the traciator τ and the involutive structure
χ are all computed from these bases.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import catmodel as cm
from .catmodel import Mor, Obj

EPS_CHECK = 1e-8


class AdjunctionError(Exception):
    pass


class SingularMate(AdjunctionError):
    pass


class ModuleCategory:
    """Interface used by the right adjoint and by Λ."""

    V: cm.Backend
    x: Any
    r_x: Any

    # objects
    def phi_obj(self, v: Obj): raise NotImplementedError
    def tensor_obj(self, a, b): raise NotImplementedError
    def unit(self): raise NotImplementedError
    def conj_obj(self, a): raise NotImplementedError

    # morphisms
    def phi_mor(self, f: Mor): raise NotImplementedError
    def identity(self, a): raise NotImplementedError
    def compose(self, g, f): raise NotImplementedError
    def tensor(self, f, g): raise NotImplementedError
    def dagger(self, f): raise NotImplementedError
    def ev(self, a): raise NotImplementedError
    def coev(self, a): raise NotImplementedError
    def half_braiding(self, v: Obj, c, inverse: bool = False): raise NotImplementedError
    def hom_basis(self, a, b) -> list: raise NotImplementedError
    def vec(self, f) -> np.ndarray: raise NotImplementedError
    def from_vec(self, a, b, v: np.ndarray): raise NotImplementedError
    def source(self, f): raise NotImplementedError
    def target(self, f): raise NotImplementedError
    def unit_value(self, f) -> complex: raise NotImplementedError

    # derived structure

    def xpow(self, n: int):
        out = self.unit()
        for _ in range(n):
            out = self.tensor_obj(out, self.x)
        return out

    def tensor_all(self, fs):
        out = self.identity(self.unit())
        for f in fs:
            out = self.tensor(out, f)
        return out

    def compose_all(self, *fs):
        out = fs[-1]
        for f in reversed(fs[:-1]):
            out = self.compose(f, out)
        return out

    def lincomb(self, terms, a, b):
        v = None
        for c, f in terms:
            w = c * self.vec(f)
            v = w if v is None else v + w
        if v is None:
            return self.from_vec(a, b, np.zeros(len(self.hom_basis(a, b)), dtype=complex))
        return self.from_vec(a, b, v)

    def residual(self, f, g) -> float:
        d = self.vec(f) - self.vec(g)
        return float(np.max(np.abs(d))) if d.size else 0.0

    def dual_mor(self, f):
        a, b = self.source(f), self.target(f)
        ca, cb = self.conj_obj(a), self.conj_obj(b)
        return self.compose_all(
            self.tensor(self.ev(b), self.identity(ca)),
            self.tensor(self.tensor(self.identity(cb), f), self.identity(ca)),
            self.tensor(self.identity(cb), self.coev(a)),
        )

    def conj_mor(self, f):
        return self.dagger(self.dual_mor(f))

    def chi_phi(self, v: Obj):
        """χ^Φ_v: Φ(v̄) → conj(Φ(v)); the identity for the strict functors used here."""
        return self.identity(self.phi_obj(cm.conj_obj(v)))

    def nu_x(self, n: int):
        """ν: x̄^{⊗n} → conj(x^{⊗n})."""
        return self.identity(self.conj_obj(self.xpow(n)))

    def cap_x(self):
        return self.compose(self.ev(self.x), self.tensor(self.r_x, self.identity(self.x)))

    def cup_x(self):
        rinv = self.dagger(self.r_x)
        return self.compose(self.tensor(self.identity(self.x), rinv), self.coev(self.x))

    def tr_R(self, f):
        a = self.source(f)
        ca = self.conj_obj(a)
        return self.compose_all(self.dagger(self.coev(a)), self.tensor(f, self.identity(ca)), self.coev(a))

    def tr_L(self, f):
        a = self.source(f)
        ca = self.conj_obj(a)
        return self.compose_all(self.ev(a), self.tensor(self.identity(ca), f), self.dagger(self.ev(a)))

    def trace(self, f) -> complex:
        return self.unit_value(self.tr_R(f))

    def inner(self, f, g) -> complex:
        return self.trace(self.compose(self.dagger(g), f))


# --------------------------------------------------------------------------
# concrete backends


def _phi_prim(kind: str, C: cm.Backend, pr: tuple) -> tuple:
    if kind == "identity":
        return pr
    m = sum(k for _, k in pr)
    return cm.prim({u: m for u in C.unit_simples()})


@dataclass(eq=False)
class BackendModule(ModuleCategory):
    """Module category over a backend: Φ is the identity or the unit embedding Hilb → C."""

    V: cm.Backend
    C: cm.Backend
    phi_kind: str
    x: Obj
    r_x: Mor
    name: str = "module"

    def __post_init__(self):
        if self.phi_kind not in ("identity", "unit"):
            raise AdjunctionError(f"unknown functor kind {self.phi_kind!r}")
        if self.phi_kind == "identity" and self.V != self.C:
            raise AdjunctionError("identity functor needs V = C")
        if self.phi_kind == "unit" and not isinstance(self.V, cm.HilbFd):
            raise AdjunctionError("unit embedding starts from Hilb")

    def phi_obj(self, v: Obj) -> Obj:
        return Obj(self.C, tuple(_phi_prim(self.phi_kind, self.C, pr) for pr in v.word))

    def phi_mor(self, f: Mor) -> Mor:
        if self.phi_kind == "identity":
            return f
        a, b = self.phi_obj(f.source), self.phi_obj(f.target)
        blk = f.block((0,))
        return cm.from_blocks(a, b, {u: blk for u in self.C.unit_simples()})

    def tensor_obj(self, a, b):
        return cm.tensor_obj(a, b)

    def unit(self):
        return cm.unit_obj(self.C)

    def conj_obj(self, a):
        return cm.conj_obj(a)

    def identity(self, a):
        return cm.identity(a)

    def compose(self, g, f):
        return cm.compose(g, f)

    def tensor(self, f, g):
        return cm.tensor_mor(f, g)

    def dagger(self, f):
        return cm.dagger(f)

    def ev(self, a):
        return cm.ev(a)

    def coev(self, a):
        return cm.coev(a)

    def conj_mor(self, f):
        return cm.conj_mor(f)

    def hom_basis(self, a, b):
        return cm.hom_basis(a, b)

    def vec(self, f):
        return f.vec()

    def from_vec(self, a, b, v):
        return cm.from_vec(a, b, v)

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def unit_value(self, f) -> complex:
        return cm.state(f)

    def trace(self, f) -> complex:
        return cm.unitary_trace_fast(f)

    def half_braiding(self, v: Obj, c: Obj, inverse: bool = False) -> Mor:
        if self.phi_kind == "identity":
            return cm.braiding_inv(v, c) if inverse else cm.braiding(v, c)
        pv = self.phi_obj(v)
        nv = len(pv.word)
        C = self.C

        def fn(s, p):
            head, tail = p[:nv], p[nv:]
            if tail:
                sc = cm.path_simple(C, tail)
                u = (sc[1], sc[1])
            else:
                u = s
            return tail + tuple((u, k) for _, k in head), s, 1.0

        e = cm._perm_mor(cm.tensor_obj(pv, c), cm.tensor_obj(c, pv), fn)
        return cm.dagger(e) if inverse else e

    def is_spherical(self) -> bool:
        return cm.is_spherical(self.C)

    def to_json(self) -> dict:
        return {"name": self.name, "V": self.V.to_json(), "C": self.C.to_json(), "phi": self.phi_kind,
                "x": [cm.prim_to_json(p) for p in self.x.word], "r_x": cm.mor_to_json(self.r_x),
                "half_braiding": "canonical"}


def module_from_json(d: dict) -> BackendModule:
    V = cm.backend_from_json(d["V"])
    C = cm.backend_from_json(d["C"])
    x = Obj(C, tuple(cm.prim_from_json(p) for p in d["x"]))
    r_x = cm.mor_from_json(x, cm.conj_obj(x), d["r_x"])
    if d.get("half_braiding", "canonical") != "canonical":
        raise AdjunctionError("only the canonical half-braiding of the built-in functors is supported")
    return BackendModule(V, C, d["phi"], x, r_x, d.get("name", "module"))


def module_loads(text: str) -> BackendModule:
    return module_from_json(json.loads(text))


def _self_dual_identity(x: Obj) -> Mor:
    """The real structure sending each summand of x to the matching summand of x̄."""
    xb = cm.conj_obj(x)
    return cm.from_blocks(x, xb, {s: np.eye(x.dim(s)) for s in x.blocks()})


def fermion_module() -> BackendModule:
    V = cm.sVect()
    x = cm.simple_obj(V, (1,))
    return BackendModule(V, V, "identity", x, _self_dual_identity(x), "svect")


def matrix_module(psi=(2 / 3, 1 / 3), state=None) -> BackendModule:
    C = cm.MatrixCat(2, tuple(psi), None if state is None else tuple(state))
    x = cm.obj(C, {(1, 2): 1, (2, 1): 1})
    return BackendModule(cm.HILB, C, "unit", x, _self_dual_identity(x), "hilb->m2")


def cyclic_module(N: int = 4, k: int = 1) -> BackendModule:
    """Z/N with q(1,1) = exp(2πik/N), x = g ⊕ g^{-1}, r_x swapping the summands."""
    z = complex(np.exp(2j * np.pi * k / N))
    V = cm.GroupPointed((N,), ((z,),))
    x = cm.obj(V, {(1,): 1, ((N - 1) % N,): 1})
    return BackendModule(V, V, "identity", x, _self_dual_identity(x), f"z{N}")


def builtin_module(name: str) -> BackendModule:
    if name == "svect":
        return fermion_module()
    if name in ("hilb->m2", "matrix"):
        return matrix_module()
    if name == "matrix-nonspherical":
        return matrix_module(state=(0.5, 0.5))
    if name.startswith("z"):
        return cyclic_module(int(name[1:]))
    raise AdjunctionError(f"unknown module {name!r}")


# --------------------------------------------------------------------------
# the right adjoint


@dataclass
class _TrData:
    obj: Obj
    basis: dict
    pinv: dict
    mats: dict


class TraceAdjoint:
    """Right adjoint Tr of Φ: C → V together with its lax monoidal data."""

    def __init__(self, M: ModuleCategory):
        self.M = M
        self.V = M.V
        self._data: dict = {}
        self._eps: dict = {}

    # objects

    def d(self, a) -> float:
        return cm.dim_simple(self.V, a)

    def data(self, c) -> _TrData:
        hit = self._data.get(c)
        if hit is not None:
            return hit
        M = self.M
        basis, pinv, mats, mults = {}, {}, {}, {}
        for a in self.V.simples():
            pa = M.phi_obj(cm.simple_obj(self.V, a))
            raw = M.hom_basis(pa, c)
            if not raw:
                continue
            n = len(raw)
            G = np.zeros((n, n), dtype=complex)
            for k in range(n):
                for l in range(n):
                    G[k, l] = M.inner(raw[l], raw[k]) / self.d(a)
            G = (G + G.conj().T) / 2
            w, U = np.linalg.eigh(G)
            if np.min(w) <= 1e-12:
                raise SingularMate(f"inner product on C(Φ({a}) → c) is degenerate")
            X = (U / np.sqrt(w)) @ U.conj().T
            R = np.array([M.vec(f) for f in raw]).T
            B = R @ X
            basis[a] = [M.from_vec(pa, c, B[:, k]) for k in range(n)]
            mats[a] = B
            pinv[a] = np.linalg.pinv(B)
            mults[a] = n
        dat = _TrData(Obj(self.V, (cm.prim(mults),)), basis, pinv, mats)
        self._data[c] = dat
        return dat

    def tr_obj(self, c) -> Obj:
        return self.data(c).obj

    def multiplicities(self, c) -> dict:
        return {a: len(bs) for a, bs in self.data(c).basis.items()}

    # mates

    def coeffs(self, F, a, c) -> np.ndarray:
        dat = self.data(c)
        v = self.M.vec(F)
        if a not in dat.pinv:
            if v.size and np.max(np.abs(v)) > 1e-7:
                raise SingularMate("morphism has no component along Φ(a)")
            return np.zeros(0, dtype=complex)
        co = dat.pinv[a] @ v
        err = dat.mats[a] @ co - v
        if err.size and np.max(np.abs(err)) > 1e-7 * max(1.0, float(np.max(np.abs(v)))):
            raise SingularMate("morphism is not in the span of the adjoint basis")
        return co

    def mate_to_V(self, F, w: Obj, c) -> Mor:
        """The V-morphism w → Tr(c) corresponding to F: Φ(w) → c."""
        M = self.M
        T = self.tr_obj(c)
        out = {}
        for a, paths in w.blocks().items():
            sa = cm.simple_obj(self.V, a)
            cols = []
            for j in range(len(paths)):
                iota = cm.from_blocks(sa, w, {a: np.eye(len(paths))[:, [j]]})
                cols.append(self.coeffs(M.compose(F, M.phi_mor(iota)), a, c))
            if T.dim(a):
                out[a] = np.array(cols, dtype=complex).T.reshape(T.dim(a), len(paths))
        return cm.from_blocks(w, T, out)

    def eps(self, c):
        """ε_c = Σ b_{a,k} ∘ Φ(π_{a,k}): Φ(Tr(c)) → c."""
        hit = self._eps.get(c)
        if hit is not None:
            return hit
        M = self.M
        dat = self.data(c)
        T = dat.obj
        terms = []
        for a, bs in dat.basis.items():
            sa = cm.simple_obj(self.V, a)
            for k, b in enumerate(bs):
                pi = cm.from_blocks(T, sa, {a: np.eye(len(bs))[[k], :]})
                terms.append((1.0, M.compose(b, M.phi_mor(pi))))
        out = M.lincomb(terms, M.phi_obj(T), c)
        self._eps[c] = out
        return out

    def mate_to_C(self, h: Mor, c):
        """ε_c ∘ Φ(h): Φ(w) → c for h: w → Tr(c)."""
        return self.M.compose(self.eps(c), self.M.phi_mor(h))

    # functor and lax structure

    def tr_mor(self, f, c, c2) -> Mor:
        """Tr(f): Tr(c) → Tr(c2)."""
        return self.mate_to_V(self.M.compose(f, self.eps(c)), self.tr_obj(c), c2)

    def unit_i(self) -> Mor:
        M = self.M
        one = M.unit()
        return self.mate_to_V(M.identity(one), cm.unit_obj(self.V), one)

    def mu(self, c1, c2) -> Mor:
        M = self.M
        w = cm.tensor_obj(self.tr_obj(c1), self.tr_obj(c2))
        return self.mate_to_V(M.tensor(self.eps(c1), self.eps(c2)), w, M.tensor_obj(c1, c2))

    def tau_inv_mate(self, X, Y):
        """mate(τ^{-1}_{X,Y}) = (ev_Y⊗1)(1⊗ε_{Y⊗X}⊗1)(1⊗e^{-1}_{Φ(T),Y})(ev_Y†⊗1), T = Tr(Y⊗X)."""
        M = self.M
        YX = M.tensor_obj(Y, X)
        T = self.tr_obj(YX)
        PT = M.phi_obj(T)
        Yb = M.conj_obj(Y)
        s1 = M.tensor(M.dagger(M.ev(Y)), M.identity(PT))
        s2 = M.tensor(M.identity(Yb), M.half_braiding(T, Y, inverse=True))
        s3 = M.tensor(M.tensor(M.identity(Yb), self.eps(YX)), M.identity(Y))
        s4 = M.tensor(M.ev(Y), M.identity(M.tensor_obj(X, Y)))
        return M.compose_all(s4, s3, s2, s1), T

    def tau_inv(self, X, Y) -> Mor:
        F, T = self.tau_inv_mate(X, Y)
        return self.mate_to_V(F, T, self.M.tensor_obj(X, Y))

    def tau(self, X, Y) -> Mor:
        ti = self.tau_inv(X, Y)
        out = {}
        for s, b in ti.blocks.items():
            if b.size and abs(np.linalg.det(b)) < 1e-12:
                raise SingularMate("traciator mate is singular")
            out[s] = np.linalg.inv(b)
        return cm.Mor(ti.target, ti.source, out)

    def chi(self, c) -> Mor:
        """χ^{Tr}_c: Tr(c̄) → conj(Tr(c)), from conj(mate(f)) = χ∘mate(f̄∘χ^Φ)."""
        M = self.M
        cb = M.conj_obj(c)
        src = self.tr_obj(cb)
        tgt = cm.conj_obj(self.tr_obj(c))
        dat = self.data(c)
        out = {}
        for a, bs in dat.basis.items():
            ab = self.V.conj(a)
            sab = cm.simple_obj(self.V, ab)
            cols = []
            for b in bs:
                g = M.compose(M.conj_mor(b), M.chi_phi(cm.simple_obj(self.V, a)))
                cols.append(self.coeffs(g, ab, cb))
            Mmat = np.array(cols, dtype=complex).T
            Nmat = np.eye(len(bs))
            # conj(Tr(c)) lists the conjugated basis in the same order
            out[ab] = Nmat @ np.linalg.inv(Mmat)
        return cm.from_blocks(src, tgt, out)


# --------------------------------------------------------------------------
# checks


def adjunction_unitarity(T: TraceAdjoint, c, rng: np.random.Generator, trials: int = 20) -> float:
    """max |⟨mate f, mate g⟩_V − ⟨f, g⟩_C| over random pairs f, g: Φ(w) → c."""
    M = T.M
    worst = 0.0
    V = T.V
    for _ in range(trials):
        a = V.simples()[rng.integers(len(V.simples()))]
        w = cm.obj(V, {a: int(rng.integers(1, 3))})
        basis = M.hom_basis(M.phi_obj(w), c)
        if not basis:
            continue
        n = len(basis)
        fv = rng.normal(size=n) + 1j * rng.normal(size=n)
        gv = rng.normal(size=n) + 1j * rng.normal(size=n)
        f = M.lincomb(zip(fv, basis), M.phi_obj(w), c)
        g = M.lincomb(zip(gv, basis), M.phi_obj(w), c)
        lhs = cm.inner_product(T.mate_to_V(f, w, c), T.mate_to_V(g, w, c))
        rhs = M.inner(f, g)
        worst = max(worst, abs(lhs - rhs))
    return worst


def coev_dag_identity_check(T: TraceAdjoint, c) -> float:
    """coev†_{Tr(c)}∘(1⊗χ_c) = i†∘Tr(coev†_c)∘μ_{c,c̄}."""
    M = T.M
    cb = M.conj_obj(c)
    P = T.tr_obj(c)
    lhs = cm.compose(cm.dagger(cm.coev(P)), cm.tensor_mor(cm.identity(P), T.chi(c)))
    one = M.unit()
    trc = T.tr_mor(M.dagger(M.coev(c)), M.tensor_obj(c, cb), one)
    rhs = cm.compose_all(cm.dagger(T.unit_i()), trc, T.mu(c, cb))
    return cm.residual(lhs, rhs)


def state_identification_check(T: TraceAdjoint, rng: np.random.Generator, trials: int = 5) -> float:
    """i†∘Tr(f)∘i equals the state of C on random f ∈ End(1_C)."""
    M = T.M
    one = M.unit()
    basis = M.hom_basis(one, one)
    i = T.unit_i()
    worst = 0.0
    for _ in range(trials):
        v = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        f = M.lincomb(zip(v, basis), one, one)
        lhs = cm.state(cm.compose_all(cm.dagger(i), T.tr_mor(f, one, one), i))
        worst = max(worst, abs(lhs - M.unit_value(f)))
    return worst


def trace_loop_check(T: TraceAdjoint, c, rng: np.random.Generator, trials: int = 5) -> float:
    """ψ_C∘tr_R(f) equals i†∘Tr(tr_R f)∘i, the trace read as a loop through Tr."""
    M = T.M
    basis = M.hom_basis(c, c)
    one = M.unit()
    i = T.unit_i()
    worst = 0.0
    for _ in range(trials):
        v = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        f = M.lincomb(zip(v, basis), c, c)
        loop = T.tr_mor(M.tr_R(f), one, one)
        lhs = cm.state(cm.compose_all(cm.dagger(i), loop, i))
        worst = max(worst, abs(lhs - M.trace(f)))
    return worst


def traciator_unitarity(T: TraceAdjoint, X, Y) -> float:
    t = T.tau(X, Y)
    return cm.residual(cm.compose(cm.dagger(t), t), cm.identity(t.source))


def chi_unitarity(T: TraceAdjoint, c) -> float:
    ch = T.chi(c)
    return cm.residual(cm.compose(cm.dagger(ch), ch), cm.identity(ch.source))

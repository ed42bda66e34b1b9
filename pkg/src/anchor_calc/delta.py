"""The module tensor category Δ(P) of a unitary anchored planar algebra.

Objects are pairs (v, n) standing for Φ(v)⊗x^{⊗n}.  A morphism
(u, k) → (v, n) is a V-morphism u → v⊗P[n+k]; the first n strands of the
box face the target and the last k face the source.  Composition glues the
boxes along the middle strands, the dagger bends the payload around with
coev and r^{-1}, and the tensor product nests the second box inside the
first after one crossing in V.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import apa
from . import catmodel as cm
from . import tangle as tg
from .adjunction import ModuleCategory
from .apa import APAInstance
from .catmodel import Mor, Obj

EPS_NUM = 1e-9


class DeltaError(Exception):
    pass


class NumericalDegeneracy(DeltaError):
    pass


@dataclass(frozen=True)
class C0Obj:
    v: Obj
    n: int

    def __repr__(self):
        return f"({self.v!r}, {self.n})"


@dataclass(frozen=True, eq=False)
class C0Mor:
    source: C0Obj
    target: C0Obj
    payload: Mor


@dataclass(frozen=True, eq=False)
class CompletedObject:
    base: C0Obj
    p: C0Mor


def tensor_tangle(n: int, k: int, q: int, p: int) -> tg.TangleExpr:
    """Nest a (q+p)-box inside an (n+k)-box: strands [n | q | p | k]."""
    inner = tg.Compose(tg.mult(k + n, q + p), 1, tg.trac(n, k))
    return tg.Compose(tg.tracinv(n + q + p, k), 1, inner)


class Delta(ModuleCategory):
    """C_0 for an APA, with Φ(v) = (v, 0) and x = (1, 1)."""

    def __init__(self, A: APAInstance, crossing: str = "under"):
        if crossing not in ("over", "under"):
            raise DeltaError("crossing must be 'over' or 'under'")
        self.A = A
        self.V = A.V
        self.crossing = crossing
        self.name = f"delta({A.name})"
        self._z: dict = {}
        self._rinv: dict = {}
        one = cm.unit_obj(self.V)
        self.x = C0Obj(one, 1)
        self.r_x = self.identity(self.x)

    # planar algebra access

    def box(self, n: int) -> Obj:
        return self.A.box(n)

    def Z(self, e: tg.TangleExpr) -> Mor:
        hit = self._z.get(e)
        if hit is None:
            hit = self.A.evaluate(e)
            self._z[e] = hit
        return hit

    def R(self, n: int) -> Mor:
        """The through-strand element of P[2n]."""
        return self.Z(tg.through_strands(n))

    def rinv(self, m: int) -> Mor:
        hit = self._rinv.get(m)
        if hit is None:
            hit = apa.mor_inverse(self.A.real(m))
            self._rinv[m] = hit
        return hit

    def payload_target(self, a: C0Obj, b: C0Obj) -> Obj:
        return cm.tensor_obj(b.v, self.box(b.n + a.n))

    def _mor(self, a: C0Obj, b: C0Obj, payload: Mor) -> C0Mor:
        if payload.source != a.v or payload.target != self.payload_target(a, b):
            raise cm.ShapeMismatch(f"payload {payload.source!r} → {payload.target!r} does not fit {a!r} → {b!r}")
        return C0Mor(a, b, payload)

    # objects

    def obj(self, v: Obj, n: int) -> C0Obj:
        if n < 0:
            raise DeltaError("n must be non-negative")
        return C0Obj(v, n)

    def phi_obj(self, v: Obj) -> C0Obj:
        return C0Obj(v, 0)

    def tensor_obj(self, a: C0Obj, b: C0Obj) -> C0Obj:
        return C0Obj(cm.tensor_obj(a.v, b.v), a.n + b.n)

    def unit(self) -> C0Obj:
        return C0Obj(cm.unit_obj(self.V), 0)

    def conj_obj(self, a: C0Obj) -> C0Obj:
        return C0Obj(cm.conj_obj(a.v), a.n)

    # morphisms

    def phi_mor(self, f: Mor) -> C0Mor:
        return C0Mor(C0Obj(f.source, 0), C0Obj(f.target, 0), cm.tensor_mor(f, self.Z(tg.unit())))

    def identity(self, a: C0Obj) -> C0Mor:
        return C0Mor(a, a, cm.tensor_mor(cm.identity(a.v), self.R(a.n)))

    def compose(self, g: C0Mor, f: C0Mor) -> C0Mor:
        if f.target != g.source:
            raise cm.ShapeMismatch(f"cannot compose {f.source!r}→{f.target!r} with {g.source!r}→{g.target!r}")
        k, n, p = f.source.n, f.target.n, g.target.n
        w = g.target.v
        glue = self.Z(tg.contraction(p, n, k))
        payload = cm.compose_all(
            cm.tensor_mor(cm.identity(w), glue),
            cm.tensor_mor(g.payload, cm.identity(self.box(n + k))),
            f.payload,
        )
        return C0Mor(f.source, g.target, payload)

    def dagger(self, f: C0Mor) -> C0Mor:
        m = f.source.n + f.target.n
        P = self.box(m)
        payload = cm.compose(cm.tensor_mor(cm.dagger(f.payload), self.rinv(m)),
                             cm.tensor_mor(cm.identity(f.target.v), cm.coev(P)))
        return C0Mor(f.target, f.source, payload)

    def tensor(self, f: C0Mor, g: C0Mor) -> C0Mor:
        k, n = f.source.n, f.target.n
        p, q = g.source.n, g.target.n
        v, x = f.target.v, g.target.v
        Pf, Pg = self.box(n + k), self.box(q + p)
        cross = cm.braiding(Pf, x) if self.crossing == "over" else cm.braiding_inv(x, Pf)
        payload = cm.compose_all(
            cm.tensor_mor(cm.identity(cm.tensor_obj(v, x)), self.Z(tensor_tangle(n, k, q, p))),
            cm.tensor_all([cm.identity(v), cross, cm.identity(Pg)], self.V),
            cm.tensor_mor(f.payload, g.payload),
        )
        return C0Mor(self.tensor_obj(f.source, g.source), self.tensor_obj(f.target, g.target), payload)

    def ev(self, a: C0Obj) -> C0Mor:
        return C0Mor(self.tensor_obj(self.conj_obj(a), a), self.unit(),
                     cm.tensor_mor(cm.ev(a.v), self.R(a.n)))

    def coev(self, a: C0Obj) -> C0Mor:
        return C0Mor(self.unit(), self.tensor_obj(a, self.conj_obj(a)),
                     cm.tensor_mor(cm.coev(a.v), self.R(a.n)))

    def conj_mor(self, f: C0Mor) -> C0Mor:
        """f̄ without building duals: conjugate the payload, straighten P̄ with r^{-1}, undo the rotation."""
        k, n = f.source.n, f.target.n
        P = self.box(n + k)
        vb = cm.conj_obj(f.target.v)
        payload = cm.compose_all(
            cm.tensor_mor(cm.identity(vb), self.Z(tg.tracinv(n, k))),
            cm.braiding_inv(vb, P),
            cm.tensor_mor(self.rinv(n + k), cm.identity(vb)),
            cm.conj_mor(f.payload),
        )
        return C0Mor(self.conj_obj(f.source), self.conj_obj(f.target), payload)

    def pivotal(self, a: C0Obj) -> C0Mor:
        """φ^C_a = (coev_a†⊗1)(1⊗coev_ā): a → ā̄."""
        ca = self.conj_obj(a)
        return self.compose(self.tensor(self.dagger(self.coev(a)), self.identity(self.conj_obj(ca))),
                            self.tensor(self.identity(a), self.coev(ca)))

    def half_braiding(self, v: Obj, c: C0Obj, inverse: bool = False) -> C0Mor:
        src, tgt = C0Obj(cm.tensor_obj(v, c.v), c.n), C0Obj(cm.tensor_obj(c.v, v), c.n)
        if inverse:
            return C0Mor(tgt, src, cm.tensor_mor(cm.braiding_inv(v, c.v), self.R(c.n)))
        return C0Mor(src, tgt, cm.tensor_mor(cm.braiding(v, c.v), self.R(c.n)))

    def hom_basis(self, a: C0Obj, b: C0Obj) -> list:
        return [C0Mor(a, b, m) for m in cm.hom_basis(a.v, self.payload_target(a, b))]

    def hom_dim(self, a: C0Obj, b: C0Obj) -> int:
        return cm.hom_dim(a.v, self.payload_target(a, b))

    def vec(self, f: C0Mor) -> np.ndarray:
        return f.payload.vec()

    def from_vec(self, a: C0Obj, b: C0Obj, v: np.ndarray) -> C0Mor:
        return C0Mor(a, b, cm.from_vec(a.v, self.payload_target(a, b), v))

    def source(self, f: C0Mor) -> C0Obj:
        return f.source

    def target(self, f: C0Mor) -> C0Obj:
        return f.target

    def unit_value(self, f: C0Mor) -> complex:
        """ψ_C: the APA state applied to the payload of an endomorphism of the unit."""
        if f.source != self.unit() or f.target != self.unit():
            raise cm.ShapeMismatch("the state lives on End(1)")
        return cm.state(cm.compose(self.A.psi, f.payload))

    def random_mor(self, a: C0Obj, b: C0Obj, rng: np.random.Generator) -> C0Mor:
        return C0Mor(a, b, cm.random_mor(a.v, self.payload_target(a, b), rng))

    def add(self, f: C0Mor, g: C0Mor) -> C0Mor:
        return C0Mor(f.source, f.target, f.payload + g.payload)

    def scale(self, c, f: C0Mor) -> C0Mor:
        return C0Mor(f.source, f.target, f.payload * c)


# --------------------------------------------------------------------------
# sampling and checks


def random_object(D: Delta, rng: np.random.Generator, nmax: int, vmax: int = 2) -> C0Obj:
    sims = D.V.simples()
    mults = {}
    for _ in range(int(rng.integers(0, vmax + 1))):
        s = sims[int(rng.integers(len(sims)))]
        mults[s] = mults.get(s, 0) + 1
    v = cm.obj(D.V, mults) if mults else cm.unit_obj(D.V)
    return C0Obj(v, int(rng.integers(0, nmax + 1)))


def _nonempty_pair(D: Delta, rng, nmax, tries=50):
    for _ in range(tries):
        a, b = random_object(D, rng, nmax), random_object(D, rng, nmax)
        if (a.n + b.n) <= nmax and D.hom_dim(a, b):
            return a, b
    return D.x, D.x


def dagger_checks(D: Delta, rng: np.random.Generator, nmax: int = 4, trials: int = 30) -> dict:
    """Residuals of f** = f and (g∘f)* = f*∘g*."""
    inv, anti = 0.0, 0.0
    for _ in range(trials):
        a, b = _nonempty_pair(D, rng, nmax)
        f = D.random_mor(a, b, rng)
        inv = max(inv, D.residual(D.dagger(D.dagger(f)), f))
        c = random_object(D, rng, max(0, nmax - b.n))
        if not D.hom_dim(b, c):
            c = b
        g = D.random_mor(b, c, rng)
        lhs = D.dagger(D.compose(g, f))
        rhs = D.compose(D.dagger(f), D.dagger(g))
        anti = max(anti, D.residual(lhs, rhs))
    return {"involutive": inv, "anti_functorial": anti}


def associativity_check(D: Delta, rng: np.random.Generator, nmax: int = 3, trials: int = 30) -> float:
    worst = 0.0
    for _ in range(trials):
        objs = [random_object(D, rng, nmax) for _ in range(4)]
        fs = [D.random_mor(objs[i], objs[i + 1], rng) for i in range(3)]
        if any(not D.vec(f).size for f in fs):
            continue
        lhs = D.compose(fs[2], D.compose(fs[1], fs[0]))
        rhs = D.compose(D.compose(fs[2], fs[1]), fs[0])
        worst = max(worst, D.residual(lhs, rhs))
    return worst


def interchange_check(D: Delta, rng: np.random.Generator, nmax: int = 2, trials: int = 20) -> float:
    """(f⊗1)∘(1⊗g) = f⊗g = (1⊗g)∘(f⊗1)."""
    worst = 0.0
    for _ in range(trials):
        a, b = _nonempty_pair(D, rng, nmax)
        c, d = _nonempty_pair(D, rng, nmax)
        f, g = D.random_mor(a, b, rng), D.random_mor(c, d, rng)
        fg = D.tensor(f, g)
        one = D.compose(D.tensor(f, D.identity(d)), D.tensor(D.identity(a), g))
        two = D.compose(D.tensor(D.identity(b), g), D.tensor(f, D.identity(c)))
        worst = max(worst, D.residual(fg, one), D.residual(fg, two))
    return worst


def tensor_associativity_check(D: Delta, rng: np.random.Generator, nmax: int = 1, trials: int = 10) -> float:
    worst = 0.0
    for _ in range(trials):
        fs = [D.random_mor(*_nonempty_pair(D, rng, nmax), rng) for _ in range(3)]
        lhs = D.tensor(D.tensor(fs[0], fs[1]), fs[2])
        rhs = D.tensor(fs[0], D.tensor(fs[1], fs[2]))
        worst = max(worst, D.residual(lhs, rhs))
    return worst


def zigzag_check(D: Delta, a: C0Obj) -> float:
    ca = D.conj_obj(a)
    z1 = D.compose(D.tensor(D.identity(a), D.ev(a)), D.tensor(D.coev(a), D.identity(a)))
    z2 = D.compose(D.tensor(D.ev(a), D.identity(ca)), D.tensor(D.identity(ca), D.coev(a)))
    return max(D.residual(z1, D.identity(a)), D.residual(z2, D.identity(ca)))


def pivotal_unitarity(D: Delta, a: C0Obj) -> float:
    ph = D.pivotal(a)
    return max(D.residual(D.compose(D.dagger(ph), ph), D.identity(a)),
               D.residual(D.compose(ph, D.dagger(ph)), D.identity(ph.target)))


def spherical_check(D: Delta, a: C0Obj, rng: np.random.Generator, trials: int = 5) -> float:
    worst = 0.0
    for _ in range(trials):
        f = D.random_mor(a, a, rng)
        worst = max(worst, abs(D.unit_value(D.tr_L(f)) - D.unit_value(D.tr_R(f))))
    return worst


def _algebra_matrix(D: Delta, basis: list, h: C0Mor) -> np.ndarray:
    B = np.array([D.vec(b) for b in basis]).T
    cols = [D.vec(D.compose(h, b)) for b in basis]
    return np.linalg.lstsq(B, np.array(cols).T, rcond=None)[0]


def linking_positivity(D: Delta, a: C0Obj, b: C0Obj, rng: np.random.Generator, trials: int = 5) -> float:
    """Smallest eigenvalue seen in the linking algebra of a and b.

    Takes the minimum over the Gram matrices of ⟨·,·⟩_C on the four corners
    and the spectra of f*∘f for random f: a → b acting on End(a).
    """
    worst = float("inf")
    for s, t in ((a, a), (a, b), (b, a), (b, b)):
        basis = D.hom_basis(s, t)
        if not basis:
            continue
        G = np.array([[D.inner(bj, bi) for bj in basis] for bi in basis])
        worst = min(worst, float(np.min(np.linalg.eigvalsh((G + G.conj().T) / 2))))
    basis = D.hom_basis(a, a)
    if basis and D.hom_dim(a, b):
        for _ in range(trials):
            f = D.random_mor(a, b, rng)
            L = _algebra_matrix(D, basis, D.compose(D.dagger(f), f))
            ev = np.linalg.eigvals(L)
            worst = min(worst, float(np.min(ev.real)) / max(1.0, float(np.max(np.abs(ev)))))
    return worst


def unitary_adjunction_check(D: Delta, rng: np.random.Generator, nmax: int = 4, trials: int = 10) -> float:
    """max |⟨f, g⟩_C − ⟨f, g⟩_V| over hom spaces Φ(u) → (v, n)."""
    worst = 0.0
    for _ in range(trials):
        u = random_object(D, rng, 0).v
        c = random_object(D, rng, nmax)
        a = C0Obj(u, 0)
        if not D.hom_dim(a, c):
            continue
        f, g = D.random_mor(a, c, rng), D.random_mor(a, c, rng)
        worst = max(worst, abs(D.inner(f, g) - cm.inner_product(f.payload, g.payload)))
    return worst


def simple_decomposition(D: Delta, a: C0Obj, seed: int = 0, tol: float = 1e-7) -> list[CompletedObject]:
    """Minimal projections of End(a) from the spectrum of a random self-adjoint element."""
    basis = D.hom_basis(a, a)
    if not basis:
        return []
    rng = np.random.default_rng(seed)
    h = D.random_mor(a, a, rng)
    h = D.add(h, D.dagger(h))
    L = _algebra_matrix(D, basis, h)
    lam = np.sort(np.linalg.eigvals(L).real)
    scale = max(1.0, float(np.max(np.abs(lam))))
    clusters = [[lam[0]]]
    for x in lam[1:]:
        gap = x - clusters[-1][-1]
        if gap <= tol * scale:
            clusters[-1].append(x)
        elif gap <= 10 * tol * scale:
            raise NumericalDegeneracy("eigenvalue clusters are too close to separate")
        else:
            clusters.append([x])
    vals = [float(np.mean(c)) for c in clusters]
    one = D.identity(a)
    out = []
    for i, li in enumerate(vals):
        p = one
        for j, lj in enumerate(vals):
            if i != j:
                step = D.add(h, D.scale(-lj, one))
                p = D.scale(1.0 / (li - lj), D.compose(step, p))
        out.append(CompletedObject(a, p))
    return out


def projection_report(D: Delta, projs: list[CompletedObject]) -> dict:
    a = projs[0].base if projs else None
    idem = max((D.residual(D.compose(P.p, P.p), P.p) for P in projs), default=0.0)
    sa = max((D.residual(D.dagger(P.p), P.p) for P in projs), default=0.0)
    orth = 0.0
    for i, P in enumerate(projs):
        for Q in projs[i + 1:]:
            orth = max(orth, float(np.max(np.abs(D.vec(D.compose(P.p, Q.p))))))
    total = 0.0
    if projs:
        s = projs[0].p
        for P in projs[1:]:
            s = D.add(s, P.p)
        total = D.residual(s, D.identity(a))
    return {"count": len(projs), "idempotent": idem, "self_adjoint": sa, "orthogonal": orth,
            "sum_to_identity": total, "traces": [D.trace(P.p).real for P in projs]}


def cap_morphism(D: Delta) -> C0Mor:
    """The cap x⊗x → 1 as a C_0 morphism."""
    return D.cap_x()


def jones_wenzl_2(D: Delta, seed: int = 0) -> C0Mor:
    """The minimal projection of End(x⊗x) killed by the cap."""
    a = D.xpow(2)
    cap = D.cap_x()
    for P in simple_decomposition(D, a, seed):
        if D.vec(D.compose(cap, P.p)).size == 0 or np.max(np.abs(D.vec(D.compose(cap, P.p)))) < 1e-8:
            return P.p
    raise DeltaError("no projection of End(x⊗x) is orthogonal to the cap")


def dims_table(D: Delta, vs: list, nmax: int) -> list[dict]:
    out = []
    for u in vs:
        for v in vs:
            for k in range(nmax + 1):
                for n in range(nmax + 1 - k):
                    a, b = C0Obj(u, k), C0Obj(v, n)
                    out.append({"source": [repr(u), k], "target": [repr(v), n], "dim": D.hom_dim(a, b)})
    return out

"""The planar algebra Λ(M) of a module category with a real generator.

P[n] = Tr(x^{⊗n}).  Multiplication is the lax structure μ of the right
adjoint, caps and cups are Tr applied to the standard caps and cups on x,
the traciators are τ, the real structures come from r_x and χ, and the
state is i†.
"""
from __future__ import annotations

import numpy as np

from . import apa
from . import catmodel as cm
from .adjunction import ModuleCategory, TraceAdjoint
from .apa import APAInstance
from .catmodel import Mor
from .tangle import Gen


def _rotation_power(T: TraceAdjoint, n: int, j: int) -> Mor:
    """τ_{x^{n-j}, x^j} as the j-th power of the one-strand traciator of x^n."""
    M = T.M
    out = cm.identity(T.tr_obj(M.xpow(n)))
    if j == 0:
        return out
    rho = T.tau(M.xpow(n - 1), M.x)
    for _ in range(j):
        out = cm.compose(rho, out)
    return out


def lambda_generator(T: TraceAdjoint, g: Gen, tau_mode: str = "direct") -> Mor:
    M = T.M
    k, a, b = g.kind, g.a, g.b
    X = M.xpow
    if k == "unit":
        return T.unit_i()
    if k == "mult":
        return T.mu(X(a), X(b))
    if k == "cap":
        f = M.tensor_all([M.identity(X(b)), M.cap_x(), M.identity(X(a - b))])
        return T.tr_mor(f, X(a + 2), X(a))
    if k == "cup":
        f = M.tensor_all([M.identity(X(b)), M.cup_x(), M.identity(X(a - b))])
        return T.tr_mor(f, X(a), X(a + 2))
    if k in ("trac", "tracinv"):
        t = _rotation_power(T, a + b, b) if tau_mode == "rotation" else T.tau(X(a), X(b))
        return t if k == "trac" else apa.mor_inverse(t)
    if k == "id":
        return cm.identity(T.tr_obj(X(a)))
    raise ValueError(f"unknown generator {k!r}")


def lambda_real(T: TraceAdjoint, n: int) -> Mor:
    """r_n = χ_{x^n} ∘ Tr(ν) ∘ Tr(r_x^{⊗n})."""
    M = T.M
    xn = M.xpow(n)
    rx = M.tensor_all([M.r_x] * n)
    cxn = M.conj_obj(xn)
    f = M.compose(M.nu_x(n), rx)
    return cm.compose(T.chi(xn), T.tr_mor(f, xn, cxn))


class LambdaModel:
    """Computes Λ(M) generators on demand, for any box size."""

    def __init__(self, T: TraceAdjoint, tau_mode: str = "direct"):
        self.T = T
        self.tau_mode = tau_mode
        self._gens: dict = {}
        self._reals: dict = {}

    def box_prim(self, n: int) -> tuple:
        return self.T.tr_obj(self.T.M.xpow(n)).word[0]

    def generator(self, g: Gen) -> Mor:
        hit = self._gens.get(g)
        if hit is None:
            hit = lambda_generator(self.T, g, self.tau_mode)
            self._gens[g] = hit
        return hit

    def real(self, n: int) -> Mor:
        hit = self._reals.get(n)
        if hit is None:
            hit = lambda_real(self.T, n)
            self._reals[n] = hit
        return hit


def lambda_apa(M: ModuleCategory, n_max: int, T: TraceAdjoint | None = None, name: str | None = None,
               tau_mode: str = "direct") -> APAInstance:
    """Λ(M) cut off at n_max.

    ``tau_mode="rotation"`` builds every traciator from the one-strand
    traciators τ_{x^{n-1}, x}, which keeps intermediate objects small.
    """
    T = TraceAdjoint(M) if T is None else T
    psi = cm.dagger(T.unit_i())
    model = LambdaModel(T, tau_mode)
    A = apa.assemble(M.V, n_max, model.box_prim, model.generator, model.real, psi, model,
                     name or f"lambda({getattr(M, 'name', 'module')})")
    return A


def box_dimensions(M: ModuleCategory, n_max: int) -> list[int]:
    T = TraceAdjoint(M)
    return [sum(T.multiplicities(M.xpow(n)).values()) for n in range(n_max + 1)]


# --------------------------------------------------------------------------
# the round trip Λ∘Δ


def cap_nest(M: ModuleCategory, i: int):
    """x^{⊗i}⊗x^{⊗i} → 1 closing the strands as a rainbow."""
    out = M.identity(M.unit())
    for _ in range(i):
        mid = M.tensor_all([M.identity(M.x), out, M.identity(M.x)])
        out = M.compose(M.cap_x(), mid)
    return out


def psi_map(T: TraceAdjoint, f: Mor, v: cm.Obj, i: int, j: int):
    """Ψ(f): Φ(u)⊗x^i → Φ(v)⊗x^j for f: u → v⊗Tr(x^{j+i})."""
    M = T.M
    c = M.xpow(j + i)
    pv, xi, xj = M.phi_obj(v), M.xpow(i), M.xpow(j)
    step = M.tensor(M.phi_mor(f), M.identity(xi))
    step = M.compose(M.tensor_all([M.identity(pv), T.eps(c), M.identity(xi)]), step)
    close = M.tensor_all([M.identity(pv), M.identity(xj), cap_nest(M, i)])
    return M.compose(close, step)


def psi_norm_check(T: TraceAdjoint, rng: np.random.Generator, nmax: int, trials: int = 30) -> float:
    """max |‖f‖_V − ‖Ψ(f)‖_C| over random f: u → v⊗Tr(x^{i+j})."""
    M = T.M
    V = T.V
    sims = V.simples()
    worst = 0.0
    done = 0
    for _ in range(trials * 20):
        if done >= trials:
            break
        u = cm.simple_obj(V, sims[int(rng.integers(len(sims)))])
        v = cm.simple_obj(V, sims[int(rng.integers(len(sims)))])
        i = int(rng.integers(0, nmax // 2 + 1))
        j = int(rng.integers(0, nmax - 2 * i + 1)) if nmax - 2 * i >= 0 else 0
        tgt = cm.tensor_obj(v, T.tr_obj(M.xpow(j + i)))
        if not cm.hom_dim(u, tgt):
            continue
        f = cm.random_mor(u, tgt, rng)
        g = psi_map(T, f, v, i, j)
        nf = np.sqrt(abs(cm.inner_product(f, f)))
        ng = np.sqrt(abs(M.inner(g, g)))
        worst = max(worst, abs(nf - ng) / max(1.0, nf))
        done += 1
    return worst


def canonical_alignment(T: TraceAdjoint, A: APAInstance, n: int) -> Mor:
    """U_n: Tr(x^n) → P[n] reading each adjoint basis vector as its payload column."""
    M = T.M
    dat = T.data(M.xpow(n))
    P = A.box(n)
    out = {}
    for a, bs in dat.basis.items():
        out[a] = np.array([b.payload.block(a)[:, 0] for b in bs]).T
    return cm.from_blocks(dat.obj, P, out)


def roundtrip_check(A: APAInstance, n_max: int | None = None, seed: int = 0, tol: float = 1e-8,
                    samples: int = 30) -> dict:
    """Λ(Δ(A)) against A after the canonical unitary alignment, plus Ψ norm preservation."""
    from .delta import Delta

    n_max = A.n_max if n_max is None else n_max
    D = Delta(A)
    T = TraceAdjoint(D)
    L = lambda_apa(D, n_max, T, name=f"lambda(delta({A.name}))", tau_mode="rotation")
    U = [canonical_alignment(T, A, n) for n in range(n_max + 1)]
    align = max(cm.residual(cm.compose(cm.dagger(u), u), cm.identity(u.source)) for u in U)
    P = A if A.n_max == n_max else _truncate(A, n_max)
    rep = apa.check_apa_morphism(U, L, P, tol)
    per_gen = {}
    for g in apa.stored_generators(n_max):
        t = g.type()
        lhs = cm.compose(U[t.output], L.gens[apa._gen_key(g)])
        rhs = cm.compose(P.gens[apa._gen_key(g)], cm.tensor_all([U[n] for n in t.inputs], A.V))
        per_gen[f"{g.kind}({g.a},{g.b})"] = cm.residual(lhs, rhs)
    rng = np.random.default_rng(seed)
    psi_res = psi_norm_check(T, rng, n_max, samples)
    worst = max([align, psi_res] + list(rep.residuals.values()))
    return {
        "instance": A.name, "n_max": n_max, "dims": L.dims(),
        "alignment_unitarity": align,
        "generators": per_gen,
        "real": rep.residuals.get("real", 0.0), "state": rep.residuals.get("state", 0.0),
        "max_generator_residual": max(per_gen.values(), default=0.0),
        "psi_norm_residual": psi_res,
        "tol": tol, "ok": worst <= tol,
    }


def _truncate(A: APAInstance, n_max: int) -> APAInstance:
    keep = {apa._gen_key(g) for g in apa.stored_generators(n_max)}
    return APAInstance(A.V, n_max, A.boxes[:n_max + 1], {k: m for k, m in A.gens.items() if k in keep},
                       A.reals[:n_max + 1], A.psi, A.model, A.name)


# --------------------------------------------------------------------------
# functoriality


def delta_on_morphism(H: list, A1: APAInstance, A2: APAInstance, tol: float = 1e-8):
    """The functor Δ(A1) → Δ(A2) postcomposing payloads with H[n+k]."""
    from .delta import C0Mor

    rep = apa.check_apa_morphism(H, A1, A2, tol)
    if not rep.ok:
        raise apa.APAError(f"not a morphism of planar algebras: {rep.residuals}")

    def F(f):
        m = f.source.n + f.target.n
        return C0Mor(f.source, f.target, cm.compose(cm.tensor_mor(cm.identity(f.target.v), H[m]), f.payload))

    return F


def dagger_compatibility(F, D1, D2, rng: np.random.Generator, nmax: int = 4, trials: int = 20) -> float:
    from .delta import _nonempty_pair

    worst = 0.0
    for _ in range(trials):
        a, b = _nonempty_pair(D1, rng, nmax)
        f = D1.random_mor(a, b, rng)
        worst = max(worst, D2.residual(F(D1.dagger(f)), D2.dagger(F(f))))
    return worst


def zeta(T1: TraceAdjoint, T2: TraceAdjoint, G_obj=None, G_mor=None, gamma_inv=None):
    """ζ_c: Tr_1(c) → Tr_2(G(c)), the mate of G(ε_c)∘γ^{-1}.  Identity data by default."""
    G_obj = G_obj or (lambda c: c)
    G_mor = G_mor or (lambda f: f)

    def at(c):
        T = T1.tr_obj(c)
        g = G_mor(T1.eps(c))
        if gamma_inv is not None:
            g = T2.M.compose(g, gamma_inv(T))
        return T2.mate_to_V(g, T, G_obj(c))

    return at


def zeta_involutivity(T1: TraceAdjoint, T2: TraceAdjoint, z, c) -> float:
    """conj(ζ_c)∘χ^1_c = χ^2_{G(c)}∘ζ_{c̄} for the identity functor."""
    M = T1.M
    lhs = cm.compose(cm.conj_mor(z(c)), T1.chi(c))
    rhs = cm.compose(T2.chi(c), z(M.conj_obj(c)))
    return cm.residual(lhs, rhs)

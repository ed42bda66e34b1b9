import numpy as np
import pytest

from anchor_calc import adjunction as adj
from anchor_calc import apa
from anchor_calc import catmodel as cm
from anchor_calc import delta as dl
from anchor_calc import lambda_ as lam
from anchor_calc import tangle as tg

import oracles


@pytest.fixture(scope="module", params=["svect", "matrix", "z4"])
def L(request):
    return lam.lambda_apa(adj.builtin_module(request.param), 4, tau_mode="rotation")


def test_lambda_satisfies_axioms(L):
    rep = apa.check_axioms(L, seed=4, samples=15)
    assert rep.ok, rep.residuals


def test_traciator_modes_agree():
    M = adj.builtin_module("z4")
    T = adj.TraceAdjoint(M)
    for n in range(4):
        for j in range(n + 1):
            g = tg.trac(n - j, j)
            d = lam.lambda_generator(T, g, "direct")
            r = lam.lambda_generator(T, g, "rotation")
            assert cm.residual(d, r) < 1e-10


def test_lambda_of_svect_reproduces_fermion():
    L = lam.lambda_apa(adj.fermion_module(), 4)
    F = apa.fermion_apa(4)
    assert L.dims() == F.dims()
    for g in apa.stored_generators(4):
        if g.kind in ("trac", "tracinv", "unit"):
            assert L.eval(g).scalar() == pytest.approx(F.eval(g).scalar())


def test_box_dimensions():
    assert lam.box_dimensions(adj.fermion_module(), 4) == [1] * 5
    M = adj.matrix_module()
    one = [{(1, 1): 1, (2, 2): 1}]
    x = {(1, 2): 1, (2, 1): 1}
    want = [oracles.hom_dim(M.C.to_json(), one, [x] * n) for n in range(5)]
    assert lam.box_dimensions(M, 4) == want == [2, 0, 2, 0, 2]
    assert lam.box_dimensions(adj.cyclic_module(4), 4) == [2 ** n for n in range(5)]


def test_lazy_model_goes_past_the_cutoff():
    L = lam.lambda_apa(adj.matrix_module(), 2, tau_mode="rotation")
    assert L.generator(tg.mult(2, 2), lazy=True).target == L.model.T.tr_obj(L.model.T.M.xpow(4))


def test_roundtrip_of_lambda_output():
    L = lam.lambda_apa(adj.matrix_module(), 4, tau_mode="rotation")
    rep = lam.roundtrip_check(L, 4, seed=1)
    assert rep["ok"], rep
    assert rep["dims"] == L.dims()


def test_roundtrip_on_tl3():
    rep = lam.roundtrip_check(apa.tl_apa(3.0, 4), seed=2)
    assert rep["ok"] and rep["alignment_unitarity"] < 1e-10


def test_psi_preserves_norms():
    T = adj.TraceAdjoint(dl.Delta(apa.fermion_apa(4)))
    assert lam.psi_norm_check(T, np.random.default_rng(3), 4, 10) < 1e-10


def test_functor_from_apa_morphism():
    A = apa.tl_apa(2.0, 4)
    H = [cm.identity(A.box(n)) * (-1) ** n for n in range(5)]
    D = dl.Delta(A)
    F = lam.delta_on_morphism(H, A, A)
    assert lam.dagger_compatibility(F, D, D, np.random.default_rng(4), 2, 10) < 1e-10
    with pytest.raises(apa.APAError):
        lam.delta_on_morphism([h * 2 for h in H], A, A)


def test_zeta_identity_is_involutive():
    M = adj.builtin_module("matrix")
    T1, T2 = adj.TraceAdjoint(M), adj.TraceAdjoint(M)
    z = lam.zeta(T1, T2)
    for n in range(3):
        c = M.xpow(n)
        assert cm.residual(z(c), cm.identity(T1.tr_obj(c))) < 1e-10
        assert lam.zeta_involutivity(T1, T2, z, c) < 1e-10

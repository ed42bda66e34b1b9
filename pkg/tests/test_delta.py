import numpy as np
import pytest

from anchor_calc import adjunction as adj
from anchor_calc import apa
from anchor_calc import catmodel as cm
from anchor_calc import delta as dl
from anchor_calc import lambda_ as lam
from anchor_calc.adjunction import ModuleCategory


@pytest.fixture(scope="module", params=["tl:2", "tl:3", "fermion"])
def D(request):
    return dl.Delta(apa.builtin(request.param, 4))


@pytest.fixture(scope="module")
def Dz4():
    return dl.Delta(lam.lambda_apa(adj.builtin_module("z4"), 2, tau_mode="rotation"))


def test_hom_dims_are_box_dims(D):
    one = cm.unit_obj(D.V)
    for k in range(3):
        for n in range(3):
            want = cm.hom_dim(one, D.A.box(k + n))
            assert D.hom_dim(dl.C0Obj(one, k), dl.C0Obj(one, n)) == want


def test_identity_is_neutral(D):
    rng = np.random.default_rng(0)
    a, b = dl._nonempty_pair(D, rng, 3)
    f = D.random_mor(a, b, rng)
    assert D.residual(D.compose(D.identity(b), f), f) < 1e-10
    assert D.residual(D.compose(f, D.identity(a)), f) < 1e-10


def test_composition_and_tensor_laws(D):
    rng = np.random.default_rng(1)
    assert dl.associativity_check(D, rng, 3, 5) < 1e-10
    assert dl.tensor_associativity_check(D, rng, 1, 4) < 1e-10
    assert dl.spherical_check(D, D.xpow(2), rng) < 1e-10


def test_dagger_reverses_order(D):
    r = dl.dagger_checks(D, np.random.default_rng(2), 3, 8)
    assert max(r.values()) < 1e-10


def test_conjugation_shortcut_matches_generic(Dz4):
    # the generic composite needs boxes of size 4n, so stay at n <= 1
    rng = np.random.default_rng(3)
    one = cm.unit_obj(Dz4.V)
    g, g3 = cm.simple_obj(Dz4.V, (1,)), cm.simple_obj(Dz4.V, (3,))
    pairs = [((one, 0), (g, 1)), ((g, 0), (one, 1)), ((g3, 0), (one, 1)), ((g, 1), (one, 0))]
    for a, b in pairs:
        a, b = dl.C0Obj(*a), dl.C0Obj(*b)
        assert Dz4.hom_dim(a, b) == 1
        f = Dz4.random_mor(a, b, rng)
        assert Dz4.residual(Dz4.conj_mor(f), ModuleCategory.conj_mor(Dz4, f)) < 1e-10


def test_under_crossing_passes_interchange_on_nonsymmetric_input(Dz4):
    assert dl.interchange_check(Dz4, np.random.default_rng(4), 1, 6) < 1e-10


def test_crossing_choice_validated():
    with pytest.raises(dl.DeltaError):
        dl.Delta(apa.fermion_apa(2), crossing="sideways")
    with pytest.raises(dl.DeltaError):
        dl.Delta(apa.fermion_apa(2)).obj(cm.unit_obj(cm.sVect()), -1)


def test_shape_mismatch():
    D = dl.Delta(apa.tl_apa(2.0, 4))
    with pytest.raises(cm.ShapeMismatch):
        D.compose(D.identity(D.x), D.identity(D.xpow(2)))
    with pytest.raises(cm.ShapeMismatch):
        D.unit_value(D.identity(D.x))


def test_loop_is_delta():
    D = dl.Delta(apa.tl_apa(3.0, 4))
    assert D.trace(D.identity(D.x)) == pytest.approx(3.0)
    assert D.inner(D.identity(D.x), D.identity(D.x)) == pytest.approx(3.0)


def test_simple_decomposition_of_two_strands():
    D = dl.Delta(apa.tl_apa(2.0, 4))
    projs = dl.simple_decomposition(D, D.xpow(2))
    rep = dl.projection_report(D, projs)
    assert rep["count"] == 2
    assert sorted(round(t, 9) for t in rep["traces"]) == [1.0, 3.0]
    assert max(rep["idempotent"], rep["self_adjoint"], rep["orthogonal"], rep["sum_to_identity"]) < 1e-10


def test_jones_wenzl_general_delta():
    D = dl.Delta(apa.tl_apa(3.0, 4))
    p = dl.jones_wenzl_2(D)
    assert D.trace(p) == pytest.approx(3.0 ** 2 - 1)
    assert np.max(np.abs(D.vec(D.compose(dl.cap_morphism(D), p)))) < 1e-10


def test_fermion_odd_strands_are_simple():
    D = dl.Delta(apa.fermion_apa(4))
    for n in range(3):
        projs = dl.simple_decomposition(D, D.xpow(n))
        assert len(projs) == 1


def test_dims_table():
    D = dl.Delta(apa.fermion_apa(4))
    vs = [cm.unit_obj(D.V), cm.simple_obj(D.V, (1,))]
    rows = dl.dims_table(D, vs, 2)
    assert len(rows) == 4 * 6
    assert all(r["dim"] in (0, 1) for r in rows)


def test_over_crossing_breaks_interchange_when_braiding_is_not_symmetric(Dz4):
    over = dl.Delta(Dz4.A, crossing="over")
    assert dl.interchange_check(over, np.random.default_rng(4), 1, 6) > 0.1

import random

import pytest
from hypothesis import given, settings, strategies as st

from anchor_calc import tangle as tg


def test_generator_types():
    assert tg.type_of(tg.unit()) == tg.TangleType((), 0)
    assert tg.type_of(tg.cap(3, 1)) == tg.TangleType((5,), 3)
    assert tg.type_of(tg.cup(3, 1)) == tg.TangleType((3,), 5)
    assert tg.type_of(tg.mult(2, 3)) == tg.TangleType((2, 3), 5)
    assert tg.type_of(tg.trac(2, 3)) == tg.TangleType((5,), 5)
    assert tg.type_of(tg.ident(4)) == tg.TangleType((4,), 4)


def test_compose_splices_inputs():
    e = tg.compose(tg.mult(0, 4), 1, tg.unit())
    assert tg.type_of(e) == tg.TangleType((4,), 4)
    e = tg.compose(tg.mult(2, 2), 2, tg.mult(1, 1))
    assert list(tg.type_of(e).inputs) == [2, 1, 1]
    assert tg.type_of(tg.compose(tg.cap(0, 0), 1, tg.cup(0, 0))).inputs == (0,)


def test_compose_errors():
    with pytest.raises(tg.ArityMismatch, match="slot 1 wants 1"):
        tg.compose(tg.mult(1, 1), 1, tg.unit())
    with pytest.raises(tg.BadSlot):
        tg.compose(tg.mult(1, 1), 3, tg.ident(1))
    with pytest.raises(tg.TangleError):
        tg.cap(1, 2)
    with pytest.raises(tg.TangleError):
        tg.Gen("bogus")


def test_braid_permutes_inputs():
    e = tg.braid(tg.mult(1, 2), "s1")
    assert list(tg.type_of(e).inputs) == [2, 1]
    e = tg.braid(tg.mult(1, 2), "s1 s1' t2")
    assert list(tg.type_of(e).inputs) == [1, 2]
    with pytest.raises(tg.BadBraidLetter):
        tg.braid(tg.mult(1, 2), "s2")
    with pytest.raises(tg.BadBraidLetter):
        tg.parse_word("x1")


def test_rotation_and_power():
    assert tg.rotation(2) == tg.trac(1, 1)
    assert tg.rotation(5) == tg.trac(4, 1)
    assert tg.type_of(tg.rotation(5)) == tg.TangleType((5,), 5)
    assert tg.type_of(tg.power(tg.rotation(3), 3)) == tg.TangleType((3,), 3)


def test_standard_tangles():
    assert tg.type_of(tg.rainbow(3)) == tg.TangleType((6,), 0)
    assert tg.type_of(tg.through_strands(2)) == tg.TangleType((), 4)
    assert tg.type_of(tg.pairing(3)) == tg.TangleType((3, 3), 0)
    assert tg.type_of(tg.contraction(1, 2, 3)) == tg.TangleType((3, 5), 4)
    with pytest.raises(tg.ArityMismatch):
        tg.nest_caps(tg.ident(2), 1, 1)


def test_reflect_on_generators():
    assert tg.reflect(tg.cap(4, 1)) == tg.cap(4, 3)
    assert tg.reflect(tg.mult(1, 3)) == tg.mult(3, 1)
    assert tg.reflect(tg.trac(2, 1)) == tg.tracinv(2, 1)


def test_inside_out():
    e = tg.Compose(tg.cap(1, 0), 1, tg.trac(2, 1))
    assert tg.inside_out(e) == tg.Compose(tg.tracinv(2, 1), 1, tg.cup(1, 0))
    with pytest.raises(tg.TangleError):
        tg.inside_out(tg.mult(1, 1))


def _random(seed, out=None, nmax=5):
    rng = random.Random(seed)
    return tg.random_tangle(rng, rng.randint(0, nmax) if out is None else out, nmax, rng.randint(0, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reflect_is_an_involution_reversing_inputs(seed):
    e = _random(seed)
    r = tg.reflect(e)
    assert tg.reflect(r) == e
    assert list(tg.type_of(r).inputs) == list(reversed(tg.type_of(e).inputs))
    assert tg.type_of(r).output == tg.type_of(e).output


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_random_tangles_respect_output_and_cutoff(seed, out):
    e = _random(seed, out, 6)
    t = tg.type_of(e)
    assert t.output == out
    assert all(n <= 6 for n in t.inputs)


def test_generators_with_output_cover_families():
    kinds = {g.kind for g in tg.generators_with_output(2, 4)}
    assert kinds == {"id", "cap", "cup", "mult", "trac", "tracinv"}
    assert tg.unit() in tg.generators_with_output(0, 4)


def test_to_text():
    e = tg.compose(tg.mult(1, 1), 1, tg.compose(tg.cap(1, 0), 1, tg.ident(3)))
    assert tg.to_text(e) == "mult(1,1) o1 (cap(1,0) o1 id(3))"
    assert tg.to_text(tg.braid(tg.mult(1, 1), "s1'")) == 'braid(mult(1,1), "s1\'")'

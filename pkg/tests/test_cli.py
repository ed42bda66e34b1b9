import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from anchor_calc import apa
from anchor_calc import cli
from anchor_calc import tangle as tg


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_loop(capsys):
    code, out, _ = run(capsys, "eval", "tl:2", "cap(0,0) o1 cup(0,0)")
    assert code == 0
    assert json.loads(out) == {"scalar": [2.0, 0.0]}


def test_eval_reports_scalars_and_blocks(capsys):
    code, out, _ = run(capsys, "eval", "fermion", "trac(1,1)")
    assert code == 0 and json.loads(out)["scalar"] == pytest.approx([1.0, 0.0])
    code, out, _ = run(capsys, "eval", "tl:2", "id(4)")
    blocks = json.loads(out)["blocks"]
    assert code == 0 and len(next(iter(blocks.values()))) == 2


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "fermion", "3")
    assert code == 0 and json.loads(out) == [1, 1, 1, 1]


def test_gram(capsys):
    code, out, _ = run(capsys, "gram", "tl:2", "4")
    d = json.loads(out)
    assert code == 0
    assert d["matrix"][0] == pytest.approx([4.0, 2.0]) and d["matrix"][1] == pytest.approx([2.0, 4.0])
    assert d["eigenvalues"] == pytest.approx([2.0, 6.0])


def test_check_subset_and_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "fermion", "--nmax", "4", "--axioms", "p1,p2,twist")
    d = json.loads(out)
    assert code == 0 and set(d["axioms"]) == {"p1", "p2", "twist"}
    bad = apa.mutate(apa.tl_apa(2.0, 4), "mult", key=("mult", 2, 2))
    path = tmp_path / "bad.json"
    path.write_text(apa.dumps(bad))
    code, out, _ = run(capsys, "check", str(path), "--axioms", "p2")
    assert code == 1 and not json.loads(out)["ok"]


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ANCHOR_CALC_TOL", "1e-3")
    code, out, _ = run(capsys, "check", "fermion", "--nmax", "2", "--axioms", "state")
    assert json.loads(out)["tol"] == 1e-3
    code, out, _ = run(capsys, "check", "fermion", "--nmax", "2", "--axioms", "state", "--tol", "1e-5")
    assert json.loads(out)["tol"] == 1e-5


@pytest.mark.parametrize("argv, kind", [
    (["eval", "tl:2", "mult(1,1) o1 unit"], "ArityMismatch"),
    (["eval", "tl:2", "cap(0,0) o1 (cup(0,0)"], "ParseError"),
    (["eval", "tl:2", "frob(1)"], "ParseError"),
    (["eval", "nowhere.json", "unit"], "APAError"),
    (["check", "fermion", "--axioms", "p9"], "ValueError"),
    (["lambda", "q7"], "AdjunctionError"),
])
def test_input_errors_exit_2(capsys, argv, kind):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == kind


def test_parse_error_position():
    with pytest.raises(cli.ParseError) as exc:
        cli.parse_tangle("mult(1,1)\n  o1 ?")
    assert (exc.value.line, exc.value.col) == (2, 6)


def test_argparse_failure_exits_2(capsys):
    assert cli.main(["dims"]) == 2


def test_parse_braid_and_precedence():
    e = cli.parse_tangle('braid(mult(1,2), "s1") o1 id(2)')
    assert tg.type_of(e).inputs == (2, 1)
    left = cli.parse_tangle("mult(1,1) o1 cap(1,0) o1 id(3)")
    assert left == tg.Compose(tg.Compose(tg.mult(1, 1), 1, tg.cap(1, 0)), 1, tg.ident(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_print_parse_round_trip(seed):
    rng = random.Random(seed)
    e = tg.random_tangle(rng, rng.randint(0, 4), 4, rng.randint(0, 3), braids=True)
    assert cli.parse_tangle(tg.to_text(e)) == e


def test_delta_and_roundtrip_commands(capsys):
    code, out, _ = run(capsys, "delta", "tl:2", "--nmax", "2")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "delta", "fermion", "--nmax", "2", "--report", "projections")
    assert code == 0 and [r["count"] for r in json.loads(out)] == [1, 1, 1]
    code, out, _ = run(capsys, "roundtrip", "fermion", "--nmax", "3")
    assert code == 0 and json.loads(out)["ok"]


def test_lambda_command_emits_loadable_json(capsys, tmp_path):
    code, out, _ = run(capsys, "lambda", "svect", "--nmax", "3")
    assert code == 0
    path = tmp_path / "lam.json"
    path.write_text(out)
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0 and json.loads(out)["ok"]

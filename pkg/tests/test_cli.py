import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from boxspline import cli
from boxspline.identity import PointResult, theorem1_check
from conftest import MATRIX


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def cfg(tmp_path):
    def write(name_or_x, dim=None):
        X = MATRIX[name_or_x] if isinstance(name_or_x, str) else name_or_x
        p = tmp_path / f"cfg{len(list(tmp_path.iterdir()))}.json"
        p.write_text(json.dumps({"dim": dim or len(X[0]), "X": X}))
        return str(p)

    return write


def run(runner, *args):
    return runner.invoke(cli.main, [str(a) for a in args])


def test_describe_a2(runner, cfg):
    r = run(runner, "describe", cfg("A2"), "--json")
    assert r.exit_code == 0
    info = json.loads(r.stdout)
    assert info["zonotope_volume"] == "3"
    assert len(info["hyperplanes"]) == 3
    assert info["dm_dimension"] == 3 == info["bases"]
    text = run(runner, "describe", cfg("e1e2")).stdout
    assert "zonotope volume: 1" in text and "dim D(X): 1" in text


def test_parse_errors(runner, tmp_path, cfg):
    cases = {
        "{\"dim\": 2,\n \"X\": [[1,0],}": "2:",
        '{"X": [[1]]}': "missing field 'dim'",
        '{"dim": 0, "X": [[1]]}': "'dim'",
        '{"dim": 2, "X": [[1,0],[0]]}': "X[1]",
        '{"dim": 1, "X": [[1.5]]}': "X[0]",
        '{"dim": 2, "X": [[1,0]]}': "NonSpanningList",
    }
    for i, (text, needle) in enumerate(cases.items()):
        p = tmp_path / f"bad{i}.json"
        p.write_text(text)
        r = run(runner, "describe", p)
        assert r.exit_code == 2, text
        assert needle in r.stderr, (text, r.stderr)
    assert run(runner, "describe", tmp_path / "missing.json").exit_code == 2
    assert run(runner, "eval-box", cfg("A2"), "--at", "1/2").exit_code == 2
    assert run(runner, "verify", "theorem1", cfg("A2"), "--poly", "v1^^2").exit_code == 2


def test_eval_commands(runner, cfg):
    assert run(runner, "eval-box", cfg("ww"), "--at", "1/2").stdout.strip() == "1/2"
    assert run(runner, "eval-box", cfg("ww"), "--at", "1/2", "--subset", "0").stdout.strip() == "1"
    assert run(runner, "eval-box", cfg("ww"), "--at", "1").exit_code == 2
    assert run(runner, "eval-w", cfg("w"), "--at", "3/10").stdout.strip() == "1/5"
    r = run(runner, "eval-w", cfg("w"), "--closed-form")
    assert r.exit_code == 0 and r.stdout.strip()
    assert run(runner, "eval-w", cfg("w")).exit_code == 2


def test_dm_basis_and_vertices(runner, cfg):
    assert run(runner, "dm-basis", cfg("A2")).stdout.split("\n")[:3] == ["1", "v1", "v2"]
    lines = run(runner, "toric-vertices", cfg("2w")).stdout.strip().split("\n")
    assert [ln.split("\t")[0] for ln in lines] == ["0", "1/2"]


def test_verify_examples(runner, cfg):
    r = run(runner, "verify", "theorem1", cfg("A2"), "--poly", "v1^2", "--points", 20)
    assert r.exit_code == 0
    report = json.loads(r.stdout)
    assert report["pass"] is True and len(report["points"]) == 20
    assert set(report["points"][0]) >= {"point", "lhs_discrete", "lhs_continuous", "difference", "rhs_total", "terms", "pass"}
    assert "seed=0" in r.stderr
    r = run(runner, "verify", "dm-corollary", cfg("A2"), "--points", 3)
    assert r.exit_code == 0 and json.loads(r.stdout)["basis"] == ["1", "v1", "v2"]
    assert run(runner, "verify", "twisted-corollary", cfg("2w"), "--g", "1/2").exit_code == 0
    assert run(runner, "verify", "theorem2-1d", cfg("ww"), "--g", "1/3", "--poly", "t^2").exit_code == 0


def test_verify_usage_errors(runner, cfg):
    assert run(runner, "verify", "twisted-corollary", cfg("2w")).exit_code == 2
    assert run(runner, "verify", "twisted-corollary", cfg("2w"), "--g", "0").exit_code == 2
    assert run(runner, "verify", "twisted-corollary", cfg("2w"), "--g", "1/2,1/2").exit_code == 2
    assert run(runner, "verify", "theorem2-1d", cfg("A2"), "--g", "1/2,0").exit_code == 2
    assert run(runner, "verify", "nonsense", cfg("A2")).exit_code == 2


def test_verify_failure_exit_code(runner, cfg, monkeypatch):
    def broken(c, f, points):
        rep = theorem1_check(c, f, points)
        rep.results.append(PointResult(rep.results[0].point, passed=False))
        return rep

    monkeypatch.setattr(cli, "theorem1_check", broken)
    r = run(runner, "verify", "theorem1", cfg("ww"), "--points", 2)
    assert r.exit_code == 1
    assert json.loads(r.stdout)["pass"] is False


def test_report_determinism(runner, cfg, tmp_path):
    path = cfg("B2")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(runner, "verify", "theorem1", path, "--poly", "v1*v2", "--points", 5, "--seed", 3, "--out", a)
    run(runner, "verify", "theorem1", path, "--poly", "v1*v2", "--points", 5, "--seed", 3, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 3


def test_grid_indicator_and_sawtooth(runner, cfg):
    r = run(runner, "grid", cfg("w"), "--fn", "box", "--lo", "-1/2", "--hi", "3/2", "--step", "1/100")
    header, rows, skipped = cli.read_grid_csv(r.stdout)
    assert header == ["v1", "value"]
    assert skipped == 2 and len(rows) == 199
    for x, val in rows:
        assert val == ("1" if 0 < Fraction(x) < 1 else "0")
    r = run(runner, "grid", cfg("w"), "--fn", "w", "--lo", "0", "--hi", "2", "--step", "1/100", "--exact")
    header, rows, skipped = cli.read_grid_csv(r.stdout)
    assert header == ["v1", "value", "exact"] and skipped == 3
    for x, _, exact in rows:
        t = Fraction(x)
        assert Fraction(exact) == Fraction(1, 2) - (t - int(t))
    assert r.stdout.endswith("# skipped=3\n")


def test_grid_decimal_format():
    assert cli.format_decimal(Fraction(1, 3)) == "0.333333333333"
    assert cli.format_decimal(Fraction(-7, 6)) == "-1.16666666667"
    assert cli.format_decimal(Fraction(0)) == "0"
    assert cli.format_decimal(Fraction(5, 2)) == "2.5"


def test_grid_round_trip(runner, cfg, tmp_path):
    out = tmp_path / "g.csv"
    args = ["grid", cfg("A2"), "--fn", "theorem1-diff", "--poly", "v1^2", "--lo", "0,0", "--hi", "1,1", "--step", "1/8", "--exact"]
    assert run(runner, *args, "--out", out).exit_code == 0
    text = out.read_text()
    assert cli.reemit_grid_csv(text) == text
    out2 = tmp_path / "g2.csv"
    run(runner, *args, "--out", out2)
    assert out2.read_bytes() == out.read_bytes()
    r = run(runner, "grid", cfg("A2"), "--fn", "w", "--lo", "0,0", "--hi", "1,1", "--step", "1/7")
    assert cli.reemit_grid_csv(r.stdout) == r.stdout


def test_grid_quotient_and_bad_step(runner, cfg):
    r = run(runner, "grid", cfg("A2"), "--fn", "w-quotient", "--s", "0", "--lo", "0,0", "--hi", "1,1", "--step", "1/5")
    assert r.exit_code == 0
    assert run(runner, "grid", cfg("A2"), "--fn", "w-quotient", "--lo", "0,0", "--hi", "1,1", "--step", "1/5").exit_code == 2
    assert run(runner, "grid", cfg("w"), "--fn", "box", "--lo", "0", "--hi", "1", "--step", "0").exit_code == 2

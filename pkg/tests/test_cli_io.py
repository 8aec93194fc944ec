import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torickato import cli
from torickato.degenerations import nakamura_fan
from torickato.document import (DocumentError, fan_to_dict, fixture_names, fixture_text, load,
                                load_fixture, parse, parse_fan, serialize)
from torickato.fans import Fan, fan_validate, orthant_fan
from torickato.generators import random_kato_data
from torickato.kato import Kind, validate_kato_data
from torickato.render import render_svg


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_parse_and_validate(name):
    x = load_fixture(name)
    if isinstance(x, Fan):
        assert fan_validate(x).valid
    else:
        assert validate_kato_data(x).valid


@pytest.mark.parametrize("name", fixture_names())
def test_round_trip(name):
    x = load_fixture(name)
    text = serialize(x)
    assert load(text) == x
    assert serialize(load(text)) == text


@given(st.integers(0, 10**9), st.sampled_from([2, 3]))
@settings(max_examples=15, deadline=None)
def test_round_trip_random(seed, n):
    d = random_kato_data(random.Random(seed), n, with_ell=True)
    text = serialize(d)
    assert parse(text) == d
    assert serialize(parse(text)) == text


def test_fig2_document():
    d = load_fixture("fig2")
    assert d.kato.P == {0} and d.kind is Kind.HYPERBOLIC


def test_hopf_document():
    text = json.dumps({"dim": 2, "modification": {"type": "star_script", "rays": []},
                       "tau_A": {"A": [[0, 1], [1, 0]]}})
    assert parse(text).kind is Kind.HOPF


def test_indices_into_script_rays():
    text = json.dumps({"dim": 2, "modification": {"type": "star_script", "rays": [[1, 1]]},
                       "tau_A": [2, 1]})
    assert parse(text).A == ((1, 0), (1, 1))


def test_lossy_ell():
    base = json.loads(fixture_text("inoue_a"))
    del base["ell"]
    base["ell_lossy"] = [[0.0, 1.0], [0.5, 1.0]]
    d = parse(json.dumps(base))
    assert not d.ell_exact and str(d.ell[1].re) == "1/2"
    assert "ell_lossy" in serialize(d)


@pytest.mark.parametrize("text,field", [
    ("{\"dim\": 2,", ""),
    ("{\"dim\": 0}", "dim"),
    ("{\"dim\": 2, \"modification\": {\"type\": \"weird\"}, \"tau_A\": [0, 1]}", "modification.type"),
    ("{\"dim\": 2, \"modification\": {\"type\": \"star_script\", \"rays\": [[1, 1, 1]]}, \"tau_A\": [0, 1]}",
     "modification.rays[0]"),
    ("{\"dim\": 2, \"modification\": {\"type\": \"star_script\", \"rays\": [[1, 1]]}, \"tau_A\": [0, 1],"
     " \"ell\": [[\"x\", \"1\"], [\"0\", \"1\"]]}", "ell[0][0]"),
])
def test_syntax_errors_name_the_field(text, field):
    with pytest.raises(DocumentError) as e:
        parse(text)
    assert e.value.field == field
    if not field:
        assert e.value.line == 1


def test_semantic_errors_delegate_to_validation():
    text = json.dumps({"dim": 2, "modification": {"type": "star_script", "rays": [[1, 1]]},
                       "tau_A": {"A": [[1, 0], [0, 1]]}})
    with pytest.raises(DocumentError, match="invalid Kato data"):
        parse(text)
    assert not validate_kato_data(parse(text, validate=False)).valid


def test_fan_document():
    F = orthant_fan(3)
    assert parse_fan(json.dumps(fan_to_dict(F))) == F


def test_render_orthant_triangle():
    svg = render_svg(orthant_fan(3))
    assert svg.count("<polygon") == 1
    for label in ("e₁", "e₂", "e₃"):
        assert label in svg


def test_render_fig1_labels():
    svg = render_svg(load_fixture("fig1").fan)
    for label in ("(1,1,1)", "(2,2,1)", "(2,1,2)", "(3,2,1)", "(2,1,1)", "(3,2,2)"):
        assert label in svg
    assert "(5,3,3)" not in svg
    assert svg.count("<polygon") == 13


def test_render_planar_sectors_and_determinism():
    S = nakamura_fan(load_fixture("inoue_hirzebruch")).central_fiber
    svg = render_svg(S)
    assert svg.count("<path") == 6
    assert svg == render_svg(S)
    assert render_svg(load_fixture("fig1").fan) == render_svg(load_fixture("fig1").fan)


def test_render_rejects_high_dimension():
    with pytest.raises(ValueError, match="n = 4"):
        render_svg(load_fixture("nonlck4").fan)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "fixture_fig2")
    assert code == 0
    assert "betti: [1, 1, 2, 0, 2, 1, 1]" in out
    assert "euler characteristic: 4" in out
    assert "h^1,1 = 2" in out


def test_cli_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", "fixture_fig2", "--json")
    data = json.loads(out)
    assert data["betti"] == [1, 1, 2, 0, 2, 1, 1] and data["sharpD"] == 2


def test_cli_iso(capsys):
    code, out, _ = run(capsys, "iso", "fixture_inoue_a", "fixture_inoue_b")
    assert code == 0 and out.startswith("No: ℓ₂ − m₂ ∉ Z")
    code, out, _ = run(capsys, "iso", "fixture_fig2", "fixture_fig2")
    assert code == 0 and out.startswith("Yes")


def test_cli_iso_unknown_exit_code(capsys):
    code, out, _ = run(capsys, "iso", "fixture_fig3", "fixture_fig3", "--coeff-bound", "0")
    assert code in (0, 2)
    if code == 2:
        assert out.startswith("Unknown")


def test_cli_render(tmp_path, capsys):
    out = tmp_path / "fig1.svg"
    code, _, _ = run(capsys, "render", "fixture_fig1", "--out", str(out))
    assert code == 0 and out.read_text().startswith("<?xml")


def test_cli_errors(capsys, tmp_path):
    assert run(capsys, "invariants", "fixture_fig2", "--bogus")[0] == 1
    assert run(capsys, "invariants", "fixture_nope")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{\"dim\": 2,")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1 and "line 1" in err
    assert run(capsys, "render", "fixture_nonlck4")[0] == 1


def test_cli_validate_invalid_data(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"dim": 2, "modification": {"type": "star_script", "rays": [[1, 1]]},
                             "tau_A": {"A": [[1, 0], [0, 1]]}}))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and "invalid" in out


@pytest.mark.parametrize("argv", [
    ["validate", "fixture_oda"],
    ["classify", "fixture_fig2", "--vector", "0,-1,0"],
    ["census", "fixture_fig1", "--depth", "2"],
    ["degenerate", "fixture_inoue_hirzebruch", "--window", "1"],
    ["degenerate", "fixture_fig2", "--u", "auto", "--window", "1"],
    ["degenerate", "fixture_inoue_a", "--u", "auto"],
    ["collapse", "fixture_fig2", "-l", "-1", "-m", "1"],
    ["power", "fixture_inoue_hirzebruch", "--k", "3"],
    ["export", "fixture_fig1", "--fan"],
    ["projective", "fixture_p3"],
])
def test_cli_subcommands_succeed(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out


def test_cli_power_output_parses(capsys):
    _, out, _ = run(capsys, "power", "fixture_inoue_a", "--k", "2")
    assert parse(out).A == ((1, 2), (0, 1))

import importlib
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distdeg.cli.instance import parse, parse_text, render_instance
from distdeg.diffext.report import VerificationReport
from distdeg.errors import ParseError

from conftest import fixture_path

cli = importlib.import_module("distdeg.cli.main")

DD = ["e1", "e1a", "e2", "e3", "e4", "e5", "trivial"]
LAT = ["diag", "companion", "conjugate"]


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parsing -------------------------------------------------------------------------------


def test_worked_example_structure():
    inst = parse(fixture_path("e1.dd"))
    P = inst.presentation
    assert [g.kind for g in P.gens] == ["transcendental", "transcendental"]
    assert len(P.ext) == 1


def test_empty_file():
    with pytest.raises(ParseError) as exc:
        parse_text("")
    assert (exc.value.line, exc.value.col) == (1, 1)
    with pytest.raises(ParseError) as exc:
        parse_text("# only a comment\n\n")
    assert (exc.value.line, exc.value.col) == (1, 1)


def test_minpoly_symbols():
    from distdeg.diffext.power import symbols_of

    inst = parse_text('gens {\n  a = transcendental\n}\next {\n  w = "X^2 - a^2 - 1"\n}\nsigma {\n  a = "w"\n}\n')
    assert symbols_of(inst.presentation.ext[0][1]) == {"X", "a"}


@pytest.mark.parametrize(
    "text,line",
    [
        ("gens {\n  a = transcendental\n}\nsigma {\n  a = \"w\"\n}\n", 5),  # undeclared symbol
        ("gens {\n  a = transcendental\n  colour = blue\n}\n", 3),  # unknown kind
        ("gens {\n  a = transcendental\n}\nsigma {\n  a = \"a + 1\"\n}\nflavour {\n}\n", 7),  # unknown section
        ("gens {\n  a = transcendental\n", 3),  # unterminated block
        ("gens {\n  a = transcendental\n}\nsigma {\n  a = \"a +\"\n}\n", 5),  # bad expression
        ("gens {\n  a = transcendental\n}\nsigma {\n  a = \"a + 1\"\n}\noptions {\n  depth = 3\n}\n", 8),  # unknown key
        ("lattice {\n  prime = 4\n  dim = 1\n}\nalpha {\n  row = \"1\"\n}\n", 2),  # not a prime
    ],
)
def test_parse_errors_carry_locations(text, line):
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert exc.value.line == line


@pytest.mark.parametrize("name", [f"{n}.dd" for n in DD] + [f"{n}.lat" for n in LAT] + ["broken.dd"])
def test_round_trip(name):
    inst = parse(fixture_path(name))
    text = render_instance(inst)
    again = parse_text(text)
    assert again == inst
    assert render_instance(again) == text


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([2, 3, 5, 7]),
    st.lists(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=8), min_size=2, max_size=2), min_size=2, max_size=2),
)
def test_lattice_round_trip_random(p, rows):
    text = "lattice {\n  prime = %d\n  dim = 2\n}\nalpha {\n%s}\n" % (
        p, "".join(f'  row = "{", ".join(str(x) for x in r)}"\n' for r in rows)
    )
    inst = parse_text(text)
    assert parse_text(render_instance(inst)) == inst


# -- commands and exit codes -----------------------------------------------------------------


def test_invariants_worked_example(capsys):
    code, out, _ = run_cli(capsys, "invariants", fixture_path("e1.dd"), "--block", "a")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["dd"] == "1" and doc["result"]["ld"] == "2"
    assert doc["result"]["block"] == ["a"]
    assert doc["schema_version"] == "1"


def test_scale_diag(capsys):
    code, out, _ = run_cli(capsys, "scale", fixture_path("diag.lat"))
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["scale"] == "2" and doc["result"]["modular_function"] == "1"


def test_validate_broken(capsys):
    code, out, err = run_cli(capsys, "validate", fixture_path("broken.dd"))
    doc = json.loads(out)
    assert code == 2
    assert doc["error"]["type"] == "InconsistentPresentation"
    assert "splits" in doc["error"]["certificate"]
    assert "InconsistentPresentation" in err


def test_budget_exhausted(capsys):
    code, out, _ = run_cli(capsys, "invariants", fixture_path("e2.dd"), "--cap", "4")
    assert code == 3
    assert json.loads(out)["error"]["type"] == "DimensionBlowup"
    code, out, _ = run_cli(capsys, "scale", fixture_path("diag.lat"), "--kmax", "2")
    assert code == 3 and json.loads(out)["error"]["type"] == "NonStabilized"


def test_kind_mismatch_and_missing_file(capsys):
    code, _, _ = run_cli(capsys, "scale", fixture_path("e1a.dd"))
    assert code == 2
    code, _, _ = run_cli(capsys, "tidy", fixture_path("diag.lat"))
    assert code == 2
    code, _, err = run_cli(capsys, "validate", fixture_path("nope.dd"))
    assert code == 2 and "cannot read" in err


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.dd"
    bad.write_text("")
    code, out, _ = run_cli(capsys, "validate", str(bad))
    assert code == 2 and json.loads(out)["error"]["type"] == "ParseError"


def test_property_failure_exit(capsys, monkeypatch):
    def failing(*args, **kwargs):
        rep = VerificationReport()
        rep.check("forced", 1, 2)
        return rep

    monkeypatch.setattr(cli, "lattice_suite", failing)
    code, out, _ = run_cli(capsys, "suite", fixture_path("diag.lat"))
    assert code == 1 and json.loads(out)["passed"] is False


def test_text_format(capsys):
    code, out, _ = run_cli(capsys, "tidy", fixture_path("e3.dd"), "--format", "text")
    assert code == 0
    assert "result.polynomials[0]: X^2 - t - 2" in out


@pytest.mark.parametrize("name", ["e1a.dd", "e2.dd", "e3.dd", "trivial.dd", "diag.lat", "companion.lat", "conjugate.lat"])
def test_suite_exit_codes(capsys, name):
    code, out, _ = run_cli(capsys, "suite", fixture_path(name))
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert all(r["passed"] for r in doc["result"]["records"])


def test_byte_determinism():
    cmd = [sys.executable, "-m", "distdeg.cli.main", "suite", fixture_path("e2.dd"), "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    doc = json.loads(a)
    assert doc["seed"] == 3 and len(doc["input_digest"]) == 64

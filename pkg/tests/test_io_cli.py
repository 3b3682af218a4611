import json
import random
import subprocess
import sys

import pytest

from lodaylab import io
from lodaylab.cli import main
from lodaylab.fixtures import dgloda, f1, loday_sequence, random_nonlinear, write_fixtures
from lodaylab.grading import InputError
from lodaylab.homotopy import projection

from helpers import rand_map, rand_morphism, rand_seq, rand_space


@pytest.fixture
def fx(tmp_path):
    write_fixtures(tmp_path)
    return tmp_path


def test_fixture_files_are_canonical(fx):
    for path in sorted(fx.glob("*.json")):
        text = path.read_text()
        assert io.canonical(json.loads(text)) == text, path.name


def test_random_round_trips():
    rng = random.Random(0)
    for _ in range(20):
        V = rand_space(rng, rng.choice((1, 2)), 3)
        m = rand_map(rng, V, rng.randint(-1, 2))
        assert io.multimap_from_json(json.loads(json.dumps(io.multimap_to_json(m))), V) == m
        s = rand_seq(rng, V, None, 3)
        doc = io.structure_document(s)
        text = io.dumps(doc)
        assert io.canonical(json.loads(text)) == text
        f = rand_morphism(rng, V, V, 2)
        text = io.dumps(io.morphism_to_json(f))
        assert io.morphism_from_json(json.loads(text)) == f
        assert io.canonical(json.loads(text)) == text


@pytest.mark.parametrize("raw", [
    [],
    {"map": {}},
    {"space": {"n": 1, "basis": [{"name": "x", "degree": [0, 1]}]}},
    {"space": {"n": 1, "basis": [{"name": "x", "degree": [0]}]},
     "map": {"weight": [0], "arity_index": 1, "entries": [{"args": ["x"], "value": []}]}},
    {"space": {"n": 1, "basis": [{"name": "x", "degree": [0]}]},
     "map": {"weight": [0], "arity_index": 0, "entries": [{"args": ["x"], "value": [{"basis": "q", "coeff": "1"}]}]}},
    {"space": {"n": 1, "basis": [{"name": "x", "degree": [0]}]},
     "map": {"weight": [0], "arity_index": 0, "entries": [{"args": ["x"], "value": [{"basis": "x", "coeff": 0.5}]}]}},
    {"space": {"n": 1, "basis": [{"name": "x", "degree": [0]}]},
     "map": {"weight": [1], "arity_index": 0, "entries": [{"args": ["x"], "value": [{"basis": "x", "coeff": "1"}]}]}},
])
def test_malformed_documents(raw):
    with pytest.raises(InputError):
        io.parse_document(raw)


def test_read_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(InputError):
        io.read_json(bad)
    with pytest.raises(InputError):
        io.read_json(tmp_path / "missing.json")


# --- command line ----------------------------------------------------------------------------


def run(*argv):
    return main([str(a) for a in argv])


def test_check_commands(fx, capsys):
    assert run("check-loday", fx / "f1.json") == 0
    capsys.readouterr()
    assert run("check-loday", fx / "f1-broken.json", "--format", "json") == 1
    out = json.loads(capsys.readouterr().out)
    assert ["x", "x", "x"] in [f["triple"] for f in out["failures"]]
    assert run("check-lod-infinity", fx / "dgloda.json") == 0
    assert run("check-jacobi", fx / "dual-numbers-jacobi.json") == 0
    assert run("check-jacobi", fx / "dual-numbers-jacobi.json", "--kind", "poisson") == 1


def test_exit_code_two_on_bad_input(fx, tmp_path, capsys):
    assert run("no-such-command") == 2
    assert run("check-loday", tmp_path / "missing.json") == 2
    assert run("check-loday", fx / "f2.json") == 2
    assert run("cohomology", fx / "f1.json", "--weight-box", "a:b") == 2
    assert "error" in capsys.readouterr().err


def test_cohomology_json(fx, capsys):
    assert run("cohomology", fx / "f1.json", "--weight-box=-1:1", "--arity-max", "2", "--format", "json") == 0
    cells = json.loads(capsys.readouterr().out)["cells"]
    assert len(cells) == 3 * 4
    assert run("cohomology", fx / "f1.json", "--p-ary", "2", "--weight-box", "0") == 0


def test_bracket_and_coboundary_write_documents(fx, tmp_path):
    out = tmp_path / "out.json"
    assert run("bracket", fx / "f1.json", fx / "f1.json", "-o", out) == 0
    doc = io.load(out)
    assert doc["map"].is_zero()
    assert run("coboundary", fx / "f1.json", fx / "f1.json", "-o", out) == 0
    assert run("sequence-bracket", fx / "dgloda.json", fx / "dgloda.json", "-o", out) == 0
    assert io.load(out)["structure"].is_zero()


def test_gm_bracket_and_coproduct(fx, capsys):
    assert run("gm-bracket", fx / "dual-numbers-jacobi.json", fx / "dual-numbers-jacobi.json") == 0
    capsys.readouterr()
    assert run("coproduct", fx / "f3.json", "a", "a", "b") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert "+ a a ⊗ b" in lines
    assert run("coproduct", fx / "f3.json", "a", "q") == 2


def test_morphism_commands(fx, tmp_path):
    s = dgloda()
    F1 = loday_sequence(f1())
    proj = tmp_path / "proj.json"
    proj.write_text(io.dumps(io.morphism_to_json(projection(s.space, F1.space))))
    target = tmp_path / "F1.json"
    target.write_text(io.dumps(io.structure_document(F1)))
    assert run("morphism-check", proj, fx / "dgloda.json", target) == 0
    assert run("morphism-check", proj, target, target) == 2  # wrong source space
    out = tmp_path / "g.json"
    assert run("quasi-inverse", proj, fx / "dgloda.json", target, "-o", out) == 0
    assert io.load(out)["morphism"].source == F1.space
    assert run("minimal-model", fx / "dgloda.json", "-o", out) == 0
    assert json.loads(out.read_text())["corrections"] == {"2": "formula", "3": "formula", "4": "formula"}

    rng = random.Random(1)
    g = random_nonlinear(rng, s.space)
    gp = tmp_path / "g2.json"
    gp.write_text(io.dumps(io.morphism_to_json(g)))
    assert run("morphism-invert", gp, "-o", out) == 0
    assert run("conjugate", fx / "dgloda.json", gp, "-o", out) == 0
    conj = tmp_path / "conj.json"
    conj.write_text(out.read_text())
    assert run("morphism-check", gp, fx / "dgloda.json", conj) == 0


def test_deformation_commands(tmp_path):
    pi = f1()
    V = pi.space
    d = tmp_path / "d.json"
    doc = io.map_document(pi)
    doc["terms"] = [io.multimap_to_json(pi)]
    d.write_text(io.dumps(doc))
    assert run("deform-check", d) == 0
    assert run("obstruction", d) == 0
    rng = random.Random(2)
    chi = tmp_path / "chi.json"
    chi.write_text(io.dumps({"space": io.space_to_json(V), "chi": [io.multimap_to_json(rand_map(rng, V, 0, [0]))]}))
    out = tmp_path / "g.json"
    assert run("gauge", d, "--chi", chi, "--order", "3", "-o", out) == 0
    assert run("deform-check", out) == 0


def test_fixtures_command_and_module_entry(tmp_path):
    assert run("fixtures", "--dir", tmp_path / "fx") == 0
    assert (tmp_path / "fx" / "f1.json").exists()
    proc = subprocess.run([sys.executable, "-m", "lodaylab", "check-loday", str(tmp_path / "fx" / "f1.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "holds" in proc.stdout

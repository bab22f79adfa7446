import json

import pytest

from skewalg.cli import load_model, main, model_from_dict, model_to_dict

SE2 = {
    "version": 1,
    "base_coords": [],
    "frame": ["E1", "E2", "E3"],
    "params": [],
    "c": [{"i": 3, "j": 1, "k": 2, "expr": "1"}, {"i": 2, "j": 3, "k": 1, "expr": "1"}],
    "rho": [],
}

AFF1 = {
    "version": 1,
    "base_coords": [],
    "frame": ["e1", "e2"],
    "params": [],
    "c": [{"i": 1, "j": 2, "k": 2, "expr": "1"}],
    "rho": [],
    "subalgebroid": {"n0": 1, "m0": 0},
    "paths": {"const": {"base": [], "fiber": ["1"]}},
}

NONLIE = {
    "version": 1,
    "base_coords": [],
    "frame": ["e1", "e2", "e3"],
    "params": [],
    "c": [{"i": 1, "j": 2, "k": 3, "expr": "1"}, {"i": 1, "j": 3, "k": 1, "expr": "1"}],
    "rho": [],
}

LINE = {
    "version": 1,
    "base_coords": ["x"],
    "frame": ["e1"],
    "params": ["k"],
    "c": [],
    "rho": [{"i": 1, "a": 1, "expr": "k*x"}],
    "metric": ["2"],
}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_se2(tmp_path, capsys):
    code, out, _ = run(capsys, "check", write(tmp_path, "se2.json", SE2))
    assert code == 0
    assert out == "lie: true, almost_lie: true, modular_form: 0\n"


def test_check_nonlie_exits_one(tmp_path, capsys):
    code, out, _ = run(capsys, "check", write(tmp_path, "n.json", NONLIE))
    assert code == 1 and out.startswith("lie: false")


def test_modular_aff1(tmp_path, capsys):
    code, out, _ = run(capsys, "modular", write(tmp_path, "aff1.json", AFF1))
    assert code == 0 and out == "e^1\n"
    code, out, _ = run(capsys, "modular", "--relative", write(tmp_path, "aff1.json", AFF1))
    assert out.splitlines()[1] == "relative: -e^1"


def test_modular_relative_needs_subalgebroid(tmp_path, capsys):
    code, _, err = run(capsys, "modular", "--relative", write(tmp_path, "se2.json", SE2))
    assert code == 2 and "subalgebroid" in err


def test_sleigh_numeric(capsys):
    code, out, _ = run(capsys, "sleigh", "--m", "1", "--J", "2", "--a", "0.5", "--b", "1/3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"c^1_12 = {2 / 9:.17g}"
    assert lines[1] == f"c^2_12 = {2 / 27:.17g}"
    assert lines[2] == f"mod(D)_1 = {2 / 27:.17g}"
    assert lines[3] == f"mod(D)_2 = {-2 / 9:.17g}"


def test_sleigh_symbolic(capsys):
    code, out, _ = run(capsys, "sleigh")
    assert code == 0
    assert "mod(D) = (a*b*m/(J + a^2*m))*e^1 - (a*m/(J + a^2*m))*e^2" in out


def test_sleigh_metric_complement_flips_sign(capsys):
    _, out, _ = run(capsys, "sleigh", "--m", "1", "--J", "2", "--a", "0.5", "--b", "1/3", "--complement", "metric")
    assert out.splitlines()[0] == f"c^1_12 = {-2 / 9:.17g}"


def test_bracket_and_derham(tmp_path, capsys):
    path = write(tmp_path, "se2.json", SE2)
    code, out, _ = run(capsys, "bracket", path, "--x", "0,0,1", "--y", "1,0,0")
    assert code == 0 and out == "E2\n"
    code, out, _ = run(capsys, "derham", path, "--term", "1=1")
    assert code == 0 and out == "-e^2^e^3\n"
    code, _, _ = run(capsys, "derham", path)
    assert code == 2


def test_hamiltonian_from_metric(tmp_path, capsys):
    path = write(tmp_path, "line.json", LINE)
    code, out, _ = run(capsys, "hamiltonian", path, "--at", "k=1")
    assert code == 0
    assert out.splitlines()[0] == "H = 1/4*xi1^2"


def test_product(tmp_path, capsys):
    code, out, _ = run(capsys, "product", write(tmp_path, "a.json", AFF1), write(tmp_path, "b.json", SE2))
    assert code == 0
    assert "product_formula: true" in out and "dims: m=0 n=5" in out


def test_holonomy(tmp_path, capsys):
    code, out, _ = run(capsys, "holonomy", write(tmp_path, "aff1.json", AFF1))
    assert code == 0
    vals = dict(line.split(": ") for line in out.splitlines())
    assert abs(float(vals["ode_value"]) - 0.36787944117144233) <= 1e-10
    assert vals["agree"] == "true"


def test_holonomy_unknown_path(tmp_path, capsys):
    code, _, err = run(capsys, "holonomy", write(tmp_path, "aff1.json", AFF1), "--path", "nope")
    assert code == 2 and "unknown path" in err


def test_relation_identity(tmp_path, capsys):
    path = write(tmp_path, "aff1.json", AFF1)
    code, out, _ = run(capsys, "relation", path, path, "--map", "1,0;0,1")
    assert code == 0 and "agree: true" in out


def test_relation_not_a_morphism(tmp_path, capsys):
    path = write(tmp_path, "aff1.json", AFF1)
    code, out, _ = run(capsys, "relation", path, path, "--map", "0,1;1,0")
    assert code == 1 and out.startswith("morphism: violated")


def test_output_is_byte_identical(tmp_path, capsys):
    path = write(tmp_path, "aff1.json", AFF1)
    first = run(capsys, "holonomy", path)
    second = run(capsys, "holonomy", path)
    assert first == second


def test_dump_round_trip(tmp_path, capsys):
    path = write(tmp_path, "line.json", LINE)
    code, out, _ = run(capsys, "dump", path)
    assert code == 0
    again = model_from_dict(json.loads(out))
    assert model_to_dict(again) == model_to_dict(load_model(path))


@pytest.mark.parametrize(
    "patch,pointer",
    [
        ({"c": [{"i": 1, "j": 1, "k": 2, "expr": "1"}]}, "/c/0"),
        ({"c": [{"i": 1, "j": 2, "k": 2, "expr": "1 +"}]}, "/c/0/expr"),
        ({"rho": [{"i": 1, "a": 1, "expr": "1"}]}, "/rho/0"),
        ({"version": 2}, "/version"),
        ({"frame": []}, "/frame"),
    ],
)
def test_schema_errors(tmp_path, capsys, patch, pointer):
    doc = dict(AFF1, **patch)
    code, _, err = run(capsys, "check", write(tmp_path, "bad.json", doc))
    assert code == 2 and f"error: {pointer}" in err


def test_invalid_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "check", str(p))
    assert code == 2 and "invalid JSON" in err


def test_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2

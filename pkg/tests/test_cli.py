import json

from click.testing import CliRunner

from coverlens import fixtures
from coverlens.cli import main
from coverlens.covers import family_to_json
from coverlens.homothety import instance_to_json
from coverlens.spaces import space_to_json


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def test_validate_ok(tmp_path):
    space, _ = fixtures.five_point_line()
    path = write(tmp_path, "space.json", space_to_json(space))
    result = invoke("validate", "--space", path)
    assert result.exit_code == 0
    assert "valid" in result.output


def test_validate_rejects_bad_metric(tmp_path):
    doc = {"type": "matrix", "labels": ["a", "b", "c"],
           "distances": [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]]}
    path = write(tmp_path, "bad.json", doc)
    result = invoke("validate", "--space", path)
    assert result.exit_code == 2
    assert "triangle" in result.output


def test_compute_discrete_singleton(tmp_path):
    space = fixtures.discrete_space(4)
    fam = fixtures.singleton_cover(space)
    s = write(tmp_path, "space.json", space_to_json(space))
    c = write(tmp_path, "cover.json", family_to_json(fam))
    result = invoke("compute", "--space", s, "--cover", c)
    assert result.exit_code == 0
    assert "L = 1, mesh = 0" in result.output


def test_compute_box_with_plane_ambient(tmp_path):
    fam = fixtures.box_chain_family(fixtures.BOX_CHAIN_AMBIENT)
    s = write(tmp_path, "slice.json", space_to_json(fixtures.BOX_CHAIN_AMBIENT))
    c = write(tmp_path, "cover.json", family_to_json(fam))
    a = write(tmp_path, "subset.json",
              {"box": [["0", "1"], ["0", "1"], ["0", "0"]]})
    result = invoke("compute", "--space", s, "--cover", c, "--subset", a,
                    "--ambient", "line,line,0")
    assert result.exit_code == 0
    assert "L = 1/4" in result.output

    intrinsic = invoke("compute", "--space", s, "--cover", c, "--subset", a,
                       "--ambient", "0:1,0:1,0")
    assert "L = 3/8" in intrinsic.output

    full = invoke("compute", "--space", s, "--cover", c, "--subset", a)
    assert "L = 1/8" in full.output


def test_compute_ldiam_five_point_line(tmp_path):
    space, fam = fixtures.five_point_line()
    s = write(tmp_path, "space.json", space_to_json(space))
    c = write(tmp_path, "cover.json", family_to_json(fam))
    result = invoke("compute", "--space", s, "--cover", c, "--variant", "Ldiam")
    assert result.exit_code == 0
    assert "L_diam = 2" in result.output
    assert "bad set {1, 3}" in result.output


def test_compute_per_point_table(tmp_path):
    space, fam = fixtures.five_point_line()
    s = write(tmp_path, "space.json", space_to_json(space))
    c = write(tmp_path, "cover.json", family_to_json(fam))
    result = invoke("compute", "--space", s, "--cover", c, "--per-point", "--json")
    doc = json.loads(result.output)
    assert doc["per_point"]["0"] == "3"
    assert doc["value"] == "1"


def test_compute_uncovered_subset_exits_2(tmp_path):
    space, _ = fixtures.five_point_line()
    s = write(tmp_path, "space.json", space_to_json(space))
    c = write(tmp_path, "cover.json", {"members": [{"name": "U", "set": ["0", "1"]}]})
    result = invoke("compute", "--space", s, "--cover", c)
    assert result.exit_code == 2
    assert "witness" in result.output


def test_check_chain(tmp_path):
    space, fam = fixtures.five_point_line()
    s = write(tmp_path, "space.json", space_to_json(space))
    c = write(tmp_path, "cover.json", family_to_json(fam))
    a = write(tmp_path, "a.json", {"set": ["2"]})
    b = write(tmp_path, "b.json", {"set": ["1", "2", "3"]})
    result = invoke("check", "chain", "--space", s, "--cover", c,
                    "--subset-a", a, "--subset-b", b)
    assert result.exit_code == 0
    assert "L_A(U|A,A) = inf" in result.output
    assert "FAIL" not in result.output


def test_check_l_vs_ldiam(tmp_path):
    space = fixtures.discrete_space(4)
    fam = fixtures.singleton_cover(space)
    s = write(tmp_path, "space.json", space_to_json(space))
    c = write(tmp_path, "cover.json", family_to_json(fam))
    result = invoke("check", "l-vs-ldiam", "--space", s, "--cover", c)
    assert result.exit_code == 0
    assert "1 <= 1 <= 2  PASS" in result.output


def test_check_transport_modes(tmp_path):
    fx = fixtures.plane_embedding_fixture()
    i = write(tmp_path, "inst.json", instance_to_json(fx.instance))
    v = write(tmp_path, "subset.json", {"box": [["0", "1"], ["0", "1"]]})
    c = write(tmp_path, "cover.json", family_to_json(fx.family))
    good = invoke("check", "transport", "--instance", i, "--subset", v,
                  "--cover", c, "--ambient-mode", "image")
    assert good.exit_code == 0
    bad = invoke("check", "transport", "--instance", i, "--subset", v,
                 "--cover", c, "--ambient-mode", "codomain")
    assert bad.exit_code == 1
    assert "FAIL" in bad.output


def test_reproduce_all_examples():
    for example in ("discrete", "box-chain", "counterexample-44",
                    "corrected-44", "interval-tail", "ball-tail"):
        result = invoke("reproduce", example)
        assert result.exit_code == 0, f"{example}: {result.output}"
        assert "reproduced" in result.output


def test_reproduce_json_is_deterministic():
    a = invoke("reproduce", "box-chain", "--json")
    b = invoke("reproduce", "box-chain", "--json")
    assert a.output == b.output
    doc = json.loads(a.output)
    assert doc["passed"] is True
    assert doc["rows"][0] == {"quantity": "L_A(U|A,A)", "expected": "3/8", "got": "3/8"}


def test_fuzz_gate(tmp_path):
    result = invoke("fuzz", "--trials", "24", "--seed", "5",
                    "--results-dir", str(tmp_path))
    assert result.exit_code == 0
    again = invoke("fuzz", "--trials", "24", "--seed", "5",
                   "--results-dir", str(tmp_path))
    assert result.output == again.output
    assert not list(tmp_path.glob("*.json"))  # no violations, no reproducers


def test_bad_input_exits_2(tmp_path):
    missing = invoke("compute", "--space", str(tmp_path / "nope.json"),
                     "--cover", str(tmp_path / "nope2.json"))
    assert missing.exit_code == 2

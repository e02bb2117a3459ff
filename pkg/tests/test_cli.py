"""Command-line surface: round trips, formats, exit codes."""

import json

from floerslice.algebra import canonical_form
from floerslice.cli import main
from floerslice.models import build_model


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_t25(capsys):
    code, out, _ = run(capsys, "complex", "build", "T(2,5)")
    assert code == 0
    data = json.loads(out)
    assert len(data["generators"]) == 5


def test_width_d(capsys):
    code, out, _ = run(capsys, "--format", "table", "complex", "width", "D")
    assert code == 0 and out.strip() == "3"


def test_reduce_cancellable_pair(tmp_path, capsys):
    pair = {
        "label": "pair",
        "shift_tag": [["const", 0]],
        "generators": [
            {"id": "a", "gr": 1, "i": 0, "j": 0},
            {"id": "b", "gr": 0, "i": 0, "j": 0},
        ],
        "differential": [{"from": "a", "to": "b", "upow": 0}],
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(pair))
    code, out, _ = run(capsys, "complex", "reduce", str(path))
    assert code == 0
    assert json.loads(out)["generators"] == []


def test_round_trip_canonical(tmp_path, capsys):
    # build X -o f.json then show f.json reproduces the canonical form exactly
    out_path = tmp_path / "c.json"
    code, _, _ = run(capsys, "-o", str(out_path), "complex", "build", "T(2,3)")
    assert code == 0
    code, shown, _ = run(capsys, "complex", "show", str(out_path))
    assert code == 0
    from floerslice.algebra import BifilteredComplex

    reloaded = BifilteredComplex.from_json(json.loads(shown))
    assert canonical_form(reloaded) == canonical_form(build_model("T(2,3)"))
    code, canon_out, _ = run(capsys, "complex", "canon", str(out_path))
    assert code == 0
    assert json.loads(canon_out) == json.loads(canonical_form(build_model("T(2,3)")))


def test_slices(capsys):
    code, out, _ = run(capsys, "complex", "slices", "D", "0")
    assert code == 0
    assert json.loads(out)["ranks"] == {"-2": 4, "-1": 3}


def test_tensor(capsys):
    code, out, _ = run(capsys, "complex", "tensor", "T(2,3)", "T(2,3)")
    assert code == 0
    assert len(json.loads(out)["generators"]) == 9


def test_refilter_normalize(capsys):
    code, out, _ = run(capsys, "refilter", "U", "4", "1", "--normalize")
    assert code == 0
    gen = json.loads(out)["generators"][0]
    assert (gen["i"], gen["j"]) == (0, -1)


def test_refilter_doubled_odd_m(capsys):
    code, out, _ = run(capsys, "refilter", "m(2*D)", "8", "1",
                       "--normalize", "--reduce")
    assert code == 0
    data = json.loads(out)
    gens = [(g["i"], g["j"]) for g in data["generators"]]
    assert (0, 0) in gens


def test_refilter_out_of_range_exit2(capsys):
    code, _, err = run(capsys, "refilter", "U", "2", "5")
    assert code == 2
    assert "extend" in err


def test_ddiff(capsys):
    code, out, _ = run(capsys, "--format", "table", "ddiff", "4", "1")
    assert code == 0 and out.strip() == "-2"
    code, out, _ = run(capsys, "--format", "table", "ddiff", "4", "0")
    assert code == 0 and out.strip() == "0"


def test_ddiff_range_exit2(capsys):
    code, _, err = run(capsys, "ddiff", "4", "2")
    assert code == 2


def test_obstruct_sieve(capsys):
    code, out, _ = run(capsys, "obstruct", "sieve", "--count", "2")
    assert code == 0
    fam = json.loads(out)
    assert fam[0]["n"] == 2 and fam[0]["value"] == 17


def test_obstruct_roots(capsys):
    code, out, _ = run(capsys, "--format", "table", "obstruct", "roots", "65")
    assert code == 0 and out.split() == ["8", "18", "47", "57"]


def test_obstruct_metabolizers(capsys):
    code, out, _ = run(capsys, "obstruct", "metabolizers", "17")
    assert code == 0
    assert json.loads(out)["generators"] == [[1, 4], [1, 13]]


def test_obstruct_choose_kn(capsys):
    code, out, _ = run(capsys, "obstruct", "choose-kn", "3")
    assert code == 0
    data = json.loads(out)
    assert data["k_n"] == 1 and len(data["S_b"]) <= 4


def test_obstruct_table(tmp_path, capsys):
    path = tmp_path / "kn_table.json"
    code, _, _ = run(capsys, "-o", str(path), "obstruct", "table", "--max-n", "4")
    assert code == 0
    table = json.loads(path.read_text())
    assert set(table) == {"2", "3", "4"}


def test_invalid_expression_exit2(capsys):
    code, _, err = run(capsys, "complex", "build", "Q(1)")
    assert code == 2 and "error" in err


def test_determinism(capsys):
    a = run(capsys, "complex", "build", "D#D")[1]
    b = run(capsys, "complex", "build", "D#D")[1]
    assert a == b


def test_obstruct_table_parallel(tmp_path, capsys):
    path = tmp_path / "par.json"
    code, _, _ = run(capsys, "-o", str(path), "obstruct", "table",
                     "--max-n", "4", "--jobs", "2")
    assert code == 0
    seq = run(capsys, "obstruct", "table", "--max-n", "4")[1]
    assert json.loads(path.read_text()) == json.loads(seq)

import json
from pathlib import Path

import pytest

from gradsum.cli import MATCHFAIL, OK, OUT_OF_STEPS, PARSE_ERROR, TYPE_ERROR, main, parse_ctx
from gradsum.syntax import ParseError, parse_type

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def src(tmp_path):
    def write(text, name="prog.gsum"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_and_synth(capsys, src):
    code, out, _ = run(capsys, "check", src("inj1 ()"), "--type", "Unit +1 Unit")
    assert code == OK and out.strip() == "<= Unit +1 Unit"
    code, out, _ = run(capsys, "synth", src("(inj1 () : Unit +? Unit)"))
    assert code == OK and out.strip() == "=> Unit +? Unit"


def test_check_with_context_and_derivation(capsys, src):
    code, out, _ = run(capsys, "check", src("f x"), "--type", "Unit",
                       "--ctx", "f : (Unit +2 Unit) -> Unit, x : Unit +? Unit", "--emit-derivation", "json")
    assert code == OK
    d = json.loads(out)
    assert d["rule"] == "ChkCSub" and d["dir"] == "check"
    assert {"rule", "ctx", "expr", "dir", "type", "children"} <= set(d)


def test_exit_codes(capsys, src):
    assert run(capsys, "synth", src("inj1 ("))[0] == PARSE_ERROR
    code, _, err = run(capsys, "synth", src("()"))
    assert code == TYPE_ERROR and "type error" in err
    assert run(capsys, "check", src("inj1 ()"), "--type", "Unit +2 Unit")[0] == TYPE_ERROR
    assert run(capsys, "synth", "/no/such/file.gsum")[0] == PARSE_ERROR


def test_fragment(capsys, src):
    assert run(capsys, "fragment", "--static", src("inj1 ()"), "--type", "Unit +1 Unit")[0] == OK
    code, _, err = run(capsys, "fragment", "--static", src("inj1 ()"), "--type", "Unit +? Unit")
    assert code == TYPE_ERROR and "fragment" in err
    assert run(capsys, "fragment", "--dynamic", src("inj1 ()"), "--type", "Unit +? Unit")[0] == OK


def test_elaborate(capsys, src):
    path = src("(x : Unit +2 Unit)")
    code, out, _ = run(capsys, "elaborate", path, "--ctx", "x : Unit +? Unit")
    assert code == OK and out.startswith("<+ => +2>")
    code, out, _ = run(capsys, "elaborate", path, "--ctx", "x : Unit +? Unit", "--saturate", "--emit", "json")
    j = json.loads(out)
    assert j["type"] == "Unit +2 Unit" and j["target_type"] == "Unit +2 Unit" and j["mode"] == "saturating"


def test_run_golden_programs(capsys):
    code, out, _ = run(capsys, "run", str(GOLDEN / "migrate_f2_xq_inj2.gsum"))
    assert code == OK and out.startswith("value ()")
    code, out, _ = run(capsys, "run", str(GOLDEN / "migrate_f2_xq_inj1.gsum"), "--trace")
    assert code == MATCHFAIL
    lines = out.splitlines()
    assert lines[0].lstrip().startswith("start") and lines[-1] == "matchfail after 6 steps"
    assert len(lines) == 8
    code, out, _ = run(capsys, "run", str(GOLDEN / "migrate_f2_xq_inj2.gsum"), "--max-steps", "1")
    assert code == OUT_OF_STEPS


def test_relations(capsys, tmp_path):
    code, out, _ = run(capsys, "relations", "--table", "subsum")
    lines = out.splitlines()
    assert code == OK and len(lines) == 9
    code, out, _ = run(capsys, "relations", "--table", "cast-class", "--json", "--plot", str(tmp_path / "cc.png"))
    j = json.loads(out)
    assert j["rows"] == ["+", "+1", "+2"] and len(j["cells"]) == 3
    assert (tmp_path / "cc.png").stat().st_size > 0


def test_fuzz(capsys, tmp_path):
    code, out, _ = run(capsys, "fuzz", "--suite", "fragments", "--count", "20", "--enum-size", "3",
                       "--size", "10", "--json", "--plot", str(tmp_path))
    assert code == OK
    j = json.loads(out)
    assert j["suite"] == "fragments" and j["failures"] == []
    assert (tmp_path / "fragments-coverage.png").exists()
    code, out, _ = run(capsys, "fuzz", "--suite", "relations-oracle", "--count", "5")
    assert code == OK and "relations-oracle" in out


def test_parse_ctx():
    g = parse_ctx("x : Unit +? Unit, y : Unit -> Unit")
    assert g["x"] == parse_type("Unit +? Unit") and g["y"] == parse_type("Unit -> Unit")
    with pytest.raises(ParseError):
        parse_ctx("x Unit")

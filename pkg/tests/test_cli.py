"""Problem-file parsing, command execution, exit codes, determinism."""

from pathlib import Path

import pytest

from groupoidalg.cli import format_problem, main, parse, run
from groupoidalg.errors import ProblemFileError
from groupoidalg.groupoid import pair_groupoid
from groupoidalg.linalg import GF, QQ
from groupoidalg.twist import Cocycle

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def write(tmp_path, text, name="test.gkd"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_parse_empty_file_missing_field(tmp_path):
    path = write(tmp_path, "")
    with pytest.raises(ProblemFileError, match="missing \\[field\\]"):
        parse(path)


def test_parse_pair2_fixture_roundtrip():
    problem = parse(str(FIXTURES / "pair2.gkd"))
    expected = pair_groupoid(2)
    g = problem.groupoid
    assert g.n_arrows == expected.n_arrows
    assert g.units == expected.units
    assert g.src == expected.src
    assert g.tgt == expected.tgt
    assert g.inv == expected.inv
    assert g.comp == expected.comp
    assert g.validate() is None


def test_format_parse_roundtrip(tmp_path):
    g = pair_groupoid(3)
    c = Cocycle.trivial(g, GF(5))
    text = format_problem(GF(5), g, c)
    problem = parse(write(tmp_path, text))
    assert problem.groupoid.comp == g.comp
    assert problem.field.p == 5


def test_zero_cocycle_value_is_input_error(tmp_path):
    base = format_problem(QQ, pair_groupoid(2), None)
    path = write(tmp_path, base + "[cocycle]\n1 2 0\n")
    text, code = run("validate", path)
    assert code == 2
    assert "zero" in text.lower() or "0" in text


def test_unknown_section_reports_line(tmp_path):
    path = write(tmp_path, "[field] Q\n[wat]\n")
    with pytest.raises(ProblemFileError, match="unknown section"):
        parse(path)


def test_sections_out_of_order(tmp_path):
    path = write(tmp_path, "[units] 0\n[field] Q\n")
    with pytest.raises(ProblemFileError, match="out of order"):
        parse(path)


def test_dangling_reference(tmp_path):
    path = write(
        tmp_path,
        "[field] Q\n[units] 0\n[arrows]\n0 0 0 7\n",
    )
    with pytest.raises(ProblemFileError, match="dangling|out of range"):
        parse(path)


def test_duplicate_arrow_id(tmp_path):
    path = write(
        tmp_path,
        "[field] Q\n[units] 0\n[arrows]\n0 0 0 0\n0 0 0 0\n",
    )
    with pytest.raises(ProblemFileError, match="duplicate"):
        parse(path)


def test_validate_corrupted_table_exits_one(tmp_path):
    g = pair_groupoid(2)
    text = format_problem(QQ, g, None)
    # corrupt one inv entry
    lines = text.split("\n")
    idx = lines.index("[arrows]") + 2
    toks = lines[idx].split()
    toks[3] = str((int(toks[3]) + 3) % 4)
    lines[idx] = " ".join(toks)
    path = write(tmp_path, "\n".join(lines))
    out, code = run("validate", path)
    assert code == 1
    assert "groupoid_axioms: FAIL" in out


def test_invalid_cocycle_identity_exits_one(tmp_path):
    original = (FIXTURES / "v4quat.gkd").read_text(encoding="utf-8")
    # flip one sign at a non-unit pair: still parseable, no longer a cocycle
    assert "\n1 1 -1\n" in original
    path = write(tmp_path, original.replace("\n1 1 -1\n", "\n1 1 1\n", 1))
    out, code = run("validate", path)
    assert code == 1
    assert "def_2_5: FAIL" in out
    assert "cocycle-identity" in out


def test_verify_all_pair2():
    out, code = run("verify", str(FIXTURES / "pair2.gkd"), ["all"])
    assert code == 0
    assert "dim B: 4" in out
    assert "center dim: 1" in out
    assert "thm_8_4: PASS" in out
    assert "FAIL" not in out


def test_isotropy_command_on_gb():
    out, code = run("isotropy", str(FIXTURES / "gb3_sign.gkd"), ["0"])
    assert code == 0
    assert "dim B(0,0): 2" in out
    assert "thm_13_6: PASS" in out


def test_unknown_command():
    out, code = run("nonsense", str(FIXTURES / "pair2.gkd"))
    assert code == 2


def test_unknown_suite():
    out, code = run("verify", str(FIXTURES / "pair2.gkd"), ["wobble"])
    assert code == 2


def test_missing_file():
    out, code = run("validate", "/nonexistent/path.gkd")
    assert code == 2


def test_reports_are_byte_deterministic():
    for fixture in sorted(FIXTURES.glob("*.gkd")):
        a, code_a = run("verify", str(fixture), ["all"])
        b, code_b = run("verify", str(fixture), ["all"])
        assert a == b
        assert code_a == code_b


def test_element_section_and_validate(tmp_path):
    g = pair_groupoid(2)
    text = format_problem(QQ, g, None)
    path = write(tmp_path, text + "[element] f\n1 2/3\n2 -1\n")
    out, code = run("validate", path)
    assert code == 0
    assert "element f support: 1 2" in out


def test_module_commands(tmp_path):
    g = pair_groupoid(2)
    field = GF(3)
    text = format_problem(field, g, None)
    # the isotropy algebra at unit 0 is one dimensional: the scalar field
    text += "[module] triv 1 isotropy:0\n" + "1\n"
    # column module over B: action of arrow (i,j) maps e_j to e_i
    rows = []
    for a in range(4):
        i, j = divmod(a, 2)
        mat = [[0, 0], [0, 0]]
        mat[i][j] = 1
        rows.extend(" ".join(str(v) for v in r) for r in mat)
    text += "[module] col 2 B\n" + "\n".join(rows) + "\n"
    path = write(tmp_path, text)

    out, code = run("induce", path, ["0", "triv"])
    assert code == 0
    assert "thm_8_4: PASS" in out

    out, code = run("restrict", path, ["0", "col"])
    assert code == 0
    assert "dim: 1" in out
    assert "thm_10_1: PASS" in out

    out, code = run("germs", path, ["col"])
    assert code == 0
    assert "prop_12_7: PASS" in out


def test_effros_hahn_and_q1215_commands():
    out, code = run("effros-hahn", str(FIXTURES / "gb3_gf2.gkd"))
    assert code == 0
    assert "thm_12_14_i: PASS" in out
    assert "thm_12_14_ii: PASS" in out

    out, code = run("q1215", str(FIXTURES / "gb3_gf2.gkd"))
    assert code == 0
    assert "q_12_15: PASS" in out
    assert "answer=YES" in out


def test_ideals_command_gf3():
    out, code = run("ideals", str(FIXTURES / "gb3_sign.gkd"))
    assert code == 0
    assert "prop_12_12: PASS" in out
    assert "ideal count:" in out


def test_ideals_command_skips_over_Q():
    out, code = run("ideals", str(FIXTURES / "pair2.gkd"))
    assert code == 0
    assert "skipped" in out


def test_algebra_command():
    out, code = run("algebra", str(FIXTURES / "v4quat.gkd"))
    assert code == 0
    assert "dim B: 4" in out
    assert "prop_4_6: PASS" in out
    assert "center dim: 1" in out


def test_main_entrypoint(capsys):
    code = main(["validate", str(FIXTURES / "pair2.gkd")])
    captured = capsys.readouterr()
    assert code == 0
    assert "groupoid_axioms: PASS" in captured.out

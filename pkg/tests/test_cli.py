import random
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from webtab import beaufort, cli, lookup
from webtab.tableio import load_table, write_table

DATA = beaufort.data_path("")
SCRIPT = str(DATA / "beaufort.cleanup")
RAW = str(DATA / "beaufort_raw.txt")

FORCE6_SENTENCE = ("The speed of force 6 is 36 km/h, its description: strong breeze, "
                   "its specification: Large branches in motion.")
SPEED60_SENTENCE = ("60 km/h speed of wind is in force 8, its description is gale, "
                    "and here twigs break off trees.")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- convert ----------------------------------------------------------------------

def test_convert_beaufort(capsys, tmp_path, table):
    out_path = tmp_path / "beaufort.csv"
    code, out, err = run(capsys, "convert", "--script", SCRIPT, "--in", RAW, "--out", str(out_path))
    assert code == 0 and out == ""
    lines = err.splitlines()
    assert [line.split("\t")[2:4] for line in lines[:3]] == [
        ["14/14", "PASS"], ["13/13", "PASS"], ["14/14", "PASS"]]
    assert lines[-1] == "validate 1NF: 13 records x 4 fields, PASS"
    assert load_table(out_path) == table


def test_convert_to_stdout_json(capsys, table):
    code, out, _ = run(capsys, "convert", "--script", SCRIPT, "--in", RAW, "--format", "json")
    assert code == 0 and out == write_table(table, "json")


def test_convert_count_mismatch_exits_3(capsys, tmp_path):
    raw = beaufort.raw_text().replace(
        "5\n(27-35)|fresh breeze|Small trees in leaf begin to sway.\n", "")
    (tmp_path / "raw.txt").write_text(raw, encoding="utf-8")
    script = "\n".join(beaufort.read_text("beaufort.cleanup").rstrip("\n").split("\n")[:-1])
    (tmp_path / "s.cleanup").write_text(script, encoding="utf-8")
    code, out, err = run(capsys, "convert", "--script", str(tmp_path / "s.cleanup"),
                         "--in", str(tmp_path / "raw.txt"))
    assert code == 3
    assert "13/14\tFAIL" in err and "12/13\tFAIL" in err
    assert len(out.splitlines()) == 13


def test_convert_missing_column_exits_2(capsys, tmp_path):
    (tmp_path / "s.cleanup").write_text("unify\t|\nheader\ndrop\tGust\n", encoding="utf-8")
    (tmp_path / "t.txt").write_text("a|b\n1|2\n", encoding="utf-8")
    code, out, err = run(capsys, "convert", "--script", str(tmp_path / "s.cleanup"),
                         "--in", str(tmp_path / "t.txt"))
    assert code == 2 and out == ""
    lines = err.splitlines()
    assert lines[0].startswith("1\tunify") and lines[1].startswith("2\ttext to table")
    assert "Gust" in lines[-1] and lines[-1].startswith("error:")


def test_convert_identity_on_clean_tsv(capsys, tmp_path, table):
    tsv = tmp_path / "clean.tsv"
    tsv.write_text(write_table(table, "tsv"), encoding="utf-8")
    (tmp_path / "id.cleanup").write_text("header\tyes\n", encoding="utf-8")
    code, out, _ = run(capsys, "convert", "--script", str(tmp_path / "id.cleanup"),
                       "--in", str(tsv), "--format", "csv")
    assert code == 0 and out == write_table(table, "csv")


@pytest.mark.parametrize("script, data", [("missing.cleanup", RAW), (SCRIPT, "missing.txt")])
def test_convert_unreadable(capsys, tmp_path, script, data):
    code, _, err = run(capsys, "convert", "--script", str(tmp_path / script) if "missing" in script
                       else script, "--in", str(tmp_path / data) if "missing" in data else data)
    assert code == 2 and "cannot read" in err


def test_convert_bad_script(capsys, tmp_path):
    (tmp_path / "s.cleanup").write_text("replace\t^z\tx\n", encoding="utf-8")
    code, _, err = run(capsys, "convert", "--script", str(tmp_path / "s.cleanup"), "--in", RAW)
    assert code == 2 and "line 1" in err


# -- validate ---------------------------------------------------------------------

def test_validate(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0
    assert out.splitlines() == ["records: 13", "fields: 4", "types: number,number,text,text",
                                "1NF: yes"]


def test_validate_composite(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("Force,Description\n8 (55-65),gale\n", encoding="utf-8")
    code, out, _ = run(capsys, "validate", "--table", str(path))
    assert code == 1 and "1NF: no" in out and "composite" in out


def test_validate_ragged_csv(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b\n1,2\n3\n", encoding="utf-8")
    code, _, err = run(capsys, "validate", "--table", str(path))
    assert code == 2 and "line 3" in err


# -- lookup ---------------------------------------------------------------------

def test_lookup_force_row(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "force", "--value", "6", "--format", "row")
    assert code == 0 and out == "6,36,strong breeze,Large branches in motion.\n"


def test_lookup_speed_sentence(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "speed", "--value", "60", "--format", "sentence")
    assert code == 0 and out == SPEED60_SENTENCE + "\n"


def test_lookup_speed_row(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "speed", "--value", "60")
    assert out == "60,8,gale,Twigs break off trees.\n"


def test_lookup_speed_uses_binary_search(capsys, monkeypatch):
    calls = []
    real = lookup.match_ascending

    def spy(value, vector):
        calls.append(value)
        return real(value, vector)

    def no_linear(*args):
        raise AssertionError("linear search used for a speed lookup")

    monkeypatch.setattr(lookup, "match_ascending", spy)
    monkeypatch.setattr(lookup, "match_exact", no_linear)
    code, _, _ = run(capsys, "lookup", "--by", "speed", "--value", "60")
    assert code == 0 and calls == [60]


def test_lookup_force_outside_scale(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "force", "--value", "13")
    assert code == 1 and out == "#N/A\n"


def test_lookup_speed_below_zero(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "speed", "--value", "-1")
    assert code == 1 and out == "#N/A\n"


def test_lookup_description_case_insensitive(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "description", "--value", "GALE")
    assert code == 0 and out == "gale,8,55,Twigs break off trees.\n"


def test_lookup_colored(capsys):
    code, out, _ = run(capsys, "lookup", "--by", "force", "--value", "6", "--format", "colored")
    assert out == f"\x1b[38;2;255;203;3m{FORCE6_SENTENCE}\x1b[0m\n"
    code, out, _ = run(capsys, "lookup", "--by", "speed", "--value", "60", "--format", "colored",
                       "--color", "hex")
    assert out == f"#F58321 {SPEED60_SENTENCE}\n"


def test_lookup_bad_table(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "lookup", "--table", str(path), "--by", "force", "--value", "1")
    assert code == 2 and err.startswith("error:")


def test_lookup_table_missing_field(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("Force,Speed\n0,0\n", encoding="utf-8")
    code, _, err = run(capsys, "lookup", "--table", str(path), "--by", "force", "--value", "0")
    assert code == 2 and "description" in err.lower()


def test_lookup_from_other_formats(capsys, tmp_path, table):
    for fmt in ("tsv", "json"):
        path = tmp_path / f"b.{fmt}"
        path.write_text(write_table(table, fmt), encoding="utf-8")
        code, out, _ = run(capsys, "lookup", "--table", str(path), "--by", "force", "--value", "6")
        assert out == "6,36,strong breeze,Large branches in motion.\n"


# -- select -----------------------------------------------------------------------

def test_select_index(capsys):
    code, out, _ = run(capsys, "select", "--mode", "index", "--choice", "9")
    assert code == 0 and out == "9\n8,55,gale,Twigs break off trees.\n"
    code, out, _ = run(capsys, "select", "--mode", "index", "--choice", "10")
    assert out == "10\n9,66,strong gale,Slight structural damage.\n"


def test_select_value(capsys):
    code, out, _ = run(capsys, "select", "--mode", "value", "--choice", "9")
    assert code == 0 and out == "gale\n8,55,gale,Twigs break off trees.\n"


def test_select_sentence(capsys):
    code, out, _ = run(capsys, "select", "--mode", "value", "--choice", "9", "--format", "sentence")
    assert out == "gale\nGale is force 8, from 55 km/h: Twigs break off trees.\n"


@pytest.mark.parametrize("choice", ["0", "14", "x"])
def test_select_out_of_range(capsys, choice):
    code, out, _ = run(capsys, "select", "--mode", "index", "--choice", choice)
    assert code == 1 and out == "#REF!\n"


def test_select_modes_agree(capsys):
    for c in range(1, 14):
        _, by_index, _ = run(capsys, "select", "--mode", "index", "--choice", str(c))
        _, by_value, _ = run(capsys, "select", "--mode", "value", "--choice", str(c))
        assert by_index.splitlines()[1] == by_value.splitlines()[1]


# -- sentence ---------------------------------------------------------------------

def test_sentence_command(capsys):
    code, out, _ = run(capsys, "sentence", "--by", "force", "--value", "6")
    assert code == 0 and out == FORCE6_SENTENCE + "\n"
    code, out, _ = run(capsys, "sentence", "--by", "speed", "--value", "60",
                       "--template", "{description!u}: {specification}")
    assert out == "Gale: Twigs break off trees.\n"


def test_sentence_bad_template(capsys):
    code, _, err = run(capsys, "sentence", "--by", "force", "--value", "6", "--template", "{gust}")
    assert code == 2 and "gust" in err


# -- eval -------------------------------------------------------------------------

@pytest.mark.parametrize("sets, formula, expected", [
    (["F3=6"], "=INDEX(B2:B14,MATCH(F3,A2:A14,0))", "36"),
    (["F8=60"], "=MATCH(F8,B2:B14)", "9"),
    (["F10=gale"], "=UPPER(LEFT(F10))&RIGHT(F10,LEN(F10)-1)", "Gale"),
    (["F10=\"6\""], "=F10&\"!\"", "6!"),
    ([], "=B14", "105"),
])
def test_eval(capsys, sets, formula, expected):
    argv = ["eval"] + [a for s in sets for a in ("--set", s)] + [formula]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out == expected + "\n"


def test_eval_error_values(capsys):
    code, out, _ = run(capsys, "eval", "--set", "F3=13", "=INDEX(B2:B14,MATCH(F3,A2:A14,0))")
    assert code == 1 and out == "#N/A\n"
    code, out, _ = run(capsys, "eval", "=INDEX(B2:B14,0)")
    assert code == 1 and out == "#REF!\n"
    code, out, _ = run(capsys, "eval", '="a"-1')
    assert code == 1 and out == "#VALUE!\n"


def test_eval_syntax_error(capsys):
    code, out, err = run(capsys, "eval", "=LEN(")
    assert code == 2 and out == "" and "offset 5" in err


def test_eval_anchor_and_no_table(capsys):
    code, out, _ = run(capsys, "eval", "--anchor", "C3", "=INDEX(D4:D16,7)")
    assert out == "36\n"
    code, out, _ = run(capsys, "eval", "--no-table", "--set", "A1=2", "=A1+B2")
    assert out == "2\n"


@pytest.mark.parametrize("argv", [
    ["eval", "--set", "F3", "=F3"],
    ["eval", "--set", "3F=1", "=F3"],
    ["eval", "--anchor", "ZZ1", "=A1"],
])
def test_eval_bad_setup(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_eval_set_overrides_bound_cell(capsys):
    code, out, _ = run(capsys, "eval", "--set", "B8=40", "=MATCH(38,B2:B14)")
    assert code == 0 and out == "6\n"


def test_lookup_by_speed_agrees_with_formula(capsys):
    rng = random.Random(100)
    for _ in range(100):
        speed = round(rng.uniform(0, 200), 1)
        code_l, out_l, _ = run(capsys, "lookup", "--by", "speed", "--value", str(speed))
        code_e, out_e, _ = run(capsys, "eval", "--set", f"F8={speed}",
                               "=INDEX(A2:A14,MATCH(F8,B2:B14))")
        assert code_l == code_e == 0
        assert out_l.split(",")[1] == out_e.strip()


# -- chart ----------------------------------------------------------------------

def test_chart_ascii(capsys):
    code, out, _ = run(capsys, "chart")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 13
    assert lines[-1] == "12 | " + "#" * 50 + " 105"


def test_chart_svg_file(capsys, tmp_path):
    path = tmp_path / "c.svg"
    code, out, _ = run(capsys, "chart", "--format", "svg", "--out", str(path))
    assert code == 0 and out == ""
    root = ET.parse(path).getroot()
    assert len([r for r in root.iter("{http://www.w3.org/2000/svg}rect")
                if r.get("class") == "bar"]) == 13


def test_chart_non_numeric(capsys):
    code, out, _ = run(capsys, "chart", "--y", "Description")
    assert code == 1 and out == "#VALUE!\n"


def test_chart_unknown_field(capsys):
    code, _, err = run(capsys, "chart", "--y", "Gust")
    assert code == 2


# -- entry points -----------------------------------------------------------------

def test_module_entry_point_output_is_utf8_lf():
    proc = subprocess.run([sys.executable, "-m", "webtab", "lookup", "--by", "force",
                           "--value", "6"], capture_output=True)
    assert proc.returncode == 0
    assert proc.stdout == b"6,36,strong breeze,Large branches in motion.\n"


def test_usage_error_exits_2():
    proc = subprocess.run([sys.executable, "-m", "webtab", "lookup"], capture_output=True)
    assert proc.returncode == 2

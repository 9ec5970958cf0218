import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from arplab import (EmptyInstance, NonPositiveValue, ParseError, gen_theorem2_family,
                    make_instance)
from arplab.cli import run
from arplab.fileformat import (decimal_approx, dump_instance, parse_instance_file,
                               parse_rational, render_rational)


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return _write


def items(pairs):
    return [{"v": str(v), "c": str(c)} for v, c in pairs]


@pytest.fixture
def two_file(write):
    return write("two.json", {"kind": "arp", "items": items([(6, 2), (1, 1)])})


@pytest.fixture
def three_file(write):
    return write("three.json", {"kind": "arp", "items": items([(6, 2), (1, 1), (2, 1)])})


def test_parse_schema_examples():
    inst = parse_instance_file(b'{"kind":"arp","items":[{"v":"6","c":"2"},{"v":"1","c":"1"}]}')
    assert inst.n == 2 and inst.values() == [(6, 2), (1, 1)]
    inst = parse_instance_file(b'{"kind":"arp","items":[{"v":"2.5","c":"1/3"}]}')
    assert inst.items[0].v == Fraction(5, 2) and inst.items[0].c == Fraction(1, 3)
    with pytest.raises(EmptyInstance):
        parse_instance_file(b'{"kind":"arp","items":[]}')


def test_parse_json_numbers_exactly():
    inst = parse_instance_file('{"kind":"nvep","items":[{"v":0.1,"c":3}]}')
    assert inst.items[0].v == Fraction(1, 10)


@pytest.mark.parametrize("doc,fragment", [
    ('{"kind":"arp","items":[{"v":"6"', "line 1"),
    ('{"kind":"arp",\n "items": [,]}', "line 2"),
    ('[1, 2]', "top level"),
    ('{"kind":"plane","items":[]}', "kind"),
    ('{"kind":"arp","items":{}}', "items"),
    ('{"kind":"arp","items":[{"v":"1"}]}', "items[0].c"),
    ('{"kind":"arp","items":[{"v":"1","c":"1"},{"v":"x","c":"1"}]}', "items[1].v"),
    ('{"kind":"arp","items":[{"v":"1e3","c":"1"}]}', "items[0].v"),
    ('{"kind":"arp","items":[{"v":"1/0","c":"1"}]}', "zero denominator"),
    ('{"kind":"arp","items":[{"v":true,"c":"1"}]}', "items[0].v"),
    ('{"kind":"arp","label":3,"items":[]}', "label"),
])
def test_parse_errors_carry_context(doc, fragment):
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        parse_instance_file(doc)


def test_parse_rejects_nonpositive():
    with pytest.raises(NonPositiveValue):
        parse_instance_file('{"kind":"arp","items":[{"v":"-1/2","c":"1"}]}')


def test_parse_rational_forms():
    assert parse_rational("2.5") == Fraction(5, 2)
    assert parse_rational(" -3/6 ") == Fraction(-1, 2)
    assert parse_rational("0.000000000000000000001") == Fraction(1, 10**21)


def test_decimal_rendering():
    assert render_rational(Fraction(10, 3)) == "10/3 (~3.333333333333)"
    assert decimal_approx(Fraction(17, 4)) == "4.25"
    assert decimal_approx(Fraction(2, 3)) == "0.666666666667"
    assert decimal_approx(Fraction(5)) == "5"
    assert decimal_approx(Fraction(-1, 8)) == "-0.125"


def test_dump_parse_roundtrip():
    inst = make_instance("nvep", [(Fraction(7, 3), 2), (Fraction(1, 9), Fraction(5, 4))], "r")
    assert parse_instance_file(dump_instance(inst)) == inst


def test_solve_two(two_file, capsys):
    assert run(["solve", two_file]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:3] == ["optimum 10/3 (~3.333333333333)", "perm 2,1", "Qn 1"]
    assert out[3].startswith("nodes ")


def test_solve_json(three_file, capsys):
    assert run(["solve", three_file, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["optimum"]["value"] == "17/4"
    assert doc["optimal_perms"] == [[2, 1, 3]]
    assert doc["qn"] == 1


def test_global_flags_before_subcommand(three_file, capsys):
    assert run(["--json", "--workers", "2", "solve", three_file]) == 0
    assert json.loads(capsys.readouterr().out)["optimum"]["value"] == "17/4"


def test_solve_prune(three_file, capsys):
    assert run(["solve", three_file, "--prune"]) == 0
    assert "Qn n/a (pruned)" in capsys.readouterr().out


def test_check_accept_and_reject(three_file, capsys):
    assert run(["check", three_file, "--perm", "2,1,3", "--threshold", "4"]) == 0
    assert run(["check", three_file, "--perm", "2,1,3", "--threshold", "43/10"]) == 1
    assert run(["check", three_file, "--perm", "1,1,2", "--threshold", "0"]) == 1
    assert run(["check", three_file, "--perm", "2,x,3", "--threshold", "0"]) == 1
    assert capsys.readouterr().out.split() == ["accept", "reject", "reject", "reject"]


def test_check_bad_threshold_is_usage_error(three_file):
    assert run(["check", three_file, "--perm", "2,1,3", "--threshold", "abc"]) == 2


def test_usage_errors(capsys):
    assert run(["solve"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run([]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["solve", "x.json", "--workers", "many"]) == 2


def test_input_errors(write, tmp_path, capsys):
    assert run(["solve", str(tmp_path / "missing.json")]) == 3
    assert run(["solve", write("bad.json", "{")]) == 3
    assert run(["count", write("empty.json", {"kind": "arp", "items": []})]) == 3
    err = capsys.readouterr().err
    assert "ParseError" in err and "EmptyInstance" in err


def test_brute_and_cap(three_file, write, capsys):
    assert run(["brute", three_file]) == 0
    out = capsys.readouterr().out
    assert "optimum 17/4 (~4.25)" in out and "evaluated 6" in out and "stable 1" in out
    big = write("big.json", {"kind": "arp", "items": items([(i, 1) for i in range(1, 12)])})
    assert run(["brute", big]) == 3
    assert run(["brute", three_file, "--cap", "2"]) == 3


def test_solve_and_brute_print_same_optimum(write, capsys):
    path = write("g.json", dump_instance(gen_theorem2_family(7, Fraction(7, 2))))
    run(["solve", path, "--json"])
    a = json.loads(capsys.readouterr().out)["optimum"]
    run(["brute", path, "--json", "--mode", "full"])
    b = json.loads(capsys.readouterr().out)["optimum"]
    assert a == b


def test_count(three_file, capsys):
    assert run(["count", three_file]) == 0
    assert capsys.readouterr().out.strip() == "Qn 1"


def test_reduce_then_solve_matches_nvep(write, tmp_path, capsys):
    src = write("v.json", {"kind": "nvep", "label": "cars",
                           "items": items([(6, 2), (1, 1), (2, 1)])})
    out = str(tmp_path / "a.json")
    assert run(["reduce", src, "-o", out]) == 0
    arp = parse_instance_file((tmp_path / "a.json").read_bytes())
    assert arp.kind.value == "arp" and arp.values() == [(6, 2), (1, 1), (2, 1)]
    run(["solve", out, "--json"])
    solved = json.loads(capsys.readouterr().out)
    from arplab import nvep_distance
    nv = parse_instance_file((tmp_path / "v.json").read_bytes())
    perm = solved["optimal_perms"][0]
    assert Fraction(solved["optimum"]["value"]) == nvep_distance(nv, perm)


def test_reduce_rejects_arp(three_file, tmp_path):
    assert run(["reduce", three_file, "-o", str(tmp_path / "o.json")]) == 3


def test_gen_roundtrip(tmp_path):
    out = tmp_path / "c.json"
    assert run(["gen", "--family", "canonical", "--n", "6", "--M", "5/2", "-o", str(out)]) == 0
    assert parse_instance_file(out.read_bytes()).values() == gen_theorem2_family(6, Fraction(5, 2)).values()
    out2 = tmp_path / "r.json"
    assert run(["gen", "--family", "random", "--n", "5", "--seed", "42", "-o", str(out2)]) == 0
    from arplab import Family, GeneratorSpec, gen_random
    assert parse_instance_file(out2.read_bytes()) == gen_random(
        GeneratorSpec(Family.RANDOM_GENERAL, 5, 42))
    assert run(["gen", "--family", "canonical", "--n", "0", "-o", str(out)]) == 3


def test_bench_writes_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run(["bench", "--family", "canonical", "--n-from", "2", "--n-to", "8",
                "--reps", "1", "--workers", "1", "-o", str(out)]) == 0
    rows = list(csv.DictReader(out.open(encoding="utf-8")))
    assert [int(r["n"]) for r in rows] == list(range(2, 9))
    assert "inflection_candidate" in capsys.readouterr().out


def test_bench_json_summary(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run(["bench", "--family", "random", "--n-from", "2", "--n-to", "4", "--reps", "2",
                "--json", "-o", str(out)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [s["n"] for s in doc["per_n"]] == [2, 3, 4]


def test_bench_timeout_exit_code(tmp_path):
    out = tmp_path / "s.csv"
    code = run(["bench", "--family", "canonical", "--n-from", "21", "--n-to", "22",
                "--timeout-secs", "0.05", "-o", str(out)])
    assert code == 4
    assert out.exists()


def test_solve_timeout_exit_code(write):
    path = write("big.json", dump_instance(gen_theorem2_family(22, 10)))
    assert run(["solve", path, "--timeout-secs", "0.05"]) == 4


def test_module_entry_point(three_file):
    proc = subprocess.run([sys.executable, "-m", "arplab", "check", three_file,
                           "--perm", "2,1,3", "--threshold", "43/10"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout.strip() == "reject"

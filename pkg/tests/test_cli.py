from __future__ import annotations

import json

import pytest

from conftest import FIXTURES, SOURCES
from profsum.cli import main

FIG32 = str(FIXTURES / "fig32.folded")
SEARCH = str(FIXTURES / "searchrunner.folded")
JDK = str(FIXTURES / "jdk.folded")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_flame_topdown(capsys):
    code, out, _ = run(capsys, "flame", FIG32)
    assert code == 0
    tree = json.loads(out)
    assert tree["name"] == "VIRTUAL ROOT"
    assert tree["value"] == 9
    assert tree["self"] == 0
    (main_node,) = tree["children"]
    assert main_node["name"] == "demo.Demo.main"
    assert main_node["file"] == "Demo.java"


def test_flame_flat_sorted(capsys):
    code, out, _ = run(capsys, "flame", FIG32, "--view", "flat")
    rows = json.loads(out)
    assert code == 0
    excl = [r["exclusive"] for r in rows]
    assert excl == sorted(excl, reverse=True)
    assert rows[0]["function"] == "demo.Demo.print"


def test_flame_bottomup(capsys):
    code, out, _ = run(capsys, "flame", SEARCH, "--view", "bottomup")
    tree = json.loads(out)
    by_name = {c["name"]: c for c in tree["children"]}
    assert by_name["bench.SearchRunner.search"]["value"] == 95


def test_flame_deterministic_bytes(capsys):
    _, out1, _ = run(capsys, "flame", FIG32)
    _, out2, _ = run(capsys, "flame", FIG32)
    assert out1 == out2


def test_flame_pprof_metric_selection(capsys):
    pprof = str(FIXTURES / "pprof" / "twotypes.pb.gz")
    code, out, _ = run(capsys, "flame", pprof)  # default metric = last (alloc)
    assert code == 0
    assert json.loads(out)["value"] == 100
    _, out, _ = run(capsys, "flame", pprof, "--metric", "cpu")
    assert json.loads(out)["value"] == 10
    _, out, _ = run(capsys, "flame", pprof, "--metric", "alloc")
    assert json.loads(out)["value"] == 100


def test_hot_cache_miss_metric(capsys):
    fft = str(FIXTURES / "fft.folded")
    code, out, _ = run(capsys, "hot", fft, "--metric", "cache-misses", "-k", "2")
    assert code == 0
    assert "fft.FFT.bitreverse" in out.split("\n")[0]


def test_flame_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.folded"
    bad.write_text("main notanumber\n")
    code, _, err = run(capsys, "flame", str(bad))
    assert code == 1
    assert "line 1" in err


def test_flame_missing_file_exit_1(capsys):
    code, _, err = run(capsys, "flame", "/nonexistent/profile")
    assert code == 1
    assert err


def test_bad_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["flame", FIG32, "--view", "sideways"])
    assert exc.value.code == 2


def test_unknown_metric_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hot", FIG32, "--metric", "nope"])
    assert exc.value.code == 2


def test_hot_searchrunner(capsys):
    code, out, _ = run(capsys, "hot", SEARCH, "-k", "3")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].split()[0] == "1"
    assert "bench.SearchRunner.search" in lines[0]
    assert "95.00%" in lines[0]
    assert "SearchRunner.java:9" in lines[0]


def test_hot_k1(capsys):
    code, out, _ = run(capsys, "hot", SEARCH, "-k", "1")
    assert code == 0
    assert len(out.strip().split("\n")) == 1


def test_select_fig32_five_lines(capsys):
    code, out, _ = run(capsys, "select", FIG32, "demo.Demo.foo")
    assert code == 0
    lines = out.split("\n")[:-1]
    assert len(lines) == 5
    assert lines == [
        "demo.Demo.main:L25",
        "demo.Demo.moo:L21",
        "* demo.Demo.foo:L16",
        "    demo.Demo.print:L10",
        "    demo.Demo.print:L11",
    ]


def test_select_by_path_expression(capsys):
    code, out, _ = run(
        capsys, "select", FIG32, "demo.Demo.main;demo.Demo.moo;demo.Demo.foo"
    )
    assert code == 0
    assert out.split("\n")[2].startswith("* demo.Demo.foo")


def test_select_with_summaries(capsys):
    code, out, _ = run(
        capsys, "select", FIG32, "demo.Demo.foo",
        "--summaries", "--offline", "--source-root", str(SOURCES),
    )
    assert code == 0
    lines = out.split("\n")[:-1]
    assert len(lines) == 5
    assert all(" — " in line for line in lines)
    assert lines[2] == "* demo.Demo.foo:L16 — method: foo"
    assert lines[3] == "    demo.Demo.print:L10 — method: print"


def test_select_unresolved_shows_not_found(capsys):
    code, out, _ = run(
        capsys, "select", JDK, "java.lang.Thread.sleep",
        "--summaries", "--offline", "--source-root", str(SOURCES),
    )
    assert code == 0
    assert "java.lang.Thread.sleep:L340 — NOT FOUND" in out


def test_select_unknown_node_exit_1(capsys):
    code, _, err = run(capsys, "select", FIG32, "no.such.fn")
    assert code == 1
    assert "node" in err


def test_select_deterministic(capsys):
    args = ("select", FIG32, "demo.Demo.foo", "--summaries", "--offline",
            "--source-root", str(SOURCES))
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_clean_command(tmp_path, capsys):
    corpus = tmp_path / "pairs.jsonl"
    rows = [
        {"code": "int f(int a) { return a + a; }", "comment": "doubles the given number fast"},
        {"code": "int g() { return 1; }", "comment": "tiny"},
    ]
    corpus.write_text("\n".join(json.dumps(r) for r in rows) + "\nnot json\n")
    out_file = tmp_path / "kept.jsonl"
    code, out, _ = run(capsys, "clean", str(corpus), "-o", str(out_file))
    assert code == 0
    assert "kept 1" in out
    assert "dropped[short_comment] 1" in out
    assert "malformed 1" in out
    kept = [json.loads(l) for l in out_file.read_text().splitlines()]
    assert kept[0]["comment"] == "doubles the given number fast"


def test_bleu_command(tmp_path, capsys):
    cands = tmp_path / "c.txt"
    refs = tmp_path / "r.txt"
    cands.write_text("sort an array\nno overlap here\n")
    refs.write_text("sort an array\nxx yy zz\n")
    code, out, _ = run(capsys, "bleu", "--candidates", str(cands),
                       "--references", str(refs))
    assert code == 0
    assert out.strip() == "50.0000"


def test_bleu_line_count_mismatch(tmp_path):
    cands = tmp_path / "c.txt"
    refs = tmp_path / "r.txt"
    cands.write_text("one\n")
    refs.write_text("one\ntwo\n")
    with pytest.raises(SystemExit) as exc:
        main(["bleu", "--candidates", str(cands), "--references", str(refs)])
    assert exc.value.code == 2

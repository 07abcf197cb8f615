import io
import json

import numpy as np
import pytest

from polarank import cli
from polarank.cli import MatFormatError, parse_matrix, run, serialize_matrix


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else text), err.getvalue()


def test_identity_roundtrip_bytes(tmp_path):
    buf = io.StringIO()
    serialize_matrix(np.eye(3, dtype=int), buf)
    assert buf.getvalue() == "mat 3 3\n1 0 0\n0 1 0\n0 0 1\n"
    M = parse_matrix(io.StringIO(buf.getvalue()))
    again = io.StringIO()
    serialize_matrix(M, again)
    assert again.getvalue() == buf.getvalue()


def test_h34_roundtrip(tmp_path, h34):
    A2 = h34[1][2]
    path = tmp_path / "a.mat"
    serialize_matrix(A2, path)
    assert (parse_matrix(path) == A2).all()


def test_comments_and_big_entries():
    M = parse_matrix(io.StringIO("# c\nmat 1 2  # header\n-3 %d\n" % 10**40))
    assert M.dtype == object and M[0, 1] == 10**40


@pytest.mark.parametrize("text,line", [
    ("mat 2 2\n1 0\n1\n", 3),
    ("mat 2 x\n", 1),
    ("mat 1 1\n1\n2\n", 3),
    ("mat 1 2\n1 y\n", 2),
    ("", 1),
    ("mat 3 1\n1\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(MatFormatError) as e:
        parse_matrix(io.StringIO(text))
    assert e.value.lineno == line


def test_bound_examples():
    code, rep, _ = call("bound", "thm1", "--p", "2", "--t", "1", "--d", "2")
    assert code == 0 and rep["bound"] == 7 and rep["params"] == {"p": 2, "t": 1, "d": 2}
    code, rep, _ = call("bound", "thm2", "--t", "3")
    assert code == 0 and rep["bound"] == 17577
    assert call("bound", "lemma1", "--rank", "26", "--p", "2")[1]["bound"] == 27
    assert call("bound", "lift", "--rank", "6", "--t", "2")[1]["rank"] == 36
    assert call("bound", "formula", "--name", "h5_generators", "--p", "2")[1]["rank"] == 20
    rep = call("bound", "baseline", "--q", "4", "--d", "2")[1]
    assert rep["bounds"] == {"counting_spread": 65, "debeule": 35}
    assert call("bound", "crossover")[0] == 0


def test_usage_errors():
    assert call("bound", "thm2", "--t", "2")[0] == 2
    assert call("bound", "thm1", "--p", "2")[0] == 2
    assert call("bound", "nope")[0] == 2
    assert call()[0] == 2
    assert call("rank", "--in", "missing.mat", "--mod", "2")[0] == 2


def test_build_rank_scheme_pipeline(tmp_path):
    prefix = str(tmp_path / "h3q2")
    code, rep, _ = call("build", "hermitian", "--d", "2", "--q", "2", "--out", prefix)
    assert code == 0 and rep["size"] == 27 and len(rep["files"]) == 3
    a2 = f"{prefix}_A2.mat"
    code, rep, _ = call("rank", "--mod", "2", "--in", a2)
    assert code == 0 and rep["rank"] == 6
    assert rep["params"]["input_sha256"] == cli.file_digest(a2)
    assert call("rank", "--rational", "--in", a2)[1]["rank"] == 27
    assert call("rank", "--in", a2)[0] == 2
    files = [f"{prefix}_A{i}.mat" for i in range(3)]
    code, rep, _ = call("scheme", "--in", *files, "--congruence", "2")
    assert code == 0
    assert rep["eigenvalues"] == [10, 1, -5] and rep["multiplicities"] == [1, 20, 6]
    assert rep["congruence"]["coefficients"] == [12, -6, 3] and rep["congruence"]["congruent"]
    code, rep, _ = call("clique", "--in", a2, "--exact")
    assert code == 0 and rep["size"] == 6 and rep["optimal"]


def test_scheme_failure_exit_code(tmp_path):
    P = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    I = np.eye(3, dtype=int)
    paths = []
    for i, M in enumerate([I, P, 1 - P - I]):
        paths.append(str(tmp_path / f"p{i}.mat"))
        serialize_matrix(M, paths[-1])
    code, _, err = call("scheme", "--in", *paths)
    assert code == 1 and "not constant" in err


def test_verify_octagon(tmp_path):
    code, rep, _ = call("verify", "octagon")
    assert code == 0 and rep["ok"] and rep["points"] == 1755
    bad = tmp_path / "line.ig"
    bad.write_text("ig 1\npoints 3\nlines 1\n0 1 2\n")
    code, rep, _ = call("verify", "octagon", "--in", str(bad))
    assert code == 1 and not rep["ok"]


def test_clique_budget_exit_code(tmp_path):
    prefix = str(tmp_path / "o2")
    assert call("build", "octagon", "--out", prefix)[0] == 0
    code, rep, _ = call("clique", "--in", f"{prefix}_A4.mat", "--exact", "--fix-first", "--ub", "27",
                        "--budget", "0.5", "--restarts", "20")
    assert code == 3 and not rep["optimal"] and rep["size"] == 24


def test_tsv_output():
    code, text, _ = call("bound", "thm2", "--t", "1", "--format", "tsv")
    head, row = text.strip().split("\n")
    assert head.split("\t") == ["command", "params.t", "bound"]
    assert row.split("\t")[-1] == "27"


def test_repro_deterministic():
    a = call("repro", "--only", "1", "6", "9", "--seed", "3")
    b = call("repro", "--only", "1", "6", "9", "--seed", "3")
    assert a[0] == 0 and a[1] == b[1]
    assert a[1]["all_passed"]
    assert [c["status"] for c in a[1]["criteria"]] == ["pass"] * 3


def test_repro_skips_slow():
    code, rep, _ = call("repro", "--only", "11")
    assert code == 0 and rep["criteria"][0]["status"] == "skipped"

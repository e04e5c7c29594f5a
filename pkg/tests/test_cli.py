import csv
import hashlib
import io
from pathlib import Path

import pytest

from treespectra import VerificationFailure, parse_graph
from treespectra.cli import main

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def k23() -> str:
    return str(GRAPHS / "k23.graph")


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_pointspec_k23(capsys):
    code, out = run(capsys, "pointspec", k23())
    assert code == 0
    assert "# seed: 0" in out
    assert '"mass": "1/5"' in out
    assert '"witness": ["w0", "w1", "w2"]' in out


def test_pointspec_is_deterministic(capsys):
    _, first = run(capsys, "pointspec", k23())
    _, second = run(capsys, "pointspec", k23())
    assert first == second


def test_pointspec_oracle_diff(capsys):
    code, out = run(capsys, "pointspec", str(GRAPHS / "bowtie.graph"), "--oracle")
    assert code == 0
    assert "agrees on 2 certificates" in out


def test_pointspec_writes_out_file(tmp_path, capsys):
    target = tmp_path / "report.txt"
    code, out = run(capsys, "pointspec", k23(), "--out", str(target))
    assert code == 0 and out == ""
    assert "1/5" in target.read_text()


def test_lift_output_roundtrips(capsys):
    code, out = run(capsys, "lift", str(GRAPHS / "c3.graph"), "--degree", "4")
    assert code == 0
    lifted = parse_graph(out)  # header lines are comments
    assert lifted.vertex_count == 12
    assert lifted.edge_count == 24


def test_lift_girth_doubling(capsys):
    code, out = run(capsys, "lift", str(GRAPHS / "c3.graph"), "--girth-doubling")
    assert code == 0
    lifted = parse_graph(out)
    assert lifted.girth() >= 6


def test_lift_seed_changes_result(capsys):
    _, a = run(capsys, "lift", k23(), "--degree", "6", "--seed", "1")
    _, b = run(capsys, "lift", k23(), "--degree", "6", "--seed", "2")
    _, a2 = run(capsys, "lift", k23(), "--degree", "6", "--seed", "1")
    assert a == a2
    assert a != b


def test_dos_outputs(tmp_path, capsys):
    out = tmp_path / "dosrun"
    args = (
        "dos",
        k23(),
        "--lift-degree",
        "20",
        "--bins",
        "21",
        "--out",
        str(out),
    )
    code, _ = run(capsys, *args)
    assert code == 0
    for name in ("histogram.csv", "atoms.csv", "dos.png", "report.txt"):
        assert (out / name).exists()

    with open(out / "histogram.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 21
    assert abs(sum(float(r["mass"]) for r in rows) - 1.0) < 1e-12

    with open(out / "atoms.csv") as fh:
        atoms = list(csv.DictReader(fh))
    assert any(abs(float(r["location"])) < 1e-9 for r in atoms)

    digests = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in out.iterdir()}
    code, _ = run(capsys, *args)
    assert code == 0
    for p in out.iterdir():
        assert hashlib.sha256(p.read_bytes()).hexdigest() == digests[p.name]


def test_dos_budget_exit(tmp_path, capsys):
    code, _ = run(
        capsys,
        "dos",
        k23(),
        "--lift-degree",
        "5000",
        "--out",
        str(tmp_path / "big"),
    )
    assert code == 3


def test_eigvec_outputs(tmp_path, capsys):
    out = tmp_path / "vecs"
    code, _ = run(capsys, "eigvec", k23(), "--out", str(out))
    assert code == 0
    report = (out / "report.txt").read_text()
    assert "mass: 1/5" in report
    assert "residual[0]:" in report
    csvs = sorted(out.glob("eigvec_*.csv"))
    assert len(csvs) >= 1
    with open(csvs[0]) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert {r["vertex"] for r in rows} == {"u0", "u1", "w0", "w1", "w2"}
    for r in rows:
        float(r["re"]), float(r["im"])


def test_eigvec_regular_weighting(tmp_path, capsys):
    out = tmp_path / "vecs"
    code, _ = run(
        capsys,
        "eigvec",
        k23(),
        "--weighting",
        "regular",
        "--lift-degree",
        "3",
        "--out",
        str(out),
    )
    assert code == 0
    report = (out / "report.txt").read_text()
    assert "dimension 2" in report
    with open(sorted(out.glob("eigvec_*.csv"))[0]) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 10  # five vertices, two coordinates each


def test_eigvec_empty_spectrum(tmp_path, capsys):
    out = tmp_path / "none"
    code, _ = run(capsys, "eigvec", str(GRAPHS / "c3.graph"), "--out", str(out))
    assert code == 0
    assert "empty" in (out / "report.txt").read_text()
    assert not list(out.glob("eigvec_*.csv"))


def test_eigvec_cert_index_out_of_range(tmp_path, capsys):
    code, _ = run(
        capsys, "eigvec", k23(), "--cert-index", "5", "--out", str(tmp_path / "x")
    )
    assert code == 2


def test_perturb_no_delta(capsys):
    code, out = run(
        capsys,
        "perturb",
        k23(),
        "--epsilon",
        "1/10",
        "--samples",
        "3",
        "--no-delta",
    )
    assert code == 0
    assert "instances with point spectrum: 0" in out
    assert "delta radius" not in out


def test_perturb_with_delta(capsys):
    code, out = run(
        capsys, "perturb", k23(), "--epsilon", "1/10", "--samples", "2"
    )
    assert code == 0
    assert "delta radius: lower" in out
    assert "0.31" in out


def test_moment_report(capsys):
    code, out = run(
        capsys, "moment", str(GRAPHS / "loop_chain.graph"), "--k-max", "4"
    )
    assert code == 0
    assert "k,cover_moment,lift_trace_moment" in out
    assert "gauge invariance" in out


def test_moment_acyclic_note(capsys):
    code, out = run(capsys, "moment", str(GRAPHS / "path4.graph"), "--k-max", "4")
    assert code == 0
    assert "acyclic" in out


def test_verify_ok(capsys):
    code, out = run(capsys, "verify", k23(), "--max-lift", "3")
    assert code == 0
    assert "FAIL" not in out
    assert out.count("ok:") >= 5


def test_missing_file_is_parse_error(capsys):
    code, _ = run(capsys, "pointspec", "/nonexistent/nope.graph")
    assert code == 2


def test_malformed_graph_is_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex a\nedge a b weight 1\n")
    code, _ = run(capsys, "pointspec", str(bad))
    assert code == 2


def test_bad_flags_rejected(capsys):
    assert run(capsys, "pointspec", k23(), "--tol", "-1")[0] == 2
    assert run(capsys, "pointspec", k23(), "--jobs", "0")[0] == 2


def test_verification_failure_maps_to_exit_4(capsys, monkeypatch):
    import treespectra.cli as climod

    def boom(*a, **k):
        raise VerificationFailure("synthetic check failure")

    monkeypatch.setattr(climod, "point_spectrum", boom)
    code = main(["pointspec", k23()])
    captured = capsys.readouterr()
    assert code == 4
    assert "verification failure" in captured.err


def test_lift_budget_exit(capsys):
    code, _ = run(
        capsys,
        "lift",
        str(GRAPHS / "petersen.graph"),
        "--girth-above",
        "40",
        "--max-vertices",
        "500",
    )
    assert code == 3


def test_pointspec_budget_exit(tmp_path, capsys):
    # a high-degree lift of K_{2,3} has far too many candidate sets to
    # enumerate; the run must stop with the budget exit code, not hang
    code, out = run(capsys, "lift", k23(), "--degree", "30", "--seed", "0")
    assert code == 0
    lifted = tmp_path / "lifted.graph"
    lifted.write_text(out)
    code, _ = run(capsys, "pointspec", str(lifted))
    assert code == 3

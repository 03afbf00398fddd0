import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rotdisc import io as rio
from rotdisc.cf import named_rho
from rotdisc.cli import main, resolve_threads
from rotdisc.core import build_branches
from rotdisc.pdf import build_pdf


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=30))
def test_float_roundtrip(values):
    text = rio.write_csv(("v",), [(v,) for v in values])
    _, rows = rio.read_csv(text)
    assert [r[0] for r in rows] == [float(v) for v in values]
    assert all(type(r[0]) in (float, int) for r in rows)


def test_branches_csv_roundtrip():
    b = build_branches(named_rho("pi_m3"), 339)
    header, rows = rio.read_csv(rio.branches_csv(b))
    assert header == rio.BRANCH_FIELDS
    cols = list(zip(*rows))
    assert np.array_equal(np.array(cols[0], dtype=float), b.breakpoints)
    assert np.array_equal(np.array(cols[2], dtype=float), b.starts)
    assert np.array_equal(np.array(cols[3], dtype=float), b.ends)
    assert list(cols[4]) == b.jump_right.tolist()


def test_pdf_csv_roundtrip():
    p = build_pdf(build_branches(named_rho("golden"), 610))
    header, rows = rio.read_csv(rio.pdf_csv(p))
    assert header == rio.PDF_FIELDS
    assert np.array_equal(np.array([r[2] for r in rows], dtype=float), p.density)
    assert np.array_equal(np.array([r[0] for r in rows] + [rows[-1][1]], dtype=float), p.bounds)


def test_csv_line_endings_and_utf8():
    text = rio.branches_csv(build_branches(named_rho("golden"), 5))
    assert "\r" not in text and text.endswith("\n")
    text.encode("utf-8")


def test_branches_command(capsys):
    status, out, _ = run(capsys, "branches", "--rho", "1/3", "--n", "6")
    assert status == 0
    assert out.splitlines() == [
        "x_left,x_right,a,b,jump_right",
        "0,0.33333333333333331,-1,1,2",
        "0.33333333333333331,0.66666666666666663,-1,1,2",
        "0.66666666666666663,1,-1,1,2",
    ]


def test_json_mirrors_csv(capsys):
    _, out_csv, _ = run(capsys, "pdf", "--rho", "golden", "--n", "89")
    _, out_json, _ = run(capsys, "pdf", "--rho", "golden", "--n", "89", "--format", "json")
    header, rows = rio.read_csv(out_csv)
    data = json.loads(out_json)
    assert [tuple(d[k] for k in header) for d in data["bins"]] == rows


def test_sweep_jsonl(capsys):
    status, out, _ = run(capsys, "sweep", "--rho", "golden", "--n", "2..6", "--format", "json")
    lines = out.splitlines()
    assert status == 0 and len(lines) == 5
    assert [json.loads(line)["N"] for line in lines] == [2, 3, 4, 5, 6]


def test_sweep_anchor_minima(capsys):
    status, out, _ = run(capsys, "sweep", "--rho", "golden", "--n", "anchors:1000")
    assert status == 0
    header, rows = rio.read_csv(out)
    n = [r[0] for r in rows]
    s = [r[header.index("sup_norm")] for r in rows]
    minima = {n[i] for i in range(1, len(s) - 1) if s[i] < s[i - 1] and s[i] < s[i + 1]}
    assert {5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610} <= minima


def test_determinism(capsys, tmp_path):
    outputs = []
    for _ in range(2):
        for fmt in ("csv", "json", "svg"):
            path = tmp_path / f"out.{fmt}"
            assert main(["pdf", "--rho", "pi_m3", "--n", "339", "-o", str(path)]) == 0
            outputs.append(path.read_bytes())
    assert outputs[:3] == outputs[3:]


def test_svg_outputs_parse(tmp_path):
    jobs = [
        ["branches", "--rho", "golden", "--n", "21"],
        ["pdf", "--rho", "golden", "--n", "610", "--zoom=-0.3:0.3"],
        ["sweep", "--rho", "pi_m3", "--n", "2..120", "--dots", "qn"],
        ["bench", "--kind", "error", "--q", "10,100,1000"],
    ]
    for i, job in enumerate(jobs):
        path = tmp_path / f"f{i}.svg"
        assert main(job + ["-o", str(path)]) == 0
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")


def test_pdf_svg_plateau(tmp_path):
    path = tmp_path / "p.svg"
    assert main(["pdf", "--rho", "golden", "--n", "610", "-o", str(path)]) == 0
    text = path.read_text()
    assert text.count("<path") >= 2
    assert "<polyline" not in text and "<circle" not in text


def test_timestamp_only_on_request(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    main(["branches", "--rho", "golden", "--n", "8", "-o", str(a)])
    main(["branches", "--rho", "golden", "--n", "8", "-o", str(b), "--timestamp"])
    assert "UTC" not in a.read_text() and "Z</text>" not in a.read_text()
    assert "Z</text>" in b.read_text()


def test_plot_roundtrip(tmp_path):
    for cmd in (["branches", "--rho", "golden", "--n", "34"],
                ["pdf", "--rho", "pi_m3", "--n", "226"],
                ["sweep", "--rho", "golden", "--n", "2..40"],
                ["bench", "--kind", "error", "--q", "4,10,100"],
                ["bench", "--n-min", "1024", "--n-max", "4096", "--naive-min", "16",
                 "--naive-max", "64", "--repeats", "1"]):
        csv_path = tmp_path / "t.csv"
        svg_path = tmp_path / "t.svg"
        assert main(cmd + ["-o", str(csv_path)]) == 0
        assert main(["plot", str(csv_path), "-o", str(svg_path)]) == 0
        ET.parse(svg_path)


def test_stats_command(capsys):
    status, out, _ = run(capsys, "stats", "--rho", "golden", "--n", "610", "--format", "json")
    data = json.loads(out)
    assert status == 0 and data["N"] == 610 and data["is_anchor"] is True


def test_error_json(capsys):
    status, out, err = run(capsys, "pdf", "--rho", "1/0", "--n", "3")
    assert status != 0 and out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "SpecError" and payload["position"] == 2


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["pdf", "--rho", "golden"],
    ["pdf", "--rho", "golden", "--n", "1,2"],
    ["stats", "--rho", "golden", "--n", "5", "--format", "svg"],
    ["branches", "--rho", "golden", "--n", str(2 ** 27)],
    ["plot", "/nonexistent.csv"],
])
def test_failures_exit_nonzero(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status != 0
    json.loads(err.strip().splitlines()[-1])


def test_threads_env_override(monkeypatch):
    monkeypatch.setenv("DISC_THREADS", "3")
    assert resolve_threads(1) == 3
    monkeypatch.delenv("DISC_THREADS")
    assert resolve_threads(2) == 2
    assert resolve_threads(None) == 1


def test_threads_invalid(capsys, monkeypatch):
    monkeypatch.setenv("DISC_THREADS", "zero")
    status, _, err = run(capsys, "sweep", "--rho", "golden", "--n", "5")
    assert status != 0 and "DISC_THREADS" in err


def test_sweep_threads_same_bytes(capsys, monkeypatch):
    _, one, _ = run(capsys, "sweep", "--rho", "e_m2", "--n", "2..60")
    monkeypatch.setenv("DISC_THREADS", "4")
    _, many, _ = run(capsys, "sweep", "--rho", "e_m2", "--n", "2..60")
    assert one == many


def test_verify_command(capsys):
    status, out, _ = run(capsys, "verify")
    header, rows = rio.read_csv(out)
    assert header == ("name", "passed", "detail")
    assert status == 0 and all(r[1] is True for r in rows)

"""Command-line behavior: exit codes, files, determinism, resume."""

import numpy as np
import pytest

from lhpkit.cli import main, read_code_file, write_code_file
from lhpkit.chain4d import build_preset


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ── build ────────────────────────────────────────────────────────────


def test_build_paper_preset(tmp_path, capsys):
    out = tmp_path / "paper.txt"
    rc, stdout, _ = _run(["build", "--preset", "paper-L3", "--out", str(out)], capsys)
    assert rc == 0
    assert out.exists()
    assert "n 723  k 3" in stdout
    assert "[[384, 48, 6]]" in stdout  # achieved vs claim, reported side by side
    code = read_code_file(str(out))
    assert code.n == 723 and code.k == 3
    assert not code.validate()


def test_build_trivial_scalar(tmp_path, capsys):
    out = tmp_path / "triv.txt"
    rc, stdout, _ = _run(["build", "--seeds", "trivial-scalar", "--out", str(out)], capsys)
    assert rc == 0
    assert "n 6  k 0" in stdout
    assert "rank(hx) 3  rank(hz) 3" in stdout


def test_build_malformed_seeds(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("λ(0) nonsense λ(1)\n")
    rc, _, stderr = _run(["build", "--seeds", str(bad), "--out", str(tmp_path / "x")], capsys)
    assert rc == 2
    assert "line 1" in stderr


def test_build_seed_file_round_trip(tmp_path, capsys):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text(
        "λ(0,1)\n\nλ(0,2)\n\nλ(0,1)\n\nλ(0,2)\n"
    )
    out = tmp_path / "code.txt"
    rc, stdout, _ = _run(
        ["build", "--seeds", str(seeds), "--L", "3", "--out", str(out)], capsys
    )
    assert rc == 0
    code = read_code_file(str(out))
    assert code.n == 18  # six 1x1 blocks at L = 3


def test_usage_error_exit_code(capsys):
    rc, _, _ = _run(["build"], capsys)
    assert rc == 1


# ── inspect ──────────────────────────────────────────────────────────


def test_inspect_reports_weights(tmp_path, capsys):
    out = tmp_path / "paper.txt"
    _run(["build", "--preset", "paper-L3", "--out", str(out)], capsys)
    rc, stdout, _ = _run(["inspect", str(out)], capsys)
    assert rc == 0
    assert "stabilizer row weight mean" in stdout
    assert "status: ok" in stdout


def test_inspect_detects_tampering(tmp_path, capsys):
    out = tmp_path / "toy.txt"
    code = build_preset("toy-rep2")
    write_code_file(code, str(out))
    text = out.read_text()
    # flip a bit inside the hx block to break the CSS condition
    marker = "[hx]\n"
    at = text.index(marker) + len(marker)
    line_end = text.index("\n", at)
    row = text.index("\n", line_end + 1)
    flipped = "1" if text[row - 1] == "0" else "0"
    out.write_text(text[: row - 1] + flipped + text[row:])
    rc, stdout, _ = _run(["inspect", str(out)], capsys)
    assert rc == 0
    assert "status: FAILED" in stdout
    assert "hx @ hz^T" in stdout


def test_inspect_corrupt_file(tmp_path, capsys):
    bad = tmp_path / "junk.txt"
    bad.write_text("not a code file")
    rc, _, stderr = _run(["inspect", str(bad)], capsys)
    assert rc == 2


# ── simulate ─────────────────────────────────────────────────────────


def _config(tmp_path, output, extra=""):
    cfg = tmp_path / "sim.ini"
    cfg.write_text(
        f"""
[code]
preset = toy-rep2

[channel]
p = 0.0
q = 0.0
eta = 1

[run]
trials = 100
master_seed = 3
tailored = off
single_shot = on
workers = 1
output = {output}
{extra}
"""
    )
    return cfg


def test_simulate_zero_noise_row(tmp_path, capsys):
    out = tmp_path / "out.csv"
    cfg = _config(tmp_path, out)
    rc, stdout, _ = _run(["simulate", "--config", str(cfg)], capsys)
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("p,q,beta_x")
    row = lines[1].split(",")
    header = lines[0].split(",")
    assert row[header.index("wer")] == "0"
    assert row[header.index("failures")] == "0"


def test_simulate_eta_sweep_row_count(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    cfg = tmp_path / "sweep.ini"
    cfg.write_text(
        f"""
[code]
preset = toy-rep2

[channel]
p = 0.04
q = 0.0
eta = 1, 10, 100, 1000

[run]
trials = 20
master_seed = 5
tailored = both
single_shot = on
workers = 1
output = {out}
"""
    )
    rc, _, _ = _run(["simulate", "--config", str(cfg)], capsys)
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 8  # header + eta grid x tailoring modes


def test_simulate_deterministic_output(tmp_path, capsys):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    for out in (out_a, out_b):
        cfg = _config(tmp_path, out, extra="")
        cfg2 = tmp_path / f"{out.stem}.ini"
        cfg2.write_text(cfg.read_text().replace("p = 0.0\n", "p = 0.05\n"))
        rc, _, _ = _run(["simulate", "--config", str(cfg2)], capsys)
        assert rc == 0

    def _mask_wall(text):
        rows = []
        for i, line in enumerate(text.strip().splitlines()):
            if i == 0:
                rows.append(line)
            else:
                rows.append(line.rsplit(",", 1)[0])
        return "\n".join(rows)

    assert _mask_wall(out_a.read_text()) == _mask_wall(out_b.read_text())


def test_simulate_resume_skips_completed(tmp_path, capsys):
    out = tmp_path / "resume.csv"
    cfg = _config(tmp_path, out)
    _run(["simulate", "--config", str(cfg)], capsys)
    first = out.read_text()
    rc, stdout, _ = _run(["simulate", "--config", str(cfg)], capsys)
    assert rc == 0
    assert "skip completed" in stdout
    assert out.read_text() == first  # no duplicate rows appended


def test_simulate_invalid_config(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[channel]\np = 0.04\neta = 1\nbeta_z = 9\n")
    rc, _, stderr = _run(["simulate", "--config", str(cfg)], capsys)
    assert rc == 2
    assert "eta" in stderr


def test_sweep_runs_multiple_configs(tmp_path, capsys):
    out1 = tmp_path / "s1.csv"
    out2 = tmp_path / "s2.csv"
    c1 = _config(tmp_path, out1)
    c2 = tmp_path / "c2.ini"
    c2.write_text(c1.read_text().replace(str(out1), str(out2)))
    rc, _, _ = _run(["sweep", str(c1), str(c2)], capsys)
    assert rc == 0
    assert out1.exists() and out2.exists()


def test_code_file_round_trip(tmp_path):
    code = build_preset("toy-rep2")
    path = tmp_path / "code.txt"
    write_code_file(code, str(path))
    loaded = read_code_file(str(path))
    assert loaded == code

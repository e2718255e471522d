"""End-to-end command-line runs: artifact layout, schema headers,
deterministic reruns, config handling, and failure exit codes."""

import json

import pytest

from temax import cli, runner


def read_lines(path):
    return path.read_text().splitlines()


RUN_ARGS = ["run", "--problem", "planewave", "--k", "1",
            "--nx", "8", "--ny", "8", "--t-final", "1e-9",
            "--snapshot-every", "5", "--energy-every", "1"]


def test_run_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "case"
    assert cli.main(RUN_ARGS + ["--out", str(out)]) == 0

    summary = json.loads((out / "summary.json").read_text())
    assert summary["schema_version"] == 1
    assert summary["problem"] == "planewave"
    assert summary["k"] == 1 and summary["nx"] == 8 and summary["ny"] == 8
    assert summary["n_steps"] >= 1
    assert summary["errors"]["bz_l2"] > 0.0

    energy = read_lines(out / "energy.csv")
    assert energy[0] == runner.SCHEMA_LINE
    assert energy[1] == "t,E_h,E_star_h,compat_max,div_max"
    # energy-every 1 plus the initial row
    assert len(energy) == summary["n_steps"] + 3

    snaps = sorted(out.glob("snapshot_*.txt"))
    assert [s.name for s in snaps] == summary["snapshots"]
    assert snaps[0].name == "snapshot_000000.txt"
    assert snaps[-1].name == f"snapshot_{summary['n_steps']:06d}.txt"
    head = read_lines(snaps[-1])[:8]
    assert head[0] == runner.SCHEMA_LINE
    assert "# problem: planewave" in head
    assert "# columns: x y D_x D_y B_z" in head
    body = read_lines(snaps[-1])[8:]
    assert len(body) == 64 and len(body[0].split()) == 5

    stdout = capsys.readouterr().out
    assert "planewave k=1 8x8" in stdout
    assert "errors:" in stdout


def test_reruns_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert cli.main(RUN_ARGS + ["--out", str(out1)]) == 0
    assert cli.main(RUN_ARGS + ["--out", str(out2)]) == 0
    for name in ["summary.json", "energy.csv", "snapshot_000000.txt"]:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_unsupported_degree_exits_2(capsys):
    code = cli.main(["run", "--problem", "planewave", "--k", "7"])
    assert code == 2
    assert "unsupported degree" in capsys.readouterr().err


def test_missing_required_option_exits_2(capsys):
    code = cli.main(["run", "--k", "1"])
    assert code == 2
    assert "--problem" in capsys.readouterr().err


def test_unknown_problem_exits_2(capsys):
    code = cli.main(["run", "--problem", "warp_core", "--k", "1"])
    assert code == 2
    assert "warp_core" in capsys.readouterr().err


def test_blowup_exits_3(capsys):
    import numpy as np
    with np.errstate(over="ignore", invalid="ignore"):
        code = cli.main(["run", "--problem", "planewave", "--k", "2",
                         "--nx", "8", "--ny", "8", "--cfl", "2.0",
                         "--t-final", "1e-7"])
    assert code == 3
    err = capsys.readouterr().err
    assert "non-finite at step" in err


def test_config_file_with_cli_override(tmp_path):
    cfg = tmp_path / "case.cfg"
    cfg.write_text(
        "# small smoke case\n"
        "problem = planewave\n"
        "k = 1\n"
        "nx = 8   # cells\n"
        "ny = 8\n"
        "t-final = 1e-9\n"
        "energy-every = 1\n")
    out = tmp_path / "out"
    code = cli.main(["run", "--config", str(cfg), "--k", "2",
                     "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["k"] == 2  # flag wins over the file
    assert summary["nx"] == 8
    assert summary["t_final"] == 1e-9


def test_read_config_rejects_bad_input(tmp_path):
    bad_key = tmp_path / "a.cfg"
    bad_key.write_text("colour = blue\n")
    with pytest.raises(ValueError, match="unknown key"):
        cli.read_config(str(bad_key))
    bad_val = tmp_path / "b.cfg"
    bad_val.write_text("nx = many\n")
    with pytest.raises(ValueError, match="bad value"):
        cli.read_config(str(bad_val))
    no_eq = tmp_path / "c.cfg"
    no_eq.write_text("just some words\n")
    with pytest.raises(ValueError, match="key=value"):
        cli.read_config(str(no_eq))


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nx = many\n")
    code = cli.main(["run", "--config", str(cfg), "--problem", "planewave",
                     "--k", "1"])
    assert code == 2
    assert "bad value" in capsys.readouterr().err


def test_converge_writes_table(tmp_path, capsys):
    out = tmp_path / "conv"
    code = cli.main(["converge", "--problem", "planewave", "--k", "1",
                     "--meshes", "8,16", "--t-final", "2e-10",
                     "--out", str(out)])
    assert code == 0
    lines = read_lines(out / "convergence.csv")
    assert lines[0] == runner.SCHEMA_LINE
    assert lines[1] == ("k,nx,d_l1,d_l2,bz_l1,bz_l2,"
                        "ord_d_l1,ord_d_l2,ord_bz_l1,ord_bz_l2")
    assert len(lines) == 4
    first = lines[2].split(",")
    assert first[:2] == ["1", "8"]
    assert first[6:] == ["", "", "", ""]  # no order on the coarsest mesh
    second = lines[3].split(",")
    assert all(tok for tok in second)
    assert "ord(Bz L2)" in capsys.readouterr().out


def test_threads_option_rejects_zero(capsys):
    code = cli.main(["run", "--problem", "planewave", "--k", "1",
                     "--threads", "0"])
    assert code == 2
    assert "threads" in capsys.readouterr().err

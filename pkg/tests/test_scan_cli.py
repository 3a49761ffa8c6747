import io
import math

import numpy as np
import pytest

import logger
import scan_cli
from errors import ConsistencyError, ValidationError
from scan_cli import (CSV_HEADER, ScanConfig, ScanRow, alpha_grid, cli_main, detect_transition,
                      emit_csv, scan)

PLATEAU_LQFI = 4 / math.pi ** 2


def config(**kwargs):
    base = dict(alpha_min=0.0, alpha_max=1.0, step=0.1, m=1, measures=("lqfi",), workers=2)
    base.update(kwargs)
    return ScanConfig(**base)


def zero_row(alpha=0.0):
    return ScanRow(alpha=alpha, m=1, t1=0.0, t3=0.0, lqfi=0.0, owqd=0.0, dlqfi=0.0, dowqd=0.0)


# ----------------------------------------------------
# CONFIG
# ----------------------------------------------------
@pytest.mark.parametrize("kwargs", [
    dict(alpha_min=1.0, alpha_max=1.0),
    dict(alpha_min=-0.5),
    dict(step=0.0),
    dict(m=0),
    dict(m=17),
    dict(measures=()),
    dict(measures=("concurrence",)),
    dict(alpha_max=1e7, step=1.0),
])
def test_scan_config_validation(kwargs):
    with pytest.raises(ValidationError):
        config(**kwargs)


def test_parse_scan_config_keeps_defaults_on_bad_values(monkeypatch):
    monkeypatch.setattr(scan_cli, "SCAN_CONFIG", dict(scan_cli.SCAN_CONFIG))
    parsed = scan_cli.parse_scan_config({"scan": {"step": "coarse", "m": 2, "measures": ["bogus"]}})
    assert parsed["step"] == 0.005
    assert parsed["m"] == 2
    assert parsed["measures"] == ["lqfi", "owqd"]


def test_parse_validation_config(monkeypatch):
    monkeypatch.setattr(scan_cli, "VALIDATION_CONFIG", dict(scan_cli.VALIDATION_CONFIG))
    parsed = scan_cli.parse_validation_config({"validation": {"check_every": 0, "tolerance": 1e-7}})
    assert parsed["check_every"] == 50
    assert parsed["tolerance"] == 1e-7


def test_load_config_reads_yaml(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("print_level: ERROR\nscan:\n  m: 3\n")
    cfg = scan_cli.load_config(path)
    assert cfg["scan"]["m"] == 3


def test_load_config_missing_file(tmp_path):
    with pytest.raises(OSError):
        scan_cli.load_config(tmp_path / "absent.yaml")


# ----------------------------------------------------
# GRID AND SCAN
# ----------------------------------------------------
def test_grid_hits_transition_and_endpoints():
    grid = alpha_grid(config(alpha_min=0.0, alpha_max=3.0, step=0.01))
    assert len(grid) == 301
    assert grid[0] == 0.0 and grid[-1] == 3.0
    assert 1.0 in grid


def test_grid_snaps_transition_for_incommensurate_start():
    grid = alpha_grid(config(alpha_min=0.503, alpha_max=1.5, step=0.01))
    assert 1.0 in grid
    assert grid[0] >= 0.503 and grid[-1] <= 1.5


def test_grid_needs_three_points():
    with pytest.raises(ValidationError):
        alpha_grid(config(alpha_min=0.0, alpha_max=0.15, step=0.1))


def test_grid_warns_about_dropped_endpoints(capsys):
    logger.set_print_level("WARN")
    grid = alpha_grid(config(alpha_min=0.0, alpha_max=3.0, step=0.3))
    assert grid[0] == pytest.approx(0.1) and grid[-1] == pytest.approx(2.8)
    err = capsys.readouterr().err
    assert "effective range" in err and "[0.1, 2.8]" in err


def test_grid_quiet_when_endpoints_fit(capsys):
    logger.set_print_level("WARN")
    alpha_grid(config(alpha_min=0.0, alpha_max=3.0, step=0.01))
    assert "effective range" not in capsys.readouterr().err


def test_scan_plateau_is_flat():
    rows = scan(config(alpha_min=0.0, alpha_max=1.0, step=0.1))
    assert len(rows) == 11
    for row in rows:
        assert row.lqfi == pytest.approx(PLATEAU_LQFI, abs=1e-12)
    for row in rows[1:-1]:
        assert row.dlqfi == pytest.approx(0.0, abs=1e-9)


def test_scan_decay_beyond_transition():
    rows = scan(config(alpha_min=1.5, alpha_max=3.0, step=0.1))
    values = [row.lqfi for row in rows]
    assert all(b < a for a, b in zip(values, values[1:]))
    for row in rows:
        assert row.lqfi == pytest.approx(4 / (math.pi ** 2 * row.alpha ** 2), abs=1e-12)


def test_scan_m2_plateau_below_m1():
    rows = scan(config(m=2))
    t1 = 4 / math.pi ** 2
    for row in rows:
        assert row.lqfi == pytest.approx(t1 ** 2 / (1 - t1 ** 2), abs=1e-12)
        assert row.lqfi < PLATEAU_LQFI


def test_scan_is_independent_of_worker_count():
    serial = scan(config(alpha_min=0.5, alpha_max=1.5, step=0.05, workers=1))
    threaded = scan(config(alpha_min=0.5, alpha_max=1.5, step=0.05, workers=4))
    assert serial == threaded


def test_scan_owqd_validated_against_minimization():
    rows = scan(config(alpha_min=0.5, alpha_max=1.5, step=0.25, measures=("lqfi", "owqd"), check_every=2))
    assert all(row.lqfi > row.owqd > 0 for row in rows)


def test_scan_consistency_failure(monkeypatch):
    monkeypatch.setattr(scan_cli, "owqd_closed", lambda t: 0.9)
    with pytest.raises(ConsistencyError) as info:
        scan(config(measures=("owqd",), check_every=100))
    assert info.value.alpha == 0.0 and info.value.m == 1
    assert info.value.closed == 0.9


# ----------------------------------------------------
# TRANSITION
# ----------------------------------------------------
@pytest.mark.parametrize("measure", ["lqfi", "owqd"])
def test_detect_transition_m1(measure):
    rows = scan(config(alpha_min=0.5, alpha_max=1.5, step=0.01, measures=("lqfi", "owqd"), check_every=1000))
    estimate = detect_transition(rows, measure)
    assert estimate.detected
    assert estimate.alpha_star == pytest.approx(1.0, abs=0.01)


def test_detect_transition_jump_approaches_limit():
    rows = scan(config(alpha_min=0.9, alpha_max=1.1, step=0.001))
    estimate = detect_transition(rows, "lqfi")
    assert estimate.jump == pytest.approx(8 / math.pi ** 2, rel=0.02)


def test_detect_transition_constant_rows():
    rows = [zero_row(0.1 * i) for i in range(10)]
    estimate = detect_transition(rows, "lqfi")
    assert estimate.jump == 0.0
    assert not estimate.detected


def test_detect_transition_needs_rows():
    with pytest.raises(ValidationError):
        detect_transition([zero_row(0.1 * i) for i in range(4)])


def test_detect_transition_needs_uniform_grid():
    rows = [zero_row(a) for a in (0.0, 0.1, 0.2, 0.35, 0.4, 0.5)]
    with pytest.raises(ValidationError):
        detect_transition(rows)


# ----------------------------------------------------
# CSV
# ----------------------------------------------------
def test_emit_csv_empty():
    out = io.StringIO()
    emit_csv([], out)
    assert out.getvalue() == "alpha,m,t1,t3,lqfi,owqd,dlqfi,dowqd\n"


def test_emit_csv_zero_row():
    out = io.StringIO()
    emit_csv([zero_row()], out)
    assert out.getvalue().splitlines() == [",".join(CSV_HEADER), "0,1,0,0,0,0,0,0"]


def test_emit_csv_twelve_digits():
    row = ScanRow(alpha=1.0, m=1, t1=2 / math.pi, t3=0.0, lqfi=0.0, owqd=0.0, dlqfi=0.0, dowqd=0.0)
    out = io.StringIO()
    emit_csv([row], out)
    assert out.getvalue().splitlines()[1].split(",")[2] == "0.636619772368"


def test_emit_csv_never_prints_negative_zero():
    row = ScanRow(alpha=-0.0, m=2, t1=-0.0, t3=-0.0, lqfi=0.0, owqd=-0.0, dlqfi=-0.0, dowqd=-0.0)
    out = io.StringIO()
    emit_csv([row], out)
    assert out.getvalue().splitlines()[1] == "0,2,0,0,0,0,0,0"


def test_even_separation_scan_prints_plain_zero_t3():
    out = io.StringIO()
    emit_csv(scan(config(alpha_min=0.0, alpha_max=2.0, step=0.1, m=2)), out)
    rows = [dict(zip(CSV_HEADER, line.split(","))) for line in out.getvalue().splitlines()[1:]]
    assert rows and all(r["t3"] == "0" for r in rows)


def test_emit_csv_to_file_is_deterministic(tmp_path):
    rows = scan(config(alpha_min=0.9, alpha_max=1.1, step=0.1))
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(rows, first)
    emit_csv(scan(config(alpha_min=0.9, alpha_max=1.1, step=0.1)), second)
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_emit_csv_unwritable(tmp_path):
    with pytest.raises(OSError):
        emit_csv([], tmp_path / "missing" / "out.csv")


# ----------------------------------------------------
# CLI
# ----------------------------------------------------
def test_cli_measure(capsys):
    assert cli_main(["measure", "--alpha", "0.5", "--m", "1"]) == 0
    out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert float(out["lqfi"]) == pytest.approx(PLATEAU_LQFI, abs=1e-9)
    assert float(out["owqd"]) == pytest.approx(0.31622, abs=1e-4)
    assert float(out["owqd_theta"]) == pytest.approx(math.pi / 2, abs=1e-4)


def test_cli_scan_writes_csv(tmp_path):
    out = tmp_path / "scan.csv"
    code = cli_main(["scan", "--alpha-min", "0", "--alpha-max", "2", "--step", "0.5", "--m", "1",
                     "--measures", "lqfi", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 6


@pytest.mark.parametrize("argv", [
    ["scan", "--alpha-min", "2", "--alpha-max", "1", "--step", "0.1", "--m", "1"],
    ["measure", "--alpha", "-1"],
    ["measure", "--alpha", "0.5", "--m", "40"],
    ["scan", "--frobnicate"],
    ["oracle", "--check", "entropy"],
    [],
])
def test_cli_bad_arguments(argv):
    assert cli_main(argv) == 2


def test_cli_help_exits_cleanly(capsys):
    assert cli_main(["--help"]) == 0
    assert "measure" in capsys.readouterr().out


def test_cli_io_failure(tmp_path):
    code = cli_main(["scan", "--alpha-min", "0", "--alpha-max", "1", "--step", "0.5", "--m", "1",
                     "--measures", "lqfi", "--out", str(tmp_path / "missing" / "out.csv")])
    assert code == 4


def test_cli_missing_config(tmp_path):
    assert cli_main(["--config", str(tmp_path / "absent.yaml"), "measure", "--alpha", "0.5"]) == 4


def test_cli_oracle_g(capsys):
    assert cli_main(["oracle", "--check", "g", "--n", "4096"]) == 0
    assert "status=ok" in capsys.readouterr().out


def test_cli_oracle_energy(capsys):
    assert cli_main(["oracle", "--check", "energy", "--n", "6"]) == 0


def test_cli_oracle_invalid_ring():
    assert cli_main(["oracle", "--check", "energy", "--n", "5"]) == 2

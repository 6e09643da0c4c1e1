"""Sweep grid evaluation and the command-line interface."""

import math

import numpy as np
import pytest

from mmwlink.chain import build_chain, stationary
from mmwlink.cli import main
from mmwlink.metrics import summarize
from mmwlink.scenario import (BlockageProcess, ConfigError, QueueParams,
                              ScenarioConfig, validate)
from mmwlink.simulate import simulate_chain
from mmwlink.sweep import CSV_HEADER, SweepSpec, rows_to_csv, run_sweep


def test_sweep_spec_validation():
    with pytest.raises(ConfigError, match="parameter"):
        SweepSpec(parameter="bogus", values=(1.0,))
    with pytest.raises(ConfigError, match="values"):
        SweepSpec(parameter="ssi", values=())
    with pytest.raises(ConfigError, match="mu"):
        SweepSpec(parameter="mu", values=(2.0,), mu_values=(5.0,))


def test_run_sweep_row_order_and_mu_column():
    spec = SweepSpec(parameter="a_factor", values=(0.2, 0.6),
                     mu_values=(2.0, 20.0))
    rows = run_sweep(ScenarioConfig(), spec)
    assert [r.mu_s for r in rows] == [2.0, 2.0, 20.0, 20.0]
    assert [r.param for r in rows] == [0.2, 0.6, 0.2, 0.6]


def test_run_sweep_analytic_matches_direct_computation():
    spec = SweepSpec(parameter="v", values=(0.5, 2.0))
    rows = run_sweep(ScenarioConfig(), spec)
    for row in rows:
        cfg = ScenarioConfig(blockage=BlockageProcess(v=row.param))
        ch = build_chain(validate(cfg))
        pi = stationary(ch)
        s = summarize(pi, ch.throughput_per_state)
        assert row.mean_bps == s.mean
        assert row.std_bps == s.std_dev
        assert row.variance == s.variance
        assert row.pi_b == float(pi[-1])


def test_run_sweep_mu_parameter_uses_value_as_slice():
    spec = SweepSpec(parameter="mu", values=(2.0, 10.0))
    rows = run_sweep(ScenarioConfig(), spec)
    assert [r.mu_s for r in rows] == [2.0, 10.0]
    assert rows[0].pi_b > rows[1].pi_b  # more frequent blockage


def test_run_sweep_simulate_uses_per_row_seeds():
    spec = SweepSpec(parameter="a_factor", values=(0.4, 0.8),
                     mu_values=(2.0,))
    rows = run_sweep(ScenarioConfig(), spec, mode="simulate", seed=100,
                     n_slots=20_000)
    for i, row in enumerate(rows):
        cfg = ScenarioConfig(blockage=BlockageProcess(mu=2.0),
                             queue=QueueParams(a_factor=row.param))
        ch = build_chain(validate(cfg))
        ref = simulate_chain(ch, 20_000, seed=100 + i)
        assert row.mean_bps == ref.mean_bps
        assert row.pi_b == float(ref.occupancy[-1])


def test_run_sweep_rejects_unknown_mode():
    spec = SweepSpec(parameter="ssi", values=(1.0,))
    with pytest.raises(ValueError, match="mode"):
        run_sweep(ScenarioConfig(), spec, mode="exact")


def test_run_sweep_propagates_config_errors():
    spec = SweepSpec(parameter="a_factor", values=(2.0,))
    with pytest.raises(ConfigError):
        run_sweep(ScenarioConfig(), spec)


def test_rows_to_csv_header_and_determinism():
    spec = SweepSpec(parameter="ssi", values=(0.1, 1.0, math.inf))
    a = rows_to_csv(run_sweep(ScenarioConfig(), spec))
    b = rows_to_csv(run_sweep(ScenarioConfig(), spec))
    assert a == b
    lines = a.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4
    # repr floats round-trip exactly
    first = lines[1].split(",")
    assert float(first[0]) == 0.1
    assert float(first[1]) == 10.0


def test_cli_sweep_stdout_matches_library(capsys):
    rc = main(["sweep", "--parameter", "v", "--values", "0.5,1.0"])
    assert rc == 0
    out = capsys.readouterr().out
    spec = SweepSpec(parameter="v", values=(0.5, 1.0))
    assert out == rows_to_csv(run_sweep(ScenarioConfig(), spec))


def test_cli_sweep_range_log_expansion(capsys):
    rc = main(["sweep", "--parameter", "ssi", "--range", "0.01:40:5:log"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    grid = [float(row.split(",")[0]) for row in lines[1:]]
    np.testing.assert_allclose(
        grid, np.logspace(math.log10(0.01), math.log10(40.0), 5), rtol=1e-12)


def test_cli_sweep_to_file_byte_identical(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["sweep", "--parameter", "a_factor", "--values", "0.5,1.0",
            "--mode", "simulate", "--seed", "5", "--n-slots", "20000"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_sweep_requires_values(capsys):
    rc = main(["sweep", "--parameter", "v"])
    assert rc == 2
    assert "values" in capsys.readouterr().err


def test_cli_rejects_unknown_parameter():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--parameter", "bogus", "--values", "1"])
    assert exc.value.code == 2


def test_cli_simulate_both_engines(tmp_path, capsys):
    for engine in ("chain", "events"):
        out = tmp_path / f"{engine}.csv"
        rc = main(["simulate", "--engine", engine, "--duration", "5",
                   "--seed", "3", "--out", str(out)])
        assert rc == 0
        err = capsys.readouterr().err
        assert f"engine={engine}" in err
        assert "mean_bps=" in err
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "time_s,throughput_bps"
        assert len(lines) == 11  # 5 s in 0.5 s bins
        float(lines[1].split(",")[1])


def test_cli_simulate_stdout(capsys):
    rc = main(["simulate", "--engine", "chain", "--duration", "2",
               "--seed", "0"])
    assert rc == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("time_s,throughput_bps\n")


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text("mu = 2.0\nssi = 1.0\n")
    rc = main(["analyze", "--config", str(cfg)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "mean_bps" in out and "pi[blocked]" in out


def test_cli_bad_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text("warp_speed = 9\n")
    rc = main(["analyze", "--config", str(cfg)])
    assert rc == 2
    assert "warp_speed" in capsys.readouterr().err


def test_cli_missing_config_exits_3(tmp_path, capsys):
    rc = main(["analyze", "--config", str(tmp_path / "absent.cfg")])
    assert rc == 3
    assert "error:" in capsys.readouterr().err


def test_cli_trace_fit(tmp_path, capsys):
    rng = np.random.default_rng(2)
    rows = ["time_s,throughput_bps"]
    t = 0.0
    for episode in range(30):
        level = 2.0e9 if episode % 3 else 1.0e9
        for _ in range(20):
            rows.append(f"{t},{level + rng.normal(0, 5e6)}")
            t += 0.1
        for _ in range(4):
            rows.append(f"{t},{abs(rng.normal(0, 1e6))}")
            t += 0.1
    trace = tmp_path / "trace.csv"
    trace.write_text("\n".join(rows) + "\n")
    rc = main(["trace-fit", str(trace)])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("mcs_levels = ")
    assert "p_recover = " in out


def test_cli_trace_fit_bad_header_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n0,1\n")
    rc = main(["trace-fit", str(bad)])
    assert rc == 2
    assert "header" in capsys.readouterr().err


def test_cli_trace_fit_short_trace_exits_2(tmp_path, capsys):
    short = tmp_path / "short.csv"
    short.write_text("time_s,throughput_bps\n0.0,1.0\n1.0,2.0\n")
    rc = main(["trace-fit", str(short)])
    assert rc == 2
    assert "short" in capsys.readouterr().err


def test_cli_trace_fit_missing_file_exits_3(tmp_path):
    rc = main(["trace-fit", str(tmp_path / "absent.csv")])
    assert rc == 3


def test_cli_pc_reports_closed_form_and_estimate(capsys):
    rc = main(["pc", "--mu", "2", "--sigma", "0.1", "--ssi", "2",
               "--samples", "50000", "--seed", "0"])
    assert rc == 0
    out = capsys.readouterr().out
    values = {}
    for line in out.strip().split("\n"):
        key, _, val = line.partition(" = ")
        values[key] = float(val)
    assert values["closed_form"] == pytest.approx(0.019947114020071637)
    assert abs(values["mc_estimate"] - values["closed_form"]) \
        <= 4 * math.sqrt(0.0199 * 0.981 / 50_000)
    assert values["mc_std_error"] > 0.0


def test_cli_pc_infinite_interval(capsys):
    rc = main(["pc", "--mu", "2", "--sigma", "0.1", "--ssi", "inf"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "closed_form = 1.0" in out
    assert "mc_estimate = 1.0" in out

from __future__ import annotations

import csv
import io
import re

import numpy as np
import pytest

from vohd.cli import RunConfig, main, read_config_file, run_compare, run_eval
from vohd.closedform import section4_exact
from vohd.errors import ConfigError
from vohd.plot import PlotError, emit_plot, read_table, render_panels


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_eval_closed_grid5(capsys):
    assert main(["eval", "--method", "closed", "--grid", "5"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["t", "exact"]
    assert len(rows) == 6
    t = np.array([float(r[0]) for r in rows[1:]])
    np.testing.assert_array_equal([float(r[1]) for r in rows[1:]], section4_exact("lnt-left", 1, t))


def test_interval_error(capsys):
    assert main(["eval", "--a", "5", "--b", "1"]) == 2
    assert "interval requires a < b" in capsys.readouterr().err


def test_oracle_of_constant_is_zero():
    text = run_eval(RunConfig(x="3", grid=4, method=("oracle",)))
    assert all(float(r[1]) == 0.0 for r in _rows(text)[1:])


@pytest.mark.parametrize("argv", [
    ["compare", "--method", "closed"],
    ["eval", "--method", "closed", "--x", "sin(t)"],
    ["eval", "--method", "closed", "--x", "lnt", "--side", "right"],
    ["eval", "--alpha", "t/2"],
    ["eval", "--x", "ln("],
    ["eval", "--N", "0"],
    ["eval", "--grid", "1"],
    ["eval", "--method", "magic"],
    ["eval", "--format", "svg"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("vohd: error:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["eval", "--type", "4"])
    assert info.value.code == 2


def test_numerical_failure_exit_3(capsys):
    argv = ["eval", "--x", "exp(t)", "--type", "2", "--grid", "5", "--qtol", "1e-30"]
    assert main(argv) == 3
    err = capsys.readouterr().err
    assert re.search(r"numerical failure at t = [0-9.]+", err)


def test_compare_columns_and_summary(capsys):
    cfg = RunConfig(command="compare", grid=10, N=(4, 8), method=("closed", "oracle", "expansion"),
                    type=2)
    text, summary = run_compare(cfg)
    header = _rows(text)[0]
    assert header == ["t", "exact", "oracle", "approx_N4", "approx_N8", "err_N4", "err_N8",
                      "bound_N4", "bound_N8", "err_oracle"]
    assert len(summary) == 3
    assert summary[0].endswith("PASS")


def test_compare_without_exact_uses_oracle_reference():
    cfg = RunConfig(command="compare", x="sin(t)", grid=6, N=(6,), method=("oracle", "expansion"))
    rows = _rows(run_compare(cfg)[0])
    assert rows[0] == ["t", "oracle", "approx_N6", "err_N6", "bound_N6"]
    for r in rows[1:]:
        assert float(r[3]) == abs(float(r[2]) - float(r[1]))


def test_values_are_printed_losslessly():
    text = run_eval(RunConfig(grid=7, method=("closed",)))
    t = np.array([float(r[0]) for r in _rows(text)[1:]])
    exact = section4_exact("lnt-left", 1, t)
    assert [float(r[1]) for r in _rows(text)[1:]] == list(exact)


def test_config_file_and_precedence(tmp_path, monkeypatch, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# scenario\nx = rlogpow(1)\nside = right\ngrid = 3\nmethod = closed\n"
                    "qtol = 1e-8\nN = 2, 4\n")
    values = read_config_file(conf)
    assert values["N"] == (2, 4) and values["method"] == ("closed",)
    assert main(["eval", "--config", str(conf), "--grid", "4"]) == 0
    assert len(_rows(capsys.readouterr().out)) == 5
    # the environment beats the file but not the flag
    monkeypatch.setenv("VOHD_QTOL", "1e-30")
    argv = ["eval", "--config", str(conf), "--x", "exp(t)", "--side", "left",
            "--method", "oracle", "--type", "2", "--grid", "5"]
    assert main(argv) == 3
    capsys.readouterr()
    assert main(argv + ["--qtol", "1e-10"]) == 0


def test_bad_config_file(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = blue\n")
    assert main(["eval", "--config", str(conf)]) == 2
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "missing.conf")


def test_paper_scenario_is_pinned(tmp_path, capsys):
    conf = tmp_path / "p.conf"
    conf.write_text("grid = 5\n")
    assert main(["paper-left", "--config", str(conf), "--out", str(tmp_path / "o")]) == 2
    assert "cannot be changed" in capsys.readouterr().err


def test_paper_right_outputs(tmp_path, capsys):
    out = tmp_path / "right"
    assert main(["paper-right", "--out", str(out)]) == 0
    err = capsys.readouterr().err
    assert err.count("PASS") == 9 and "FAIL" not in err
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted(f"type{k}{suffix}" for k in (1, 2, 3)
                           for suffix in (".csv", "_values.svg", "_errors.svg"))
    header = _rows((out / "type1.csv").read_text())[0]
    assert header[:6] == ["t", "exact", "oracle", "approx_N2", "approx_N4", "approx_N6"]


def test_selftest(capsys, monkeypatch):
    assert main(["selftest", "--only", "specfun"]) == 0
    out = capsys.readouterr().out
    assert "selftest: PASS" in out
    assert all(line.startswith(("suite", "specfun", "selftest")) for line in out.splitlines())
    monkeypatch.setenv("VOHD_QTOL", "1e-30")
    assert main(["selftest", "--only", "oracle"]) == 1
    assert "selftest: FAIL" in capsys.readouterr().out


def test_full_selftest_passes(capsys):
    assert main(["selftest"]) == 0


# {{{ plotting


def test_plot_polylines_per_series(tmp_path):
    cfg = RunConfig(command="compare", grid=20, N=(10, 20, 30), method=("closed", "expansion"))
    text, _ = run_compare(cfg)
    panels = render_panels(text)
    assert panels["values"].count("<polyline") == 4
    assert panels["errors"].count("<polyline") == 3
    assert 'viewBox="0 0 800 600"' in panels["values"]
    written = emit_plot(text, tmp_path / "cmp.csv")
    assert [p.name for p in written] == ["cmp_values.svg", "cmp_errors.svg"]


def _polyline_y(svg, name):
    m = re.search(rf'id="series-{name}"[^>]*points="([^"]*)"', svg)
    return np.array([float(p.split(",")[1]) for p in m.group(1).split()])


def test_error_panel_orders_curves(tmp_path):
    cfg = RunConfig(command="compare", grid=100, N=(10, 30), method=("closed", "expansion"), type=2)
    svg = render_panels(run_compare(cfg)[0])["errors"]
    # larger errors sit higher, i.e. at smaller SVG y
    assert np.all(_polyline_y(svg, "err_N30") >= _polyline_y(svg, "err_N10"))


def test_plot_errors():
    with pytest.raises(PlotError, match="no data rows"):
        render_panels("t,exact\n")
    with pytest.raises(PlotError):
        render_panels("")
    with pytest.raises(PlotError):
        read_table("t,exact\n1,2,3\n")
    with pytest.raises(PlotError):
        read_table("x,exact\n1,2\n")


def test_plot_subcommand(tmp_path, capsys):
    src = tmp_path / "v.csv"
    src.write_text(run_eval(RunConfig(grid=5, method=("closed", "oracle"))))
    assert main(["plot", str(src)]) == 0
    assert (tmp_path / "v_values.svg").exists()
    empty = tmp_path / "e.csv"
    empty.write_text("t,exact\n")
    assert main(["plot", str(empty)]) == 2
    assert "no data rows" in capsys.readouterr().err


def test_outputs_are_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["paper-left", "--out", str(tmp_path / d)]) == 0
    for p in (tmp_path / "a").iterdir():
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()

# }}}

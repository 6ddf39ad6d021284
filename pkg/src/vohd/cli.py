"""Command-line front end.

Subcommands::

    eval         values of one operator on a grid (closed form, oracle, expansion)
    compare      the same, plus errors against a reference and error bounds
    plot         SVG panels from a CSV table written by eval/compare
    selftest     built-in consistency suites
    paper-left   ln t on [1, 5], alpha = t/20, n = 1, N = 10, 20, 30, types 1-3
    paper-right  ln(5/t) on [1, 5], alpha = t/20, n = 1, N = 2, 4, 6, types 1-3

Exit codes: 0 success, 1 selftest failure, 2 configuration error, 3
numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from vohd import oracle, selftest
from vohd.closedform import LogPowerSpec, exact_log_power
from vohd.errors import ConfigError, QuadratureError, VohdError
from vohd.expansion import ApproxSpec, approximate, build_moments, error_bound, interior_grid
from vohd.expr import FunctionModel, OrderFunction, parse, resolve
from vohd.plot import PlotError, emit_plot
from vohd.quadrature import QuadratureConfig

__all__ = ["RunConfig", "main", "run_compare", "run_eval"]

METHODS = ("closed", "oracle", "expansion")
FORMATS = ("csv", "svg", "both")
QTOL_ENV = "VOHD_QTOL"
SUMMARY_SLACK = 1e-9


@dataclass(frozen=True)
class RunConfig:
    command: str = "eval"
    side: str = "left"
    type: int = 1
    x: str = "lnt"
    alpha: str = "t/20"
    a: float = 1.0
    b: float = 5.0
    grid: int = 100
    n: int = 1
    N: tuple[int, ...] = (10,)
    method: tuple[str, ...] = ("oracle",)
    out: str | None = None
    format: str = "csv"
    qtol: float = 1.0e-10
    literal_bound: bool = False

    def validate(self) -> None:
        if self.side not in ("left", "right"):
            raise ConfigError(f"side must be left or right, got {self.side!r}")
        if self.type not in (1, 2, 3):
            raise ConfigError(f"type must be 1, 2 or 3, got {self.type}")
        if not self.a < self.b:
            raise ConfigError("interval requires a < b")
        if not self.a > 0:
            raise ConfigError("interval requires a > 0")
        if self.grid < 2:
            raise ConfigError("grid needs at least 2 points")
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if not self.N:
            raise ConfigError("need at least one value of N")
        if any(N < self.n for N in self.N):
            raise ConfigError(f"every N must be at least n = {self.n}")
        bad = [m for m in self.method if m not in METHODS]
        if bad or not self.method:
            raise ConfigError(f"unknown method {', '.join(bad)!r}; choose from "
                              f"{', '.join(METHODS)} or all")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")
        if not self.qtol > 0:
            raise ConfigError("quadrature tolerance must be positive")
        if self.command == "compare" and len(self.method) < 2:
            raise ConfigError("compare needs at least two methods (nothing to compare)")


class NumericalFailure(VohdError):
    def __init__(self, message: str, t: float | None) -> None:
        where = "" if t is None else f" at t = {t:.17g}"
        super().__init__(f"numerical failure{where}: {message}")
        self.t = t


# {{{ tables


@dataclass(frozen=True)
class _Problem:
    x: FunctionModel
    order: OrderFunction
    closed: LogPowerSpec | None


def _prepare(cfg: RunConfig) -> _Problem:
    try:
        entry = resolve(cfg.x, cfg.a, cfg.b)
        x = FunctionModel(entry.expr, cfg.a, cfg.b, k_max=cfg.n + 1, source=cfg.x)
        order = OrderFunction(parse(cfg.alpha), cfg.a, cfg.b, source=cfg.alpha)
    except VohdError as exc:
        raise ConfigError(str(exc)) from exc
    closed = None
    if entry.side == cfg.side and entry.gamma is not None:
        closed = LogPowerSpec(entry.side, entry.gamma, cfg.a, cfg.b)
    if "closed" in cfg.method and closed is None:
        raise ConfigError(f"no closed form for x = {cfg.x!r} on the {cfg.side} side; "
                          "closed forms exist for lnt (a = 1), logpow(g) (left) "
                          "and rlogpow(g) (right)")
    return _Problem(x, order, closed)


def _columns(cfg: RunConfig, problem: _Problem, compare: bool) -> dict[str, np.ndarray]:
    t = np.array(interior_grid(cfg.side, cfg.a, cfg.b, cfg.grid))
    qcfg = QuadratureConfig(tol=cfg.qtol)
    cols: dict[str, np.ndarray] = {"t": t}
    if "closed" in cfg.method:
        cols["exact"] = exact_log_power(problem.closed, cfg.type, problem.order, t)
    if "oracle" in cfg.method:
        cols["oracle"] = oracle.evaluate(cfg.side, cfg.type, problem.x, problem.order, t, qcfg)
    reference = cols.get("exact", cols.get("oracle"))
    if "expansion" in cfg.method:
        approx, err, bound = {}, {}, {}
        for N in cfg.N:
            spec = ApproxSpec(cfg.side, cfg.type, cfg.n, N, cfg.a, cfg.b, tuple(t))
            approx[N] = approximate(problem.x, problem.order, spec, build_moments(problem.x, spec))
            if compare and reference is not None:
                err[N] = np.abs(approx[N] - reference)
            bound[N] = np.array([error_bound(cfg.type, problem.x, problem.order, spec, tp,
                                             literal=cfg.literal_bound) for tp in t])
        cols.update({f"approx_N{N}": v for N, v in approx.items()})
        cols.update({f"err_N{N}": v for N, v in err.items()})
        cols.update({f"bound_N{N}": v for N, v in bound.items()})
    if compare and "exact" in cols and "oracle" in cols:
        cols["err_oracle"] = np.abs(cols["oracle"] - cols["exact"])
    return cols


def _csv(cols: dict[str, np.ndarray]) -> str:
    names = list(cols)
    lines = [",".join(names)]
    for i in range(cols["t"].size):
        lines.append(",".join(f"{float(cols[n][i]):.17g}" for n in names))
    return "\n".join(lines) + "\n"


def _compute(cfg: RunConfig, compare: bool) -> dict[str, np.ndarray]:
    cfg.validate()
    problem = _prepare(cfg)
    try:
        return _columns(cfg, problem, compare)
    except QuadratureError as exc:
        t = None if exc.t is None else float(np.atleast_1d(exc.t)[0])
        raise NumericalFailure(str(exc), t) from exc


def run_eval(cfg: RunConfig) -> str:
    """CSV table of the requested value columns, one row per grid point."""
    return _csv(_compute(cfg, compare=False))


def summarize(cfg: RunConfig, cols: dict[str, np.ndarray]) -> tuple[list[str], bool]:
    """One line per N: max error, max bound and whether error <= bound everywhere."""
    lines, ok = [], True
    for N in cfg.N:
        if f"err_N{N}" not in cols:
            continue
        err, bound = cols[f"err_N{N}"], cols[f"bound_N{N}"]
        valid = np.isfinite(err)
        within = bool(np.all(err[valid] <= bound[valid] + SUMMARY_SLACK))
        ok = ok and within
        lines.append(
            f"{cfg.side} type {cfg.type} N={N}: max err {np.max(err[valid]):.6g}, "
            f"max bound {np.max(bound[valid]):.6g}, {'PASS' if within else 'FAIL'}"
            + ("" if valid.all() else f" ({int((~valid).sum())} points not evaluated)"))
        over = err[valid] - bound[valid]
        if within and np.any(over > 0):
            lines[-1] += f" (error exceeds bound by at most {np.max(over):.3g}, inside the slack)"
    if "err_oracle" in cols:
        lines.append(f"{cfg.side} type {cfg.type} oracle: max err "
                     f"{np.max(cols['err_oracle']):.6g}")
    return lines, ok


def run_compare(cfg: RunConfig) -> tuple[str, list[str]]:
    """CSV table with error and bound columns, and the summary lines."""
    cols = _compute(cfg, compare=True)
    return _csv(cols), summarize(cfg, cols)[0]

# }}}

# {{{ argument handling


def _parse_methods(text: str) -> tuple[str, ...]:
    out: list[str] = []
    for item in (s.strip() for s in text.split(",")):
        for m in (METHODS if item == "all" else (item,)):
            if m not in out:
                out.append(m)
    return tuple(out)


def _parse_N(values) -> tuple[int, ...]:
    out: list[int] = []
    for v in values:
        for item in str(v).split(","):
            if item.strip():
                out.append(int(item))
    return tuple(out)


_CONVERTERS = {
    "side": str, "type": int, "x": str, "alpha": str, "a": float, "b": float,
    "grid": int, "n": int, "N": lambda s: _parse_N([s]), "method": _parse_methods,
    "out": str, "format": str, "qtol": float,
    "literal_bound": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def read_config_file(path: str | Path) -> dict[str, object]:
    """``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, object] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: expected key = value with key in "
                              f"{', '.join(_CONVERTERS)}")
        try:
            values[key] = _CONVERTERS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return values


def _qtol_from_env() -> float | None:
    text = os.environ.get(QTOL_ENV)
    if text is None or not text.strip():
        return None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{QTOL_ENV} must be a decimal number, got {text!r}") from None


def build_config(args: argparse.Namespace, defaults: RunConfig,
                 allowed: tuple[str, ...] | None = None) -> RunConfig:
    """Flags override the environment, which overrides the file, which
    overrides ``defaults``. The environment only carries the tolerance.
    File keys outside ``allowed`` (default: all) are rejected."""
    values: dict[str, object] = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
        pinned = sorted(set(values) - set(allowed or _CONVERTERS))
        if pinned:
            raise ConfigError(f"{', '.join(pinned)} cannot be changed for {args.command}")
    env_qtol = _qtol_from_env()
    if env_qtol is not None:
        values["qtol"] = env_qtol
    for key in _CONVERTERS:
        flag = getattr(args, key, None)
        if flag is None or flag is False:
            continue
        if key == "N":
            flag = _parse_N(flag)
        elif key == "method":
            flag = _parse_methods(flag)
        values[key] = flag
    return replace(defaults, **values)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--side", choices=("left", "right"))
    p.add_argument("--type", type=int, choices=(1, 2, 3))
    p.add_argument("--x", help="expression in t, or lnt, logpow(g), rlogpow(g)")
    p.add_argument("--alpha", help="order expression in t with values in (0, 1)")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--grid", type=int, help="number of grid points")
    p.add_argument("--n", type=int)
    p.add_argument("--N", action="append", help="truncation index (repeatable or comma list)")
    p.add_argument("--method", help="comma list of closed, oracle, expansion, or all")
    p.add_argument("--literal-bound", action="store_true", dest="literal_bound",
                   help="use max|x_N'| in the first bound term instead of max|x_n'|")
    _add_output(p)


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (a directory for paper-left/paper-right)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--qtol", type=float, help=f"quadrature tolerance (env {QTOL_ENV})")
    p.add_argument("--config", help="file of key = value settings (flags win)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vohd", description="Variable-order Caputo-Hadamard derivatives.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("eval", help="evaluate one operator on a grid"))
    _add_common(sub.add_parser("compare", help="compare methods, with errors and bounds"))
    p = sub.add_parser("plot", help="render SVG panels from a CSV table")
    p.add_argument("csv", help="CSV file written by eval or compare")
    p.add_argument("--out", help="output stem (default: the CSV path)")
    p = sub.add_parser("selftest", help="run the built-in consistency suites")
    p.add_argument("--only", action="append", choices=tuple(selftest.SUITES),
                   help="restrict to a suite (repeatable)")
    p.add_argument("--qtol", type=float)
    for name in ("paper-left", "paper-right"):
        _add_output(sub.add_parser(name, help=f"reproduce the {name.split('-')[1]} experiment"))
    return parser

# }}}

# {{{ commands

PAPER = {
    "paper-left": RunConfig(command="compare", side="left", x="lnt", alpha="t/20",
                            a=1.0, b=5.0, grid=100, n=1, N=(10, 20, 30),
                            method=METHODS, format="both"),
    "paper-right": RunConfig(command="compare", side="right", x="rlogpow(1)", alpha="t/20",
                             a=1.0, b=5.0, grid=100, n=1, N=(2, 4, 6),
                             method=METHODS, format="both"),
}


def _write_outputs(text: str, cfg: RunConfig, title: str) -> None:
    if cfg.out is None:
        if cfg.format != "csv":
            raise ConfigError("SVG output needs --out")
        sys.stdout.write(text)
        return
    out = Path(cfg.out)
    if cfg.format in ("csv", "both"):
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    if cfg.format in ("svg", "both"):
        emit_plot(text, out, title)


def _title(cfg: RunConfig) -> str:
    return f"{cfg.side} type {cfg.type}, x = {cfg.x}, alpha = {cfg.alpha}"


def _cmd_table(args, compare: bool) -> int:
    defaults = RunConfig(command=args.command,
                         method=METHODS if compare else ("oracle",))
    cfg = build_config(args, defaults)
    if compare:
        text, summary = run_compare(cfg)
        for line in summary:
            print(line, file=sys.stderr)
    else:
        text = run_eval(cfg)
    _write_outputs(text, cfg, _title(cfg))
    return 0


def _cmd_paper(args) -> int:
    cfg = build_config(args, replace(PAPER[args.command], out=args.command),
                       allowed=("out", "format", "qtol"))
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for k in (1, 2, 3):
        run = replace(cfg, type=k, out=str(outdir / f"type{k}.csv"))
        text, summary = run_compare(run)
        for line in summary:
            print(line, file=sys.stderr)
        _write_outputs(text, run, _title(run))
    print(f"wrote {outdir}", file=sys.stderr)
    return 0


def _cmd_plot(args) -> int:
    try:
        text = Path(args.csv).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {args.csv}: {exc}") from exc
    for path in emit_plot(text, args.out or args.csv, Path(args.csv).stem):
        print(path)
    return 0


def _cmd_selftest(args) -> int:
    qtol = args.qtol
    if qtol is None:
        qtol = _qtol_from_env()
    try:
        cfg = QuadratureConfig() if qtol is None else QuadratureConfig(tol=qtol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    results = selftest.run(cfg, args.only)
    print(selftest.format_table(results))
    failed = sum(not r.passed for r in results)
    print(f"selftest: {'FAIL' if failed else 'PASS'} "
          f"({len(results) - failed}/{len(results)} cases passed, qtol {cfg.tol:g})")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command in ("eval", "compare"):
            return _cmd_table(args, compare=args.command == "compare")
        if args.command in PAPER:
            return _cmd_paper(args)
        if args.command == "plot":
            return _cmd_plot(args)
        return _cmd_selftest(args)
    except (ConfigError, PlotError) as exc:
        print(f"vohd: error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"vohd: {exc}", file=sys.stderr)
        return 3
    except VohdError as exc:
        print(f"vohd: numerical failure: {exc}", file=sys.stderr)
        return 3

# }}}


if __name__ == "__main__":
    sys.exit(main())

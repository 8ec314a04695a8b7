"""Command-line surface: reproduces the figure-level results as CSV/JSON/SVG files.

Every command is a pure function of its parsed configuration; identical
invocations produce byte-identical output files.  Exit codes: 0 success,
2 usage or validation error, 3 numerical non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .engine import NonConvergenceError
from .model import DiscriminationProblem
from .montecarlo import run_trials
from .optimizer import optimize_angle, scan_angles
from .stringlab import aggregate_by_length, enumerate_strings
from .strategies import (
    StrategyKind,
    StrategySpec,
    fbm_cost,
    lol_cost,
    ubm_cost,
)

__all__ = ["main"]

_PRESETS = {
    "fig1": {
        "command": "angle-scan",
        "theta": [math.pi / 8, math.pi / 12, math.pi / 16],
        "q1": 0.5,
        "epsilon": 0.125,
    },
    "fig3": {
        "command": "cost-curve",
        "theta": [math.pi / 12],
        "q1": 0.5,
        "epsilon_range": (0.01, 0.3, 25, "log"),
    },
    "fig4": {
        "command": "strings",
        "theta": [math.pi / 12],
        "q1": 0.5,
        "epsilon": 0.179,
        "strategy": ["fbm", "ubm", "gof"],
    },
}


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _rows_to_json(header: list[str], rows: list[list]) -> list[dict]:
    return [dict(zip(header, row)) for row in rows]


def _write_svg(path: str, series: list[tuple[str, list[tuple[float, float]]]],
               xlabel: str, ylabel: str) -> None:
    """Minimal self-contained scatter/line plot; one polyline per series."""
    width, height, margin = 640, 480, 60
    points = [p for _, pts in series for p in pts if math.isfinite(p[1])]
    if not points:
        raise ValueError("nothing to plot")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" '
        f'font-size="14">{xlabel}</text>',
        f'<text x="18" y="{height / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {height / 2:.1f})">{ylabel}</text>',
        f'<text x="{margin}" y="{height - margin + 20}" font-size="11">{_fmt(x0)}</text>',
        f'<text x="{width - margin}" y="{height - margin + 20}" text-anchor="end" '
        f'font-size="11">{_fmt(x1)}</text>',
        f'<text x="{margin - 5}" y="{height - margin}" text-anchor="end" '
        f'font-size="11">{_fmt(y0)}</text>',
        f'<text x="{margin - 5}" y="{margin}" text-anchor="end" font-size="11">{_fmt(y1)}</text>',
    ]
    for k, (label, pts) in enumerate(series):
        color = colors[k % len(colors)]
        finite = [(x, y) for x, y in pts if math.isfinite(y)]
        if not finite:
            continue
        path_d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in finite)
        parts.append(f'<polyline points="{path_d}" fill="none" stroke="{color}"/>')
        for x, y in finite:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>')
        parts.append(
            f'<text x="{width - margin + 5}" y="{margin + 16 * k}" font-size="12" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def _parse_epsilon_range(spec: str | tuple) -> list[float]:
    if isinstance(spec, tuple):
        lo, hi, count, scale = spec
    else:
        parts = spec.split(":")
        if len(parts) != 4:
            raise ValueError("epsilon range must be lo:hi:count:log|lin")
        lo, hi, count, scale = float(parts[0]), float(parts[1]), int(parts[2]), parts[3]
    if not 0.0 < lo < hi or count < 2 or scale not in ("log", "lin"):
        raise ValueError(f"bad epsilon range {spec!r}")
    if scale == "log":
        llo, lhi = math.log(lo), math.log(hi)
        return [math.exp(llo + i * (lhi - llo) / (count - 1)) for i in range(count)]
    return [lo + i * (hi - lo) / (count - 1) for i in range(count)]


def _parse_strategy(token: str) -> tuple[str, StrategySpec | None]:
    """Returns (name, spec); spec is None for 'gof' (angle found at run time)."""
    if token == "fbm":
        return token, StrategySpec(StrategyKind.FBM)
    if token == "ubm":
        return token, StrategySpec(StrategyKind.UBM)
    if token == "lol":
        return token, StrategySpec(StrategyKind.LOL)
    if token == "gof":
        return token, None
    if token.startswith("fixed:"):
        return token, StrategySpec(StrategyKind.FIXED_ANGLE, phi=float(token[6:]))
    raise ValueError(f"unknown strategy {token!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqdisc",
        description="Bounded-error sequential discrimination of two nonorthogonal qubit states",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("angle-scan", "cost-curve", "strings", "optimize", "simulate"):
        p = sub.add_parser(name)
        p.add_argument("--theta", type=float, action="append")
        p.add_argument("--q1", type=float)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--epsilon-range", dest="epsilon_range")
        p.add_argument("--strategy", action="append")
        p.add_argument("--resolution", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--coverage", type=float)
        p.add_argument("--max-depth", dest="max_depth", type=int)
        p.add_argument("--aggregate", action="store_true", default=None)
        p.add_argument("--format", dest="fmt", choices=("csv", "json", "svg"))
        p.add_argument("--preset", choices=sorted(_PRESETS))
        p.add_argument("--config", help="JSON config file; explicit flags win")
        p.add_argument("-o", "--output", required=True)
    return parser


class _Run:
    """Resolved configuration: flags over config file over preset over defaults."""

    def __init__(self, args: argparse.Namespace):
        layers = [{}]
        if args.preset:
            preset = dict(_PRESETS[args.preset])
            if preset.pop("command") != args.command:
                raise ValueError(f"preset {args.preset!r} belongs to another command")
            layers.append(preset)
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                layers.append(json.load(fh))
        flags = {k: v for k, v in vars(args).items()
                 if k not in ("command", "preset", "config", "output") and v is not None}
        layers.append(flags)
        merged = {}
        for layer in layers:
            merged.update(layer)
        self.command = args.command
        self.output = args.output
        self._cfg = merged

    def get(self, key, default=None):
        return self._cfg.get(key, default)

    @property
    def thetas(self) -> list[float]:
        theta = self.get("theta")
        if not theta:
            raise ValueError("--theta is required (or use a preset)")
        return list(theta) if isinstance(theta, (list, tuple)) else [theta]

    @property
    def problem(self) -> DiscriminationProblem:
        thetas = self.thetas
        if len(thetas) != 1:
            raise ValueError("this command takes a single --theta")
        return DiscriminationProblem(theta=thetas[0], q1=self.get("q1", 0.5))

    @property
    def epsilons(self) -> list[float]:
        rng = self.get("epsilon_range")
        if rng is not None:
            return _parse_epsilon_range(rng)
        eps = self.get("epsilon")
        if eps is None:
            raise ValueError("--epsilon or --epsilon-range is required")
        return [eps]

    @property
    def fmt(self) -> str:
        return self.get("fmt", "csv")


def _gof(problem, eps, resolution):
    phi_opt, result = optimize_angle(problem, eps, resolution=resolution)
    return phi_opt, result


def _cmd_angle_scan(run: _Run) -> None:
    eps = run.epsilons
    if len(eps) != 1:
        raise ValueError("angle-scan takes a single --epsilon")
    resolution = run.get("resolution", 2000)
    q1 = run.get("q1", 0.5)
    header = ["theta", "phi", "cost", "residual_mass", "bound_width", "note"]
    rows = []
    series = []
    for theta in run.thetas:
        problem = DiscriminationProblem(theta=theta, q1=q1)
        scan = scan_angles(problem, eps[0], 0.0, math.pi / 2 - 1e-9, resolution)
        pts = []
        for phi, result in scan.samples:
            if result is None:
                rows.append([theta, phi, None, None, None, scan.failures[phi]])
            else:
                rows.append([theta, phi, result.expected_copies,
                             result.residual_mass, result.bound_width, ""])
                pts.append((phi, result.expected_copies))
        series.append((f"theta={theta:.4f}", pts))
    if run.fmt == "csv":
        _write_csv(run.output, header, rows)
    elif run.fmt == "json":
        _write_json(run.output, _rows_to_json(header, rows))
    else:
        _write_svg(run.output, series, "measurement angle phi (rad)", "expected copies")


def _cmd_cost_curve(run: _Run) -> None:
    problem = run.problem
    if problem.q1 != 0.5:
        raise ValueError("cost-curve includes UBM and requires q1 = 0.5")
    resolution = run.get("resolution", 2000)
    header = ["epsilon", "neg_log_epsilon", "cost_fbm", "cost_ubm", "cost_lol",
              "cost_gof", "phi_opt"]
    rows = []
    for eps in run.epsilons:
        phi_opt, gof = _gof(problem, eps, resolution)
        rows.append([
            eps,
            -math.log(eps),
            fbm_cost(problem, eps).expected_copies,
            ubm_cost(problem, eps).expected_copies,
            lol_cost(problem, eps),
            gof.expected_copies,
            phi_opt,
        ])
    if run.fmt == "csv":
        _write_csv(run.output, header, rows)
    elif run.fmt == "json":
        _write_json(run.output, _rows_to_json(header, rows))
    else:
        series = [(name, [(r[1], r[idx]) for r in rows])
                  for name, idx in (("FBM", 2), ("UBM", 3), ("LOL", 4), ("GOF", 5))]
        _write_svg(run.output, series, "-ln(epsilon)", "expected copies")


def _cmd_strings(run: _Run) -> None:
    problem = run.problem
    eps = run.epsilons
    if len(eps) != 1:
        raise ValueError("strings takes a single --epsilon")
    eps = eps[0]
    names = run.get("strategy") or ["fbm"]
    if isinstance(names, str):
        names = [names]
    coverage = run.get("coverage", 0.998)
    max_depth = run.get("max_depth", 64)
    aggregate = bool(run.get("aggregate"))
    header = ["strategy", "string", "n", "prob", "true_error", "guess"]
    rows = []
    for name in names:
        name, spec = _parse_strategy(name)
        if spec is None:
            phi_opt, _ = _gof(problem, eps, run.get("resolution", 2000))
            spec = StrategySpec(StrategyKind.FIXED_ANGLE, phi=phi_opt)
        strings, _residual = enumerate_strings(problem, spec, eps, coverage, max_depth)
        if aggregate:
            for agg in aggregate_by_length(strings):
                rows.append([name, f"len={agg.n}", agg.n, agg.total_prob, agg.mean_error, ""])
        else:
            for s in strings:
                rows.append([name, s.label, s.n, s.prob, s.true_error, s.guess])
    if run.fmt == "csv":
        _write_csv(run.output, header, rows)
    elif run.fmt == "json":
        _write_json(run.output, _rows_to_json(header, rows))
    else:
        raise ValueError("strings supports csv or json output")


def _cmd_optimize(run: _Run) -> None:
    q1 = run.get("q1", 0.5)
    resolution = run.get("resolution", 2000)
    header = ["theta", "epsilon", "phi_opt", "cost", "bound_width"]
    rows = []
    for theta in run.thetas:
        problem = DiscriminationProblem(theta=theta, q1=q1)
        for eps in run.epsilons:
            phi_opt, result = _gof(problem, eps, resolution)
            rows.append([theta, eps, phi_opt, result.expected_copies, result.bound_width])
    if run.fmt == "csv":
        _write_csv(run.output, header, rows)
    elif run.fmt == "json":
        _write_json(run.output, _rows_to_json(header, rows))
    else:
        raise ValueError("optimize supports csv or json output")


def _cmd_simulate(run: _Run) -> None:
    problem = run.problem
    trials = run.get("trials", 100_000)
    seed = run.get("seed", 0)
    names = run.get("strategy") or ["ubm"]
    if isinstance(names, str):
        names = [names]
    if len(names) != 1:
        raise ValueError("simulate takes a single --strategy")
    name, spec = _parse_strategy(names[0])
    reports = []
    for eps in run.epsilons:
        actual = spec
        if actual is None:
            phi_opt, _ = _gof(problem, eps, run.get("resolution", 2000))
            actual = StrategySpec(StrategyKind.FIXED_ANGLE, phi=phi_opt)
        report = run_trials(problem, actual, eps, trials, seed)
        reports.append((eps, report))
    if run.fmt == "json":
        payload = [
            {
                "epsilon": eps,
                "neg_log_epsilon": -math.log(eps),
                "strategy": name,
                "trials": r.trials,
                "mean_copies": r.mean_copies,
                "mean_copies_stderr": r.mean_copies_stderr,
                "empirical_error": r.empirical_error,
                "min_copies": r.min_copies,
                "max_copies": r.max_copies,
                "seed": r.seed,
                "per_string": {k: list(v) for k, v in sorted(r.per_string.items())},
            }
            for eps, r in reports
        ]
        _write_json(run.output, payload if len(payload) > 1 else payload[0])
    elif run.fmt == "csv":
        header = ["epsilon", "string", "count", "errors", "observed_error", "observed_prob"]
        rows = []
        for eps, r in reports:
            for label, (count, errs) in sorted(r.per_string.items(),
                                               key=lambda kv: (-kv[1][0], kv[0])):
                rows.append([eps, label, count, errs, errs / count, count / r.trials])
        _write_csv(run.output, header, rows)
    else:
        if len(reports) < 2:
            raise ValueError("svg output needs an --epsilon-range")
        pts = [(-math.log(eps), r.mean_copies) for eps, r in reports]
        _write_svg(run.output, [(name, pts)], "-ln(epsilon)", "mean copies")


_COMMANDS = {
    "angle-scan": _cmd_angle_scan,
    "cost-curve": _cmd_cost_curve,
    "strings": _cmd_strings,
    "optimize": _cmd_optimize,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        run = _Run(args)
        _COMMANDS[run.command](run)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"seqdisc: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"seqdisc: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"seqdisc: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())

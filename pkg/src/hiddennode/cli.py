"""Command-line entry point.

Subcommands::

    hiddennode siso-copt   --alpha 4 [--poly]
    hiddennode mimo-betaopt --alpha 4 [--poly]
    hiddennode curve       --kind poisson-pi --grid 0.25:10:0.05 --out pi.csv
    hiddennode validate    --preset inflated --trials 100000 --seed 7
    hiddennode max-rate    --alpha 3 --bandwidth 2e6 [--n-antennas 4 --duty 0.25]

Exit codes: 0 success, 2 invalid input, 3 simulation disagrees with the
closed form.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Callable, Optional

import numpy as np

from . import mimo, ppp_field, siso
from .errors import ConfigurationError, DomainError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISAGREE = 3

CURVE_KINDS = ("siso-copt", "mimo-betaopt", "siso-objective", "mimo-objective", "poisson-pi")


@dataclass
class CurveSample:
    x: float
    y: float
    kind: str

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ConfigurationError(f"unknown curve kind {self.kind!r}")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"non-finite sample ({self.x}, {self.y}) for {self.kind}")


@dataclass
class RunConfig:
    """Everything a run needs; serializes to a flat JSON object."""

    alpha: float = 4.0
    loss_db: float = 0.0
    eta_i_db: float = -30.0
    rho: float = 1e-3
    lambda_rate: float = 1e-3
    r_link: float = 10.0
    sigma2: float = 1e-14
    n_info: float = 1024.0
    n_antennas: int = 1
    bandwidth: float = 1e6
    duty: Optional[float] = None
    c: Optional[float] = None
    kind: Optional[str] = None
    grid: Optional[str] = None
    trials: int = 100_000
    seed: int = 0
    workers: int = 1
    preset: Optional[str] = None
    target_p: float = 0.2
    out: Optional[str] = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def loss_l(self) -> float:
        return 10.0 ** (self.loss_db / 10.0)

    @property
    def eta_i(self) -> float:
        return 10.0 ** (self.eta_i_db / 10.0)

    def channel(self) -> siso.ChannelModel:
        return siso.ChannelModel(alpha=self.alpha, loss_l=self.loss_l, r_link=self.r_link)

    def field_params(self) -> ppp_field.PoissonFieldParams:
        return ppp_field.PoissonFieldParams(
            rho=self.rho,
            lambda_rate=self.lambda_rate,
            r_link=self.r_link,
            eta_i=self.eta_i,
            sigma2=self.sigma2,
            n_info=self.n_info,
            alpha=self.alpha,
            loss_l=self.loss_l,
        )


def parse_grid(spec: str) -> np.ndarray:
    """``lo:hi:step`` to an inclusive, evenly spaced grid."""
    try:
        lo, hi, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise ConfigurationError(f"grid must look like lo:hi:step, got {spec!r}") from None
    if not (step > 0 and hi >= lo and math.isfinite(hi)):
        raise ConfigurationError(f"empty grid {spec!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


def format_number(v: float) -> str:
    # Shortest repr that round-trips exactly.
    return repr(float(v))


def _optimum_report(alpha: float, value: float, objective: Callable[[float], float],
                    method: str, residual: Optional[float] = None) -> dict:
    if value > 0:
        obj = objective(value)
        if residual is None:
            residual = siso.stationarity_residual(objective, value)
    else:
        obj, residual = math.log(2.0) if alpha == 2 else float("nan"), 0.0
    return {
        "alpha": alpha,
        "c_opt": value,
        "objective_value": obj,
        "stationarity_residual": residual,
        "method": method,
    }


def cmd_siso_copt(cfg: RunConfig, poly: bool = False) -> dict:
    if not cfg.alpha >= 2:
        raise DomainError(f"alpha must be >= 2, got {cfg.alpha}")
    objective = lambda c: siso.siso_objective(c, cfg.alpha)
    if poly:
        return _optimum_report(cfg.alpha, siso.siso_copt_poly(cfg.alpha), objective, "polynomial")
    res = siso.siso_copt_exact(cfg.alpha)
    return _optimum_report(cfg.alpha, res.c_opt, objective, res.method, res.stationarity_residual)


def cmd_mimo_betaopt(cfg: RunConfig, poly: bool = False) -> dict:
    if not cfg.alpha >= 2:
        raise DomainError(f"alpha must be >= 2, got {cfg.alpha}")
    objective = lambda b: mimo.mimo_objective(b, cfg.alpha)
    if poly:
        report = _optimum_report(cfg.alpha, mimo.mimo_beta_opt_poly(cfg.alpha), objective, "polynomial")
    else:
        res = mimo.mimo_beta_opt_numeric(cfg.alpha)
        report = _optimum_report(cfg.alpha, res.c_opt, objective, res.method, res.stationarity_residual)
    report["beta_opt"] = report.pop("c_opt")
    return report


def curve_samples(kind: str, grid: np.ndarray, cfg: RunConfig) -> list[CurveSample]:
    if len(grid) == 0:
        raise ConfigurationError("empty grid")
    if kind == "siso-copt":
        ys = [siso.siso_copt_exact(a).c_opt for a in grid]
    elif kind == "mimo-betaopt":
        ys = [mimo.mimo_beta_opt_numeric(a).c_opt for a in grid]
    elif kind == "siso-objective":
        ys = siso.siso_objective(np.asarray(grid), cfg.alpha)
    elif kind == "mimo-objective":
        ys = mimo.mimo_objective(np.asarray(grid), cfg.alpha)
    elif kind == "poisson-pi":
        ys = [p for _, p in ppp_field.pi_curve(cfg.field_params(), grid)]
    else:
        raise ConfigurationError(f"unknown curve kind {kind!r}")
    return [CurveSample(float(x), float(y), kind) for x, y in zip(grid, ys)]


def render_curve(samples: list[CurveSample], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "kind"])
        for s in samples:
            writer.writerow([format_number(s.x), format_number(s.y), s.kind])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([asdict(s) for s in samples], indent=1) + "\n"
    raise ConfigurationError(f"unknown format {fmt!r}")


def cmd_curve(cfg: RunConfig) -> str:
    if cfg.kind is None or cfg.grid is None:
        raise ConfigurationError("curve needs --kind and --grid")
    text = render_curve(curve_samples(cfg.kind, parse_grid(cfg.grid), cfg), cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def validation_params(cfg: RunConfig) -> tuple[ppp_field.PoissonFieldParams, float]:
    c = cfg.c if cfg.c is not None else siso.siso_copt_exact(cfg.alpha).c_opt
    if cfg.preset == "inflated":
        return ppp_field.inflated_params(cfg.target_p, c, cfg.alpha, n_info=cfg.n_info,
                                         r_link=cfg.r_link), c
    if cfg.preset not in (None, "default"):
        raise ConfigurationError(f"unknown preset {cfg.preset!r}")
    return cfg.field_params(), c


def cmd_validate(cfg: RunConfig, analytic: Callable = ppp_field.analytic_pi) -> tuple[dict, bool]:
    """Simulate, compare with ``analytic`` and return the report and the verdict."""
    params, c = validation_params(cfg)
    report = ppp_field.simulate_collision_probability(
        c, params, cfg.trials, cfg.seed, workers=cfg.workers
    )
    p_analytic = analytic(c, params)
    ok = ppp_field.agrees(report, p_analytic)
    out = {
        "c": c,
        "params": asdict(params),
        "p_analytic": p_analytic,
        **asdict(report),
        "sigma": math.sqrt(p_analytic * (1.0 - p_analytic) / report.trials),
        "agree": ok,
    }
    return out, ok


def cmd_max_rate(cfg: RunConfig) -> dict:
    if cfg.n_antennas > 1 or cfg.duty is not None:
        d = 0.5 if cfg.duty is None else cfg.duty
        rate = mimo.max_average_rate_mimo(cfg.alpha, cfg.n_antennas, cfg.bandwidth, d)
        return {"link": "mimo", "alpha": cfg.alpha, "n_antennas": cfg.n_antennas,
                "bandwidth": cfg.bandwidth, "duty": d, "rate": rate,
                "duty_valid": siso.duty_cycle_valid(d)}
    rate = siso.max_average_rate_siso(cfg.alpha, cfg.bandwidth)
    return {"link": "siso", "alpha": cfg.alpha, "bandwidth": cfg.bandwidth, "rate": rate}


_FLAG_TO_KEY = {
    "alpha": "alpha", "loss_db": "loss_db", "eta_i_db": "eta_i_db", "rho": "rho",
    "lambda_": "lambda_rate", "r_link": "r_link", "sigma2": "sigma2", "n_info": "n_info",
    "n_antennas": "n_antennas", "bandwidth": "bandwidth", "duty": "duty", "c": "c",
    "kind": "kind", "grid": "grid", "trials": "trials", "seed": "seed", "workers": "workers",
    "preset": "preset", "target_p": "target_p", "out": "out", "format": "format",
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--alpha", type=float, help="path-loss exponent")
    p.add_argument("--loss-db", type=float, help="implementation loss in dB")
    p.add_argument("--eta-i-db", type=float, help="hidden-node INR threshold in dB")
    p.add_argument("--rho", type=float, help="hidden-node density per unit area")
    p.add_argument("--lambda", dest="lambda_", type=float, help="packet rate per hidden node")
    p.add_argument("--r-link", type=float, help="link length")
    p.add_argument("--sigma2", type=float, help="noise power")
    p.add_argument("--n-info", type=float, help="message size in bits")
    p.add_argument("--n-antennas", type=int, help="antennas per side (MIMO)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiddennode",
        description="Spectral efficiency that minimizes hidden-node interference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("siso-copt", "optimal SISO spectral efficiency"),
                           ("mimo-betaopt", "optimal per-antenna MIMO spectral efficiency")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument("--poly", action="store_true", help="use the cubic fit instead")

    p = sub.add_parser("curve", help="emit a curve as CSV or JSON")
    _add_common(p)
    p.add_argument("--kind", choices=CURVE_KINDS)
    p.add_argument("--grid", help="lo:hi:step, inclusive")

    p = sub.add_parser("validate", help="Monte-Carlo check of the Poisson-field formula")
    _add_common(p)
    p.add_argument("--c", type=float, help="spectral efficiency (default: SISO optimum)")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--preset", choices=("default", "inflated"))
    p.add_argument("--target-p", type=float, help="analytic probability for --preset inflated")
    # Negative control: scales the closed form to force a disagreement.
    p.add_argument("--analytic-scale", type=float, default=1.0, help=argparse.SUPPRESS)

    p = sub.add_parser("max-rate", help="largest average rate for the low-duty-cycle optimum")
    _add_common(p)
    p.add_argument("--bandwidth", type=float, help="allocated bandwidth in Hz")
    p.add_argument("--duty", type=float, help="duty cycle (MIMO)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigurationError("config file must hold a JSON object")
    cfg = RunConfig.from_dict(data)
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def _emit(obj: dict, out: Optional[str]) -> None:
    text = json.dumps(obj, indent=1) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "siso-copt":
            _emit(cmd_siso_copt(cfg, args.poly), cfg.out)
        elif args.command == "mimo-betaopt":
            _emit(cmd_mimo_betaopt(cfg, args.poly), cfg.out)
        elif args.command == "curve":
            text = cmd_curve(cfg)
            if not cfg.out:
                sys.stdout.write(text)
        elif args.command == "validate":
            scale = args.analytic_scale
            analytic = ppp_field.analytic_pi
            if scale != 1.0:
                analytic = lambda c, p: min(1.0, scale * ppp_field.analytic_pi(c, p))
            report, ok = cmd_validate(cfg, analytic)
            _emit(report, cfg.out)
            return EXIT_OK if ok else EXIT_DISAGREE
        elif args.command == "max-rate":
            _emit(cmd_max_rate(cfg), cfg.out)
    except (DomainError, ConfigurationError, ValueError, OSError) as exc:
        print(f"hiddennode: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

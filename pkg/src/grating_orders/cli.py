"""Command-line interface: figure data, order tables, occupation queries, experiments.

Exit codes: 0 success, 2 invalid usage or parameters (with a one-line
diagnostic naming the violated precondition), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .coupling import CouplingScenario, PulsePair, bias_report, omega_ex, synthesize_pulse_train
from .diffraction import GratingSpec, equivalent_order, truncation_alpha
from .figures import (
    FIGURE_IDS,
    FigureDataset,
    WAVELENGTH_NM,
    build_figure,
    dataset_from_order_table,
    write_dataset,
)
from .orders import CurveKind, InclusionRule, curve, occupation_value, order_table
from .quadrature import QuadratureError

OUTDIR_ENV = "GRATING_ORDERS_OUTDIR"

# Control-grating band: |omega - 1| below this is reported as ordinary.
ORDINARY_BAND = 0.005

# Alpha displacement realizing the one-sided threshold forms 'j-' / 'j+'.
THRESHOLD_OFFSET = 1e-6

_PI_FORM = re.compile(r"^(?P<coef>[-+]?[0-9]*\.?[0-9]*)\s*pi\s*(?:/\s*(?P<div>[0-9]+\.?[0-9]*))?$")


def parse_alpha(text: str) -> float:
    """Parse an alpha value: plain float or symbolic multiple of pi.

    Accepts forms like '3.1', 'pi', '3pi', '3pi/2', '-pi/4'.
    """
    s = text.strip().lower()
    m = _PI_FORM.match(s)
    if m:
        coef = m.group("coef")
        value = math.pi * (float(coef) if coef not in ("", "+", "-") else float(coef + "1"))
        if m.group("div"):
            value /= float(m.group("div"))
        return value
    return float(s)


def parse_j_equiv(text: str) -> float:
    """Parse a j-equivalent truncation: a number, or 'j-'/'j+' threshold forms.

    'j-'/'j+' place the truncation one edge offset (1e-6 in alpha) inside or
    outside the j-th order threshold of a sigma = 0.5 ruling.
    """
    s = text.strip()
    if s and s[-1] in "+-":
        j = int(s[:-1])
        sign = 1.0 if s[-1] == "+" else -1.0
        alpha = j * math.pi * 0.5 + sign * THRESHOLD_OFFSET
        return alpha / (math.pi * 0.5)
    return float(s)


def parse_length_nm(text: str) -> float:
    """Parse a length as nanometres; values below 1e-2 are taken as metres.

    Slit widths and optical wavelengths are never below 1e-2 nm nor above
    1e-2 m, so the two unit conventions cannot collide.
    """
    v = float(text)
    if v <= 0:
        raise ValueError(f"length must be positive, got {text!r}")
    return v * 1e9 if v < 1e-2 else v


def parse_sigma(text: str) -> float:
    """Parse a duty cycle: decimal ('0.125') or fraction ('1/8')."""
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        return float(num) / float(den)
    return float(s)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI invocation, ready for dispatch."""

    subcommand: str
    figure_id: str | None = None
    w_nm: float | None = None
    wavelength_nm: float = WAVELENGTH_NM
    sigma: float | None = None
    n_slits: int | None = None
    alpha_min: float | None = None
    alpha_max: float | None = None
    samples: int | None = None
    rule: InclusionRule = InclusionRule()
    j_equiv: float | None = None
    j_min: float | None = None
    j_max: float | None = None
    quantity: str | None = None
    out: Path | None = None
    fmt: str = "csv"
    seed: int = 0
    scenario: CouplingScenario | None = None
    cycles: int = 100
    noise_sd: float = 0.0
    baseline: float = 0.2
    pulse_pair: PulsePair | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        common = {
            "subcommand": args.subcommand,
            "fmt": getattr(args, "fmt", "csv"),
            "out": getattr(args, "out", None),
            "seed": getattr(args, "seed", 0),
        }
        if hasattr(args, "rule"):
            common["rule"] = InclusionRule(mode=args.rule, eps_tie=args.eps_tie)
        if args.subcommand == "figure":
            return cls(
                figure_id=args.figure_id,
                sigma=args.sigma,
                n_slits=args.n_slits,
                alpha_min=args.alpha_min,
                alpha_max=args.alpha_max,
                samples=args.samples,
                **common,
            )
        if args.subcommand in ("table", "omega"):
            return cls(
                w_nm=args.w,
                wavelength_nm=args.wavelength,
                j_equiv=args.j_equiv,
                sigma=args.sigma,
                n_slits=getattr(args, "n_slits", None),
                **common,
            )
        if args.subcommand == "experiment":
            pair = None
            if (args.dv_g is None) != (args.dv_gc is None):
                raise ValueError("--dv-g and --dv-gc must be given together")
            if args.dv_g is not None:
                pair = PulsePair(dv_g=args.dv_g, dv_gc=args.dv_gc)
            scenario = CouplingScenario(
                omega_id=args.omega_id,
                p_ratio=args.p_ratio,
                f_g=args.f_g,
                f_r=args.f_r,
                eta=args.eta,
            )
            return cls(
                scenario=scenario,
                cycles=args.cycles,
                noise_sd=args.noise_sd,
                baseline=args.baseline,
                pulse_pair=pair,
                **common,
            )
        if args.subcommand == "sweep":
            if not args.j_min < args.j_max:
                raise ValueError("--j-min must be below --j-max")
            return cls(
                quantity=args.quantity,
                j_min=args.j_min,
                j_max=args.j_max,
                samples=args.samples,
                sigma=args.sigma,
                **common,
            )
        raise ValueError(f"unknown subcommand {args.subcommand!r}")


def _default_out(name: str, fmt: str) -> Path:
    base = Path(os.environ.get(OUTDIR_ENV, "."))
    return base / f"{name}.{fmt}"


def _add_rule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rule", choices=("inclusive", "strict_below"), default="inclusive",
                   help="order inclusion at truncation (default inclusive)")
    p.add_argument("--eps-tie", type=float, default=1e-9,
                   help="tie tolerance for the inclusive rule (default 1e-9)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    p.add_argument("--out", type=Path, default=None,
                   help=f"output path (default <name>.<fmt> under ${OUTDIR_ENV} or cwd)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grating-orders",
        description="Figure data and occupation arithmetic for grating orders near threshold.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("figure", help="write one of the standard figure datasets")
    p.add_argument("--id", required=True, choices=FIGURE_IDS, dest="figure_id")
    p.add_argument("--sigma", type=parse_sigma, default=None, help="duty cycle, e.g. 0.5 or 1/8")
    p.add_argument("--n-slits", type=int, default=None)
    p.add_argument("--alpha-min", type=parse_alpha, default=None, help="e.g. pi or 3pi/2")
    p.add_argument("--alpha-max", type=parse_alpha, default=None)
    p.add_argument("--samples", type=int, default=None)
    _add_rule_flags(p)
    _add_output_flags(p)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("table", help="per-order probability/energy table for one grating")
    p.add_argument("--w", type=parse_length_nm, default=None,
                   help="slit width (nm, or metres if < 1e-2)")
    p.add_argument("--lambda", dest="wavelength", type=parse_length_nm, default=WAVELENGTH_NM,
                   help="wavelength (nm, or metres if < 1e-2; default 633 nm)")
    p.add_argument("--j-equiv", type=parse_j_equiv, default=None,
                   help="alternative to --w: j-equivalent truncation (supports 3- / 3+)")
    p.add_argument("--sigma", type=parse_sigma, default=0.5)
    p.add_argument("--n-slits", type=int, default=257)
    _add_rule_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("omega", help="occupation value at a truncation point")
    p.add_argument("--j-equiv", type=parse_j_equiv, default=None,
                   help="j-equivalent truncation (supports 3- / 3+)")
    p.add_argument("--w", type=parse_length_nm, default=None)
    p.add_argument("--lambda", dest="wavelength", type=parse_length_nm, default=WAVELENGTH_NM)
    p.add_argument("--sigma", type=parse_sigma, default=0.5)
    _add_rule_flags(p)

    p = sub.add_parser("experiment", help="bias report and synthetic pulse-train measurement")
    p.add_argument("--omega-id", type=float, default=1.025)
    p.add_argument("--p-ratio", type=float, default=100.0)
    p.add_argument("--f-g", type=float, default=0.4)
    p.add_argument("--f-r", type=float, default=0.01)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--cycles", type=int, default=100)
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--baseline", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dv-g", type=float, default=None,
                   help="measured pulse height, reference blocked (with --dv-gc)")
    p.add_argument("--dv-gc", type=float, default=None,
                   help="measured pulse height, coupling active")

    p = sub.add_parser("sweep", help="sample a truncation-dependent quantity over a j range")
    p.add_argument("--quantity", choices=[k.value for k in CurveKind],
                   default=CurveKind.OCCUPATION.value)
    p.add_argument("--j-min", type=float, required=True)
    p.add_argument("--j-max", type=float, required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--sigma", type=parse_sigma, default=0.5)
    _add_rule_flags(p)
    _add_output_flags(p)

    return parser


def _run_figure(config: RunConfig) -> int:
    dataset = build_figure(
        config.figure_id,
        sigma=config.sigma,
        n_slits=config.n_slits,
        alpha_min=config.alpha_min,
        alpha_max=config.alpha_max,
        samples=config.samples,
        rule=config.rule,
    )
    out = config.out or _default_out(config.figure_id, config.fmt)
    write_dataset(dataset, out, config.fmt)
    print(f"wrote {out} ({dataset.rows.shape[0]} rows)")
    return 0


def _spec_from_config(config: RunConfig) -> GratingSpec:
    n_slits = config.n_slits if config.n_slits is not None else 257
    if config.j_equiv is not None:
        at = config.j_equiv * math.pi * config.sigma
        return GratingSpec.from_truncation(at, config.wavelength_nm, config.sigma, n_slits)
    if config.w_nm is None:
        raise ValueError("either --w or --j-equiv is required")
    return GratingSpec.from_sigma(config.w_nm, config.sigma, config.wavelength_nm, n_slits)


def _run_table(config: RunConfig) -> int:
    spec = _spec_from_config(config)
    table = order_table(spec, config.rule)
    dataset = dataset_from_order_table(
        table, figure_id="table", extra_params={"j_equiv": equivalent_order(spec)}
    )
    out = config.out or _default_out("table", config.fmt)
    write_dataset(dataset, out, config.fmt)
    print(f"wrote {out} ({dataset.rows.shape[0]} rows)")
    print(f"grating j-equiv {equivalent_order(spec):.4f}: "
          f"P_r = {table.p_r:.6f}, E_r = {table.e_r:.6f}, omega = {table.omega:.6f}")
    return 0


def _classify(omega: float) -> str:
    if abs(omega - 1.0) <= ORDINARY_BAND:
        return "ordinary (control)"
    return "enriched" if omega > 1.0 else "depleted"


def _run_omega(config: RunConfig) -> int:
    if config.j_equiv is not None:
        at = config.j_equiv * math.pi * config.sigma
        j_equiv = config.j_equiv
    elif config.w_nm is not None:
        spec = GratingSpec.from_sigma(config.w_nm, config.sigma, config.wavelength_nm, 257)
        at = float(truncation_alpha(spec))
        j_equiv = equivalent_order(spec)
    else:
        raise ValueError("either --w or --j-equiv is required")
    omega = occupation_value(at, config.sigma, config.rule)
    print(f"j_equiv: {j_equiv:.6f}")
    print(f"alpha_t: {at!r}")
    print(f"P_r: {1.0 / omega:.6f}")
    print(f"omega: {omega:.6f}")
    print(f"classification: {_classify(omega)}")
    return 0


def _run_experiment(config: RunConfig) -> int:
    if config.pulse_pair is not None:
        value = omega_ex(config.pulse_pair)
        print(f"omega_ex: {value:.6f}")
        print(f"classification: {_classify(value)}")
        return 0
    scenario = config.scenario
    report = bias_report(scenario)
    for line in report.summary_lines():
        print(line)
    train = synthesize_pulse_train(
        scenario.omega_id, scenario, baseline_bias=config.baseline,
        cycles=config.cycles, noise_sd=config.noise_sd, seed=config.seed,
    )
    print(f"synthetic pulse pair:   dv_g={train.pulses.dv_g:.6f} dv_gc={train.pulses.dv_gc:.6f}")
    print(f"recovered omega:        {train.omega_recovered:.6f}"
          f" (predicted {train.omega_predicted:.6f})")
    return 0


def _run_sweep(config: RunConfig) -> int:
    lo = config.j_min * math.pi * config.sigma
    hi = config.j_max * math.pi * config.sigma
    c = curve(config.quantity, config.sigma, (lo, hi), config.samples, config.rule)
    rows = np.column_stack([c.abscissa, c.abscissa / (math.pi * config.sigma), c.ordinate])
    dataset = FigureDataset(
        figure_id="sweep",
        params={
            "quantity": config.quantity,
            "sigma": config.sigma,
            "j_min": config.j_min,
            "j_max": config.j_max,
            "samples": config.samples,
            "rule": config.rule.mode,
        },
        columns=("alpha_t", "j_equiv", config.quantity),
        rows=rows,
    )
    out = config.out or _default_out("sweep", config.fmt)
    write_dataset(dataset, out, config.fmt)
    print(f"wrote {out} ({dataset.rows.shape[0]} rows)")
    return 0


_RUNNERS = {
    "figure": _run_figure,
    "table": _run_table,
    "omega": _run_omega,
    "experiment": _run_experiment,
    "sweep": _run_sweep,
}


def run(config: RunConfig) -> int:
    """Dispatch a validated configuration to its subcommand runner."""
    return _RUNNERS[config.subcommand](config)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(RunConfig.from_args(args))
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

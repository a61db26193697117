"""
mimo-dof command line

Subcommands:
  bounds    closed-form bounds for an interference channel tuple
  table     Monte Carlo check of the tabulated interference channel DoF
  estimate  rate curve and fitted slope for one scheme
  coop      transmit-only against share-and-transmit on a distance geometry
  relay     relay channel bound
  xz        X channel lower bound and Z channel bounds

Knobs come from the command line, else the scenario file, else MIMO_DOF_*
environment variables (a .env file is honoured).
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from .config import Defaults, read_scenario_file
from .errors import ConfigError, DofError, EstimationError
from .estimator import estimate_dof, sweep_rates
from .formulas import TABLE_CONFIGS, RelayConfig, dof_int_resolve
from .network import AntennaConfig, LinkGains, SnrGrid, parse_counts, snr_grid
from .report import (
    ResultRow,
    curve_rows,
    generate_bounds_report,
    generate_relay_report,
    generate_xz_report,
    plot_script,
    render_csv,
    slope_row,
)
from .schemes import SCHEMES, get_scheme, rate_int_zf_network

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_ERROR = 2

COOP_M = 4
COOP_N = 1


@dataclass(frozen=True)
class Scenario:
    """Fully resolved knobs of one run; together with the version it pins every output byte"""
    command: str
    config: Optional[str]
    scheme: Optional[str]
    trials: int
    snr_lo: float
    snr_hi: float
    snr_step: float
    seed: int
    gamma: float
    tolerance: float
    workers: int
    out: Optional[str]
    d_tt: float
    d_tr: float
    m: int
    n: int

    def grid(self) -> SnrGrid:
        return snr_grid(self.snr_lo, self.snr_hi, self.snr_step)

    def header(self) -> Dict[str, object]:
        """Values echoed ahead of every output: `#` lines in text and CSV, a `header` object in JSON"""
        header: Dict[str, object] = {"mimo-dof": __version__, "command": self.command}
        if self.config is not None:
            header["config"] = self.config
        if self.scheme is not None:
            header["scheme"] = self.scheme
        header.update({
            "trials": self.trials,
            "snr-lo": self.snr_lo,
            "snr-hi": self.snr_hi,
            "snr-step": self.snr_step,
            "seed": self.seed,
            "gamma": self.gamma,
        })
        if self.command == "table":
            header["tolerance"] = self.tolerance
        if self.command == "coop":
            header.update({"m": self.m, "n": self.n, "d-tt": self.d_tt, "d-tr": self.d_tr})
        return header


def _cast(key: str, raw: str, cast: Callable):
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"Scenario value for '{key}' is not a valid {cast.__name__}: {raw!r}") from exc


def _shift_scheme_positional(args: argparse.Namespace) -> None:
    # `estimate LABEL` with the counts left to the scenario file
    if args.command == "estimate" and args.scheme is None and args.config in SCHEMES:
        args.scheme, args.config = args.config, None


def resolve_scenario(args: argparse.Namespace, defaults: Defaults) -> Scenario:
    """Merge command line, scenario file and environment defaults; a knob set twice is an error"""
    _shift_scheme_positional(args)
    file_values = read_scenario_file(args.scenario) if getattr(args, "scenario", None) else {}

    def pick(key: str, cast: Callable, default):
        cli = getattr(args, key.replace("-", "_"), None)
        if key in file_values:
            if cli is not None:
                raise ConfigError(f"'{key}' is set both on the command line and in {args.scenario}")
            return _cast(key, file_values[key], cast)
        return default if cli is None else cli

    scenario = Scenario(
        command=args.command,
        config=pick("config", str, None),
        scheme=pick("scheme", str, None),
        trials=pick("trials", int, defaults.trials),
        snr_lo=pick("snr-lo", float, defaults.snr_lo),
        snr_hi=pick("snr-hi", float, defaults.snr_hi),
        snr_step=pick("snr-step", float, defaults.snr_step),
        seed=pick("seed", int, defaults.seed),
        gamma=pick("gamma", float, defaults.gamma),
        tolerance=defaults.tolerance if getattr(args, "tolerance", None) is None else args.tolerance,
        workers=pick("workers", int, defaults.workers),
        out=pick("out", str, None),
        d_tt=pick("d-tt", float, 1.0),
        d_tr=pick("d-tr", float, 1.0),
        m=pick("m", int, COOP_M),
        n=pick("n", int, COOP_N),
    )
    if scenario.trials < 1:
        raise ConfigError(f"trials must be at least 1, got {scenario.trials}")
    if scenario.workers < 1:
        raise ConfigError(f"workers must be at least 1, got {scenario.workers}")
    return scenario


def _require(value: Optional[str], what: str) -> str:
    if value is None:
        raise ConfigError(f"Missing {what}: pass it on the command line or as a scenario key")
    return value


def cmd_bounds(scenario: Scenario, output_format: str) -> str:
    config = AntennaConfig.parse(_require(scenario.config, "antenna configuration"))
    return generate_bounds_report(config, output_format, scenario.header())


def cmd_table(scenario: Scenario) -> Tuple[List[ResultRow], bool]:
    """One slope row per tabulated configuration; False if any misses the tolerance"""
    grid = scenario.grid()
    rows: List[ResultRow] = []
    passed = True
    for index, (config, exact) in enumerate(TABLE_CONFIGS, start=1):
        scenario_id = f"table-{index:02d}"
        bounds = dof_int_resolve(config)
        try:
            curve = sweep_rates(rate_int_zf_network, config, None, grid, scenario.trials,
                                scenario.seed, scheme_id="int-zf", workers=scenario.workers)
            estimate = estimate_dof(curve)
        except DofError as exc:
            raise EstimationError(f"{scenario_id} ({config}): {exc}") from exc
        rows.append(slope_row(scenario_id, str(config), "int-zf", estimate, bounds, scenario.seed))
        if abs(estimate.dof_hat - exact) > scenario.tolerance:
            passed = False
            logger.warning("%s (%s): estimated %.3f, expected %d (tolerance %g)",
                           scenario_id, config, estimate.dof_hat, exact, scenario.tolerance)
    return rows, passed


def cmd_estimate(scenario: Scenario) -> List[ResultRow]:
    """Rate curve and slope for one scheme on one configuration"""
    spec = get_scheme(_require(scenario.scheme, "scheme label"))
    counts = parse_counts(_require(scenario.config, "antenna configuration"))
    config = spec.resolve(counts)
    label = ",".join(str(c) for c in counts)
    bounds = spec.bounds(config)
    curve = sweep_rates(spec.rate, config, None, scenario.grid(), scenario.trials,
                        scenario.seed, scheme_id=spec.label, workers=scenario.workers)
    estimate = estimate_dof(curve)
    rows = curve_rows("estimate", label, curve, bounds, scenario.seed)
    rows.append(slope_row("estimate", label, spec.label, estimate, bounds, scenario.seed))
    return rows


def cmd_coop(scenario: Scenario) -> List[ResultRow]:
    """
    Transmit-only (the interference construction) against share-and-transmit
    on the symmetric (m, n, m, n) network. Both schemes see the same draws.
    """
    gains = LinkGains.from_geometry(scenario.d_tr, scenario.d_tt, scenario.gamma)
    config = AntennaConfig(scenario.m, scenario.n, scenario.m, scenario.n)
    bounds = dof_int_resolve(config)
    grid = scenario.grid()
    schemes = (("transmit-only", rate_int_zf_network), ("share-transmit", get_scheme("share-transmit").rate))
    rows: List[ResultRow] = []
    for label, rate in schemes:
        curve = sweep_rates(rate, config, gains, grid, scenario.trials, scenario.seed,
                            scheme_id=label, workers=scenario.workers)
        rows.extend(curve_rows("coop", str(config), curve, bounds, scenario.seed))
        rows.append(slope_row("coop", str(config), label, estimate_dof(curve), bounds, scenario.seed))
    return rows


def build_parser() -> argparse.ArgumentParser:
    run_options = argparse.ArgumentParser(add_help=False)
    run_options.add_argument("--trials", type=int, help="Channel draws averaged per SNR point")
    run_options.add_argument("--snr-lo", type=float, help="Lowest SNR in dB")
    run_options.add_argument("--snr-hi", type=float, help="Highest SNR in dB")
    run_options.add_argument("--snr-step", type=float, help="SNR step in dB")
    run_options.add_argument("--seed", type=int, help="Master seed")
    run_options.add_argument("--gamma", type=float, help="Path-loss exponent")
    run_options.add_argument("--workers", type=int, help="Threads used for Monte Carlo trials")
    run_options.add_argument("--out", help="Write the output to this file instead of stdout")
    run_options.add_argument("--scenario", help="key = value scenario file")
    run_options.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    run_options.add_argument("-v", "--verbose", action="store_true", help="Log at INFO level")

    report_options = argparse.ArgumentParser(add_help=False)
    report_options.add_argument("--format", choices=["text", "json", "csv"], default="text", help="Report format")

    parser = argparse.ArgumentParser(prog="mimo-dof", description="Degrees of freedom of multiuser MIMO channels")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    bounds_parser = subparsers.add_parser("bounds", parents=[run_options, report_options],
                                          help="Interference channel bounds for m1,n1,m2,n2")
    bounds_parser.add_argument("config", nargs="?", help="Antenna counts m1,n1,m2,n2")

    table_parser = subparsers.add_parser("table", parents=[run_options], help="Check the tabulated DoF values")
    table_parser.add_argument("--tolerance", type=float, help="Allowed |estimate - exact|")

    estimate_parser = subparsers.add_parser("estimate", parents=[run_options], help="Estimate the DoF of a scheme")
    estimate_parser.add_argument("config", nargs="?",
                                 help="Antenna counts, arity depends on the scheme; a lone scheme label is also accepted")
    estimate_parser.add_argument("scheme", nargs="?", help="Scheme label, given after the counts")
    estimate_parser.add_argument("--plot-script", help="Also write a gnuplot script for the curve")

    coop_parser = subparsers.add_parser("coop", parents=[run_options], help="Transmit-only vs share-and-transmit")
    coop_parser.add_argument("--m", type=int, help=f"Antennas per transmitter (default {COOP_M})")
    coop_parser.add_argument("--n", type=int, help=f"Antennas per receiver (default {COOP_N})")
    coop_parser.add_argument("--d-tt", type=float, help="Distance between the transmitters (default 1)")
    coop_parser.add_argument("--d-tr", type=float, help="Distance from each transmitter to each receiver (default 1)")
    coop_parser.add_argument("--plot-script", help="Also write a gnuplot script for the curves")

    relay_parser = subparsers.add_parser("relay", parents=[run_options, report_options],
                                         help="Relay channel bound for ms,mr,md")
    relay_parser.add_argument("config", nargs="?", help="Antenna counts ms,mr,md")

    xz_parser = subparsers.add_parser("xz", parents=[run_options, report_options],
                                      help="X and Z channel bounds for m1,n1,m2,n2")
    xz_parser.add_argument("config", nargs="?", help="Antenna counts m1,n1,m2,n2")

    return parser


def configure_logging(args: argparse.Namespace, defaults: Defaults) -> None:
    level_name = (args.log_level or ("INFO" if args.verbose else defaults.log_level)).upper()
    level = logging.getLevelName(level_name)
    if not isinstance(level, int):
        raise ConfigError(f"Unknown log level {level_name!r}")
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)


def _write_plot_script(path: Optional[str], rows: List[ResultRow], title: str, out: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(plot_script(rows, title, csv_name=out or ""))
        logger.info("Wrote plot script %s", path)


def run(args: argparse.Namespace, defaults: Defaults) -> int:
    scenario = resolve_scenario(args, defaults)
    logger.info("Running %s", scenario.command)

    if args.command == "bounds":
        _emit(cmd_bounds(scenario, args.format), scenario.out)

    elif args.command == "xz":
        config = AntennaConfig.parse(_require(scenario.config, "antenna configuration"))
        _emit(generate_xz_report(config, args.format, scenario.header()), scenario.out)

    elif args.command == "relay":
        relay = RelayConfig(*parse_counts(_require(scenario.config, "relay configuration"), 3))
        _emit(generate_relay_report(relay, args.format, scenario.header()), scenario.out)

    elif args.command == "table":
        rows, passed = cmd_table(scenario)
        _emit(render_csv(rows, scenario.header()), scenario.out)
        if not passed:
            return EXIT_TOLERANCE

    elif args.command == "estimate":
        rows = cmd_estimate(scenario)
        _emit(render_csv(rows, scenario.header()), scenario.out)
        _write_plot_script(args.plot_script, rows, f"{scenario.scheme} on {scenario.config}", scenario.out)

    elif args.command == "coop":
        rows = cmd_coop(scenario)
        _emit(render_csv(rows, scenario.header()), scenario.out)
        title = f"d_tt = {scenario.d_tt:g}, d_tr = {scenario.d_tr:g}"
        _write_plot_script(args.plot_script, rows, title, scenario.out)

    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_ERROR

    try:
        defaults = Defaults.from_env()
        configure_logging(args, defaults)
        return run(args, defaults)
    except DofError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

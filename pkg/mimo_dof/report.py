"""
Result rows and report generation

CSV output goes through pandas; bounds, relay and X/Z reports come in text or
JSON form. A gnuplot companion script can be emitted next to any sweep.
"""

import json
import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional

import pandas as pd

from .errors import EstimationError
from .estimator import RateCurve, SlopeEstimate
from .formulas import (
    DofBounds,
    RelayConfig,
    dof_cooperative_bc,
    dof_int_resolve,
    dof_relay_upper,
    dof_x_lower,
    dof_z,
    genie_bounds,
)
from .network import AntennaConfig

CSV_COLUMNS = (
    "scenario",
    "config",
    "scheme",
    "snr_db",
    "sum_rate",
    "dof_inner",
    "dof_outer",
    "dof_exact",
    "dof_hat",
    "stderr",
    "seed",
)

SLOPE_SUFFIX = ":slope"


@dataclass
class ResultRow:
    """One CSV line: a curve point or (with snr_db unset) a fitted slope"""
    scenario: str
    config: str
    scheme: str
    snr_db: Optional[float]
    sum_rate: Optional[float]
    dof_inner: int
    dof_outer: int
    dof_exact: Optional[int]
    dof_hat: Optional[float]
    stderr: Optional[float]
    seed: int

    def __post_init__(self):
        for name in ("snr_db", "sum_rate", "dof_hat", "stderr"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise EstimationError(f"Field {name} of row {self.scenario}/{self.scheme} is not finite: {value!r}")
        if (self.dof_exact is not None) != (self.dof_inner == self.dof_outer):
            raise EstimationError(
                f"dof_exact must be set exactly when inner == outer "
                f"({self.dof_inner}, {self.dof_outer}, {self.dof_exact})"
            )


def curve_rows(scenario: str, config: str, curve: RateCurve, bounds: DofBounds, seed: int) -> List[ResultRow]:
    return [
        ResultRow(scenario, config, curve.scheme_id, p.snr_db, p.sum_rate,
                  bounds.inner, bounds.outer, bounds.exact, None, None, seed)
        for p in curve.points
    ]


def slope_row(scenario: str, config: str, scheme_id: str, estimate: SlopeEstimate,
              bounds: DofBounds, seed: int) -> ResultRow:
    return ResultRow(scenario, config, scheme_id + SLOPE_SUFFIX, None, None,
                     bounds.inner, bounds.outer, bounds.exact, estimate.dof_hat, estimate.stderr, seed)


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def rows_to_frame(rows: Iterable[ResultRow]) -> pd.DataFrame:
    """Rows sorted by scenario, scheme and SNR (slope rows last), every cell formatted as text"""
    frame = pd.DataFrame([asdict(r) for r in rows], columns=list(CSV_COLUMNS))
    if not frame.empty:
        frame = frame.sort_values(["scenario", "scheme", "snr_db"], kind="stable", na_position="last")
    formatted = {
        column: [_format_value(None if _missing(v) else v) for v in frame[column].tolist()]
        for column in CSV_COLUMNS
    }
    return pd.DataFrame(formatted, columns=list(CSV_COLUMNS), dtype=object)


def _missing(value) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value))


def _header_lines(header: Optional[Dict[str, object]]) -> str:
    return "".join(f"# {key} = {_format_value(value)}\n" for key, value in (header or {}).items())


def render_csv(rows: Iterable[ResultRow], header: Optional[Dict[str, object]] = None) -> str:
    """CSV text with LF line endings; header entries become leading `#` lines"""
    body = rows_to_frame(rows).to_csv(index=False, lineterminator="\n")
    return _header_lines(header) + body


def _render_summary(summary: Dict[str, object], header: Optional[Dict[str, object]]) -> str:
    if header:
        summary = {**summary, "header": dict(header)}
    return json.dumps(summary, indent=2)


def bounds_summary(config: AntennaConfig) -> Dict[str, object]:
    interference = dof_int_resolve(config)
    z = dof_z(config)
    return {
        "config": str(config),
        "inner": interference.inner,
        "outer": interference.outer,
        "exact": interference.exact,
        "result": interference.describe(),
        "outer_bounds": genie_bounds(config),
        "x_lower": dof_x_lower(config),
        "z_inner": z.inner,
        "z_outer": z.outer,
        "cooperative_bc": dof_cooperative_bc(config),
    }


def generate_bounds_report(config: AntennaConfig, output_format: str = "text",
                           header: Optional[Dict[str, object]] = None) -> str:
    """Interference, X and Z channel bounds for one antenna tuple"""
    summary = bounds_summary(config)
    if output_format == "json":
        return _render_summary(summary, header)
    if output_format == "csv":
        rows = [
            ResultRow("bounds", str(config), "int", None, None, summary["inner"], summary["outer"],
                      summary["exact"], None, None, 0),
        ]
        z = dof_z(config)
        rows.append(ResultRow("bounds", str(config), "z", None, None, z.inner, z.outer, z.exact, None, None, 0))
        return render_csv(rows, header)

    report = []
    report.append(f"DoF Bounds Report: ({config})")
    report.append("=" * 50)
    report.append(f"Interference channel inner bound: {summary['inner']}")
    report.append(f"Interference channel outer bound: {summary['outer']}")
    report.append(f"Result: {summary['result']}")
    report.append("\nApplicable outer bounds:")
    for name, value in summary["outer_bounds"].items():
        report.append(f"  {name}: {value}")
    report.append(f"\nX channel lower bound: {summary['x_lower']}")
    report.append(f"Z channel: {dof_z(config).describe()}")
    report.append(f"Free transmitter cooperation: {summary['cooperative_bc']}")
    return _header_lines(header) + "\n".join(report) + "\n"


def generate_xz_report(config: AntennaConfig, output_format: str = "text",
                       header: Optional[Dict[str, object]] = None) -> str:
    x_lower = dof_x_lower(config)
    z = dof_z(config)
    if output_format == "json":
        return _render_summary({"config": str(config), "x_lower": x_lower,
                                "z_inner": z.inner, "z_outer": z.outer, "z_exact": z.exact}, header)
    if output_format == "csv":
        return render_csv([ResultRow("xz", str(config), "z", None, None, z.inner, z.outer, z.exact, None, None, 0)], header)
    report = [f"X/Z Channel Report: ({config})", "=" * 50]
    report.append(f"X channel lower bound: {x_lower}")
    report.append(f"Z channel inner bound: {z.inner}")
    report.append(f"Z channel outer bound: {z.outer}")
    report.append(f"Z channel result: {z.describe()}")
    return _header_lines(header) + "\n".join(report) + "\n"


def generate_relay_report(relay: RelayConfig, output_format: str = "text",
                          header: Optional[Dict[str, object]] = None) -> str:
    bound = dof_relay_upper(relay)
    broadcast_cut = min(relay.ms, relay.mr + relay.md)
    multiple_access_cut = min(relay.ms + relay.mr, relay.md)
    label = f"{relay.ms},{relay.mr},{relay.md}"
    if output_format == "json":
        return _render_summary({"config": label, "upper": bound, "broadcast_cut": broadcast_cut,
                                "multiple_access_cut": multiple_access_cut, "direct": min(relay.ms, relay.md)}, header)
    if output_format == "csv":
        return render_csv([ResultRow("relay", label, "relay", None, None, bound, bound, bound, None, None, 0)], header)
    report = [f"Relay Channel Report: ({label})", "=" * 50]
    report.append(f"Source-side cut: {broadcast_cut}")
    report.append(f"Destination-side cut: {multiple_access_cut}")
    report.append(f"Upper bound: {bound} (equals the direct link)")
    return _header_lines(header) + "\n".join(report) + "\n"


def plot_script(rows: Iterable[ResultRow], title: str, csv_name: str = "") -> str:
    """gnuplot script with the curve rows inlined as data blocks, one per scheme"""
    curves: Dict[str, List[ResultRow]] = {}
    for row in rows:
        if row.snr_db is None or row.sum_rate is None:
            continue
        curves.setdefault(row.scheme, []).append(row)

    lines = []
    if csv_name:
        lines.append(f"# Plots the curves of {csv_name}")
    for index, (scheme, points) in enumerate(curves.items()):
        lines.append(f"$curve{index} << EOD")
        for row in sorted(points, key=lambda r: r.snr_db):
            lines.append(f"{_format_value(float(row.snr_db))} {_format_value(float(row.sum_rate))}")
        lines.append("EOD")
    lines.append(f"set title '{title}'")
    lines.append("set xlabel 'Transmit power (dB)'")
    lines.append("set ylabel 'Sum rate (bits/channel use)'")
    lines.append("set key left top")
    lines.append("set grid")
    plots = [f"$curve{i} using 1:2 with linespoints title '{scheme}'" for i, scheme in enumerate(curves)]
    if plots:
        lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"

# Tests for result rows and report generation

import json

import pytest

from mimo_dof.errors import EstimationError
from mimo_dof.estimator import RateCurve, SlopeEstimate
from mimo_dof.formulas import DofBounds, RelayConfig
from mimo_dof.network import AntennaConfig
from mimo_dof.report import (
    ResultRow,
    curve_rows,
    generate_bounds_report,
    generate_relay_report,
    generate_xz_report,
    plot_script,
    render_csv,
    slope_row,
)
from mimo_dof.schemes import RatePoint

HEADER = "scenario,config,scheme,snr_db,sum_rate,dof_inner,dof_outer,dof_exact,dof_hat,stderr,seed"


def sample_rows():
    curve = RateCurve((RatePoint(40.0, 26.5754321), RatePoint(45.0, 29.9), RatePoint(50.0, 33.2)), 20, "int-zf")
    bounds = DofBounds(2, 2)
    rows = curve_rows("estimate", "2,3,2,3", curve, bounds, 0)
    rows.append(slope_row("estimate", "2,3,2,3", "int-zf", SlopeEstimate(2.0012345, 0.0123, (40.0, 50.0)), bounds, 0))
    return rows


def test_csv_layout():
    """Header, six significant digits, empty optional fields, LF endings."""
    text = render_csv(sample_rows(), header={"mimo-dof": "0.1.0", "trials": 20})
    lines = text.split("\n")
    assert lines[0] == "# mimo-dof = 0.1.0"
    assert lines[1] == "# trials = 20"
    assert lines[2] == HEADER
    assert lines[3] == 'estimate,"2,3,2,3",int-zf,40,26.5754,2,2,2,,,0'
    assert lines[6] == 'estimate,"2,3,2,3",int-zf:slope,,,2,2,2,2.00123,0.0123,0'
    assert text.endswith("\n")
    assert "\r" not in text


def test_rows_are_sorted():
    """Rows are ordered by scenario, scheme and SNR regardless of input order."""
    rows = list(reversed(sample_rows()))
    lines = render_csv(rows).splitlines()
    assert [line.split(",")[-9] for line in lines[1:]] == ["int-zf", "int-zf", "int-zf", "int-zf:slope"]
    assert lines[1].split(",")[-8] == "40"


def test_empty_table_has_header_only():
    assert render_csv([]) == HEADER + "\n"


def test_result_row_validation():
    """dof_exact is present exactly when the bounds meet."""
    with pytest.raises(EstimationError):
        ResultRow("s", "1,1,1,1", "x", None, None, 1, 2, 1, None, None, 0)
    with pytest.raises(EstimationError):
        ResultRow("s", "1,1,1,1", "x", None, None, 1, 1, None, None, None, 0)
    with pytest.raises(EstimationError):
        ResultRow("s", "1,1,1,1", "x", float("nan"), None, 1, 1, 1, None, None, 0)
    row = ResultRow("s", "1,1,2,3", "x", None, None, 2, 3, None, None, None, 0)
    assert render_csv([row]).splitlines()[1] == 's,"1,1,2,3",x,,,2,3,,,,0'


def test_bounds_report_text():
    report = generate_bounds_report(AntennaConfig(1, 1, 1, 1))
    assert "DoF Bounds Report: (1,1,1,1)" in report
    assert "=" * 50 in report
    assert "Interference channel inner bound: 1" in report
    assert "Result: exact 1" in report


def test_bounds_report_json():
    summary = json.loads(generate_bounds_report(AntennaConfig(5, 1, 5, 1), "json"))
    assert (summary["inner"], summary["outer"], summary["exact"]) == (2, 2, 2)
    assert summary["outer_bounds"] == {"trivial": 2}


def test_bounds_report_interval():
    summary = json.loads(generate_bounds_report(AntennaConfig(1, 1, 2, 3), "json"))
    assert summary["exact"] is None
    assert summary["result"] == "[2, 3]"


def test_bounds_report_csv():
    lines = generate_bounds_report(AntennaConfig(2, 2, 3, 2), "csv").splitlines()
    assert lines[0] == HEADER
    assert lines[1] == 'bounds,"2,2,3,2",int,,,2,2,2,,,0'


def test_relay_and_xz_reports():
    assert "Upper bound: 2" in generate_relay_report(RelayConfig(2, 3, 2))
    assert json.loads(generate_relay_report(RelayConfig(1, 5, 4), "json"))["upper"] == 1
    xz = json.loads(generate_xz_report(AntennaConfig(2, 1, 2, 1), "json"))
    assert xz["x_lower"] == 2
    assert xz["z_exact"] == 2


def test_reports_echo_the_run_header():
    """Text and CSV reports lead with `#` lines; JSON carries a header object."""
    header = {"mimo-dof": "0.1.0", "seed": 4}
    text = generate_xz_report(AntennaConfig(2, 1, 2, 1), header=header)
    assert text.splitlines()[:3] == ["# mimo-dof = 0.1.0", "# seed = 4", "X/Z Channel Report: (2,1,2,1)"]
    csv = generate_relay_report(RelayConfig(2, 3, 2), "csv", header=header).splitlines()
    assert csv[:3] == ["# mimo-dof = 0.1.0", "# seed = 4", HEADER]
    summary = json.loads(generate_bounds_report(AntennaConfig(1, 1, 1, 1), "json", header=header))
    assert summary["header"] == header
    assert summary["inner"] == 1
    assert "header" not in json.loads(generate_bounds_report(AntennaConfig(1, 1, 1, 1), "json"))


def test_plot_script():
    """Curve points are inlined; slope rows are left out."""
    script = plot_script(sample_rows(), "int-zf on 2,3,2,3", csv_name="run.csv")
    assert "$curve0 << EOD" in script
    assert "40 26.5754" in script
    assert "plot $curve0 using 1:2 with linespoints title 'int-zf'" in script
    assert "slope" not in script
    assert "run.csv" in script


if __name__ == "__main__":
    pytest.main([__file__])

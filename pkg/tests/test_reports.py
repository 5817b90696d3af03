import json
import logging
import math
import warnings

import pytest

from ricbounds.core.errors import DomainError, RegimeWarning
from ricbounds.core.models import RegimeConstants, SweepSpec, grid_point
from ricbounds.services.asymptotic_bounds import bounds_small_delta
from ricbounds.services.implicit_bounds import ric_bounds
from ricbounds.services.reports import (
    FIGURE_SPECS,
    REPORT_COLUMNS,
    compare_point,
    compare_sweep,
    figure_spec,
    gamma_rows_to_frame,
    gamma_sweep,
    parse_sweep_spec,
    read_rows_csv,
    render_rows,
    rows_to_csv,
    write_rows,
)

pytestmark = pytest.mark.filterwarnings("ignore::ricbounds.core.errors.RegimeWarning")


def _spec(regime, fixed, start, end, points, **constants):
    return SweepSpec(
        regime=regime,
        fixed=fixed,
        start_exponent=start,
        end_exponent=end,
        points=points,
        constants=RegimeConstants(**constants),
    )


def test_point_matches_direct_solve():
    spec = _spec("small_rho", 0.25, -4, -1, 2, c=6.5)
    row = compare_point(spec, 0.1)
    direct = ric_bounds(grid_point(0.25, 0.1))
    assert (row.delta, row.rho) == (0.25, 0.1)
    assert row.implicit_lower == direct.lower
    assert row.implicit_upper == direct.upper
    assert row.error is None


def test_small_rho_trend():
    rows = compare_sweep(_spec("small_rho", 0.25, -10, -2, 3, c=6.0))
    assert [row.rho for row in rows] == pytest.approx([1e-10, 1e-6, 1e-2])
    upper = [row.reldiff_upper for row in rows]
    lower = [row.reldiff_lower for row in rows]
    assert upper[0] < upper[1] < upper[2]
    assert lower[0] < lower[1] < lower[2]


def test_small_delta_trend():
    rows = compare_sweep(_spec("small_delta", 0.5, -50, -10, 5, c=1.0))
    upper = [row.reldiff_upper for row in rows]
    assert all(a < b for a, b in zip(upper, upper[1:]))


def test_small_delta_lower_gap_within_factor_two():
    point = grid_point(1e-50, 0.1)
    implicit = ric_bounds(point)
    formula = bounds_small_delta(point, c=1.0)
    ratio = math.exp(formula.log_lower_gap - implicit.log_lower_gap)
    assert 0.5 < ratio < 2.0


def test_gamma_path_lower_stays_in_unit_interval():
    rows = compare_sweep(_spec("gamma_path", 300.0, -80, -1, 8, gamma=300.0))
    for row in rows:
        assert 0.0 < row.implicit_lower < 1.0
        assert 0.0 < row.formula_lower < 1.0
    assert all(a.delta < b.delta for a, b in zip(rows, rows[1:]))


def test_sweep_warns_for_unproven_constants():
    with pytest.warns(RegimeWarning):
        compare_sweep(_spec("small_rho", 0.25, -3, -2, 2, c=6.0))


def test_sweep_warns_once_and_leaves_filters_alone():
    spec = _spec("small_rho", 0.25, -8, -1, 8, c=6.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        filters = list(warnings.filters)
        compare_sweep(spec, workers=4)
        assert warnings.filters == filters
    regime = [w for w in caught if issubclass(w.category, RegimeWarning)]
    assert len(regime) == 1


def test_gamma_sweep_is_silent():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        gamma_sweep(1e-40, [4.0, 50.0])
    assert not [w for w in caught if issubclass(w.category, RegimeWarning)]


def test_failed_points_become_error_rows():
    rows = compare_sweep(_spec("small_delta", 0.5, -2, -1, 2, c=0.001))
    assert len(rows) == 2
    assert all(row.error and row.error.startswith("DomainError") for row in rows)
    assert all(math.isnan(row.formula_upper) for row in rows)
    assert "nan" in rows_to_csv(rows)


def test_csv_failure_reason_is_logged(caplog):
    # the CSV header is fixed, so the reason for a nan row only reaches the log
    with caplog.at_level(logging.WARNING, logger="ricbounds.services.reports"):
        rows = compare_sweep(_spec("small_delta", 0.5, -2, -1, 2, c=0.001))
    header = rows_to_csv(rows).splitlines()[0]
    assert "error" not in header
    reasons = [record.getMessage() for record in caplog.records if "failed:" in record.getMessage()]
    assert len(reasons) == 2
    assert all("must exceed 1" in reason for reason in reasons)
    assert any("2 of 2 sweep rows failed" in record.getMessage() for record in caplog.records)


def test_csv_header_and_round_trip(tmp_path):
    rows = compare_sweep(_spec("small_rho", 0.25, -6, -1, 4, c=6.5))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(REPORT_COLUMNS)
    assert text.splitlines()[0] == "delta,rho,implicit_lower,implicit_upper,formula_lower,formula_upper,reldiff_lower,reldiff_upper"
    path = write_rows(rows, tmp_path / "out" / "sweep.csv")
    assert read_rows_csv(path) == rows


def test_output_independent_of_threads():
    spec = _spec("small_delta", 0.1, -30, -1, 12, c=1.5)
    one = rows_to_csv(compare_sweep(spec, workers=1))
    four = rows_to_csv(compare_sweep(spec, workers=4))
    again = rows_to_csv(compare_sweep(spec, workers=1))
    assert one == four == again


def test_json_mirrors_columns():
    rows = compare_sweep(_spec("small_rho", 0.25, -3, -1, 2, c=6.5))
    records = json.loads(render_rows(rows, "json"))
    assert len(records) == 2
    assert set(REPORT_COLUMNS) <= set(records[0])
    assert records[0]["implicit_upper"] == rows[0].implicit_upper
    with pytest.raises(DomainError):
        render_rows(rows, "xml")


def test_json_nulls_for_failed_rows():
    rows = compare_sweep(_spec("small_delta", 0.5, -2, -1, 2, c=0.001))
    records = json.loads(render_rows(rows, "json"))
    assert records[0]["formula_upper"] is None
    assert records[0]["error"].startswith("DomainError")


def test_parse_sweep_spec():
    text = """
    # small-delta sweep
    regime = small_delta
    fixed = 0.5
    start = -50
    end = -1
    points = 50   # one per decade
    c = 1.5
    tolerance = 1e-13
    """
    spec, tolerance = parse_sweep_spec(text)
    assert spec.regime == "small_delta"
    assert spec.fixed == 0.5
    assert (spec.start_exponent, spec.end_exponent, spec.points) == (-50, -1, 50)
    assert spec.constants.c == 1.5
    assert tolerance == 1e-13


def test_parse_gamma_path_defaults_fixed_to_gamma():
    spec, tolerance = parse_sweep_spec("regime=gamma_path\ngamma=100\nstart=-40\nend=-2\npoints=5\n")
    assert spec.fixed == 100.0
    assert spec.constants.gamma == 100.0
    assert tolerance is None


@pytest.mark.parametrize(
    "text",
    [
        "regime=small_rho\nfixed=0.25\nstart=-5\nend=-1\n",
        "regime=small_rho\nfixed=0.25\nstart=-5\nend=-1\npoints=4\ncolour=red\n",
        "regime=small_rho\nfixed=1.5\nstart=-5\nend=-1\npoints=4\n",
        "regime=small_rho\nfixed=0.25\nstart=-5\nend=1\npoints=4\n",
        "regime=small_rho\nfixed 0.25\n",
        "regime=tiny_rho\nfixed=0.25\nstart=-5\nend=-1\npoints=4\n",
    ],
)
def test_parse_sweep_spec_errors(text):
    with pytest.raises(DomainError):
        parse_sweep_spec(text)


def test_figure_presets():
    assert sorted(FIGURE_SPECS) == [1, 2, 3, 4]
    fig1 = figure_spec(1)
    assert (fig1.regime, fig1.fixed, fig1.points, fig1.constants.c) == ("small_rho", 0.25, 30, 6.0)
    assert figure_spec(4).constants.gamma == 300.0
    with pytest.raises(DomainError):
        figure_spec(7)


def test_gamma_sweep_converges():
    rows = gamma_sweep(1e-80, [4.0, 50.0, 300.0])
    assert [row.gamma for row in rows] == [4.0, 50.0, 300.0]
    assert rows[-1].reldiff_upper < 0.06
    assert rows[-1].reldiff_lower < 0.06
    frame = gamma_rows_to_frame(rows)
    assert list(frame.columns)[:2] == ["gamma", "rho"]
    assert len(frame) == 3

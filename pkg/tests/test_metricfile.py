import pytest

from tensoralg import catalog, metricfile
from tensoralg.metricfile import (MetricFile, MetricFileError, from_entry,
                                  parse_metric_file)
from tensoralg.scalars import is_zero, sym

SCHWARZSCHILD = """\
# exterior Schwarzschild, r > 2m
[chart] coords = t, r, theta, phi
[constants] m
[metric] row = (2*m-r)/r, 0, 0, 0
[metric] row = 0, r/(r-2*m), 0, 0
[metric] row = 0, 0, r^2, 0
[metric] row = 0, 0, 0, r^2*sin(theta)^2
[frame] row = sqrt((r-2*m)/r), 0, 0, 0
[frame] row = 0, sqrt(r/(r-2*m)), 0, 0
[frame] row = 0, 0, r, 0
[frame] row = 0, 0, 0, r*sin(theta)
[frame] frame_metric = diag(-1,1,1,1)
"""


def test_parse_and_build_metric_context():
    mf = parse_metric_file(SCHWARZSCHILD)
    assert mf.coords == ["t", "r", "theta", "phi"]
    assert mf.constants == ["m"]
    ctx = mf.to_context()
    assert ctx.dim == 4 and not ctx.cframe_flag
    assert is_zero(ctx.lg[1][1] - sym("r") / (sym("r") - 2 * sym("m")))


def test_parse_and_build_frame_context():
    ctx = parse_metric_file(SCHWARZSCHILD).to_context(frame=True)
    assert ctx.cframe_flag
    assert ctx.lfg[0][0] == -1


def test_round_trip_through_render():
    mf = parse_metric_file(SCHWARZSCHILD)
    again = parse_metric_file(mf.render())
    assert again.coords == mf.coords
    assert again.metric_rows == mf.metric_rows
    assert again.frame_rows == mf.frame_rows
    assert again.frame_metric == mf.frame_metric


def test_catalog_show_round_trip_all_entries():
    for name in catalog.list_entries():
        mf = from_entry(catalog.entry(name))
        again = parse_metric_file(mf.render())
        assert again.metric_rows == mf.metric_rows, name
        assert again.frame_rows == mf.frame_rows, name


def test_torsion_and_nonmetricity_sections():
    text = """\
[chart] coords = x, y
[metric] row = 1, 0
[metric] row = 0, 1
[torsion] entry = 1, 2, 1, x
[nonmetricity] mu = x, y
"""
    ctx = parse_metric_file(text).to_context()
    assert ctx.torsion_values is not None
    assert is_zero(ctx.torsion_values[0][1][0] - sym("x"))
    assert is_zero(ctx.torsion_values[1][0][0] + sym("x"))
    assert ctx.nonmetricity_values is not None


def test_error_messages_carry_line_numbers():
    bad = "[chart] coords = x, y\n[metric] rho = 1, 0\n"
    with pytest.raises(MetricFileError) as err:
        parse_metric_file(bad)
    assert "line 2" in str(err.value)


def test_error_on_content_before_section():
    with pytest.raises(MetricFileError):
        parse_metric_file("coords = x, y\n")


def test_error_on_wrong_row_count():
    text = "[chart] coords = x, y\n[metric] row = 1, 0\n"
    with pytest.raises(MetricFileError):
        parse_metric_file(text).to_context()


def test_bad_expression_rejected_at_parse():
    text = "[chart] coords = x, y\n[metric] row = 1, frob(x)\n" \
           "[metric] row = frob(x), 1\n"
    with pytest.raises(Exception):
        parse_metric_file(text)

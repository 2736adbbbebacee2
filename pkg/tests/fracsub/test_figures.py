import io

import numpy as np
import pytest

from fracsub.errors import UnknownFigure
from fracsub.figures import FIGURES, figure_table, get_figure, write_figure_csv


def test__FIGURES__covers_a_to_s() -> None:
    assert list(FIGURES) == list("abcdefghijklmnopqrs")
    assert get_figure("a").columns() == ["x", "u_a1_b1", "u_a0.9_b0.8", "u_a0.75_b0.6", "u_a0.5_b0.5"]
    assert get_figure("s").columns()[0] == "t"
    with pytest.raises(UnknownFigure):
        get_figure("z")


@pytest.mark.parametrize("figure_id", list(FIGURES))
def test__figure_table__evaluates_at_the_figure_parameters(figure_id: str) -> None:
    header, rows = figure_table(get_figure(figure_id), 7)
    assert len(rows) == 7
    assert all(len(row) == len(header) for row in rows)
    assert np.all(np.isfinite(np.array(rows)))


def test__figure_table__classical_row_of_the_polynomial_solution() -> None:
    header, rows = figure_table(get_figure("d"), 5, (1.0, 3.0))
    column = header.index("u_a1_b1")
    for row in rows:
        assert row[column] == pytest.approx(3.0 + row[0], rel=1e-12)
    assert rows[0][column] == pytest.approx(4.0)


def test__figure_table__power_law_component_at_unit_time() -> None:
    header, rows = figure_table(get_figure("s"), 3, (0.5, 1.5))
    assert rows[1][0] == 1.0
    assert rows[1][header.index("u_a0.25_b1")] == pytest.approx(4.0, rel=1e-12)


def test__figure_table__validates_points_and_range() -> None:
    with pytest.raises(ValueError):
        figure_table(get_figure("a"), 1)
    with pytest.raises(ValueError):
        figure_table(get_figure("a"), 5, (0.0, 1.0))


def test__write_figure_csv__is_deterministic() -> None:
    outputs = []
    for _ in range(2):
        fp = io.StringIO()
        write_figure_csv(get_figure("h"), 2, fp)
        outputs.append(fp.getvalue())
    assert outputs[0] == outputs[1]
    lines = outputs[0].split("\n")
    assert len(lines) == 4 and lines[-1] == ""
    assert lines[0] == "x,u_a1_b1,u_a0.9_b0.8,u_a0.75_b0.6,u_a0.5_b0.5"
    assert lines[1].startswith("0.05,")

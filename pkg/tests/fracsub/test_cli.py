import typing as t
from pathlib import Path

import pytest
import tomli
from cleo.testers.command_tester import CommandTester  # type: ignore[import]

from fracsub.application import EXIT_FAILURE, EXIT_USAGE, Application
from fracsub.ext.application.deriv import DerivCommandPlugin
from fracsub.ext.application.families import FamiliesCommandPlugin
from fracsub.ext.application.figure import FigureCommandPlugin
from fracsub.ext.application.fode import FodeCommandPlugin
from fracsub.ext.application.ml import MlCommandPlugin
from fracsub.ext.application.subspace import SubspaceCommandPlugin
from fracsub.ext.application.verify import VerifyCommandPlugin
from fracsub.plugins import ApplicationPlugin

Tester = t.Callable[[t.Type[ApplicationPlugin]], CommandTester]


@pytest.fixture
def tester(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Tester:
    monkeypatch.chdir(tmp_path)
    app = Application(tmp_path)

    def factory(plugin_type: t.Type[ApplicationPlugin]) -> CommandTester:
        plugin = plugin_type(app)
        plugin.activate(app, plugin.load_configuration(app))
        return CommandTester(plugin)

    return factory


def test__verify__single_family_passes(tester: Tester) -> None:
    command = tester(VerifyCommandPlugin)
    assert command.execute("E5") == 0
    assert "PASS" in command.io.fetch_output()


def test__verify__all_families_analytic(tester: Tester) -> None:
    command = tester(VerifyCommandPlugin)
    assert command.execute("all --tier analytic") == 0
    assert "25 report(s) passed" in command.io.fetch_output()


def test__verify__json_records(tester: Tester) -> None:
    import json

    command = tester(VerifyCommandPlugin)
    assert command.execute("RPP --json") == 0
    (record,) = [json.loads(line) for line in command.io.fetch_output().splitlines()]
    assert record["family"] == "RPP" and record["tier"] == "analytic"


def test__verify__usage_errors(tester: Tester) -> None:
    command = tester(VerifyCommandPlugin)
    assert command.execute("E99") == EXIT_USAGE
    assert "unknown solution family" in command.io.fetch_error()
    assert command.execute("E5 --tier everything") == EXIT_USAGE
    assert command.execute("E5 --param b") == EXIT_USAGE


def test__verify__configured_parameters_that_break_a_condition(tester: Tester, tmp_path: Path) -> None:
    (tmp_path / "fracsub.toml").write_text("[families.E5]\nb = [0, 1, 2]\n")
    command = tester(VerifyCommandPlugin)
    assert command.execute("E5") != 0
    assert "a_1 k = b_2" in command.io.fetch_error()


def test__subspace__invariant_and_not_invariant(tester: Tester) -> None:
    command = tester(SubspaceCommandPlugin)
    assert command.execute('RE1 "1, x^b, E_b(0.5*x^b)" --beta 0.6') == 0
    assert "invariant" in command.io.fetch_output()
    assert command.execute('E2 "E_b(1*x^b)" --beta 0.6 --reduce --alpha 0.5') == 0
    assert "d^α A1" in command.io.fetch_output()
    assert command.execute('E2 "E_b(2*x^b)" --beta 0.6') == EXIT_FAILURE
    assert "not invariant" in command.io.fetch_output()


def test__subspace__rejects_bad_input(tester: Tester) -> None:
    command = tester(SubspaceCommandPlugin)
    assert command.execute('RE1 "1, x^b" --trials 0') == EXIT_USAGE
    assert command.execute('RE1 "1, y^b"') == EXIT_USAGE
    assert command.execute('nope "1"') == EXIT_USAGE


def test__figure__single_figure_to_stdout(tester: Tester) -> None:
    command = tester(FigureCommandPlugin)
    assert command.execute("d --points 3 --range 1,3") == 0
    lines = command.io.fetch_output().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("x,u_a1_b1,")
    assert lines[1].startswith("1,4,")


def test__figure__all_figures_to_a_directory(tester: Tester, tmp_path: Path) -> None:
    command = tester(FigureCommandPlugin)
    assert command.execute("a b --points 3") == EXIT_USAGE
    assert command.execute(f"all --points 3 --out {tmp_path / 'figs'}") == 0
    assert len(list((tmp_path / "figs").glob("fig_*.csv"))) == 19
    assert command.execute("z") == EXIT_USAGE


def test__ml__evaluates_exponential_and_prabhakar(tester: Tester) -> None:
    command = tester(MlCommandPlugin)
    assert command.execute("1") == 0
    assert "2.71828182846" in command.io.fetch_output()
    assert command.execute("1 --rho 1") == 0
    assert "2.71828182846" in command.io.fetch_output()
    assert command.execute("one") == EXIT_USAGE


def test__deriv__power_of_own_order(tester: Tester) -> None:
    command = tester(DerivCommandPlugin)
    assert command.execute('"x^b" --beta 0.5 --at 1') == 0
    assert "0.886226925453" in command.io.fetch_output()
    assert command.execute('"x^b" --kind grunwald') == EXIT_USAGE


def test__families__listing_and_starter_toml(tester: Tester) -> None:
    command = tester(FamiliesCommandPlugin)
    assert command.execute("") == 0
    assert len(command.io.fetch_output().splitlines()) == 25
    assert command.execute("--toml") == 0
    assert len(tomli.loads(command.io.fetch_output())["families"]) == 25


def test__fode__reduces_and_integrates_a_caputo_family(tester: Tester) -> None:
    command = tester(FodeCommandPlugin)
    assert command.execute("--family E5") == 0
    output = command.io.fetch_output()
    assert "forward substitution vs catalog" in output
    assert "predictor-corrector vs catalog" in output
    assert command.execute("") == EXIT_USAGE


def test__fode__riemann_liouville_family_is_not_integrated(tester: Tester) -> None:
    command = tester(FodeCommandPlugin)
    assert command.execute("--family 3s2") == 0
    assert "no initial value problem" in command.io.fetch_output()


def test__deriv__explicit_order_zero_is_not_replaced_by_beta(tester: Tester) -> None:
    command = tester(DerivCommandPlugin)
    assert command.execute('"x^b" --beta 0.5 --order 0') == EXIT_USAGE
    assert "derivative order must be positive" in command.io.fetch_error()
    assert command.execute('"x^b" --at one') == EXIT_USAGE


def test__figure__rejects_malformed_ranges_and_points(tester: Tester) -> None:
    command = tester(FigureCommandPlugin)
    assert command.execute("d --range 1") == EXIT_USAGE
    assert "--range expects lo,hi" in command.io.fetch_error()
    assert command.execute("d --range 3,1") == EXIT_USAGE
    assert command.execute("d --points 1") == EXIT_USAGE


def test__subspace__rejects_a_component_count_mismatch(tester: Tester) -> None:
    command = tester(SubspaceCommandPlugin)
    assert command.execute('cc1 "1, x^b"') == EXIT_USAGE
    assert "cc1 has 2 components" in command.io.fetch_error()


def test__verify__and_fode__reject_unusable_grids(tester: Tester) -> None:
    assert tester(VerifyCommandPlugin).execute("sr8 --tier numeric --nx 32") == EXIT_USAGE
    assert tester(FodeCommandPlugin).execute("--family E5 --step 0") == EXIT_USAGE

from __future__ import annotations

import typing as t
from pathlib import Path

from fracsub.application import Application, Command, argument, option
from fracsub.config import FiguresConfig
from fracsub.errors import ConfigurationError
from fracsub.plugins import ApplicationPlugin


class FigureCommandPlugin(Command, ApplicationPlugin):
    """Write the data of solution figures as CSV.

    The first column holds the swept variable (<code>x</code> or <code>t</code>), every further column the solution
    for one (α, β) pair, named <code>u_a&lt;α&gt;_b&lt;β&gt;</code>. A single figure is written to
    <opt>--out</opt> or stdout; <code>all</code> or several figures require <opt>--out</opt> to name a directory
    that receives one <code>fig_&lt;id&gt;.csv</code> per figure.
    """

    app: Application
    config: FiguresConfig
    name = "figure"
    arguments = [argument("figures", "Figure ids (a to s) or 'all'.", multiple=True)]
    options = [
        option("points", None, "Number of rows.", flag=False),
        option("out", "o", "Output file, or directory for several figures.", flag=False),
        option("range", "r", "The sweep interval as lo,hi.", flag=False),
        option("config", "c", "Path to a TOML configuration file.", flag=False),
    ]

    def __init__(self, app: Application) -> None:
        Command.__init__(self)
        ApplicationPlugin.__init__(self, app)

    def load_configuration(self, app: Application) -> FiguresConfig:
        return app.configuration.figures()

    def activate(self, app: Application, config: FiguresConfig) -> None:
        self.app = app
        self.config = config
        app.cleo.add(self)

    def _sweep_range(self, config: FiguresConfig) -> tuple[float, float]:
        text = self.option("range")
        if text is None:
            return config.range[0], config.range[1]
        lo, _, hi = text.partition(",")
        try:
            bounds = float(lo), float(hi)
        except ValueError:
            raise ConfigurationError(f"--range expects lo,hi, got {text!r}")
        if not 0 < bounds[0] < bounds[1]:
            raise ConfigurationError(f"--range must satisfy 0 < lo < hi, got {text!r}")
        return bounds

    def _handle(self) -> int:
        from fracsub.figures import FIGURES, get_figure, write_figure_csv

        config = self.configuration().figures() if self.option("config") else self.config
        points = self.int_option("points", config.points)
        if points < 2:
            return self.usage_error(f"--points must be at least 2, got {points}")
        sweep_range = self._sweep_range(config)
        ids: list[str] = list(self.argument("figures"))
        figures = list(FIGURES.values()) if ids == ["all"] else [get_figure(i) for i in ids]
        out = self.option("out")

        if len(figures) == 1 and ids != ["all"]:
            if out is None:
                write_figure_csv(figures[0], points, t.cast(t.TextIO, _LineWriter(self)), sweep_range)
            else:
                with Path(out).open("w", newline="") as fp:
                    write_figure_csv(figures[0], points, fp, sweep_range)
            return 0

        if out is None:
            return self.usage_error("writing several figures requires --out DIRECTORY")
        directory = Path(out)
        directory.mkdir(parents=True, exist_ok=True)
        for figure in figures:
            path = directory / f"fig_{figure.id}.csv"
            with path.open("w", newline="") as fp:
                write_figure_csv(figure, points, fp, sweep_range)
            self.line(f"wrote <info>{path}</info>")
        return 0


class _LineWriter:
    """Adapts the command output to the file interface of the CSV writer."""

    def __init__(self, command: Command) -> None:
        self._command = command

    def write(self, text: str) -> int:
        self._command.io.write(text)
        return len(text)

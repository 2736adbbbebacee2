from __future__ import annotations

from fracsub.application import Application, Command, option
from fracsub.plugins import ApplicationPlugin


class FamiliesCommandPlugin(Command, ApplicationPlugin):
    """List the catalog of exact solution families.

    With <opt>--toml</opt>, prints a starter configuration with the default parameters of every family.
    """

    app: Application
    name = "families"
    options = [option("toml", None, "Print a starter fracsub.toml instead of the listing.")]

    def __init__(self, app: Application) -> None:
        Command.__init__(self)
        ApplicationPlugin.__init__(self, app)

    def load_configuration(self, app: Application) -> None:
        return None

    def activate(self, app: Application, config: None) -> None:
        self.app = app
        app.cleo.add(self)

    def _handle(self) -> int:
        from fracsub.catalog import list_families
        from fracsub.config import starter_config

        families = list_families()
        if self.option("toml"):
            import tomli_w

            self.io.write(tomli_w.dumps(starter_config(families)))
            return 0

        width = max(len(f.id) for f in families)
        for family in families:
            figures = ",".join(sorted(family.figure_ids)) or "-"
            pair = f" ↔ {family.pair}" if family.pair else ""
            self.line(
                f"<b>{family.id.ljust(width)}</b>  <info>{family.pde_id:<7}</info> {family.title}{pair}"
                f"  <comment>[{family.conditions}; figures: {figures}]</comment>"
            )
        return 0

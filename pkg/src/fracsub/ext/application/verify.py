from __future__ import annotations

import json
import typing as t

from fracsub.application import EXIT_FAILURE, ORDER_OPTIONS, Application, Command, argument, option
from fracsub.config import VerifyConfig
from fracsub.plugins import ApplicationPlugin

if t.TYPE_CHECKING:
    from fracsub.verify import ResidualReport


class VerifyCommandPlugin(Command, ApplicationPlugin):
    """Verify that catalog solutions satisfy their equations.

    The <code>analytic</code> tier substitutes the closed form with exact derivative rules, the
    <code>numeric</code> tier discretizes all derivatives on a grid. The exit code is 0 when every report passes
    and 1 otherwise; the first failing family is named.
    """

    app: Application
    config: VerifyConfig
    name = "verify"
    arguments = [argument("family", "A family id or 'all'.", optional=True, default="all")]
    options = [
        option("tier", "t", "analytic, numeric or both.", flag=False),
        option("json", None, "Print one JSON record per report."),
        option("nx", None, "Space nodes of the numeric tier.", flag=False),
        option("nt", None, "Time nodes of the numeric tier.", flag=False),
        option("negative-controls", None, "Also check that breaking each invariance condition is detected."),
        *ORDER_OPTIONS,
    ]

    def __init__(self, app: Application) -> None:
        Command.__init__(self)
        ApplicationPlugin.__init__(self, app)

    def load_configuration(self, app: Application) -> VerifyConfig:
        return app.configuration.verify()

    def activate(self, app: Application, config: VerifyConfig) -> None:
        self.app = app
        self.config = config
        app.cleo.add(self)

    def _print(self, report: ResidualReport) -> None:
        from fracsub.verify import COLORS

        if self.option("json"):
            self.line(json.dumps(report.to_json(), sort_keys=True))
            return
        color = COLORS[report.status]
        self.line(
            f"<b>{report.family:<6}</b> {report.tier.value:<8} α={report.alpha:g} β={report.beta:g}  "
            f"<fg={color};options=bold>{report.status.name:<7}</fg> max rel residual {report.max_rel_residual:.3e}"
            f" (tolerance {report.tolerance:.0e})"
        )

    def _handle(self) -> int:
        from fracsub.catalog import list_families, lookup
        from fracsub.verify import MIN_NUMERIC_NODES, GridSpec, ReportStatus, Tier, negative_controls, verify_family

        config = self.configuration().verify() if self.option("config") else self.config
        tier = self.option("tier") or config.tier
        tiers = {"analytic": [Tier.ANALYTIC], "numeric": [Tier.NUMERIC], "both": [Tier.ANALYTIC, Tier.NUMERIC]}
        if tier not in tiers:
            return self.usage_error(f"--tier must be analytic, numeric or both, got {tier!r}")
        nx, nt = self.int_option("nx", config.nx), self.int_option("nt", config.nt)
        if min(nx, nt) < MIN_NUMERIC_NODES:
            return self.usage_error(f"--nx and --nt must be at least {MIN_NUMERIC_NODES}, got {nx} and {nt}")
        grid = GridSpec(nx=nx, nt=nt)

        family_id = self.argument("family")
        families = list_families() if family_id == "all" else [lookup(family_id)]
        if len(families) > 1 and not self.option("json") and not self.io.output.is_quiet():
            import tqdm  # type: ignore[import]

            families = tqdm.tqdm(families, desc="Verifying solution families", unit="family", leave=False)

        first_failure: str | None = None
        count = 0
        for family in families:
            overrides = self.overrides(family.id)
            for report in verify_family(
                family, tiers[tier], overrides.params, overrides.alpha, overrides.beta, numeric_grid=grid
            ):
                count += 1
                self._print(report)
                if report.status == ReportStatus.FAIL and first_failure is None:
                    first_failure = family.id
            if self.option("negative-controls"):
                for control in negative_controls(family, overrides.params, overrides.alpha, overrides.beta):
                    status = "<info>detected</info>" if control.detected else "<error>MISSED</error>"
                    self.line(f"  breaking {control.condition} via {control.knob}: {status}")
                    if not control.detected and first_failure is None:
                        first_failure = family.id

        if first_failure is not None:
            self.line_error(f"<error>verification failed, first failing family: {first_failure}</error>")
            return EXIT_FAILURE
        if not self.option("json"):
            self.line(f"{count} report(s) passed")
        return 0

from __future__ import annotations

from fracsub.application import Application, Command, argument, option
from fracsub.plugins import ApplicationPlugin


class MlCommandPlugin(Command, ApplicationPlugin):
    """Evaluate the Mittag-Leffler function.

    Prints E_{β,γ}(z) for every argument, or the three-parameter function E^ρ_{β,γ}(z) when <opt>--rho</opt> is
    given. Negative arguments can be passed after <code>--</code>:

        <code>fracsub ml --beta 0.5 -- -1</code>
    """

    app: Application
    name = "ml"
    arguments = [argument("z", "The arguments to evaluate the function at.", multiple=True)]
    options = [
        option("beta", "b", "The first parameter β > 0.", flag=False, default="1"),
        option("gamma", "g", "The second parameter γ.", flag=False, default="1"),
        option("rho", None, "The third (Prabhakar) parameter ρ >= 0.", flag=False),
    ]

    def __init__(self, app: Application) -> None:
        Command.__init__(self)
        ApplicationPlugin.__init__(self, app)

    def load_configuration(self, app: Application) -> None:
        return None

    def activate(self, app: Application, config: None) -> None:
        self.app = app
        app.cleo.add(self)

    def _handle(self) -> int:
        from fracsub.specfun import MLParams, mittag_leffler, prabhakar

        beta, gamma, rho = self.float_option("beta"), self.float_option("gamma"), self.float_option("rho")
        assert beta is not None and gamma is not None
        try:
            points = [float(z) for z in self.argument("z")]
        except ValueError:
            return self.usage_error(f"arguments must be decimals, got {self.argument('z')}")

        for z in points:
            if rho is None:
                value = mittag_leffler(MLParams(beta, gamma), z)
                self.line(f"E_{beta:g},{gamma:g}({z:g}) = <b>{value:.12g}</b>")
            else:
                value = prabhakar(beta, gamma, rho, z)
                self.line(f"E^{rho:g}_{beta:g},{gamma:g}({z:g}) = <b>{value:.12g}</b>")
        return 0

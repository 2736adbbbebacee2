from __future__ import annotations

from fracsub.application import Application, Command, argument, option
from fracsub.plugins import ApplicationPlugin


class DerivCommandPlugin(Command, ApplicationPlugin):
    """Apply the closed fractional derivative rules to basis functions.

    The functions use the subspace notation, for example <code>"x^b, E_b(2*x^b)"</code>, where <code>b</code>
    stands for the space order given with <opt>--beta</opt>. The derivative is printed as a combination of basis
    functions and, with <opt>--at</opt>, evaluated at the given points.
    """

    app: Application
    name = "deriv"
    arguments = [argument("functions", "Comma separated basis functions.")]
    options = [
        option("order", "o", "The derivative order (defaults to β).", flag=False),
        option("kind", "k", "caputo or riemann-liouville.", flag=False, default="caputo"),
        option("beta", None, "The value substituted for b.", flag=False, default="1"),
        option("at", None, "Evaluate the derivative at this point.", flag=False, multiple=True),
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
        from fracsub.fracderiv import DerivKind, basis_derivative, evaluate_combination
        from fracsub.subspace import parse_subspace

        try:
            kind = DerivKind(self.option("kind"))
        except ValueError:
            return self.usage_error(f"unknown derivative kind {self.option('kind')!r}")
        beta = self.float_option("beta")
        assert beta is not None
        order = self.float_option("order")
        if order is None:
            order = beta
        try:
            points = [float(x) for x in self.option("at") or []]
        except ValueError:
            return self.usage_error(f"--at expects decimals, got {self.option('at')}")

        basis = parse_subspace(self.argument("functions"), beta).components[0]
        for b in basis:
            image = basis_derivative(b, kind, order)
            text = " + ".join(f"{c:.12g}·{f}" for f, c in image.items()) or "0"
            self.line(f"D^{order:g} {b} = <b>{text}</b>")
            for x in points:
                self.line(f"  at x={x:g}: {float(evaluate_combination(image, x)):.12g}")
        return 0

from __future__ import annotations

from fracsub.application import EXIT_FAILURE, ORDER_OPTIONS, Application, Command, argument, option
from fracsub.config import VerifyConfig
from fracsub.plugins import ApplicationPlugin


class SubspaceCommandPlugin(Command, ApplicationPlugin):
    """Check whether a linear space is invariant under the space operator of an equation.

    The subspace is given as comma separated basis functions, with <code>;</code> between the components of a
    system, e.g. <code>"1, x^b, E_b(k*x^b)"</code>. Rates may name equation parameters. The check evaluates the
    operator on random members of the space (seeded) and fits the images back onto the basis. With
    <opt>--reduce</opt> the reduced fractional ODE system is printed as well.

    The exit code is 0 when the space is invariant and 1 otherwise.
    """

    app: Application
    config: VerifyConfig
    name = "subspace"
    arguments = [
        argument("equation", "The equation id, e.g. RE1 or cc1."),
        argument("subspace", "The basis functions of the candidate space."),
    ]
    options = [
        option("trials", None, "Number of random members to test.", flag=False),
        option("seed", None, "Seed of the random members.", flag=False),
        option("reduce", None, "Print the reduced system of fractional ODEs."),
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

    def _handle(self) -> int:
        from fracsub.equations import get_equation
        from fracsub.subspace import check_invariance, parse_subspace, reduce_to_fode

        config = self.configuration().verify() if self.option("config") else self.config
        trials = self.int_option("trials", config.trials)
        if trials <= 0:
            return self.usage_error(f"--trials must be positive, got {trials}")
        seed = self.int_option("seed", config.seed)

        equation = get_equation(self.argument("equation"))
        overrides = self.overrides()
        beta = overrides.beta if overrides.beta is not None else 1.0
        op = equation.operator(overrides.params, beta)
        ss = parse_subspace(self.argument("subspace"), beta, op.parameters)
        if len(ss.components) != len(op.components):
            return self.usage_error(
                f"{equation.id} has {len(op.components)} components, the subspace has {len(ss.components)}"
            )

        for line in op.format():
            self.line(f"<comment>{line}</comment>")
        report = check_invariance(op, ss, trials=trials, seed=seed)
        verdict = "<info>invariant</info>" if report.invariant else "<error>not invariant</error>"
        self.line(f"{ss}: {verdict} (max fit residual {report.max_fit_residual:.3e}, {trials} trials, seed {seed})")
        if not report.invariant:
            return EXIT_FAILURE

        if self.option("reduce"):
            alpha = overrides.alpha if overrides.alpha is not None else 1.0
            system = reduce_to_fode(op, ss, alpha, seed=seed)
            for line in system.rhs.format():
                self.line(f"  {line}")
        return 0

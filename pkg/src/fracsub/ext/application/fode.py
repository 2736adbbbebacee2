from __future__ import annotations

import numpy as np

from fracsub.application import EXIT_FAILURE, ORDER_OPTIONS, Application, Command, option
from fracsub.plugins import ApplicationPlugin

#: Relative agreement required between the closed-form trajectories and the reduced system.
CLOSED_FORM_TOLERANCE = 1e-8
#: Relative agreement required between the closed-form trajectories and the predictor-corrector integration.
INTEGRATOR_TOLERANCE = 1e-3


class FodeCommandPlugin(Command, ApplicationPlugin):
    """Reduce the equation of a solution family to fractional ODEs and cross-check its trajectories.

    The reduced system d^α A = Φ(A) is printed. For Caputo families the catalog trajectories are compared with the
    fractional Adams predictor-corrector solution of the system and, when the system is affine, with its
    forward-substitution solution in Mittag-Leffler form.
    """

    app: Application
    name = "fode"
    options = [
        option("family", "f", "The solution family id.", flag=False),
        option("step", None, "Step size of the predictor-corrector integration.", flag=False, default="0.001"),
        *ORDER_OPTIONS,
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
        from fracsub.catalog import lookup
        from fracsub.fode import MAX_GRID_NODES, frac_adams, solve_linear_ml
        from fracsub.fracderiv import DerivKind
        from fracsub.subspace import reduce_to_fode

        family_id = self.option("family")
        if not family_id:
            return self.usage_error("--family is required")
        family = lookup(family_id)
        overrides = self.overrides(family.id)
        params = family.params(overrides.params)
        order = family.resolve_order(overrides.alpha, overrides.beta)
        family.check(params, order)

        op = family.operator(params, order)
        ss = family.subspace(params, order)
        trajectories = family.trajectories(params, order)
        system = reduce_to_fode(op, ss, order.alpha)
        self.line(f"<b>{family.id}</b> on {ss} at {order}:")
        for line in system.rhs.format():
            self.line(f"  {line}")
        for j, trajectory in enumerate(trajectories):
            self.line(f"  <comment>A{j + 1}(t) = {trajectory}</comment>")

        if system.time_kind is not DerivKind.CAPUTO:
            self.line("Riemann-Liouville system: no initial value problem to integrate")
            return 0

        initial = [tr.initial_value() for tr in trajectories]
        system = system.with_initial(initial)
        step = self.float_option("step")
        assert step is not None
        if not 0 < step <= 0.25 or 2.0 / step >= MAX_GRID_NODES:
            return self.usage_error(f"--step must lie in (0, 0.25] below {MAX_GRID_NODES} nodes, got {step:g}")
        grid = np.arange(0.0, 2.0 + step / 2, step)
        expected = np.array([np.asarray(tr(grid[1:])) for tr in trajectories]).T
        scale = max(float(np.max(np.abs(expected))), 1e-300)
        failed = False

        if system.rhs.is_affine:
            closed = np.array([np.asarray(tr(grid[1:])) for tr in solve_linear_ml(system)]).T
            error = float(np.max(np.abs(closed - expected))) / scale
            failed |= error > CLOSED_FORM_TOLERANCE
            self.line(f"forward substitution vs catalog: max rel difference {error:.3e}")

        integrated = frac_adams(system, grid)[1:]
        window = grid[1:] >= 0.25
        error = float(np.max(np.abs(integrated[window] - expected[window]))) / scale
        failed |= error > INTEGRATOR_TOLERANCE
        self.line(f"predictor-corrector vs catalog on [0.25, 2]: max rel difference {error:.3e}")
        return EXIT_FAILURE if failed else 0

""" Invariant subspace method for time-space fractional PDEs: special functions, fractional derivative rules,
subspace checks, reduced ODE systems, a catalog of exact solutions and their verification. """

__version__ = "0.1.0"

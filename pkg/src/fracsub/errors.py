""" Exception types raised by the fracsub library. """

from __future__ import annotations


class FracsubError(Exception):
    """Base class for all errors raised by fracsub."""


class DomainError(FracsubError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(DomainError):
    """The Gamma function was evaluated at one of its poles (zero or a negative integer)."""


class NonConvergence(FracsubError):
    """A series did not reach its truncation criterion within the term budget."""


class NoClosedRule(FracsubError):
    """A (basis function, derivative order) pair has no closed-form rule."""


class DegenerateBasis(FracsubError):
    """The basis functions of a subspace are numerically linearly dependent."""


class NotInvariant(FracsubError):
    """An operator does not map a subspace into itself."""


class NotTriangular(FracsubError):
    """A fractional ODE system cannot be solved by forward substitution."""


class Divergence(FracsubError):
    """A numerical integration left the representable range."""


class InadmissibleParams(FracsubError, ValueError):
    """Solution family parameters violate one of the family's conditions."""


class NoClassicalPair(FracsubError):
    """The solution family has no classical (α = β = 1) display."""


class UnknownFamily(FracsubError, KeyError):
    """No solution family or equation is registered under the requested id."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class UnknownFigure(FracsubError, KeyError):
    """No figure is registered under the requested id."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ConfigurationError(FracsubError):
    """The configuration file could not be interpreted."""

""" Named equation and solution parameters.

Parameters are plain mappings from names to decimals or lists of decimals. Indexed parameters (for example the
polynomial coefficients a_0..a_n) are stored as lists and addressed as `a[1]`.
"""

from __future__ import annotations

import re
import typing as t

import typing_extensions as te

from fracsub.errors import ConfigurationError

ParamValue: te.TypeAlias = t.Union[float, t.List[float]]
Params: te.TypeAlias = t.Mapping[str, ParamValue]

_KNOB = re.compile(r"^(?P<name>[A-Za-z_]\w*)(?:\[(?P<index>\d+)\])?$")


def scalar(params: Params, name: str) -> float:
    value = params[name]
    if isinstance(value, list):
        raise ConfigurationError(f"parameter {name!r} must be a single value, got a list")
    return float(value)


def vector(params: Params, name: str) -> list[float]:
    value = params[name]
    if not isinstance(value, list):
        return [float(value)]
    return [float(v) for v in value]


def indexed(params: Params, name: str, index: int) -> float:
    """Returns `name[index]`, treating missing trailing entries as zero."""

    values = vector(params, name)
    return values[index] if index < len(values) else 0.0


def resolve(params: Params, knob: str) -> float:
    match = _KNOB.match(knob)
    if not match:
        raise ConfigurationError(f"invalid parameter reference {knob!r}")
    name, index = match.group("name"), match.group("index")
    if name not in params:
        raise ConfigurationError(f"unknown parameter {name!r}")
    return scalar(params, name) if index is None else indexed(params, name, int(index))


def perturb(params: Params, knob: str, delta: float) -> dict[str, ParamValue]:
    """Returns a copy of *params* with the scalar or list entry named by *knob* shifted by *delta*."""

    match = _KNOB.match(knob)
    if not match:
        raise ConfigurationError(f"invalid parameter reference {knob!r}")
    name, index = match.group("name"), match.group("index")
    result = copy_params(params)
    if index is None:
        result[name] = scalar(params, name) + delta
    else:
        values = vector(params, name)
        position = int(index)
        values.extend([0.0] * (position + 1 - len(values)))
        values[position] += delta
        result[name] = values
    return result


def copy_params(params: Params) -> dict[str, ParamValue]:
    return {key: list(value) if isinstance(value, list) else value for key, value in params.items()}


def coerce(name: str, value: t.Any) -> ParamValue:
    """Validates a parameter value read from configuration."""

    if isinstance(value, bool):
        raise ConfigurationError(f"parameter {name!r} must be numeric, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, (list, tuple)) and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return [float(v) for v in value]
    raise ConfigurationError(f"parameter {name!r} must be a number or a list of numbers, got {value!r}")


def parse_assignment(text: str) -> tuple[str, ParamValue]:
    """Parses `key=value` or `key=v1,v2,...` as given on the command line."""

    key, sep, value = text.partition("=")
    key = key.strip()
    if not sep or not _KNOB.match(key) or "[" in key:
        raise ConfigurationError(f"expected key=value, got {text!r}")
    try:
        items = [float(item) for item in value.split(",")]
    except ValueError:
        raise ConfigurationError(f"parameter {key!r} must be numeric, got {value!r}")
    return key, items if len(items) > 1 else items[0]

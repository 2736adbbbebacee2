""" Loads the fracsub configuration, which is read from `fracsub.toml` or the `[tool.fracsub]` section of
`pyproject.toml`. """

from __future__ import annotations

import dataclasses
import functools
import logging
import typing as t
from pathlib import Path

from databind.core.settings import Alias

from fracsub.errors import ConfigurationError
from fracsub.parameters import ParamValue, coerce
from fracsub.util.toml_file import TomlFile

if t.TYPE_CHECKING:
    from fracsub.catalog import SolutionFamily

logger = logging.getLogger(__name__)

T = t.TypeVar("T")

TIERS = ("analytic", "numeric", "both")


@dataclasses.dataclass
class ApplicationConfig:
    #: A list of application plugins to _not_ activate.
    disable: list[str] = dataclasses.field(default_factory=list)

    #: If set, only these application plugins are activated.
    enable_only: t.Annotated[list[str] | None, Alias("enable-only")] = None


@dataclasses.dataclass
class VerifyConfig:
    tier: str = "analytic"
    #: Node counts of the numeric tier.
    nx: int = 128
    nt: int = 128
    trials: int = 8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.tier not in TIERS:
            raise ConfigurationError(f"verify.tier must be one of {', '.join(TIERS)}, got {self.tier!r}")
        if self.nx < 64 or self.nt < 64:
            raise ConfigurationError("verify.nx and verify.nt must be at least 64")
        if self.trials <= 0:
            raise ConfigurationError(f"verify.trials must be positive, got {self.trials}")


@dataclasses.dataclass
class FiguresConfig:
    points: int = 200
    range: list[float] = dataclasses.field(default_factory=lambda: [0.05, 3.0])

    def __post_init__(self) -> None:
        if self.points < 2:
            raise ConfigurationError(f"figures.points must be at least 2, got {self.points}")
        if len(self.range) != 2 or not 0 < self.range[0] < self.range[1]:
            raise ConfigurationError(f"figures.range must be [lo, hi] with 0 < lo < hi, got {self.range}")


@dataclasses.dataclass
class FamilyConfig:
    """Per-family overrides from a `[families.<id>]` section."""

    alpha: float | None = None
    beta: float | None = None
    params: dict[str, ParamValue] = dataclasses.field(default_factory=dict)


class Configuration:
    """The configuration found in a directory, or in an explicitly given TOML file."""

    def __init__(self, directory: Path, path: Path | None = None) -> None:
        self.directory = directory
        self.path = path
        self.fracsub_toml = TomlFile(directory / "fracsub.toml")
        self.pyproject_toml = TomlFile(directory / "pyproject.toml")

    def __repr__(self) -> str:
        return f'{type(self).__name__}(directory="{self.directory}")'

    @functools.cached_property
    def raw_config(self) -> dict[str, t.Any]:
        """The raw configuration. An explicit path must exist; otherwise `fracsub.toml` takes precedence over
        `pyproject.toml`, and an empty configuration is used when neither exists."""

        if self.path is not None:
            if not self.path.is_file():
                raise ConfigurationError(f"configuration file {self.path} does not exist")
            logger.debug("Reading configuration from <val>%s</val>", self.path)
            return TomlFile(self.path).load()
        if self.fracsub_toml.exists():
            logger.debug("Reading configuration from <val>%s</val>", self.fracsub_toml.path)
            return self.fracsub_toml.load()
        if self.pyproject_toml.exists():
            logger.debug("Reading configuration from <val>%s</val>", self.pyproject_toml.path)
            return self.pyproject_toml.table("tool", "fracsub")
        return {}

    def _load(self, section: str, type_: type[T]) -> T:
        from databind.core.converter import ConversionError
        from databind.core.settings import ExtraKeys
        from databind.json import load

        try:
            return load(self.raw_config.get(section, {}), type_, filename=section, settings=[ExtraKeys(True)])
        except ConversionError as exc:
            raise ConfigurationError(f"invalid [{section}] configuration: {exc}")

    def application(self) -> ApplicationConfig:
        return self._load("application", ApplicationConfig)

    def verify(self) -> VerifyConfig:
        return self._load("verify", VerifyConfig)

    def figures(self) -> FiguresConfig:
        return self._load("figures", FiguresConfig)

    def family(self, family_id: str) -> FamilyConfig:
        section = self.raw_config.get("families", {}).get(family_id, {})
        if not isinstance(section, dict):
            raise ConfigurationError(f"[families.{family_id}] must be a table")
        result = FamilyConfig()
        for key, value in section.items():
            if key in ("alpha", "beta"):
                setattr(result, key, float(t.cast(float, coerce(key, value))))
            else:
                result.params[key] = coerce(key, value)
        return result


def starter_config(families: t.Iterable[SolutionFamily]) -> dict[str, t.Any]:
    """A configuration with the default sections and the default parameters of every family."""

    sections: dict[str, t.Any] = {
        "verify": dataclasses.asdict(VerifyConfig()),
        "figures": dataclasses.asdict(FiguresConfig()),
        "families": {},
    }
    for family in families:
        section: dict[str, t.Any] = {"alpha": family.order.alpha, "beta": family.order.beta}
        section.update(family.params())
        sections["families"][family.id] = section
    return sections

"""The application object manages the CLI commands, which are contributed by plugins, and the fracsub
configuration."""

from __future__ import annotations

import functools
import logging
import os
import textwrap
import typing as t
from pathlib import Path

from cleo.application import Application as BaseCleoApplication  # type: ignore[import]
from cleo.commands.command import Command as _BaseCommand  # type: ignore[import]
from cleo.helpers import argument, option  # type: ignore[import]
from cleo.io.io import IO  # type: ignore[import]

from fracsub import __version__
from fracsub.config import Configuration, FamilyConfig
from fracsub.errors import (
    ConfigurationError,
    DomainError,
    FracsubError,
    InadmissibleParams,
    UnknownFamily,
    UnknownFigure,
)
from fracsub.parameters import ParamValue, parse_assignment

__all__ = ["Command", "argument", "option", "IO", "Application", "EXIT_FAILURE", "EXIT_USAGE"]
logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2

#: Errors that stem from the invocation rather than from a failed computation.
USAGE_ERRORS = (ConfigurationError, DomainError, InadmissibleParams, UnknownFamily, UnknownFigure)

ORDER_OPTIONS = [
    option("alpha", None, "The time order α in (0, 1].", flag=False),
    option("beta", None, "The space order β in (0, 1].", flag=False),
    option("param", "p", "A parameter override as key=value (lists as comma separated values).", flag=False,
           multiple=True),
    option("config", "c", "Path to a TOML configuration file.", flag=False),
]  # fmt: skip


class Command(_BaseCommand):
    """Base class for fracsub commands. Subclasses implement #_handle(); errors of the library are rendered as one
    line messages and mapped to exit codes."""

    help: str
    description: str

    def __init_subclass__(cls) -> None:
        if not cls.help:
            first_line, remainder = (cls.__doc__ or "").partition("\n")[::2]
            cls.help = (first_line.strip() + "\n" + textwrap.dedent(remainder)).strip()
        cls.description = cls.description or (cls.help.strip().splitlines()[0] if cls.help else None) or ""

    def handle(self) -> int:
        try:
            return self._handle()
        except USAGE_ERRORS as exc:
            self._render(exc)
            return EXIT_USAGE
        except FracsubError as exc:
            self._render(exc)
            return EXIT_FAILURE

    def _handle(self) -> int:
        raise NotImplementedError

    def _render(self, exc: Exception) -> None:
        if self.io.is_verbose():
            logger.exception("<subj>%s</subj> failed", self.name)
        self.line_error(f"<error>error: {exc}</error>")

    def usage_error(self, message: str) -> int:
        self.line_error(f"<error>error: {message}</error>")
        return EXIT_USAGE

    def configuration(self) -> Configuration:
        path = self.option("config") if self.definition.has_option("config") else None
        return Configuration(Path.cwd(), Path(path) if path else None)

    def float_option(self, name: str) -> float | None:
        value = self.option(name)
        if value is None:
            return None
        try:
            return float(value)
        except ValueError:
            raise ConfigurationError(f"--{name} expects a decimal, got {value!r}")

    def int_option(self, name: str, default: int) -> int:
        value = self.option(name)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ConfigurationError(f"--{name} expects an integer, got {value!r}")

    def overrides(self, family_id: str | None = None) -> FamilyConfig:
        """Combines the `[families.<id>]` configuration with the `--alpha`, `--beta` and `--param` options, which
        take precedence."""

        result = self.configuration().family(family_id) if family_id else FamilyConfig()
        params: dict[str, ParamValue] = dict(result.params)
        for assignment in self.option("param") or []:
            key, value = parse_assignment(assignment)
            params[key] = value
        return FamilyConfig(
            alpha=self.float_option("alpha") if self.option("alpha") is not None else result.alpha,
            beta=self.float_option("beta") if self.option("beta") is not None else result.beta,
            params=params,
        )


class CleoApplication(BaseCleoApplication):
    def __init__(self, init: t.Callable[[IO], t.Any], name: str = "console", version: str = "") -> None:
        super().__init__(name, version)
        self._init_callback = init

    def _configure_io(self, io: IO) -> None:
        from fracsub.util.logging import TerminalColorFormatter

        verbose = os.getenv("FRACSUB_VERBOSE")
        fmt = "%(message)s"
        if io.input.has_parameter_option("-vvv") or verbose in ("3", "full"):
            fmt = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
            level = logging.DEBUG
        elif io.input.has_parameter_option("-vv") or verbose in ("2", "more"):
            level = logging.DEBUG
        elif io.input.has_parameter_option("-v") or verbose in ("1", "on", "yes"):
            level = logging.INFO
        elif io.input.has_parameter_option("-q") or verbose in ("-1", "less", "quiet"):
            level = logging.ERROR
        else:
            level = logging.WARNING

        logging.basicConfig(level=level)
        TerminalColorFormatter(fmt, decorated=True).install("tty")
        TerminalColorFormatter(fmt, decorated=False).install("notty")

        super()._configure_io(io)
        self._init_callback(io)


class Application:
    """The main hub of command-line interactions: it loads the configuration and activates the application plugins
    that register commands on #cleo."""

    #: The cleo application to which #ApplicationPlugin#s register commands.
    cleo: CleoApplication

    def __init__(self, directory: Path | None = None, name: str = "fracsub", version: str = __version__) -> None:
        self._directory = directory or Path.cwd()
        self._plugins_loaded = False
        self.cleo = CleoApplication(self._cleo_init, name, version)

    @functools.cached_property
    def configuration(self) -> Configuration:
        return Configuration(self._directory)

    def load_plugins(self) -> None:
        """Loads all plugins in the `fracsub.plugins.application` entry point group, except those disabled through
        the `[application]` configuration."""

        from fracsub.plugins import ApplicationPlugin
        from fracsub.util.plugins import iter_entrypoints

        assert not self._plugins_loaded
        self._plugins_loaded = True

        try:
            config = self.configuration.application()
        except ConfigurationError:
            logger.exception("Could not read the <subj>[application]</subj> configuration, loading all plugins")
            config = None
        disable = config.disable if config else []
        enable_only = config.enable_only if config else None

        logger.debug("Loading application plugins")
        for plugin_name, loader in iter_entrypoints(ApplicationPlugin):  # type: ignore[type-abstract]
            if plugin_name in disable or (enable_only is not None and plugin_name not in enable_only):
                continue
            try:
                plugin = loader()(self)
            except Exception:
                logger.exception("Could not load plugin <subj>%s</subj> due to an exception", plugin_name)
            else:
                plugin.activate(self, plugin.load_configuration(self))

    def _cleo_init(self, io: IO) -> None:
        self.load_plugins()

    def run(self) -> None:
        self.cleo.run()

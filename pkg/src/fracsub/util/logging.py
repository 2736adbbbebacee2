"""A logging formatter that renders the `<subj>`, `<obj>` and `<val>` highlight tags of log messages."""

from __future__ import annotations

import logging

import typing_extensions as te
from cleo.formatters.formatter import Formatter  # type: ignore[import]
from cleo.formatters.style import Style  # type: ignore[import]

DEFAULT_STYLES = {
    "subj": Style("blue"),
    "obj": Style("yellow"),
    "val": Style("cyan"),
}


class TerminalColorFormatter(logging.Formatter):
    """Decorates tagged messages with ANSI colors, or strips the tags when *decorated* is disabled."""

    def __init__(self, fmt: str, decorated: bool = True) -> None:
        super().__init__(fmt)
        self.formatter = Formatter(decorated)
        for name, style in DEFAULT_STYLES.items():
            self.formatter.set_style(name, style)

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        if not self.formatter.is_decorated():
            return self.formatter.remove_format(message)  # type: ignore[no-any-return]
        return self.formatter.format(message)  # type: ignore[no-any-return]

    def install(self, target: te.Literal["tty", "notty"]) -> None:
        """Installs the formatter on the stream handlers of the root logger that are attached to a TTY, or on all
        others, depending on *target*."""

        for handler in logging.root.handlers:
            if not isinstance(handler, logging.StreamHandler):
                continue
            is_tty = hasattr(handler.stream, "isatty") and handler.stream.isatty()
            if is_tty == (target == "tty"):
                handler.setFormatter(self)

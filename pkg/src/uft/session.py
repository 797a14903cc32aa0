"""Checking ``.uft`` files in order against a growing environment."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .diagnostics import Diagnostic
from .errors import UftError
from .kernel import GlobalEnv, check_declaration
from .syntax import parse, resolve


@dataclass
class Session:
    env: GlobalEnv = field(default_factory=GlobalEnv)
    unit_eta: bool = True
    ascii: bool = False
    checked: list[str] = field(default_factory=list)

    def check_text(self, text: str, file: str) -> list[Diagnostic]:
        """Check one file; stops at its first error and leaves ``env`` at the last good state."""
        try:
            decls = resolve(parse(text, file), self.env.arities())
        except UftError as e:
            return [Diagnostic.from_error(e, file)]
        for d in decls:
            try:
                self.env = check_declaration(self.env, d, self.unit_eta, self.ascii)
            except UftError as e:
                return [Diagnostic.from_error(e, file)]
            self.checked.append(d.name)
        return []

    def check_file(self, path: str | Path) -> list[Diagnostic]:
        """Raises ``OSError`` if the file cannot be read."""
        text = Path(path).read_text(encoding="utf-8")
        return self.check_text(text, str(path))

    def check_files(self, paths: Iterable[str | Path]) -> list[Diagnostic]:
        """Check files in order, stopping at the first file with errors."""
        for p in paths:
            diags = self.check_file(p)
            if diags:
                return diags
        return []


def load(paths: Iterable[str | Path], unit_eta: bool = True, env: Optional[GlobalEnv] = None) -> GlobalEnv:
    """Check ``paths`` and return the environment, raising the first error."""
    s = Session(env if env is not None else GlobalEnv(), unit_eta)
    for p in paths:
        text = Path(p).read_text(encoding="utf-8")
        for d in resolve(parse(text, str(p)), s.env.arities()):
            s.env = check_declaration(s.env, d, unit_eta)
    return s.env

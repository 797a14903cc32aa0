from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .core import Span
from .errors import UftError

RED, YELLOW, CYAN, BOLD, RESET = "\x1b[31m", "\x1b[33m", "\x1b[36m", "\x1b[1m", "\x1b[0m"
_COLORS = {"error": RED, "warning": YELLOW, "info": CYAN}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error | warning | info
    code: str
    message: str
    file: Optional[str] = None
    span: Optional[Span] = None
    expected: Optional[str] = None
    actual: Optional[str] = None
    decl: Optional[str] = None

    @classmethod
    def from_error(cls, e: UftError, file: Optional[str] = None) -> Diagnostic:
        span = e.span
        return cls("error", e.code, e.message, span.file if span else file, span,
                   e.expected, e.actual, e.decl)

    def to_json(self) -> dict:
        return {
            "severity": self.severity, "code": self.code, "message": self.message,
            "file": self.file, "span": self.span.to_json() if self.span else None,
            "expected": self.expected, "actual": self.actual, "decl": self.decl,
        }

    def render(self, color: bool = False) -> str:
        if self.span:
            where = f"{self.span}: "
        elif self.file:
            where = f"{self.file}: "
        else:
            where = ""
        label = f"{self.severity}[{self.code}]"
        if color:
            label = f"{BOLD}{_COLORS.get(self.severity, '')}{label}{RESET}"
        lines = [f"{where}{label}: {self.message}"]
        if self.decl:
            lines.append(f"  in declaration: {self.decl}")
        if self.expected is not None:
            lines.append(f"  expected: {self.expected}")
        if self.actual is not None:
            lines.append(f"  actual:   {self.actual}")
        return "\n".join(lines)


def to_jsonl(diags: list[Diagnostic]) -> str:
    return "".join(json.dumps(d.to_json(), ensure_ascii=False, sort_keys=True) + "\n" for d in diags)

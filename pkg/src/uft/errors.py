from __future__ import annotations

from typing import Optional

from .core import Span


class UftError(Exception):
    """Base for every diagnostic-bearing failure.

    ``code`` is the stable machine-readable kind (``level-mismatch``,
    ``unbound-variable``, ...).
    """

    code = "error"

    def __init__(self, message: str, span: Optional[Span] = None, *, code: Optional[str] = None,
                 expected: Optional[str] = None, actual: Optional[str] = None,
                 decl: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.span = span
        if code is not None:
            self.code = code
        self.expected = expected
        self.actual = actual
        self.decl = decl

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.code}: {self.message}"


class ParseError(UftError):
    code = "syntax-error"

    def __init__(self, message: str, span: Optional[Span] = None, expected: frozenset[str] = frozenset()):
        super().__init__(message, span)
        self.expected_tokens = expected


class ScopeError(UftError):
    """``unbound-variable``, ``unbound-level-variable`` or ``duplicate-definition``."""


class TypeCheckError(UftError):
    """Kinds: mismatch, not-a-function, not-a-universe, not-a-pair-type,
    level-mismatch, unbound, prop-eliminator-misuse, cannot-infer, not-a-type-former.
    """

    code = "mismatch"

    def __init__(self, kind: str, message: str, span: Optional[Span] = None, *,
                 expected: Optional[str] = None, actual: Optional[str] = None,
                 expected_level=None, actual_level=None, decl: Optional[str] = None):
        super().__init__(message, span, code=kind, expected=expected, actual=actual, decl=decl)
        self.expected_level = expected_level
        self.actual_level = actual_level

    @property
    def kind(self) -> str:
        return self.code

"""Nameless core terms.

Variables are de Bruijn indices (0 is the innermost binder).  Binder names and
source spans ride along for printing and diagnostics but never take part in
equality, so ``==`` on core terms is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Callable, Optional

from .level import Level, LevelVar, subst_level


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"

    def to_json(self) -> dict:
        return {"file": self.file, "line": self.line, "col": self.col,
                "end_line": self.end_line, "end_col": self.end_col}


def _span():
    return field(default=None, compare=False, repr=False)


def _name(default: str = "x"):
    return field(default=default, compare=False)


class Term:
    __slots__ = ()
    span: Optional[Span]


@dataclass(frozen=True)
class Var(Term):
    index: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Global(Term):
    name: str
    # None marks a level hole to be solved by the elaborator
    levels: tuple[Optional[Level], ...] = ()
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Univ(Term):
    level: Level
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Pi(Term):
    name: str = _name()
    dom: Term = None  # type: ignore[assignment]
    cod: Term = None  # type: ignore[assignment]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lam(Term):
    name: str = _name()
    body: Term = None  # type: ignore[assignment]
    dom: Optional[Term] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sigma(Term):
    name: str = _name()
    dom: Term = None  # type: ignore[assignment]
    cod: Term = None  # type: ignore[assignment]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Fst(Term):
    pair: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Snd(Term):
    pair: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Id(Term):
    type: Term
    lhs: Term
    rhs: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Refl(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class J(Term):
    """``J P d p`` with ``P : Π (y : A) → Id A a y → U ℓ`` and ``d : P a refl``."""

    motive: Term
    base: Term
    path: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Nat(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Zero(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Suc(Term):
    pred: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class NatElim(Term):
    motive: Term
    zero: Term
    suc: Term
    target: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Empty(Term):
    level: Level
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class EmptyElim(Term):
    motive: Term
    target: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Unit(Term):
    level: Level
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Star(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Inl(Term):
    value: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Inr(Term):
    value: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class SumElim(Term):
    motive: Term
    left: Term
    right: Term
    target: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Trunc(Term):
    type: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Tr(Term):
    value: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Squash(Term):
    """Path constructor of the truncation: ``squash a b : Id ∥A∥ a b``."""

    lhs: Term
    rhs: Term
    type: Optional[Term] = None  # A, filled in by the checker
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class TruncElim(Term):
    """``truncElim h f t``; ``motive`` is the target proposition, filled in by the checker."""

    prop: Term
    fn: Term
    target: Term
    motive: Optional[Term] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Ann(Term):
    term: Term
    type: Term
    span: Optional[Span] = _span()


# Number of binders each child of a node sits under.
BINDERS: dict[type, dict[str, int]] = {
    Pi: {"cod": 1},
    Sigma: {"cod": 1},
    Lam: {"body": 1},
}

TERM_FIELDS: dict[type, tuple[str, ...]] = {}


def term_fields(cls: type) -> tuple[str, ...]:
    if cls not in TERM_FIELDS:
        TERM_FIELDS[cls] = tuple(f.name for f in fields(cls)
                                 if f.name not in ("span", "name", "level", "levels", "index"))
    return TERM_FIELDS[cls]


def map_children(t: Term, fn: Callable[[Term, int], Term]) -> Term:
    """Rebuild ``t`` with ``fn(child, binders_crossed)`` applied to each subterm."""
    binders = BINDERS.get(type(t), {})
    changes = {}
    for name in term_fields(type(t)):
        child = getattr(t, name)
        if isinstance(child, Term):
            new = fn(child, binders.get(name, 0))
            if new is not child:
                changes[name] = new
    return replace(t, **changes) if changes else t


def children(t: Term):
    binders = BINDERS.get(type(t), {})
    for name in term_fields(type(t)):
        child = getattr(t, name)
        if isinstance(child, Term):
            yield child, binders.get(name, 0)


def subst_levels(t: Term, sigma: dict[LevelVar, Level]) -> Term:
    if not sigma:
        return t

    def go(t: Term, _depth: int = 0) -> Term:
        match t:
            case Univ(level=l):
                return replace(t, level=subst_level(l, sigma))
            case Empty(level=l):
                return replace(t, level=subst_level(l, sigma))
            case Unit(level=l):
                return replace(t, level=subst_level(l, sigma))
            case Global(levels=ls) if ls:
                return replace(t, levels=tuple(None if l is None else subst_level(l, sigma) for l in ls))
        return map_children(t, go)

    return go(t)


def max_free_index(t: Term, depth: int = 0) -> int:
    """Number of free variables ``t`` needs: 1 + the largest escaping index, else 0."""
    if isinstance(t, Var):
        return t.index - depth + 1 if t.index >= depth else 0
    return max((max_free_index(c, depth + b) for c, b in children(t)), default=0)


def occurs(t: Term, index: int = 0) -> bool:
    """Whether variable ``index`` (relative to ``t``) occurs in ``t``."""
    if isinstance(t, Var):
        return t.index == index
    return any(occurs(c, index + b) for c, b in children(t))


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    if by == 0:
        return t

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Var):
            if t.index >= depth:
                if t.index + by < depth:
                    raise ValueError("shift would capture a bound variable")
                return replace(t, index=t.index + by)
            return t
        return map_children(t, lambda c, b: go(c, depth + b))

    return go(t, cutoff)


def level_vars(t: Term) -> set[LevelVar]:
    out: set[LevelVar] = set()

    def go(t: Term) -> None:
        match t:
            case Univ(level=l) | Empty(level=l) | Unit(level=l):
                out.update(l.variables)
            case Global(levels=ls):
                for l in ls:
                    if l is not None:
                        out.update(l.variables)
        for c, _ in children(t):
            go(c)

    go(t)
    return out


def has_holes(t: Term) -> bool:
    if isinstance(t, Global) and any(l is None for l in t.levels):
        return True
    return any(has_holes(c) for c, _ in children(t))


def size(t: Term) -> int:
    return 1 + sum(size(c) for c, _ in children(t))

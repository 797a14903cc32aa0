"""Named surface syntax produced by the parser."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..core import Span


def _span():
    return field(default=None, compare=False, repr=False)


# -- level expressions ------------------------------------------------------

class LExpr:
    span: Optional[Span]


@dataclass
class LNum(LExpr):
    value: int
    span: Optional[Span] = _span()


@dataclass
class LName(LExpr):
    name: str
    span: Optional[Span] = _span()


@dataclass
class LSuc(LExpr):
    arg: LExpr
    span: Optional[Span] = _span()


@dataclass
class LMax(LExpr):
    left: LExpr
    right: LExpr
    span: Optional[Span] = _span()


@dataclass
class LHole(LExpr):
    span: Optional[Span] = _span()


# -- terms ------------------------------------------------------------------

class STerm:
    span: Optional[Span]


@dataclass
class SName(STerm):
    name: str
    levels: Optional[list[LExpr]] = None
    span: Optional[Span] = _span()


@dataclass
class SUniv(STerm):
    level: LExpr
    span: Optional[Span] = _span()


@dataclass
class SPi(STerm):
    name: str
    dom: STerm
    cod: STerm
    span: Optional[Span] = _span()


@dataclass
class SSigma(STerm):
    name: str
    dom: STerm
    cod: STerm
    span: Optional[Span] = _span()


@dataclass
class SLam(STerm):
    name: str
    dom: Optional[STerm]
    body: STerm
    span: Optional[Span] = _span()


@dataclass
class SApp(STerm):
    fn: STerm
    arg: STerm
    span: Optional[Span] = _span()


@dataclass
class SPair(STerm):
    fst: STerm
    snd: STerm
    span: Optional[Span] = _span()


@dataclass
class SAnn(STerm):
    term: STerm
    type: STerm
    span: Optional[Span] = _span()


@dataclass
class SPrim(STerm):
    """Fixed-arity primitive: ``op`` is one of PRIM_ARITY's keys."""

    op: str
    args: list[STerm]
    level: Optional[LExpr] = None
    span: Optional[Span] = _span()


PRIM_ARITY = {
    "Id": 3, "refl": 0, "J": 3,
    "ℕ": 0, "zero": 0, "suc": 1, "natElim": 4,
    "𝟘": 0, "emptyElim": 2,
    "𝟙": 0, "⋆": 0,
    "+": 2, "inl": 1, "inr": 1, "sumElim": 4,
    "Trunc": 1, "tr": 1, "squash": 2, "truncElim": 3,
    "fst": 1, "snd": 1,
}


@dataclass
class SurfaceDeclaration:
    name: str
    telescope: list[tuple[str, Optional[Span]]]
    type: STerm
    body: Optional[STerm]  # None for postulates
    span: Optional[Span] = None
    name_span: Optional[Span] = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None

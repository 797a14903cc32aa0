"""Scope resolution: surface names to de Bruijn indices and global references."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .. import core as c
from ..errors import ScopeError
from ..level import Level, LevelVar, lconst, lmax, lsuc
from .surface import (LExpr, LHole, LMax, LName, LNum, LSuc, SAnn, SApp, SLam, SName, SPair, SPi,
                      SPrim, SSigma, STerm, SUniv, SurfaceDeclaration)


@dataclass
class Declaration:
    """A scope-resolved declaration; ``body`` is None for postulates."""

    name: str
    telescope: tuple[LevelVar, ...]
    type: c.Term
    body: Optional[c.Term]
    span: Optional[c.Span] = None
    name_span: Optional[c.Span] = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None


def resolve_level(e: LExpr, tele: Mapping[str, LevelVar], allow_hole: bool = False) -> Optional[Level]:
    match e:
        case LNum(value=n):
            return lconst(n)
        case LName(name=n):
            if n not in tele:
                raise ScopeError(f"level variable {n!r} is not bound by the declaration's telescope",
                                 e.span, code="unbound-level-variable")
            return Level.of(0, {tele[n]: 0})
        case LSuc(arg=a):
            return lsuc(_no_hole(resolve_level(a, tele), a))
        case LMax(left=a, right=b):
            return lmax(_no_hole(resolve_level(a, tele), a), _no_hole(resolve_level(b, tele), b))
        case LHole():
            if not allow_hole:
                raise ScopeError("level hole '_' is only allowed as a level argument", e.span,
                                 code="syntax-error")
            return None
    raise TypeError(e)


def _no_hole(l: Optional[Level], e: LExpr) -> Level:
    if l is None:
        raise ScopeError("level hole '_' must stand alone", e.span, code="syntax-error")
    return l


_PRIMS = {
    "Id": c.Id, "J": c.J, "suc": c.Suc, "natElim": c.NatElim, "emptyElim": c.EmptyElim,
    "+": c.Sum, "inl": c.Inl, "inr": c.Inr, "sumElim": c.SumElim, "Trunc": c.Trunc,
    "tr": c.Tr, "squash": c.Squash, "truncElim": c.TruncElim, "fst": c.Fst, "snd": c.Snd,
}
_NULLARY = {"refl": c.Refl, "ℕ": c.Nat, "zero": c.Zero, "⋆": c.Star}


@dataclass
class Scope:
    globals: Mapping[str, int]  # name -> telescope arity
    tele: Mapping[str, LevelVar] = field(default_factory=dict)
    locals: list[str] = field(default_factory=list)

    def lookup(self, name: str) -> Optional[int]:
        for i, n in enumerate(reversed(self.locals)):
            if n == name:
                return i
        return None


def resolve_term(t: STerm, scope: Scope) -> c.Term:
    sp = t.span
    match t:
        case SName(name=n, levels=levels):
            idx = scope.lookup(n) if n != "_" else None
            if idx is not None:
                if levels is not None:
                    raise ScopeError(f"local variable {n!r} takes no level arguments", sp,
                                     code="syntax-error")
                return c.Var(idx, span=sp)
            if n in scope.globals:
                arity = scope.globals[n]
                if levels is None:
                    lv: tuple[Optional[Level], ...] = (None,) * arity
                else:
                    if len(levels) != arity:
                        raise ScopeError(f"{n!r} takes {arity} level argument(s), got {len(levels)}",
                                         sp, code="level-arity")
                    lv = tuple(resolve_level(e, scope.tele, allow_hole=True) for e in levels)
                return c.Global(n, lv, span=sp)
            raise ScopeError(f"unbound variable {n!r}", sp, code="unbound-variable")
        case SUniv(level=e):
            return c.Univ(resolve_level(e, scope.tele), span=sp)
        case SPi(name=n, dom=a, cod=b):
            return c.Pi(n, resolve_term(a, scope), _under(scope, n, b), span=sp)
        case SSigma(name=n, dom=a, cod=b):
            return c.Sigma(n, resolve_term(a, scope), _under(scope, n, b), span=sp)
        case SLam(name=n, dom=a, body=b):
            dom = resolve_term(a, scope) if a is not None else None
            return c.Lam(n, _under(scope, n, b), dom, span=sp)
        case SApp(fn=f, arg=a):
            return c.App(resolve_term(f, scope), resolve_term(a, scope), span=sp)
        case SPair(fst=a, snd=b):
            return c.Pair(resolve_term(a, scope), resolve_term(b, scope), span=sp)
        case SAnn(term=a, type=b):
            return c.Ann(resolve_term(a, scope), resolve_term(b, scope), span=sp)
        case SPrim(op="𝟘", level=e):
            return c.Empty(resolve_level(e, scope.tele), span=sp)
        case SPrim(op="𝟙", level=e):
            return c.Unit(resolve_level(e, scope.tele), span=sp)
        case SPrim(op=op, args=args) if op in _NULLARY:
            return _NULLARY[op](span=sp)
        case SPrim(op=op, args=args):
            return _PRIMS[op](*(resolve_term(a, scope) for a in args), span=sp)
    raise TypeError(f"unknown surface node {t!r}")


def _under(scope: Scope, name: str, t: STerm) -> c.Term:
    # "_" is pushed too, so indices stay aligned, but it can never be referenced
    scope.locals.append(name)
    try:
        return resolve_term(t, scope)
    finally:
        scope.locals.pop()


def resolve(decls: list[SurfaceDeclaration], env: Mapping[str, int] | None = None) -> list[Declaration]:
    """Resolve a file's declarations against ``env`` (name -> telescope arity).

    Later declarations see earlier ones.  ``env`` itself is not modified.
    """
    known = dict(env or {})
    out = []
    for d in decls:
        if d.name in known:
            raise ScopeError(f"duplicate definition of {d.name!r}", d.name_span or d.span,
                             code="duplicate-definition")
        tele: dict[str, LevelVar] = {}
        for i, (n, sp) in enumerate(d.telescope):
            if n in tele:
                raise ScopeError(f"level variable {n!r} bound twice", sp, code="duplicate-definition")
            tele[n] = LevelVar(n, i)
        scope = Scope(known, tele)
        ty = resolve_term(d.type, scope)
        body = resolve_term(d.body, scope) if d.body is not None else None
        out.append(Declaration(d.name, tuple(tele.values()), ty, body, d.span, d.name_span))
        known[d.name] = len(tele)
    return out

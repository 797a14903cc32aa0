"""Bidirectional elaboration and checking.

Checking produces an elaborated core term: level holes are solved, lambdas carry
their domains, truncation eliminators carry their target, and introduction
forms that cannot be inferred on their own are wrapped in an annotation.  An
elaborated term is therefore always inferable again.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable, Optional, Sequence

from .. import core as c
from ..errors import TypeCheckError, UftError
from ..level import Level, LevelVar, lmax, lsuc, lzero, show_level, subst_level
from ..syntax.pretty import pretty
from ..syntax.resolve import Declaration
from .env import CheckedDecl, GlobalEnv
from .nbe import NbE, TermClosure
from .values import (VEmpty, VId, VInl, VInr, VLam, VNat, VPi, VRefl, VSigma, VSuc, VSum, VTr,
                     VTrunc, VUnit, VUniv, VZero, Value, var)


@dataclass(frozen=True)
class Context:
    names: tuple[str, ...] = ()
    types: tuple[Value, ...] = ()

    @property
    def env(self) -> tuple[Value, ...]:
        return tuple(var(i) for i in range(len(self.types)))

    def bind(self, name: str, ty: Value) -> Context:
        return Context(self.names + (name,), self.types + (ty,))

    def __len__(self) -> int:
        return len(self.types)


EMPTY = Context()

# (binder name, domain as a function of the values bound so far)
Telescope = Sequence[tuple[str, Callable[[list[Value]], Value]]]


class Checker(NbE):
    def __init__(self, genv: GlobalEnv, unit_eta: bool = True, ascii: bool = False):
        super().__init__(genv, unit_eta)
        self.ascii = ascii
        self._span: Optional[c.Span] = None

    # -- diagnostics ----------------------------------------------------------

    def show(self, ctx: Context, v: Value, ty: Optional[Value] = None) -> str:
        try:
            t = self.quote_type(ctx.types, v) if ty is None else self.quote(ctx.types, v, ty)
            return pretty(t, ctx.names, self.ascii)
        except Exception:  # printing must never mask the real error
            return f"<{type(v).__name__}>"

    def error(self, kind: str, message: str, **kw) -> TypeCheckError:
        return TypeCheckError(kind, message, self._span, **kw)

    def eval_in(self, ctx: Context, t: c.Term) -> Value:
        return self.eval(ctx.env, t)

    # -- entry points -----------------------------------------------------------

    def infer(self, ctx: Context, t: c.Term) -> tuple[c.Term, Value]:
        saved = self._span
        if t.span is not None:
            self._span = t.span
        try:
            return self._infer(ctx, t)
        finally:
            self._span = saved

    def check(self, ctx: Context, t: c.Term, ty: Value) -> c.Term:
        saved = self._span
        if t.span is not None:
            self._span = t.span
        try:
            return self._check(ctx, t, ty)
        finally:
            self._span = saved

    def check_type(self, ctx: Context, t: c.Term) -> tuple[c.Term, Level]:
        t2, ty = self.infer(ctx, t)
        if not isinstance(ty, VUniv):
            raise self.error("not-a-universe", f"expected a type, but its type is {self.show(ctx, ty)}",
                             actual=self.show(ctx, ty))
        return t2, ty.level

    # -- inference ----------------------------------------------------------------

    def _infer(self, ctx: Context, t: c.Term) -> tuple[c.Term, Value]:
        match t:
            case c.Var(index=i):
                if i >= len(ctx):
                    raise self.error("unbound", f"variable index {i} escapes its context")
                return t, ctx.types[len(ctx) - 1 - i]
            case c.Global(name=n, levels=ls):
                if n not in self.genv:
                    raise self.error("unbound", f"unknown declaration {n!r}")
                if any(l is None for l in ls):
                    raise self.error("cannot-infer",
                                     f"cannot infer the level arguments of {n!r} here; supply them explicitly")
                return t, self.global_type(n, ls)
            case c.Univ(level=l):
                return t, VUniv(lsuc(l))
            case c.Pi(name=n, dom=a, cod=b) | c.Sigma(name=n, dom=a, cod=b):
                a2, la = self.check_type(ctx, a)
                b2, lb = self.check_type(ctx.bind(n, self.eval_in(ctx, a2)), b)
                return type(t)(n, a2, b2, span=t.span), VUniv(lmax(la, lb))
            case c.Lam(name=n, body=b, dom=a) if a is not None:
                a2, _ = self.check_type(ctx, a)
                av = self.eval_in(ctx, a2)
                inner = ctx.bind(n, av)
                b2, bty = self.infer(inner, b)
                cod = TermClosure(self, ctx.env, self.quote_type(inner.types, bty))
                return c.Lam(n, b2, a2, span=t.span), VPi(n, av, cod)
            case c.App(fn=f, arg=a):
                f2, fty = self.infer(ctx, f)
                if not isinstance(fty, VPi):
                    raise self.error("not-a-function",
                                     f"cannot apply a term of type {self.show(ctx, fty)}",
                                     actual=self.show(ctx, fty))
                a2 = self.check(ctx, a, fty.dom)
                return c.App(f2, a2, span=t.span), fty.cod(self.eval_in(ctx, a2))
            case c.Pair(fst=a, snd=b):
                a2, aty = self.infer(ctx, a)
                b2, bty = self.infer(ctx, b)
                return c.Pair(a2, b2, span=t.span), VSigma("_", aty, lambda _x, bty=bty: bty)
            case c.Fst(pair=p) | c.Snd(pair=p):
                p2, pty = self.infer(ctx, p)
                if not isinstance(pty, VSigma):
                    raise self.error("not-a-pair-type", f"projection from a term of type {self.show(ctx, pty)}",
                                     actual=self.show(ctx, pty))
                if isinstance(t, c.Fst):
                    return c.Fst(p2, span=t.span), pty.dom
                return c.Snd(p2, span=t.span), pty.cod(self.fst(self.eval_in(ctx, p2)))
            case c.Id(type=a, lhs=x, rhs=y):
                a2, l = self.check_type(ctx, a)
                av = self.eval_in(ctx, a2)
                return c.Id(a2, self.check(ctx, x, av), self.check(ctx, y, av), span=t.span), VUniv(l)
            case c.J(motive=m, base=d, path=p):
                p2, pty = self.infer(ctx, p)
                if not isinstance(pty, VId):
                    raise self.error("mismatch", f"J expects a path, got a term of type {self.show(ctx, pty)}",
                                     expected="an identity type", actual=self.show(ctx, pty))
                A, a, b = pty.type, pty.lhs, pty.rhs
                m2 = self.check_motive(ctx, m, [("y", lambda bs: A), ("p", lambda bs: VId(A, a, bs[0]))])
                mv = self.eval_in(ctx, m2)
                d2 = self.check(ctx, d, self.apply(self.apply(mv, a), VRefl()))
                return (c.J(m2, d2, p2, span=t.span),
                        self.apply(self.apply(mv, b), self.eval_in(ctx, p2)))
            case c.Nat():
                return t, VUniv(lzero())
            case c.Zero():
                return t, VNat()
            case c.Suc(pred=n):
                return c.Suc(self.check(ctx, n, VNat()), span=t.span), VNat()
            case c.NatElim(motive=m, zero=z, suc=s, target=n):
                m2 = self.check_motive(ctx, m, [("n", lambda bs: VNat())])
                mv = self.eval_in(ctx, m2)
                z2 = self.check(ctx, z, self.apply(mv, VZero()))
                step = VPi("n", VNat(), lambda k: VPi("ih", self.apply(mv, k),
                                                       lambda _ih, k=k: self.apply(mv, VSuc(k))))
                s2 = self.check(ctx, s, step)
                n2 = self.check(ctx, n, VNat())
                return c.NatElim(m2, z2, s2, n2, span=t.span), self.apply(mv, self.eval_in(ctx, n2))
            case c.Empty(level=l) | c.Unit(level=l):
                return t, VUniv(l)
            case c.EmptyElim(motive=m, target=e):
                e2, ety = self.infer(ctx, e)
                if not isinstance(ety, VEmpty):
                    raise self.error("mismatch", f"emptyElim expects an element of 𝟘, got {self.show(ctx, ety)}",
                                     expected="𝟘", actual=self.show(ctx, ety))
                m2 = self.check_motive(ctx, m, [("e", lambda bs: ety)])
                return c.EmptyElim(m2, e2, span=t.span), self.apply(self.eval_in(ctx, m2), self.eval_in(ctx, e2))
            case c.Sum(left=a, right=b):
                a2, la = self.check_type(ctx, a)
                b2, lb = self.check_type(ctx, b)
                return c.Sum(a2, b2, span=t.span), VUniv(lmax(la, lb))
            case c.SumElim(motive=m, left=l, right=r, target=s):
                s2, sty = self.infer(ctx, s)
                if not isinstance(sty, VSum):
                    raise self.error("mismatch", f"sumElim expects a sum, got {self.show(ctx, sty)}",
                                     expected="a sum type", actual=self.show(ctx, sty))
                m2 = self.check_motive(ctx, m, [("s", lambda bs: sty)])
                mv = self.eval_in(ctx, m2)
                l2 = self.check(ctx, l, VPi("a", sty.left, lambda a: self.apply(mv, VInl(a))))
                r2 = self.check(ctx, r, VPi("b", sty.right, lambda b: self.apply(mv, VInr(b))))
                return c.SumElim(m2, l2, r2, s2, span=t.span), self.apply(mv, self.eval_in(ctx, s2))
            case c.Trunc(type=a):
                a2, l = self.check_type(ctx, a)
                return c.Trunc(a2, span=t.span), VUniv(l)
            case c.Tr(value=a):
                a2, aty = self.infer(ctx, a)
                return c.Tr(a2, span=t.span), VTrunc(aty)
            case c.Squash(lhs=a, rhs=b, type=ty):
                if ty is not None:
                    ty2, _ = self.check_type(ctx, ty)
                    tt = VTrunc(self.eval_in(ctx, ty2))
                    a2, b2 = self.check(ctx, a, tt), self.check(ctx, b, tt)
                else:
                    a2, b2, tt = self._infer_squash(ctx, a, b)
                    ty2 = self.quote_type(ctx.types, tt.type)
                return (c.Squash(a2, b2, ty2, span=t.span),
                        VId(tt, self.eval_in(ctx, a2), self.eval_in(ctx, b2)))
            case c.TruncElim(prop=h, fn=f, target=x, motive=m):
                if m is not None:
                    m2, _ = self.check_type(ctx, m)
                    return self._trunc_elim(ctx, t, self.eval_in(ctx, m2))
                return self._trunc_elim(ctx, t, None)
            case c.Ann(term=a, type=ty):
                ty2, _ = self.check_type(ctx, ty)
                tyv = self.eval_in(ctx, ty2)
                return c.Ann(self.check(ctx, a, tyv), ty2, span=t.span), tyv
            case c.Lam() | c.Refl() | c.Star() | c.Inl() | c.Inr():
                raise self.error("cannot-infer",
                                 f"cannot infer the type of {self.describe(ctx, t)}; add a type annotation")
        raise self.error("cannot-infer", f"unsupported term {type(t).__name__}")

    def describe(self, ctx: Context, t: c.Term) -> str:
        try:
            return f"'{pretty(t, ctx.names)}'"
        except Exception:
            return type(t).__name__

    def _infer_squash(self, ctx: Context, a: c.Term, b: c.Term):
        first, second, swapped = a, b, False
        try:
            a2, aty = self.infer(ctx, a)
        except TypeCheckError as e:
            if e.kind != "cannot-infer":
                raise
            first, second, swapped = b, a, True
            a2, aty = self.infer(ctx, b)
        if not isinstance(aty, VTrunc):
            raise self.error("mismatch", f"squash expects elements of a truncation, got {self.show(ctx, aty)}",
                             expected="a truncation", actual=self.show(ctx, aty))
        b2 = self.check(ctx, second, aty)
        return (b2, a2, aty) if swapped else (a2, b2, aty)

    def _trunc_elim(self, ctx: Context, t: c.TruncElim, target: Optional[Value]) -> tuple[c.Term, Value]:
        x2, xty = self.infer(ctx, t.target)
        if not isinstance(xty, VTrunc):
            raise self.error("mismatch", f"truncElim eliminates a truncation, got {self.show(ctx, xty)}",
                             expected="a truncation", actual=self.show(ctx, xty))
        A = xty.type
        if target is None:
            target = self._guess_prop(ctx, t.prop, t.fn)
        P = target
        h_ty = VPi("p", P, lambda p: VPi("q", P, lambda q, p=p: VId(P, p, q)))
        try:
            h2 = self.check(ctx, t.prop, h_ty)
        except TypeCheckError as e:
            if e.kind in ("mismatch", "level-mismatch", "not-a-function", "not-a-pair-type"):
                shown = self.show(ctx, P)
                raise TypeCheckError(
                    "prop-eliminator-misuse",
                    f"truncElim targets {shown}, but its first argument does not show that "
                    f"{shown} is a proposition ({e.message})",
                    e.span or self._span, expected=self.show(ctx, h_ty), actual=e.actual) from e
            raise
        f2 = self.check(ctx, t.fn, VPi("x", A, lambda _x: P))
        return (c.TruncElim(h2, f2, x2, motive=self.quote_type(ctx.types, P), span=t.span), P)

    def _guess_prop(self, ctx: Context, h: c.Term, f: c.Term) -> Value:
        for arg in (h, f):
            try:
                _, ty = self.infer(ctx, arg)
            except TypeCheckError as e:
                if e.kind == "cannot-infer":
                    continue
                raise
            if isinstance(ty, VPi):
                if arg is h:
                    return ty.dom
                return ty.cod(var(len(ctx)))  # non-dependent, so the variable never escapes
        raise self.error("cannot-infer", "cannot determine the target proposition of truncElim; "
                                         "annotate the term")

    def check_motive(self, ctx: Context, m: c.Term, tele: Telescope) -> c.Term:
        """Check ``m`` as a type family over ``tele``, eta-expanding if it is not a lambda."""
        bound: list[Value] = []
        inner = ctx
        lams: list[tuple[str, c.Term]] = []
        body = m
        for i, (name, mk) in enumerate(tele):
            dom = mk(bound)
            if isinstance(body, c.Lam):
                if body.dom is not None:
                    d2, _ = self.check_type(inner, body.dom)
                    if not self.conv_type(inner.types, self.eval_in(inner, d2), dom):
                        raise self.error("mismatch", "motive binder has the wrong domain",
                                         expected=self.show(inner, dom),
                                         actual=self.show(inner, self.eval_in(inner, d2)))
                name, body = body.name, body.body
            else:
                body = c.App(c.shift(body, 1), c.Var(0))
            lams.append((name, self.quote_type(inner.types, dom)))
            bound.append(var(len(inner)))
            inner = inner.bind(name, dom)
        out, _ = self.check_type(inner, body)
        for name, dom in reversed(lams):
            out = c.Lam(name, out, dom)
        return out

    # -- checking -------------------------------------------------------------------

    def _annotate(self, ctx: Context, t: c.Term, ty: Value) -> c.Term:
        return c.Ann(t, self.quote_type(ctx.types, ty), span=t.span)

    def _check(self, ctx: Context, t: c.Term, ty: Value) -> c.Term:
        match t:
            case c.Lam(name=n, body=b, dom=a):
                if not isinstance(ty, VPi):
                    raise self.error("mismatch", f"a function was given where {self.show(ctx, ty)} was expected",
                                     expected=self.show(ctx, ty), actual="a function")
                if a is not None:
                    a2, _ = self.check_type(ctx, a)
                    if not self.conv_type(ctx.types, self.eval_in(ctx, a2), ty.dom):
                        raise self.error("mismatch", "lambda annotation disagrees with the expected domain",
                                         expected=self.show(ctx, ty.dom),
                                         actual=self.show(ctx, self.eval_in(ctx, a2)))
                x = var(len(ctx))
                b2 = self.check(ctx.bind(n, ty.dom), b, ty.cod(x))
                return c.Lam(n, b2, self.quote_type(ctx.types, ty.dom), span=t.span)
            case c.Pair(fst=a, snd=b):
                if not isinstance(ty, VSigma):
                    raise self.error("not-a-pair-type", f"a pair was given where {self.show(ctx, ty)} was expected",
                                     expected=self.show(ctx, ty), actual="a pair")
                a2 = self.check(ctx, a, ty.dom)
                b2 = self.check(ctx, b, ty.cod(self.eval_in(ctx, a2)))
                return self._annotate(ctx, c.Pair(a2, b2, span=t.span), ty)
            case c.Refl():
                if not isinstance(ty, VId):
                    raise self.error("mismatch", f"refl was given where {self.show(ctx, ty)} was expected",
                                     expected=self.show(ctx, ty), actual="an identification")
                if not self.conv(ctx.types, ty.lhs, ty.rhs, ty.type):
                    raise self.error("mismatch", "refl cannot identify distinct terms",
                                     expected=self.show(ctx, ty.lhs, ty.type),
                                     actual=self.show(ctx, ty.rhs, ty.type))
                return self._annotate(ctx, t, ty)
            case c.Star():
                if not (isinstance(ty, VUnit)):
                    raise self.error("mismatch", f"⋆ was given where {self.show(ctx, ty)} was expected",
                                     expected=self.show(ctx, ty), actual="𝟙")
                return self._annotate(ctx, t, ty)
            case c.Inl(value=a) | c.Inr(value=a):
                if not isinstance(ty, VSum):
                    raise self.error("mismatch", f"an injection was given where {self.show(ctx, ty)} was expected",
                                     expected=self.show(ctx, ty), actual="a sum")
                side = ty.left if isinstance(t, c.Inl) else ty.right
                return self._annotate(ctx, type(t)(self.check(ctx, a, side), span=t.span), ty)
            case c.Tr(value=a) if isinstance(ty, VTrunc):
                return c.Tr(self.check(ctx, a, ty.type), span=t.span)
            case c.Squash(lhs=a, rhs=b, type=None) if isinstance(ty, VId) and isinstance(ty.type, VTrunc):
                tt = ty.type
                a2, b2 = self.check(ctx, a, tt), self.check(ctx, b, tt)
                term = c.Squash(a2, b2, self.quote_type(ctx.types, tt.type), span=t.span)
                self._expect(ctx, VId(tt, self.eval_in(ctx, a2), self.eval_in(ctx, b2)), ty)
                return term
            case c.TruncElim(motive=None):
                term, _ = self._trunc_elim(ctx, t, ty)
                return term
            case c.Global(levels=ls) if any(l is None for l in ls):
                g = self.solve_levels(ctx, t, ty)
                _, gty = self.infer(ctx, g)
                self._expect(ctx, gty, ty)
                return g
        t2, ity = self.infer(ctx, t)
        self._expect(ctx, ity, ty)
        return t2

    def _expect(self, ctx: Context, actual: Value, expected: Value) -> None:
        if self.conv_type(ctx.types, actual, expected):
            return
        if isinstance(actual, VUniv) and isinstance(expected, VUniv):
            e, a = show_level(expected.level, self.ascii), show_level(actual.level, self.ascii)
            shown_e = pretty(c.Univ(expected.level), ascii=self.ascii)
            shown_a = pretty(c.Univ(actual.level), ascii=self.ascii)
            raise self.error("level-mismatch", f"universe level mismatch: expected {shown_e}, inferred {shown_a}",
                             expected=e, actual=a, expected_level=expected.level, actual_level=actual.level)
        raise self.error("mismatch", "type mismatch", expected=self.show(ctx, expected),
                         actual=self.show(ctx, actual))

    # -- level holes ---------------------------------------------------------------

    def solve_levels(self, ctx: Context, g: c.Global, expected: Value) -> c.Global:
        """Fill omitted level arguments of ``g`` by first-order matching its type against ``expected``."""
        if g.name not in self.genv:
            raise self.error("unbound", f"unknown declaration {g.name!r}")
        slots: list[Optional[LevelVar]] = []
        trial = []
        for i, l in enumerate(g.levels):
            m = LevelVar(f"?{i}", -1 - i) if l is None else None
            slots.append(m)
            trial.append(l if m is None else Level.of(0, {m: 0}))
        metas = {m for m in slots if m is not None}
        pattern = self.quote_type(ctx.types, self.global_type(g.name, tuple(trial)))
        target = self.quote_type(ctx.types, expected)
        sol: dict[LevelVar, Level] = {}
        deferred: list[tuple[Level, Level]] = []
        shown = pretty(target, ctx.names)
        fail = self.error("cannot-infer", f"cannot determine the level arguments of {g.name!r} "
                                          f"from the expected type {shown}", expected=shown)
        if not _match(pattern, target, sol, deferred, metas) or not metas <= sol.keys():
            raise fail
        if any(subst_level(p, sol) != tl for p, tl in deferred):
            raise fail
        levels = tuple(l if m is None else sol[m] for l, m in zip(g.levels, slots))
        return c.Global(g.name, levels, span=g.span)


def _lower(t: Level, k: int) -> Optional[Level]:
    """The ``s`` with ``lsuc^k s == t``, if any."""
    if any(o < k for _, o in t.atoms):
        return None
    s = Level.of(max(t.const - k, 0), {v: o - k for v, o in t.atoms})
    return s if lsuc(s, k) == t else None


def _match_level(p: Level, t: Level, sol: dict, deferred: list, metas: set) -> bool:
    mvars = [v for v in p.variables if v in metas]
    if not mvars:
        return p == t
    if p.const == 0 and len(p.atoms) == 1:
        m, k = p.atoms[0]
        s = _lower(t, k)
        if s is None:
            return False
        if m in sol and sol[m] != s:
            return False
        sol[m] = s
        return True
    deferred.append((p, t))
    return True


def _match(p, t, sol: dict, deferred: list, metas: set) -> bool:
    if isinstance(p, Level) and isinstance(t, Level):
        return _match_level(p, t, sol, deferred, metas)
    if p is None or t is None:
        return p is t
    if isinstance(p, tuple) and isinstance(t, tuple):
        return len(p) == len(t) and all(_match(a, b, sol, deferred, metas) for a, b in zip(p, t))
    if isinstance(p, c.Term):
        if type(p) is not type(t):
            return False
        for f in fields(p):
            if f.compare and not _match(getattr(p, f.name), getattr(t, f.name), sol, deferred, metas):
                return False
        return True
    return p == t


# -- declarations -------------------------------------------------------------------

def check_declaration(env: GlobalEnv, decl: Declaration, unit_eta: bool = True,
                      ascii: bool = False) -> GlobalEnv:
    """Check ``decl`` against ``env`` and return the extended environment; ``env`` is unchanged."""
    if decl.name in env:
        raise TypeCheckError("duplicate-definition", f"duplicate definition of {decl.name!r}",
                             decl.name_span or decl.span, decl=decl.name)
    k = Checker(env, unit_eta, ascii)
    try:
        ty, _ = k.check_type(EMPTY, decl.type)
        body = None
        if decl.body is not None:
            body = k.check(EMPTY, decl.body, k.eval((), ty))
    except UftError as e:
        if e.decl is None:
            e.decl = decl.name
        if e.span is None:
            e.span = decl.span
        raise
    return env.extend(CheckedDecl(decl.name, decl.telescope, ty, body, decl.span))


def check_declarations(decls: Sequence[Declaration], env: Optional[GlobalEnv] = None,
                       unit_eta: bool = True) -> GlobalEnv:
    env = env if env is not None else GlobalEnv()
    for d in decls:
        env = check_declaration(env, d, unit_eta)
    return env


def infer_level_of(env: GlobalEnv, name: str, unit_eta: bool = True) -> Level:
    """The universe level of ``name`` once all its term parameters are supplied.

    For definitions the level is re-inferred from the elaborated body rather
    than read off the declared type.
    """
    d = env[name]
    k = Checker(env, unit_eta)
    if d.body is not None:
        _, ty = k.infer(EMPTY, d.body)
    else:
        ty = k.eval((), d.type)
    ctx = EMPTY
    while isinstance(ty, VPi):
        x = var(len(ctx))
        ctx = ctx.bind(ty.name, ty.dom)
        ty = ty.cod(x)
    if not isinstance(ty, VUniv):
        raise TypeCheckError("not-a-universe", f"{name!r} does not produce a type: its result is "
                             f"{k.show(ctx, ty)}", d.span, actual=k.show(ctx, ty), decl=name)
    return ty.level


def inferred_type(env: GlobalEnv, name: str, unit_eta: bool = True) -> Value:
    d = env[name]
    k = Checker(env, unit_eta)
    if d.body is None:
        return k.eval((), d.type)
    return k.infer(EMPTY, d.body)[1]

"""Evaluation to weak-head values and type-directed read-back.

Read-back is typed so that it can produce eta-long forms for Π, Σ and 1;
two values are convertible exactly when their read-backs coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .. import core as c
from .env import GlobalEnv, level_key
from .values import (EApp, EEmptyElim, EFst, EJ, ENatElim, ESnd, ESumElim, ETruncElim, HPostulate,
                     HSquash, HVar, VEmpty, VId, VInl, VInr, VLam, VNat, VNeutral, VPair, VPi, VRefl,
                     VSigma, VStar, VSuc, VSum, VTr, VTrunc, VUnit, VUniv, VZero, Value, var)


class EvalError(Exception):
    """Evaluation hit an ill-typed configuration; only reachable from unchecked terms."""


@dataclass(slots=True, eq=False)
class TermClosure:
    nbe: "NbE"
    env: tuple[Value, ...]
    body: c.Term

    def __call__(self, v: Value) -> Value:
        return self.nbe.eval(self.env + (v,), self.body)


class NbE:
    def __init__(self, genv: GlobalEnv, unit_eta: bool = True):
        self.genv = genv
        self.unit_eta = unit_eta

    # -- globals ------------------------------------------------------------

    def global_value(self, name: str, levels: tuple) -> Value:
        if any(l is None for l in levels):
            raise EvalError(f"unsolved level argument in reference to {name!r}")
        key = (name, "value", tuple(level_key(l) for l in levels))
        v = self.genv.cache.get(key)
        if v is None:
            d = self.genv[name]
            if d.is_postulate:
                v = VNeutral(HPostulate(name, tuple(levels)))
            else:
                v = self.eval((), self.genv.instantiate(name, tuple(levels), "body"))
            self.genv.cache[key] = v
        return v

    def global_type(self, name: str, levels: tuple) -> Value:
        key = (name, "type", tuple(level_key(l) for l in levels))
        v = self.genv.cache.get(key)
        if v is None:
            v = self.eval((), self.genv.instantiate(name, tuple(levels), "type"))
            self.genv.cache[key] = v
        return v

    # -- evaluation ---------------------------------------------------------

    def eval(self, env: tuple[Value, ...], t: c.Term) -> Value:
        match t:
            case c.Var(index=i):
                return env[-1 - i]
            case c.Global(name=n, levels=ls):
                return self.global_value(n, ls)
            case c.Univ(level=l):
                return VUniv(l)
            case c.Pi(name=n, dom=a, cod=b):
                return VPi(n, self.eval(env, a), TermClosure(self, env, b))
            case c.Lam(name=n, body=b):
                return VLam(n, TermClosure(self, env, b))
            case c.App(fn=f, arg=a):
                return self.apply(self.eval(env, f), self.eval(env, a))
            case c.Sigma(name=n, dom=a, cod=b):
                return VSigma(n, self.eval(env, a), TermClosure(self, env, b))
            case c.Pair(fst=a, snd=b):
                return VPair(self.eval(env, a), self.eval(env, b))
            case c.Fst(pair=p):
                return self.fst(self.eval(env, p))
            case c.Snd(pair=p):
                return self.snd(self.eval(env, p))
            case c.Id(type=a, lhs=x, rhs=y):
                return VId(self.eval(env, a), self.eval(env, x), self.eval(env, y))
            case c.Refl():
                return VRefl()
            case c.J(motive=m, base=d, path=p):
                return self.j(self.eval(env, m), self.eval(env, d), self.eval(env, p))
            case c.Nat():
                return VNat()
            case c.Zero():
                return VZero()
            case c.Suc(pred=n):
                return VSuc(self.eval(env, n))
            case c.NatElim(motive=m, zero=z, suc=s, target=n):
                return self.nat_elim(self.eval(env, m), self.eval(env, z), self.eval(env, s),
                                     self.eval(env, n))
            case c.Empty(level=l):
                return VEmpty(l)
            case c.EmptyElim(motive=m, target=e):
                ev = self.eval(env, e)
                if isinstance(ev, VNeutral):
                    return ev.push(EEmptyElim(self.eval(env, m)))
                raise EvalError("emptyElim applied to a canonical value")
            case c.Unit(level=l):
                return VUnit(l)
            case c.Star():
                return VStar()
            case c.Sum(left=a, right=b):
                return VSum(self.eval(env, a), self.eval(env, b))
            case c.Inl(value=a):
                return VInl(self.eval(env, a))
            case c.Inr(value=a):
                return VInr(self.eval(env, a))
            case c.SumElim(motive=m, left=l, right=r, target=s):
                return self.sum_elim(self.eval(env, m), self.eval(env, l), self.eval(env, r),
                                     self.eval(env, s))
            case c.Trunc(type=a):
                return VTrunc(self.eval(env, a))
            case c.Tr(value=a):
                return VTr(self.eval(env, a))
            case c.Squash(lhs=a, rhs=b, type=ty):
                if ty is None:
                    raise EvalError("squash was not elaborated")
                return VNeutral(HSquash(self.eval(env, ty), self.eval(env, a), self.eval(env, b)))
            case c.TruncElim(prop=h, fn=f, target=x, motive=m):
                return self.trunc_elim(None if m is None else self.eval(env, m),
                                       self.eval(env, h), self.eval(env, f), self.eval(env, x))
            case c.Ann(term=a):
                return self.eval(env, a)
        raise EvalError(f"cannot evaluate {t!r}")

    def apply(self, f: Value, a: Value) -> Value:
        if isinstance(f, VLam):
            return f.fn(a)
        if isinstance(f, VNeutral):
            return f.push(EApp(a))
        raise EvalError(f"applying a non-function {type(f).__name__}")

    def fst(self, p: Value) -> Value:
        if isinstance(p, VPair):
            return p.fst
        if isinstance(p, VNeutral):
            return p.push(EFst())
        raise EvalError("fst of a non-pair")

    def snd(self, p: Value) -> Value:
        if isinstance(p, VPair):
            return p.snd
        if isinstance(p, VNeutral):
            return p.push(ESnd())
        raise EvalError("snd of a non-pair")

    def j(self, motive: Value, base: Value, path: Value) -> Value:
        if isinstance(path, VRefl):
            return base
        if isinstance(path, VNeutral):
            return path.push(EJ(motive, base))
        raise EvalError("J on a non-path")

    def nat_elim(self, motive: Value, z: Value, s: Value, n: Value) -> Value:
        # iterative on the numeral so deep literals do not hit the recursion limit
        k = 0
        while isinstance(n, VSuc):
            n, k = n.pred, k + 1
        if isinstance(n, VZero):
            acc = z
        elif isinstance(n, VNeutral):
            acc = n.push(ENatElim(motive, z, s))
        else:
            raise EvalError("natElim on a non-number")
        for _ in range(k):
            acc = self.apply(self.apply(s, n), acc)
            n = VSuc(n)
        return acc

    def sum_elim(self, motive: Value, l: Value, r: Value, s: Value) -> Value:
        if isinstance(s, VInl):
            return self.apply(l, s.value)
        if isinstance(s, VInr):
            return self.apply(r, s.value)
        if isinstance(s, VNeutral):
            return s.push(ESumElim(motive, l, r))
        raise EvalError("sumElim on a non-sum")

    def trunc_elim(self, motive, h: Value, f: Value, t: Value) -> Value:
        if isinstance(t, VTr):
            return self.apply(f, t.value)
        if isinstance(t, VNeutral):
            return t.push(ETruncElim(motive, h, f))
        raise EvalError("truncElim on a non-truncation")

    # -- read-back ----------------------------------------------------------

    def quote(self, types: Sequence[Value], v: Value, ty: Value) -> c.Term:
        """Eta-long beta-normal form of ``v : ty`` in a context with ``types``."""
        match ty:
            case VPi(name=n, dom=a, cod=b):
                x = var(len(types))
                return c.Lam(n, self.quote((*types, a), self.apply(v, x), b(x)))
            case VSigma(dom=a, cod=b):
                p1 = self.fst(v)
                return c.Pair(self.quote(types, p1, a), self.quote(types, self.snd(v), b(p1)))
            case VUnit() if self.unit_eta:
                return c.Star()
            case VUniv():
                return self.quote_type(types, v)
        match v:
            case VNeutral():
                return self.quote_neutral(types, v)[0]
            case VZero():
                return c.Zero()
            case VSuc():
                n, k = v, 0
                while isinstance(n, VSuc):
                    n, k = n.pred, k + 1
                out = self.quote(types, n, ty)
                for _ in range(k):
                    out = c.Suc(out)
                return out
            case VInl(value=a) if isinstance(ty, VSum):
                return c.Inl(self.quote(types, a, ty.left))
            case VInr(value=a) if isinstance(ty, VSum):
                return c.Inr(self.quote(types, a, ty.right))
            case VRefl():
                return c.Refl()
            case VStar():
                return c.Star()
            case VTr(value=a) if isinstance(ty, VTrunc):
                return c.Tr(self.quote(types, a, ty.type))
        raise EvalError(f"cannot read back {type(v).__name__} at type {type(ty).__name__}")

    def quote_type(self, types: Sequence[Value], v: Value) -> c.Term:
        match v:
            case VUniv(level=l):
                return c.Univ(l)
            case VPi(name=n, dom=a, cod=b):
                x = var(len(types))
                return c.Pi(n, self.quote_type(types, a), self.quote_type((*types, a), b(x)))
            case VSigma(name=n, dom=a, cod=b):
                x = var(len(types))
                return c.Sigma(n, self.quote_type(types, a), self.quote_type((*types, a), b(x)))
            case VNat():
                return c.Nat()
            case VEmpty(level=l):
                return c.Empty(l)
            case VUnit(level=l):
                return c.Unit(l)
            case VSum(left=a, right=b):
                return c.Sum(self.quote_type(types, a), self.quote_type(types, b))
            case VId(type=a, lhs=x, rhs=y):
                return c.Id(self.quote_type(types, a), self.quote(types, x, a), self.quote(types, y, a))
            case VTrunc(type=a):
                return c.Trunc(self.quote_type(types, a))
            case VNeutral():
                return self.quote_neutral(types, v)[0]
        raise EvalError(f"not a type: {type(v).__name__}")

    def _quote_family(self, types: Sequence[Value], motive: Value, doms) -> c.Term:
        """Read back a type family; ``doms[i]`` maps the earlier bound values to a domain."""
        bound: list[Value] = []
        tys = list(types)
        for _ in doms:
            pass
        out_names = []
        fam = motive
        for name, mk in doms:
            d = mk(bound)
            x = var(len(tys))
            tys.append(d)
            bound.append(x)
            fam = self.apply(fam, x)
            out_names.append(name)
        body = self.quote_type(tys, fam)
        for name in reversed(out_names):
            body = c.Lam(name, body)
        return body

    def quote_neutral(self, types: Sequence[Value], n: VNeutral) -> tuple[c.Term, Value]:
        depth = len(types)
        h = n.head
        if isinstance(h, HVar):
            term: c.Term = c.Var(depth - 1 - h.level)
            ty = types[h.level]
        elif isinstance(h, HPostulate):
            term = c.Global(h.name, h.levels)
            ty = self.global_type(h.name, h.levels)
        elif isinstance(h, HSquash):
            tt = VTrunc(h.type)
            term = c.Squash(self.quote(types, h.lhs, tt), self.quote(types, h.rhs, tt),
                            type=self.quote_type(types, h.type))
            ty = VId(tt, h.lhs, h.rhs)
        else:
            raise EvalError(f"unknown head {h!r}")
        cur: Value = VNeutral(h)
        for fr in n.spine:
            match fr:
                case EApp(arg=a):
                    if not isinstance(ty, VPi):
                        raise EvalError("application of a neutral at non-function type")
                    term = c.App(term, self.quote(types, a, ty.dom))
                    ty = ty.cod(a)
                case EFst():
                    if not isinstance(ty, VSigma):
                        raise EvalError("projection at non-pair type")
                    term, ty = c.Fst(term), ty.dom
                case ESnd():
                    if not isinstance(ty, VSigma):
                        raise EvalError("projection at non-pair type")
                    term, ty = c.Snd(term), ty.cod(self.fst(cur))
                case ENatElim(motive=P, zero=z, suc=s):
                    step_ty = VPi("n", VNat(), lambda k, P=P: VPi(
                        "ih", self.apply(P, k), lambda _ih, k=k, P=P: self.apply(P, VSuc(k))))
                    term = c.NatElim(self._quote_family(types, P, [("n", lambda b: VNat())]),
                                     self.quote(types, z, self.apply(P, VZero())),
                                     self.quote(types, s, step_ty), term)
                    ty = self.apply(P, cur)
                case EEmptyElim(motive=P):
                    dom = ty
                    term = c.EmptyElim(self._quote_family(types, P, [("e", lambda b, d=dom: d)]), term)
                    ty = self.apply(P, cur)
                case ESumElim(motive=P, left=l, right=r):
                    if not isinstance(ty, VSum):
                        raise EvalError("sumElim at non-sum type")
                    A, B, S = ty.left, ty.right, ty
                    lty = VPi("a", A, lambda a, P=P: self.apply(P, VInl(a)))
                    rty = VPi("b", B, lambda b, P=P: self.apply(P, VInr(b)))
                    term = c.SumElim(self._quote_family(types, P, [("s", lambda b, S=S: S)]),
                                     self.quote(types, l, lty), self.quote(types, r, rty), term)
                    ty = self.apply(P, cur)
                case EJ(motive=P, base=d):
                    if not isinstance(ty, VId):
                        raise EvalError("J at non-identity type")
                    A, a, b = ty.type, ty.lhs, ty.rhs
                    fam = self._quote_family(types, P, [
                        ("y", lambda bs, A=A: A),
                        ("p", lambda bs, A=A, a=a: VId(A, a, bs[0]))])
                    term = c.J(fam, self.quote(types, d, self.apply(self.apply(P, a), VRefl())), term)
                    ty = self.apply(self.apply(P, b), cur)
                case ETruncElim(motive=P, prop=hh, fn=f):
                    if not isinstance(ty, VTrunc) or P is None:
                        raise EvalError("truncElim without an elaborated motive")
                    A = ty.type
                    hty = VPi("p", P, lambda p, P=P: VPi("q", P, lambda q, p=p, P=P: VId(P, p, q)))
                    fty = VPi("x", A, lambda _x, P=P: P)
                    term = c.TruncElim(self.quote(types, hh, hty), self.quote(types, f, fty), term,
                                       motive=self.quote_type(types, P))
                    ty = P
            cur = cur.push(fr)
        return term, ty

    # -- conversion ---------------------------------------------------------

    def conv(self, types: Sequence[Value], a: Value, b: Value, ty: Value) -> bool:
        if a is b:
            return True
        return self.quote(types, a, ty) == self.quote(types, b, ty)

    def conv_type(self, types: Sequence[Value], a: Value, b: Value) -> bool:
        if a is b:
            return True
        return self.quote_type(types, a) == self.quote_type(types, b)

    def normalize(self, types: Sequence[Value], t: c.Term, ty: Value) -> c.Term:
        env = tuple(var(i) for i in range(len(types)))
        return self.quote(types, self.eval(env, t), ty)

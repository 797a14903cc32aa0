"""Random level expressions and core terms shared by the property and acceptance tests."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Union

from uft import core as c
from uft.level import Level, LevelVar, lmax, lsuc, lvar, lzero

# -- level expression trees with an independent evaluator --------------------------

VARS = tuple(LevelVar(n, i) for i, n in enumerate("uvw"))


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Var:
    var: LevelVar


@dataclass(frozen=True)
class Suc:
    arg: "Expr"


@dataclass(frozen=True)
class Max:
    left: "Expr"
    right: "Expr"


Expr = Union[Zero, Var, Suc, Max]


def value(e: Expr, rho: dict) -> int:
    """Direct semantics of an expression tree; shares no code with the normaliser."""
    match e:
        case Zero():
            return 0
        case Var(var=v):
            return rho[v]
        case Suc(arg=a):
            return value(a, rho) + 1
        case Max(left=a, right=b):
            return max(value(a, rho), value(b, rho))
    raise TypeError(e)


def build(e: Expr) -> Level:
    match e:
        case Zero():
            return lzero()
        case Var(var=v):
            return lvar(v)
        case Suc(arg=a):
            return lsuc(build(a))
        case Max(left=a, right=b):
            return lmax(build(a), build(b))
    raise TypeError(e)


def random_expr(rng: random.Random, depth: int = 4, vars=VARS, suc_budget: int = 10**6) -> Expr:
    """``suc_budget`` bounds the successors on any root-to-leaf path."""
    if depth == 0 or rng.random() < 0.25:
        return Zero() if rng.random() < 0.25 else Var(rng.choice(vars))
    if suc_budget > 0 and rng.random() < 0.4:
        return Suc(random_expr(rng, depth - 1, vars, suc_budget - 1))
    return Max(random_expr(rng, depth - 1, vars, suc_budget), random_expr(rng, depth - 1, vars, suc_budget))


def rewrite(rng: random.Random, e: Expr) -> Expr:
    """A semantically equal tree obtained by random uses of the join/successor laws."""
    match e:
        case Max(left=a, right=b):
            a, b = rewrite(rng, a), rewrite(rng, b)
            r = rng.random()
            if r < 0.3:
                return Max(b, a)
            if r < 0.4:
                return Max(Max(a, b), a)
            if r < 0.5 and isinstance(b, Max):
                return Max(Max(a, b.left), b.right)
            if r < 0.6:
                return Max(Zero(), Max(a, b))
            return Max(a, b)
        case Suc(arg=Max(left=a, right=b)) if rng.random() < 0.5:
            return Max(Suc(rewrite(rng, a)), Suc(rewrite(rng, b)))
        case Suc(arg=a):
            return Suc(rewrite(rng, a))
        case Var() if rng.random() < 0.2:
            return Max(e, e)
    return e


def exprs_strategy():
    from hypothesis import strategies as st

    leaf = st.one_of(st.just(Zero()), st.sampled_from(VARS).map(Var))
    return st.recursive(leaf, lambda sub: st.one_of(sub.map(Suc), st.tuples(sub, sub).map(lambda p: Max(*p))),
                        max_leaves=12)


def valuations(vars=VARS, values=range(4)):
    for combo in itertools.product(values, repeat=len(vars)):
        yield dict(zip(vars, combo))


# -- core terms -------------------------------------------------------------------------

GLOBALS = {"isProp": 1, "fiber": 2, "two": 0}
TELE = {"u": LevelVar("u", 0), "v": LevelVar("v", 1)}
NAMES = ["x", "y", "A", "f", "p", "n"]


def random_level(rng: random.Random) -> Level:
    vs = list(TELE.values())
    e = random_expr(rng, 2, vs, 2)
    return build(e)


def random_term(rng: random.Random, depth: int, scope: int = 0) -> c.Term:
    """A well-scoped core term with ``scope`` free variables; not necessarily well-typed."""
    leaves = ["univ", "nat", "zero", "refl", "star", "empty", "unit", "global"]
    if scope:
        leaves += ["var"] * 3
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(leaves + [
            "pi", "pi", "sigma", "sigma", "lam", "lam", "app", "app", "app", "pair", "fst", "snd",
            "id", "j", "suc", "natElim", "emptyElim", "sum", "inl", "inr", "sumElim", "trunc",
            "tr", "squash", "truncElim", "ann"])
    sub = lambda extra=0: random_term(rng, depth - 1, scope + extra)
    name = rng.choice(NAMES)
    match kind:
        case "var":
            return c.Var(rng.randrange(scope))
        case "univ":
            return c.Univ(random_level(rng))
        case "nat":
            return c.Nat()
        case "zero":
            return c.Zero()
        case "refl":
            return c.Refl()
        case "star":
            return c.Star()
        case "empty":
            return c.Empty(random_level(rng))
        case "unit":
            return c.Unit(random_level(rng))
        case "global":
            g = rng.choice(sorted(GLOBALS))
            levels = tuple(None if rng.random() < 0.15 else random_level(rng) for _ in range(GLOBALS[g]))
            return c.Global(g, levels)
        case "pi":
            return c.Pi(name, sub(), sub(1))
        case "sigma":
            return c.Sigma(name, sub(), sub(1))
        case "lam":
            return c.Lam(name, sub(1), sub() if rng.random() < 0.3 else None)
        case "app":
            return c.App(sub(), sub())
        case "pair":
            return c.Pair(sub(), sub())
        case "fst":
            return c.Fst(sub())
        case "snd":
            return c.Snd(sub())
        case "id":
            return c.Id(sub(), sub(), sub())
        case "j":
            return c.J(sub(), sub(), sub())
        case "suc":
            return c.Suc(sub())
        case "natElim":
            return c.NatElim(sub(), sub(), sub(), sub())
        case "emptyElim":
            return c.EmptyElim(sub(), sub())
        case "sum":
            return c.Sum(sub(), sub())
        case "inl":
            return c.Inl(sub())
        case "inr":
            return c.Inr(sub())
        case "sumElim":
            return c.SumElim(sub(), sub(), sub(), sub())
        case "trunc":
            return c.Trunc(sub())
        case "tr":
            return c.Tr(sub())
        case "squash":
            return c.Squash(sub(), sub())
        case "truncElim":
            return c.TruncElim(sub(), sub(), sub())
        case "ann":
            return c.Ann(sub(), sub())
    raise AssertionError(kind)


def roundtrip(t: c.Term, ascii: bool = False, names: tuple[str, ...] = ()) -> c.Term:
    from uft.syntax import Scope, parse_term, pretty, resolve_term

    text = pretty(t, names, ascii=ascii)
    return resolve_term(parse_term(text), Scope(GLOBALS, TELE, list(names)))

"""Printing core terms back to re-parsable surface text."""

from __future__ import annotations

from typing import Optional, Sequence

from .. import core as c
from ..level import Level, is_atomic_text, show_level
from .parser import KEYWORDS

TERM, SUM, PROD, APP, ATOM = range(5)

_UNICODE = {"λ": "λ", "→": "→", "Π": "Π", "Σ": "Σ", "×": "×", "ℕ": "ℕ", "𝟘": "𝟘", "𝟙": "𝟙",
            "⋆": "⋆"}
_ASCII = {"λ": "\\", "→": "->", "Π": "Pi", "Σ": "Sigma", "×": "*", "ℕ": "Nat", "𝟘": "Empty",
          "𝟙": "Unit", "⋆": "star"}

_PRIM_NAMES = {
    c.Id: "Id", c.J: "J", c.Suc: "suc", c.NatElim: "natElim", c.EmptyElim: "emptyElim",
    c.Inl: "inl", c.Inr: "inr", c.SumElim: "sumElim", c.Squash: "squash",
    c.TruncElim: "truncElim", c.Fst: "fst", c.Snd: "snd",
}


def _globals(t: c.Term, acc: set[str]) -> set[str]:
    if isinstance(t, c.Global):
        acc.add(t.name)
    for ch, _ in c.children(t):
        _globals(ch, acc)
    return acc


class Printer:
    def __init__(self, ascii: bool = False, reserved: Sequence[str] = ()):
        self.sym = _ASCII if ascii else _UNICODE
        self.ascii = ascii
        self.reserved = set(reserved)

    def fresh(self, hint: str, scope: list[str]) -> str:
        base = hint if hint and hint != "_" and hint not in KEYWORDS and not hint.isdigit() else "x"
        base = base.rstrip("0123456789") or "x"
        cand, i = (hint if base == hint else base), 0
        while cand in scope or cand in self.reserved or cand in KEYWORDS:
            i += 1
            cand = f"{base}{i}"
        return cand

    def level(self, l: Optional[Level], atom: bool = True) -> str:
        if l is None:
            return "_"
        s = show_level(l, self.ascii)
        return s if not atom or is_atomic_text(l) else f"({s})"

    def show(self, t: c.Term, names: list[str], prec: int = TERM) -> str:
        s, p = self._show(t, names)
        return f"({s})" if p < prec else s

    def _binder(self, name: str, body: c.Term, names: list[str]) -> tuple[str, bool]:
        used = c.occurs(body, 0)
        if not used:
            return "_", False
        return self.fresh(name, names), True

    def _show(self, t: c.Term, names: list[str]) -> tuple[str, int]:
        S = self.sym
        match t:
            case c.Var(index=i):
                if i < len(names):
                    return names[len(names) - 1 - i], ATOM
                return f"#{i}", ATOM
            case c.Global(name=n, levels=ls):
                return n + "".join("{" + self.level(l, atom=False) + "}" for l in ls), ATOM
            case c.Univ(level=l):
                return f"U {self.level(l)}", APP
            case c.Empty(level=l):
                return f"{S['𝟘']} {self.level(l)}", APP
            case c.Unit(level=l):
                return f"{S['𝟙']} {self.level(l)}", APP
            case c.Nat():
                return S["ℕ"], ATOM
            case c.Zero():
                return "zero", ATOM
            case c.Refl():
                return "refl", ATOM
            case c.Star():
                return S["⋆"], ATOM
            case c.Pi(name=n, dom=a, cod=b):
                if not c.occurs(b, 0):
                    return f"{self.show(a, names, SUM)} {S['→']} {self.show(b, names + ['_'], TERM)}", TERM
                binders = []
                names2 = list(names)
                while isinstance(t, c.Pi) and c.occurs(t.cod, 0):
                    y = self.fresh(t.name, names2)
                    binders.append(f"({y} : {self.show(t.dom, names2)})")
                    names2.append(y)
                    t = t.cod
                return f"{S['Π']} {' '.join(binders)} {S['→']} {self.show(t, names2)}", TERM
            case c.Sigma(name=n, dom=a, cod=b):
                x, used = self._binder(n, b, names)
                if not used:
                    return f"{self.show(a, names, APP)} {S['×']} {self.show(b, names + ['_'], PROD)}", PROD
                return f"{S['Σ']} ({x} : {self.show(a, names)}) , {self.show(b, names + [x])}", TERM
            case c.Lam():
                parts = []
                names2 = list(names)
                while isinstance(t, c.Lam):
                    x, used = self._binder(t.name, t.body, names2)
                    if t.dom is not None:
                        parts.append(f"({x} : {self.show(t.dom, names2)})")
                    else:
                        parts.append(x)
                    names2.append(x)
                    t = t.body
                return f"{S['λ']} {' '.join(parts)} {S['→']} {self.show(t, names2)}", TERM
            case c.App(fn=f, arg=a):
                return f"{self.show(f, names, APP)} {self.show(a, names, ATOM)}", APP
            case c.Pair(fst=a, snd=b):
                return f"({self.show(a, names)} , {self.show(b, names)})", ATOM
            case c.Ann(term=a, type=b):
                return f"({self.show(a, names)} : {self.show(b, names)})", ATOM
            case c.Sum(left=a, right=b):
                return f"{self.show(a, names, PROD)} + {self.show(b, names, SUM)}", SUM
            case c.Trunc(type=a):
                if self.ascii:
                    return f"Trunc {self.show(a, names, ATOM)}", APP
                # bars nested in argument position would close the outer pair
                return f"∥ {self.show(a, names)} ∥", APP
            case c.Tr(value=a):
                if self.ascii:
                    return f"tr {self.show(a, names, ATOM)}", APP
                return f"∣ {self.show(a, names)} ∣", APP
            case c.Squash(lhs=a, rhs=b):
                return f"squash {self.show(a, names, ATOM)} {self.show(b, names, ATOM)}", APP
            case c.TruncElim(prop=h, fn=f, target=x):
                args = [h, f, x]
                return "truncElim " + " ".join(self.show(a, names, ATOM) for a in args), APP
        op = _PRIM_NAMES.get(type(t))
        if op is None:
            raise TypeError(f"cannot print {t!r}")
        args = [ch for ch, _ in c.children(t)]
        return op + " " + " ".join(self.show(a, names, ATOM) for a in args), APP


def pretty(t: c.Term, names: Sequence[str] = (), ascii: bool = False) -> str:
    """Render ``t`` in a context whose variables are named ``names`` (outermost first)."""
    reserved = _globals(t, set()) | set(names)
    return Printer(ascii, sorted(reserved)).show(t, list(names))

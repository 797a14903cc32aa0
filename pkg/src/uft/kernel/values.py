"""Semantic domain for normalisation by evaluation.

Binders hold closures: any callable from a value to a value.  Closures built by
the evaluator pair an environment with a core body; the checker also builds
host-level closures for derived types such as the step type of ``natElim``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..level import Level

Closure = Callable[["Value"], "Value"]


class Value:
    __slots__ = ()


@dataclass(slots=True, eq=False)
class VUniv(Value):
    level: Level


@dataclass(slots=True, eq=False)
class VPi(Value):
    name: str
    dom: Value
    cod: Closure


@dataclass(slots=True, eq=False)
class VLam(Value):
    name: str
    fn: Closure


@dataclass(slots=True, eq=False)
class VSigma(Value):
    name: str
    dom: Value
    cod: Closure


@dataclass(slots=True, eq=False)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(slots=True, eq=False)
class VNat(Value):
    pass


@dataclass(slots=True, eq=False)
class VZero(Value):
    pass


@dataclass(slots=True, eq=False)
class VSuc(Value):
    pred: Value


@dataclass(slots=True, eq=False)
class VEmpty(Value):
    level: Level


@dataclass(slots=True, eq=False)
class VUnit(Value):
    level: Level


@dataclass(slots=True, eq=False)
class VStar(Value):
    pass


@dataclass(slots=True, eq=False)
class VSum(Value):
    left: Value
    right: Value


@dataclass(slots=True, eq=False)
class VInl(Value):
    value: Value


@dataclass(slots=True, eq=False)
class VInr(Value):
    value: Value


@dataclass(slots=True, eq=False)
class VId(Value):
    type: Value
    lhs: Value
    rhs: Value


@dataclass(slots=True, eq=False)
class VRefl(Value):
    pass


@dataclass(slots=True, eq=False)
class VTrunc(Value):
    type: Value


@dataclass(slots=True, eq=False)
class VTr(Value):
    value: Value


# -- neutrals ---------------------------------------------------------------

class Head:
    __slots__ = ()


@dataclass(slots=True, eq=False)
class HVar(Head):
    level: int  # de Bruijn level


@dataclass(slots=True, eq=False)
class HPostulate(Head):
    """An axiom; never unfolds."""

    name: str
    levels: tuple[Level, ...]


@dataclass(slots=True, eq=False)
class HSquash(Head):
    type: Value  # A, so that lhs, rhs : ∥A∥
    lhs: Value
    rhs: Value


class Frame:
    __slots__ = ()


@dataclass(slots=True, eq=False)
class EApp(Frame):
    arg: Value


@dataclass(slots=True, eq=False)
class EFst(Frame):
    pass


@dataclass(slots=True, eq=False)
class ESnd(Frame):
    pass


@dataclass(slots=True, eq=False)
class ENatElim(Frame):
    motive: Value
    zero: Value
    suc: Value


@dataclass(slots=True, eq=False)
class EEmptyElim(Frame):
    motive: Value


@dataclass(slots=True, eq=False)
class ESumElim(Frame):
    motive: Value
    left: Value
    right: Value


@dataclass(slots=True, eq=False)
class EJ(Frame):
    motive: Value
    base: Value


@dataclass(slots=True, eq=False)
class ETruncElim(Frame):
    motive: Optional[Value]
    prop: Value
    fn: Value


@dataclass(slots=True, eq=False)
class VNeutral(Value):
    head: Head
    spine: tuple[Frame, ...] = ()

    def push(self, frame: Frame) -> VNeutral:
        return VNeutral(self.head, self.spine + (frame,))


def var(level: int) -> VNeutral:
    return VNeutral(HVar(level))


def vpi(name: str, dom: Value, cod: Callable[[Value], Value]) -> VPi:
    return VPi(name, dom, cod)


def arrow(dom: Value, cod: Value) -> VPi:
    return VPi("_", dom, lambda _x, cod=cod: cod)


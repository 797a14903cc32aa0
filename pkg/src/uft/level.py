"""Universe levels in max-plus normal form.

A level is ``max(const, v1 + k1, ..., vn + kn)`` with at most one atom per
variable.  The constant is dropped whenever some atom dominates it (every
valuation is non-negative, so ``v + k >= k``).  With that rule two levels denote
the same function of their variables iff their normal forms are identical,
which is what makes ``level_equal`` a syntactic comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class LevelVar:
    """A level variable bound by a declaration's telescope.

    Identity is the name alone; ``index`` is the position in the telescope and
    only steers printing order.
    """

    name: str
    index: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return self.name


class UnboundLevelVariable(KeyError):
    pass


@dataclass(frozen=True)
class Level:
    const: int = 0
    # sorted by variable name, one entry per variable
    atoms: tuple[tuple[LevelVar, int], ...] = ()

    @staticmethod
    def of(const: int, atoms: Mapping[LevelVar, int] | Iterable[tuple[LevelVar, int]] = ()) -> Level:
        """Build the normal form of ``max(const, v + k ...)``."""
        best: dict[LevelVar, int] = {}
        pairs = atoms.items() if isinstance(atoms, Mapping) else atoms
        for var, off in pairs:
            if off < 0 or const < 0:
                raise ValueError("level offsets must be natural numbers")
            if var not in best or best[var] < off:
                best[var] = off
        if best and const <= max(best.values()):
            const = 0
        return Level(const, tuple(sorted(best.items(), key=lambda kv: kv[0].name)))

    @property
    def atom_map(self) -> dict[LevelVar, int]:
        return dict(self.atoms)

    @property
    def variables(self) -> frozenset[LevelVar]:
        return frozenset(v for v, _ in self.atoms)

    def is_const(self) -> bool:
        return not self.atoms

    def __str__(self) -> str:
        return show_level(self)


def lzero() -> Level:
    return Level()


def lconst(n: int) -> Level:
    return Level.of(n)


def lvar(name: str | LevelVar, offset: int = 0) -> Level:
    var = name if isinstance(name, LevelVar) else LevelVar(name)
    return Level.of(0, {var: offset})


def lsuc(l: Level, times: int = 1) -> Level:
    # incrementing everything keeps the normal form, no re-normalisation needed
    return Level(l.const + times if l.const or not l.atoms else 0,
                 tuple((v, k + times) for v, k in l.atoms))


def lmax(*levels: Level) -> Level:
    const = 0
    atoms: list[tuple[LevelVar, int]] = []
    for l in levels:
        const = max(const, l.const)
        atoms.extend(l.atoms)
    return Level.of(const, atoms)


def level_equal(a: Level, b: Level) -> bool:
    return a == b


def level_leq(a: Level, b: Level) -> bool:
    return lmax(a, b) == b


def subst_level(l: Level, sigma: Mapping[LevelVar, Level]) -> Level:
    parts = [lconst(l.const)]
    for var, off in l.atoms:
        if var not in sigma:
            raise UnboundLevelVariable(var.name)
        parts.append(lsuc(sigma[var], off))
    return lmax(*parts)


def evaluate(l: Level, rho: Mapping[LevelVar, int] | Mapping[str, int]) -> int:
    """Value of ``l`` when each variable takes the natural number in ``rho``.

    ``rho`` may be keyed by ``LevelVar`` or by plain names.
    """
    value = l.const
    for var, off in l.atoms:
        if var in rho:
            n = rho[var]  # type: ignore[index]
        elif var.name in rho:
            n = rho[var.name]  # type: ignore[index]
        else:
            raise UnboundLevelVariable(var.name)
        value = max(value, n + off)
    return value


def _show_atom(name: str, off: int, ascii: bool) -> str:
    s = name
    for i in range(off):
        s = f"lsuc {s}" if i == 0 else f"lsuc ({s})"
    return s


def show_level(l: Level, ascii: bool = False) -> str:
    """Render in the surface syntax, largest offsets first.

    Ties are broken by telescope position so that ``{u v}`` prints ``u ⊔ v``.
    """
    parts = []
    if l.const or not l.atoms:
        parts.append(str(l.const))
    for var, off in sorted(l.atoms, key=lambda kv: (-kv[1], kv[0].index, kv[0].name)):
        parts.append(_show_atom(var.name, off, ascii))
    if len(parts) == 1:
        return parts[0]
    if not ascii:
        return " ⊔ ".join(parts)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = f"lmax {_paren(p)} {_paren(out)}"
    return out


def _paren(s: str) -> str:
    return f"({s})" if " " in s else s


def is_atomic_text(l: Level) -> bool:
    """True when ``show_level`` yields a single token."""
    return (not l.atoms) or (l.const == 0 and len(l.atoms) == 1 and l.atoms[0][1] == 0)

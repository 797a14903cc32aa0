from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .. import core as c
from ..errors import ScopeError
from ..level import Level, LevelVar


@dataclass(frozen=True)
class CheckedDecl:
    name: str
    telescope: tuple[LevelVar, ...]
    type: c.Term
    body: Optional[c.Term]  # elaborated; None for postulates
    span: Optional[c.Span] = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None


def level_key(l: Level) -> tuple:
    # includes telescope positions so cached values print their levels correctly
    return (l.const, tuple((v.name, v.index, k) for v, k in l.atoms))


class GlobalEnv:
    """Checked declarations in dependency order.

    Extension returns a new environment; an existing one is never mutated
    except for its memo table of instantiated types and bodies, which is
    private to the environment (copied, not shared, on extension).
    """

    def __init__(self, decls: Optional[dict[str, CheckedDecl]] = None,
                 cache: Optional[dict] = None):
        self._decls: dict[str, CheckedDecl] = dict(decls or {})
        self.cache: dict = dict(cache or {})

    def __contains__(self, name: str) -> bool:
        return name in self._decls

    def __getitem__(self, name: str) -> CheckedDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise ScopeError(f"unknown declaration {name!r}", code="unbound") from None

    def __iter__(self) -> Iterator[CheckedDecl]:
        return iter(self._decls.values())

    def __len__(self) -> int:
        return len(self._decls)

    def get(self, name: str) -> Optional[CheckedDecl]:
        return self._decls.get(name)

    @property
    def names(self) -> list[str]:
        return list(self._decls)

    def arities(self) -> dict[str, int]:
        return {n: len(d.telescope) for n, d in self._decls.items()}

    def extend(self, decl: CheckedDecl) -> GlobalEnv:
        if decl.name in self._decls:
            raise ScopeError(f"duplicate definition of {decl.name!r}", decl.span,
                             code="duplicate-definition")
        new = GlobalEnv(self._decls, self.cache)
        new._decls[decl.name] = decl
        return new

    def instantiate(self, name: str, levels: tuple[Level, ...], part: str) -> c.Term:
        d = self[name]
        term = d.type if part == "type" else d.body
        assert term is not None
        if len(levels) != len(d.telescope):
            raise ScopeError(f"{name!r} takes {len(d.telescope)} level argument(s)", code="level-arity")
        return c.subst_levels(term, dict(zip(d.telescope, levels)))

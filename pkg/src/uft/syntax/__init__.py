from .parser import parse, parse_level, parse_term, tokenize
from .pretty import pretty
from .resolve import Declaration, Scope, resolve, resolve_level, resolve_term
from .surface import SurfaceDeclaration

__all__ = ["parse", "parse_level", "parse_term", "tokenize", "pretty", "Declaration", "Scope",
           "resolve", "resolve_level", "resolve_term", "SurfaceDeclaration"]

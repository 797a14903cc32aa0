from .check import (Checker, Context, EMPTY, check_declaration, check_declarations, infer_level_of,
                    inferred_type)
from .env import CheckedDecl, GlobalEnv
from .nbe import NbE

__all__ = ["Checker", "Context", "EMPTY", "check_declaration", "check_declarations", "infer_level_of",
           "inferred_type", "CheckedDecl", "GlobalEnv", "NbE"]

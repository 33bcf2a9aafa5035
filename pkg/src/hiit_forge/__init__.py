"""hiit-forge: elaborate higher inductive-inductive signatures into Agda."""

__version__ = "0.1.0"

from .checker import CheckedModule, elaborate_module
from .diagnostics import Diagnostic, Span
from .emit import EmitConfig, emit_agda, emit_prelude, parse_target_expr
from .surface import parse
from .translate import Bundle, translate, verify_bundle

__all__ = [
    "Bundle",
    "CheckedModule",
    "Diagnostic",
    "EmitConfig",
    "Span",
    "__version__",
    "elaborate_module",
    "emit_agda",
    "emit_prelude",
    "parse",
    "parse_target_expr",
    "translate",
    "verify_bundle",
]

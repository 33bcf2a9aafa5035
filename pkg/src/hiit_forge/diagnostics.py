"""Shared diagnostic values reported by the parser and the checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

# Rule tags attached to diagnostics.  The checker uses one tag per judgment
# family; the parser reports PARSE and the Agda backend reports EMIT.
RULE_TAGS = (
    "CTX",
    "VAR",
    "UNIV",
    "PI-IND",
    "PI-EXT",
    "PI-INF",
    "EQ-ID",
    "EQ-U",
    "J",
    "JBETA",
    "EXTERNAL",
    "PARSE",
    "EMIT",
)


@dataclass(frozen=True)
class Span:
    offset: int
    length: int
    line: int
    col: int


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str
    span: Optional[Span] = field(default=None, compare=False)
    severity: str = "error"

    def machine(self, path: str) -> str:
        line = self.span.line if self.span else 0
        col = self.span.col if self.span else 0
        msg = self.message.replace("\n", " ")
        return f"{path}:{line}:{col}:{self.severity}:{self.rule}:{msg}"

    def human(self, path: str, src: Optional[str] = None) -> str:
        line = self.span.line if self.span else 0
        col = self.span.col if self.span else 0
        head = f"{path}:{line}:{col}: {self.severity} [{self.rule}] {self.message}"
        if src is None or self.span is None or self.span.length == 0:
            return head
        lines = src.splitlines()
        if not (1 <= line <= len(lines)):
            return head
        quoted = lines[line - 1]
        caret = " " * (col - 1) + "^" * max(1, min(self.span.length, len(quoted) - col + 1))
        return f"{head}\n  {quoted}\n  {caret}"

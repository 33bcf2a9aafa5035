#!/usr/bin/env python3
"""Regenerate every committed golden from the current elaborator.

Thin wrapper over ``hiit-forge corpus --bless``; review the diff before
committing, since the goldens are the byte-level contract of the emitter.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    corpus = args[0] if args else "corpus"
    cmd = [sys.executable, "-m", "hiit_forge.cli", "corpus", corpus, "--bless"]
    return subprocess.run(cmd, cwd=ROOT).returncode


if __name__ == "__main__":
    raise SystemExit(main())

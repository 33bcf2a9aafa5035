"""Command-line driver: check, elaborate, and corpus-runner subcommands."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .checker import elaborate_module
from .diagnostics import Diagnostic
from .emit import TRANSLATION_KEYS, EmitConfig, emit_agda, sha256_text
from .surface import parse
from .translate import translate, verify_bundle

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _want_color() -> bool:
    flag = os.environ.get("HIIT_FORGE_COLOR")
    if flag == "0":
        return False
    if flag == "1":
        return True
    return sys.stderr.isatty()


def _print_diags(
    diags: list[Diagnostic], path: str, fmt: str, src: Optional[str]
) -> None:
    color = _want_color()
    for d in diags:
        if fmt == "lines":
            print(d.machine(path), file=sys.stderr)
            continue
        text = d.human(path, src)
        if color:
            head, *rest = text.split("\n")
            text = "\n".join([f"\x1b[31m{head}\x1b[0m", *rest])
        print(text, file=sys.stderr)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _trans_arg(text: str) -> tuple[str, ...]:
    keys = tuple(k.strip() for k in text.split(",") if k.strip())
    for k in keys:
        if k not in TRANSLATION_KEYS:
            raise argparse.ArgumentTypeError(
                f"unknown translation {k!r} (choose from {', '.join(TRANSLATION_KEYS)})"
            )
    if not keys:
        raise argparse.ArgumentTypeError("at least one translation is required")
    return keys


def _pipeline(
    src: str,
    *,
    level: int,
    trans: tuple[str, ...],
    prelude: str,
    module_name: str,
    input_label: str,
) -> tuple[Optional[str], list[Diagnostic]]:
    """Parse, elaborate, translate, re-verify, and render one signature."""
    mod, diags = parse(src)
    if mod is None:
        return None, diags
    checked = elaborate_module(mod)
    if not checked.ok:
        return None, checked.diagnostics
    bundle = translate(checked, level)
    verify_bundle(bundle)
    cfg = EmitConfig(
        translations=trans,
        prelude=prelude,
        module_name=module_name,
        input_label=input_label,
        input_sha256=sha256_text(src),
    )
    return emit_agda(bundle, cfg)


def _label(path: str) -> str:
    return "<stdin>" if path == "-" else Path(path).name


def cmd_check(args: argparse.Namespace) -> int:
    try:
        src = _read_input(args.input)
    except OSError as ex:
        print(f"hiit-forge: {ex}", file=sys.stderr)
        return EXIT_IO
    mod, diags = parse(src)
    if mod is not None:
        checked = elaborate_module(mod)
        diags = checked.diagnostics
        if checked.ok:
            return EXIT_OK
    _print_diags(diags, _label(args.input), args.format, src)
    return EXIT_TYPE_ERROR


def cmd_elab(args: argparse.Namespace) -> int:
    try:
        src = _read_input(args.input)
    except OSError as ex:
        print(f"hiit-forge: {ex}", file=sys.stderr)
        return EXIT_IO
    if args.out:
        module_name = Path(args.out).stem
    elif args.input != "-":
        module_name = Path(args.input).stem
    else:
        module_name = "out"
    text, diags = _pipeline(
        src,
        level=args.level,
        trans=args.trans,
        prelude=args.prelude,
        module_name=module_name,
        input_label=_label(args.input),
    )
    if text is None:
        _print_diags(diags, _label(args.input), args.format, src)
        return EXIT_TYPE_ERROR
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as ex:
            print(f"hiit-forge: {ex}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"hiit-forge: not a directory: {root}", file=sys.stderr)
        return EXIT_IO
    files = sorted(root.rglob("*.hiit"))
    if not files:
        print(f"hiit-forge: no .hiit files under {root}", file=sys.stderr)
        return EXIT_IO

    rows: list[tuple[str, str, str]] = []
    for f in files:
        src = f.read_text(encoding="utf-8")
        text, diags = _pipeline(
            src,
            level=args.level,
            trans=args.trans,
            prelude=args.prelude,
            module_name=f.stem,
            input_label=f.name,
        )
        if text is not None:
            golden, produced = f.with_suffix(".agda"), text
        else:
            golden = f.with_suffix(".diag")
            produced = "".join(d.machine(f.name) + "\n" for d in diags)
        if args.bless:
            golden.write_text(produced, encoding="utf-8")
            status = "blessed"
        elif not golden.exists():
            status = "missing"
        elif golden.read_text(encoding="utf-8") == produced:
            status = "ok"
        else:
            status = "mismatch"
        rows.append((str(f.relative_to(root)), golden.suffix, status))

    name_w = max(len(r[0]) for r in rows)
    for name, kind, status in rows:
        print(f"{name:<{name_w}}  {kind:<6}  {status}")
    n_bad = sum(1 for r in rows if r[2] in ("missing", "mismatch"))
    print(f"{len(rows)} file(s), {len(rows) - n_bad} ok, {n_bad} failing")
    return EXIT_OK if n_bad == 0 else EXIT_TYPE_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiit-forge",
        description="Elaborate higher inductive-inductive signatures and "
        "emit their algebra translations as Agda.",
    )
    parser.add_argument("--version", action="version", version=f"hiit-forge {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("human", "lines"),
        default="human",
        help="diagnostic rendering (default: human)",
    )

    emit_flags = argparse.ArgumentParser(add_help=False)
    emit_flags.add_argument(
        "--trans",
        type=_trans_arg,
        default=TRANSLATION_KEYS,
        metavar="LIST",
        help="comma-separated subset of A,D,M,S,IND,REC,INIT (default: all)",
    )
    emit_flags.add_argument(
        "--level",
        type=int,
        choices=(0, 1),
        default=0,
        help="universe level for displayed algebras and sections (default: 0)",
    )
    emit_flags.add_argument(
        "--prelude",
        choices=("embed", "import"),
        default="embed",
        help="embed the prelude or import a sibling prelude module (default: embed)",
    )

    p_check = sub.add_parser(
        "check", parents=[common], help="typecheck a signature, print diagnostics"
    )
    p_check.add_argument("input", help="signature file, or - for stdin")
    p_check.set_defaults(fn=cmd_check)

    p_elab = sub.add_parser(
        "elab", parents=[common, emit_flags], help="typecheck, translate, and emit Agda"
    )
    p_elab.add_argument("input", help="signature file, or - for stdin")
    p_elab.add_argument("--out", "-o", help="output path (default: stdout)")
    p_elab.set_defaults(fn=cmd_elab)

    p_corpus = sub.add_parser(
        "corpus",
        parents=[common, emit_flags],
        help="run every .hiit under a directory against its sibling golden",
    )
    p_corpus.add_argument("dir", help="corpus directory")
    p_corpus.add_argument(
        "--bless", action="store_true", help="regenerate the golden files"
    )
    p_corpus.set_defaults(fn=cmd_corpus)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(ex.code or 0)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())

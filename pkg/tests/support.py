"""Shared helpers for the test suite: corpus loading and per-entry types.

`entry_types` reconstructs the pointwise reading of a translation: each
signature entry's clause type over *named* constants for the parts of all
earlier entries (and the current entry's own instance parts), which is the
form golden formulas are written in.
"""
from __future__ import annotations

from pathlib import Path

from hiit_forge.translate import (
    ALG,
    DIS,
    MOR,
    SEC,
    Bundle,
    _component,
    _ext,
    _sig,
    rebase,
    ty_A,
    ty_D,
    ty_M,
    ty_S,
)
from hiit_forge.checker import CheckedModule, elaborate_module
from hiit_forge.core import ExtEntry
from hiit_forge.surface import parse
from hiit_forge.target import (
    Globals,
    TApp,
    TConst,
    Tm,
    TType,
    infer_sort,
    prelude_globals,
    tapp,
    tarr,
    tlam,
    tpi,
    tt_check,
)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

POSITIVE_STEMS = sorted(p.stem for p in CORPUS.glob("*.hiit"))
NEGATIVE_STEMS = sorted(p.stem for p in (CORPUS / "negative").glob("*.hiit"))


def load(stem: str) -> CheckedModule:
    src = (CORPUS / f"{stem}.hiit").read_text(encoding="utf-8")
    mod, diags = parse(src)
    assert mod is not None, [d.machine(stem) for d in diags]
    checked = elaborate_module(mod)
    assert checked.ok, [d.machine(stem) for d in checked.diagnostics]
    return checked


# Superscripts used for the pointwise part names; these are distinct from the
# reserved emission markers, so they can also appear in formula files.
_D, _M, _S = "ᵈ", "ᵐ", "ˢ"


def entry_types(
    checked: CheckedModule, mode: str, level: int = 0
) -> tuple[list[tuple[str, Tm]], dict[str, str], Globals]:
    """Pointwise clause types for one translation.

    Returns ``(entries, consts, glob)`` where ``entries`` holds
    ``(source_name, clause_type)`` per signature declaration, ``consts``
    maps the display names used in formula files to internal constant
    names, and ``glob`` holds typed declarations for every constant so the
    clause types can be checked in the kernel.
    """
    glob = prelude_globals()
    consts: dict[str, str] = {}
    env: list = []
    out: list[tuple[str, Tm]] = []

    def declare(display: str, cname: str, ty: Tm) -> TConst:
        infer_sort([], glob, ty)
        glob[cname] = (ty, None)
        consts[display] = cname
        return TConst(cname)

    for k, entry in enumerate(checked.context):
        if isinstance(entry, ExtEntry):
            cname = f"%{entry.name}.{k}"
            c = declare(entry.name, cname, rebase(entry.ty, env))
            env.append(_ext(entry.ty, c))
            continue
        name, code = entry.name, entry.ty
        if mode == "A":
            a_ty = ty_A(code, env, 0)
            out.append((name, a_ty))
            cA = declare(name, f"%{name}.{k}.a", a_ty)
            env.append(_sig(code, cA))
        elif mode == "D":
            a_ty = ty_A(code, env, 0)
            cA = declare(name, f"%{name}.{k}.a", a_ty)
            d_ty = ty_D(code, env, cA, level)
            out.append((name, d_ty))
            cD = declare(name + _D, f"%{name}.{k}.d", d_ty)
            env.append(_sig(code, cA, cD))
        elif mode == "M":
            a0_ty = ty_A(code, env, 0)
            a1_ty = ty_A(code, env, 1)
            c0 = declare(name + "₀", f"%{name}.{k}.0", a0_ty)
            c1 = declare(name + "₁", f"%{name}.{k}.1", a1_ty)
            m_ty = ty_M(code, env, c0, c1)
            out.append((name, m_ty))
            cm = declare(name + _M, f"%{name}.{k}.m", m_ty)
            env.append(_sig(code, c0, c1, cm))
        elif mode == "S":
            a_ty = ty_A(code, env, 0)
            cA = declare(name, f"%{name}.{k}.a", a_ty)
            d_ty = ty_D(code, env, cA, level)
            cD = declare(name + _D, f"%{name}.{k}.d", d_ty)
            s_ty = ty_S(code, env, cA, cD, level)
            out.append((name, s_ty))
            cS = declare(name + _S, f"%{name}.{k}.s", s_ty)
            env.append(_sig(code, cA, cD, cS))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return out, consts, glob


def spec_headers(bundle: Bundle) -> None:
    """Check the four packaged translations against their stated types.

    Algebras land in Type₁; displayed algebras are families valued one
    universe above the chosen level; morphisms and sections are families of
    small types (widened to the level via cumulativity).
    """
    glob, i = bundle.globals, bundle.level
    c_alg = TConst(ALG)
    tt_check([], glob, glob[ALG][1], TType(1))
    tt_check([], glob, glob[DIS][1], tarr(c_alg, TType(i + 1)))
    tt_check([], glob, glob[MOR][1], tarr(c_alg, tarr(c_alg, TType(i))))
    tt_check(
        [],
        glob,
        glob[SEC][1],
        tpi("γ", c_alg, lambda g: tarr(TApp(TConst(DIS), g), TType(i))),
    )


def fundamental(bundle: Bundle, checked: CheckedModule) -> None:
    """Per-declaration typing of the packaged components.

    The k-th component projection out of a model is an algebra value of the
    k-th clause type; the matching projections out of displayed data,
    morphisms and sections check against the clause's displayed, morphism
    and section types instantiated at those very projections.
    """
    glob, lvl = bundle.globals, bundle.level
    sig = checked.context[checked.n_ext :]
    m = len(sig)
    ext_env = [
        _ext(e.ty, TConst("%" + e.name)) for e in checked.context[: checked.n_ext]
    ]
    c_alg, c_dis, c_mor, c_sec = (TConst(n) for n in (ALG, DIS, MOR, SEC))

    def prefix(k, parts):
        return ext_env + [_sig(sig[j].ty, *parts(j)) for j in range(k)]

    for k in range(m):
        code = sig[k].ty
        tt_check(
            [],
            glob,
            tlam("γ", lambda g: _component(g, m, k)),
            tpi(
                "γ",
                c_alg,
                lambda g: ty_A(code, prefix(k, lambda j: (_component(g, m, j),)), 0),
            ),
        )
        tt_check(
            [],
            glob,
            tlam("γ", lambda g: tlam("δ", lambda d: _component(d, m, k))),
            tpi(
                "γ",
                c_alg,
                lambda g: tpi(
                    "δ",
                    TApp(c_dis, g),
                    lambda d: ty_D(
                        code,
                        prefix(
                            k, lambda j: (_component(g, m, j), _component(d, m, j))
                        ),
                        _component(g, m, k),
                        lvl,
                    ),
                ),
            ),
        )
        tt_check(
            [],
            glob,
            tlam(
                "γ₀",
                lambda g0: tlam(
                    "γ₁", lambda g1: tlam("φ", lambda f: _component(f, m, k))
                ),
            ),
            tpi(
                "γ₀",
                c_alg,
                lambda g0: tpi(
                    "γ₁",
                    c_alg,
                    lambda g1: tpi(
                        "φ",
                        tapp(c_mor, g0, g1),
                        lambda f: ty_M(
                            code,
                            prefix(
                                k,
                                lambda j: (
                                    _component(g0, m, j),
                                    _component(g1, m, j),
                                    _component(f, m, j),
                                ),
                            ),
                            _component(g0, m, k),
                            _component(g1, m, k),
                        ),
                    ),
                ),
            ),
        )
        tt_check(
            [],
            glob,
            tlam(
                "γ",
                lambda g: tlam(
                    "γᵈ", lambda d: tlam("σ", lambda s: _component(s, m, k))
                ),
            ),
            tpi(
                "γ",
                c_alg,
                lambda g: tpi(
                    "γᵈ",
                    TApp(c_dis, g),
                    lambda d: tpi(
                        "σ",
                        tapp(c_sec, g, d),
                        lambda s: ty_S(
                            code,
                            prefix(
                                k,
                                lambda j: (
                                    _component(g, m, j),
                                    _component(d, m, j),
                                    _component(s, m, j),
                                ),
                            ),
                            _component(g, m, k),
                            _component(d, m, k),
                            lvl,
                        ),
                    ),
                ),
            ),
        )


def assert_roundtrip(bundle: Bundle, text: str) -> int:
    """Parse an emitted file back and compare with the stored globals.

    Every definition's printed type and body, and every postulate's printed
    type, is re-read with the reference grammar and must be alpha-equal to
    the kernel term it was printed from.  Returns how many pieces were
    compared.
    """
    import re

    from hiit_forge.emit import display_map, parse_target_expr

    inv = {v: k for k, v in display_map(bundle).items()}
    lines = text.splitlines()
    n_checked = 0
    i = 0
    while i < len(lines):
        m = re.match(r"^(\S+) : (.*)$", lines[i])
        if not (m and m.group(1) in inv):
            i += 1
            continue
        name = m.group(1)
        ty, body = bundle.globals[inv[name]]
        ty_text = m.group(2)
        j = i + 1
        while (
            j < len(lines)
            and lines[j].startswith(" ")
            and not lines[j].lstrip().startswith("--")
        ):
            ty_text += "\n" + lines[j]
            j += 1
        assert parse_target_expr(ty_text, consts=inv) == ty, (name, "type")
        if j < len(lines) and lines[j] == f"{name} =":
            k = j + 1
            body_lines = []
            while k < len(lines) and lines[k].strip():
                body_lines.append(lines[k])
                k += 1
            assert body is not None
            got = parse_target_expr("\n".join(body_lines), consts=inv)
            assert got == body, (name, "body")
            i = k
        else:
            i = j
        n_checked += 1
    for bm in re.finditer(r"(?m)^postulate\n((?:  .*\n)+)", text + "\n"):
        for name, ty_text in re.findall(
            r"(?m)^  (\S+) :((?:.*\n)(?:    .*\n)*)", bm.group(1)
        ):
            assert name in inv, name
            got = parse_target_expr(ty_text, consts=inv)
            assert got == bundle.globals[inv[name]][0], (name, "postulate")
            n_checked += 1
    return n_checked


def load_formulas(path: Path) -> list[tuple[str, str]]:
    """Parse a formula file: ``[name]`` headers, expression text between."""
    entries: list[tuple[str, str]] = []
    name = None
    buf: list[str] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            if name is not None:
                entries.append((name, "\n".join(buf)))
            name, buf = stripped[1:-1], []
        elif name is not None:
            buf.append(line)
    if name is not None:
        entries.append((name, "\n".join(buf)))
    return entries

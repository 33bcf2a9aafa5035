"""Translation tests: stated header types, per-declaration typing of the
packaged components, prefix agreement, universe bounds, determinism."""
from pathlib import Path

import pytest

from support import (
    CORPUS,
    POSITIVE_STEMS,
    entry_types,
    fundamental,
    load,
    spec_headers,
)
from hiit_forge.checker import CheckedModule, elaborate_module
from hiit_forge.surface import parse
from hiit_forge.target import (
    TApp,
    TConst,
    TPi,
    TType,
    TUnit,
    infer_sort,
    prelude_globals,
    tapp,
    tpi,
)
from hiit_forge.translate import (
    ALG,
    DERIVED_NAMES,
    DIS,
    INDUCTION,
    INITIALITY,
    MOR,
    RECURSION,
    SEC,
    STAR,
    translate,
    verify_bundle,
)

# Eliminator and computation-witness declarations in every position the
# grammar allows them; each source is well-typed and small, so all four
# pointwise readings can be rebuilt and sort-checked per entry.
ELIMINATOR_SIGS = {
    "ju_term": "A : U; B : U; e : A = B; a : A;"
    " y : Id B (J (X z. X) a e) (J (X z. X) a e);",
    "jbeta_term": "A : U; a : A; p : a = a;"
    " w : Jbeta (x z. a = x) a p = Jbeta (x z. a = x) a p;",
    "jbetau_term": "A : U; a : A; v : Jbeta (X z. X) A a = Jbeta (X z. X) A a;",
    "j_under_binder": "A : U; a : A; g : (y : A) -> a = y;"
    " w : (y : A) -> Id (a = y) (J (x z. a = x) (g a) (g y)) (g y);",
    "ju_beta_mix": "A : U; e : A = A; a : A; q : Id A (J (X z. X) a e) a;"
    " r : Jbeta (X z. X) A a = Jbeta (X z. X) A a;",
    "j_const_motive": "T0 : U; c0 : T0; T1 : U; c1 : T1; p0 : c0 = c0;"
    " d0 : Id T1 (J (x z. T1) c1 p0) c1;",
    "composition": "T0 : U; c0 : T0; c1 : T0; p0 : c0 = c1; p1 : c1 = c1;"
    " w0 : p0 * p1 = p0 * p1;",
}


def check_source(src: str) -> CheckedModule:
    mod, diags = parse(src)
    assert mod is not None and not diags, diags
    checked = elaborate_module(mod)
    assert checked.ok, [d.machine("<test>") for d in checked.diagnostics]
    return checked


@pytest.mark.parametrize("stem", POSITIVE_STEMS)
def test_corpus_headers_and_fundamental(stem):
    checked = load(stem)
    for level in (0, 1):
        bundle = translate(checked, level)
        spec_headers(bundle)
        fundamental(bundle, checked)


@pytest.mark.parametrize("stem", POSITIVE_STEMS)
def test_corpus_bundles_verify(stem):
    checked = load(stem)
    for level in (0, 1):
        verify_bundle(translate(checked, level))


@pytest.mark.parametrize("name", sorted(ELIMINATOR_SIGS))
def test_eliminator_signatures_pointwise(name):
    checked = check_source(ELIMINATOR_SIGS[name])
    for mode in ("A", "D", "M", "S"):
        entries, _, _ = entry_types(checked, mode)
        assert len(entries) == len(checked.context) - checked.n_ext


@pytest.mark.parametrize("name", sorted(ELIMINATOR_SIGS))
def test_eliminator_signatures_packaged(name):
    checked = check_source(ELIMINATOR_SIGS[name])
    bundle = translate(checked, 0)
    spec_headers(bundle)
    fundamental(bundle, checked)


@pytest.mark.parametrize("stem", POSITIVE_STEMS)
def test_prefix_agreement(stem):
    """Translating any prefix of a signature agrees with the whole.

    For algebras the agreement is exact: the prefix translation is the
    i-fold first-projection subterm of the full one.  The displayed,
    morphism and section translations access variables through
    telescope-length-dependent projection chains, so for those the prefix
    bundles are checked against the stated header types instead.
    """
    checked = load(stem)
    sig_len = len(checked.context) - checked.n_ext
    full_alg = translate(checked, 0).globals[ALG][1]
    for p in range(sig_len + 1):
        prefix = CheckedModule(
            context=checked.context[: checked.n_ext + p],
            n_ext=checked.n_ext,
            diagnostics=[],
        )
        bundle = translate(prefix, 0)
        peeled = full_alg
        for _ in range(sig_len - p):
            peeled = peeled.fst
        assert peeled == bundle.globals[ALG][1]
        spec_headers(bundle)


@pytest.mark.parametrize("stem", POSITIVE_STEMS)
def test_outputs_within_type2(stem):
    """Everything a translation produces lands within the third universe.

    For the four definitions the bound applies to the universe their header
    ends in (the family itself necessarily lives one level higher); for the
    postulated constants it applies to the sort of the declared type.
    """
    checked = load(stem)
    prelude = set(prelude_globals())
    for level in (0, 1):
        bundle = translate(checked, level)
        for name, (ty, body) in bundle.globals.items():
            if name in prelude:
                continue
            if body is not None:
                landing = ty
                while isinstance(landing, TPi):
                    landing = landing.cod
                assert isinstance(landing, TType) and landing.level <= 2, (
                    name,
                    level,
                )
            else:
                assert infer_sort([], bundle.globals, ty) <= 2, (name, level)


@pytest.mark.parametrize("stem", POSITIVE_STEMS)
def test_translate_deterministic(stem):
    checked = load(stem)
    a = translate(checked, 0)
    b = translate(checked, 0)
    assert a.name == b.name
    assert a.ext == b.ext
    assert a.components == b.components
    assert a.globals == b.globals
    assert a.derived == b.derived


def test_component_paths_match_declaration_order():
    bundle = translate(load("nat"), 0)
    assert [(c.name, c.proj1s) for c in bundle.components] == [
        ("Nat", 2),
        ("zero", 1),
        ("suc", 0),
    ]


def test_derived_statements_shape():
    bundle = translate(load("nat"), 0)
    c_dis, c_mor, c_sec = TConst(DIS), TConst(MOR), TConst(SEC)
    star = TConst(STAR)
    assert bundle.derived["induction"] == tpi(
        "γᵈ", TApp(c_dis, star), lambda gd: tapp(c_sec, star, gd)
    )
    assert bundle.derived["recursion"] == tpi(
        "γ", TConst(ALG), lambda g: tapp(c_mor, star, g)
    )
    init = bundle.derived["initiality"]
    assert init == tpi(
        "γ", TConst(ALG), lambda g: TApp(TConst("isContr"), tapp(c_mor, star, g))
    )
    assert set(bundle.derived) == {"induction", "recursion", "initiality"}
    for cname in (INDUCTION, RECURSION, INITIALITY):
        assert cname in bundle.globals
    assert DERIVED_NAMES == (INDUCTION, RECURSION, INITIALITY)


def test_empty_and_assume_only_signatures():
    for src in ("", "assume (A : Set);"):
        checked = check_source(src)
        bundle = translate(checked, 0)
        assert bundle.name == "Sig"
        assert bundle.globals[ALG][1] == TUnit()
        verify_bundle(bundle)


def test_translate_rejects_bad_inputs():
    checked = load("nat")
    with pytest.raises(ValueError):
        translate(checked, 2)
    mod, _ = parse("T : U; c : T -> Set;")
    bad = elaborate_module(mod)
    assert not bad.ok
    with pytest.raises(ValueError):
        translate(bad, 0)

"""Command-line driver tests: exit codes, formats, and the corpus runner."""
import io
import shutil

import pytest

from support import CORPUS
from hiit_forge.cli import EXIT_IO, EXIT_OK, EXIT_TYPE_ERROR, EXIT_USAGE, main

NAT = CORPUS / "nat.hiit"
NEG = CORPUS / "negative" / "neg.hiit"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_ok(capsys):
    code, out, err = run(capsys, "check", str(NAT))
    assert code == EXIT_OK and out == "" and err == ""


def test_check_negative_machine_format(capsys, monkeypatch):
    monkeypatch.setenv("HIIT_FORGE_COLOR", "0")
    code, _, err = run(capsys, "check", str(NEG), "--format", "lines")
    assert code == EXIT_TYPE_ERROR
    golden = (CORPUS / "negative" / "neg.diag").read_text(encoding="utf-8")
    assert err == golden


def test_check_human_format_color(capsys, monkeypatch):
    monkeypatch.setenv("HIIT_FORGE_COLOR", "1")
    code, _, err = run(capsys, "check", str(NEG))
    assert code == EXIT_TYPE_ERROR
    assert "\x1b[31m" in err and "PI-EXT" in err
    monkeypatch.setenv("HIIT_FORGE_COLOR", "0")
    _, _, plain = run(capsys, "check", str(NEG))
    assert "\x1b[" not in plain and "PI-EXT" in plain


def test_check_missing_file(capsys):
    code, _, err = run(capsys, "check", "no/such/file.hiit")
    assert code == EXIT_IO and "hiit-forge:" in err


def test_check_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(NAT.read_text(encoding="utf-8")))
    code, _, _ = run(capsys, "check", "-")
    assert code == EXIT_OK


def test_elab_stdout_matches_golden(capsys):
    code, out, err = run(capsys, "elab", str(NAT))
    assert code == EXIT_OK and err == ""
    assert out == (CORPUS / "nat.agda").read_text(encoding="utf-8")


def test_elab_to_file_names_module_after_output(capsys, tmp_path):
    target = tmp_path / "renamed.agda"
    code, out, _ = run(capsys, "elab", str(NAT), "-o", str(target))
    assert code == EXIT_OK and out == ""
    text = target.read_text(encoding="utf-8")
    assert "module renamed where" in text


def test_elab_stdin_uses_default_module(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(NAT.read_text(encoding="utf-8")))
    code, out, _ = run(capsys, "elab", "-")
    assert code == EXIT_OK
    assert "module out where" in out and "<stdin>" in out


def test_elab_translation_subset(capsys):
    code, out, _ = run(capsys, "elab", str(NAT), "--trans", "M")
    assert code == EXIT_OK
    assert "Natᴬ :" in out and "Natᴹ :" in out and "Natᴰ" not in out


def test_elab_level_flag_recorded(capsys):
    code, out, _ = run(capsys, "elab", str(NAT), "--level", "1")
    assert code == EXIT_OK and "--level 1" in out


def test_elab_prelude_import_mode(capsys):
    code, out, _ = run(capsys, "elab", str(NAT), "--prelude", "import")
    assert code == EXIT_OK
    assert "open import prelude" in out and "record ⊤" not in out


def test_elab_type_error(capsys, monkeypatch):
    monkeypatch.setenv("HIIT_FORGE_COLOR", "0")
    code, out, err = run(capsys, "elab", str(NEG), "--format", "lines")
    assert code == EXIT_TYPE_ERROR and out == ""
    assert err.startswith("neg.hiit:") and ":PI-EXT:" in err


def test_usage_errors(capsys):
    assert run(capsys, "elab", str(NAT), "--trans", "Q")[0] == EXIT_USAGE
    assert run(capsys, "elab", str(NAT), "--level", "7")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE


def test_version_and_help(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == EXIT_OK and out.startswith("hiit-forge ")
    code, out, _ = run(capsys, "--help")
    assert code == EXIT_OK and "check" in out and "corpus" in out


def test_full_corpus_verifies(capsys):
    code, out, _ = run(capsys, "corpus", str(CORPUS))
    assert code == EXIT_OK, out
    assert out.rstrip().endswith("0 failing")


@pytest.fixture
def mini_corpus(tmp_path):
    root = tmp_path / "mini"
    (root / "negative").mkdir(parents=True)
    for stem in ("nat", "circle"):
        shutil.copy(CORPUS / f"{stem}.hiit", root / f"{stem}.hiit")
    shutil.copy(NEG, root / "negative" / "neg.hiit")
    return root


def test_corpus_bless_then_verify(capsys, mini_corpus):
    code, out, _ = run(capsys, "corpus", str(mini_corpus), "--bless")
    assert code == EXIT_OK and out.count("blessed") == 3
    assert (mini_corpus / "nat.agda").exists()
    assert (mini_corpus / "circle.agda").exists()
    assert (mini_corpus / "negative" / "neg.diag").exists()
    # blessed goldens for positive files match the shipped corpus goldens
    assert (mini_corpus / "nat.agda").read_text(encoding="utf-8") == (
        CORPUS / "nat.agda"
    ).read_text(encoding="utf-8")

    code, out, _ = run(capsys, "corpus", str(mini_corpus))
    assert code == EXIT_OK
    rows = out.strip().splitlines()
    assert rows[-1] == "3 file(s), 3 ok, 0 failing"
    # rows come out in sorted path order, independent of creation order
    assert [r.split()[0] for r in rows[:-1]] == [
        "circle.hiit",
        "nat.hiit",
        "negative/neg.hiit",
    ]


def test_corpus_mismatch_and_missing(capsys, mini_corpus):
    run(capsys, "corpus", str(mini_corpus), "--bless")
    (mini_corpus / "circle.agda").write_text("-- tampered\n", encoding="utf-8")
    code, out, _ = run(capsys, "corpus", str(mini_corpus))
    assert code == EXIT_TYPE_ERROR and "mismatch" in out

    (mini_corpus / "circle.agda").unlink()
    code, out, _ = run(capsys, "corpus", str(mini_corpus))
    assert code == EXIT_TYPE_ERROR and "missing" in out
    assert out.rstrip().endswith("1 failing")


def test_corpus_io_errors(capsys, tmp_path):
    assert run(capsys, "corpus", str(tmp_path / "nowhere"))[0] == EXIT_IO
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run(capsys, "corpus", str(empty))[0] == EXIT_IO

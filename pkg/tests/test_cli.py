import subprocess
import sys

import pytest

from olpm.cli import main, transliterate
from olpm.grammars import get_grammar


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_ulwa(capsys):
    code, out, _ = run(capsys, "generate", "grammars/ulwa_subcat.grm", "possessive_nouns")
    assert code == 0
    assert sorted(out.split()) == sorted(["baska", "sapaaka", "siwakanak", "arakkabus"])
    assert len(out.splitlines()) == 4


def test_generate_is_deterministic(capsys):
    first = run(capsys, "generate", "bambara", "whichever")[1]
    assert run(capsys, "generate", "bambara", "whichever")[1] == first


def test_generate_limits(capsys):
    code, out, _ = run(capsys, "generate", "ulwa_subcat", "possessive_nouns", "--max-count", "1")
    assert code == 0 and out.split() == ["baska"]


def test_parse_exit_codes(capsys):
    assert run(capsys, "parse", "tonkawa", "word", "wepicnoʔ", "--blo", "1")[0] == 1
    code, out, _ = run(capsys, "parse", "tonkawa", "word", "wepcenoʔ", "--blo", "1")
    assert code == 0 and out.strip() == "accepted wepcenoq"
    assert run(capsys, "parse", "ulwa_subcat", "possessive_nouns", "baska")[0] == 0
    assert run(capsys, "parse", "ulwa_subcat", "possessive_nouns", "bakas")[0] == 1


def test_transliteration():
    g = get_grammar("tagalog")
    assert transliterate(g, "maʔiː") == "maqii"
    assert transliterate(g, "ɾ") == "D"


def test_codec(capsys):
    code, out, _ = run(capsys, "codec", "spellout", "t:1", "e:2", "c:2", "h:2", "t:2", "e:2", "l:2", "m:-1")
    assert code == 0 and out.strip() == "techtelmechtel"
    code, out, _ = run(capsys, "codec", "spellout", "--reading", "either", "v:1", "e:2", "l:-2", "o:1")
    assert out.strip() == "velelo"


def test_codec_bad_token(capsys):
    code, _, err = run(capsys, "codec", "spellout", "t1")
    assert code == 2 and "bad token" in err


def test_golden(capsys):
    code, out, _ = run(capsys, "golden", "bambara", "tonkawa")
    assert code == 0
    assert out.splitlines() == ["PASS bambara", "PASS tonkawa"]


def test_golden_unknown_case(capsys):
    code, _, err = run(capsys, "golden", "klingon")
    assert code == 2 and "unknown case" in err


def test_compile(capsys):
    code, out, _ = run(capsys, "compile", "bambara", "whichever")
    assert code == 0 and out.startswith("whichever\tstates=")


def test_compile_all_zero_arity_macros(capsys):
    code, out, _ = run(capsys, "compile", "tonkawa")
    assert code == 0
    assert "optimal_word\t" in out


@pytest.mark.parametrize("fmt, marker", [("dot", "digraph"), ("table", "")])
def test_dump(capsys, fmt, marker):
    code, out, _ = run(capsys, "dump", "bambara", "whichever", "--format", fmt)
    assert code == 0 and marker in out and out.strip()


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["generate"], ["parse", "tonkawa", "word"], ["dump", "tonkawa", "word", "--format", "png"],
    ["generate", "no_such_grammar", "x"], ["generate", "tonkawa", "undefined_macro"],
    ["parse", "tonkawa", "word", "wepcenoq", "--blo", "x"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("olpm:")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "olpm", "codec", "spellout", "w:2", "u:2", "l:2", "u:2", "o:-1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.strip() == "wuluowulu"

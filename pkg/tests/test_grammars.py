import time

import pytest

from olpm import fsa as F
from olpm.grammars import CASES, case_automaton, get_grammar, grammar_path, run_all, run_case
from olpm.runtime import accepts, parse, surface_strings


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_case(name):
    report = run_case(name)
    assert report.passed, str(report)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_surfaces_parse(name):
    case = CASES[name]
    g = get_grammar(case.grammar)
    for s in sorted(case.expected):
        assert accepts(parse(g, case.macro, s)), s


@pytest.mark.parametrize("name", sorted(n for n in CASES if CASES[n].near_misses))
def test_near_misses_are_rejected(name):
    case = CASES[name]
    assert len(case.near_misses) == 10
    g = get_grammar(case.grammar)
    for s in case.near_misses:
        assert s not in case.expected
        assert not accepts(parse(g, case.macro, s)), s


def test_run_all_reports_every_case():
    reports = run_all()
    assert [r.name for r in reports] == list(CASES)
    assert all(str(r).startswith("PASS") for r in reports)


def test_ulwa_subcategorization_is_fast():
    t = time.perf_counter()
    g = get_grammar("ulwa_subcat", fresh=True)
    got = surface_strings(g.fsa("possessive_nouns"))
    assert time.perf_counter() - t < 5
    assert sorted(got) == sorted(["baska", "sapaaka", "siwakanak", "arakkabus"])


def test_german_first_sonority_minimum_leaves_three_cuts():
    g = get_grammar("german_opt")
    assert sorted(surface_strings(g.fsa("candidates(chruschtschow)"))) == ["kRUSi", "kRUStSi", "kRUSti"]


def test_german_one_symbol_of_lookahead_is_not_enough():
    g = get_grammar("german_opt")
    assert set(surface_strings(g.fsa("i_formation_k1"))) != {"kRUStSi"}
    assert set(surface_strings(g.fsa("i_formation"))) == {"kRUStSi"}


def test_german_both_analyses_agree():
    opt, non = get_grammar("german_opt"), get_grammar("german_nonopt")
    assert surface_strings(opt.fsa("i_formation(hans)")) == ["hansi"]
    assert set(surface_strings(non.fsa("non_optimizing_i_formation"))) == {"kRUStSi", "hansi"}


def test_tagalog_blo_picks_coalescence():
    g = get_grammar("tagalog")
    pre = g.fsa("closed_interpretation(word(mang & bilih))")
    assert set(surface_strings(pre)) == {"mamilih", "mambilih"}
    assert surface_strings(g.fsa("optimal_word(mang & bilih)")) == ["mamilih"]


def test_tagalog_reduplication_overapplies():
    g = get_grammar("tagalog")
    pre = g.fsa("closed_interpretation(word(mang & bilih & ra_reduplicated_word))")
    assert set(surface_strings(pre)) == {"mamiimilih", "mambiibilih"}


def test_tonkawa_candidates_before_optimization():
    g = get_grammar("tonkawa")
    pre = set(surface_strings(g.fsa("word")))
    assert {"wepcenoq", "wepicnoq", "wentaloq", "wenetloq"} <= pre
    assert set(surface_strings(g.fsa("optimal_word"))) == {"wepcenoq", "wentaloq"}


def test_case_automata_are_closed():
    for name in ("ulwa_subcat", "bambara", "tonkawa"):
        a = case_automaton(CASES[name])
        assert F.equivalent(F.minimize(a), F.minimize(F.closed_interpretation(a)))


def test_grammar_lookup():
    assert grammar_path("tonkawa").name == "tonkawa.grm"
    with pytest.raises(FileNotFoundError):
        grammar_path("klingon")

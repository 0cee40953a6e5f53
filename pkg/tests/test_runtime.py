import pytest

from olpm import fsa as F
from olpm.alphabet import PRODUCER
from olpm.dsl import DslError, preprocessed
from olpm.grammars import CASES, get_grammar
from olpm.runtime import accepts, optimizing_parse, parse, surface_strings


def test_surface_strings_of_empty_automaton():
    g = get_grammar("ulwa_subcat")
    assert surface_strings(F.empty(g.h)) == []


@pytest.mark.parametrize("count, length", [(0, 5), (5, 0), (-1, 5)])
def test_surface_strings_limits(count, length):
    g = get_grammar("ulwa_subcat")
    with pytest.raises(ValueError):
        surface_strings(F.epsilon(g.h), count, length)


def test_surface_strings_shortest_first():
    g = get_grammar("ulwa_subcat")
    assert surface_strings(g.fsa("possessive_nouns")) == ["baska", "sapaaka", "arakkabus", "siwakanak"]


def test_surface_strings_drop_technical_symbols():
    g = get_grammar("bambara")
    # equal length, so declaration order decides: w comes before m
    assert surface_strings(g.fsa("whichever")) == ["wuluowulu", "maloomalo"]


def test_surface_strings_respect_max_count_and_len():
    g = get_grammar("ulwa_subcat")
    assert len(surface_strings(g.fsa("possessive_nouns"), 2)) == 2
    assert surface_strings(g.fsa("possessive_nouns"), 10, 7) == ["baska", "sapaaka"]


def test_surface_strings_keep_every_segment():
    g = get_grammar("ulwa_subcat")
    a = F.string(g.h, [(g.h.mask(c), PRODUCER) for c in "bask"])
    assert surface_strings(a) == ["bask"]


def test_preprocessed_unknown_segment():
    g = get_grammar("ulwa_subcat")
    with pytest.raises(DslError):
        preprocessed(g, "bxs")


def test_preprocessed_allows_technical_symbols_anywhere():
    g = get_grammar("bambara")
    h = g.h
    a = preprocessed(g, "wu")
    s = [h.mask("repeat"), h.mask("w"), h.mask("repeat"), h.mask("repeat"), h.mask("u"), h.mask("repeat")]
    word = F.string(h, [(m, PRODUCER) for m in s])
    assert accepts(F.intersect(a, word))


def test_parse_ulwa():
    g = get_grammar("ulwa_subcat")
    assert accepts(parse(g, "possessive_nouns", "baska"))
    assert not accepts(parse(g, "possessive_nouns", "bakas"))


def test_parse_empty_string():
    g = get_grammar("ulwa_subcat")
    assert not accepts(parse(g, "possessive_nouns", ""))


def test_parse_decorated_bambara():
    g = get_grammar("bambara")
    a = parse(g, "whichever", "wuluowulu")
    assert accepts(a)
    assert surface_strings(a) == ["wuluowulu"]
    assert not accepts(parse(g, "whichever", "wuluowul"))


def test_parse_accepts_a_prebuilt_automaton():
    g = get_grammar("ulwa_subcat")
    assert accepts(parse(g, g.fsa("possessive_nouns"), "sapaaka"))


def test_round_trip_of_generated_strings():
    for name in ("ulwa_subcat", "bambara", "german_nonopt", "tagalog_nasal"):
        case = CASES[name]
        g = get_grammar(case.grammar)
        for s in surface_strings(g.fsa(case.macro)):
            assert accepts(parse(g, case.macro, s)), (name, s)


@pytest.mark.parametrize("s, ok", [("wepcenoq", True), ("wentaloq", True), ("wepicnoq", False),
                                   ("wepicenoq", False), ("wenetaloq", False)])
def test_tonkawa_optimizing_parse(s, ok):
    g = get_grammar("tonkawa")
    assert accepts(parse(g, "word", s))
    assert accepts(optimizing_parse(g, "word", s, 1)) == ok


def test_tonkawa_generated_strings_pass_optimizing_parse():
    g = get_grammar("tonkawa")
    for s in surface_strings(g.fsa("optimal_word")):
        assert accepts(optimizing_parse(g, "word", s, 1))


def test_german_optimizing_parse_needs_two_symbols_of_lookahead():
    g = get_grammar("german_opt")
    m = "candidates(chruschtschow)"
    assert accepts(optimizing_parse(g, m, "kRUStSi", 2))
    for bad in ("kRUSi", "kRUSti"):
        assert accepts(parse(g, m, bad))
        assert accepts(optimizing_parse(g, m, bad, 1))
        assert not accepts(optimizing_parse(g, m, bad, 2))


def test_optimizing_parse_of_ungrammatical_string_is_empty():
    g = get_grammar("tonkawa")
    assert not accepts(optimizing_parse(g, "word", "wepcnoq", 1))

import pytest
from hypothesis import given, settings, strategies as st

from olpm import fsa as F
from olpm.alphabet import CONSUMER, PRODUCER
from olpm.dsl import DslError, Grammar, parse_expr
from olpm.grammars import get_grammar, grammar_path
from olpm.runtime import surface_strings

BASE = """
segments a i p t k m n.
type vowel = a i.
type labial = p m.
type dental = t n.
type dorsal = k.
type place = labial dental dorsal.
technical repeat skip.
"""


def grammar(body=""):
    return Grammar(BASE + body)


def same(a, b):
    return F.equivalent(F.minimize(a), F.minimize(b))


def test_concat_and_star_parse():
    assert parse_expr("[a, b*]") == ("cat", (("id", "a"), ("star", ("id", "b"))), None)


def test_composition_binds_looser_than_intersection():
    assert parse_expr("E1 & E2 o E3") == ("o", ("and", ("id", "E1"), ("id", "E2")), ("id", "E3"))
    assert parse_expr("E1 o E2 & E3") == ("o", ("id", "E1"), ("and", ("id", "E2"), ("id", "E3")))


def test_postfix_binds_tighter_than_intersection():
    assert parse_expr("a & b*") == ("and", ("id", "a"), ("star", ("id", "b")))


def test_letter_o_is_a_name_outside_operator_position():
    assert parse_expr("[o, a]") == ("cat", (("id", "o"), ("id", "a")), None)


@pytest.mark.parametrize("text", ["x := [a, .", "x := a", "x := )a.", "x := a b.", "x := @."])
def test_syntax_errors_carry_positions(text):
    with pytest.raises(DslError, match=r"line \d+"):
        grammar(text)


def test_error_column():
    with pytest.raises(DslError, match="line 2, column 6"):
        Grammar("segments a.\nx := ].")


def test_duplicate_definition():
    with pytest.raises(DslError, match="duplicate definition of x/0"):
        grammar("x := a. x := i.")


def test_pattern_clauses_are_not_duplicates():
    g = grammar("f([]) := '{}'. f([X|Xs]) := {producer(X), f(Xs)}.")
    assert same(g.fsa("f([a, p])"), F.union(F.symbol(g.h, g.h.mask("a")), F.symbol(g.h, g.h.mask("p"))))


def test_arity_errors():
    g = grammar("f(X) := X.")
    with pytest.raises(DslError, match="takes 1"):
        g.fsa("f(a, i)")
    with pytest.raises(DslError, match="unknown macro"):
        g.fsa("nothing(a)")
    with pytest.raises(DslError, match="unknown name"):
        g.fsa("nothing")


def test_no_matching_clause():
    g = grammar("f([]) := a.")
    with pytest.raises(DslError, match="no clause"):
        g.fsa("f([i])")


def test_recursion_hits_the_depth_cap():
    g = grammar("loop := [a, loop].")
    with pytest.raises(DslError, match="too deep"):
        g.fsa("loop")


def test_tilde_outside_formulas():
    with pytest.raises(DslError):
        grammar().fsa("~ a")


def test_arguments_are_passed_by_name():
    g = grammar("twice(X) := [X, X]. one := {a, i}.")
    a = g.fsa("twice(one)")
    assert same(a, F.concat(g.fsa("one"), g.fsa("one")))


def test_zero_ary_macro_is_memoized():
    g = grammar("x := [a, i*].")
    assert g.expand("x") is g.expand("x")


def test_expansion_is_referentially_transparent():
    body = "x := [a, {p, t}*, i]."
    one, two = grammar(body), grammar(body)
    assert surface_strings(one.fsa("x"), 500, 6) == surface_strings(two.fsa("x"), 500, 6)
    assert same(one.fsa("x"), one.fsa("[a, {p, t}*, i]"))


def test_mb_is_minimize():
    g = grammar("x := {[a, p], [a, t], [a, p]}.")
    m = g.fsa("mb(x)")
    assert same(m, g.fsa("x"))
    assert m.n == F.minimize(g.fsa("x")).n


def test_consumer_and_producer_flags():
    g = grammar()
    c = g.fsa("consumer(vowel & ~ a)")
    assert {(m, pc) for _, m, pc, _ in c.arcs} == {(g.h.mask("i"), CONSUMER)}
    p = g.fsa("producer(labial)")
    assert {pc for _, _, pc, _ in p.arcs} == {PRODUCER}


def test_producer_commutes_with_union():
    g = grammar()
    assert same(g.fsa("producer((a;i))"), g.fsa("{producer(a), producer(i)}"))


def test_ignore_without_technical_symbols_is_identity():
    g = grammar("e := [a, {p, t}, i].")
    got = F.intersect(g.fsa("ignore(e, consumer(repeat))"), g.fsa("material_is(~ technical)"))
    assert same(got, g.fsa("e"))


def test_ignore_interleaves():
    g = grammar()
    got = g.fsa("ignore([a, i], consumer(repeat))")
    r, a, i = g.h.mask("repeat"), g.h.mask("a"), g.h.mask("i")
    loop = F.star(F.symbol(g.h, r, CONSUMER))
    want = F.concat(loop, F.symbol(g.h, a), loop, F.symbol(g.h, i), loop)
    assert same(got, want)


def test_assimilation_for_matches_manual_disjunction():
    g = grammar()
    got = g.fsa("assimilation_for([labial, dental, dorsal])")
    manual = g.fsa("{[consumer(labial), consumer(labial)], [consumer(dental), consumer(dental)], "
                   "[consumer(dorsal), consumer(dorsal)]}")
    assert same(got, manual)


def test_assimilation_for_empty_list_is_empty_language():
    assert not F.minimize(grammar().fsa("assimilation_for([])")).finals


WORDS2 = [("p", "a"), ("a", "a"), ("t", "k"), ("i", "m")]


@pytest.mark.parametrize("x", WORDS2)
def test_not_contains2_excludes_its_argument(x):
    g = grammar()
    expr = f"[producer({x[0]}), producer({x[1]})]"
    bad = g.fsa(f"[?*, {expr}, ?*]")
    assert not F.minimize(F.intersect(g.fsa(f"not_contains2({expr})"), bad)).finals
    # and keeps everything else
    rest = F.intersect(g.fsa(f"not_contains2({expr})"), g.fsa("?*"))
    assert same(F.union(rest, bad), g.fsa("?*"))


def test_not_contains_length_check():
    with pytest.raises(DslError, match="exactly 2"):
        grammar().fsa("not_contains2([a, i, a])")


def test_first_takes_the_earliest_occurrence():
    g = grammar()
    a = g.fsa("[first_(producer(p)), ?*] & [producer(a), producer(p), producer(p)]")
    assert same(a, g.fsa("[producer(a), producer(p), producer(p)]"))


def test_no_peripheral_occurence():
    g = grammar()
    a = g.fsa("no_peripheral_occurence_of(vowel)")
    h = g.h
    acc = lambda s: not F.is_empty(F.intersect(a, F.string(h, [(h.mask(c), CONSUMER) for c in s])))
    assert acc("pap") and acc("") and acc("p")
    assert not acc("ap") and not acc("pa") and not acc("a")


def test_enforce_agreement_synthesis():
    g = grammar("same(P) := [consumer(P), consumer(P)].")
    got = g.fsa("enforce_agreement_in_(same, [labial, dental])")
    assert same(got, g.fsa("{same(labial), same(dental)}"))


def test_blo_needs_positive_lookahead():
    with pytest.raises(DslError, match="look-ahead"):
        grammar().fsa("blo(a, 0)")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["a", "i", "p", "t"]), min_size=1, max_size=4), st.booleans())
def test_string_literal_matches_concatenation(segs, star):
    g = grammar()
    lit = '"' + "".join(segs) + '"'
    cat = "[" + ", ".join(f"producer({s})" for s in segs) + "]"
    if star:
        lit, cat = f"({lit})*", f"({cat})*"
    assert same(g.fsa(lit), g.fsa(cat))


def test_unknown_segment_in_string():
    with pytest.raises(DslError, match="unknown segment"):
        grammar().fsa('"az"')


def test_case_study_files_load():
    for name in ("ulwa_subcat", "ulwa_drift", "german_opt", "german_nonopt", "tagalog",
                 "bambara", "tonkawa", "mirror"):
        g = get_grammar(name)
        assert g.macros()


def test_ulwa_subcategorization_file_parses():
    text = grammar_path("ulwa_subcat").read_text(encoding="utf-8")
    g = Grammar(text)
    assert g.has_macro("possessive_third_singular")

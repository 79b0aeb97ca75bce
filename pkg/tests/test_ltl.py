import pytest
from hypothesis import given, settings

from rankdpa.ltl import (
    FALSE,
    TRUE,
    LtlSyntaxError,
    NNFError,
    af_step,
    af_word,
    atom,
    canon,
    classify_fragment,
    eval_lasso,
    g_subformulas,
    is_nnf,
    parse_ltl,
    prop_equiv,
    size,
    substitute_gset,
    to_nnf,
    to_text,
)
from rankdpa.words import LassoWord

from strategies import LETTERS, lassos, nnf_formulas

A, B, C = frozenset("a"), frozenset("b"), frozenset("c")
E = frozenset()


def nnf(text):
    return to_nnf(parse_ltl(text))


class TestParser:
    @pytest.mark.parametrize("text", ["a U b U c", "G F a -> F b", "!(a & X b)", "tt | ff",
                                      "((a))", "a -> b -> c"])
    def test_roundtrip_through_text(self, text):
        f = parse_ltl(text)
        assert parse_ltl(to_text(f)) is f

    def test_hash_consing(self):
        assert parse_ltl("F (a & b)") is parse_ltl("F(a&b)")

    def test_until_is_right_associative(self):
        assert parse_ltl("a U b U c") is parse_ltl("a U (b U c)")

    def test_implication_is_right_associative(self):
        assert parse_ltl("a -> b -> c") is parse_ltl("a -> (b -> c)")

    @pytest.mark.parametrize("text", ["a U", "(a", "a b", "", "a & | b", "G", "a $ b"])
    def test_syntax_errors(self, text):
        with pytest.raises(LtlSyntaxError):
            parse_ltl(text)

    def test_error_has_position(self):
        with pytest.raises(LtlSyntaxError, match="position 3"):
            parse_ltl("a U")

    def test_collects_atoms(self):
        ap = set()
        parse_ltl("G (p -> F q)", ap)
        assert ap == {"p", "q"}


class TestNNF:
    def test_pushes_negation(self):
        assert nnf("!(G F a)") is nnf("F G !a")
        assert nnf("!X (a | b)") is nnf("X (!a & !b)")

    def test_constants(self):
        assert nnf("!tt") is FALSE and nnf("!ff") is TRUE

    def test_negated_until_rejected(self):
        with pytest.raises(NNFError):
            nnf("!(a U b)")

    @given(nnf_formulas(), lassos())
    @settings(max_examples=150, deadline=None)
    def test_double_negation(self, f, w):
        g = to_nnf(parse_ltl("!(" + to_text(f) + ")")) if "U" not in to_text(f) else None
        if g is not None:
            assert is_nnf(g)
            assert eval_lasso(g, w) != eval_lasso(f, w)


class TestAfterFunction:
    phi = nnf("c | X G (a | F b)")

    def test_running_example(self):
        assert af_step(self.phi, C) is TRUE
        assert af_step(self.phi, E) is nnf("G (a | F b)")

    def test_fixed_points(self):
        assert af_step(TRUE, E) is TRUE and af_step(FALSE, A) is FALSE

    def test_until(self):
        f = nnf("a U b")
        assert af_step(f, B) is TRUE
        assert af_step(f, A) is f
        assert af_step(f, E) is FALSE

    @given(nnf_formulas(), lassos())
    @settings(max_examples=200, deadline=None)
    def test_af_characterizes_suffixes(self, f, w):
        """w |= f iff the suffix after the first letter satisfies af(f, first letter)."""
        first = w.letter(0)
        rest = LassoWord(w.prefix[1:], w.period) if w.prefix else LassoWord((), w.period[1:] + w.period[:1])
        assert eval_lasso(f, w) == eval_lasso(af_step(f, first), rest)

    def test_af_word(self):
        assert af_word(nnf("X X a"), [E, E, A]) is TRUE


class TestPropositional:
    def test_equivalences(self):
        assert prop_equiv(nnf("a & (a | b)"), atom("a"))
        assert prop_equiv(nnf("G a | (G a & F b)"), nnf("G a"))
        assert not prop_equiv(nnf("F a"), nnf("F a | F b"))

    def test_canon_is_idempotent(self):
        f = canon(nnf("(a | b) & (a | !b)"))
        assert canon(f) is f

    def test_g_subformulas(self):
        assert g_subformulas(nnf("c | X G (a | F b)")) == {nnf("G (a | F b)")}

    def test_substitute_gset(self):
        phi = nnf("c | X G (a | F b)")
        gs = frozenset(g_subformulas(phi))
        assert substitute_gset(phi, gs, gs) is TRUE  # c | X tt
        assert prop_equiv(substitute_gset(phi, frozenset(), gs), atom("c"))


class TestSemantics:
    @pytest.mark.parametrize("text,u,v,expected", [
        ("G F a", (), (A, E), True),
        ("F G a", (), (A, E), False),
        ("F G a", (E, E), (A,), True),
        ("a U b", (A, A), (B,), True),
        ("a U b", (A, E), (B,), False),
        ("X a", (E,), (A,), True),
    ])
    def test_eval(self, text, u, v, expected):
        assert eval_lasso(nnf(text), LassoWord(u, v)) is expected

    @given(lassos())
    def test_presentation_invariance(self, w):
        f = nnf("G (a -> F b) & F G a")
        unrolled = LassoWord(w.prefix + w.period, w.period + w.period)
        assert eval_lasso(f, w) == eval_lasso(f, unrolled)


def test_size_counts_nodes():
    assert size(nnf("a U (b U c)")) == 5


@pytest.mark.parametrize("text,frag", [("F a & F b", "pure-eventual"), ("a & X !b", "x-a-safety"),
                                       ("G a", "other")])
def test_classify(text, frag):
    assert classify_fragment(nnf(text)) == frag


def test_letters_are_subsets():
    assert len(LETTERS) == 4 and E in LETTERS

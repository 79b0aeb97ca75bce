import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankdpa.automata import (
    AlphabetError,
    Dpa,
    Ldba,
    complement_dpa,
    compress_colors,
    dpa_accepts_lasso,
    dpa_lasso_summary,
    dpa_run_colors,
    eliminate_jumps,
    is_initial_deterministic,
    isomorphic,
    ldba_accepts_lasso,
    ldba_accepts_lasso_with_jumps,
    make_ord,
    minimize_dpa,
    normalize_colors,
    validate_ldba,
)
from rankdpa.determinize import construct_dpa
from rankdpa.gallery import fig1_ldba
from rankdpa.hoa import HoaError, emit_dot, emit_hoa, parse_hoa
from rankdpa.ltl import parse_ltl, to_nnf
from rankdpa.ltl2ldba import translate
from rankdpa.pipeline import rand_ldba
from rankdpa.words import LassoWord, count_lassos, enumerate_lassos

from strategies import lassos

RAW = lassos(alphabet=("a", "b"))


def two_state_dpa(colors):
    """Alternates states on every letter; ``colors[q][x]`` per edge."""
    return Dpa(alphabet=("a", "b"), succ=((1, 1), (0, 0)), color=colors, initial=0,
               max_color=max(max(r) for r in colors))


class TestLdba:
    def test_fig1_valid(self):
        assert validate_ldba(fig1_ldba()) == []

    def test_accepting_edge_outside_qd(self):
        a = fig1_ldba()
        bad = Ldba(a.alphabet, a.succ, 0, a.qd, a.accepting | {(0, 0, 0)})
        assert any("accepting" in p for p in validate_ldba(bad))

    def test_nondeterminism_inside_qd(self):
        a = fig1_ldba()
        succ = list(a.succ)
        succ[1] = ((1, 3), (3,))
        problems = validate_ldba(Ldba(a.alphabet, tuple(succ), 0, a.qd, a.accepting))
        assert problems

    def test_qd_not_closed(self):
        a = fig1_ldba()
        succ = list(a.succ)
        succ[3] = ((0,), (3,))
        assert validate_ldba(Ldba(a.alphabet, tuple(succ), 0, a.qd, a.accepting))

    @pytest.mark.parametrize("u,v,expected", [
        ("", "a", True), ("", "b", True), ("", "ab", False), ("abb", "ab", False),
        ("aab", "b", True), ("ba", "a", True),
    ])
    def test_fig1_language(self, u, v, expected):
        assert ldba_accepts_lasso(fig1_ldba(), LassoWord(tuple(u), tuple(v))) is expected

    def test_make_ord(self):
        a = fig1_ldba()
        assert make_ord(a) == {1: 1, 2: 2, 3: 3}
        assert make_ord(a, [3, 1, 2]) == {3: 1, 1: 2, 2: 3}
        with pytest.raises(ValueError):
            make_ord(a, [1, 2])

    def test_unknown_letter(self):
        with pytest.raises(AlphabetError):
            ldba_accepts_lasso(fig1_ldba(), LassoWord((), ("c",)))

    def test_initial_determinism(self):
        assert is_initial_deterministic(fig1_ldba())  # a-successors 1 and 2 lie in qd
        a = fig1_ldba()
        succ = (((0, 3), (0, 2)),) + a.succ[1:]
        branching = Ldba(a.alphabet, succ, 0, frozenset({1, 2}), a.accepting)
        assert not is_initial_deterministic(branching)
        e = eliminate_jumps(translate(to_nnf(parse_ltl("G F a"))))
        assert is_initial_deterministic(e)


class TestJumps:
    phi = to_nnf(parse_ltl("c | X G (a | F b)"))

    def test_elimination_preserves_language(self):
        a = translate(self.phi)
        e = eliminate_jumps(a)
        assert e.jumps is None or not any(e.jumps)
        assert validate_ldba(e) == []
        for w in enumerate_lassos(a.alphabet, 2, 2):
            assert ldba_accepts_lasso_with_jumps(a, w) == ldba_accepts_lasso(e, w)


class TestDpa:
    def test_min_even(self):
        d = two_state_dpa(((2, 2), (3, 3)))
        assert dpa_lasso_summary(d, LassoWord((), ("a",))) == 2
        assert dpa_accepts_lasso(d, LassoWord((), ("a",)))

    def test_run_colors(self):
        d = two_state_dpa(((2, 4), (3, 3)))
        assert dpa_run_colors(d, LassoWord(("b",), ("a",)), 4) == [4, 3, 2, 3]

    @given(RAW)
    def test_complement_flips(self, w):
        d = construct_dpa(fig1_ldba())
        assert dpa_accepts_lasso(complement_dpa(d), w) != dpa_accepts_lasso(d, w)

    @given(st.integers(0, 300), RAW)
    @settings(max_examples=60, deadline=None)
    def test_postprocessing_preserves_language(self, seed, w):
        d = construct_dpa(rand_ldba(seed, 5))
        verdict = dpa_accepts_lasso(d, w)
        for f in (compress_colors, normalize_colors, minimize_dpa,
                  lambda x: compress_colors(minimize_dpa(normalize_colors(x)))):
            assert dpa_accepts_lasso(f(d), w) == verdict

    @pytest.mark.parametrize("before,after", [
        (((2, 7), (7, 2)), [2, 3]),
        (((1, 2), (7, 7)), [1, 2, 3]),
        (((4, 6), (7, 7)), [2, 4, 5]),
        (((1, 2), (3, 3)), [1, 2, 3]),
    ])
    def test_compress(self, before, after):
        d = two_state_dpa(before)
        c = compress_colors(d)
        assert c.used_colors() == after
        assert c.max_color <= d.max_color
        assert compress_colors(c).color == c.color

    def test_minimize_merges(self):
        d = two_state_dpa(((2, 2), (2, 2)))
        assert minimize_dpa(d).num_states == 1

    def test_minimize_never_grows(self):
        for seed in range(30):
            d = construct_dpa(rand_ldba(seed, 6))
            assert minimize_dpa(normalize_colors(d)).num_states <= d.num_states


class TestLassos:
    def test_count(self):
        assert count_lassos(2, 3, 3) == len(list(enumerate_lassos("ab", 3, 3))) == 15 * 14

    def test_empty_period(self):
        with pytest.raises(ValueError):
            LassoWord(("a",), ())


class TestHoa:
    def test_fig1_header(self):
        text = emit_hoa(fig1_ldba())
        assert "States: 4" in text and "acc-name: Buchi" in text
        assert text.count("{0}") == 2

    @pytest.mark.parametrize("make", [
        fig1_ldba,
        lambda: construct_dpa(fig1_ldba()),
        lambda: translate(to_nnf(parse_ltl("c | X G (a | F b)"))),
        lambda: construct_dpa(eliminate_jumps(translate(to_nnf(parse_ltl("G F a | F G b"))))),
    ])
    def test_roundtrip(self, make):
        x = make()
        y = parse_hoa(emit_hoa(x))
        target = eliminate_jumps(x) if isinstance(x, Ldba) else x
        assert isomorphic(target, eliminate_jumps(y) if isinstance(y, Ldba) else y)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=100, deadline=None)
    def test_random_roundtrip(self, seed):
        a = rand_ldba(seed, 5)
        assert isomorphic(a, parse_hoa(emit_hoa(a)))

    def test_labels_survive(self):
        a = translate(to_nnf(parse_ltl("F G a")))
        b = parse_hoa(emit_hoa(a))
        assert b.labels is not None and all(l is not None for l in b.labels)

    def test_parses_foreign_syntax(self):
        text = """HOA: v1
States: 2
Start: 0
AP: 1 "a"
Acceptance: 1 Inf(0)
--BODY--
State: 0
[t] 0
[0] 1
State: 1 {0}
[0] 1
[!0] 1
--END--
"""
        a = parse_hoa(text)
        assert isinstance(a, Ldba) and a.qd == frozenset({1})
        assert ldba_accepts_lasso(a, LassoWord((), (frozenset("a"),)))

    def test_rejects_max_odd(self):
        text = emit_hoa(construct_dpa(fig1_ldba())).replace("parity min even", "parity max odd")
        with pytest.raises(HoaError, match="unsupported acceptance"):
            parse_hoa(text)

    def test_rejects_state_labels(self):
        text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\n" \
               "State: [0] 0\n0\n--END--\n"
        with pytest.raises(HoaError, match="state labels"):
            parse_hoa(text)

    @pytest.mark.parametrize("text", ["", "HOA: v1\n--BODY--\n--END--\n", "garbage"])
    def test_malformed(self, text):
        with pytest.raises(HoaError):
            parse_hoa(text)

    def test_dot(self):
        assert emit_dot(fig1_ldba()).startswith("digraph")
        assert "->" in emit_dot(construct_dpa(fig1_ldba()))

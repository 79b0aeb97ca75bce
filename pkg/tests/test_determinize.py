import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankdpa.automata import dpa_accepts_lasso, dpa_run_colors, eliminate_jumps, ldba_accepts_lasso, make_ord
from rankdpa.determinize import (
    BudgetExceeded,
    Cancelled,
    CancelToken,
    choose_ord,
    construct,
    construct_dpa,
    construct_reduced_dpa,
    explicit_oracle,
    initial_ranking,
    ranking_step,
    state_bound,
    syntactic_oracle,
    width_check,
)
from rankdpa.gallery import fig1_ldba
from rankdpa.kernels import COMPILED, CompiledKernel, PurePythonKernel
from rankdpa.ltl import parse_ltl, to_nnf
from rankdpa.ltl2ldba import translate
from rankdpa.pipeline import rand_ldba
from rankdpa.rundag import color_trace
from rankdpa.words import enumerate_lassos

from strategies import lassos

RAW = lassos(alphabet=("a", "b"))
FIG3_ORACLE = explicit_oracle({1: [0], 2: [1], 3: []})


def by_name(d, name):
    return d.names.index(name)


class TestFigure3:
    def test_left(self, kernel_cls):
        a = fig1_ldba()
        d = construct(a, make_ord(a), kernel_cls=kernel_cls).dpa
        assert d.num_states == 5
        a_, b_ = d.letter_index["a"], d.letter_index["b"]
        assert d.color[d.initial][a_] == 7
        assert d.color[by_name(d, "{1},[2]")][a_] == 2
        q = by_name(d, "{1},[4<3]")
        assert d.color[q][b_] == 4 and d.succ[q][b_] == q
        assert d.color[q][a_] == 3 and d.succ[q][a_] == by_name(d, "{1},[4<2]")

    def test_right(self, kernel_cls):
        a = fig1_ldba()
        red = construct(a, make_ord(a), FIG3_ORACLE, kernel_cls=kernel_cls).dpa
        plain = construct_dpa(a)
        assert red.num_states == 3
        for w in enumerate_lassos(a.alphabet, 4, 4):
            assert dpa_accepts_lasso(red, w) == dpa_accepts_lasso(plain, w)

    def test_syntactic_oracle_of_labels(self):
        o = syntactic_oracle(fig1_ldba())
        assert o.base[3] == frozenset() and o.size == 2


class TestKernels:
    def test_selection(self):
        assert PurePythonKernel.compiled is False
        if CompiledKernel is not None:
            assert COMPILED or CompiledKernel.compiled

    @given(st.integers(0, 10 ** 6), st.booleans(), st.booleans())
    @settings(max_examples=80, deadline=None)
    def test_kernels_agree(self, seed, reduce, keep_smallest):
        if CompiledKernel is None:
            pytest.skip("compiled kernel not built")
        a = rand_ldba(seed, 6)
        o = make_ord(a)
        oracle = None
        if reduce:
            oracle = explicit_oracle({q: [q % 3] for q in a.qd})
        x = construct(a, o, oracle, keep_smallest, kernel_cls=PurePythonKernel)
        y = construct(a, o, oracle, keep_smallest, kernel_cls=CompiledKernel)
        assert x.dpa.succ == y.dpa.succ and x.dpa.color == y.dpa.color
        assert x.rankings == y.rankings


@given(st.integers(0, 10 ** 6), RAW)
@settings(max_examples=200, deadline=None)
def test_dpa_language(seed, w):
    a = rand_ldba(seed, 6)
    assert dpa_accepts_lasso(construct_dpa(a), w) == ldba_accepts_lasso(a, w)


@given(st.integers(0, 10 ** 6), RAW)
@settings(max_examples=100, deadline=None)
def test_dpa_colors_are_run_dag_colors(seed, w):
    a = rand_ldba(seed, 6)
    o = make_ord(a)
    d = construct_dpa(a, o)
    n = len(w.prefix) + len(w.period) * (d.num_states + 1)
    assert dpa_run_colors(d, w, n) == color_trace(a, o, w, n)


def test_ranking_step(kernel_cls):
    a = fig1_ldba()
    st1, c = ranking_step(a, make_ord(a), initial_ranking(a), "a")
    assert st1 == ((0,), (1,)) and c == 7


def test_color_bound_and_state_bound(kernel_cls):
    for seed in range(40):
        a = rand_ldba(seed, 7)
        r = construct(a, kernel_cls=kernel_cls)
        assert max(r.dpa.used_colors()) <= 2 * len(a.qd) + 1
        assert r.dpa.num_states <= state_bound(a)


def test_state_bound_formula():
    a = fig1_ldba()
    assert state_bound(a) == 2 * sum(math.perm(3, i) for i in range(4))


def test_budget():
    with pytest.raises(BudgetExceeded):
        construct(fig1_ldba(), budget=3)


def test_cancel_limit():
    tok = CancelToken()
    tok.limit = 1
    with pytest.raises(Cancelled):
        construct(fig1_ldba(), cancel=tok)


def test_jumps_must_be_eliminated():
    a = translate(to_nnf(parse_ltl("F G a")))
    with pytest.raises(ValueError):
        construct(a)
    construct(eliminate_jumps(a))


class TestOrdering:
    def test_sink_first_then_eventual(self):
        a = eliminate_jumps(translate(to_nnf(parse_ltl("F G a | F G b"))))
        o = choose_ord(a)
        ranked = sorted(a.qd, key=o.__getitem__)
        assert a.names[ranked[0]] == "ff"

    def test_unlabelled_uses_ids(self):
        a = fig1_ldba(labelled=False)
        assert choose_ord(a) == make_ord(a)


class TestReduction:
    @pytest.mark.parametrize("text", ["F G a | F G b", "G F a & G F b", "c | X G (a | F b)",
                                      "G (a -> F b)", "F G a & G F b"])
    def test_reduced_never_larger(self, text, kernel_cls):
        a = eliminate_jumps(translate(to_nnf(parse_ltl(text))))
        o = choose_ord(a)
        plain = construct(a, o, kernel_cls=kernel_cls)
        red = construct(a, o, syntactic_oracle(a), kernel_cls=kernel_cls)
        assert red.dpa.num_states <= plain.dpa.num_states
        assert red.max_s == 1
        assert width_check(syntactic_oracle(a), red).holds

    def test_keep_smallest(self):
        a = eliminate_jumps(translate(to_nnf(parse_ltl("F G a | F G b"))))
        d = construct_reduced_dpa(a, keep_smallest=True)
        for w in enumerate_lassos(a.alphabet, 2, 2):
            assert dpa_accepts_lasso(d, w) == ldba_accepts_lasso(a, w)

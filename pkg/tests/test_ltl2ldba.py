import pytest
from hypothesis import given, settings

from rankdpa.automata import (
    eliminate_jumps,
    is_initial_deterministic,
    ldba_accepts_lasso,
    ldba_accepts_lasso_with_jumps,
    validate_ldba,
)
from rankdpa.determinize import BudgetExceeded, Cancelled, CancelToken
from rankdpa.gallery import fig1_ldba
from rankdpa.ltl import (
    TRUE,
    canonicalize,
    eval_lasso,
    g_subformulas,
    mk_and,
    mk_globally,
    parse_ltl,
    prop_equiv,
    subformulas,
    substitute_gset,
    to_nnf,
)
from rankdpa.ltl2ldba import (
    SINK,
    AccState,
    acc_step,
    build_initial_component,
    jump_target,
    letter_alphabet,
    monitor_accepts_lasso,
    monitor_step,
    state_label,
    translate,
)
from rankdpa.words import LassoWord, enumerate_lassos

from figures import FIG4_STATES, PHI, check_fig4, fig4
from strategies import lassos, nnf_formulas


def nnf(text):
    return to_nnf(parse_ltl(text))


A, B, C, E = frozenset("a"), frozenset("b"), frozenset("c"), frozenset()
AB = frozenset("ab")
PSI = nnf("a | F b")
GPSI = nnf("G (a | F b)")
FB = nnf("F b")


class TestInitialComponent:
    def test_running_example(self):
        states, _ = build_initial_component(PHI, letter_alphabet("abc"))
        expected = [PHI, GPSI, nnf("G (a | F b) & F b"), TRUE]
        assert len(states) == 4
        assert all(any(prop_equiv(s, e) for s in states) for e in expected)

    def test_true(self):
        assert len(build_initial_component(TRUE, letter_alphabet(""))[0]) == 1

    def test_fixed_class(self):
        """af(F G a, {a}) = G a | F G a is not propositionally equal to F G a,
        so the component has four states; all of them denote the formula."""
        phi = nnf("F G a | F G b")
        alphabet = letter_alphabet("ab")
        states, _ = build_initial_component(phi, alphabet)
        assert len(states) == 4
        for s in states:
            for w in enumerate_lassos(alphabet, 3, 3):
                assert eval_lasso(s, w) == eval_lasso(phi, w)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            build_initial_component(PHI, letter_alphabet("abc"), budget=2)


class TestMonitor:
    @pytest.mark.parametrize("m,nu,expected", [
        ((PSI, TRUE), A, ((PSI, TRUE), True)),
        ((PSI, TRUE), E, ((FB, PSI), False)),
        ((FB, PSI), B, ((PSI, TRUE), True)),
    ])
    def test_steps(self, m, nu, expected):
        (x1, x2), fired = monitor_step(PSI, m, nu)
        (e1, e2), efired = expected
        assert fired is efired and prop_equiv(x1, e1) and prop_equiv(x2, e2)

    @pytest.mark.parametrize("psi", ["a | F b", "F a", "a", "X a | b", "a U b"])
    def test_language_lemma(self, psi):
        """From (xi1, xi2) the monitor accepts exactly G psi & xi1 & xi2."""
        p = nnf(psi)
        starts = {(p, TRUE)}
        frontier = list(starts)
        alphabet = letter_alphabet("ab")
        while frontier:
            m = frontier.pop()
            for nu in alphabet:
                m2, _ = monitor_step(p, m, nu)
                if m2 not in starts:
                    starts.add(m2)
                    frontier.append(m2)
        for m in starts:
            target = mk_and(mk_globally(p), m[0], m[1])
            for w in enumerate_lassos(alphabet, 3, 3):
                assert monitor_accepts_lasso(p, m, w) == eval_lasso(target, w)


class TestAccStep:
    def test_examples(self):
        s = AccState((0,), TRUE, ((PSI, TRUE),))
        assert acc_step(s, (PSI,), A)[1] is True
        s = AccState((0,), FB, ((PSI, TRUE),))
        assert acc_step(s, (PSI,), A)[1] is False
        s = AccState((), TRUE, ())
        assert all(acc_step(s, (), nu)[1] for nu in letter_alphabet("abc"))

    def test_round_robin(self):
        fa, fb = nnf("F a"), nnf("F b")
        s = AccState((0, 1), TRUE, ((fa, TRUE), (fb, TRUE)))
        s, acc = acc_step(s, (fa, fb), A)
        assert not acc and s.counter == 2
        s, acc = acc_step(s, (fa, fb), B)
        assert acc and s.counter == 1
        s, acc = acc_step(s, (fa, fb), AB)
        assert acc and s.counter == 1

    def test_jump_pruned(self):
        all_g = (GPSI,)
        assert jump_target(nnf("c & G (a | F b)"), (), all_g, ()) is None
        assert jump_target(PHI, (0,), all_g, (PSI,)) is not None

    def test_labels(self):
        assert state_label(SINK) is not None
        s = AccState((0,), TRUE, ((FB, PSI),))
        assert prop_equiv(state_label(s, (PSI,)), nnf("G (a | F b) & F b & (a | F b)"))
        assert prop_equiv(state_label(AccState((), nnf("c"), ()), ()), nnf("c"))


# ---------------------------------------------------------------- Figure 4

def test_figure4():
    a, names = fig4()
    assert check_fig4(a, names) == []


def test_figure4_labels():
    a, names = fig4()
    assert prop_equiv(a.labels[names[FIG4_STATES["<c>"]]], nnf("c"))
    assert prop_equiv(a.labels[names[FIG4_STATES["<tt,(psi,tt)>"]]], nnf("G (a | F b) & (a | F b)"))
    for k in ("<tt,(Fb,psi)>", "<Fb,(psi,tt)>", "<Fb,(Fb,Fb)>"):
        assert prop_equiv(a.labels[names[FIG4_STATES[k]]], nnf("G (a | F b) & F b"))


# ---------------------------------------------------------------- properties

@pytest.mark.parametrize("text", ["F G a | F G b", "c | X G (a | F b)", "G (a -> F b)",
                                  "G F a & F G b", "a U (b & G c)", "X (a U b) | G F c"])
def test_label_correctness(text):
    a = translate(nnf(text))
    for q in range(a.num_states):
        for w in enumerate_lassos(a.alphabet, 2, 2):
            assert ldba_accepts_lasso_with_jumps(a, w, start=q) == eval_lasso(a.labels[q], w)


@pytest.mark.parametrize("text", ["F G a | F G b", "c | X G (a | F b)", "G (a -> X (b U c))"])
def test_label_shape(text):
    phi = nnf(text)
    all_g = frozenset(g_subformulas(phi))
    allowed = set(subformulas(phi))
    for g in all_g:
        for gset in [frozenset(), all_g, frozenset([g])]:
            allowed |= set(subformulas(substitute_gset(phi, gset, all_g)))
            for h in gset:
                allowed |= set(subformulas(mk_globally(substitute_gset(h.args[0], gset, all_g))))
    a = translate(phi)
    for q in range(a.num_states):
        for conj in canonicalize(a.labels[q]):
            for lit in conj:
                assert any(lit in subformulas(f) for f in allowed), lit


@given(nnf_formulas(max_leaves=5), lassos())
@settings(max_examples=150, deadline=None)
def test_soundness(f, w):
    a = eliminate_jumps(translate(f, aps=("a", "b")))
    assert validate_ldba(a) == []
    assert is_initial_deterministic(a)
    assert ldba_accepts_lasso(a, w) == eval_lasso(f, w)


def test_fgafgb_matches_figure1():
    a = eliminate_jumps(translate(nnf("F G a | F G b")))
    fig = fig1_ldba()
    to_set = {"a": A, "b": B}
    for w in enumerate_lassos(("a", "b"), 4, 4):
        w2 = LassoWord(tuple(to_set[x] for x in w.prefix), tuple(to_set[x] for x in w.period))
        assert ldba_accepts_lasso(a, w2) == ldba_accepts_lasso(fig, w)


def test_true_accepts_everything():
    a = eliminate_jumps(translate(TRUE))
    assert all(ldba_accepts_lasso(a, w) for w in enumerate_lassos(a.alphabet, 2, 2))


def test_cancel():
    tok = CancelToken()
    tok.cancel()
    with pytest.raises(Cancelled):
        translate(PHI, cancel=tok)


def test_base_sets_cover_labels():
    a = translate(PHI)
    for q in a.qd:
        assert len(a.base[q]) == len(canonicalize(a.labels[q]))

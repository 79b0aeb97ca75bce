"""LTL to limit-deterministic Buechi automata.

The initial component tracks ``af(phi, w)`` modulo propositional
equivalence.  For every set ``G`` of G-subformulas that the automaton
guesses to hold from some point on, an accepting component runs

* a monitor for ``phi'[G]`` (again via ``af``), and
* one monitor per ``G psi`` in ``G`` that checks ``G psi[G]``.

Acceptance of the product is generalized Buechi; a round-robin counter
turns it into plain Buechi so the result fits the determinization.  The
initial component enters the accepting components through epsilon-jumps.
Every state carries an LTL label whose language is the state's language.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .automata import Ldba
from .determinize import DEFAULT_BUDGET, BudgetExceeded, CancelToken, Cancelled
from .ltl import (
    FALSE,
    TRUE,
    Formula,
    Letter,
    af_step,
    atoms,
    canon,
    canonicalize,
    g_subformulas,
    iter_letters,
    mk_and,
    mk_globally,
    sorted_conjuncts,
    substitute_gset,
    to_text,
)
from .words import LassoWord

MonitorState = Tuple[Formula, Formula]


@dataclass(frozen=True)
class AccState:
    """State of the accepting component for the G-set ``gset`` (indices into
    the sorted G-subformulas)."""

    gset: Tuple[int, ...]
    first: Formula
    monitors: Tuple[MonitorState, ...]
    counter: int = 1


SINK = "sink"


def build_initial_component(phi: Formula, letters: Sequence[Letter],
                            budget: int = DEFAULT_BUDGET) -> Tuple[List[Formula], List[List[int]]]:
    """Reach(phi) modulo propositional equivalence and its transition table."""
    start = canon(phi)
    index = {start: 0}
    states = [start]
    succ: List[List[int]] = []
    queue = deque([start])
    while queue:
        f = queue.popleft()
        row = []
        for nu in letters:
            g = af_step(f, nu)
            j = index.get(g)
            if j is None:
                if len(states) >= budget:
                    raise BudgetExceeded(f"more than {budget} initial-component states")
                j = index[g] = len(states)
                states.append(g)
                queue.append(g)
            row.append(j)
        succ.append(row)
    return states, succ


def monitor_step(psi: Formula, m: MonitorState, nu: Letter) -> Tuple[MonitorState, bool]:
    """One step of the monitor for ``G psi`` from ``m = (xi1, xi2)``."""
    xi1, xi2 = m
    a1 = af_step(xi1, nu)
    a2 = canon(mk_and(af_step(xi2, nu), psi))
    if a1 is TRUE:
        return (a2, TRUE), True
    return (a1, a2), False


def acc_step(s: AccState, psis: Sequence[Formula], nu: Letter) -> Tuple[AccState, bool]:
    """Successor of ``s`` and whether the transition is accepting.
    ``psis[i]`` is the monitored formula of the ``i``-th monitor."""
    first = af_step(s.first, nu)
    stepped = [monitor_step(p, m, nu) for p, m in zip(psis, s.monitors)]
    monitors = tuple(m for m, _ in stepped)
    src_tt = s.first is TRUE
    n = len(psis)
    if n == 0:
        return AccState(s.gset, first, monitors, 1), src_tt
    fires = [src_tt and fired for _, fired in stepped]
    j, wrapped = s.counter, False
    for _ in range(n):
        if not fires[j - 1]:
            break
        j = j % n + 1
        if j == 1:
            wrapped = True
    return AccState(s.gset, first, monitors, j), wrapped


def state_label(s, psis: Sequence[Formula] = ()) -> Formula:
    """LTL formula whose language is the language of state ``s``."""
    if isinstance(s, Formula):
        return s
    if s == SINK:
        return FALSE
    parts = [s.first]
    for (x1, x2), p in zip(s.monitors, psis):
        parts += [x1, x2, mk_globally(p)]
    return canon(mk_and(*parts))


def _gset_formulas(all_g: Sequence[Formula], gset: Tuple[int, ...]) -> FrozenSet[Formula]:
    return frozenset(all_g[i] for i in gset)


def _subsets(n: int) -> Iterable[Tuple[int, ...]]:
    for k in range(n + 1):
        yield from combinations(range(n), k)


def jump_target(phi_state: Formula, gset: Tuple[int, ...], all_g: Sequence[Formula],
                psis: Sequence[Formula]) -> Optional[AccState]:
    """Entry state of the ``gset`` component from ``phi_state``; ``None``
    when the entry state's label is propositionally false."""
    g = _gset_formulas(all_g, gset)
    first = substitute_gset(phi_state, g, frozenset(all_g))
    s = AccState(gset, first, tuple((p, TRUE) for p in psis), 1)
    if canonicalize(state_label(s, psis)) == frozenset():
        return None
    return s


def _render_acc(s, all_g: Sequence[Formula]) -> str:
    if s == SINK:
        return "ff"
    gs = ", ".join(to_text(all_g[i]) for i in s.gset)
    mons = "".join(f", ({to_text(a)}, {to_text(b)})" for a, b in s.monitors)
    return f"<{to_text(s.first)}{mons} | {{{gs}}} #{s.counter}>"


def letter_alphabet(aps: Sequence[str]) -> Tuple[Letter, ...]:
    return tuple(iter_letters(aps))


def translate(phi: Formula, aps: Optional[Sequence[str]] = None,
              budget: int = DEFAULT_BUDGET, cancel: Optional[CancelToken] = None) -> Ldba:
    """LDBA with epsilon-jumps, per-state labels and base-index sets for the
    NNF formula ``phi``.  ``aps`` may extend the formula's propositions."""
    names_ap = tuple(sorted(set(atoms(phi)) | set(aps or ())))
    letters = letter_alphabet(names_ap)
    init_states, init_succ = build_initial_component(phi, letters, budget)
    all_g = tuple(sorted(g_subformulas(phi), key=lambda f: f.key))
    full = frozenset(all_g)
    n_init = len(init_states)

    psis_of: Dict[Tuple[int, ...], Tuple[Formula, ...]] = {}
    for gset in _subsets(len(all_g)):
        g = _gset_formulas(all_g, gset)
        psis_of[gset] = tuple(substitute_gset(all_g[i].args[0], g, full) for i in gset)

    acc_index: Dict[object, int] = {}
    acc_states: List[object] = []
    acc_succ: List[List[int]] = []
    acc_edges: set = set()
    queue: deque = deque()

    def intern(s) -> int:
        if s != SINK and canonicalize(state_label(s, psis_of[s.gset])) == frozenset():
            s = SINK
        j = acc_index.get(s)
        if j is None:
            if n_init + len(acc_states) >= budget:
                raise BudgetExceeded(f"more than {budget} automaton states")
            j = acc_index[s] = len(acc_states)
            acc_states.append(s)
            queue.append(s)
        return j

    jumps: List[Tuple[int, ...]] = []
    for f in init_states:
        targets = []
        for gset, psis in psis_of.items():
            s = jump_target(f, gset, all_g, psis)
            if s is not None:
                targets.append(intern(s))
        jumps.append(tuple(sorted(set(targets))))

    while queue:
        s = queue.popleft()
        if cancel is not None and cancel.cancelled:
            raise Cancelled()
        i = acc_index[s]
        row = []
        for x, nu in enumerate(letters):
            if s == SINK:
                row.append(i)
                continue
            t, accepting = acc_step(s, psis_of[s.gset], nu)
            j = intern(t)
            if accepting and acc_states[j] != SINK:
                acc_edges.add((i, x, j))
            row.append(j)
        acc_succ.append(row)

    off = n_init
    succ = [tuple((r,) for r in row) for row in init_succ]
    succ += [tuple((r + off,) for r in row) for row in acc_succ]
    labels = list(init_states)
    labels += [state_label(s, psis_of[s.gset]) if s != SINK else FALSE for s in acc_states]
    names = [to_text(f) for f in init_states] + [_render_acc(s, all_g) for s in acc_states]
    qd = frozenset(range(off, off + len(acc_states)))
    return Ldba(
        alphabet=letters,
        succ=tuple(succ),
        initial=0,
        qd=qd,
        accepting=frozenset((q + off, x, r + off) for q, x, r in acc_edges),
        jumps=tuple(tuple(p + off for p in js) for js in jumps) + ((),) * len(acc_states),
        labels=tuple(labels),
        names=tuple(names),
        aps=names_ap,
        base=label_bases(labels, qd),
        meta={"formula": to_text(phi), "g_subformulas": tuple(to_text(g) for g in all_g),
              "initial_component": n_init},
    )


def label_bases(labels: Sequence[Formula], qd: Iterable[int]) -> Tuple[FrozenSet[int], ...]:
    """Base-index sets: each label's canonical DNF conjuncts, interned in one
    table (deterministic-part states first, in id order)."""
    table: Dict[FrozenSet[Formula], int] = {}
    order = sorted(qd) + [q for q in range(len(labels)) if q not in set(qd)]
    out: Dict[int, FrozenSet[int]] = {}
    for q in order:
        ids = []
        for conj in sorted_conjuncts(canonicalize(labels[q])):
            ids.append(table.setdefault(frozenset(conj), len(table)))
        out[q] = frozenset(ids)
    return tuple(out[q] for q in range(len(labels)))


# --------------------------------------------------------------- monitors

def monitor_accepts_lasso(psi: Formula, start: MonitorState, w: LassoWord) -> bool:
    """Acceptance of the Buechi monitor for ``G psi`` run from ``start``:
    it must fire infinitely often.  A fired step that lands in a state with
    ``xi1`` false still counts, but such a run cannot fire again."""
    m = start
    for nu in w.prefix:
        m, _ = monitor_step(psi, m, nu)
    seen: Dict[Tuple[MonitorState, int], int] = {}
    fired_at: List[bool] = []
    i = 0
    nv = len(w.period)
    while (m, i % nv) not in seen:
        seen[(m, i % nv)] = i
        m, fired = monitor_step(psi, m, w.period[i % nv])
        fired_at.append(fired)
        i += 1
    return any(fired_at[seen[(m, i % nv)]:])

"""LDBA to DPA via ranking states ``(s, t)``.

``s`` is the set of reachable nondeterministic-part states, ``t`` the
reachable deterministic-part states ordered by the smallest run prefix
reaching them.  The color of a step reports the smallest index whose run
either merged into a smaller run (odd) or took an accepting transition
(even).  With a redundancy oracle, entries of ``t`` whose language is
covered by smaller entries are dropped, which bounds ``|t|`` by the size of
the oracle's base plus one.
"""
from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from . import kernels
from .automata import Dpa, Ldba
from .ltl import FALSE, OTHER, PURE_EVENTUAL, XA_SAFETY, canonicalize, classify_fragment

RankingState = Tuple[Tuple[int, ...], Tuple[int, ...]]

DEFAULT_BUDGET = 10 ** 6


class BudgetExceeded(RuntimeError):
    pass


class Cancelled(RuntimeError):
    pass


class CancelToken:
    """Cooperative cancellation shared between a worker and a controller.
    The worker calls :meth:`check` with its explored-state count."""

    def __init__(self) -> None:
        self._event = threading.Event()
        self.limit: Optional[int] = None
        self.progress = 0

    def cancel(self) -> None:
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self, explored: int) -> None:
        self.progress = explored
        limit = self.limit
        if self._event.is_set() or (limit is not None and explored > limit):
            self._event.set()
            raise Cancelled()


# ------------------------------------------------------------------- oracles

@dataclass(frozen=True)
class RedundancyOracle:
    """Base-index sets per deterministic-part state.  A state is redundant
    behind a sequence of states when its index set is contained in the union
    of theirs.  Soundness requires that each state's language is the union
    of the base languages it indexes."""

    base: Mapping[int, FrozenSet[int]]
    size: int

    def mask(self, q: int) -> int:
        m = 0
        for i in self.base[q]:
            m |= 1 << i
        return m

    def is_redundant(self, q: int, smaller: Sequence[int]) -> bool:
        covered = set()
        for p in smaller:
            covered |= self.base[p]
        return self.base[q] <= covered


def syntactic_oracle(a: Ldba) -> RedundancyOracle:
    """Oracle from state labels: the base is the set of distinct conjuncts of
    the labels' canonical DNFs over the deterministic part."""
    if a.base is not None:
        base = {q: a.base[q] for q in a.qd}
        return RedundancyOracle(base, len(set().union(*base.values())) if base else 0)
    if a.labels is None:
        raise ValueError("syntactic oracle needs per-state labels")
    table: Dict[FrozenSet, int] = {}
    base: Dict[int, FrozenSet[int]] = {}
    for q in sorted(a.qd):
        label = a.labels[q]
        if label is None:
            raise ValueError(f"state {a.name(q)} has no label")
        ids = []
        for conj in sorted(canonicalize(label), key=lambda c: sorted(g.key for g in c)):
            ids.append(table.setdefault(conj, len(table)))
        base[q] = frozenset(ids)
    return RedundancyOracle(base, len(table))


def explicit_oracle(base: Mapping[int, Sequence[int]]) -> RedundancyOracle:
    frozen = {q: frozenset(v) for q, v in base.items()}
    ids = set().union(*frozen.values()) if frozen else set()
    return RedundancyOracle(frozen, len(ids))


# ------------------------------------------------------------------ ordering

def choose_ord(a: Ldba) -> Dict[int, int]:
    """Ordering heuristic: states labelled with pure-eventual formulas first,
    then the rest, then states labelled with (X, a)-safety formulas; ties by
    state id.  A dead state (label ff, i.e. F ff) counts as pure-eventual and
    leads its group.  Unlabelled automata use state-id order."""
    qd = sorted(a.qd)
    if a.labels is None:
        return {q: i + 1 for i, q in enumerate(qd)}
    group = {PURE_EVENTUAL: 0, OTHER: 1, XA_SAFETY: 2}

    def key(q: int):
        label = a.labels[q]
        if label is None:
            return (1, 1, q)
        if label is FALSE:
            return (0, 0, q)
        return (group[classify_fragment(label)], 1, q)

    return {q: i + 1 for i, q in enumerate(sorted(qd, key=key))}


# ------------------------------------------------------------------ stepping

def make_kernel(a: Ldba, ordering: Mapping[int, int], oracle: Optional[RedundancyOracle] = None,
                keep_smallest: bool = False, redirect_as_merge: bool = True,
                kernel_cls=None):
    if a.jumps is not None:
        raise ValueError("eliminate epsilon-jumps before determinizing")
    n, L = a.num_states, len(a.alphabet)
    nd_succ, d_succ, d_acc = [], [], []
    for q in range(n):
        for x in range(L):
            targets = a.succ[q][x]
            if q in a.qd:
                nd_succ.append(())
                d_succ.append(targets[0])
                d_acc.append(1 if (q, x, targets[0]) in a.accepting else 0)
            else:
                nd_succ.append(targets)
                d_succ.append(-1)
                d_acc.append(0)
    in_qd = [1 if q in a.qd else 0 for q in range(n)]
    ord_rank = [ordering.get(q, 0) for q in range(n)]
    base = None
    if oracle is not None:
        base = [oracle.mask(q) if q in a.qd else 0 for q in range(n)]
    cls = kernel_cls or kernels.RankingKernel
    return cls(n, L, nd_succ, d_succ, d_acc, in_qd, ord_rank, len(a.qd), base,
               keep_smallest, redirect_as_merge)


def initial_ranking(a: Ldba) -> RankingState:
    return ((a.initial,), ())


def ranking_step(a: Ldba, ordering: Mapping[int, int], state: RankingState, letter,
                 oracle: Optional[RedundancyOracle] = None, keep_smallest: bool = False,
                 redirect_as_merge: bool = True) -> Tuple[RankingState, int]:
    """Successor ranking state and color for one letter (a letter value, not
    an index)."""
    x = a.letter_index[letter]
    k = make_kernel(a, ordering, oracle, keep_smallest, redirect_as_merge)
    s2, t2, c = k.step(state[0], state[1], x)
    return (s2, t2), c


def render_ranking(a: Ldba, state: RankingState) -> str:
    s = "{" + ",".join(a.name(q) for q in state[0]) + "}"
    return s + ",[" + "<".join(a.name(q) for q in state[1]) + "]"


@dataclass
class Construction:
    """A determinization result with the ranking state behind each DPA state."""

    dpa: Dpa
    rankings: List[RankingState]
    max_t: int
    max_s: int


def construct(a: Ldba, ordering: Optional[Mapping[int, int]] = None,
              oracle: Optional[RedundancyOracle] = None, keep_smallest: bool = False,
              redirect_as_merge: bool = True, budget: int = DEFAULT_BUDGET,
              cancel: Optional[CancelToken] = None, kernel_cls=None) -> Construction:
    """Breadth-first exploration of the reachable ranking states."""
    if ordering is None:
        ordering = choose_ord(a)
    k = make_kernel(a, ordering, oracle, keep_smallest, redirect_as_merge, kernel_cls)
    L = len(a.alphabet)
    init = initial_ranking(a)
    index: Dict[RankingState, int] = {init: 0}
    states: List[RankingState] = [init]
    succ: List[List[int]] = []
    color: List[List[int]] = []
    queue = deque([init])
    step = k.step
    while queue:
        st = queue.popleft()
        if cancel is not None:
            cancel.check(len(states))
        srow, crow = [], []
        s, t = st
        for x in range(L):
            s2, t2, c = step(s, t, x)
            nxt = (s2, t2)
            j = index.get(nxt)
            if j is None:
                if len(states) >= budget:
                    raise BudgetExceeded(f"more than {budget} ranking states")
                j = len(states)
                index[nxt] = j
                states.append(nxt)
                queue.append(nxt)
            srow.append(j)
            crow.append(c)
        succ.append(srow)
        color.append(crow)
    dpa = Dpa(alphabet=a.alphabet, succ=tuple(map(tuple, succ)), color=tuple(map(tuple, color)),
              initial=0, max_color=2 * len(a.qd) + 1,
              names=tuple(render_ranking(a, st) for st in states), aps=a.aps)
    return Construction(dpa, states, max((len(t) for _, t in states), default=0),
                        max((len(s) for s, _ in states), default=0))


def construct_dpa(a: Ldba, ordering: Optional[Mapping[int, int]] = None,
                  budget: int = DEFAULT_BUDGET) -> Dpa:
    return construct(a, ordering, budget=budget).dpa


def construct_reduced_dpa(a: Ldba, ordering: Optional[Mapping[int, int]] = None,
                          oracle: Optional[RedundancyOracle] = None, keep_smallest: bool = False,
                          budget: int = DEFAULT_BUDGET) -> Dpa:
    if oracle is None:
        oracle = syntactic_oracle(a)
    return construct(a, ordering, oracle, keep_smallest, budget=budget).dpa


# -------------------------------------------------------------------- bounds

def state_bound(a: Ldba) -> int:
    """Upper bound on reachable ranking states: subsets of the
    nondeterministic part times ordered subsets of the deterministic part."""
    nd, n = len(a.qd), a.num_states - len(a.qd)
    arrangements = sum(math.factorial(nd) // math.factorial(nd - i) for i in range(nd + 1))
    return 2 ** n * arrangements


@dataclass
class WidthReport:
    max_t: int
    base_m: int
    holds: Optional[bool]

    @property
    def bound(self) -> int:
        return self.base_m + 1

    def __str__(self) -> str:
        if self.holds is None:
            return f"max |t| = {self.max_t}; width check skipped (no reduction)"
        verdict = "holds" if self.holds else "VIOLATED"
        return (f"max |t| = {self.max_t}, base size m = {self.base_m}, "
                f"bound m+1 = {self.bound}: {verdict}; "
                f"an equivalent DPA with 2^O(m^2) states exists")


def width_check(oracle: Optional[RedundancyOracle], result: Construction) -> WidthReport:
    if oracle is None:
        return WidthReport(result.max_t, 0, None)
    return WidthReport(result.max_t, oracle.size, result.max_t <= oracle.size + 1)

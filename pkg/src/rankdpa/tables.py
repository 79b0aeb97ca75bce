"""Exhaustive acceptance tables over all lassos ``u v^omega`` with
``|u| <= P`` and ``1 <= |v| <= V``.

Checking tens of millions of lassos one by one is far too slow in Python,
so each acceptor is evaluated in two halves:

* per period ``v``, a vector over "states at the start of the loop"
  (a DPA state, an LDBA state, or the truth-type of all subformulas), and
* per prefix ``u``, the state reached after reading ``u`` (or for formulas,
  the map from the type after ``u`` to the type before it).

Words are numbered in base ``L`` with the first letter as the least
significant digit, so ``u[1:]`` and ``u[:-1]`` of a word are arithmetic
functions of its number.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .automata import Dpa, Ldba
from .ltl import AND, AP, FF, FIN, GLOB, NAP, NEXT, NOT, OR, TT, UNTIL, Formula, eval_positions, subformulas
from .rundag import initial_level, next_level
from .words import LassoWord


@dataclass(frozen=True)
class LassoSpace:
    """Numbering of prefixes and periods over ``n_letters`` letters."""

    n_letters: int
    max_prefix: int
    max_period: int

    def _offsets(self, lo: int, hi: int) -> List[int]:
        out, total = [], 0
        for k in range(lo, hi + 1):
            out.append(total)
            total += self.n_letters ** k
        out.append(total)
        return out

    @property
    def prefix_offsets(self) -> List[int]:
        return self._offsets(0, self.max_prefix)

    @property
    def period_offsets(self) -> List[int]:
        return self._offsets(1, self.max_period)

    @property
    def n_prefixes(self) -> int:
        return self.prefix_offsets[-1]

    @property
    def n_periods(self) -> int:
        return self.period_offsets[-1]

    @property
    def size(self) -> int:
        return self.n_prefixes * self.n_periods

    def digits(self, k: int) -> np.ndarray:
        """``[L^k, k]`` array: letter ``i`` of every word of length ``k``."""
        codes = np.arange(self.n_letters ** k, dtype=np.int64)
        return np.stack([(codes // self.n_letters ** i) % self.n_letters for i in range(k)],
                        axis=1) if k else np.zeros((1, 0), dtype=np.int64)

    def _word(self, idx: int, lo: int, offsets: List[int]) -> Tuple[int, ...]:
        for j in range(len(offsets) - 1):
            if offsets[j] <= idx < offsets[j + 1]:
                k = lo + j
                code = idx - offsets[j]
                return tuple((code // self.n_letters ** i) % self.n_letters for i in range(k))
        raise IndexError(idx)

    def lasso(self, alphabet: Sequence[Hashable], u_idx: int, v_idx: int) -> LassoWord:
        u = self._word(u_idx, 0, self.prefix_offsets)
        v = self._word(v_idx, 1, self.period_offsets)
        return LassoWord(tuple(alphabet[x] for x in u), tuple(alphabet[x] for x in v))


# ------------------------------------------------------------ deterministic

class StepTable:
    """Transition and color arrays of a complete deterministic colored
    automaton.  Subclasses may grow the arrays on demand."""

    def __init__(self, succ: np.ndarray, color: np.ndarray, initial: int):
        self.succ = succ
        self.color = color
        self.initial = initial

    def ensure(self, states: np.ndarray) -> None:
        pass

    def step(self, states: np.ndarray, letters: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        self.ensure(states)
        return self.succ[states, letters], self.color[states, letters]


class LazyLevelTable(StepTable):
    """The run DAG's level-to-level step, expanded only where lassos go
    (built with the run-DAG reference code, not the kernels)."""

    def __init__(self, a: Ldba, ordering: Mapping[int, int], oracle=None, keep_smallest: bool = False,
                 redirect_as_merge: bool = True, budget: int = 10 ** 6):
        self.a, self.ordering, self.oracle = a, ordering, oracle
        self.kw = dict(keep_smallest=keep_smallest, redirect_as_merge=redirect_as_merge)
        self.budget = budget
        self.L = len(a.alphabet)
        start = initial_level(a)
        self.levels = [start]
        self.index = {(start.nondet, start.det): 0}
        super().__init__(np.full((64, self.L), -1, dtype=np.int64),
                         np.zeros((64, self.L), dtype=np.int64), 0)

    def _add(self, lvl) -> int:
        k = (lvl.nondet, lvl.det)
        j = self.index.get(k)
        if j is None:
            if len(self.levels) >= self.budget:
                raise RuntimeError("level automaton budget exceeded")
            j = self.index[k] = len(self.levels)
            self.levels.append(lvl)
            if j >= self.succ.shape[0]:
                grow = self.succ.shape[0]
                self.succ = np.vstack([self.succ, np.full((grow, self.L), -1, dtype=np.int64)])
                self.color = np.vstack([self.color, np.zeros((grow, self.L), dtype=np.int64)])
        return j

    def ensure(self, states: np.ndarray) -> None:
        todo = np.unique(states[self.succ[states, 0] < 0])
        for q in todo.tolist():
            for x in range(self.L):
                nxt, info = next_level(self.a, self.ordering, self.levels[q], x, self.oracle, **self.kw)
                j = self._add(nxt)
                self.succ[q, x] = j
                self.color[q, x] = info.color


def dpa_steps(d: Dpa) -> StepTable:
    return StepTable(np.asarray(d.succ, dtype=np.int64), np.asarray(d.color, dtype=np.int64),
                     d.initial)


def prefix_states(space: LassoSpace, table: StepTable) -> np.ndarray:
    """State after every prefix."""
    out = [np.array([table.initial], dtype=np.int64)]
    L = space.n_letters
    for k in range(1, space.max_prefix + 1):
        codes = np.arange(L ** k, dtype=np.int64)
        parent = codes % (L ** (k - 1))  # u[:-1]
        last = codes // (L ** (k - 1))   # u[-1]
        out.append(table.step(out[-1][parent], last)[0])
    return np.concatenate(out)


def period_summaries(space: LassoSpace, table: StepTable, starts: np.ndarray) -> np.ndarray:
    """``[n_periods, len(starts)]``: minimal color seen infinitely often on
    ``v^omega`` when the loop is entered in each start state.  The sequence
    of states at period boundaries is searched for its cycle with Brent's
    method, vectorized over all (period, start) pairs."""
    big = np.iinfo(np.int64).max
    parts = []
    for k in range(1, space.max_period + 1):
        dig = space.digits(k)

        def walk(pos: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            m = np.full(pos.shape, big, dtype=np.int64)
            for i in range(k):
                pos, c = table.step(pos, dig[:, i:i + 1])
                m = np.minimum(m, c)
            return pos, m

        start = np.broadcast_to(starts, (dig.shape[0], starts.size)).copy()
        tort = start
        hare, _ = walk(start)
        power = np.ones(start.shape, dtype=np.int64)
        lam = np.ones(start.shape, dtype=np.int64)
        active = tort != hare
        while active.any():
            reset = active & (power == lam)
            tort = np.where(reset, hare, tort)
            power = np.where(reset, power * 2, power)
            lam = np.where(reset, 0, lam)
            stepped, _ = walk(hare)
            hare = np.where(active, stepped, hare)
            lam = lam + active
            active = tort != hare
        # hare is on the cycle, whose length is lam
        best = np.full(start.shape, big, dtype=np.int64)
        cur = hare
        for i in range(int(lam.max())):
            cur, m = walk(cur)
            best = np.where(i < lam, np.minimum(best, m), best)
        parts.append(best)
    return np.concatenate(parts)


def step_table_acceptance(space: LassoSpace, table: StepTable) -> np.ndarray:
    start = prefix_states(space, table)
    uniq, inv = np.unique(start, return_inverse=True)
    summ = period_summaries(space, table, uniq)
    return (summ[:, inv] % 2 == 0).T


def dpa_table(space: LassoSpace, d: Dpa) -> np.ndarray:
    """``[n_prefixes, n_periods]`` acceptance table of a DPA."""
    return step_table_acceptance(space, dpa_steps(d))


# ---------------------------------------------------------------- run DAG

def level_automaton(a: Ldba, ordering: Mapping[int, int], oracle=None, keep_smallest: bool = False,
                    redirect_as_merge: bool = True, budget: int = 10 ** 6) -> Dpa:
    """The full run-DAG level automaton as a DPA."""
    t = LazyLevelTable(a, ordering, oracle, keep_smallest, redirect_as_merge, budget)
    i = 0
    while i < len(t.levels):
        t.ensure(np.array([i]))
        i += 1
    n = len(t.levels)
    return Dpa(alphabet=a.alphabet, succ=tuple(map(tuple, t.succ[:n].tolist())),
               color=tuple(map(tuple, t.color[:n].tolist())), initial=0,
               max_color=2 * len(a.qd) + 1)


def rundag_table(space: LassoSpace, a: Ldba, ordering: Mapping[int, int], oracle=None,
                 **kw) -> np.ndarray:
    """Parity of the run-DAG color summary for every lasso."""
    return step_table_acceptance(space, LazyLevelTable(a, ordering, oracle, **kw))


# -------------------------------------------------------------------- LDBA

def _bool_mm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.matmul(x.astype(np.float32), y.astype(np.float32)) > 0.5


def ldba_period_starts(a: Ldba, space: LassoSpace, chunk: int = 1024) -> np.ndarray:
    """``[n_periods, N]``: whether ``v^omega`` is accepted from each state.

    Per period, ``M`` relates the states before and after one pass over
    ``v`` and ``A`` does the same for passes that take an accepting edge.
    A state is good when it reaches some ``r`` with ``r -A-> s -M*-> r``."""
    n, L = a.num_states, len(a.alphabet)
    step = np.zeros((L, n, n), dtype=bool)
    acc = np.zeros((L, n, n), dtype=bool)
    for q, x, r in a.edges():
        step[x, q, r] = True
        if (q, x, r) in a.accepting:
            acc[x, q, r] = True
    eye = np.eye(n, dtype=bool)
    parts = []
    for k in range(1, space.max_period + 1):
        dig = space.digits(k)
        for lo in range(0, dig.shape[0], chunk):
            d = dig[lo:lo + chunk]
            m = np.broadcast_to(eye, (d.shape[0], n, n)).copy()
            am = np.zeros_like(m)
            for i in range(k):
                sx, ax = step[d[:, i]], acc[d[:, i]]
                am = _bool_mm(am, sx) | _bool_mm(m, ax)
                m = _bool_mm(m, sx)
            star = m | eye
            span = 1
            while span < n:
                star = star | _bool_mm(star, star)
                span *= 2
            # r lies on an accepting cycle: r -A-> s -M*-> r
            cyc = np.einsum("brs,bsr->br", am.astype(np.float32), star.astype(np.float32)) > 0.5
            good = _bool_mm(star, cyc[:, :, None])[:, :, 0]
            parts.append(good)
    return np.concatenate(parts)


def ldba_table(space: LassoSpace, a: Ldba) -> np.ndarray:
    """Acceptance table of a jump-free LDBA: the states reachable after
    ``u`` meet the states from which ``v^omega`` is accepted."""
    n, L = a.num_states, len(a.alphabet)
    step = np.zeros((L, n, n), dtype=bool)
    for q, x, r in a.edges():
        step[x, q, r] = True
    reach = [np.zeros((1, n), dtype=bool)]
    reach[0][0, a.initial] = True
    for k in range(1, space.max_prefix + 1):
        codes = np.arange(L ** k, dtype=np.int64)
        parent = reach[-1][codes % (L ** (k - 1))]
        last = codes // (L ** (k - 1))
        nxt = np.zeros((codes.size, n), dtype=bool)
        for x in range(L):
            sel = last == x
            nxt[sel] = _bool_mm(parent[sel], step[x])
        reach.append(nxt)
    reach_all = np.concatenate(reach)
    good = ldba_period_starts(a, space)
    return _bool_mm(reach_all, good.T)


# ---------------------------------------------------------------- formulas

class _TypeSystem:
    """Truth vectors of all subformulas at one position, and how reading a
    letter in front of a suffix transforms them."""

    def __init__(self, f: Formula, alphabet: Sequence[frozenset]):
        self.subs = subformulas(f)
        self.pos = {g: i for i, g in enumerate(self.subs)}
        self.alphabet = alphabet
        self.types: Dict[Tuple[bool, ...], int] = {}
        self.vecs: List[Tuple[bool, ...]] = []
        self.trans: Dict[Tuple[int, int], int] = {}

    def intern(self, vec: Tuple[bool, ...]) -> int:
        t = self.types.get(vec)
        if t is None:
            t = self.types[vec] = len(self.vecs)
            self.vecs.append(vec)
        return t

    def periodic(self, v: Sequence[frozenset]) -> int:
        val = eval_positions(self.subs[-1], list(v), 0)
        return self.intern(tuple(val[g][0] for g in self.subs))

    def before(self, x: int, t: int) -> int:
        key = (x, t)
        r = self.trans.get(key)
        if r is not None:
            return r
        letter = self.alphabet[x]
        nxt = self.vecs[t]
        cur: List[bool] = []
        pos = self.pos
        for g in self.subs:
            op = g.op
            if op == TT:
                b = True
            elif op == FF:
                b = False
            elif op == AP:
                b = g.name in letter
            elif op == NAP:
                b = g.name not in letter
            elif op == NOT:
                b = not cur[pos[g.args[0]]]
            elif op == AND:
                b = all(cur[pos[c]] for c in g.args)
            elif op == OR:
                b = any(cur[pos[c]] for c in g.args)
            elif op == NEXT:
                b = nxt[pos[g.args[0]]]
            elif op == FIN:
                b = cur[pos[g.args[0]]] or nxt[pos[g]]
            elif op == GLOB:
                b = cur[pos[g.args[0]]] and nxt[pos[g]]
            elif op == UNTIL:
                b = cur[pos[g.args[1]]] or (cur[pos[g.args[0]]] and nxt[pos[g]])
            else:
                raise ValueError(op)
            cur.append(b)
        r = self.trans[key] = self.intern(tuple(cur))
        return r

    def close(self) -> np.ndarray:
        """Transition array ``[L, K]`` over the closure of known types."""
        L = len(self.alphabet)
        t = 0
        while t < len(self.vecs):
            for x in range(L):
                self.before(x, t)
            t += 1
        arr = np.zeros((L, len(self.vecs)), dtype=np.int64)
        for (x, s), r in self.trans.items():
            arr[x, s] = r
        return arr


def eval_table(space: LassoSpace, f: Formula, alphabet: Sequence[frozenset]) -> np.ndarray:
    """Truth of ``f`` on every lasso (letters are sets of atoms)."""
    ts = _TypeSystem(f, alphabet)
    v_types = np.array([ts.periodic(space.lasso(alphabet, 0, v).period)
                        for v in range(space.n_periods)], dtype=np.int64)
    trans = ts.close()
    K = len(ts.vecs)
    L = space.n_letters
    levels = [np.arange(K, dtype=np.int64)[None, :]]
    for k in range(1, space.max_prefix + 1):
        codes = np.arange(L ** k, dtype=np.int64)
        first = codes % L      # u[0]
        rest = codes // L      # u[1:]
        levels.append(trans[first[:, None], levels[-1][rest]])
    before = np.concatenate(levels)  # [n_prefixes, K]
    truth = np.array([vec[-1] for vec in ts.vecs], dtype=bool)
    return truth[before[:, v_types]]


# ------------------------------------------------------------- comparison

def first_mismatch(space: LassoSpace, alphabet, x: np.ndarray, y: np.ndarray) -> Optional[LassoWord]:
    diff = np.argwhere(x != y)
    if diff.size == 0:
        return None
    u, v = diff[0]
    return space.lasso(alphabet, int(u), int(v))

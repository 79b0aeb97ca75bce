"""Limit-deterministic Buechi and deterministic parity automata.

States are dense integers ``0..n-1`` and letters are referred to by their
position in ``alphabet``.  Acceptance is transition-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple

from .words import LassoWord

Edge = Tuple[int, int, int]  # (source, letter index, target)


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Ldba:
    """A Buechi automaton with a designated deterministic trap ``qd``.

    ``succ[q][a]`` is the sorted tuple of ``a``-successors of ``q``.
    ``jumps[q]`` (optional) lists epsilon-targets of ``q``; call
    :func:`eliminate_jumps` before using the automaton anywhere else.
    ``labels`` / ``base`` are per-state LTL labels and base-index sets
    produced by the LTL translation.
    """

    alphabet: Tuple[Hashable, ...]
    succ: Tuple[Tuple[Tuple[int, ...], ...], ...]
    initial: int
    qd: FrozenSet[int]
    accepting: FrozenSet[Edge]
    jumps: Optional[Tuple[Tuple[int, ...], ...]] = None
    labels: Optional[tuple] = None
    names: Optional[Tuple[str, ...]] = None
    aps: Optional[Tuple[str, ...]] = None
    base: Optional[Tuple[FrozenSet[int], ...]] = None
    meta: Mapping[str, object] = field(default_factory=dict)

    @property
    def num_states(self) -> int:
        return len(self.succ)

    @cached_property
    def letter_index(self) -> Dict[Hashable, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def name(self, q: int) -> str:
        return self.names[q] if self.names else str(q)

    def edges(self):
        for q, row in enumerate(self.succ):
            for a, targets in enumerate(row):
                for r in targets:
                    yield q, a, r

    @property
    def nondet_states(self) -> List[int]:
        return [q for q in range(self.num_states) if q not in self.qd]


@dataclass(frozen=True, eq=False)
class Dpa:
    """Deterministic, complete parity automaton with min-even acceptance;
    ``color[q][a]`` lies in ``1..max_color``."""

    alphabet: Tuple[Hashable, ...]
    succ: Tuple[Tuple[int, ...], ...]
    color: Tuple[Tuple[int, ...], ...]
    initial: int
    max_color: int
    names: Optional[Tuple[str, ...]] = None
    aps: Optional[Tuple[str, ...]] = None

    @property
    def num_states(self) -> int:
        return len(self.succ)

    @cached_property
    def letter_index(self) -> Dict[Hashable, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def used_colors(self) -> List[int]:
        return sorted({c for row in self.color for c in row})


# ------------------------------------------------------------------ orderings

def make_ord(ldba: Ldba, sequence: Optional[Sequence[int]] = None) -> Dict[int, int]:
    """Ordering of ``qd``: maps each accepting-part state to its rank
    ``1..|qd|`` (states outside ``qd`` are implicitly +infinity).  Without a
    sequence the states are ranked by id."""
    seq = sorted(ldba.qd) if sequence is None else list(sequence)
    if sorted(seq) != sorted(ldba.qd) or len(set(seq)) != len(seq):
        raise ValueError("ordering must enumerate the deterministic part exactly once")
    return {q: i + 1 for i, q in enumerate(seq)}


# ----------------------------------------------------------------- validation

def validate_ldba(a: Ldba) -> List[str]:
    """Diagnostics for every violated LDBA well-formedness condition."""
    out: List[str] = []
    n = a.num_states
    for (q, x, r) in sorted(a.accepting):
        if q not in a.qd or r not in a.qd:
            out.append(f"accepting transition {a.name(q)} -{a.alphabet[x]}-> {a.name(r)} "
                       "is not inside the deterministic part")
        elif r not in a.succ[q][x]:
            out.append(f"accepting transition {a.name(q)} -{a.alphabet[x]}-> {a.name(r)} "
                       "is not a transition")
    for q in range(n):
        for x, targets in enumerate(a.succ[q]):
            if not targets:
                out.append(f"transition relation not total at {a.name(q)} on {a.alphabet[x]}")
            if q in a.qd:
                if len(targets) > 1:
                    out.append(f"nondeterminism in the deterministic part: {a.name(q)} "
                               f"has {len(targets)} successors on {a.alphabet[x]}")
                for r in targets:
                    if r not in a.qd:
                        out.append(f"deterministic part is not a trap: {a.name(q)} "
                                   f"-{a.alphabet[x]}-> {a.name(r)} leaves it")
        if len(a.succ[q]) != len(a.alphabet):
            out.append(f"state {a.name(q)} has {len(a.succ[q])} letter rows, "
                       f"expected {len(a.alphabet)}")
    if a.initial in a.qd:
        out.append(f"initial state {a.name(a.initial)} lies in the deterministic part")
    if a.jumps is not None:
        for q, targets in enumerate(a.jumps):
            for p in targets:
                if q in a.qd:
                    out.append(f"epsilon jump from deterministic state {a.name(q)}")
                if p not in a.qd:
                    out.append(f"epsilon jump {a.name(q)} -> {a.name(p)} does not enter "
                               "the deterministic part")
    return out


def is_initial_deterministic(a: Ldba) -> bool:
    for q in a.nondet_states:
        for targets in a.succ[q]:
            if sum(1 for r in targets if r not in a.qd) > 1:
                return False
    return True


def eliminate_jumps(a: Ldba) -> Ldba:
    """Fold epsilon-jumps into letter transitions: a jump ``q -> p`` adds
    ``q -a-> delta(p, a)`` for every letter."""
    if a.jumps is None:
        return a
    succ = [list(map(set, row)) for row in a.succ]
    for q, targets in enumerate(a.jumps):
        if not targets:
            continue
        for p in targets:
            if p not in a.qd:
                raise ValueError(f"jump target {a.name(p)} outside the deterministic part")
            for x in range(len(a.alphabet)):
                succ[q][x].update(a.succ[p][x])
    frozen = tuple(tuple(tuple(sorted(s)) for s in row) for row in succ)
    return replace(a, succ=frozen, jumps=None)


# -------------------------------------------------------- acceptance oracles

def _letters(alphabet_index: Mapping[Hashable, int], w: LassoWord) -> List[int]:
    out = []
    for x in list(w.prefix) + list(w.period):
        try:
            out.append(alphabet_index[x])
        except KeyError:
            raise AlphabetError(f"letter {x!r} not in alphabet") from None
    return out


def _has_accepting_cycle(start: int, adj: Dict[int, List[Tuple[int, bool]]]) -> bool:
    """Is there a cycle with an accepting edge reachable from ``start``?
    ``adj`` maps every node to its (target, accepting) pairs."""
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    comp: Dict[int, int] = {}
    stack: List[int] = []
    on_stack = set()
    counter = 0
    ncomp = 0
    work = [(start, 0)]
    index[start] = low[start] = counter
    counter += 1
    stack.append(start)
    on_stack.add(start)
    while work:
        v, i = work[-1]
        edges = adj.get(v, ())
        if i < len(edges):
            work[-1] = (v, i + 1)
            u = edges[i][0]
            if u not in index:
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                on_stack.add(u)
                work.append((u, 0))
            elif u in on_stack:
                low[v] = min(low[v], index[u])
            continue
        work.pop()
        if work:
            p = work[-1][0]
            low[p] = min(low[p], low[v])
        if low[v] == index[v]:
            while True:
                u = stack.pop()
                on_stack.discard(u)
                comp[u] = ncomp
                if u == v:
                    break
            ncomp += 1
    for v, edges in adj.items():
        if v not in comp:
            continue
        for u, acc in edges:
            if acc and comp.get(u) == comp[v]:
                return True
    return False


def _product(a: Ldba, letters: List[int], loop: int, start: int, use_jumps: bool):
    n = len(letters)
    adj: Dict[int, List[Tuple[int, bool]]] = {}
    root = start * n
    todo = [root]
    adj[root] = []
    while todo:
        node = todo.pop()
        q, pos = divmod(node, n)
        x = letters[pos]
        nxt = pos + 1 if pos + 1 < n else loop
        out = []
        for r in a.succ[q][x]:
            out.append((r * n + nxt, (q, x, r) in a.accepting))
        if use_jumps and a.jumps is not None and q not in a.qd:
            for p in a.jumps[q]:
                out.append((p * n + pos, False))
        adj[node] = out
        for m, _ in out:
            if m not in adj:
                adj[m] = []
                todo.append(m)
    return root, adj


def ldba_accepts_lasso(a: Ldba, w: LassoWord, start: Optional[int] = None) -> bool:
    """Exact acceptance of ``w`` by the (jump-free) Buechi automaton ``a``
    from ``start`` (default: the initial state), by searching the product of
    the automaton with the lasso positions for an accepting cycle."""
    letters = _letters(a.letter_index, w)
    q0 = a.initial if start is None else start
    root, adj = _product(a, letters, len(w.prefix), q0, use_jumps=False)
    return _has_accepting_cycle(root, adj)


def ldba_accepts_lasso_with_jumps(a: Ldba, w: LassoWord, start: Optional[int] = None) -> bool:
    """Reference acceptance for automata that still carry epsilon-jumps: a
    jump is a free move taken before reading a letter."""
    letters = _letters(a.letter_index, w)
    q0 = a.initial if start is None else start
    root, adj = _product(a, letters, len(w.prefix), q0, use_jumps=True)
    return _has_accepting_cycle(root, adj)


def dpa_run_colors(d: Dpa, w: LassoWord, steps: int) -> List[int]:
    q = d.initial
    out = []
    for i in range(steps):
        try:
            x = d.letter_index[w.letter(i)]
        except KeyError:
            raise AlphabetError(f"letter {w.letter(i)!r} not in alphabet") from None
        out.append(d.color[q][x])
        q = d.succ[q][x]
    return out


def dpa_lasso_summary(d: Dpa, w: LassoWord) -> int:
    """Minimal color seen infinitely often on the run over ``w``."""
    letters = _letters(d.letter_index, w)
    u, v = letters[:len(w.prefix)], letters[len(w.prefix):]
    q = d.initial
    for x in u:
        q = d.succ[q][x]
    seen: Dict[int, int] = {}
    mins: List[int] = []
    while q not in seen:
        seen[q] = len(mins)
        m = d.max_color + 1
        for x in v:
            m = min(m, d.color[q][x])
            q = d.succ[q][x]
        mins.append(m)
    return min(mins[seen[q]:])


def dpa_accepts_lasso(d: Dpa, w: LassoWord) -> bool:
    return dpa_lasso_summary(d, w) % 2 == 0


# --------------------------------------------------------- parity operations

def complement_dpa(d: Dpa) -> Dpa:
    """Shift every color by one; flips the parity of every run."""
    color = tuple(tuple(c + 1 for c in row) for row in d.color)
    return replace(d, color=color, max_color=d.max_color + 1)


def compress_colors(d: Dpa) -> Dpa:
    """Map the used colors onto the shortest parity-preserving,
    order-preserving range."""
    used = d.used_colors()
    mapping: Dict[int, int] = {}
    prev = 0
    for c in used:
        nxt = prev + 1
        if nxt % 2 != c % 2:
            nxt += 1
        mapping[c] = nxt
        prev = nxt
    color = tuple(tuple(mapping[c] for c in row) for row in d.color)
    return replace(d, color=color, max_color=prev if used else 1)


def isomorphic(x, y) -> bool:
    """Structural isomorphism of two automata of the same kind, found by a
    synchronized walk from the initial states.  Only reachable parts are
    compared; both must be deterministic or be equal up to renaming on the
    same state numbering."""
    if type(x) is not type(y) or tuple(x.alphabet) != tuple(y.alphabet):
        return False
    if x.num_states != y.num_states:
        return False
    if isinstance(x, Dpa):
        m = {x.initial: y.initial}
        todo = [x.initial]
        while todo:
            q = todo.pop()
            for a in range(len(x.alphabet)):
                if x.color[q][a] != y.color[m[q]][a]:
                    return False
                r, s = x.succ[q][a], y.succ[m[q]][a]
                if r in m:
                    if m[r] != s:
                        return False
                else:
                    m[r] = s
                    todo.append(r)
        return len(set(m.values())) == len(m)
    # LDBAs are compared under the identity renaming of state ids
    return (x.initial == y.initial and x.succ == y.succ and x.qd == y.qd
            and x.accepting == y.accepting)


def dpa_sccs(d: Dpa) -> List[int]:
    """Strongly connected component id per state (iterative Tarjan)."""
    n = d.num_states
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: List[int] = []
    counter = ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(d.alphabet):
                work[-1] = (v, i + 1)
                u = d.succ[v][i]
                if index[u] < 0:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[v])
            if low[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp[u] = ncomp
                    if u == v:
                        break
                ncomp += 1
    return comp


def _compress_map(colors) -> Dict[int, int]:
    mapping: Dict[int, int] = {}
    prev = 0
    for c in sorted(set(colors)):
        nxt = prev + 1
        if nxt % 2 != c % 2:
            nxt += 1
        mapping[c] = nxt
        prev = nxt
    return mapping


def normalize_colors(d: Dpa) -> Dpa:
    """Language-preserving recoloring: colors inside each SCC are compressed
    independently (only cycles matter, and a cycle stays in one SCC), and a
    transient edge copies the color of its target's edge on the same letter
    (any value is sound there; copying lets more states coincide)."""
    comp = dpa_sccs(d)
    L = len(d.alphabet)
    inner: Dict[int, List[int]] = {}
    for q in range(d.num_states):
        for x in range(L):
            if comp[d.succ[q][x]] == comp[q]:
                inner.setdefault(comp[q], []).append(d.color[q][x])
    maps = {k: _compress_map(v) for k, v in inner.items()}
    color = [[0] * L for _ in range(d.num_states)]
    for q in range(d.num_states):
        for x in range(L):
            if comp[d.succ[q][x]] == comp[q]:
                color[q][x] = maps[comp[q]][d.color[q][x]]
    # transient edges, targets first (Tarjan numbers sink components first)
    for q in sorted(range(d.num_states), key=comp.__getitem__):
        for x in range(L):
            r = d.succ[q][x]
            if comp[r] != comp[q]:
                color[q][x] = color[r][x]
    return replace(d, color=tuple(map(tuple, color)),
                   max_color=max((c for row in color for c in row), default=1))


def minimize_dpa(d: Dpa) -> Dpa:
    """Merge states that emit the same color sequence on every word (Moore
    partition refinement), keeping only reachable states."""
    reach = [d.initial]
    seen = {d.initial}
    for q in reach:
        for r in d.succ[q]:
            if r not in seen:
                seen.add(r)
                reach.append(r)
    block = {q: 0 for q in reach}
    while True:
        sig: Dict[tuple, int] = {}
        new = {}
        for q in reach:
            key = (d.color[q], tuple(block[r] for r in d.succ[q]))
            new[q] = sig.setdefault(key, len(sig))
        if len(sig) == len(set(block.values())):
            block = new
            break
        block = new
    # renumber blocks in BFS order from the initial state
    order: Dict[int, int] = {}
    rep: List[int] = []
    for q in reach:
        b = block[q]
        if b not in order:
            order[b] = len(rep)
            rep.append(q)
    succ = tuple(tuple(order[block[r]] for r in d.succ[q]) for q in rep)
    color = tuple(d.color[q] for q in rep)
    names = tuple(d.names[q] for q in rep) if d.names else None
    return replace(d, succ=succ, color=color, initial=0, names=names)

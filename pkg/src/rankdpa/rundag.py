"""Run DAGs of an LDBA on a lasso word, their indexing and coloring.

This is the reference semantics for the determinization: it is written
independently of :mod:`rankdpa.determinize` (and its kernels) so the two
can be checked against each other.  Levels are computed with the
incremental ordering rule; :func:`prefix_order_levels` recomputes the same
orderings straight from the lexicographic order on run prefixes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .automata import Ldba
from .words import LassoWord

INF = float("inf")


@dataclass(frozen=True)
class Level:
    """Vertices of one level: nondeterministic-part states and the ordered
    deterministic-part states (position ``k`` has index ``k + 1``)."""

    number: int
    nondet: FrozenSet[int]
    det: Tuple[int, ...]

    @property
    def vertices(self) -> FrozenSet[int]:
        return self.nondet | frozenset(self.det)

    def index(self, q: int) -> int:
        return self.det.index(q) + 1


@dataclass(frozen=True)
class StepInfo:
    """How one level maps to the next: the color plus the Dec/Acc sets
    (as states of the source level)."""

    color: int
    dec: FrozenSet[int]
    acc: FrozenSet[int]


def _det_succ(a: Ldba, q: int, x: int) -> int:
    return a.succ[q][x][0]


def _color(dec_idx: Sequence[int], acc_idx: Sequence[int], n_qd: int) -> int:
    if not dec_idx and not acc_idx:
        return 2 * n_qd + 1
    if not acc_idx:
        return 2 * min(dec_idx) - 1
    if not dec_idx:
        return 2 * min(acc_idx)
    return min(2 * min(dec_idx) - 1, 2 * min(acc_idx))


def next_level(a: Ldba, ordering: Mapping[int, int], level: Level, x: int,
               oracle=None, keep_smallest: bool = False,
               redirect_as_merge: bool = True) -> Tuple[Level, StepInfo]:
    """Successor level on letter index ``x`` (reduced when ``oracle`` is
    given) and the color of the step."""
    nondet = set()
    entering = set()
    for q in level.nondet:
        for r in a.succ[q][x]:
            (entering if r in a.qd else nondet).add(r)
    # a continuing vertex is ordered by its minimal parent; vertices only
    # entering from the nondeterministic part come after, by rank
    parent_rank: Dict[int, int] = {}
    for k, q in enumerate(level.det):
        r = _det_succ(a, q, x)
        parent_rank.setdefault(r, k)
    continuing = sorted(parent_rank, key=parent_rank.__getitem__)
    fresh = sorted(entering - set(parent_rank), key=lambda r: ordering[r])
    det = continuing + fresh
    removed = set()
    if oracle is not None:
        kept: List[int] = []
        for r in det:
            if (kept or not keep_smallest) and oracle.is_redundant(r, kept):
                removed.add(r)
            else:
                kept.append(r)
        det = kept
    new = Level(level.number + 1, frozenset(nondet), tuple(det))
    dec, acc = set(), set()
    dec_idx, acc_idx = [], []
    for k, q in enumerate(level.det):
        r = _det_succ(a, q, x)
        if r in removed:
            # edge redirected to the smallest vertex of the level
            if redirect_as_merge or (k > 0 and det):
                dec.add(q)
                dec_idx.append(k + 1)
            continue
        if new.index(r) < k + 1:
            dec.add(q)
            dec_idx.append(k + 1)
        if (q, x, r) in a.accepting:
            acc.add(q)
            acc_idx.append(k + 1)
    return new, StepInfo(_color(dec_idx, acc_idx, len(a.qd)), frozenset(dec), frozenset(acc))


def initial_level(a: Ldba) -> Level:
    return Level(0, frozenset([a.initial]), ())


def _letter_ids(a: Ldba, w: LassoWord, n: int) -> List[int]:
    return [a.letter_index[w.letter(i)] for i in range(n)]


def build_run_dag(a: Ldba, ordering: Mapping[int, int], w: LassoWord, horizon: int,
                  oracle=None, keep_smallest: bool = False,
                  redirect_as_merge: bool = True) -> Tuple[List[Level], List[StepInfo]]:
    """Levels ``0..horizon`` of the (optionally reduced) run DAG and the
    ``horizon`` steps between them."""
    levels = [initial_level(a)]
    steps: List[StepInfo] = []
    for x in _letter_ids(a, w, horizon):
        lvl, info = next_level(a, ordering, levels[-1], x, oracle, keep_smallest,
                               redirect_as_merge)
        levels.append(lvl)
        steps.append(info)
    return levels, steps


def build_reduced_dag(a: Ldba, ordering: Mapping[int, int], oracle, w: LassoWord,
                      horizon: int, keep_smallest: bool = False,
                      redirect_as_merge: bool = True):
    return build_run_dag(a, ordering, w, horizon, oracle, keep_smallest, redirect_as_merge)


def color_trace(a: Ldba, ordering: Mapping[int, int], w: LassoWord, horizon: int,
                oracle=None, **kw) -> List[int]:
    return [s.color for s in build_run_dag(a, ordering, w, horizon, oracle, **kw)[1]]


def color_summary(a: Ldba, ordering: Mapping[int, int], w: LassoWord, oracle=None,
                  keep_smallest: bool = False, redirect_as_merge: bool = True) -> int:
    """Minimal color occurring infinitely often.  Levels are stepped until a
    (level content, period offset) pair repeats."""
    letters = [a.letter_index[x] for x in w.prefix + w.period]
    nu, nv = len(w.prefix), len(w.period)
    level = initial_level(a)
    for x in letters[:nu]:
        level, _ = next_level(a, ordering, level, x, oracle, keep_smallest, redirect_as_merge)
    seen: Dict[Tuple[FrozenSet[int], Tuple[int, ...], int], int] = {}
    colors: List[int] = []
    i = 0
    while True:
        key = (level.nondet, level.det, i % nv)
        if key in seen:
            return min(colors[seen[key]:])
        seen[key] = len(colors)
        level, info = next_level(a, ordering, level, letters[nu + i % nv], oracle,
                                 keep_smallest, redirect_as_merge)
        colors.append(info.color)
        i += 1


def accepts_by_summary(a: Ldba, ordering: Mapping[int, int], w: LassoWord, oracle=None,
                       **kw) -> bool:
    return color_summary(a, ordering, w, oracle, **kw) % 2 == 0


# ------------------------------------------------ prefix-order cross-checks

def _ord_seq_key(seq: Sequence[float]) -> Tuple[float, ...]:
    return tuple(seq)


def prefix_order_levels(a: Ldba, ordering: Mapping[int, int], w: LassoWord,
                        horizon: int) -> List[Tuple[int, ...]]:
    """Order of each level's deterministic vertices by their smallest run
    prefix, where prefixes compare lexicographically on ranks (states
    outside the deterministic part rank +infinity).  Computed by dynamic
    programming over levels: the smallest prefix into a vertex extends the
    smallest prefix into one of its parents."""
    rank = lambda q: ordering.get(q, INF) if q in a.qd else INF  # noqa: E731
    best: Dict[int, Tuple[float, ...]] = {a.initial: (rank(a.initial),)}
    out = [tuple(sorted((q for q in best if q in a.qd), key=best.__getitem__))]
    for x in _letter_ids(a, w, horizon):
        nxt: Dict[int, Tuple[float, ...]] = {}
        for q, seq in best.items():
            for r in a.succ[q][x]:
                cand = seq + (rank(r),)
                if r not in nxt or cand < nxt[r]:
                    nxt[r] = cand
        best = nxt
        out.append(tuple(sorted((q for q in best if q in a.qd), key=best.__getitem__)))
    return out


def enumerate_prefix_order_levels(a: Ldba, ordering: Mapping[int, int], w: LassoWord,
                                  horizon: int, cap: int = 200000) -> List[Tuple[int, ...]]:
    """Same as :func:`prefix_order_levels` but by explicitly enumerating every
    run prefix (exponential; for small automata and horizons only)."""
    rank = lambda q: ordering.get(q, INF) if q in a.qd else INF  # noqa: E731
    letters = _letter_ids(a, w, horizon)
    paths: List[Tuple[int, ...]] = [(a.initial,)]
    out = []
    for i in range(horizon + 1):
        smallest: Dict[int, Tuple[float, ...]] = {}
        for p in paths:
            key = tuple(rank(q) for q in p)
            if p[-1] not in smallest or key < smallest[p[-1]]:
                smallest[p[-1]] = key
        out.append(tuple(sorted((q for q in smallest if q in a.qd), key=smallest.__getitem__)))
        if i == horizon:
            break
        x = letters[i]
        paths = [p + (r,) for p in paths for r in a.succ[p[-1]][x]]
        if len(paths) > cap:
            raise RuntimeError("too many run prefixes to enumerate")
    return out


def to_dot(a: Ldba, levels: List[Level], steps: List[StepInfo], w: Optional[LassoWord] = None) -> str:
    """Layered drawing of a run DAG with per-level indices and step colors."""
    lines = ["digraph rundag {", "  rankdir=TB;", "  node [shape=plaintext];"]
    for lvl in levels:
        names = []
        for q in sorted(lvl.nondet):
            names.append(f'"{lvl.number}:{q}" [label="{a.name(q)}"];')
        for k, q in enumerate(lvl.det):
            names.append(f'"{lvl.number}:{q}" [label="{a.name(q)} ({k + 1})"];')
        lines.append("  { rank=same; " + " ".join(names) + " }")
    for i, info in enumerate(steps):
        x = a.letter_index[w.letter(i)] if w is not None else None
        src, dst = levels[i], levels[i + 1]
        for q in sorted(src.vertices):
            targets = a.succ[q][x] if x is not None else ()
            for r in targets:
                if r in dst.vertices:
                    bold = ",style=bold" if (q, x, r) in a.accepting else ""
                    lines.append(f'  "{i}:{q}" -> "{i + 1}:{r}" [label="{info.color}"{bold}];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Small hand-built automata used in docs, tests and the CLI."""
from .automata import Ldba
from .ltl import parse_ltl, to_nnf


def fig1_ldba(labelled: bool = True) -> Ldba:
    """The four-state LDBA for ``F G a | F G b`` over the raw alphabet
    ``{a, b}``.  State ids 0..3 carry the names 1..4; state 4 (id 3) is the
    rejecting sink of the deterministic part."""
    a, b = 0, 1
    succ = (
        ((0, 1), (0, 2)),  # 1: loops on both letters, guesses 2 on a, 3 on b
        ((1,), (3,)),      # 2: a-loop, b to the sink
        ((3,), (2,)),      # 3: b-loop, a to the sink
        ((3,), (3,)),      # 4: sink
    )
    labels = None
    if labelled:
        labels = tuple(to_nnf(parse_ltl(t)) for t in ("F G a | F G b", "G a", "G b", "ff"))
    return Ldba(alphabet=("a", "b"), succ=succ, initial=0, qd=frozenset({1, 2, 3}),
                accepting=frozenset({(1, a, 1), (2, b, 2)}), labels=labels,
                names=("1", "2", "3", "4"))

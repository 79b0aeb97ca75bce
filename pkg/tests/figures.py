"""Reference data for the worked figures, shared by the unit and acceptance tests."""
from rankdpa.ltl import parse_ltl, to_nnf
from rankdpa.ltl2ldba import translate

AB = frozenset("ab")
PHI = to_nnf(parse_ltl("c | X G (a | F b)"))


def fig4():
    a = translate(PHI)
    by_name = {}
    for q in range(a.num_states):
        by_name[a.names[q]] = q
    return a, by_name


FIG4_STATES = {
    # figure node: our rendered name
    "phi": "(c | X G (a | F b))",
    "Gpsi": "G (a | F b)",
    "Gpsi&Fb": "(F b & G (a | F b))",
    "tt": "tt",
    "<c>": "<c | {} #1>",
    "<tt>": "<tt | {} #1>",
    "<tt,(psi,tt)>": "<tt, ((a | F b), tt) | {G (a | F b)} #1>",
    "<tt,(Fb,psi)>": "<tt, (F b, (a | F b)) | {G (a | F b)} #1>",
    "<tt,(Fb,Fb)>": "<tt, (F b, F b) | {G (a | F b)} #1>",
    "<Fb,(psi,tt)>": "<F b, ((a | F b), tt) | {G (a | F b)} #1>",
    "<Fb,(Fb,psi)>": "<F b, (F b, (a | F b)) | {G (a | F b)} #1>",
    "<Fb,(Fb,Fb)>": "<F b, (F b, F b) | {G (a | F b)} #1>",
}

# edges drawn in the figure: (source, letter predicate, target, double)
FIG4_EDGES = [
    ("phi", lambda l: "c" not in l, "Gpsi", False),
    ("phi", lambda l: "c" in l, "tt", False),
    ("Gpsi", lambda l: l & AB, "Gpsi", False),
    ("Gpsi", lambda l: not l & AB, "Gpsi&Fb", False),
    ("Gpsi&Fb", lambda l: "b" in l, "Gpsi", False),
    ("Gpsi&Fb", lambda l: "b" not in l, "Gpsi&Fb", False),
    ("tt", lambda l: True, "tt", False),
    ("<Fb,(psi,tt)>", lambda l: not l & AB, "<Fb,(Fb,psi)>", False),
    ("<Fb,(psi,tt)>", lambda l: "b" in l, "<tt,(psi,tt)>", False),
    ("<Fb,(psi,tt)>", lambda l: "a" in l and "b" not in l, "<Fb,(psi,tt)>", False),
    ("<Fb,(Fb,psi)>", lambda l: not l & AB, "<Fb,(Fb,Fb)>", False),
    ("<Fb,(Fb,psi)>", lambda l: "b" in l, "<tt,(psi,tt)>", False),
    ("<Fb,(Fb,psi)>", lambda l: "a" in l and "b" not in l, "<Fb,(Fb,psi)>", False),
    ("<Fb,(Fb,Fb)>", lambda l: "b" not in l, "<Fb,(Fb,Fb)>", False),
    ("<Fb,(Fb,Fb)>", lambda l: "b" in l, "<tt,(psi,tt)>", False),
    ("<tt,(psi,tt)>", lambda l: not l & AB, "<tt,(Fb,psi)>", False),
    ("<tt,(psi,tt)>", lambda l: l & AB, "<tt,(psi,tt)>", True),
    ("<tt,(Fb,psi)>", lambda l: not l & AB, "<tt,(Fb,Fb)>", False),
    ("<tt,(Fb,psi)>", lambda l: "b" in l, "<tt,(psi,tt)>", True),
    ("<tt,(Fb,psi)>", lambda l: "a" in l and "b" not in l, "<tt,(Fb,psi)>", False),
    ("<tt,(Fb,Fb)>", lambda l: "b" not in l, "<tt,(Fb,Fb)>", False),
    ("<tt,(Fb,Fb)>", lambda l: "b" in l, "<tt,(psi,tt)>", True),
    ("<c>", lambda l: "c" in l, "<tt>", False),
    ("<tt>", lambda l: True, "<tt>", True),
]

FIG4_JUMPS = {
    "phi": {"<c>", "<tt,(psi,tt)>"},
    "Gpsi": {"<tt,(psi,tt)>"},
    "Gpsi&Fb": {"<Fb,(psi,tt)>"},
    "tt": {"<tt>", "<tt,(psi,tt)>"},
}


def check_fig4(a, names):
    """Returns a list of mismatches between ``a`` and the figure (empty when
    it matches).  Edges not drawn in the figure must lead to the ff sink."""
    q = {k: names.get(v) for k, v in FIG4_STATES.items()}
    problems = [f"missing state {k}" for k, v in q.items() if v is None]
    if problems:
        return problems
    if a.meta.get("initial_component") != 4:
        problems.append("initial component does not have 4 states")
    inv = {v: k for k, v in q.items()}
    sink = names.get("ff")
    if set(range(a.num_states)) - set(inv) - {sink}:
        problems.append("extra states")
    drawn = set()
    for src, pred, dst, double in FIG4_EDGES:
        for x, letter in enumerate(a.alphabet):
            if not pred(letter):
                continue
            drawn.add((q[src], x))
            if a.succ[q[src]][x] != (q[dst],):
                problems.append(f"{src} -{sorted(letter)}-> not {dst}")
            if ((q[src], x, q[dst]) in a.accepting) != double:
                problems.append(f"{src} -{sorted(letter)}-> acceptance differs")
    for s in inv:
        for x in range(len(a.alphabet)):
            if (s, x) not in drawn and a.succ[s][x] != (sink,):
                problems.append(f"undrawn edge of {inv[s]} does not go to the sink")
    for src, targets in FIG4_JUMPS.items():
        if set(a.jumps[q[src]]) != {q[t] for t in targets}:
            problems.append(f"jumps of {src} differ")
    return problems

"""HOA v1 and DOT serialization.

LDBAs are written with Buchi acceptance and an ``ldba-qd:`` header listing
the deterministic part.  DPAs are written as ``parity min even`` with color
``c`` placed in acceptance set ``c``.  Automata over an abstract alphabet
(not subsets of propositions) get one proposition per letter, exactly one of
which holds on each edge, and a ``raw-alphabet:`` header naming them.

Edges are labelled with full minterms.  The parser also accepts arbitrary
Boolean label expressions, implicit labels and state-based acceptance marks.
"""
from __future__ import annotations

import re
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple, Union

from .automata import Dpa, Ldba, eliminate_jumps
from .ltl import LtlSyntaxError, NNFError, iter_letters, parse_ltl, to_nnf, to_text


class HoaError(ValueError):
    pass


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _is_ltl_alphabet(alphabet: Sequence[Hashable], aps: Optional[Sequence[str]]) -> bool:
    if aps is None:
        return False
    return tuple(alphabet) == tuple(iter_letters(aps))


def _letter_props(alphabet, aps) -> Tuple[List[str], List[str], bool]:
    """Proposition names, one minterm string per letter, and whether the
    alphabet is raw."""
    if _is_ltl_alphabet(alphabet, aps):
        props = sorted(aps)
        raw = False
    else:
        props = [str(x) for x in alphabet]
        if len(set(props)) != len(props):
            raise HoaError("letters must have distinct names")
        raw = True
    minterms = []
    for i, letter in enumerate(alphabet):
        if raw:
            lits = [str(j) if j == i else f"!{j}" for j in range(len(props))]
        else:
            lits = [str(j) if p in letter else f"!{j}" for j, p in enumerate(props)]
        minterms.append("&".join(lits) if lits else "t")
    return props, minterms, raw


def emit_hoa(x: Union[Ldba, Dpa], name: Optional[str] = None) -> str:
    """HOA text for an LDBA (epsilon-jumps are folded first) or a DPA."""
    if isinstance(x, Ldba):
        x = eliminate_jumps(x)
    props, minterms, raw = _letter_props(x.alphabet, x.aps)
    out = ["HOA: v1"]
    if name is not None:
        out.append(f"name: {_quote(name)}")
    out.append(f"States: {x.num_states}")
    out.append(f"Start: {x.initial}")
    out.append(f"AP: {len(props)}" + "".join(" " + _quote(p) for p in props))
    if raw:
        out.append("raw-alphabet: " + " ".join(_quote(p) for p in props))
    if isinstance(x, Ldba):
        out.append("acc-name: Buchi")
        out.append("Acceptance: 1 Inf(0)")
        out.append("properties: trans-labels explicit-labels trans-acc")
        out.append("ldba-qd:" + "".join(f" {q}" for q in sorted(x.qd)))
    else:
        k = x.max_color + 1
        out.append(f"acc-name: parity min even {k}")
        out.append(f"Acceptance: {k} {_parity_formula(k)}")
        out.append("properties: trans-labels explicit-labels trans-acc deterministic complete")
    out.append("--BODY--")
    for q in range(x.num_states):
        line = f"State: {q}"
        if x.names:
            line += " " + _quote(x.names[q])
        out.append(line)
        if isinstance(x, Ldba) and x.labels is not None and x.labels[q] is not None:
            out.append(f"/* label: {to_text(x.labels[q])} */")
        for a, m in enumerate(minterms):
            if isinstance(x, Ldba):
                for r in x.succ[q][a]:
                    acc = " {0}" if (q, a, r) in x.accepting else ""
                    out.append(f"[{m}] {r}{acc}")
            else:
                out.append(f"[{m}] {x.succ[q][a]} {{{x.color[q][a]}}}")
    out.append("--END--")
    return "\n".join(out) + "\n"


def _parity_formula(k: int) -> str:
    """min-even parity condition over sets 0..k-1."""
    if k <= 0:
        return "f"
    text = ""
    for i in range(k - 1, -1, -1):
        atom = f"Inf({i})" if i % 2 == 0 else f"Fin({i})"
        if not text:
            text = atom
        elif i % 2 == 0:
            text = f"{atom} | ({text})"
        else:
            text = f"{atom} & ({text})"
    return text


# ------------------------------------------------------------------ parsing

_TOKENS = re.compile(r'\s*(?:("(?:[^"\\]|\\.)*")|(/\*.*?\*/)|([A-Za-z_@][\w@.-]*:)|'
                     r'(\[)|(\])|(\{)|(\})|(-?\d+)|([!&|()])|([A-Za-z_@][\w@.-]*)|(\S))', re.S)


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        s, comment, header, lb, rb, lc, rc, num, op, ident, other = m.groups()
        if comment is not None:
            toks.append(("comment", comment[2:-2].strip()))
        elif s is not None:
            toks.append(("str", re.sub(r'\\(.)', r'\1', s[1:-1])))
        elif header is not None:
            toks.append(("header", header[:-1]))
        elif num is not None:
            toks.append(("int", int(num)))
        elif ident is not None:
            toks.append(("id", ident))
        else:
            tok = next(t for t in (lb, rb, lc, rc, op, other) if t is not None)
            toks.append(("sym", tok))
    return toks


class _LabelParser:
    """Boolean label expressions over proposition indices."""

    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        e = self.disj()
        if self.i != len(self.toks):
            raise HoaError(f"unexpected {self.peek()[1]!r} in edge label")
        return e

    def disj(self):
        parts = [self.conj()]
        while self.peek() == ("sym", "|"):
            self.take()
            parts.append(self.conj())
        return ("or", parts) if len(parts) > 1 else parts[0]

    def conj(self):
        parts = [self.unary()]
        while self.peek() == ("sym", "&"):
            self.take()
            parts.append(self.unary())
        return ("and", parts) if len(parts) > 1 else parts[0]

    def unary(self):
        kind, val = self.take()
        if (kind, val) == ("sym", "!"):
            return ("not", self.unary())
        if (kind, val) == ("sym", "("):
            e = self.disj()
            if self.take() != ("sym", ")"):
                raise HoaError("missing ')' in edge label")
            return e
        if kind == "int":
            return ("ap", val)
        if kind == "id" and val in ("t", "f"):
            return ("const", val == "t")
        raise HoaError(f"bad edge label token {val!r}")


def _eval(e, val: Sequence[bool]) -> bool:
    kind = e[0]
    if kind == "ap":
        if e[1] >= len(val):
            raise HoaError(f"proposition {e[1]} is not declared")
        return val[e[1]]
    if kind == "const":
        return e[1]
    if kind == "not":
        return not _eval(e[1], val)
    if kind == "and":
        return all(_eval(p, val) for p in e[1])
    return any(_eval(p, val) for p in e[1])


def parse_hoa(text: str) -> Union[Ldba, Dpa]:
    """Parse one HOA automaton: Buchi (an LDBA) or parity min even (a DPA)."""
    if "--BODY--" not in text or "--END--" not in text:
        raise HoaError("missing --BODY-- or --END--")
    head_text, rest = text.split("--BODY--", 1)
    body_text = rest.split("--END--", 1)[0]
    headers: Dict[str, list] = {}
    current = None
    for kind, val in _tokenize(head_text):
        if kind == "header":
            current = val
            headers.setdefault(current, [])
        elif kind == "comment":
            continue
        elif current is None:
            raise HoaError(f"unexpected {val!r} before the first header")
        else:
            headers[current].append((kind, val))
    if headers.get("HOA") != [("id", "v1")]:
        raise HoaError("only HOA v1 is supported")
    try:
        n = headers["States"][0][1]
        start = headers["Start"][0][1]
    except (KeyError, IndexError):
        raise HoaError("States: and Start: headers are required") from None
    ap_toks = headers.get("AP", [("int", 0)])
    props = [v for k, v in ap_toks[1:]]
    if len(props) != ap_toks[0][1]:
        raise HoaError("AP count does not match the listed propositions")
    acc_name = [v for _, v in headers.get("acc-name", [])]
    acceptance = " ".join(str(v) for _, v in headers.get("Acceptance", []))
    kind = _acceptance_kind(acc_name, acceptance)

    raw = "raw-alphabet" in headers
    if raw:
        alphabet: Tuple[Hashable, ...] = tuple(v for _, v in headers["raw-alphabet"])
        vals = []
        for letter in alphabet:
            if letter not in props:
                raise HoaError(f"raw letter {letter!r} is not a proposition")
            vals.append([p == letter for p in props])
        aps = None
    else:
        aps = tuple(sorted(props))
        alphabet = tuple(iter_letters(aps))
        vals = [[p in letter for p in props] for letter in alphabet]
    L = len(alphabet)

    succ: List[List[List[int]]] = [[[] for _ in range(L)] for _ in range(n)]
    accmarks: Dict[Tuple[int, int, int], List[int]] = {}
    names: List[Optional[str]] = [None] * n
    labels: List[Optional[str]] = [None] * n
    toks = _tokenize(body_text)
    i = 0
    q = None
    state_acc: List[int] = []
    implicit = 0
    while i < len(toks):
        t = toks[i]
        if t == ("header", "State"):
            if i + 1 < len(toks) and toks[i + 1] == ("sym", "["):
                raise HoaError("state labels are not supported")
            q = toks[i + 1][1] if i + 1 < len(toks) else None
            if not isinstance(q, int) or not 0 <= q < n:
                raise HoaError(f"bad state id {q!r}")
            i += 2
            if i < len(toks) and toks[i][0] == "str":
                names[q] = toks[i][1]
                i += 1
            state_acc, i = _acc_set(toks, i)
            implicit = 0
            continue
        if t[0] == "comment":
            if q is not None and t[1].startswith("label:"):
                labels[q] = t[1][len("label:"):].strip()
            i += 1
            continue
        if q is None:
            raise HoaError(f"edge before the first State: line ({t[1]!r})")
        if t == ("sym", "["):
            j = toks.index(("sym", "]"), i)
            expr = _LabelParser(toks[i + 1:j]).parse()
            i = j + 1
            letters = [a for a in range(L) if _eval(expr, vals[a])]
        else:
            letters = None
        if i >= len(toks) or toks[i][0] != "int":
            raise HoaError("edge without a target state")
        r = toks[i][1]
        if not 0 <= r < n:
            raise HoaError(f"edge target {r} out of range")
        i += 1
        marks, i = _acc_set(toks, i)
        marks = marks + state_acc
        if letters is None:
            if raw:
                raise HoaError("implicit labels need a propositional alphabet")
            bits = [bool(implicit >> j & 1) for j in range(len(props))]
            letters = [a for a in range(L) if vals[a] == bits]
            implicit += 1
        for a in letters:
            if r not in succ[q][a]:
                succ[q][a].append(r)
            if marks:
                accmarks.setdefault((q, a, r), []).extend(marks)

    frozen_names = tuple(nm if nm is not None else str(k) for k, nm in enumerate(names))
    has_names = any(nm is not None for nm in names)
    if kind == "buchi":
        accepting = frozenset(e for e, m in accmarks.items() if 0 in m)
        if "ldba-qd" in headers:
            qd = frozenset(v for _, v in headers["ldba-qd"])
        else:
            qd = _infer_qd(succ, accepting, L)
        parsed_labels = None
        if any(lb is not None for lb in labels):
            try:
                parsed_labels = tuple(to_nnf(parse_ltl(lb)) if lb else None for lb in labels)
            except (LtlSyntaxError, NNFError):
                parsed_labels = None
        return Ldba(alphabet=alphabet, succ=tuple(tuple(tuple(sorted(s)) for s in row) for row in succ),
                    initial=start, qd=qd, accepting=accepting, labels=parsed_labels,
                    names=frozen_names if has_names else None, aps=aps)
    k = kind[1]
    color = [[0] * L for _ in range(n)]
    for q2 in range(n):
        for a in range(L):
            if len(succ[q2][a]) != 1:
                raise HoaError(f"parity automaton is not deterministic and complete at state {q2}")
            marks = accmarks.get((q2, a, succ[q2][a][0]), [])
            color[q2][a] = min(marks) if marks else k
    shift = 2 if any(c == 0 for row in color for c in row) else 0
    color = [[c + shift for c in row] for row in color]
    return Dpa(alphabet=alphabet, succ=tuple(tuple(row[a][0] for a in range(L)) for row in succ),
               color=tuple(map(tuple, color)), initial=start,
               max_color=max(max((c for row in color for c in row), default=1), k - 1 + shift),
               names=frozen_names if has_names else None, aps=aps)


def _acc_set(toks, i):
    marks: List[int] = []
    if i < len(toks) and toks[i] == ("sym", "{"):
        j = toks.index(("sym", "}"), i)
        marks = [v for _, v in toks[i + 1:j]]
        i = j + 1
    return marks, i


def _acceptance_kind(acc_name: List, acceptance: str):
    compact = acceptance.replace(" ", "")
    if acc_name:
        if acc_name[0] == "Buchi":
            return "buchi"
        if acc_name[0] == "parity":
            if len(acc_name) != 4 or acc_name[1:3] != ["min", "even"]:
                raise HoaError("unsupported acceptance: parity " +
                               " ".join(str(v) for v in acc_name[1:]) +
                               " (only parity min even)")
            k = int(acc_name[3])
            if compact and compact != (f"{k}" + _parity_formula(k).replace(" ", "")):
                raise HoaError("Acceptance formula does not match parity min even")
            return ("parity", k)
        raise HoaError(f"unsupported acceptance: {' '.join(map(str, acc_name))}")
    if compact == "1Inf(0)":
        return "buchi"
    m = re.match(r"(\d+)", compact)
    if m:
        k = int(m.group(1))
        if compact == f"{k}" + _parity_formula(k).replace(" ", ""):
            return ("parity", k)
    raise HoaError(f"unsupported acceptance: {acceptance or '(none)'}")


def _infer_qd(succ, accepting, L) -> FrozenSet[int]:
    """Without an ``ldba-qd:`` header, take every state reachable from an
    accepting transition."""
    todo = sorted({q for q, _, _ in accepting})
    seen = set(todo)
    while todo:
        q = todo.pop()
        for a in range(L):
            for r in succ[q][a]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
    return frozenset(seen)


# ---------------------------------------------------------------------- DOT

def _dot_label(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def emit_dot(x: Union[Ldba, Dpa]) -> str:
    lines = ["digraph automaton {", "  rankdir=LR;", "  node [shape=ellipse];",
             '  init [shape=point, label=""];', f"  init -> {x.initial};"]

    def letter_text(a: int) -> str:
        letter = x.alphabet[a]
        if isinstance(letter, frozenset):
            return "{" + ",".join(sorted(letter)) + "}"
        return str(letter)

    for q in range(x.num_states):
        name = x.names[q] if x.names else str(q)
        extra = ""
        if isinstance(x, Ldba) and q in x.qd:
            extra = ", style=filled, fillcolor=lightgrey"
        lines.append(f'  {q} [label="{_dot_label(name)}"{extra}];')
    groups: Dict[Tuple[int, int, str], List[str]] = {}
    for q in range(x.num_states):
        for a in range(len(x.alphabet)):
            if isinstance(x, Ldba):
                for r in x.succ[q][a]:
                    style = "bold" if (q, a, r) in x.accepting else ""
                    groups.setdefault((q, r, style), []).append(letter_text(a))
            else:
                groups.setdefault((q, x.succ[q][a], ""), []).append(
                    f"{letter_text(a)}/{x.color[q][a]}")
    for (q, r, style), labels in groups.items():
        attr = f", style={style}" if style else ""
        lines.append(f'  {q} -> {r} [label="{_dot_label(" ".join(labels))}"{attr}];')
    if isinstance(x, Ldba) and x.jumps is not None:
        for q, targets in enumerate(x.jumps):
            for p in targets:
                lines.append(f'  {q} -> {p} [label="eps", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"

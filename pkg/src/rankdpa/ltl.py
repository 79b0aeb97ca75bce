"""LTL formulas: parsing, negation normal form, the *after* function and
propositional canonicalization.

Formulas are hash-consed: structurally equal formulas are the same object,
so ``is``/``==`` comparisons and dict lookups are cheap.  A formula is
*proper* when it is neither a conjunction nor a disjunction; propositional
equivalence treats every maximal proper subformula as an opaque variable.
Because negation only occurs on atoms, formulas are monotone Boolean
functions of those variables and a subsumption-free DNF is canonical.
"""
from __future__ import annotations

import re
import threading
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

TT, FF, AP, NAP, AND, OR, NOT, NEXT, FIN, GLOB, UNTIL = (
    "tt", "ff", "ap", "nap", "and", "or", "not", "X", "F", "G", "U")

_OP_RANK = {TT: 0, FF: 1, AP: 2, NAP: 3, NEXT: 4, FIN: 5, GLOB: 6, UNTIL: 7,
            AND: 8, OR: 9, NOT: 10}

Letter = FrozenSet[str]
Conjunct = FrozenSet["Formula"]
CanonicalClass = FrozenSet[Conjunct]

_table: Dict[tuple, "Formula"] = {}
_table_lock = threading.Lock()


class Formula:
    """Interned LTL syntax node.  Never instantiate directly; use the
    module-level constructors."""

    __slots__ = ("op", "name", "args", "_key", "_dnf", "_af", "_text", "__weakref__")

    op: str
    name: str
    args: Tuple["Formula", ...]

    def __repr__(self) -> str:
        return f"Formula({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def key(self) -> tuple:
        """Structural sort key, stable across processes."""
        k = self._key
        if k is None:
            k = (_OP_RANK[self.op], self.name, tuple(a.key for a in self.args))
            self._key = k
        return k

    def __lt__(self, other: "Formula") -> bool:
        return self.key < other.key

    @property
    def is_proper(self) -> bool:
        return self.op not in (AND, OR)


def _make(op: str, name: str = "", args: Tuple[Formula, ...] = ()) -> Formula:
    k = (op, name, args)
    f = _table.get(k)
    if f is not None:
        return f
    with _table_lock:
        f = _table.get(k)
        if f is None:
            f = object.__new__(Formula)
            f.op, f.name, f.args = op, name, args
            f._key = f._dnf = f._text = None
            f._af = {}
            _table[k] = f
    return f


TRUE = _make(TT)
FALSE = _make(FF)


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class NNFError(ValueError):
    """Raised when a formula has no negation normal form in the supported
    grammar (the grammar has no Release operator)."""


# ---------------------------------------------------------------- constructors

def atom(name: str) -> Formula:
    return _make(AP, name)


def natom(name: str) -> Formula:
    return _make(NAP, name)


def Not(f: Formula) -> Formula:
    return _make(NOT, "", (f,))


def X(f: Formula) -> Formula:
    return _make(NEXT, "", (f,))


def F(f: Formula) -> Formula:
    return _make(FIN, "", (f,))


def G(f: Formula) -> Formula:
    return _make(GLOB, "", (f,))


def U(f: Formula, g: Formula) -> Formula:
    return _make(UNTIL, "", (f, g))


def And(*fs: Formula) -> Formula:
    return _nary(AND, fs)


def Or(*fs: Formula) -> Formula:
    return _nary(OR, fs)


def _nary(op: str, fs: Iterable[Formula]) -> Formula:
    flat: List[Formula] = []
    for f in fs:
        if f.op == op:
            flat.extend(f.args)
        else:
            flat.append(f)
    if not flat:
        return TRUE if op == AND else FALSE
    if len(flat) == 1:
        return flat[0]
    return _make(op, "", tuple(flat))


def Implies(f: Formula, g: Formula) -> Formula:
    return Or(Not(f), g)


# Constant-folding variants, used where formulas are rebuilt after
# substituting tt/ff (e.g. X(a & tt) should read as X a).

def mk_and(*fs: Formula) -> Formula:
    out: List[Formula] = []
    for f in fs:
        if f is FALSE:
            return FALSE
        if f is TRUE:
            continue
        for g in (f.args if f.op == AND else (f,)):
            if g not in out:
                out.append(g)
    return _nary(AND, out)


def mk_or(*fs: Formula) -> Formula:
    out: List[Formula] = []
    for f in fs:
        if f is TRUE:
            return TRUE
        if f is FALSE:
            continue
        for g in (f.args if f.op == OR else (f,)):
            if g not in out:
                out.append(g)
    return _nary(OR, out)


def mk_next(f: Formula) -> Formula:
    return f if f.op in (TT, FF) else X(f)


def mk_finally(f: Formula) -> Formula:
    return f if f.op in (TT, FF) else F(f)


def mk_globally(f: Formula) -> Formula:
    return f if f.op in (TT, FF) else G(f)


def mk_until(f: Formula, g: Formula) -> Formula:
    if g.op in (TT, FF) or f is FALSE:
        return g
    if f is TRUE:
        return mk_finally(g)
    return U(f, g)


# --------------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_UNARY = {"!", "X", "F", "G"}


def _tokenize(text: str) -> List[Tuple[str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(4) is not None:
            raise LtlSyntaxError(f"unknown operator {m.group(4)!r}", m.start(4))
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, ap: Optional[Set[str]]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ap = ap

    def peek(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        if not self.toks:
            raise LtlSyntaxError("empty formula", 0)
        f = self.implication()
        if self.i < len(self.toks):
            tok = self.peek()
            if tok in ("X", "F", "G", "U", "!", "(") or _is_ident(tok):
                raise LtlSyntaxError(f"unknown operator {tok!r}", self.pos())
            raise LtlSyntaxError(f"unexpected {tok!r}", self.pos())
        return f

    def operand(self, op: str) -> None:
        if self.peek() is None or self.peek() in (")", "&", "|", "->", "U"):
            raise LtlSyntaxError(f"missing right operand for {op!r}", self.pos())

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.peek() == "->":
            self.take()
            self.operand("->")
            return Implies(lhs, self.implication())
        return lhs

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            self.operand("|")
            parts.append(self.conjunction())
        return Or(*parts) if len(parts) > 1 else parts[0]

    def conjunction(self) -> Formula:
        parts = [self.until()]
        while self.peek() == "&":
            self.take()
            self.operand("&")
            parts.append(self.until())
        return And(*parts) if len(parts) > 1 else parts[0]

    def until(self) -> Formula:
        lhs = self.unary()
        if self.peek() == "U":
            self.take()
            self.operand("U")
            return U(lhs, self.until())
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise LtlSyntaxError("unexpected end of formula", self.pos())
        if tok in _UNARY:
            self.take()
            self.operand(tok)
            f = self.unary()
            return {"!": Not, "X": X, "F": F, "G": G}[tok](f)
        if tok == "(":
            start = self.pos()
            self.take()
            f = self.implication()
            if self.peek() != ")":
                raise LtlSyntaxError("unbalanced parenthesis", start)
            self.take()
            return f
        if tok in ("tt", "true"):
            self.take()
            return TRUE
        if tok in ("ff", "false"):
            self.take()
            return FALSE
        if _is_ident(tok) and tok != "U":
            self.take()
            if self.ap is not None:
                self.ap.add(tok)
            return atom(tok)
        raise LtlSyntaxError(f"unexpected {tok!r}", self.pos())


def _is_ident(tok: Optional[str]) -> bool:
    return tok is not None and (tok[0].isalpha() or tok[0] == "_")


def parse_ltl(text: str, ap: Optional[Set[str]] = None) -> Formula:
    """Parse ASCII LTL.  Negation is kept as written; call :func:`to_nnf`
    before handing the result to the translation.  Atoms are added to
    ``ap`` when given."""
    return _Parser(text, ap).parse()


# ------------------------------------------------------------------------- NNF

def to_nnf(f: Formula) -> Formula:
    """Push negations to the atoms.  Raises :class:`NNFError` on a negated
    Until, which has no counterpart in the target grammar."""
    return _nnf(f, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    op = f.op
    if op == NOT:
        return _nnf(f.args[0], not neg)
    if op == TT:
        return FALSE if neg else TRUE
    if op == FF:
        return TRUE if neg else FALSE
    if op == AP:
        return natom(f.name) if neg else f
    if op == NAP:
        return atom(f.name) if neg else f
    if op in (AND, OR):
        kids = [_nnf(a, neg) for a in f.args]
        return (Or if (op == AND) == neg else And)(*kids)
    if op == NEXT:
        return X(_nnf(f.args[0], neg))
    if op == FIN:
        return (G if neg else F)(_nnf(f.args[0], neg))
    if op == GLOB:
        return (F if neg else G)(_nnf(f.args[0], neg))
    if op == UNTIL:
        if neg:
            raise NNFError(f"negated Until not in NNF fragment: !({to_text(f)})")
        return U(_nnf(f.args[0], False), _nnf(f.args[1], False))
    raise ValueError(f"unknown node {op}")


def is_nnf(f: Formula) -> bool:
    return all(g.op != NOT for g in subformulas(f))


# ------------------------------------------------------------------- traversal

def subformulas(f: Formula) -> List[Formula]:
    """All distinct subformulas in post-order (children before parents)."""
    seen: Set[Formula] = set()
    out: List[Formula] = []
    stack: List[Tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, done = stack.pop()
        if done:
            out.append(g)
            continue
        if g in seen:
            continue
        seen.add(g)
        stack.append((g, True))
        for a in reversed(g.args):
            if a not in seen:
                stack.append((a, False))
    return out


def atoms(f: Formula) -> Set[str]:
    return {g.name for g in subformulas(f) if g.op in (AP, NAP)}


def g_subformulas(f: Formula) -> FrozenSet[Formula]:
    return frozenset(g for g in subformulas(f) if g.op == GLOB)


def size(f: Formula) -> int:
    return len(subformulas(f))


# ------------------------------------------------------- propositional classes

def _minimize(conjs: Iterable[Conjunct]) -> CanonicalClass:
    ordered = sorted(set(conjs), key=len)
    kept: List[Conjunct] = []
    for c in ordered:
        if not any(k <= c for k in kept):
            kept.append(c)
    return frozenset(kept)


def _dnf_or(a: CanonicalClass, b: CanonicalClass) -> CanonicalClass:
    return _minimize(a | b)


def _dnf_and(a: CanonicalClass, b: CanonicalClass) -> CanonicalClass:
    return _minimize(x | y for x in a for y in b)


_DNF_TRUE: CanonicalClass = frozenset([frozenset()])
_DNF_FALSE: CanonicalClass = frozenset()


def canonicalize(f: Formula) -> CanonicalClass:
    """Subsumption-free DNF over the maximal proper subformulas of ``f``."""
    d = f._dnf
    if d is not None:
        return d
    op = f.op
    if op == TT:
        d = _DNF_TRUE
    elif op == FF:
        d = _DNF_FALSE
    elif op == AND:
        d = _DNF_TRUE
        for a in f.args:
            d = _dnf_and(d, canonicalize(a))
    elif op == OR:
        d = _DNF_FALSE
        for a in f.args:
            d = _dnf_or(d, canonicalize(a))
    else:
        d = frozenset([frozenset([f])])
    f._dnf = d
    return d


def sorted_conjuncts(d: CanonicalClass) -> List[List[Formula]]:
    return sorted((sorted(c, key=_key) for c in d), key=lambda c: [g.key for g in c])


def _key(f: Formula) -> tuple:
    return f.key


def from_dnf(d: CanonicalClass) -> Formula:
    """The representative formula of a propositional class."""
    if not d:
        return FALSE
    if frozenset() in d:
        return TRUE
    disj = [c[0] if len(c) == 1 else _make(AND, "", tuple(c)) for c in sorted_conjuncts(d)]
    rep = disj[0] if len(disj) == 1 else _make(OR, "", tuple(disj))
    if rep._dnf is None:
        rep._dnf = d
    return rep


def canon(f: Formula) -> Formula:
    """Representative of the propositional class of ``f``."""
    return from_dnf(canonicalize(f))


def prop_equiv(f: Formula, g: Formula) -> bool:
    return canonicalize(f) == canonicalize(g)


# ------------------------------------------------------------------ after (af)

def _af_dnf(f: Formula, letter: Letter) -> CanonicalClass:
    op = f.op
    if op == TT:
        return _DNF_TRUE
    if op == FF:
        return _DNF_FALSE
    if op == AP:
        return _DNF_TRUE if f.name in letter else _DNF_FALSE
    if op == NAP:
        return _DNF_FALSE if f.name in letter else _DNF_TRUE
    if op == AND:
        d = _DNF_TRUE
        for a in f.args:
            d = _dnf_and(d, _af_dnf(a, letter))
            if not d:
                break
        return d
    if op == OR:
        d = _DNF_FALSE
        for a in f.args:
            d = _dnf_or(d, _af_dnf(a, letter))
        return d
    if op == NEXT:
        return canonicalize(f.args[0])
    if op == GLOB:
        return _dnf_and(_af_dnf(f.args[0], letter), frozenset([frozenset([f])]))
    if op == FIN:
        return _dnf_or(_af_dnf(f.args[0], letter), frozenset([frozenset([f])]))
    if op == UNTIL:
        keep = _dnf_and(_af_dnf(f.args[0], letter), frozenset([frozenset([f])]))
        return _dnf_or(_af_dnf(f.args[1], letter), keep)
    raise NNFError(f"af is defined on NNF formulas only, got {to_text(f)}")


def af_step(f: Formula, letter: Letter) -> Formula:
    """``f`` after reading one letter (a set of true atoms), as the
    representative of its propositional class."""
    r = f._af.get(letter)
    if r is None:
        r = from_dnf(_af_dnf(f, letter))
        f._af[letter] = r
    return r


def af_word(f: Formula, word: Iterable[Letter]) -> Formula:
    for letter in word:
        f = af_step(f, letter)
    return f


# ---------------------------------------------------------------- substitution

def substitute(f: Formula, true_set: FrozenSet[Formula], false_set: FrozenSet[Formula]) -> Formula:
    """Replace maximal occurrences of ``true_set`` members by tt and of
    ``false_set`` members by ff (not canonicalized)."""
    memo: Dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is not None:
            return r
        if g in true_set:
            r = TRUE
        elif g in false_set:
            r = FALSE
        elif g.op == AND:
            r = mk_and(*(go(a) for a in g.args))
        elif g.op == OR:
            r = mk_or(*(go(a) for a in g.args))
        elif g.op == NEXT:
            r = mk_next(go(g.args[0]))
        elif g.op == FIN:
            r = mk_finally(go(g.args[0]))
        elif g.op == GLOB:
            r = mk_globally(go(g.args[0]))
        elif g.op == UNTIL:
            r = mk_until(go(g.args[0]), go(g.args[1]))
        elif g.op == NOT:
            r = Not(go(g.args[0]))
        else:
            r = g
        memo[g] = r
        return r

    return go(f)


def substitute_gset(f: Formula, gset: FrozenSet[Formula], all_g: FrozenSet[Formula]) -> Formula:
    """``f[G]``: G-formulas in ``gset`` become tt, the rest of ``all_g`` ff."""
    return canon(substitute(f, frozenset(gset), frozenset(all_g) - frozenset(gset)))


# ------------------------------------------------------------------- semantics

def eval_positions(f: Formula, letters: List[Letter], loop: int) -> Dict[Formula, List[bool]]:
    """Truth value of every subformula at every position of the lasso graph
    whose positions are ``letters`` and whose last position loops back to
    ``loop``."""
    n = len(letters)
    nxt = list(range(1, n)) + [loop]
    val: Dict[Formula, List[bool]] = {}
    for g in subformulas(f):
        op = g.op
        if op == TT:
            v = [True] * n
        elif op == FF:
            v = [False] * n
        elif op == AP:
            v = [g.name in a for a in letters]
        elif op == NAP:
            v = [g.name not in a for a in letters]
        elif op == NOT:
            v = [not x for x in val[g.args[0]]]
        elif op == AND:
            kids = [val[a] for a in g.args]
            v = [all(k[i] for k in kids) for i in range(n)]
        elif op == OR:
            kids = [val[a] for a in g.args]
            v = [any(k[i] for k in kids) for i in range(n)]
        elif op == NEXT:
            c = val[g.args[0]]
            v = [c[nxt[i]] for i in range(n)]
        elif op in (UNTIL, FIN):
            lhs = [True] * n if op == FIN else val[g.args[0]]
            rhs = val[g.args[-1]]
            v = [False] * n  # least fixpoint
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    x = rhs[i] or (lhs[i] and v[nxt[i]])
                    if x != v[i]:
                        v[i] = x
                        changed = True
        elif op == GLOB:
            c = val[g.args[0]]
            v = [True] * n  # greatest fixpoint
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    x = c[i] and v[nxt[i]]
                    if x != v[i]:
                        v[i] = x
                        changed = True
        else:
            raise ValueError(f"unknown node {op}")
        val[g] = v
    return val


def eval_lasso(f: Formula, w) -> bool:
    """Ground-truth LTL semantics on the ultimately periodic word ``w``."""
    letters = list(w.prefix) + list(w.period)
    return eval_positions(f, letters, len(w.prefix))[f][0]


# -------------------------------------------------------------- classification

PURE_EVENTUAL, XA_SAFETY, OTHER = "pure-eventual", "x-a-safety", "other"


def _pure_eventual(f: Formula) -> bool:
    if f.op == FIN:
        return True
    if f.op in (AND, OR):
        return all(_pure_eventual(a) for a in f.args)
    return False


def classify_fragment(f: Formula) -> str:
    if _pure_eventual(f):
        return PURE_EVENTUAL
    if all(g.op in (TT, FF, AP, NAP, AND, OR, NEXT) for g in subformulas(f)):
        return XA_SAFETY
    return OTHER


# -------------------------------------------------------------------- printing

def to_text(f: Formula) -> str:
    t = f._text
    if t is None:
        t = _render(f)
        f._text = t
    return t


def _render(f: Formula) -> str:
    op = f.op
    if op in (TT, FF):
        return op
    if op == AP:
        return f.name
    if op == NAP:
        return "!" + f.name
    if op in (NOT, NEXT, FIN, GLOB):
        inner = to_text(f.args[0])
        return "!" + inner if op == NOT else f"{op} {inner}"
    if op == UNTIL:
        return f"({to_text(f.args[0])} U {to_text(f.args[1])})"
    sep = " & " if op == AND else " | "
    return "(" + sep.join(to_text(a) for a in f.args) + ")"


def iter_letters(aps: Iterable[str]) -> Iterator[Letter]:
    """All subsets of ``aps``; bit ``j`` of the index selects ``sorted(aps)[j]``."""
    names = sorted(aps)
    for i in range(1 << len(names)):
        yield frozenset(n for j, n in enumerate(names) if i >> j & 1)

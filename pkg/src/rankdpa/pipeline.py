"""End-to-end translation, the negation race, cross-validation, random
LDBAs and the parametric benchmark families."""
from __future__ import annotations

import csv
import io
import random
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from .automata import (
    Dpa,
    Ldba,
    compress_colors,
    complement_dpa,
    dpa_accepts_lasso,
    eliminate_jumps,
    is_initial_deterministic,
    ldba_accepts_lasso,
    minimize_dpa,
    normalize_colors,
    validate_ldba,
)
from .determinize import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Cancelled,
    CancelToken,
    WidthReport,
    choose_ord,
    construct,
    syntactic_oracle,
    width_check,
)
from .ltl import Formula, NNFError, Not, atoms, eval_lasso, parse_ltl, to_nnf
from .ltl2ldba import translate
from .rundag import color_summary
from .tables import LassoSpace, dpa_table, eval_table, first_mismatch, ldba_table, rundag_table
from .words import LassoWord


@dataclass
class PipelineConfig:
    reduce: bool = True
    compress: bool = True
    minimize: bool = True
    keep_smallest: bool = False
    race: bool = False
    budget: int = DEFAULT_BUDGET
    ldba_budget: int = DEFAULT_BUDGET
    output_format: str = "hoa"
    seed: int = 0
    max_prefix: int = 3
    max_period: int = 3
    samples: Optional[int] = None
    max_aps: int = 8

    def __post_init__(self) -> None:
        if self.budget <= 0 or self.ldba_budget <= 0:
            raise ValueError("budgets must be positive")
        if self.max_period < 1 or self.max_prefix < 0:
            raise ValueError("lasso bounds need max_prefix >= 0 and max_period >= 1")


@dataclass
class PipelineResult:
    """A translated automaton plus its statistics.  ``negated`` is set when
    the DPA is the complement of the automaton for the negated formula."""

    dpa: Dpa
    ldba: Ldba
    formula: Optional[Formula]
    raw_states: int
    max_t: int
    max_s: int
    base_m: int
    millis: float
    width: WidthReport
    negated: bool = False

    @property
    def stats(self) -> Dict[str, object]:
        return {
            "states": self.dpa.num_states,
            "colors": len(self.dpa.used_colors()),
            "max_color": self.dpa.max_color,
            "raw_states": self.raw_states,
            "ldba_states": self.ldba.num_states,
            "qd": len(self.ldba.qd),
            "max_t": self.max_t,
            "max_s": self.max_s,
            "base_m": self.base_m,
            "width": str(self.width),
            "negated": self.negated,
            "millis": round(self.millis, 3),
        }


def formula_of(source: Union[str, Formula]) -> Formula:
    f = parse_ltl(source) if isinstance(source, str) else source
    return to_nnf(f)


def postprocess(d: Dpa, cfg: PipelineConfig) -> Dpa:
    if cfg.minimize:
        d = minimize_dpa(normalize_colors(d))
    if cfg.compress:
        d = compress_colors(d)
    return d


def determinize(ldba: Ldba, cfg: PipelineConfig, cancel: Optional[CancelToken] = None):
    """Jump-free LDBA to (construction, oracle) under ``cfg``."""
    oracle = None
    if cfg.reduce and (ldba.base is not None or ldba.labels is not None):
        oracle = syntactic_oracle(ldba)
    c = construct(ldba, choose_ord(ldba), oracle, cfg.keep_smallest, budget=cfg.budget,
                  cancel=cancel)
    return c, oracle


def translate_ldba(ldba: Ldba, cfg: PipelineConfig, formula: Optional[Formula] = None,
                   cancel: Optional[CancelToken] = None, t0: Optional[float] = None) -> PipelineResult:
    t0 = time.perf_counter() if t0 is None else t0
    ldba = eliminate_jumps(ldba)
    problems = validate_ldba(ldba)
    if problems:
        raise ValueError("not a valid LDBA: " + "; ".join(problems))
    c, oracle = determinize(ldba, cfg, cancel)
    report = width_check(oracle, c)
    d = postprocess(c.dpa, cfg)
    return PipelineResult(d, ldba, formula, c.dpa.num_states, c.max_t, c.max_s,
                          oracle.size if oracle else 0, (time.perf_counter() - t0) * 1000, report)


def translate_pipeline(source: Union[str, Formula], cfg: Optional[PipelineConfig] = None,
                       cancel: Optional[CancelToken] = None) -> PipelineResult:
    """Formula text (or formula) to DPA: NNF, LDBA, ranking construction,
    optional reduction, then color normalization."""
    cfg = cfg or PipelineConfig()
    if cfg.race and cancel is None:
        return negation_race(source, cfg)
    t0 = time.perf_counter()
    phi = formula_of(source)
    if len(atoms(phi)) > cfg.max_aps:
        raise ValueError(f"{len(atoms(phi))} propositions exceed the limit of {cfg.max_aps}")
    ldba = translate(phi, budget=cfg.ldba_budget, cancel=cancel)
    return translate_ldba(ldba, cfg, phi, cancel, t0)


# -------------------------------------------------------------------- race

def negation_race(source: Union[str, Formula], cfg: Optional[PipelineConfig] = None) -> PipelineResult:
    """Translate the formula and its negation on two threads and keep the
    smaller determinization (complementing the negated one).  Sizes are
    ranking-state counts before post-processing; ties go to the formula.
    Once one side finishes, the other is cancelled as soon as its explored
    count shows it cannot win, so the outcome never depends on timing."""
    cfg = replace(cfg or PipelineConfig(), race=False)
    phi = formula_of(source)
    try:
        neg = to_nnf(Not(phi))
    except NNFError:
        return translate_pipeline(phi, cfg)
    tokens = {"phi": CancelToken(), "neg": CancelToken()}
    results: Dict[str, object] = {}
    lock = threading.Lock()

    def run(side: str, f: Formula) -> None:
        try:
            r = translate_pipeline(f, cfg, cancel=tokens[side])
        except Exception as exc:  # reported to the controller
            with lock:
                results[side] = exc
            return
        with lock:
            results[side] = r
            other = "neg" if side == "phi" else "phi"
            if other not in results:
                # the other side loses once it explores more states (or, for
                # the negation, as many: ties go to the formula)
                tokens[other].limit = r.raw_states if other == "phi" else r.raw_states - 1

    threads = [threading.Thread(target=run, args=("phi", phi), daemon=True),
               threading.Thread(target=run, args=("neg", neg), daemon=True)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    a, b = results.get("phi"), results.get("neg")
    ok_a, ok_b = isinstance(a, PipelineResult), isinstance(b, PipelineResult)
    if not ok_a and not ok_b:
        raise a if not isinstance(a, Cancelled) else b
    if ok_a and (not ok_b or a.raw_states <= b.raw_states):
        return a
    # complement the negation's DPA; parity shifts, states stay
    d = postprocess(complement_dpa(b.dpa), cfg)
    return replace(b, dpa=d, formula=phi, negated=True)


# ---------------------------------------------------------- crossvalidation

@dataclass
class CheckReport:
    """Outcome of comparing several acceptors on a set of lassos."""

    checked: int
    acceptors: List[str]
    counterexample: Optional[LassoWord] = None
    disagreeing: Tuple[str, ...] = ()
    verdicts: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.counterexample is None and not any(n.startswith("FAIL") for n in self.notes)

    def __str__(self) -> str:
        lines = [f"checked {self.checked} lassos against: {', '.join(self.acceptors)}"]
        lines += self.notes
        if self.counterexample is None:
            lines.append("all agree")
        else:
            lines.append(f"counterexample: {self.counterexample}")
            lines += [f"  {k}: {'accept' if v else 'reject'}" for k, v in self.verdicts.items()]
        return "\n".join(lines)


def _random_lassos(alphabet, max_prefix: int, max_period: int, samples: int, seed: int):
    rng = random.Random(seed)
    for _ in range(samples):
        u = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_prefix)))
        v = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_period)))
        yield LassoWord(u, v)


def crossvalidate_automata(ldba: Ldba, dpas: Dict[str, Dpa], formula: Optional[Formula] = None,
                           max_prefix: int = 3, max_period: int = 3, samples: Optional[int] = None,
                           seed: int = 0, run_dags: Optional[Dict[str, object]] = None) -> CheckReport:
    """Compare the formula (if any), the LDBA, run-DAG summaries and every DPA
    on all lassos within the bounds (or on ``samples`` random lassos)."""
    alphabet = ldba.alphabet
    run_dags = run_dags or {}
    names = (["ltl"] if formula is not None else []) + ["ldba"] + list(run_dags) + list(dpas)
    if samples is None:
        space = LassoSpace(len(alphabet), max_prefix, max_period)
        tables: Dict[str, np.ndarray] = {}
        if formula is not None:
            tables["ltl"] = eval_table(space, formula, alphabet)
        tables["ldba"] = ldba_table(space, ldba)
        for k, (ordering, oracle, kw) in run_dags.items():
            tables[k] = rundag_table(space, ldba, ordering, oracle, **kw)
        for k, d in dpas.items():
            tables[k] = dpa_table(space, d)
        ref = tables[names[0]]
        for k in names[1:]:
            w = first_mismatch(space, alphabet, ref, tables[k])
            if w is not None:
                return _disagreement(space.size, names, w, ldba, dpas, formula, run_dags)
        return CheckReport(space.size, names)
    n = 0
    for w in _random_lassos(alphabet, max_prefix, max_period, samples, seed):
        n += 1
        verdicts = _verdicts(w, ldba, dpas, formula, run_dags)
        if len(set(verdicts.values())) > 1:
            return _disagreement(n, names, w, ldba, dpas, formula, run_dags)
    return CheckReport(n, names)


def _verdicts(w, ldba, dpas, formula, run_dags) -> Dict[str, bool]:
    out: Dict[str, bool] = {}
    if formula is not None:
        out["ltl"] = eval_lasso(formula, w)
    out["ldba"] = ldba_accepts_lasso(ldba, w)
    for k, (ordering, oracle, kw) in run_dags.items():
        out[k] = color_summary(ldba, ordering, w, oracle, **kw) % 2 == 0
    for k, d in dpas.items():
        out[k] = dpa_accepts_lasso(d, w)
    return out


def _disagreement(n, names, w, ldba, dpas, formula, run_dags) -> CheckReport:
    verdicts = _verdicts(w, ldba, dpas, formula, run_dags)
    ref = verdicts[names[0]]
    bad = tuple(k for k, v in verdicts.items() if v != ref)
    return CheckReport(n, names, w, bad, verdicts)


def crossvalidate(source: Union[str, Formula, Ldba], cfg: Optional[PipelineConfig] = None) -> CheckReport:
    """Full agreement check for a formula or an LDBA: plain, reduced and
    post-processed DPAs, run-DAG summaries, the LDBA and (for formulas) the
    LTL semantics.  Also checks the size, color and width bounds."""
    cfg = cfg or PipelineConfig()
    if isinstance(source, Ldba):
        phi, ldba = None, eliminate_jumps(source)
    else:
        phi = formula_of(source)
        ldba = eliminate_jumps(translate(phi, budget=cfg.ldba_budget))
    notes: List[str] = []
    problems = validate_ldba(ldba)
    if problems:
        return CheckReport(0, [], notes=["FAIL invalid LDBA: " + "; ".join(problems)])
    ordering = choose_ord(ldba)
    plain = construct(ldba, ordering, budget=cfg.budget)
    dpas = {"dpa": plain.dpa}
    run_dags = {"rundag": (ordering, None, {})}
    bound = 2 * len(ldba.qd) + 1
    if max(plain.dpa.used_colors(), default=1) > bound:
        notes.append(f"FAIL color bound: {max(plain.dpa.used_colors())} > {bound}")
    if ldba.base is not None or ldba.labels is not None:
        oracle = syntactic_oracle(ldba)
        red = construct(ldba, ordering, oracle, cfg.keep_smallest, budget=cfg.budget)
        dpas["reduced"] = red.dpa
        run_dags["reduced-rundag"] = (ordering, oracle, {"keep_smallest": cfg.keep_smallest})
        dpas["final"] = postprocess(red.dpa, cfg)
        rep = width_check(oracle, red)
        notes.append(str(rep))
        if not rep.holds:
            notes.append("FAIL width bound")
        if red.dpa.num_states > plain.dpa.num_states:
            notes.append(f"FAIL reduction enlarged the DPA: {red.dpa.num_states} > "
                         f"{plain.dpa.num_states}")
        if is_initial_deterministic(ldba) and red.max_s > 1:
            notes.append("FAIL |s| > 1 for an initial-deterministic LDBA")
    else:
        dpas["final"] = postprocess(plain.dpa, cfg)
    report = crossvalidate_automata(ldba, dpas, phi, cfg.max_prefix, cfg.max_period,
                                    cfg.samples, cfg.seed, run_dags)
    report.notes = notes + report.notes
    return report


# --------------------------------------------------------------- generator

def letter_names(n: int) -> Tuple[str, ...]:
    return tuple(chr(ord("a") + i) if n <= 26 else f"l{i}" for i in range(n))


def rand_ldba(seed: int, n_states: int, n_sigma: int = 2, density: float = 0.3,
              acc_density: float = 0.3, n_qd: Optional[int] = None) -> Ldba:
    """Random valid LDBA.  States ``0..k-1`` form the initial part (0 is the
    initial state), ``k..n-1`` the deterministic part."""
    if n_states < 2:
        raise ValueError("need at least two states")
    rng = random.Random(seed)
    if n_qd is None:
        n_qd = rng.randint(1, n_states - 1)
    if not 1 <= n_qd <= n_states - 1:
        raise ValueError("deterministic part must have between 1 and n-1 states")
    k = n_states - n_qd
    qd = list(range(k, n_states))
    succ: List[Tuple[Tuple[int, ...], ...]] = []
    accepting = set()
    for q in range(n_states):
        row = []
        for x in range(n_sigma):
            if q >= k:
                r = rng.choice(qd)
                if rng.random() < acc_density:
                    accepting.add((q, x, r))
                row.append((r,))
            else:
                targets = {r for r in range(n_states) if rng.random() < density}
                if not targets:
                    targets = {rng.randrange(n_states)}
                row.append(tuple(sorted(targets)))
        succ.append(tuple(row))
    return Ldba(alphabet=letter_names(n_sigma), succ=tuple(succ), initial=0,
                qd=frozenset(qd), accepting=frozenset(accepting))


# -------------------------------------------------------------- benchmarks

FAMILIES = ("r", "g", "f", "theta")


def family_formula(family: str, n: int) -> str:
    """The parametric families as formula text."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = range(1, n + 1)
    if family == "r":
        return " & ".join(f"(G F p{i} | F G p{i + 1})" for i in rng)
    if family == "g":
        left = " & ".join(f"G F p{i}" for i in rng)
        right = " & ".join(f"G F q{i}" for i in rng)
        return f"({left}) -> ({right})"
    if family == "f":
        return " & ".join(f"(G F p{i} -> G F q{i})" for i in rng)
    if family == "theta":
        left = " & ".join(f"G F p{i}" for i in rng)
        return f"!(({left}) -> G (q -> F r))"
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


@dataclass
class BenchRecord:
    family: str
    n: int
    states: Optional[int]
    colors: Optional[int]
    max_t: Optional[int]
    base_m: Optional[int]
    millis: float
    ok: Optional[bool] = None

    FIELDS = ("family", "n", "states", "colors", "max_t", "base_m", "millis")

    def row(self) -> List[object]:
        return [self.family, self.n, "" if self.states is None else self.states,
                "" if self.colors is None else self.colors,
                "" if self.max_t is None else self.max_t,
                "" if self.base_m is None else self.base_m, f"{self.millis:.1f}"]


def bench_families(families: Iterable[str], ns: Iterable[int], cfg: Optional[PipelineConfig] = None,
                   out: Optional[TextIO] = None, validate: bool = False) -> List[BenchRecord]:
    """Translate every (family, n); write CSV rows to ``out`` as they finish.
    A budget overrun is recorded with empty size columns."""
    cfg = cfg or PipelineConfig()
    writer = csv.writer(out) if out is not None else None
    if writer:
        writer.writerow(BenchRecord.FIELDS)
    records = []
    ns = list(ns)
    for fam in families:
        for n in ns:
            text = family_formula(fam, n)
            t0 = time.perf_counter()
            try:
                r = translate_pipeline(text, cfg)
            except BudgetExceeded:
                rec = BenchRecord(fam, n, None, None, None, None, (time.perf_counter() - t0) * 1000)
            else:
                rec = BenchRecord(fam, n, r.dpa.num_states, len(r.dpa.used_colors()), r.max_t,
                                  r.base_m, r.millis)
                if validate:
                    rec.ok = crossvalidate(text, cfg).ok
            records.append(rec)
            if writer:
                writer.writerow(rec.row())
                if hasattr(out, "flush"):
                    out.flush()
    return records


def bench_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(BenchRecord.FIELDS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


__all__ = [
    "PipelineConfig", "PipelineResult", "translate_pipeline", "translate_ldba", "negation_race",
    "CheckReport", "crossvalidate", "crossvalidate_automata", "rand_ldba", "family_formula",
    "BenchRecord", "bench_families", "bench_csv", "FAMILIES", "postprocess",
]

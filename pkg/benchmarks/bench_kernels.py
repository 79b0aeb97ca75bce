"""Time the compiled ranking kernel against the pure-Python one.

Both kernels build the same DPA (the test suite checks this), so the only
difference is speed.  Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--n-max 2] [--random 40]
"""
import argparse
import sys
import time

from rankdpa.automata import eliminate_jumps
from rankdpa.determinize import choose_ord, construct, syntactic_oracle
from rankdpa.kernels import CompiledKernel, PurePythonKernel
from rankdpa.ltl import parse_ltl, to_nnf
from rankdpa.ltl2ldba import translate
from rankdpa.pipeline import FAMILIES, family_formula, rand_ldba


def workloads(n_max, n_random, random_states):
    for fam in FAMILIES:
        for n in range(1, n_max + 1):
            ldba = eliminate_jumps(translate(to_nnf(parse_ltl(family_formula(fam, n)))))
            yield f"{fam}{n}", ldba, choose_ord(ldba), syntactic_oracle(ldba)
    batch = [rand_ldba(seed, random_states) for seed in range(n_random)]
    yield f"random x{n_random}", batch, None, None


def run_once(kernel, ldba, ordering, oracle):
    if isinstance(ldba, list):
        states = 0
        for a in ldba:
            states += construct(a, kernel_cls=kernel).dpa.num_states
        return states
    return construct(ldba, ordering, oracle, kernel_cls=kernel).dpa.num_states


def best_time(kernel, work, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        states = run_once(kernel, *work)
        times.append(time.perf_counter() - t0)
    return min(times), states


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--random", type=int, default=40, help="number of random LDBAs")
    p.add_argument("--random-states", type=int, default=7)
    args = p.parse_args(argv)
    if CompiledKernel is None:
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'workload':<12} {'states':>7} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for name, *work in workloads(args.n_max, args.random, args.random_states):
        pure, s1 = best_time(PurePythonKernel, work, args.repeat)
        comp, s2 = best_time(CompiledKernel, work, args.repeat)
        assert s1 == s2, f"{name}: kernels disagree ({s1} vs {s2} states)"
        print(f"{name:<12} {s1:>7} {pure:>10.4f} {comp:>13.4f} {pure / comp:>7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Pure-Python ranking-state step (fallback for the compiled kernel)."""


class RankingKernel:
    """One step of the ranking construction on flat integer tables.

    nd_succ[q*L+a]  successors of a nondeterministic-part state (tuple)
    d_succ[q*L+a]   unique successor of a deterministic-part state, else -1
    d_acc[q*L+a]    1 when that deterministic transition is accepting
    in_qd[q]        1 for deterministic-part states
    ord_rank[q]     rank of q under the ordering (deterministic part only)
    base[q]         base-index bitmask of q, or None for no reduction
    """

    compiled = False

    def __init__(self, n_states, n_letters, nd_succ, d_succ, d_acc, in_qd, ord_rank,
                 n_qd, base=None, keep_smallest=False, redirect_as_merge=True):
        self.n_states = n_states
        self.n_letters = n_letters
        self.nd_succ = list(nd_succ)
        self.d_succ = list(d_succ)
        self.d_acc = list(d_acc)
        self.in_qd = list(in_qd)
        self.ord_rank = list(ord_rank)
        self.n_qd = n_qd
        self.base = None if base is None else list(base)
        self.keep_smallest = keep_smallest
        self.redirect_as_merge = redirect_as_merge

    def step(self, s, t, a):
        """Return ``(s2, t2, color)`` for ranking state ``(s, t)`` and letter
        index ``a``; ``s`` is a sorted tuple, ``t`` an ordered tuple."""
        L = self.n_letters
        in_qd = self.in_qd
        s2 = set()
        fresh = set()
        for q in s:
            for r in self.nd_succ[q * L + a]:
                if in_qd[r]:
                    fresh.add(r)
                else:
                    s2.add(r)
        d_succ = self.d_succ
        t2 = []
        pos = {}
        for q in t:
            r = d_succ[q * L + a]
            if r not in pos:
                pos[r] = len(t2)
                t2.append(r)
        if fresh:
            rank = self.ord_rank
            t2.extend(sorted((r for r in fresh if r not in pos), key=rank.__getitem__))
        if self.base is not None:
            base = self.base
            kept = []
            union = 0
            for r in t2:
                m = base[r]
                if m & ~union == 0 and (kept or not self.keep_smallest):
                    continue
                kept.append(r)
                union |= m
            t2 = kept
        pos = {r: i for i, r in enumerate(t2)}
        dec = acc = 0
        d_acc = self.d_acc
        for i, q in enumerate(t):
            k = q * L + a
            j = pos.get(d_succ[k])
            if j is None:
                if self.redirect_as_merge or (i > 0 and t2):
                    if not dec:
                        dec = i + 1
            else:
                if j < i and not dec:
                    dec = i + 1
                if d_acc[k] and not acc:
                    acc = i + 1
        if dec and acc:
            color = min(2 * dec - 1, 2 * acc)
        elif dec:
            color = 2 * dec - 1
        elif acc:
            color = 2 * acc
        else:
            color = 2 * self.n_qd + 1
        return tuple(sorted(s2)), tuple(t2), color

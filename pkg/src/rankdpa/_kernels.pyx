# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled ranking-state step.  Mirrors ``_kernels_py.RankingKernel``."""

from libc.stdlib cimport malloc, free


cdef class RankingKernel:
    cdef int n_states, n_letters, n_qd
    cdef int *d_succ
    cdef unsigned char *d_acc
    cdef unsigned char *in_qd
    cdef int *ord_rank
    cdef int *pos
    cdef int *buf
    cdef list nd_succ
    cdef list base
    cdef bint keep_smallest, redirect_as_merge, reduce

    compiled = True

    def __cinit__(self, int n_states, int n_letters, nd_succ, d_succ, d_acc, in_qd,
                  ord_rank, int n_qd, base=None, keep_smallest=False,
                  redirect_as_merge=True):
        cdef Py_ssize_t i, m = n_states * n_letters
        self.n_states = n_states
        self.n_letters = n_letters
        self.n_qd = n_qd
        self.d_succ = <int *> malloc(max(m, 1) * sizeof(int))
        self.d_acc = <unsigned char *> malloc(max(m, 1))
        self.in_qd = <unsigned char *> malloc(max(n_states, 1))
        self.ord_rank = <int *> malloc(max(n_states, 1) * sizeof(int))
        self.pos = <int *> malloc(max(n_states, 1) * sizeof(int))
        self.buf = <int *> malloc(max(n_states, 1) * sizeof(int))
        if not (self.d_succ and self.d_acc and self.in_qd and self.ord_rank
                and self.pos and self.buf):
            raise MemoryError()
        for i in range(m):
            self.d_succ[i] = d_succ[i]
            self.d_acc[i] = 1 if d_acc[i] else 0
        for i in range(n_states):
            self.in_qd[i] = 1 if in_qd[i] else 0
            self.ord_rank[i] = ord_rank[i]
            self.pos[i] = -1
        self.nd_succ = list(nd_succ)
        self.reduce = base is not None
        self.base = list(base) if base is not None else []
        self.keep_smallest = keep_smallest
        self.redirect_as_merge = redirect_as_merge

    def __dealloc__(self):
        free(self.d_succ)
        free(self.d_acc)
        free(self.in_qd)
        free(self.ord_rank)
        free(self.pos)
        free(self.buf)

    def step(self, tuple s, tuple t, int a):
        cdef int L = self.n_letters
        cdef int q, r, i, j, k, n2 = 0, nfresh = 0, key, dec = 0, acc = 0, color
        cdef int *pos = self.pos
        cdef int *buf = self.buf
        cdef list s2 = []
        cdef list t2
        cdef object union, mask

        # continuing runs keep the order of their first (minimal) parent
        for i in range(len(t)):
            q = t[i]
            r = self.d_succ[q * L + a]
            if pos[r] < 0:
                pos[r] = n2
                buf[n2] = r
                n2 += 1
        # fresh runs from the nondeterministic part, ordered by rank
        for q in s:
            for r in self.nd_succ[q * L + a]:
                if self.in_qd[r]:
                    if pos[r] < 0:
                        pos[r] = n2 + nfresh
                        buf[n2 + nfresh] = r
                        nfresh += 1
                elif r not in s2:
                    s2.append(r)
        for i in range(n2 + 1, n2 + nfresh):
            key = buf[i]
            j = i - 1
            while j >= n2 and self.ord_rank[buf[j]] > self.ord_rank[key]:
                buf[j + 1] = buf[j]
                j -= 1
            buf[j + 1] = key
        n2 += nfresh
        for i in range(n2):
            pos[buf[i]] = -1

        if self.reduce:
            t2 = []
            union = 0
            for i in range(n2):
                r = buf[i]
                mask = self.base[r]
                if (mask & ~union) == 0 and (len(t2) > 0 or not self.keep_smallest):
                    continue
                t2.append(r)
                union = union | mask
            n2 = len(t2)
            for i in range(n2):
                buf[i] = t2[i]
        for i in range(n2):
            pos[buf[i]] = i

        for i in range(len(t)):
            q = t[i]
            k = q * L + a
            j = pos[self.d_succ[k]]
            if j < 0:
                if self.redirect_as_merge or (i > 0 and n2 > 0):
                    if dec == 0:
                        dec = i + 1
            else:
                if j < i and dec == 0:
                    dec = i + 1
                if self.d_acc[k] and acc == 0:
                    acc = i + 1

        t2 = [buf[i] for i in range(n2)]
        for i in range(n2):
            pos[buf[i]] = -1

        if dec and acc:
            color = min(2 * dec - 1, 2 * acc)
        elif dec:
            color = 2 * dec - 1
        elif acc:
            color = 2 * acc
        else:
            color = 2 * self.n_qd + 1
        s2.sort()
        return tuple(s2), tuple(t2), color

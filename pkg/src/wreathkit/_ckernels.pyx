# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in _kernels_py (same signatures)."""
from libc.stdlib cimport malloc, calloc, free


def residue_nonzero(starts, periods, values, int r, Py_ssize_t length, long long modulus, Py_ssize_t limit):
    cdef Py_ssize_t n = len(starts)
    cdef Py_ssize_t s, c, i, st, e
    cdef long long v, x
    cdef long long *acc = <long long *> calloc(length * r, sizeof(long long))
    if acc == NULL:
        raise MemoryError()
    hits = []
    try:
        for s in range(n):
            st = starts[s]
            e = periods[s]
            for c in range(r):
                v = values[s * r + c]
                if v == 0:
                    continue
                i = st
                while i < length:
                    acc[i * r + c] += v
                    i += e
        for i in range(length):
            for c in range(r):
                x = acc[i * r + c]
                if modulus > 0:
                    x = x % modulus
                if x != 0:
                    hits.append(i)
                    break
            if len(hits) >= limit:
                break
    finally:
        free(acc)
    return hits


def table_first_failure(table, seqs, int identity, long long count):
    cdef Py_ssize_t n = len(table)
    cdef Py_ssize_t m = len(seqs)
    cdef Py_ssize_t j, k, total = 0
    cdef long long t
    cdef int acc
    cdef int *tab = <int *> malloc(n * n * sizeof(int))
    cdef int *lens = <int *> malloc((m + 1) * sizeof(int))
    cdef int *offs = <int *> malloc((m + 1) * sizeof(int))
    cdef int *flat
    if tab == NULL or lens == NULL or offs == NULL:
        raise MemoryError()
    for j in range(m):
        lens[j] = len(seqs[j])
        offs[j] = total
        total += lens[j]
    flat = <int *> malloc((total + 1) * sizeof(int))
    try:
        for j in range(n):
            row = table[j]
            for k in range(n):
                tab[j * n + k] = row[k]
        for j in range(m):
            seq = seqs[j]
            for k in range(lens[j]):
                flat[offs[j] + k] = seq[k]
        for t in range(count):
            acc = identity
            for j in range(m):
                acc = tab[acc * n + flat[offs[j] + (t % lens[j])]]
            if acc != identity:
                return t
        return -1
    finally:
        free(tab)
        free(lens)
        free(offs)
        free(flat)

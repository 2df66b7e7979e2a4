"""Pure-Python versions of the hot loops (the fallback for ``_ckernels``)."""
from __future__ import annotations


def residue_nonzero(starts, periods, values, r, length, modulus, limit):
    """Window indices i in [0, length) where sum of values[s] over the
    progressions s with i = starts[s] (mod periods[s]) is nonzero.

    ``values`` is flat, r entries per progression.  Stops after ``limit``
    hits.  With ``modulus`` > 0 sums are taken mod modulus.
    """
    acc = [[0] * length for _ in range(r)]
    for s, (st, e) in enumerate(zip(starts, periods)):
        base = s * r
        for c in range(r):
            v = values[base + c]
            if v:
                row = acc[c]
                for i in range(st, length, e):
                    row[i] += v
    hits = []
    for i in range(length):
        for c in range(r):
            x = acc[c][i]
            if (x % modulus if modulus else x):
                hits.append(i)
                break
        if len(hits) >= limit:
            break
    return hits


def table_first_failure(table, seqs, identity, count):
    """First t < count with prod_j seqs[j][t mod len] != identity, else -1.

    Elements are indices into the Cayley ``table`` (a list of rows).
    """
    for t in range(count):
        acc = identity
        for seq in seqs:
            acc = table[acc][seq[t % len(seq)]]
        if acc != identity:
            return t
    return -1

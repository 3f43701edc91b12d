# cython: language_level=3, boundscheck=False, wraparound=False
"""C implementation of the Levenshtein inner loop used by the similarity module."""

from libc.stdlib cimport free, malloc


def levenshtein(str s, str t):
    """Edit distance (insert/delete/substitute, unit costs) between two strings."""
    cdef Py_ssize_t n = len(s)
    cdef Py_ssize_t m = len(t)
    if n == 0:
        return m
    if m == 0:
        return n
    # keep the inner row the shorter one
    if m > n:
        s, t = t, s
        n, m = m, n

    cdef int *prev = <int *> malloc((m + 1) * sizeof(int))
    cdef int *curr = <int *> malloc((m + 1) * sizeof(int))
    if prev == NULL or curr == NULL:
        if prev != NULL:
            free(prev)
        if curr != NULL:
            free(curr)
        raise MemoryError()

    cdef Py_ssize_t i, j
    cdef int cost, best, tmp
    cdef Py_UCS4 sc
    cdef int *swap

    try:
        for j in range(m + 1):
            prev[j] = <int> j
        for i in range(1, n + 1):
            sc = s[i - 1]
            curr[0] = <int> i
            for j in range(1, m + 1):
                cost = 0 if sc == <Py_UCS4> t[j - 1] else 1
                best = prev[j - 1] + cost
                tmp = prev[j] + 1
                if tmp < best:
                    best = tmp
                tmp = curr[j - 1] + 1
                if tmp < best:
                    best = tmp
                curr[j] = best
            swap = prev
            prev = curr
            curr = swap
        return prev[m]
    finally:
        free(prev)
        free(curr)

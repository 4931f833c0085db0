# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled order-relation and cover kernels for the redundancy lattice."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint8_t, int64_t

cnp.import_array()


def order_matrix(node_bits, up_bits):
    """``le[i, j]`` is True iff every member of node j lies in the up-set of node i."""
    cdef const uint32_t[::1] nb = np.ascontiguousarray(node_bits, dtype=np.uint32)
    cdef const uint32_t[::1] ub = np.ascontiguousarray(up_bits, dtype=np.uint32)
    cdef Py_ssize_t n = nb.shape[0]
    out = np.empty((n, n), dtype=np.bool_)
    cdef uint8_t[:, ::1] le = out.view(np.uint8)
    cdef Py_ssize_t i, j
    cdef uint32_t missing
    for i in range(n):
        missing = ~ub[i]
        for j in range(n):
            le[i, j] = (nb[j] & missing) == 0
    return out


def cover_pairs(le_matrix):
    """Cover edges ``(child, parent)`` of a partial order.

    Node indices must form a linear extension (``i`` below ``j`` implies
    ``i < j``). Candidates under each parent are scanned from the top down;
    a candidate is a cover iff it sits below no cover found so far.
    """
    cdef const uint8_t[:, ::1] le = np.ascontiguousarray(le_matrix).view(np.uint8)
    cdef Py_ssize_t n = le.shape[0]
    cdef int64_t[::1] found = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, j, k, nfound, total = 0
    cdef bint dominated
    children = []
    parents = []
    for j in range(n):
        nfound = 0
        for i in range(j - 1, -1, -1):
            if not le[i, j]:
                continue
            dominated = False
            for k in range(nfound):
                if le[i, found[k]]:
                    dominated = True
                    break
            if not dominated:
                found[nfound] = i
                nfound += 1
        for k in range(nfound):
            children.append(found[k])
            parents.append(j)
    return np.asarray(children, dtype=np.int64), np.asarray(parents, dtype=np.int64)

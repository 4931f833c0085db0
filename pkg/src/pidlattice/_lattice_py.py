"""Numpy implementations of the lattice kernels (used when the compiled
extension is unavailable)."""
import numpy as np

_CHUNK = 1024


def order_matrix(node_bits, up_bits):
    nb = np.asarray(node_bits, dtype=np.uint32)
    missing = ~np.asarray(up_bits, dtype=np.uint32)
    out = np.empty((nb.size, nb.size), dtype=bool)
    for lo in range(0, nb.size, _CHUNK):
        hi = min(lo + _CHUNK, nb.size)
        out[lo:hi] = (missing[lo:hi, None] & nb[None, :]) == 0
    return out


def cover_pairs(le_matrix):
    le = np.asarray(le_matrix, dtype=bool)
    n = le.shape[0]
    # below[j, i]: i strictly below j
    below = le.T.copy()
    np.fill_diagonal(below, False)
    below_f = below.astype(np.float32)
    children, parents = [], []
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        between = below_f[lo:hi] @ below_f
        p, c = np.nonzero(below[lo:hi] & (between == 0))
        parents.append(p + lo)
        children.append(c)
    children = np.concatenate(children) if children else np.empty(0, np.int64)
    parents = np.concatenate(parents) if parents else np.empty(0, np.int64)
    order = np.lexsort((-children, parents))
    return children[order].astype(np.int64), parents[order].astype(np.int64)

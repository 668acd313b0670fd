"""numba-compiled kernels. Signatures mirror ``_numpy``."""
import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _holds(a, n, kinds, arg_ptr, args, params, tables):
    for t in range(kinds.shape[0]):
        idx = 0
        for p in range(arg_ptr[t], arg_ptr[t + 1]):
            idx = (idx << 1) | ((a >> (n - 1 - args[p])) & 1)
        k = kinds[t]
        if k == 0:
            if idx == params[t]:
                return False
        elif k == 1:
            if (_popcount(idx) & 1) != params[t]:
                return False
        elif tables[params[t] + idx] == 0:
            return False
    return True


@njit(cache=True)
def first_model(n, kinds, arg_ptr, args, params, tables):
    for a in range(1 << n):
        if _holds(a, n, kinds, arg_ptr, args, params, tables):
            return a
    return -1


@njit(cache=True)
def model_mask(n, kinds, arg_ptr, args, params, tables):
    total = 1 << n
    out = np.zeros(total, dtype=np.uint8)
    for a in range(total):
        if _holds(a, n, kinds, arg_ptr, args, params, tables):
            out[a] = 1
    return out


@njit(cache=True)
def falsity_closure(n_vars, clause_ptr, pos, neg, occ_ptr, occ, starts):
    ns = starts.shape[0]
    nc = clause_ptr.shape[0] - 1
    z = np.zeros((ns, n_vars), dtype=np.uint8)
    conflict = np.zeros(ns, dtype=np.uint8)
    cnt = np.empty(nc, dtype=np.int64)
    stack = np.empty(n_vars + 1, dtype=np.int64)
    for s in range(ns):
        row = z[s]
        top = 0
        for c in range(nc):
            cnt[c] = clause_ptr[c + 1] - clause_ptr[c]
        bad = False
        for c in range(nc):
            if cnt[c] == 0:
                u = neg[c]
                if u < 0:
                    bad = True
                elif row[u] == 0:
                    row[u] = 1
                    stack[top] = u
                    top += 1
        v0 = starts[s]
        if row[v0] == 0:
            row[v0] = 1
            stack[top] = v0
            top += 1
        while top > 0 and not bad:
            top -= 1
            v = stack[top]
            for p in range(occ_ptr[v], occ_ptr[v + 1]):
                c = occ[p]
                cnt[c] -= 1
                if cnt[c] == 0:
                    u = neg[c]
                    if u < 0:
                        bad = True
                        break
                    if row[u] == 0:
                        row[u] = 1
                        stack[top] = u
                        top += 1
        if bad:
            conflict[s] = 1
    return z, conflict

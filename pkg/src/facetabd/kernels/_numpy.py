"""Vectorized numpy kernels; reference path when numba is disabled."""
import numpy as np

CHUNK = 1 << 16


def _eval_chunk(a, n, kinds, arg_ptr, args, params, tables):
    ok = np.ones(a.shape[0], dtype=bool)
    for t in range(kinds.shape[0]):
        idx = np.zeros(a.shape[0], dtype=np.int64)
        for p in range(arg_ptr[t], arg_ptr[t + 1]):
            idx = (idx << 1) | ((a >> (n - 1 - args[p])) & 1)
        k = kinds[t]
        if k == 0:
            ok &= idx != params[t]
        elif k == 1:
            ok &= (np.bitwise_count(idx) & 1) == params[t]
        else:
            ok &= tables[params[t] + idx].astype(bool)
    return ok


def first_model(n, kinds, arg_ptr, args, params, tables):
    total = 1 << n
    for start in range(0, total, CHUNK):
        a = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        ok = _eval_chunk(a, n, kinds, arg_ptr, args, params, tables)
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(a[hit[0]])
    return -1


def model_mask(n, kinds, arg_ptr, args, params, tables):
    total = 1 << n
    out = np.empty(total, dtype=np.uint8)
    for start in range(0, total, CHUNK):
        a = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        out[start:start + a.shape[0]] = _eval_chunk(a, n, kinds, arg_ptr, args, params, tables)
    return out


def falsity_closure(n_vars, clause_ptr, pos, neg, occ_ptr, occ, starts):
    # Synchronous sweeps over all start rows at once; occ/occ_ptr unused here.
    ns = starts.shape[0]
    z = np.zeros((ns, n_vars), dtype=bool)
    conflict = np.zeros(ns, dtype=bool)
    if ns == 0:
        return z.astype(np.uint8), conflict.astype(np.uint8)
    z[np.arange(ns), starts] = True
    sizes = np.diff(clause_ptr)
    nonempty = np.flatnonzero(sizes > 0)
    empty = np.flatnonzero(sizes == 0)
    has_neg = neg >= 0
    while True:
        full = np.zeros((ns, sizes.shape[0]), dtype=bool)
        if empty.size:
            full[:, empty] = True
        if nonempty.size:
            full[:, nonempty] = np.logical_and.reduceat(z[:, pos], clause_ptr[nonempty], axis=1)
        # a clause whose negative literal is already false in the row is satisfied
        sat_neg = np.zeros_like(full)
        sat_neg[:, has_neg] = z[:, neg[has_neg]]
        fire = full & ~sat_neg
        conflict |= (fire & ~has_neg).any(axis=1)
        rows, cols = np.nonzero(fire[:, has_neg])
        targets = neg[has_neg][cols]
        new = ~z[rows, targets]
        if not new.any():
            break
        z[rows[new], targets[new]] = True
    return z.astype(np.uint8), conflict.astype(np.uint8)

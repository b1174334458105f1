"""Numba kernels. Each function mirrors the one of the same name in ``_numpy``."""
import numpy as np
from numba import njit

from monfg.kernels._opcodes import ADD, CONST, MAX, MIN, MUL, NEG, POW, SUB, VAR


@njit(cache=True)
def _run(code, consts, x, stack):
    sp = 0
    for t in range(code.shape[0]):
        op = code[t, 0]
        arg = code[t, 1]
        if op == CONST:
            stack[sp] = consts[arg]
            sp += 1
        elif op == VAR:
            stack[sp] = x[arg]
            sp += 1
        elif op == NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == POW:
            b = stack[sp - 1]
            r = 1.0
            if arg > 0:
                r = b
                for _ in range(arg - 1):
                    r = r * b
            stack[sp - 1] = r
        else:
            b = stack[sp - 1]
            a = stack[sp - 2]
            sp -= 1
            if op == ADD:
                r = a + b
            elif op == SUB:
                r = a - b
            elif op == MUL:
                r = a * b
            elif op == MAX:
                r = a if a >= b else b
            else:
                r = a if a <= b else b
            stack[sp - 1] = r
    return stack[0]


@njit(cache=True)
def _hull_point(w, V, out):
    for c in range(V.shape[1]):
        acc = 0.0
        for a in range(V.shape[0]):
            acc += w[a] * V[a, c]
        out[c] = acc


@njit(cache=True)
def eval_program(code, consts, X):
    stack = np.empty(code.shape[0] + 1)
    out = np.empty(X.shape[0])
    for k in range(X.shape[0]):
        out[k] = _run(code, consts, X[k], stack)
    return out


@njit(cache=True)
def hull_values(code, consts, W, V):
    stack = np.empty(code.shape[0] + 1)
    x = np.empty(V.shape[1])
    out = np.empty(W.shape[0])
    for k in range(W.shape[0]):
        _hull_point(W[k], V, x)
        out[k] = _run(code, consts, x, stack)
    return out


@njit(cache=True)
def pattern_search(code, consts, V, starts, step0, min_step, budget):
    m = V.shape[0]
    stack = np.empty(code.shape[0] + 1)
    x = np.empty(V.shape[1])
    best_w = starts.copy()
    values = np.empty(starts.shape[0])
    iters = np.zeros(starts.shape[0], dtype=np.int64)
    evals = np.zeros(starts.shape[0], dtype=np.int64)
    cand = np.empty(m)
    move = np.empty(m)
    for s in range(starts.shape[0]):
        w = starts[s].copy()
        _hull_point(w, V, x)
        f = _run(code, consts, x, stack)
        n_eval = 1
        n_iter = 0
        step = step0
        while step >= min_step and n_eval < budget:
            n_iter += 1
            improved = False
            fb = f
            for j in range(m):
                for k in range(m):
                    if j == k or w[k] <= 0.0:
                        continue
                    t = step if w[k] > step else w[k]
                    for a in range(m):
                        cand[a] = w[a]
                    cand[j] = w[j] + t
                    cand[k] = w[k] - t
                    _hull_point(cand, V, x)
                    fc = _run(code, consts, x, stack)
                    n_eval += 1
                    if fc > fb:
                        fb = fc
                        improved = True
                        for a in range(m):
                            move[a] = cand[a]
            if improved:
                f = fb
                for a in range(m):
                    w[a] = move[a]
            else:
                step *= 0.5
        best_w[s] = w
        values[s] = f
        iters[s] = n_iter
        evals[s] = n_eval
    return best_w, values, iters, evals


@njit(cache=True)
def psne_mask(table, counts, tol):
    n = counts.shape[0]
    total = table.shape[1]
    strides = np.ones(n, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * counts[i + 1]
    mask = np.ones(total, dtype=np.bool_)
    for f in range(total):
        for i in range(n):
            ai = (f // strides[i]) % counts[i]
            cur = table[i, f]
            base = f - ai * strides[i]
            for alt in range(counts[i]):
                if table[i, base + alt * strides[i]] - cur > tol:
                    mask[f] = False
                    break
            if not mask[f]:
                break
    return mask


@njit(cache=True)
def pair_values(code, consts, G1, G2, P):
    m1, m2, d = P.shape
    stack = np.empty(code.shape[0] + 1)
    x = np.empty(d)
    out = np.empty((G1.shape[0], G2.shape[0]))
    for k1 in range(G1.shape[0]):
        for k2 in range(G2.shape[0]):
            for c in range(d):
                x[c] = 0.0
            for a in range(m1):
                for b in range(m2):
                    q = G1[k1, a] * G2[k2, b]
                    for c in range(d):
                        x[c] += q * P[a, b, c]
            out[k1, k2] = _run(code, consts, x, stack)
    return out

"""Pure-numpy twins of the numba kernels.

Every function performs the same floating-point operations in the same
order as its ``_numba`` counterpart, vectorised across rows instead of
looped, so both backends return the same numbers.
"""
import numpy as np

from monfg.kernels._opcodes import ADD, CONST, MAX, MIN, MUL, NEG, POW, SUB, VAR


def eval_program(code, consts, X):
    X = np.asarray(X, dtype=np.float64)
    k = X.shape[0]
    stack = []
    for op, arg in code:
        if op == CONST:
            stack.append(np.full(k, consts[arg]))
        elif op == VAR:
            stack.append(X[:, arg])
        elif op == NEG:
            stack[-1] = -stack[-1]
        elif op == POW:
            b = stack[-1]
            r = np.ones(k)
            if arg > 0:
                r = b
                for _ in range(arg - 1):
                    r = r * b
            stack[-1] = r
        else:
            b = stack.pop()
            a = stack.pop()
            if op == ADD:
                r = a + b
            elif op == SUB:
                r = a - b
            elif op == MUL:
                r = a * b
            elif op == MAX:
                r = np.where(a >= b, a, b)
            else:
                r = np.where(a <= b, a, b)
            stack.append(r)
    return np.array(stack[0], dtype=np.float64, copy=True)


def _hull_points(W, V):
    X = np.zeros((W.shape[0], V.shape[1]))
    for a in range(V.shape[0]):
        X += W[:, a:a + 1] * V[a]
    return X


def hull_values(code, consts, W, V):
    return eval_program(code, consts, _hull_points(np.asarray(W), np.asarray(V)))


def pattern_search(code, consts, V, starts, step0, min_step, budget):
    m = V.shape[0]
    pairs = [(j, k) for j in range(m) for k in range(m) if j != k]
    best_w = np.array(starts, dtype=np.float64, copy=True)
    values = np.empty(best_w.shape[0])
    iters = np.zeros(best_w.shape[0], dtype=np.int64)
    evals = np.zeros(best_w.shape[0], dtype=np.int64)
    for s in range(best_w.shape[0]):
        w = best_w[s].copy()
        f = hull_values(code, consts, w[None, :], V)[0]
        n_eval, n_iter, step = 1, 0, step0
        while step >= min_step and n_eval < budget:
            n_iter += 1
            cands = []
            for j, k in pairs:
                if w[k] <= 0.0:
                    continue
                t = step if w[k] > step else w[k]
                c = w.copy()
                c[j] = w[j] + t
                c[k] = w[k] - t
                cands.append(c)
            if not cands:
                step *= 0.5
                continue
            cands = np.array(cands)
            fc = hull_values(code, consts, cands, V)
            n_eval += len(cands)
            best = int(np.argmax(fc))
            if fc[best] > f:
                f = fc[best]
                w = cands[best].copy()
            else:
                step *= 0.5
        best_w[s] = w
        values[s] = f
        iters[s] = n_iter
        evals[s] = n_eval
    return best_w, values, iters, evals


def psne_mask(table, counts, tol):
    counts = tuple(int(c) for c in counts)
    t = np.asarray(table).reshape((len(counts),) + counts)
    mask = np.ones(counts, dtype=bool)
    for i in range(len(counts)):
        best = t[i].max(axis=i, keepdims=True)
        mask &= ~((best - t[i]) > tol)
    return mask.reshape(-1)


def pair_values(code, consts, G1, G2, P, chunk=4096):
    m1, m2, d = P.shape
    out = np.empty((G1.shape[0], G2.shape[0]))
    for lo in range(0, G1.shape[0], chunk):
        g1 = G1[lo:lo + chunk]
        x = np.zeros((g1.shape[0], G2.shape[0], d))
        for a in range(m1):
            for b in range(m2):
                q = g1[:, a][:, None] * G2[:, b][None, :]
                x += q[:, :, None] * P[a, b]
        out[lo:lo + chunk] = eval_program(code, consts, x.reshape(-1, d)).reshape(g1.shape[0], -1)
    return out

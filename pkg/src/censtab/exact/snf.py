"""Smith normal form over the integers (Python big ints)."""
from __future__ import annotations

from .matrix import ExactMatrix
from .ring import ZZ


def _choose_pivot(A, t):
    """Entry of least absolute value in the lower-right block, first in row-major order."""
    best = None
    for i in range(t, len(A)):
        for j, x in A[i].items():
            if j >= t and x and (best is None or (abs(x), i, j) < best):
                best = (abs(x), i, j)
    return None if best is None else best[1:]


def snf(M: ExactMatrix) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... (positive)."""
    A = [{j: int(v) for j, v in r.items()} for r in M.change_ring(ZZ).rows()]
    ncols = M.ncols
    nrows = M.nrows
    # pad to keep row indices simple
    t = 0
    diag = []
    while t < min(nrows, ncols):
        piv = _choose_pivot(A, t)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        if j != t:
            for r in A:
                a, b = r.pop(t, 0), r.pop(j, 0)
                if b:
                    r[t] = b
                if a:
                    r[j] = a
        while True:
            p = A[t][t]
            done = True
            # clear column t below the pivot
            for i in range(t + 1, nrows):
                x = A[i].get(t)
                if not x:
                    continue
                q = x // p
                for k, y in A[t].items():
                    z = A[i].get(k, 0) - q * y
                    if z:
                        A[i][k] = z
                    else:
                        A[i].pop(k, None)
                if A[i].get(t):
                    done = False
            # clear row t right of the pivot
            for k in [k for k in A[t] if k > t]:
                x = A[t].get(k)
                if not x:
                    continue
                q = x // p
                for r in A:
                    y = r.get(t)
                    if y:
                        z = r.get(k, 0) - q * y
                        if z:
                            r[k] = z
                        else:
                            r.pop(k, None)
                if A[t].get(k):
                    done = False
            if not done:
                # a smaller remainder appeared in row/column t: move it to the pivot
                best = None
                for i in range(t, nrows):
                    x = A[i].get(t)
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, None)
                for k, x in A[t].items():
                    if k > t and x and abs(x) < best[0]:
                        best = (abs(x), None, k)
                _, i, k = best
                if i is not None and i != t:
                    A[t], A[i] = A[i], A[t]
                elif k is not None:
                    for r in A:
                        a, b = r.pop(t, 0), r.pop(k, 0)
                        if b:
                            r[t] = b
                        if a:
                            r[k] = a
                continue
            # divisibility: if some entry is not divisible by the pivot, fold its row in
            bad = None
            for i in range(t + 1, nrows):
                for k, x in A[i].items():
                    if x % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for k, x in A[bad].items():
                A[t][k] = A[t].get(k, 0) + x
            A[t] = {k: x for k, x in A[t].items() if x}
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def is_divisibility_chain(d: list[int]) -> bool:
    return all(d[k + 1] % d[k] == 0 for k in range(len(d) - 1))

# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of planwright.ordereval.eval_orders_chop."""

from libc.stdlib cimport malloc, free

DEF GRID = 4


def eval_orders_chop(
    list positions,
    long stock_len,
    long kerf,
    long op_error_ticks,
    double setup_full,
    double setup_partial,
    double op_seconds,
    double load_seconds,
    list orders,
):
    cdef Py_ssize_t n = len(positions)
    cdef long *pos = <long *> malloc(n * sizeof(long))
    # piece buffers: at most n + 1 pieces exist at any time
    cdef long *pa = <long *> malloc((n + 1) * sizeof(long))
    cdef long *pb = <long *> malloc((n + 1) * sizeof(long))
    cdef char *plo = <char *> malloc(n + 1)
    cdef char *pro = <char *> malloc(n + 1)
    if pos == NULL or pa == NULL or pb == NULL or plo == NULL or pro == NULL:
        raise MemoryError()

    cdef Py_ssize_t i, j, k, npieces
    cdef long x, a, b, near, far, measured, prev_measured, fp, r
    cdef double ft
    cdef char lo, ro
    cdef object order
    results = []
    try:
        for i in range(n):
            pos[i] = positions[i]
        for order in orders:
            npieces = 1
            pa[0] = 0
            pb[0] = stock_len
            plo[0] = 1
            pro[0] = 1
            fp = 0
            ft = load_seconds
            prev_measured = -1
            for idx in order:
                x = pos[<Py_ssize_t> idx]
                measured = -1
                for j in range(npieces):
                    a = pa[j]
                    b = pb[j]
                    if a <= x and x + kerf <= b:
                        lo = plo[j]
                        ro = pro[j]
                        near = x - a
                        far = b - x - kerf
                        if lo and ro:
                            measured = near if near < far else far
                        elif lo:
                            measured = near
                        elif ro:
                            measured = far
                        else:
                            measured = near if near < far else far
                        # split piece j in place; may grow the list by one
                        if x > a and b > x + kerf:
                            for k in range(npieces, j + 1, -1):
                                pa[k] = pa[k - 1]
                                pb[k] = pb[k - 1]
                                plo[k] = plo[k - 1]
                                pro[k] = pro[k - 1]
                            pb[j] = x
                            pro[j] = 0
                            pa[j + 1] = x + kerf
                            pb[j + 1] = b
                            plo[j + 1] = 0
                            pro[j + 1] = ro
                            npieces += 1
                        elif x > a:
                            pb[j] = x
                            pro[j] = 0
                        elif b > x + kerf:
                            pa[j] = x + kerf
                            plo[j] = 0
                        else:
                            for k in range(j, npieces - 1):
                                pa[k] = pa[k + 1]
                                pb[k] = pb[k + 1]
                                plo[k] = plo[k + 1]
                                pro[k] = pro[k + 1]
                            npieces -= 1
                        break
                if measured < 0:
                    raise ValueError(f"cut at {x} hits no piece")
                r = measured % GRID
                fp += (r if r < GRID - r else GRID - r) + op_error_ticks
                if setup_partial >= 0 and measured == prev_measured:
                    ft += setup_partial
                else:
                    ft += setup_full
                ft += op_seconds
                prev_measured = measured
            results.append((fp, ft))
    finally:
        free(pos)
        free(pa)
        free(pb)
        free(plo)
        free(pro)
    return results

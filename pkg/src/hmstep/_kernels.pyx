# cython: language_level=3
"""Compiled kernels for the refinement integrals.

Same contract as ``_kernels_py``: breakpoints and weights arrive as
parallel numerator/denominator int lists, results are reduced
``(num, den)`` pairs.  Arithmetic stays on Python ints (arbitrary
precision, exact); the speedup comes from compiling the merge walk and
replacing Fraction object arithmetic with direct integer operations
reduced once per accumulation.
"""

from math import gcd

BACKEND = "compiled"


cdef inline bint _le(object an, object ad, object bn, object bd):
    # a/b <= c/d with positive denominators
    return an * bd <= bn * ad


cdef inline tuple _acc_add(object acc_n, object acc_d, object n, object d):
    cdef object rn = acc_n * d + n * acc_d
    cdef object rd = acc_d * d
    cdef object g = gcd(rn, rd)
    if g > 1:
        rn //= g
        rd //= g
    return rn, rd


def pair_integral(list fbn, list fbd, list fv, list gbn, list gbd, list gv,
                  list wn, list wd, Py_ssize_t stride):
    """Sum of w[fv_i*stride + gv_j] * piece length over the common refinement."""
    cdef Py_ssize_t i = 0, j = 0, nf = len(fv), ng = len(gv), k
    cdef object t_n = 0, t_d = 1
    cdef object acc_n = 0, acc_d = 1
    cdef object nxt_n, nxt_d, len_n, len_d, g
    cdef bint take_f, take_g
    while i < nf and j < ng:
        take_f = _le(fbn[i + 1], fbd[i + 1], gbn[j + 1], gbd[j + 1])
        take_g = _le(gbn[j + 1], gbd[j + 1], fbn[i + 1], fbd[i + 1])
        if take_f:
            nxt_n = fbn[i + 1]
            nxt_d = fbd[i + 1]
        else:
            nxt_n = gbn[j + 1]
            nxt_d = gbd[j + 1]
        len_n = nxt_n * t_d - t_n * nxt_d
        len_d = nxt_d * t_d
        if len_n > 0:
            k = fv[i] * stride + gv[j]
            acc_n, acc_d = _acc_add(acc_n, acc_d, wn[k] * len_n, wd[k] * len_d)
        if take_f:
            i += 1
        if take_g:
            j += 1
        t_n = nxt_n
        t_d = nxt_d
    g = gcd(acc_n, acc_d)
    if g > 1:
        acc_n //= g
        acc_d //= g
    return acc_n, acc_d


def measure_at_least(list fbn, list fbd, list fv, list gbn, list gbd, list gv,
                     list wn, list wd, Py_ssize_t stride, object tn, object td):
    """Measure of the set where w[fv_i*stride + gv_j] >= tn/td."""
    cdef Py_ssize_t i = 0, j = 0, nf = len(fv), ng = len(gv), k
    cdef object t_n = 0, t_d = 1
    cdef object acc_n = 0, acc_d = 1
    cdef object nxt_n, nxt_d, len_n, len_d, g
    cdef bint take_f, take_g
    while i < nf and j < ng:
        take_f = _le(fbn[i + 1], fbd[i + 1], gbn[j + 1], gbd[j + 1])
        take_g = _le(gbn[j + 1], gbd[j + 1], fbn[i + 1], fbd[i + 1])
        if take_f:
            nxt_n = fbn[i + 1]
            nxt_d = fbd[i + 1]
        else:
            nxt_n = gbn[j + 1]
            nxt_d = gbd[j + 1]
        len_n = nxt_n * t_d - t_n * nxt_d
        len_d = nxt_d * t_d
        if len_n > 0:
            k = fv[i] * stride + gv[j]
            if wn[k] * td >= tn * wd[k]:
                acc_n, acc_d = _acc_add(acc_n, acc_d, len_n, len_d)
        if take_f:
            i += 1
        if take_g:
            j += 1
        t_n = nxt_n
        t_d = nxt_d
    g = gcd(acc_n, acc_d)
    if g > 1:
        acc_n //= g
        acc_d //= g
    return acc_n, acc_d


def window_integral(list bn, list bd, list v, list pn, list pd,
                    object an, object ad, object cn, object cd):
    """Sum of phi[v_i] * length(piece_i intersected with (a, c))."""
    cdef Py_ssize_t i, n = len(v), k
    cdef object lo_n, lo_d, hi_n, hi_d, len_n, len_d, g
    cdef object acc_n = 0, acc_d = 1
    for i in range(n):
        lo_n = bn[i]
        lo_d = bd[i]
        hi_n = bn[i + 1]
        hi_d = bd[i + 1]
        if lo_n * ad < an * lo_d:  # lo < a
            lo_n = an
            lo_d = ad
        if hi_n * cd > cn * hi_d:  # hi > c
            hi_n = cn
            hi_d = cd
        len_n = hi_n * lo_d - lo_n * hi_d
        len_d = hi_d * lo_d
        if len_n > 0:
            k = v[i]
            acc_n, acc_d = _acc_add(acc_n, acc_d, pn[k] * len_n, pd[k] * len_d)
    g = gcd(acc_n, acc_d)
    if g > 1:
        acc_n //= g
        acc_d //= g
    return acc_n, acc_d

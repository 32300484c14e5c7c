"""Pure-Python reference kernels for the refinement integrals.

Every kernel takes breakpoints as parallel numerator/denominator int lists
(strictly increasing, first 0/1, last 1/1), piece values as int indices and
weight tables as parallel num/den int lists.  Results are reduced
``(num, den)`` pairs with ``den > 0``.  The compiled backend in
``_kernels.pyx`` implements the identical contract; the test suite checks
the two agree bit for bit.
"""

from __future__ import annotations

from fractions import Fraction

BACKEND = "python"


def _frac(nums, dens, i):
    return Fraction(nums[i], dens[i])


def pair_integral(fbn, fbd, fv, gbn, gbd, gv, wn, wd, stride):
    """Sum of w[fv_i*stride + gv_j] * piece length over the common refinement."""
    acc = Fraction(0)
    i = j = 0
    t = Fraction(0)
    nf, ng = len(fv), len(gv)
    while i < nf and j < ng:
        tf = _frac(fbn, fbd, i + 1)
        tg = _frac(gbn, gbd, j + 1)
        nxt = tf if tf <= tg else tg
        if nxt > t:
            k = fv[i] * stride + gv[j]
            acc += Fraction(wn[k], wd[k]) * (nxt - t)
        if tf <= nxt:
            i += 1
        if tg <= nxt:
            j += 1
        t = nxt
    return acc.numerator, acc.denominator


def measure_at_least(fbn, fbd, fv, gbn, gbd, gv, wn, wd, stride, tn, td):
    """Measure of the set where w[fv_i*stride + gv_j] >= tn/td."""
    threshold = Fraction(tn, td)
    acc = Fraction(0)
    i = j = 0
    t = Fraction(0)
    nf, ng = len(fv), len(gv)
    while i < nf and j < ng:
        tf = _frac(fbn, fbd, i + 1)
        tg = _frac(gbn, gbd, j + 1)
        nxt = tf if tf <= tg else tg
        if nxt > t:
            k = fv[i] * stride + gv[j]
            if Fraction(wn[k], wd[k]) >= threshold:
                acc += nxt - t
        if tf <= nxt:
            i += 1
        if tg <= nxt:
            j += 1
        t = nxt
    return acc.numerator, acc.denominator


def window_integral(bn, bd, v, pn, pd, an, ad, cn, cd):
    """Sum of phi[v_i] * length(piece_i intersected with (a, c))."""
    a = Fraction(an, ad)
    c = Fraction(cn, cd)
    acc = Fraction(0)
    for i in range(len(v)):
        lo = _frac(bn, bd, i)
        hi = _frac(bn, bd, i + 1)
        if lo < a:
            lo = a
        if hi > c:
            hi = c
        if hi > lo:
            acc += Fraction(pn[v[i]], pd[v[i]]) * (hi - lo)
    return acc.numerator, acc.denominator

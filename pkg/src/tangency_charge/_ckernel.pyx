# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled intersection kernels.

Same contract as ``_pykernel``; inputs are int64 buffers whose magnitudes the
caller has checked against ``SMALL`` so every product fits in 64 bits.  The
inner loops run without the GIL.
"""

from libc.stdlib cimport malloc, free

SMALL = 1 << 30

ctypedef long long i64


cdef inline int sgn(i64 v) nogil:
    return (v > 0) - (v < 0)


cdef inline int side(const i64[:] xs, const i64[:] ys, int has_l, i64 ln, i64 ld,
                     int has_r, i64 rn, i64 rd, i64 px, i64 py, Py_ssize_t j) nogil:
    cdef Py_ssize_t n = xs.shape[0]
    if j < 0:
        return sgn(ld * (py - ys[0]) - ln * (px - xs[0]))
    if j == n - 1:
        if xs[j] == px:
            return sgn(py - ys[j])
        return sgn(rd * (py - ys[j]) - rn * (px - xs[j]))
    if xs[j] == px:
        return sgn(py - ys[j])
    return sgn((xs[j + 1] - xs[j]) * (py - ys[j]) - (ys[j + 1] - ys[j]) * (px - xs[j]))


def monotone_signs(const i64[:] ax, const i64[:] ay, aleft, aright,
                   const i64[:] bx, const i64[:] by, bleft, bright):
    cdef Py_ssize_t na = ax.shape[0], nb = bx.shape[0]
    cdef int hal = aleft is not None, har = aright is not None
    cdef int hbl = bleft is not None, hbr = bright is not None
    cdef i64 aln = 0, ald = 1, arn = 0, ard = 1, bln = 0, bld = 1, brn = 0, brd = 1
    if hal:
        aln, ald = aleft
    if har:
        arn, ard = aright
    if hbl:
        bln, bld = bleft
    if hbr:
        brn, brd = bright
    cdef int has_lo = 0, has_hi = 0
    cdef i64 lo = 0, hi = 0
    if not hal:
        lo = ax[0]; has_lo = 1
    if not hbl:
        if has_lo:
            lo = max(lo, bx[0])
        else:
            lo = bx[0]; has_lo = 1
    if not har:
        hi = ax[na - 1]; has_hi = 1
    if not hbr:
        if has_hi:
            hi = min(hi, bx[nb - 1])
        else:
            hi = bx[nb - 1]; has_hi = 1
    if has_lo and has_hi and lo > hi:
        return []
    cdef Py_ssize_t cap = na + nb, cnt = 0
    cdef Py_ssize_t *oa = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef Py_ssize_t *ob = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef int *os = <int *> malloc(cap * sizeof(int))
    cdef Py_ssize_t i = 0, j = 0, ia = -1, ib = -1
    cdef int src, s
    cdef i64 x
    try:
        with nogil:
            while i < na or j < nb:
                if j >= nb or (i < na and ax[i] < bx[j]):
                    x = ax[i]; ia = i; i += 1; src = 0
                elif i >= na or bx[j] < ax[i]:
                    x = bx[j]; ib = j; j += 1; src = 1
                else:
                    x = ax[i]; ia = i; ib = j; i += 1; j += 1; src = 2
                if (has_lo and x < lo) or (has_hi and x > hi):
                    continue
                if src == 0:
                    s = side(bx, by, hbl, bln, bld, hbr, brn, brd, x, ay[ia], ib)
                elif src == 1:
                    s = -side(ax, ay, hal, aln, ald, har, arn, ard, x, by[ib], ia)
                else:
                    s = sgn(ay[ia] - by[ib])
                oa[cnt] = ia; ob[cnt] = ib; os[cnt] = s
                cnt += 1
        return [(oa[k], ob[k], os[k]) for k in range(cnt)]
    finally:
        free(oa); free(ob); free(os)


cdef inline int orient(i64 ox, i64 oy, i64 ax, i64 ay, i64 bx, i64 by) nogil:
    return sgn((ax - ox) * (by - oy) - (ay - oy) * (bx - ox))


cdef inline bint on_box(i64 ax, i64 ay, i64 bx, i64 by, i64 px, i64 py) nogil:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segment_hits(const i64[:] ax, const i64[:] ay, bint a_closed,
                 const i64[:] bx, const i64[:] by, bint b_closed):
    cdef Py_ssize_t na = ax.shape[0], nb = bx.shape[0]
    cdef Py_ssize_t ma = na if a_closed else na - 1
    cdef Py_ssize_t mb = nb if b_closed else nb - 1
    cdef Py_ssize_t cap = max(ma * mb, 1), cnt = 0, i, j, k, l
    cdef Py_ssize_t *hi_ = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef Py_ssize_t *hj = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef i64 x0, y0, x1, y1, u0, v0, u1, v1
    cdef int o1, o2, o3, o4
    try:
        with nogil:
            for i in range(ma):
                k = (i + 1) % na
                x0 = ax[i]; y0 = ay[i]; x1 = ax[k]; y1 = ay[k]
                for j in range(mb):
                    l = (j + 1) % nb
                    u0 = bx[j]; v0 = by[j]; u1 = bx[l]; v1 = by[l]
                    if max(u0, u1) < min(x0, x1) or min(u0, u1) > max(x0, x1):
                        continue
                    if max(v0, v1) < min(y0, y1) or min(v0, v1) > max(y0, y1):
                        continue
                    o1 = orient(x0, y0, x1, y1, u0, v0)
                    o2 = orient(x0, y0, x1, y1, u1, v1)
                    o3 = orient(u0, v0, u1, v1, x0, y0)
                    o4 = orient(u0, v0, u1, v1, x1, y1)
                    if o1 * o2 > 0 or o3 * o4 > 0:
                        continue
                    if o1 == 0 and o2 == 0:
                        if not (on_box(x0, y0, x1, y1, u0, v0) or on_box(x0, y0, x1, y1, u1, v1)
                                or on_box(u0, v0, u1, v1, x0, y0)):
                            continue
                    hi_[cnt] = i; hj[cnt] = j
                    cnt += 1
        return sorted([(hi_[k], hj[k]) for k in range(cnt)])
    finally:
        free(hi_); free(hj)

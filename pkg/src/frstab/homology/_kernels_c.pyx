# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith normal form kernel on 64-bit integers.

Same algorithm and contract as ``_kernels_py.snf_dense`` (alternating reduced
Hermite forms, then a Bezout pass on the diagonal) except that it returns
``None`` as soon as any intermediate value leaves the int64 range; the
caller then reruns the reduction on Python integers.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

ctypedef long long i64

cdef i64 INT64_MIN_ = -9223372036854775807 - 1

cdef extern from *:
    """
    static inline int frs_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int frs_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int frs_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int frs_mul_ovf(i64 a, i64 b, i64 *r) nogil
    int frs_sub_ovf(i64 a, i64 b, i64 *r) nogil
    int frs_add_ovf(i64 a, i64 b, i64 *r) nogil


cdef inline i64 floordiv(i64 a, i64 b) nogil:
    cdef i64 q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline void xgcd(i64 a, i64 b, i64 *g, i64 *s, i64 *t) nogil:
    cdef i64 x0 = 1, x1 = 0, y0 = 0, y1 = 1, q, r, tmp
    while b != 0:
        q = floordiv(a, b)
        r = a - q * b
        a = b
        b = r
        tmp = x0 - q * x1
        x0 = x1
        x1 = tmp
        tmp = y0 - q * y1
        y0 = y1
        y1 = tmp
    if a < 0:
        g[0] = -a
        s[0] = -x0
        t[0] = -y0
    else:
        g[0] = a
        s[0] = x0
        t[0] = y0


cdef int axpy(i64 *dst, const i64 *src, i64 q, Py_ssize_t n) nogil:
    # dst -= q * src; 1 on overflow
    cdef Py_ssize_t k
    cdef i64 prod, res, s
    for k in range(n):
        s = src[k]
        if s != 0:
            if frs_mul_ovf(q, s, &prod):
                return 1
            if frs_sub_ovf(dst[k], prod, &res) or res == INT64_MIN_:
                return 1
            dst[k] = res
    return 0


cdef int comb(i64 *p, i64 *q, i64 c11, i64 c12, i64 c21, i64 c22,
              Py_ssize_t n, Py_ssize_t stride) nogil:
    # (p, q) <- (c11 p + c12 q, c21 p + c22 q), elementwise with stride
    cdef Py_ssize_t k
    cdef i64 x, y, m1, m2, np_, nq
    for k in range(n):
        x = p[k * stride]
        y = q[k * stride]
        if x == 0 and y == 0:
            continue
        if frs_mul_ovf(c11, x, &m1) or frs_mul_ovf(c12, y, &m2) or frs_add_ovf(m1, m2, &np_):
            return 1
        if frs_mul_ovf(c21, x, &m1) or frs_mul_ovf(c22, y, &m2) or frs_add_ovf(m1, m2, &nq):
            return 1
        if np_ == INT64_MIN_ or nq == INT64_MIN_:
            return 1
        p[k * stride] = np_
        q[k * stride] = nq
    return 0


cdef int reduce_lower(i64 *a, i64 *t, Py_ssize_t *prow, Py_ssize_t r, Py_ssize_t c,
                      Py_ssize_t nc, Py_ssize_t tw) nogil:
    # reduce row r right of column c modulo later pivots
    cdef Py_ssize_t c2, b
    cdef i64 x, q
    for c2 in range(c + 1, nc):
        b = prow[c2]
        if b < 0:
            continue
        x = a[r * nc + c2]
        if x != 0:
            q = floordiv(x, a[b * nc + c2])
            if q != 0:
                if axpy(a + r * nc, a + b * nc, q, nc):
                    return 1
                if t != NULL and axpy(t + r * tw, t + b * tw, q, tw):
                    return 1
    return 0


cdef int reduce_upper(i64 *a, i64 *t, Py_ssize_t *prow, Py_ssize_t c,
                      Py_ssize_t nc, Py_ssize_t tw) nogil:
    cdef Py_ssize_t c2, r, b = prow[c]
    cdef i64 p = a[b * nc + c], q
    for c2 in range(c):
        r = prow[c2]
        if r < 0:
            continue
        q = floordiv(a[r * nc + c], p)
        if q != 0:
            if axpy(a + r * nc, a + b * nc, q, nc):
                return 1
            if t != NULL and axpy(t + r * tw, t + b * tw, q, tw):
                return 1
    return 0


cdef int row_hnf(i64 *a, i64 *t, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t tw,
                 Py_ssize_t *prow, Py_ssize_t *order) nogil:
    """In-place incremental reduced row HNF; ``order`` receives the row
    permutation (pivot rows by column, then zero rows)."""
    cdef Py_ssize_t r, c, b, k, n
    cdef i64 x, y, g, s, u, xg, yg
    cdef bint placed
    for c in range(nc):
        prow[c] = -1
    for r in range(nr):
        c = 0
        placed = False
        while c < nc:
            y = a[r * nc + c]
            if y == 0:
                c += 1
                continue
            b = prow[c]
            if b >= 0:
                x = a[b * nc + c]
                if y % x == 0:
                    if axpy(a + r * nc, a + b * nc, y / x, nc):
                        return 1
                    if t != NULL and axpy(t + r * tw, t + b * tw, y / x, tw):
                        return 1
                    c += 1
                    continue
                xgcd(x, y, &g, &s, &u)
                xg = x / g
                yg = y / g
                if comb(a + b * nc, a + r * nc, s, u, -yg, xg, nc, 1):
                    return 1
                if t != NULL and comb(t + b * tw, t + r * tw, s, u, -yg, xg, tw, 1):
                    return 1
                if reduce_lower(a, t, prow, b, c, nc, tw):
                    return 1
                if reduce_upper(a, t, prow, c, nc, tw):
                    return 1
                c += 1
                continue
            if y < 0:
                for k in range(nc):
                    a[r * nc + k] = -a[r * nc + k]
                if t != NULL:
                    for k in range(tw):
                        t[r * tw + k] = -t[r * tw + k]
            if reduce_lower(a, t, prow, r, c, nc, tw):
                return 1
            prow[c] = r
            if reduce_upper(a, t, prow, c, nc, tw):
                return 1
            placed = True
            break
    n = 0
    for c in range(nc):
        if prow[c] >= 0:
            order[n] = prow[c]
            n += 1
    for r in range(nr):
        placed = False
        for c in range(nc):
            if prow[c] == r:
                placed = True
                break
        if not placed:
            order[n] = r
            n += 1
    return 0


cdef void permute_rows(i64 *m, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t *order,
                       i64 *tmp) nogil:
    cdef Py_ssize_t i
    for i in range(nr):
        memcpy(tmp + i * nc, m + order[i] * nc, nc * sizeof(i64))
    memcpy(m, tmp, nr * nc * sizeof(i64))


cdef void transpose(i64 *src, i64 *dst, Py_ssize_t nr, Py_ssize_t nc) nogil:
    cdef Py_ssize_t i, j
    for i in range(nr):
        for j in range(nc):
            dst[j * nr + i] = src[i * nc + j]


cdef bint is_monomial(i64 *a, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t *colmark) nogil:
    cdef Py_ssize_t i, j, seen
    for j in range(nc):
        colmark[j] = 0
    for i in range(nr):
        seen = -1
        for j in range(nc):
            if a[i * nc + j] != 0:
                if seen >= 0 or colmark[j]:
                    return False
                seen = j
                colmark[j] = 1
    return True


cdef int reduce(i64 *a, i64 *u, i64 *v, Py_ssize_t nr, Py_ssize_t nc,
                i64 *work, i64 *work2, Py_ssize_t *prow, Py_ssize_t *order) nogil:
    cdef int side = 0
    cdef Py_ssize_t i, j, k, nd
    cdef i64 x, y, g, s, t, xg, yg, m1, m2
    while not is_monomial(a, nr, nc, prow):
        if side == 0:
            if row_hnf(a, u, nr, nc, nr, prow, order):
                return 1
            permute_rows(a, nr, nc, order, work)
            if u != NULL:
                permute_rows(u, nr, nr, order, work)
        else:
            transpose(a, work2, nr, nc)
            if v != NULL:
                transpose(v, work2 + nr * nc, nc, nc)
            if row_hnf(work2, work2 + nr * nc if v != NULL else NULL, nc, nr, nc, prow, order):
                return 1
            permute_rows(work2, nc, nr, order, work)
            transpose(work2, a, nc, nr)
            if v != NULL:
                permute_rows(work2 + nr * nc, nc, nc, order, work)
                transpose(work2 + nr * nc, v, nc, nc)
        side ^= 1

    # row and column permutations that put the entries on the diagonal
    nd = 0
    for i in range(nr):
        for j in range(nc):
            if a[i * nc + j] != 0:
                order[nd] = i
                prow[nd] = j
                nd += 1
                break
    k = nd
    for i in range(nr):
        for j in range(nd):
            if order[j] == i:
                break
        else:
            order[k] = i
            k += 1
    k = nd
    for j in range(nc):
        for i in range(nd):
            if prow[i] == j:
                break
        else:
            prow[k] = j
            k += 1
    # diagonal values into work2, then clear a
    for i in range(nd):
        work2[i] = a[order[i] * nc + prow[i]]
    for i in range(nr * nc):
        a[i] = 0
    if u != NULL:
        permute_rows(u, nr, nr, order, work)
    if v != NULL:
        for i in range(nc):
            for j in range(nc):
                work[i * nc + j] = v[i * nc + prow[j]]
        memcpy(v, work, nc * nc * sizeof(i64))
    for i in range(nd):
        if work2[i] < 0:
            work2[i] = -work2[i]
            if u != NULL:
                for k in range(nr):
                    u[i * nr + k] = -u[i * nr + k]
    for i in range(nd):
        for j in range(i + 1, nd):
            x = work2[i]
            y = work2[j]
            if y % x == 0:
                continue
            xgcd(x, y, &g, &s, &t)
            xg = x / g
            yg = y / g
            if u != NULL and comb(u + i * nr, u + j * nr, s, t, -yg, xg, nr, 1):
                return 1
            if v != NULL:
                if frs_mul_ovf(-t, yg, &m1) or frs_mul_ovf(s, xg, &m2):
                    return 1
                if comb(v + i, v + j, 1, 1, m1, m2, nc, nc):
                    return 1
            if frs_mul_ovf(x, yg, &m1):
                return 1
            work2[i] = g
            work2[j] = m1
    for i in range(nd):
        a[i * nc + i] = work2[i]
    return 0


cdef list to_lists(i64 *m, Py_ssize_t nr, Py_ssize_t nc):
    cdef Py_ssize_t i, j
    cdef list out = []
    for i in range(nr):
        out.append([m[i * nc + j] for j in range(nc)])
    return out


def snf_dense(a, Py_ssize_t nrows, Py_ssize_t ncols, bint want_transforms=True):
    """int64 Smith reduction; ``None`` signals overflow."""
    cdef i64 *am = NULL
    cdef i64 *um = NULL
    cdef i64 *vm = NULL
    cdef i64 *work = NULL
    cdef i64 *work2 = NULL
    cdef Py_ssize_t *prow = NULL
    cdef Py_ssize_t *order = NULL
    cdef Py_ssize_t i, j, big
    cdef int status
    cdef i64 lim = (<i64> 1) << 62
    if nrows == 0 or ncols == 0:
        res = [[0] * ncols for _ in range(nrows)]
        if not want_transforms:
            return res, None, None
        return (res, [[int(i == j) for j in range(nrows)] for i in range(nrows)],
                [[int(i == j) for j in range(ncols)] for i in range(ncols)])
    for row in a:
        for x in row:
            if x >= lim or x <= -lim:
                return None
    big = nrows if nrows > ncols else ncols
    try:
        am = <i64 *> malloc(nrows * ncols * sizeof(i64))
        work = <i64 *> malloc(big * big * sizeof(i64))
        work2 = <i64 *> malloc((nrows * ncols + ncols * ncols + big) * sizeof(i64))
        prow = <Py_ssize_t *> malloc(big * sizeof(Py_ssize_t))
        order = <Py_ssize_t *> malloc(big * sizeof(Py_ssize_t))
        if am == NULL or work == NULL or work2 == NULL or prow == NULL or order == NULL:
            raise MemoryError()
        for i in range(nrows):
            row = a[i]
            for j in range(ncols):
                am[i * ncols + j] = row[j]
        if want_transforms:
            um = <i64 *> malloc(nrows * nrows * sizeof(i64))
            vm = <i64 *> malloc(ncols * ncols * sizeof(i64))
            if um == NULL or vm == NULL:
                raise MemoryError()
            for i in range(nrows):
                for j in range(nrows):
                    um[i * nrows + j] = 1 if i == j else 0
            for i in range(ncols):
                for j in range(ncols):
                    vm[i * ncols + j] = 1 if i == j else 0
        with nogil:
            status = reduce(am, um, vm, nrows, ncols, work, work2, prow, order)
        if status:
            return None
        res = to_lists(am, nrows, ncols)
        if want_transforms:
            return res, to_lists(um, nrows, nrows), to_lists(vm, ncols, ncols)
        return res, None, None
    finally:
        free(am)
        free(work)
        free(work2)
        free(prow)
        free(order)
        if um != NULL:
            free(um)
        if vm != NULL:
            free(vm)

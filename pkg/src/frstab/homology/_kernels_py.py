"""Pure-Python Smith normal form kernel.

Reference implementation of the dense reduction used by
:mod:`frstab.homology.snf`.  The compiled module ``_kernels_c`` exposes the
same entry point on machine integers; this one works on Python ints and
never overflows.

Naive two-sided Euclidean elimination blows up transform entries to
thousands of digits on dense random input, so this kernel alternates
incremental, fully reduced Hermite forms on rows and on columns; every
stored row stays reduced modulo the pivots, which keeps the transforms near
the size of the determinant.
"""


def xgcd(a, b):
    """``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _axpy(dst, src, q):
    # dst - q*src
    return [d - q * s for d, s in zip(dst, src)]


def row_hnf(a, ncols, trans):
    """Reduced row Hermite form of ``a`` built one row at a time.

    ``trans[i]`` is the transform row of ``a[i]``.  Returns
    ``(basis, tbasis, kernel)``: echelon rows with positive pivots in
    increasing pivot columns and entries above each pivot reduced into
    ``[0, pivot)``, their transform rows, and transform rows of the relations
    that reduced to zero.
    """
    piv_cols = []  # sorted pivot columns
    rows = {}  # pivot column -> (row, trow)
    kernel = []

    def reduce_against_lower(c, row, trow):
        # reduce entries right of c modulo the pivots of later rows
        for c2 in piv_cols:
            if c2 <= c:
                continue
            x = row[c2]
            if x:
                b, tb = rows[c2]
                q = x // b[c2]
                if q:
                    row = _axpy(row, b, q)
                    trow = _axpy(trow, tb, q)
        return row, trow

    def reduce_upper(c):
        b, tb = rows[c]
        p = b[c]
        for c2 in piv_cols:
            if c2 >= c:
                break
            r, tr = rows[c2]
            q = r[c] // p
            if q:
                rows[c2] = (_axpy(r, b, q), _axpy(tr, tb, q))

    for v, tv in zip(a, trans):
        v = list(v)
        tv = list(tv)
        c = 0
        while c < ncols:
            y = v[c]
            if not y:
                c += 1
                continue
            if c in rows:
                b, tb = rows[c]
                x = b[c]
                if y % x == 0:
                    q = y // x
                    v = _axpy(v, b, q)
                    tv = _axpy(tv, tb, q)
                    c += 1
                    continue
                g, s, t = xgcd(x, y)
                xg, yg = x // g, y // g
                nb = [s * p + t * q for p, q in zip(b, v)]
                ntb = [s * p + t * q for p, q in zip(tb, tv)]
                v = [xg * q - yg * p for p, q in zip(b, v)]
                tv = [xg * q - yg * p for p, q in zip(tb, tv)]
                nb, ntb = reduce_against_lower(c, nb, ntb)
                rows[c] = (nb, ntb)
                reduce_upper(c)
                c += 1
                continue
            if y < 0:
                v = [-x for x in v]
                tv = [-x for x in tv]
            v, tv = reduce_against_lower(c, v, tv)
            rows[c] = (v, tv)
            piv_cols.append(c)
            piv_cols.sort()
            reduce_upper(c)
            v = None
            break
        if v is not None:
            kernel.append(tv)
    basis = [rows[c][0] for c in piv_cols]
    tbasis = [rows[c][1] for c in piv_cols]
    return basis, tbasis, kernel


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _transpose(m, ncols):
    return [[row[j] for row in m] for j in range(ncols)]


def _is_monomial(a):
    # at most one nonzero per row and per column
    seen = set()
    for row in a:
        nz = [j for j, x in enumerate(row) if x]
        if len(nz) > 1:
            return False
        if nz:
            if nz[0] in seen:
                return False
            seen.add(nz[0])
    return True


def snf_dense(a, nrows, ncols, want_transforms=True):
    """Reduce ``a`` to Smith form.

    Returns ``(s, u, v)`` with ``u @ a_in @ v == s`` (``u``/``v`` are ``None``
    when transforms are not requested).  The diagonal of ``s`` is
    nonnegative and forms a divisibility chain, zeros last.
    """
    a = [list(r) for r in a]
    u = _identity(nrows)
    v = _identity(ncols)
    if nrows and ncols:
        side = 0
        while not _is_monomial(a):
            if side == 0:
                basis, tb, ker = row_hnf(a, ncols, u)
                a = basis + [[0] * ncols for _ in ker]
                u = tb + ker
            else:
                at = _transpose(a, ncols)
                vt = _transpose(v, ncols)
                basis, tb, ker = row_hnf(at, nrows, vt)
                at = basis + [[0] * nrows for _ in ker]
                vt = tb + ker
                a = _transpose(at, nrows)
                v = _transpose(vt, ncols)
            side ^= 1
        # move the surviving entries onto the diagonal
        entries = []
        for i, row in enumerate(a):
            for j, x in enumerate(row):
                if x:
                    entries.append((i, j, x))
        used_r = [i for i, _, _ in entries]
        used_c = [j for _, j, _ in entries]
        rperm = used_r + [i for i in range(nrows) if i not in set(used_r)]
        cperm = used_c + [j for j in range(ncols) if j not in set(used_c)]
        u = [u[i] for i in rperm]
        v = [[row[j] for j in cperm] for row in v]
        d = [x for _, _, x in entries]
        for k, x in enumerate(d):
            if x < 0:
                d[k] = -x
                u[k] = [-y for y in u[k]]
        k = len(d)
        for i in range(k):
            for j in range(i + 1, k):
                x, y = d[i], d[j]
                if y % x == 0:
                    continue
                g, s, t = xgcd(x, y)
                xg, yg = x // g, y // g
                ui, uj = u[i], u[j]
                u[i] = [s * p + t * q for p, q in zip(ui, uj)]
                u[j] = [xg * q - yg * p for p, q in zip(ui, uj)]
                for row in v:
                    p, q = row[i], row[j]
                    row[i] = p + q
                    row[j] = -t * yg * p + s * xg * q
                d[i], d[j] = g, x * yg
        a = [[0] * ncols for _ in range(nrows)]
        for i, x in enumerate(d):
            a[i][i] = x
    if not want_transforms:
        return a, None, None
    return a, u, v

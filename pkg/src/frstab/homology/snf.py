"""Smith normal form.

The dense reduction runs in the compiled int64 kernel when it is importable
and falls back to the pure-Python kernel either when the extension is
missing or when the int64 run overflows.  Set ``FRSTAB_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from typing import NamedTuple

from . import _kernels_py
from .matrix import IntMatrix

try:
    if os.environ.get("FRSTAB_PURE_PYTHON"):
        raise ImportError("pure-python kernel forced")
    from . import _kernels_c
except ImportError:
    _kernels_c = None

BACKEND = "cython" if _kernels_c is not None else "python"


class SNF(NamedTuple):
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        n = min(self.S.rows, self.S.cols)
        return [self.S.data[i][i] for i in range(n)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _dense(rows, nr, nc, want, backend=None):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _kernels_c is None:
            raise RuntimeError("compiled kernel not available")
        out = _kernels_c.snf_dense(rows, nr, nc, want)
        if out is not None:
            return out
    return _kernels_py.snf_dense([row[:] for row in rows], nr, nc, want)


def snf(m: IntMatrix, backend: str | None = None) -> SNF:
    """Return ``(S, U, V)`` with ``U @ m @ V == S``, ``U`` and ``V`` unimodular.

    ``S`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    nr, nc = m.rows, m.cols
    a, u, v = _dense(m.data, nr, nc, True, backend)
    return SNF(IntMatrix(a, nc), IntMatrix(u, nr), IntMatrix(v, nc))


def _eliminate_units(m: IntMatrix):
    """Sparse elimination of unit pivots.

    Returns ``(n_units, core_rows, core_cols)`` where the remaining core is a
    dense list of rows; the invariant factors of ``m`` are ``n_units`` ones
    followed by those of the core.
    """
    rows = {}
    cols: dict[int, set] = {}
    for i, r in enumerate(m.data):
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows[i] = d
            for j in d:
                cols.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols, key=lambda c: len(cols[c])):
            if j not in cols:
                continue
            cand = [i for i in cols[j] if abs(rows[i][j]) == 1]
            if not cand:
                continue
            p = min(cand, key=lambda i: len(rows[i]))
            prow = rows[p]
            pval = prow[j]
            for i in list(cols[j]):
                if i == p:
                    continue
                r = rows[i]
                q = r[j] * pval  # pval is +-1, so r[j]/pval == r[j]*pval
                for k, x in prow.items():
                    y = r.get(k, 0) - q * x
                    if y:
                        if k not in r:
                            cols.setdefault(k, set()).add(i)
                        r[k] = y
                    elif k in r:
                        del r[k]
                        cols[k].discard(i)
                if not r:
                    del rows[i]
            for k in prow:
                cols[k].discard(p)
                if not cols[k]:
                    del cols[k]
            del rows[p]
            units += 1
            progress = True
    rlist = sorted(rows)
    clist = sorted(cols)
    cidx = {c: n for n, c in enumerate(clist)}
    core = []
    for i in rlist:
        row = [0] * len(clist)
        for k, x in rows[i].items():
            row[cidx[k]] = x
        core.append(row)
    return units, core, len(clist)


def invariant_factors(m: IntMatrix, backend: str | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith form of ``m`` (no transforms).

    Unit pivots are eliminated sparsely first, which keeps large sparse
    boundary matrices tractable; the dense kernel only sees the core.
    """
    units, core, ncore = _eliminate_units(m)
    out = [1] * units
    if core and ncore:
        a, _, _ = _dense(core, len(core), ncore, False, backend)
        out.extend(a[i][i] for i in range(min(len(core), ncore)) if a[i][i])
    return out


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))

"""Low-degree integral homology of finite groups.

``group_homology`` runs the normalized bar complex with trivial ``Z``
coefficients; ``kunneth_H`` combines homology tables of factors into the
homology of their direct product.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Sequence

from .abelian import FgAbGroup
from .chain import ChainComplexZ
from .matrix import IntMatrix

MAX_BAR_ORDER = 8
MAX_BAR_DEGREE = 3


class BoundExceeded(ValueError):
    """A configured size limit was exceeded."""


def bar_complex(G, top: int) -> ChainComplexZ:
    """Normalized bar complex ``C_0 .. C_top`` of ``G`` with ``Z`` coefficients.

    ``G`` needs ``order`` and ``mult`` (identity at index 0).
    """
    nonid = list(range(1, G.order))
    cells = [list(product(nonid, repeat=k)) for k in range(top + 1)]
    index = [{c: i for i, c in enumerate(level)} for level in cells]
    mult = G.mult
    diffs = {}
    for n in range(1, top + 1):
        rows = []
        width = len(cells[n - 1])
        for c in cells[n]:
            row = [0] * width
            faces = [(c[1:], 1)]
            for i in range(n - 1):
                prod_ = mult[c[i]][c[i + 1]]
                if prod_:
                    faces.append((c[:i] + (prod_,) + c[i + 2:], -1 if (i + 1) % 2 else 1))
            faces.append((c[:-1], -1 if n % 2 else 1))
            for face, sign in faces:
                row[index[n - 1][face]] += sign
            rows.append(row)
        diffs[n] = IntMatrix(rows, width)
    return ChainComplexZ([len(level) for level in cells], diffs, check=False)


def group_homology(G, n: int, max_order: int = MAX_BAR_ORDER) -> FgAbGroup:
    """``H_n(G; Z)`` for ``n <= 3`` from the truncated bar complex."""
    if n < 0:
        return FgAbGroup()
    if n > MAX_BAR_DEGREE:
        raise BoundExceeded(f"bar homology limited to degree {MAX_BAR_DEGREE}, asked {n}")
    if G.order > max_order:
        raise BoundExceeded(f"bar homology limited to groups of order <= {max_order}, got {G.order}")
    if n == 0:
        return FgAbGroup(1)
    return _bar_homology(G, n)


@lru_cache(maxsize=256)
def _bar_homology(G, n: int) -> FgAbGroup:
    # keyed by the group, which hashes its multiplication table
    return bar_complex(G, n + 1).homology(n)


def homology_table(G, top: int, max_order: int = MAX_BAR_ORDER) -> list[FgAbGroup]:
    """``[H_0(G), ..., H_top(G)]``."""
    return [group_homology(G, k, max_order) for k in range(top + 1)]


def kunneth_pair(a: Sequence[FgAbGroup], b: Sequence[FgAbGroup], top: int) -> list[FgAbGroup]:
    out = []
    for n in range(top + 1):
        acc = FgAbGroup()
        for i in range(n + 1):
            acc = acc + a[i].tensor(b[n - i])
        for i in range(n):
            acc = acc + a[i].tor(b[n - 1 - i])
        out.append(acc)
    return out


def kunneth_H(factors: Sequence[Sequence[FgAbGroup]], n: int) -> FgAbGroup:
    """``H_n`` of a direct product from the factors' tables ``[H_0, .., H_k]``."""
    return kunneth_table(factors, n)[n]


def kunneth_table(factors: Sequence[Sequence[FgAbGroup]], top: int) -> list[FgAbGroup]:
    for t in factors:
        if len(t) <= top:
            raise ValueError(f"factor homology known only up to degree {len(t) - 1}, need {top}")
    acc = [FgAbGroup(1)] + [FgAbGroup()] * top
    for t in factors:
        acc = kunneth_pair(acc, t, top)
    return acc

"""Shared oracles for the test suite."""

import random
from itertools import combinations, product
from math import gcd

from frstab.homology.matrix import IntMatrix, det
from frstab.trees import TreeJ


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9, density: float = 0.6) -> IntMatrix:
    return IntMatrix([[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)], cols)


def determinantal_invariants(m: IntMatrix) -> list[int]:
    """Invariant factors from gcds of k x k minors (independent of any elimination)."""
    divs = [1]
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for rs in combinations(range(m.rows), k):
            for cs in combinations(range(m.cols), k):
                g = gcd(g, det(m.select_rows(rs).select_cols(cs)))
        if g == 0:
            break
        divs.append(g)
    return [divs[k] // divs[k - 1] for k in range(1, len(divs))]


def is_unimodular(m: IntMatrix) -> bool:
    return m.rows == m.cols and abs(det(m)) == 1


def check_snf(m: IntMatrix, res) -> list[str]:
    """Problems with ``res = (S, U, V)`` as a Smith form of ``m``."""
    S, U, V = res
    bad = []
    if U @ m @ V != S:
        bad.append("U M V != S")
    if not is_unimodular(U) or not is_unimodular(V):
        bad.append("transform not unimodular")
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j and S[i, j]:
                bad.append("off-diagonal entry")
    diag = [S[i, i] for i in range(min(S.rows, S.cols))]
    if any(d < 0 for d in diag):
        bad.append("negative diagonal")
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a and b % a):
            bad.append("divisibility chain broken")
    return bad


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        for k in range(len(p)):
            yield p[:k] + [[first] + p[k]] + p[k + 1:]
        yield p + [[first]]


def oracle_trees(E):
    """Brute force: a parent label (or the root) for every label, then a grouping of each vertex's children into mute vertices."""
    E = list(E)
    out = set()
    for parents in product([None] + E, repeat=len(E)):
        par = dict(zip(E, parents))
        acyclic = True
        for e in E:
            seen, x = set(), e
            while x is not None and acyclic:
                if x in seen:
                    acyclic = False
                seen.add(x)
                x = par[x]
        if not acyclic:
            continue
        kids = {e: [c for c in E if par[c] == e] for e in E}
        for choice in product(*(list(_partitions(kids[e])) for e in E)):
            groups = dict(zip(E, choice))

            def node(e):
                return (e, frozenset(frozenset(node(c) for c in block) for block in groups[e]))

            out.add(TreeJ(frozenset(node(e) for e in E if par[e] is None)))
    return out

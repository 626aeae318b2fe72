"""Finite groups given by multiplication tables.

Elements are the integers ``0 .. order-1`` and the identity is always ``0``.
"""

from __future__ import annotations

import re
from functools import cached_property
from itertools import permutations, product
from pathlib import Path
from typing import Sequence

AUT_BOUND = 12


class GroupError(ValueError):
    """Malformed group data or an operation outside configured limits."""


class FiniteGroup:
    """A finite group as a multiplication table (``mult[a][b] = a*b``)."""

    def __init__(self, mult: Sequence[Sequence[int]], name: str = "", check: bool = True):
        self.mult = tuple(tuple(int(x) for x in row) for row in mult)
        self.order = len(self.mult)
        self.identity = 0
        self.name = name or f"G{self.order}"
        if check:
            self._validate()
        inv = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.mult[a][b] == 0:
                    inv[a] = b
                    break
        self.inv = tuple(inv)

    def _validate(self):
        n = self.order
        if n == 0:
            raise GroupError("a group has at least one element")
        full = set(range(n))
        for row in self.mult:
            if len(row) != n or set(row) != full:
                raise GroupError(f"{self.name}: rows must be permutations of 0..{n - 1}")
        for b in range(n):
            if {self.mult[a][b] for a in range(n)} != full:
                raise GroupError(f"{self.name}: columns must be permutations of 0..{n - 1}")
        if any(self.mult[0][a] != a or self.mult[a][0] != a for a in range(n)):
            raise GroupError(f"{self.name}: element 0 must be the identity")
        m = self.mult
        for a in range(n):
            ma = m[a]
            for b in range(n):
                ab = ma[b]
                mb = m[b]
                for c in range(n):
                    if m[ab][c] != ma[mb[c]]:
                        raise GroupError(f"{self.name}: not associative at ({a},{b},{c})")

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mult == other.mult

    def __hash__(self):
        return hash(self.mult)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        out = 0
        for _ in range(k):
            out = self.mult[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mult[x][a]
            k += 1
        return k

    def conj(self, h: int, g: int) -> int:
        """``h g h^-1``."""
        return self.mult[self.mult[h][g]][self.inv[h]]

    @cached_property
    def is_abelian(self) -> bool:
        m = self.mult
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    def generated(self, gens: Sequence[int]) -> frozenset:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mult[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by decreasing element order."""
        gens: list[int] = []
        span = frozenset([0])
        for a in sorted(range(1, self.order), key=lambda x: (-self.element_order(x), x)):
            if a not in span:
                gens.append(a)
                span = self.generated(gens)
                if len(span) == self.order:
                    break
        return tuple(gens)

    def is_homomorphism(self, table: Sequence[int], target: "FiniteGroup | None" = None) -> bool:
        target = self if target is None else target
        m, t = self.mult, target.mult
        return all(table[m[a][b]] == t[table[a]][table[b]] for a in range(self.order) for b in range(self.order))

    def is_isomorphism(self, table: Sequence[int], target: "FiniteGroup | None" = None) -> bool:
        target = self if target is None else target
        return (
            len(table) == self.order
            and target.order == self.order
            and sorted(table) == list(range(self.order))
            and self.is_homomorphism(table, target)
        )

    def inner(self, h: int) -> tuple[int, ...]:
        """Table of ``g -> h g h^-1``."""
        return tuple(self.conj(h, g) for g in range(self.order))


def compose_tables(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """``f o g`` as a table."""
    return tuple(f[x] for x in g)


def invert_table(f: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(f)
    for x, y in enumerate(f):
        out[y] = x
    return tuple(out)


def identity_table(n: int) -> tuple[int, ...]:
    return tuple(range(n))


# --- built-in groups -----------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"Z{n}", check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    # (g, h) is stored at g * |H| + h, so the identity stays at 0
    m = H.order
    table = []
    for a in range(G.order * m):
        g1, h1 = divmod(a, m)
        table.append([G.mult[g1][g2] * m + H.mult[h1][h2] for g2 in range(G.order) for h2 in range(m)])
    return FiniteGroup(table, name or f"{G.name}x{H.name}", check=False)


def _perm_group(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(len(p)))] for q in perms] for p in perms]
    return FiniteGroup(table, name, check=False)


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(permutations(range(n)))  # identity first
    return _perm_group(perms, f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular ``n``-gon, order ``2n``."""
    rots = [tuple((k + i) % n for k in range(n)) for i in range(n)]
    refl = [tuple((i - k) % n for k in range(n)) for i in range(n)]
    return _perm_group(rots + refl, f"D{n}")


def quaternion_group() -> FiniteGroup:
    # units +-1, +-i, +-j, +-k encoded as (sign, unit) with unit in 1,i,j,k
    units = [(s, u) for u in range(4) for s in (1, -1)]
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    index = {x: i for i, x in enumerate(units)}
    table = []
    for s1, u1 in units:
        row = []
        for s2, u2 in units:
            s, u = unit_mul[(u1, u2)]
            row.append(index[(s * s1 * s2, u)])
        table.append(row)
    return FiniteGroup(table, "Q8", check=False)


def klein_group() -> FiniteGroup:
    return direct_product(cyclic_group(2), cyclic_group(2), "Z2xZ2")


_NAME_RE = re.compile(r"^(Z|S|D)/?(\d+)$")


def builtin_group(name: str) -> FiniteGroup:
    """Parse ``Zn``/``Z/n``, ``Sn``, ``Dn``, ``Q8`` and ``x``-products such as ``Z2xZ2``."""
    key = name.strip().replace(" ", "")
    if "x" in key:
        parts = [builtin_group(p) for p in key.split("x")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return FiniteGroup(out.mult, key, check=False)
    if key == "Q8":
        return quaternion_group()
    if key in ("1", "Z1", "trivial"):
        return cyclic_group(1)
    m = _NAME_RE.match(key)
    if not m:
        raise GroupError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise GroupError(f"bad group size in {name!r}")
    if kind == "Z":
        return cyclic_group(n)
    if kind == "S":
        if n > 5:
            raise GroupError("symmetric groups limited to S5")
        return symmetric_group(n)
    if n < 3:
        raise GroupError("dihedral groups need n >= 3")
    return dihedral_group(n)


# --- table files ---------------------------------------------------------------


def parse_group_table(text: str, name: str = "") -> FiniteGroup:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GroupError("empty group table")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order":
        raise GroupError("first line must read 'order n'")
    n = int(head[1])
    rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    if len(rows) != n:
        raise GroupError(f"expected {n} table rows, found {len(rows)}")
    return FiniteGroup(rows, name)


def load_group_table(path) -> FiniteGroup:
    p = Path(path)
    return parse_group_table(p.read_text(), p.stem)


def format_group_table(G: FiniteGroup) -> str:
    width = len(str(G.order - 1))
    lines = [f"order {G.order}"]
    lines += [" ".join(str(x).rjust(width) for x in row) for row in G.mult]
    return "\n".join(lines) + "\n"


def resolve_group(spec: str) -> FiniteGroup:
    """A built-in name or the path of a table file."""
    p = Path(spec)
    if p.suffix or p.exists():
        if not p.exists():
            raise GroupError(f"group table file not found: {spec}")
        return load_group_table(p)
    return builtin_group(spec)


# --- homomorphism search -------------------------------------------------------


def _extend(G: FiniteGroup, H: FiniteGroup, gens, images):
    """Extend generator images to a homomorphism table, or ``None``."""
    table = [-1] * G.order
    table[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = G.mult[x][g]
                v = H.mult[table[x]][h]
                if table[y] < 0:
                    table[y] = v
                    nxt.append(y)
                elif table[y] != v:
                    return None
        frontier = nxt
    return table


def _iso_search(G: FiniteGroup, H: FiniteGroup, first_only: bool):
    if G.order != H.order:
        return []
    gens = G.generators
    orders = [G.element_order(g) for g in gens]
    cands = [[h for h in range(H.order) if H.element_order(h) == k] for k in orders]
    out = []
    for images in product(*cands):
        table = _extend(G, H, gens, images)
        if table is None or len(set(table)) != G.order:
            continue
        if G.is_homomorphism(table, H):
            out.append(tuple(table))
            if first_only:
                break
    return out


def automorphism_group(G: FiniteGroup, bound: int = AUT_BOUND) -> list[tuple[int, ...]]:
    """All automorphisms of ``G`` as tables, the identity first."""
    if G.order > bound:
        raise GroupError(f"automorphism search limited to order <= {bound}, got {G.order}")
    auts = _iso_search(G, G, False)
    auts.sort(key=lambda t: (t != tuple(range(G.order)), t))
    return auts


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """An isomorphism table ``G -> H`` or ``None``."""
    if G.mult == H.mult:
        return identity_table(G.order)
    found = _iso_search(G, H, True)
    return found[0] if found else None


def abelianization_of(G: FiniteGroup):
    """``G^ab`` from the multiplication table: ``Z^G`` modulo ``[a] + [b] - [ab]``."""
    from .homology.abelian import group_from_relations
    from .homology.matrix import IntMatrix

    n = G.order
    rows = []
    for a in range(n):
        for b in range(n):
            row = [0] * n
            row[a] += 1
            row[b] += 1
            row[G.mult[a][b]] -= 1
            rows.append(row)
    return group_from_relations(IntMatrix(rows, n))

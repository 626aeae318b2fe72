"""Chain complexes over Z and homology of finite posets with coefficients."""

from __future__ import annotations

from typing import Hashable, Iterable, Protocol, Sequence

from .abelian import (
    FgAbGroup,
    Presented,
    image_lattice,
    kernel_lattice,
    lattice_contains,
    quotient_group,
    row_basis,
)
from .matrix import IntMatrix
from .snf import invariant_factors


class ComplexError(ValueError):
    """A differential squares to something nonzero, or a coefficient system is not functorial."""


class ChainComplexZ:
    """Free chain complex ``C_n = Z^{dims[n]}`` with ``d_n : C_n -> C_{n-1}``.

    ``diffs[n]`` is a ``dims[n] x dims[n-1]`` matrix (row convention); ``d_0``
    is implicitly zero.
    """

    def __init__(self, dims: Sequence[int], diffs: dict[int, IntMatrix], check: bool = True):
        self.dims = list(dims)
        self.diffs = dict(diffs)
        for n, d in self.diffs.items():
            if d.shape != (self.dims[n], self.dims[n - 1]):
                raise ComplexError(f"d_{n} has shape {d.shape}, expected {(self.dims[n], self.dims[n - 1])}")
        if check:
            for n in range(2, len(self.dims)):
                if n in self.diffs and n - 1 in self.diffs:
                    if not (self.diffs[n] @ self.diffs[n - 1]).is_zero():
                        raise ComplexError(f"d_{n - 1} d_{n} != 0")

    def _d(self, n):
        if n <= 0 or n >= len(self.dims):
            return None
        return self.diffs.get(n)

    def homology(self, n: int) -> FgAbGroup:
        dim = self.dims[n] if 0 <= n < len(self.dims) else 0
        d_out = self._d(n)
        d_in = self._d(n + 1)
        r_out = len(invariant_factors(d_out)) if d_out is not None and d_out.rows and d_out.cols else 0
        divs = invariant_factors(d_in) if d_in is not None and d_in.rows and d_in.cols else []
        return FgAbGroup.from_divisors([d for d in divs if d > 1], dim - r_out - len(divs))

    def homologies(self, nmax: int | None = None) -> list[FgAbGroup]:
        top = len(self.dims) - 1 if nmax is None else nmax
        return [self.homology(n) for n in range(top + 1)]


class PosetModule(Protocol):
    """Covariant coefficient system on a poset."""

    def value(self, x) -> Presented: ...

    def map(self, x, y) -> IntMatrix: ...


class FinitePoset:
    """A finite poset given by its elements and covering pairs ``(x, y)`` with ``x < y``."""

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[tuple]):
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate poset elements")
        self.up: dict = {x: set() for x in self.elements}
        for x, y in covers:
            if x not in self.index or y not in self.index:
                raise ValueError("cover relation mentions an unknown element")
            self.up[x].add(y)
        self._above = None

    def above(self, x) -> set:
        """Strict upper set of ``x``."""
        if self._above is None:
            memo: dict = {}

            def visit(z, stack=()):
                if z in memo:
                    return memo[z]
                if z in stack:
                    raise ValueError("covering relation has a cycle")
                acc = set()
                for w in self.up[z]:
                    acc.add(w)
                    acc |= visit(w, stack + (z,))
                memo[z] = acc
                return acc

            for z in self.elements:
                visit(z)
            self._above = memo
        return self._above[x]

    def leq(self, x, y) -> bool:
        return x == y or y in self.above(x)

    def chains(self, n: int) -> list[tuple]:
        """Strictly increasing chains ``x_0 < ... < x_n`` in a deterministic order."""
        out = [(x,) for x in self.elements]
        for _ in range(n):
            nxt = []
            for c in out:
                last = c[-1]
                for y in sorted(self.above(last), key=self.index.__getitem__):
                    nxt.append(c + (y,))
            out = nxt
        return out

    def minimal_elements(self) -> list:
        below = set()
        for x in self.elements:
            below |= self.above(x)
        return [x for x in self.elements if x not in below]


class ConstantModule:
    """The constant coefficient system ``Z``."""

    def value(self, x):
        return Presented(1)

    def map(self, x, y):
        return IntMatrix.identity(1)


def order_complex(P: FinitePoset, nmax: int | None = None) -> ChainComplexZ:
    """Simplicial chain complex of the order complex with constant ``Z`` coefficients."""
    return _assemble(P, ConstantModule(), nmax, free=True)[0]


def _assemble(P: FinitePoset, M, nmax, free=False):
    height = 0
    level = P.chains(0)
    chains = [level]
    while level and (nmax is None or height < nmax + 1):
        level = P.chains(height + 1)
        if not level:
            break
        chains.append(level)
        height += 1
    values = {x: M.value(x) for x in P.elements}
    offsets = []
    modules = []
    for level in chains:
        off = {}
        pos = 0
        rels = []
        for c in level:
            v = values[c[0]]
            off[c] = pos
            pos += v.ngens
        for c in level:
            v = values[c[0]]
            for r in v.relations.data:
                row = [0] * pos
                row[off[c]:off[c] + v.ngens] = r
                rels.append(row)
        offsets.append(off)
        modules.append(Presented(pos, IntMatrix(rels, pos)))

    mapcache = {}

    def cmap(x, y):
        key = (x, y)
        if key not in mapcache:
            mapcache[key] = M.map(x, y)
        return mapcache[key]

    diffs = {}
    for n in range(1, len(chains)):
        rows = [[0] * modules[n - 1].ngens for _ in range(modules[n].ngens)]
        for c in chains[n]:
            src = offsets[n][c]
            g0 = values[c[0]].ngens
            for i in range(n + 1):
                face = c[:i] + c[i + 1:]
                dst = offsets[n - 1][face]
                sign = -1 if i % 2 else 1
                if i == 0:
                    blk = cmap(c[0], c[1])
                    for a in range(g0):
                        brow = blk.data[a]
                        row = rows[src + a]
                        for b, x in enumerate(brow):
                            if x:
                                row[dst + b] += sign * x
                else:
                    for a in range(g0):
                        rows[src + a][dst + a] += sign
        diffs[n] = IntMatrix(rows, modules[n - 1].ngens)
    dims = [m.ngens for m in modules]
    if free:
        return ChainComplexZ(dims, diffs), modules
    return (dims, diffs), modules


def poset_homology(P: FinitePoset, M: PosetModule, nmax: int | None = None) -> list[FgAbGroup]:
    """``H_n(P; M)`` for ``n = 0..nmax`` via the simplicial replacement.

    ``C_n = sum over chains x_0 < ... < x_n of M(x_0)``; the zeroth face uses
    ``M(x_0 <= x_1)``, the others are identities.  ``d^2 = 0`` is asserted
    modulo the coefficient relations.
    """
    (dims, diffs), modules = _assemble(P, M, nmax)
    top = len(dims) - 1
    if nmax is None:
        nmax = top
    for n in range(2, top + 1):
        prod = diffs[n] @ diffs[n - 1]
        if not prod.is_zero():
            rel = modules[n - 2].relations
            if rel.rows == 0 or not lattice_contains(row_basis(rel), prod):
                raise ComplexError(f"d_{n - 1} d_{n} != 0: coefficient system is not functorial")
    out = []
    for n in range(nmax + 1):
        if n > top:
            out.append(FgAbGroup())
            continue
        if n == 0 or modules[n - 1].ngens == 0:
            cycles = modules[n].whole()
        else:
            cycles = kernel_lattice(modules[n], modules[n - 1], diffs[n])
        if n + 1 <= top:
            bounds = image_lattice(modules[n + 1], modules[n], diffs[n + 1])
        else:
            bounds = row_basis(modules[n].relations) if modules[n].relations.rows else IntMatrix([], dims[n])
        out.append(quotient_group(cycles, bounds) if cycles.rows else FgAbGroup())
    return out


def check_functorial(P: FinitePoset, M: PosetModule) -> list[tuple]:
    """Triples ``x < y < z`` where ``M(y<=z) M(x<=y) != M(x<=z)``."""
    bad = []
    for x in P.elements:
        for y in P.above(x):
            for z in P.above(y):
                lhs = M.map(x, y) @ M.map(y, z)
                if not _equal_mod(M.value(z), lhs, M.map(x, z)):
                    bad.append((x, y, z))
    return bad


def _equal_mod(target: Presented, a: IntMatrix, b: IntMatrix) -> bool:
    return target.equal_elements(a, b)

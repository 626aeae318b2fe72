"""Finitely generated abelian groups and subgroup arithmetic.

A group is *presented* as ``Z^n / rowspan(R)``; a subgroup is carried by its
preimage lattice in ``Z^n`` (a lattice containing ``rowspan(R)``).  Every
kernel, image, intersection and quotient below goes through :func:`snf`.
Vectors are rows and homomorphisms act on the right: ``x -> x @ A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .matrix import IntMatrix
from .snf import snf, invariant_factors


@dataclass(frozen=True, order=True)
class FgAbGroup:
    """``Z^rank + Z/d_1 + ... + Z/d_k`` with ``1 < d_1 | d_2 | ...``."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        tors = tuple(int(d) for d in self.torsion)
        if any(d <= 1 for d in tors):
            raise ValueError(f"torsion coefficients must exceed 1: {tors}")
        for a, b in zip(tors, tors[1:]):
            if b % a:
                raise ValueError(f"torsion is not a divisibility chain: {tors}")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_divisors(cls, divisors, rank=0) -> "FgAbGroup":
        """Normalize an arbitrary list of cyclic orders (0 meaning Z)."""
        divisors = [abs(int(d)) for d in divisors]
        rank += sum(1 for d in divisors if d == 0)
        return cls(rank, tuple(_invariant_chain([d for d in divisors if d > 1])))

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        return cls.from_divisors([n])

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Cardinality, or ``None`` when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __add__(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_divisors(list(self.torsion) + list(other.torsion), self.rank + other.rank)

    def tensor(self, other: "FgAbGroup") -> "FgAbGroup":
        divs = [gcd(a, b) for a in self.torsion for b in other.torsion]
        divs += list(self.torsion) * other.rank + list(other.torsion) * self.rank
        return FgAbGroup.from_divisors(divs, self.rank * other.rank)

    def tor(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_divisors([gcd(a, b) for a in self.torsion for b in other.torsion])

    def elementary_divisors(self) -> list[int]:
        """Prime-power decomposition of the torsion part."""
        out = []
        for d in self.torsion:
            out.extend(_prime_powers(d))
        return sorted(out)

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        run = {}
        for d in self.torsion:
            run[d] = run.get(d, 0) + 1
        for d, k in run.items():
            parts.append(f"Z/{d}" if k == 1 else f"(Z/{d})^{k}")
        return " + ".join(parts) if parts else "0"

    def to_obj(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion), "str": str(self)}


def _prime_powers(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def _invariant_chain(divs):
    # group prime powers by prime, then stack largest powers together
    by_prime: dict[int, list[int]] = {}
    for d in divs:
        for q in _prime_powers(d):
            p = next(k for k in range(2, q + 1) if q % k == 0)
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return []
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for v in by_prime.values():
        v.sort(reverse=True)
        for i, q in enumerate(v):
            chain[length - 1 - i] *= q
    return [d for d in chain if d > 1]


def group_from_relations(rel: IntMatrix) -> FgAbGroup:
    """Isomorphism type of ``Z^cols / rowspan(rel)``."""
    divs = invariant_factors(rel) if rel.rows and rel.cols else []
    return FgAbGroup.from_divisors([d for d in divs if d > 1], rel.cols - len(divs))


# --- lattice arithmetic -------------------------------------------------------


def left_kernel(m: IntMatrix) -> IntMatrix:
    """Basis (as rows) of ``{y in Z^rows : y @ m == 0}``."""
    if m.rows == 0:
        return IntMatrix([], 0)
    if m.cols == 0:
        return IntMatrix.identity(m.rows)
    res = snf(m)
    r = res.rank
    return IntMatrix(res.U.data[r:], m.rows)


def row_basis(m: IntMatrix) -> IntMatrix:
    """A basis of the lattice spanned by the rows of ``m``."""
    if m.rows == 0 or m.cols == 0:
        return IntMatrix([], m.cols)
    res = snf(m)
    r = res.rank
    um = res.U.select_rows(range(r)) @ m
    return um


def solve_in_basis(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Coordinates ``C`` with ``C @ basis == vectors``.

    ``basis`` must have independent rows.  Raises ``ValueError`` when some
    vector is outside the lattice.
    """
    k = basis.rows
    if vectors.rows == 0:
        return IntMatrix([], k)
    if k == 0:
        if not vectors.is_zero():
            raise ValueError("vector outside the zero lattice")
        return IntMatrix([[] for _ in range(vectors.rows)], 0)
    res = snf(basis)
    diag = res.diagonal
    if res.rank != k:
        raise ValueError("basis rows are dependent")
    bv = vectors @ res.V
    coords = []
    for row in bv.data:
        if any(row[k:]):
            raise ValueError("vector outside the rational span")
        c = []
        for i in range(k):
            q, r = divmod(row[i], diag[i])
            if r:
                raise ValueError("vector outside the lattice")
            c.append(q)
        coords.append(c)
    return IntMatrix(coords, k) @ res.U


def lattice_contains(basis: IntMatrix, vectors: IntMatrix) -> bool:
    try:
        solve_in_basis(basis, vectors)
    except ValueError:
        return False
    return True


def lattice_sum(*lats: IntMatrix) -> IntMatrix:
    out = lats[0]
    for lat in lats[1:]:
        out = out.vstack(lat)
    return row_basis(out)


def lattice_intersection(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.rows == 0 or b.rows == 0:
        return IntMatrix([], a.cols)
    ker = left_kernel(a.vstack(b))
    if ker.rows == 0:
        return IntMatrix([], a.cols)
    return row_basis(ker.select_cols(range(a.rows)) @ a)


def quotient_group(big: IntMatrix, small: IntMatrix) -> FgAbGroup:
    """Isomorphism type of ``big / small`` for lattices ``small <= big``."""
    big = row_basis(big) if big.rows else big
    if small.rows == 0:
        return FgAbGroup(big.rows)
    coords = solve_in_basis(big, small)
    return group_from_relations(coords)


# --- presented groups and homomorphisms ---------------------------------------


@dataclass(frozen=True)
class Presented:
    """The abelian group ``Z^ngens / rowspan(relations)``."""

    ngens: int
    relations: IntMatrix = field(default=None)

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix([], self.ngens))
        if self.relations.cols != self.ngens:
            raise ValueError("relation matrix width differs from generator count")

    @classmethod
    def free(cls, n: int) -> "Presented":
        return cls(n)

    @classmethod
    def from_group(cls, g: FgAbGroup) -> "Presented":
        n = g.rank + len(g.torsion)
        rels = []
        for i, d in enumerate(g.torsion):
            row = [0] * n
            row[g.rank + i] = d
            rels.append(row)
        return cls(n, IntMatrix(rels, n))

    def group(self) -> FgAbGroup:
        return group_from_relations(self.relations)

    def relation_lattice(self) -> IntMatrix:
        return self.relations

    def whole(self) -> IntMatrix:
        return IntMatrix.identity(self.ngens)

    def direct_sum(self, other: "Presented") -> "Presented":
        n = self.ngens + other.ngens
        rows = [r + [0] * other.ngens for r in self.relations.data]
        rows += [[0] * self.ngens + r for r in other.relations.data]
        return Presented(n, IntMatrix(rows, n))

    def tensor(self, other: "Presented") -> "Presented":
        n = self.ngens * other.ngens
        rows = []
        for r in self.relations.data:
            for j in range(other.ngens):
                row = [0] * n
                for i, x in enumerate(r):
                    row[i * other.ngens + j] = x
                rows.append(row)
        for r in other.relations.data:
            for i in range(self.ngens):
                row = [0] * n
                for j, x in enumerate(r):
                    row[i * other.ngens + j] = x
                rows.append(row)
        return Presented(n, IntMatrix(rows, n))

    def equal_elements(self, a: IntMatrix, b: IntMatrix) -> bool:
        """Rowwise equality modulo relations."""
        diff = a - b
        if diff.is_zero():
            return True
        if self.relations.rows == 0:
            return False
        return lattice_contains(row_basis(self.relations), diff)


def check_hom(src: Presented, dst: Presented, mat: IntMatrix) -> bool:
    """Whether ``mat`` induces a well-defined map ``src -> dst``."""
    if mat.rows != src.ngens or mat.cols != dst.ngens:
        return False
    if src.relations.rows == 0:
        return True
    img = src.relations @ mat
    if img.is_zero():
        return True
    if dst.relations.rows == 0:
        return False
    return lattice_contains(row_basis(dst.relations), img)


def kernel_lattice(src: Presented, dst: Presented, mat: IntMatrix) -> IntMatrix:
    """Preimage lattice in ``Z^src.ngens`` of the kernel of ``mat``."""
    if dst.ngens == 0:
        return src.whole()
    stacked = mat.vstack(dst.relations)
    ker = left_kernel(stacked)
    gens = ker.select_cols(range(src.ngens))
    return row_basis(gens.vstack(src.relations)) if gens.rows or src.relations.rows else gens


def image_lattice(src: Presented, dst: Presented, mat: IntMatrix) -> IntMatrix:
    """Preimage lattice in ``Z^dst.ngens`` of the image of ``mat``."""
    return row_basis(mat.vstack(dst.relations)) if (mat.rows or dst.relations.rows) else IntMatrix([], dst.ngens)


def subgroup_type(space: Presented, lattice: IntMatrix) -> FgAbGroup:
    """Isomorphism type of the subgroup ``lattice / relations``."""
    return quotient_group(lattice, space.relations)


def induced_is_surjective(src: Presented, dst: Presented, mat: IntMatrix) -> bool:
    img = image_lattice(src, dst, mat)
    return img.rows == dst.ngens and lattice_contains(img, IntMatrix.identity(dst.ngens))


def induced_is_injective(src: Presented, dst: Presented, mat: IntMatrix) -> bool:
    ker = kernel_lattice(src, dst, mat)
    if ker.rows == 0:
        return True
    if src.relations.rows == 0:
        return ker.is_zero()
    return lattice_contains(row_basis(src.relations), ker)

"""Finite group presentations, abelianization and induced maps on H_1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .abelian import (
    FgAbGroup,
    Presented,
    induced_is_injective,
    induced_is_surjective,
    lattice_contains,
    row_basis,
)
from .matrix import IntMatrix
from .snf import snf


class PresentationError(ValueError):
    """A relator or a generator image mentions an undeclared generator."""


class IncompatibleMapError(ValueError):
    """A generator-level map does not respect the abelianized relators."""


def _parse_word(word, index) -> tuple[tuple[int, int], ...]:
    out = []
    for item in word:
        if isinstance(item, str):
            name, exp = item, 1
        else:
            name, exp = item
        if isinstance(name, str):
            if name not in index:
                raise PresentationError(f"unknown generator {name!r}")
            name = index[name]
        elif not 0 <= name < len(index):
            raise PresentationError(f"generator index {name} out of range")
        if exp:
            out.append((name, int(exp)))
    return tuple(out)


class Presentation:
    """Generators and relator words.

    A word is a sequence of ``(generator, exponent)`` pairs; a bare generator
    name stands for exponent 1.  Generators may be referred to by name or by
    position.  ``labels`` optionally tags every relator (used in reports).
    """

    def __init__(self, generators: Sequence[str], relators: Iterable = (), labels: Sequence[str] | None = None):
        self.generators = list(generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise PresentationError("duplicate generator names")
        self.relators = [_parse_word(r, self.index) for r in relators]
        if labels is None:
            labels = [""] * len(self.relators)
        if len(labels) != len(self.relators):
            raise PresentationError("one label per relator expected")
        self.labels = list(labels)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, w) -> tuple[tuple[int, int], ...]:
        return _parse_word(w, self.index)

    def exponent_vector(self, w) -> list[int]:
        vec = [0] * self.ngens
        for g, e in self.word(w):
            vec[g] += e
        return vec

    def relator_matrix(self) -> IntMatrix:
        rows = []
        for r in self.relators:
            vec = [0] * self.ngens
            for g, e in r:
                vec[g] += e
            rows.append(vec)
        return IntMatrix(rows, self.ngens)

    def presented(self) -> Presented:
        return Presented(self.ngens, self.relator_matrix())

    def format_word(self, w) -> str:
        parts = []
        for g, e in self.word(w):
            name = self.generators[g]
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"Presentation({self.ngens} generators, {len(self.relators)} relators)"


def abelianization(P: Presentation) -> FgAbGroup:
    """``H_1`` of the presented group: cokernel of the exponent-sum matrix."""
    return P.presented().group()


class _Normal:
    """SNF coordinates of ``Z^n / rowspan(R)`` with the unit summands dropped."""

    def __init__(self, P: Presentation):
        n = P.ngens
        rel = P.relator_matrix()
        if rel.rows and n:
            res = snf(rel)
            diag = res.diagonal + [0] * (n - min(rel.rows, n))
            V = res.V
        else:
            diag = [0] * n
            V = IntMatrix.identity(n)
        self.keep = [i for i, d in enumerate(diag) if d != 1]
        self.orders = [diag[i] for i in self.keep]
        self.V = V
        self.Vinv = _unimodular_inverse(V) if n else V
        k = len(self.keep)
        rows = []
        for pos, d in enumerate(self.orders):
            if d:
                row = [0] * k
                row[pos] = d
                rows.append(row)
        self.presented = Presented(k, IntMatrix(rows, k))
        self.group = FgAbGroup.from_divisors(self.orders)


def _unimodular_inverse(m: IntMatrix) -> IntMatrix:
    res = snf(m)
    if any(d != 1 for d in res.diagonal):
        raise ValueError("matrix is not unimodular")
    return res.V @ res.U


@dataclass(frozen=True)
class H1Map:
    """A homomorphism between abelianizations in SNF coordinates.

    ``matrix`` has one row per non-unit source summand and one column per
    non-unit target summand; entries of torsion columns are reduced modulo
    the column order.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix
    source_orders: tuple
    target_orders: tuple
    surjective: bool
    injective: bool

    @property
    def is_iso(self) -> bool:
        return self.surjective and self.injective

    @property
    def flag(self) -> str:
        if self.is_iso:
            return "iso"
        if self.surjective:
            return "epi"
        if self.injective:
            return "mono"
        return "neither"

    def to_obj(self) -> dict:
        return {
            "source": self.source.to_obj(),
            "target": self.target.to_obj(),
            "source_orders": list(self.source_orders),
            "target_orders": list(self.target_orders),
            "matrix": [[str(x) for x in row] for row in self.matrix.data],
            "flag": self.flag,
        }


def h1_induced_map(src: Presentation, dst: Presentation, images: Mapping) -> H1Map:
    """Map on ``H_1`` induced by sending each generator of ``src`` to a word of ``dst``.

    ``images`` maps generator names (or indices) of ``src`` to words over
    ``dst``; missing generators go to the identity.  Only the abelianized
    relators are checked.
    """
    phi_rows = [[0] * dst.ngens for _ in range(src.ngens)]
    for g, w in images.items():
        i = src.index[g] if isinstance(g, str) else g
        if not 0 <= i < src.ngens:
            raise PresentationError(f"unknown source generator {g!r}")
        phi_rows[i] = dst.exponent_vector(w)
    phi = IntMatrix(phi_rows, dst.ngens)
    rel = src.relator_matrix()
    if rel.rows:
        img = rel @ phi
        if not img.is_zero():
            drel = dst.relator_matrix()
            if drel.rows == 0 or not lattice_contains(row_basis(drel), img):
                bad = [src.labels[k] or src.format_word(src.relators[k]) for k, row in enumerate(img.data) if any(row)]
                raise IncompatibleMapError(f"abelianized relators not preserved: {bad[:3]}")
    a, b = _Normal(src), _Normal(dst)
    full = a.Vinv.select_rows(a.keep) @ phi @ b.V.select_cols(b.keep)
    data = [[x % d if d else x for x, d in zip(row, b.orders)] for row in full.data]
    mat = IntMatrix(data, len(b.keep))
    return H1Map(
        a.group,
        b.group,
        mat,
        tuple(a.orders),
        tuple(b.orders),
        induced_is_surjective(a.presented, b.presented, mat),
        induced_is_injective(a.presented, b.presented, mat),
    )

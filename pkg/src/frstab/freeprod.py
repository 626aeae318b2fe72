"""Free products of finite groups and their symmetric automorphisms.

A word is a tuple of letters ``(label, element)`` in normal form: no letter
carries the identity and neighbouring letters have distinct labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .groups import FiniteGroup, compose_tables, identity_table, invert_table

Word = tuple  # tuple of (label, element) pairs
EMPTY: Word = ()


class StructuralError(ValueError):
    """Data that does not describe the requested object."""


class GroupFamily:
    """An ordered family ``(G_e)_{e in E}`` of finite groups."""

    def __init__(self, labels: Sequence[Hashable], factors: Mapping[Hashable, FiniteGroup] | Sequence[FiniteGroup]):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise StructuralError("labels must be distinct")
        if isinstance(factors, Mapping):
            if set(factors) != set(self.labels):
                raise StructuralError("every label needs exactly one factor")
            self.factors = {e: factors[e] for e in self.labels}
        else:
            factors = list(factors)
            if len(factors) != len(self.labels):
                raise StructuralError("one factor per label expected")
            self.factors = dict(zip(self.labels, factors))
        self.position = {e: i for i, e in enumerate(self.labels)}

    @classmethod
    def of(cls, groups: Sequence[FiniteGroup], start: int = 1) -> "GroupFamily":
        """Label the groups ``start, start+1, ...``."""
        return cls(list(range(start, start + len(groups))), list(groups))

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, e) -> FiniteGroup:
        try:
            return self.factors[e]
        except KeyError:
            raise StructuralError(f"unknown label {e!r}") from None

    def __repr__(self):
        inner = ", ".join(f"{e}:{G.name}" for e, G in self.factors.items())
        return f"GroupFamily({inner})"

    def restrict(self, labels: Iterable) -> "GroupFamily":
        labels = [e for e in self.labels if e in set(labels)]
        return GroupFamily(labels, {e: self.factors[e] for e in labels})

    def letters(self) -> list[Word]:
        """All single-letter words."""
        return [((e, g),) for e in self.labels for g in range(1, self.factors[e].order)]


def letter(e, g: int, fam: GroupFamily) -> Word:
    fam[e]
    return ((e, g),) if g else EMPTY


def normalize(letters: Iterable, fam: GroupFamily) -> Word:
    """Normal form of an arbitrary letter sequence."""
    out: list = []
    for e, g in letters:
        G = fam[e]
        if not 0 <= g < G.order:
            raise StructuralError(f"element {g} not in factor {e!r}")
        if g == 0:
            continue
        if out and out[-1][0] == e:
            h = G.mult[out[-1][1]][g]
            if h:
                out[-1] = (e, h)
            else:
                out.pop()
        else:
            out.append((e, g))
    return tuple(out)


def word_mul(a: Word, b: Word, fam: GroupFamily) -> Word:
    """Normal form of the concatenation ``a b`` (inputs in normal form)."""
    for e, _ in b:
        fam[e]
    for e, _ in a:
        fam[e]
    out = list(a)
    i = 0
    while i < len(b):
        e, g = b[i]
        if out and out[-1][0] == e:
            h = fam.factors[e].mult[out[-1][1]][g]
            if h:
                out[-1] = (e, h)
                i += 1
                break
            out.pop()
            i += 1
            continue
        break
    out.extend(b[i:])
    return tuple(out)


def word_inv(a: Word, fam: GroupFamily) -> Word:
    return tuple((e, fam[e].inv[g]) for e, g in reversed(a))


def word_prod(words: Iterable[Word], fam: GroupFamily) -> Word:
    out = EMPTY
    for w in words:
        out = word_mul(out, w, fam)
    return out


def format_word(w: Word) -> str:
    return "".join(f"({e},{g})" for e, g in w) or "1"


class SymmetricAutomorphism:
    """``(e, g) -> conj(e) (perm(e), iso_e(g)) conj(e)^-1``.

    ``perm`` maps labels to labels, ``conj`` labels to words and ``iso``
    labels to tables ``G_e -> G_perm(e)``.  The conjugators are kept in a
    canonical form (never ending in a letter of ``G_perm(e)``), so equal data
    means equal automorphisms.  The inverse is known when the automorphism is
    built from the constructors below or by composition; otherwise
    :meth:`inverse` raises.
    """

    __slots__ = ("fam", "perm", "conj", "iso", "_inv", "_key")

    def __init__(self, fam: GroupFamily, perm=None, conj=None, iso=None, check: bool = True):
        self.fam = fam
        labels = fam.labels
        perm = dict(perm) if perm else {}
        conj = dict(conj) if conj else {}
        iso = dict(iso) if iso else {}
        for d in (perm, conj, iso):
            for e in d:
                if e not in fam.position:
                    raise StructuralError(f"unknown label {e!r}")
        self.perm = {e: perm.get(e, e) for e in labels}
        if check and sorted(self.perm.values(), key=fam.position.__getitem__) != list(labels):
            raise StructuralError("perm is not a permutation of the labels")
        self.iso = {}
        for e in labels:
            G, H = fam.factors[e], fam.factors[self.perm[e]]
            t = tuple(iso[e]) if e in iso else identity_table(G.order)
            if check and not G.is_isomorphism(t, H):
                raise StructuralError(f"iso at {e!r} is not an isomorphism {G.name} -> {H.name}")
            self.iso[e] = t
        self.conj = {}
        for e in labels:
            c = tuple(conj.get(e, EMPTY))
            if check:
                c2 = normalize(c, fam)
                if c2 != c:
                    raise StructuralError(f"conjugator at {e!r} is not in normal form")
            self._set_conj(e, c)
        self._inv = None
        self._key = None

    def _set_conj(self, e, c):
        # absorb a trailing letter of the target factor into the isomorphism
        t = self.perm[e]
        H = self.fam.factors[t]
        if c and c[-1][0] == t:
            h = c[-1][1]
            self.iso[e] = compose_tables(H.inner(h), self.iso[e])
            c = c[:-1]
        self.conj[e] = c

    @classmethod
    def identity(cls, fam: GroupFamily) -> "SymmetricAutomorphism":
        out = cls(fam, check=False)
        out._inv = out
        return out

    def key(self):
        if self._key is None:
            self._key = tuple((e, self.perm[e], self.conj[e], self.iso[e]) for e in self.fam.labels)
        return self._key

    def __eq__(self, other):
        return isinstance(other, SymmetricAutomorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = []
        for e in self.fam.labels:
            bits = []
            if self.perm[e] != e:
                bits.append(f"->{self.perm[e]}")
            if self.conj[e]:
                bits.append(f"conj {format_word(self.conj[e])}")
            if self.iso[e] != identity_table(self.fam.factors[e].order):
                bits.append(f"iso {list(self.iso[e])}")
            if bits:
                parts.append(f"{e}: " + ", ".join(bits))
        return "SymAut(" + ("; ".join(parts) or "id") + ")"

    @property
    def is_identity(self) -> bool:
        return self == SymmetricAutomorphism.identity(self.fam)

    def image_of_letter(self, e, g: int) -> Word:
        if g == 0:
            return EMPTY
        c = self.conj[e]
        fam = self.fam
        mid = ((self.perm[e], self.iso[e][g]),)
        return word_mul(word_mul(c, mid, fam), word_inv(c, fam), fam)

    def __call__(self, w: Word) -> Word:
        return apply_automorphism(self, w, self.fam)

    def __mul__(self, other: "SymmetricAutomorphism") -> "SymmetricAutomorphism":
        return compose(self, other)

    def inverse(self) -> "SymmetricAutomorphism":
        if self._inv is None:
            raise StructuralError("inverse unknown for automorphism given by raw data")
        return self._inv

    def pure(self) -> bool:
        return all(self.perm[e] == e for e in self.fam.labels)

    def in_fr(self) -> bool:
        """Identity permutation and identity isomorphisms."""
        return self.pure() and all(self.iso[e] == identity_table(len(self.iso[e])) for e in self.fam.labels)

    def to_obj(self) -> dict:
        return {
            str(e): {"perm": str(self.perm[e]), "conj": [[str(a), b] for a, b in self.conj[e]], "iso": list(self.iso[e])}
            for e in self.fam.labels
        }


def apply_automorphism(phi: SymmetricAutomorphism, w: Word, fam: GroupFamily) -> Word:
    """Image of ``w`` under ``phi``, normalized."""
    if phi.fam is not fam and phi.fam.labels != fam.labels:
        raise StructuralError("automorphism and word live over different families")
    out = EMPTY
    for e, g in w:
        out = word_mul(out, phi.image_of_letter(e, g), fam)
    return out


def _compose_data(phi: SymmetricAutomorphism, psi: SymmetricAutomorphism) -> SymmetricAutomorphism:
    fam = phi.fam
    perm, conj, iso = {}, {}, {}
    for e in fam.labels:
        f = psi.perm[e]
        perm[e] = phi.perm[f]
        conj[e] = word_mul(apply_automorphism(phi, psi.conj[e], fam), phi.conj[f], fam)
        iso[e] = compose_tables(phi.iso[f], psi.iso[e])
    return SymmetricAutomorphism(fam, perm, conj, iso, check=False)


def compose(phi: SymmetricAutomorphism, psi: SymmetricAutomorphism) -> SymmetricAutomorphism:
    """``phi o psi`` (apply ``psi`` first)."""
    if phi.fam.labels != psi.fam.labels:
        raise StructuralError("composing automorphisms of different families")
    out = _compose_data(phi, psi)
    if phi._inv is not None and psi._inv is not None:
        inv = _compose_data(psi._inv, phi._inv)
        out._inv = inv
        inv._inv = out
    return out


def compose_all(autos: Sequence[SymmetricAutomorphism], fam: GroupFamily) -> SymmetricAutomorphism:
    """``autos[0] o autos[1] o ...``."""
    out = SymmetricAutomorphism.identity(fam)
    for a in autos:
        out = compose(out, a)
    return out


def power(phi: SymmetricAutomorphism, k: int) -> SymmetricAutomorphism:
    if k < 0:
        phi, k = phi.inverse(), -k
    out = SymmetricAutomorphism.identity(phi.fam)
    for _ in range(k):
        out = compose(out, phi)
    return out


def _pair(a: SymmetricAutomorphism, b: SymmetricAutomorphism):
    a._inv = b
    b._inv = a
    return a


def whitehead_generator(i, j, g: int, fam: GroupFamily) -> SymmetricAutomorphism:
    """Partial conjugation: ``(j, h) -> g h g^-1`` with ``g`` in ``G_i``, other factors fixed."""
    if i == j:
        raise StructuralError("partial conjugation needs i != j")
    G = fam[i]
    fam[j]
    if not 0 <= g < G.order:
        raise StructuralError(f"element {g} not in factor {i!r}")
    if g == 0:
        return SymmetricAutomorphism.identity(fam)
    a = SymmetricAutomorphism(fam, conj={j: ((i, g),)}, check=False)
    b = SymmetricAutomorphism(fam, conj={j: ((i, G.inv[g]),)}, check=False)
    return _pair(a, b)


def factor_automorphism(e, table: Sequence[int], fam: GroupFamily) -> SymmetricAutomorphism:
    """Apply an automorphism of ``G_e`` and fix the other factors."""
    G = fam[e]
    if not G.is_isomorphism(table):
        raise StructuralError(f"table is not an automorphism of {G.name}")
    a = SymmetricAutomorphism(fam, iso={e: tuple(table)}, check=False)
    b = SymmetricAutomorphism(fam, iso={e: invert_table(table)}, check=False)
    return _pair(a, b)


def permutation_automorphism(perm: Mapping, isos: Mapping, fam: GroupFamily) -> SymmetricAutomorphism:
    """Send ``G_e`` onto ``G_perm(e)`` through ``isos[e]`` (identity tables by default)."""
    a = SymmetricAutomorphism(fam, perm=perm, iso=isos)
    inv_perm = {a.perm[e]: e for e in fam.labels}
    inv_iso = {a.perm[e]: invert_table(a.iso[e]) for e in fam.labels}
    b = SymmetricAutomorphism(fam, perm=inv_perm, iso=inv_iso, check=False)
    return _pair(a, b)


@dataclass(frozen=True)
class WhiteheadData:
    """Operating label ``ell`` and coefficients ``g_{ell,i}`` in ``G_ell`` for ``i != ell``."""

    ell: Hashable
    coefficients: tuple  # sorted (label, element) pairs

    @classmethod
    def make(cls, ell, coefficients: Mapping, fam: GroupFamily) -> "WhiteheadData":
        expected = set(fam.labels) - {ell}
        if ell not in fam.position:
            raise StructuralError(f"unknown label {ell!r}")
        if set(coefficients) != expected:
            raise StructuralError("coefficients must be indexed by E minus the operating label")
        G = fam[ell]
        for g in coefficients.values():
            if not 0 <= g < G.order:
                raise StructuralError(f"coefficient {g} not in factor {ell!r}")
        items = tuple(sorted(coefficients.items(), key=lambda kv: fam.position[kv[0]]))
        return cls(ell, items)

    def coefficient(self, i) -> int:
        return dict(self.coefficients)[i]


def whitehead_automorphism(w: WhiteheadData, fam: GroupFamily) -> SymmetricAutomorphism:
    """Conjugate every factor ``i`` by ``g_{ell,i}`` simultaneously."""
    G = fam[w.ell]
    conj = {i: ((w.ell, g),) for i, g in w.coefficients if g}
    cinv = {i: ((w.ell, G.inv[g]),) for i, g in w.coefficients if g}
    a = SymmetricAutomorphism(fam, conj=conj, check=False)
    b = SymmetricAutomorphism(fam, conj=cinv, check=False)
    return _pair(a, b)


def is_supported_by(w: WhiteheadData, A, fam: GroupFamily) -> bool:
    """Coefficients constant on each child branch of ``ell`` in ``A``, trivial elsewhere.

    ``A`` is a labelled tree exposing ``labels`` and ``child_label_sets(e)``.
    """
    if set(A.labels) != set(fam.labels):
        raise StructuralError("tree and family have different label sets")
    coeff = dict(w.coefficients)
    covered = set()
    for part in A.child_label_sets(w.ell):
        vals = {coeff[i] for i in part}
        if len(vals) > 1:
            return False
        covered |= part
    return all(coeff[i] == 0 for i in coeff if i not in covered)


def automorphisms_agree(phi: SymmetricAutomorphism, psi: SymmetricAutomorphism) -> bool:
    """Compare on every single-letter word (the exact action check)."""
    fam = phi.fam
    return all(apply_automorphism(phi, w, fam) == apply_automorphism(psi, w, fam) for w in fam.letters())

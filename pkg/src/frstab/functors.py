"""Tuples of pointed sets, their partial maps, and functors into abelian groups.

Objects of ``Gamma^E`` are :class:`PointedSetTuple` values: one finite set of
non-base parts per label (the basepoint is implicit).  Morphisms are
:class:`GammaEMorphism` values: per label, a partial map on non-base parts,
undefined meaning "sent to the basepoint".

A functor is described by a *model* (``value(X)`` and ``action(f)``) and
frozen on a finite diagram as a :class:`TabulatedFunctor`.  Group elements
are row vectors, so a contravariant ``T`` turns ``f : X -> Y`` into a matrix
with one row per generator of ``T(Y)`` and one column per generator of
``T(X)``.
"""

from __future__ import annotations

import json
import random
from itertools import chain, combinations, product
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .homology.abelian import (
    FgAbGroup,
    Presented,
    check_hom,
    image_lattice,
    kernel_lattice,
    lattice_contains,
    lattice_intersection,
    lattice_sum,
    quotient_group,
    row_basis,
)
from .groups import abelianization_of
from .homology.matrix import IntMatrix, matrix_from_obj, matrix_to_obj


class DiagramError(ValueError):
    """A morphism or object needed by a computation is missing from the diagram."""


class FunctorError(ValueError):
    """Identity or composition is not respected modulo relations."""


def part_key(p):
    """Deterministic sort key for parts (frozensets of labels or plain values)."""
    if isinstance(p, frozenset):
        return (0, tuple(sorted((_atom_key(x) for x in p))))
    return (1, _atom_key(p))


def _atom_key(x):
    if isinstance(x, int):
        return (0, x, "")
    return (1, 0, str(x))


def _jsonable_part(p):
    if isinstance(p, frozenset):
        return sorted((x for x in p), key=_atom_key)
    return p


def _part_from_json(p):
    if isinstance(p, list):
        return frozenset(p)
    return p


class PointedSetTuple:
    """``(X_e)_{e in E}``: non-base parts per label; the basepoint is implicit."""

    __slots__ = ("labels", "parts", "_key")

    def __init__(self, labels: Sequence[Hashable], parts: Mapping[Hashable, Iterable] | None = None):
        self.labels = tuple(labels)
        parts = parts or {}
        for e in parts:
            if e not in self.labels:
                raise ValueError(f"unknown label {e!r}")
        self.parts = {e: tuple(sorted(set(parts.get(e, ())), key=part_key)) for e in self.labels}
        self._key = (self.labels, tuple(self.parts[e] for e in self.labels))

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, PointedSetTuple) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        inner = "; ".join(f"{e}:{[_jsonable_part(p) for p in self.parts[e]]}" for e in self.labels)
        return f"PST({inner})"

    @property
    def slots(self) -> int:
        """Total number of non-base parts."""
        return sum(len(v) for v in self.parts.values())

    def elements(self) -> list[tuple]:
        """All ``(label, part)`` pairs in a fixed order."""
        return [(e, p) for e in self.labels for p in self.parts[e]]

    def is_subobject(self, other: "PointedSetTuple") -> bool:
        """Whether ``self`` is a coordinatewise pointed subset of ``other``."""
        return self.labels == other.labels and all(set(self.parts[e]) <= set(other.parts[e]) for e in self.labels)

    def sub(self, pairs: Iterable[tuple]) -> "PointedSetTuple":
        d: dict = {e: [] for e in self.labels}
        for e, p in pairs:
            d[e].append(p)
        out = PointedSetTuple(self.labels, d)
        if not out.is_subobject(self):
            raise ValueError("not a subobject")
        return out

    def subobjects(self) -> list["PointedSetTuple"]:
        el = self.elements()
        return [self.sub(c) for k in range(len(el) + 1) for c in combinations(el, k)]

    def codim_one(self) -> list["PointedSetTuple"]:
        el = self.elements()
        return [self.sub(el[:i] + el[i + 1:]) for i in range(len(el))]

    def to_obj(self) -> dict:
        return {"labels": list(self.labels), "parts": {str(e): [_jsonable_part(p) for p in self.parts[e]] for e in self.labels}}

    @classmethod
    def from_obj(cls, obj) -> "PointedSetTuple":
        labels = obj["labels"]
        parts = {e: [_part_from_json(p) for p in obj["parts"][str(e)]] for e in labels}
        return cls(labels, parts)


def theta_object(labels: Sequence, slots: Iterable) -> PointedSetTuple:
    """A one-coordinate tuple: a Theta object ``S`` seen in ``Gamma^{E}`` with ``|E| = 1``."""
    return PointedSetTuple(tuple(labels), {labels[0]: list(slots)})


class GammaEMorphism:
    """Per-label partial maps of non-base parts ``source -> target``."""

    __slots__ = ("source", "target", "maps", "_key")

    def __init__(self, source: PointedSetTuple, target: PointedSetTuple, maps: Mapping[Hashable, Mapping]):
        if source.labels != target.labels:
            raise ValueError("morphism between tuples over different labels")
        self.source = source
        self.target = target
        clean = {}
        for e in source.labels:
            m = dict(maps.get(e, {}))
            src, dst = set(source.parts[e]), set(target.parts[e])
            for p, q in m.items():
                if p not in src or q not in dst:
                    raise ValueError(f"map at {e!r} sends {p!r} to {q!r} outside source/target")
            clean[e] = m
        self.maps = clean
        self._key = (
            source.key(),
            target.key(),
            tuple(tuple(sorted(((part_key(p), part_key(q)) for p, q in clean[e].items()))) for e in source.labels),
        )

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, GammaEMorphism) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"GammaE({self.source} -> {self.target}: {self.maps})"

    def __call__(self, e, p):
        """Image of part ``p`` at label ``e``, or ``None`` for the basepoint."""
        return self.maps[e].get(p)

    @classmethod
    def identity(cls, X: PointedSetTuple) -> "GammaEMorphism":
        return cls(X, X, {e: {p: p for p in X.parts[e]} for e in X.labels})

    def then(self, g: "GammaEMorphism") -> "GammaEMorphism":
        """``g o self``."""
        if g.source != self.target:
            raise ValueError("morphisms are not composable")
        maps = {}
        for e in self.source.labels:
            m = {}
            for p, q in self.maps[e].items():
                r = g.maps[e].get(q)
                if r is not None:
                    m[p] = r
            maps[e] = m
        return GammaEMorphism(self.source, g.target, maps)

    def is_everywhere_defined(self) -> bool:
        return all(len(self.maps[e]) == len(self.source.parts[e]) for e in self.source.labels)

    def image(self, M: PointedSetTuple) -> PointedSetTuple:
        """``f(M)`` for a subobject ``M`` of the source."""
        return self.target.sub((e, self.maps[e][p]) for e, p in M.elements() if p in self.maps[e])

    def preimage(self, N: PointedSetTuple) -> PointedSetTuple:
        return self.source.sub((e, p) for e, p in self.source.elements() if self.maps[e].get(p) in set(N.parts[e]))

    def defined_on(self) -> PointedSetTuple:
        return self.source.sub((e, p) for e, p in self.source.elements() if p in self.maps[e])

    def to_obj(self) -> dict:
        return {
            "source": self.source.to_obj(),
            "target": self.target.to_obj(),
            "maps": {str(e): [[_jsonable_part(p), _jsonable_part(q)] for p, q in sorted(self.maps[e].items(), key=lambda kv: part_key(kv[0]))] for e in self.source.labels},
        }

    @classmethod
    def from_obj(cls, obj) -> "GammaEMorphism":
        src = PointedSetTuple.from_obj(obj["source"])
        dst = PointedSetTuple.from_obj(obj["target"])
        maps = {e: {_part_from_json(p): _part_from_json(q) for p, q in obj["maps"][str(e)]} for e in src.labels}
        return cls(src, dst, maps)


def idempotent(C: PointedSetTuple, M: PointedSetTuple) -> GammaEMorphism:
    """``d_{C,M}``: identity on the parts of ``M``, basepoint elsewhere."""
    if not M.is_subobject(C):
        raise ValueError("M is not a subobject of C")
    return GammaEMorphism(C, C, {e: {p: p for p in M.parts[e]} for e in C.labels})


def all_maps(X: PointedSetTuple, Y: PointedSetTuple, partial: bool = True) -> list[GammaEMorphism]:
    """Every morphism ``X -> Y`` (partial ones included unless ``partial`` is false)."""
    per_label = []
    for e in X.labels:
        src = X.parts[e]
        opts = list(Y.parts[e]) + ([None] if partial else [])
        per_label.append([dict((p, q) for p, q in zip(src, choice) if q is not None) for choice in product(opts, repeat=len(src))])
    return [GammaEMorphism(X, Y, dict(zip(X.labels, combo))) for combo in product(*per_label)]


class ThetaMorphism:
    """A partial injection ``source -> target`` with domain ``s(f)``."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: Iterable, target: Iterable, mapping: Mapping):
        self.source = frozenset(source)
        self.target = frozenset(target)
        m = dict(mapping)
        if not set(m) <= self.source:
            raise ValueError("domain must lie in the source")
        if not set(m.values()) <= self.target:
            raise ValueError("values must lie in the target")
        if len(set(m.values())) != len(m):
            raise ValueError("a Theta morphism must be injective")
        self.mapping = m

    @property
    def domain(self) -> frozenset:
        return frozenset(self.mapping)

    def __call__(self, x):
        return self.mapping.get(x)

    def then(self, g: "ThetaMorphism") -> "ThetaMorphism":
        """``g o self``."""
        if g.source != self.target:
            raise ValueError("morphisms are not composable")
        return ThetaMorphism(self.source, g.target, {x: g.mapping[y] for x, y in self.mapping.items() if y in g.mapping})

    @classmethod
    def identity(cls, S: Iterable) -> "ThetaMorphism":
        S = frozenset(S)
        return cls(S, S, {x: x for x in S})

    @classmethod
    def inclusion(cls, S: Iterable, T: Iterable) -> "ThetaMorphism":
        S = frozenset(S)
        return cls(S, T, {x: x for x in S})

    def __eq__(self, other):
        return isinstance(other, ThetaMorphism) and (self.source, self.target, self.mapping) == (other.source, other.target, other.mapping)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.mapping.items())))

    def __repr__(self):
        return f"Theta({dict(sorted(self.mapping.items(), key=lambda kv: _atom_key(kv[0])))})"


# --- functor models --------------------------------------------------------------
#
# A model exposes ``value(X) -> Presented`` and ``action(f) -> IntMatrix``.
# ``variance`` is -1 for contravariant models (matrix T(target) -> T(source))
# and +1 for covariant ones.


class ConstantFunctor:
    variance = -1

    def __init__(self, group: FgAbGroup = FgAbGroup(1)):
        self.pres = Presented.from_group(group)

    def value(self, X):
        return self.pres

    def action(self, f):
        return IntMatrix.identity(self.pres.ngens)

    def describe(self):
        return {"kind": "constant", "ngens": self.pres.ngens}


class AdditiveFunctor:
    """``X -> sum_e A_e^{X_e}``; a part is sent to the sum of its preimages.

    ``groups`` maps each label to the presented group ``A_e``.  With
    ``A_e = G_e^ab`` this is ``H_1`` of ``D_G``.
    """

    variance = -1

    def __init__(self, groups: Mapping[Hashable, Presented]):
        self.groups = dict(groups)

    def _layout(self, X):
        offs, pos = {}, 0
        for e, p in X.elements():
            offs[(e, p)] = pos
            pos += self.groups[e].ngens
        return offs, pos

    def value(self, X):
        offs, n = self._layout(X)
        rows = []
        for (e, p), off in offs.items():
            for r in self.groups[e].relations.data:
                row = [0] * n
                row[off:off + len(r)] = r
                rows.append(row)
        return Presented(n, IntMatrix(rows, n))

    def action(self, f):
        so, sn = self._layout(f.source)
        to, tn = self._layout(f.target)
        rows = [[0] * sn for _ in range(tn)]
        for e, p in f.source.elements():
            q = f(e, p)
            if q is None:
                continue
            a, b = to[(e, q)], so[(e, p)]
            for k in range(self.groups[e].ngens):
                rows[a + k][b + k] += 1
        return IntMatrix(rows, sn)

    def describe(self):
        return {"kind": "additive", "groups": {str(e): self.groups[e].group().to_obj() for e in self.groups}}


class RepresentableFunctor:
    """``X -> Z[everywhere-defined maps Y -> X]``.

    A partial ``f : X' -> X`` acts contravariantly by sending a map ``u`` to
    the sum of its lifts ``v : Y -> X'`` with ``f o v = u``.
    """

    variance = -1

    def __init__(self, Y: PointedSetTuple):
        self.Y = Y
        self._basis: dict = {}

    def basis(self, X):
        key = X.key()
        if key not in self._basis:
            maps = all_maps(self.Y, X, partial=False)
            self._basis[key] = (maps, {u.key(): i for i, u in enumerate(maps)})
        return self._basis[key]

    def value(self, X):
        return Presented(len(self.basis(X)[0]))

    def action(self, f):
        src_maps, _ = self.basis(f.source)
        _, tgt_index = self.basis(f.target)
        rows = [[0] * len(src_maps) for _ in range(len(tgt_index))]
        for j, v in enumerate(src_maps):
            u = v.then(f)
            if u.is_everywhere_defined():
                rows[tgt_index[u.key()]][j] += 1
        return IntMatrix(rows, len(src_maps))

    def describe(self):
        return {"kind": "representable", "Y": self.Y.to_obj()}


class CorepresentableFunctor:
    """``X -> Z[Gamma^E(X, Y)]`` with action by precomposition."""

    variance = -1

    def __init__(self, Y: PointedSetTuple):
        self.Y = Y
        self._basis: dict = {}

    def basis(self, X):
        key = X.key()
        if key not in self._basis:
            maps = all_maps(X, self.Y, partial=True)
            self._basis[key] = (maps, {u.key(): i for i, u in enumerate(maps)})
        return self._basis[key]

    def value(self, X):
        return Presented(len(self.basis(X)[0]))

    def action(self, f):
        tgt_maps, _ = self.basis(f.target)
        _, src_index = self.basis(f.source)
        rows = [[0] * len(src_index) for _ in range(len(tgt_maps))]
        for i, u in enumerate(tgt_maps):
            rows[i][src_index[f.then(u).key()]] += 1
        return IntMatrix(rows, len(src_index))

    def describe(self):
        return {"kind": "corepresentable", "Y": self.Y.to_obj()}


class SumFunctor:
    def __init__(self, parts):
        self.parts = list(parts)
        self.variance = self.parts[0].variance

    def value(self, X):
        out = Presented(0)
        for p in self.parts:
            out = out.direct_sum(p.value(X))
        return out

    def action(self, f):
        blocks = [p.action(f) for p in self.parts]
        cols = sum(b.cols for b in blocks)
        rows, off = [], 0
        for b in blocks:
            for r in b.data:
                rows.append([0] * off + r + [0] * (cols - off - b.cols))
            off += b.cols
        return IntMatrix(rows, cols)

    def describe(self):
        return {"kind": "sum", "parts": [p.describe() for p in self.parts]}


class TensorFunctor:
    def __init__(self, left, right):
        self.left, self.right = left, right
        self.variance = left.variance

    def value(self, X):
        return self.left.value(X).tensor(self.right.value(X))

    def action(self, f):
        a, b = self.left.action(f), self.right.action(f)
        rows = []
        for ra in a.data:
            for rb in b.data:
                rows.append([x * y for x in ra for y in rb])
        return IntMatrix(rows, a.cols * b.cols)

    def describe(self):
        return {"kind": "tensor", "left": self.left.describe(), "right": self.right.describe()}


class BasisChange:
    """Present every value in a random unimodular basis (same functor up to iso)."""

    def __init__(self, inner, rng: random.Random, steps: int = 6):
        self.inner = inner
        self.variance = inner.variance
        self.rng = rng
        self.steps = steps
        self._mats: dict = {}

    def _mat(self, X):
        key = X.key()
        if key not in self._mats:
            n = self.inner.value(X).ngens
            P = [[int(i == j) for j in range(n)] for i in range(n)]
            Pi = [row[:] for row in P]
            for _ in range(self.steps if n > 1 else 0):
                i, j = self.rng.sample(range(n), 2)
                c = self.rng.choice([-2, -1, 1, 2])
                # row op on P: P_i += c P_j; inverse: column op Pi_j -= c Pi_i
                P[i] = [a + c * b for a, b in zip(P[i], P[j])]
                for row in Pi:
                    row[j] -= c * row[i]
            self._mats[key] = (IntMatrix(P, n), IntMatrix(Pi, n))
        return self._mats[key]

    def value(self, X):
        v = self.inner.value(X)
        _, Pi = self._mat(X)
        return Presented(v.ngens, v.relations @ Pi if v.relations.rows else v.relations)

    def action(self, f):
        A = self.inner.action(f)
        if self.variance < 0:
            src, dst = f.target, f.source
        else:
            src, dst = f.source, f.target
        P_src, _ = self._mat(src)
        _, Pi_dst = self._mat(dst)
        # new coords y = x Pi; a new generator is a row of P
        return P_src @ A @ Pi_dst

    def describe(self):
        return {"kind": "basis-change", "inner": self.inner.describe()}


# --- tabulated functors ----------------------------------------------------------


class TabulatedFunctor:
    """A functor frozen on a finite diagram.

    ``objects`` is a list of tuples; ``values`` maps object keys to presented
    groups and ``actions`` maps morphism keys to ``(morphism, matrix)``.
    """

    def __init__(self, objects, values, actions, variance: int = -1, description=None):
        self.objects = list(objects)
        self.values = dict(values)
        self.actions = dict(actions)
        self.variance = variance
        self.description = description or {}
        keys = {X.key() for X in self.objects}
        if set(self.values) != keys:
            raise DiagramError("values must be given for exactly the diagram objects")
        for k, (f, mat) in self.actions.items():
            if f.source.key() not in keys or f.target.key() not in keys:
                raise DiagramError(f"morphism {f!r} leaves the diagram")
            src, dst = self._ends(f)
            if mat.shape != (self.values[src.key()].ngens, self.values[dst.key()].ngens):
                raise DiagramError(f"matrix of {f!r} has shape {mat.shape}")

    def _ends(self, f):
        # (domain, codomain) of the induced group map
        return (f.target, f.source) if self.variance < 0 else (f.source, f.target)

    def value(self, X) -> Presented:
        try:
            return self.values[X.key()]
        except KeyError:
            raise DiagramError(f"object {X!r} not in the diagram") from None

    def action(self, f) -> IntMatrix:
        try:
            return self.actions[f.key()][1]
        except KeyError:
            raise DiagramError(f"morphism {f!r} not in the diagram") from None

    def has(self, f) -> bool:
        return f.key() in self.actions

    def morphisms(self):
        return [f for f, _ in self.actions.values()]

    def validate(self) -> list[str]:
        """Problems found: non-homomorphisms, identities, composition."""
        problems = []
        for f, mat in self.actions.values():
            src, dst = self._ends(f)
            if not check_hom(self.values[src.key()], self.values[dst.key()], mat):
                problems.append(f"not a homomorphism: {f!r}")
        for X in self.objects:
            idf = GammaEMorphism.identity(X)
            if self.has(idf):
                v = self.values[X.key()]
                if not v.equal_elements(self.action(idf), v.whole()):
                    problems.append(f"identity not preserved at {X!r}")
        by_source: dict = {}
        for f, _ in self.actions.values():
            by_source.setdefault(f.source.key(), []).append(f)
        for f, mf in self.actions.values():
            for g in by_source.get(f.target.key(), []):
                h = f.then(g)
                if not self.has(h):
                    continue
                mg, mh = self.action(g), self.action(h)
                if self.variance < 0:
                    lhs, target = mg @ mf, f.source
                else:
                    lhs, target = mf @ mg, g.target
                if not self.values[target.key()].equal_elements(lhs, mh):
                    problems.append(f"composition fails: {f!r} then {g!r}")
        return problems

    def to_obj(self) -> dict:
        return {
            "variance": self.variance,
            "description": self.description,
            "objects": [{"object": X.to_obj(), "value": {"ngens": self.values[X.key()].ngens, "relations": matrix_to_obj(self.values[X.key()].relations)}} for X in self.objects],
            "morphisms": [{"morphism": f.to_obj(), "matrix": matrix_to_obj(m)} for f, m in self.actions.values()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True)

    @classmethod
    def from_obj(cls, obj) -> "TabulatedFunctor":
        objects, values, actions = [], {}, {}
        for item in obj["objects"]:
            X = PointedSetTuple.from_obj(item["object"])
            objects.append(X)
            values[X.key()] = Presented(int(item["value"]["ngens"]), matrix_from_obj(item["value"]["relations"]))
        for item in obj["morphisms"]:
            f = GammaEMorphism.from_obj(item["morphism"])
            actions[f.key()] = (f, matrix_from_obj(item["matrix"]))
        return cls(objects, values, actions, int(obj.get("variance", -1)), obj.get("description"))

    @classmethod
    def from_json(cls, text: str) -> "TabulatedFunctor":
        return cls.from_obj(json.loads(text))


def tabulate(model, objects: Iterable[PointedSetTuple], morphisms: Iterable[GammaEMorphism], with_idempotents: bool = True) -> TabulatedFunctor:
    """Freeze ``model`` on the given objects and morphisms.

    With ``with_idempotents`` every ``d_{C,M}`` on every object is added,
    which is what the cross-effect computations consume.
    """
    objs, seen = [], set()
    for X in objects:
        if X.key() not in seen:
            seen.add(X.key())
            objs.append(X)
    mors = list(morphisms)
    if with_idempotents:
        for C in objs:
            mors.extend(idempotent(C, M) for M in C.subobjects())
    actions = {}
    for f in mors:
        if f.key() not in actions:
            actions[f.key()] = (f, model.action(f))
    values = {X.key(): model.value(X) for X in objs}
    desc = model.describe() if hasattr(model, "describe") else {}
    return TabulatedFunctor(objs, values, actions, getattr(model, "variance", -1), desc)


def representable_functor(Y: PointedSetTuple, objects, morphisms=()) -> TabulatedFunctor:
    """``R_Y`` tabulated on a diagram, idempotents included."""
    return tabulate(RepresentableFunctor(Y), objects, morphisms)


class CrossEffect(NamedTuple):
    group: FgAbGroup
    lattice: IntMatrix  # preimage lattice in Z^{ngens of T(C)}


def cross_effect(T: TabulatedFunctor, C: PointedSetTuple, M: PointedSetTuple | None = None) -> CrossEffect:
    """``cr_M(T)(C)``: kernels of ``T(d_{C,U})`` over ``U`` of codimension one in ``M``, cut by the image of ``T(d_{C,M})``.

    ``M`` defaults to ``C`` (the full cross effect).  Kernels over larger
    codimension are implied by the codimension-one ones.
    """
    if M is None:
        M = C
    if not M.is_subobject(C):
        raise ValueError("M is not a subobject of C")
    V = T.value(C)
    lat = image_lattice(V, V, T.action(idempotent(C, M)))
    for U in M.codim_one():
        if lat.rows == 0:
            break
        ker = kernel_lattice(V, V, T.action(idempotent(C, U)))
        lat = lattice_intersection(lat, ker)
    rel = row_basis(V.relations) if V.relations.rows else IntMatrix([], V.ngens)
    group = quotient_group(lat, rel) if lat.rows else FgAbGroup()
    return CrossEffect(group, lat)


def cross_effect_splitting(T: TabulatedFunctor, C: PointedSetTuple):
    """``{M: cr_M(T)(C)}`` together with whether the lattices add up to ``T(C)`` directly."""
    V = T.value(C)
    effects = {M.key(): (M, cross_effect(T, C, M)) for M in C.subobjects()}
    total = FgAbGroup()
    for _, ce in effects.values():
        total = total + ce.group
    lats = [ce.lattice for _, ce in effects.values() if ce.lattice.rows]
    spans = bool(lats) and lattice_contains(lattice_sum(*lats), V.whole()) if V.ngens else True
    return effects, total, spans


def _inside(lat: IntMatrix, vectors: IntMatrix) -> bool:
    if vectors.rows == 0 or vectors.is_zero():
        return True
    return lat.rows > 0 and lattice_contains(lat, vectors)


def cross_effect_functoriality(T: TabulatedFunctor, f: GammaEMorphism) -> list[str]:
    """Problems with ``T(f)`` on cross effects, for every sub-tuple ``M``.

    Covariant ``T``, ``f : C -> D``: ``cr_M(T)(C)`` goes into
    ``cr_{f(M)}(T)(D)``, and to zero unless ``f`` is defined on all of ``M``.
    Contravariant ``T``, ``f : D -> C``: ``cr_M(T)(C)`` goes into the sum of
    ``cr_U(T)(D)`` over ``U`` in ``f^-1(M)`` with ``f(U) = M``, hence to zero
    when ``M`` is not in the image and into ``cr_{f^-1(M)}`` when ``f`` is
    injective there.
    """
    problems = []
    C = f.source if T.variance > 0 else f.target
    D = f.target if T.variance > 0 else f.source
    mat = T.action(f)
    rel = T.value(D).relations
    zero = row_basis(rel) if rel.rows else rel
    for M in C.subobjects():
        lat = cross_effect(T, C, M).lattice
        if lat.rows == 0:
            continue
        img = lat @ mat
        if T.variance > 0:
            if M.is_subobject(f.defined_on()):
                target = cross_effect(T, D, f.image(M)).lattice
            else:
                target = zero
        else:
            N = f.preimage(M)
            lats = [cross_effect(T, D, U).lattice for U in N.subobjects() if f.image(U) == M]
            lats = [x for x in lats if x.rows]
            target = lattice_sum(*lats) if lats else zero
        if not _inside(target, img):
            problems.append(f"T(f) moves cr_M out of place for M={M!r}, f={f!r}")
    return problems


class DegreeCheck(NamedTuple):
    status: str  # "holds", "fails" or "undecided"
    witnesses: list

    def __bool__(self):
        return self.status == "holds"


def polynomial_degree_at_most(T: TabulatedFunctor, d: int) -> DegreeCheck:
    """Decide ``deg T <= d`` on the tabulated diagram.

    Needs the empty object and at least one object with more than ``d``
    slots; otherwise the status is ``"undecided"``.
    """
    empty = [X for X in T.objects if X.slots == 0]
    big = [X for X in T.objects if X.slots > d]
    if not empty or not big:
        return DegreeCheck("undecided", ["diagram lacks the empty object" if not empty else f"no object with more than {d} slots"])
    witnesses = []
    for X in empty:
        if not T.value(X).group().is_trivial:
            witnesses.append({"object": X.to_obj(), "reason": "T(empty) != 0", "value": str(T.value(X).group())})
    for X in big:
        ce = cross_effect(T, X)
        if not ce.group.is_trivial:
            witnesses.append({"object": X.to_obj(), "reason": "cross effect nonzero", "value": str(ce.group)})
    return DegreeCheck("fails" if witnesses else "holds", witnesses)


# --- random functors for property tests --------------------------------------------


def random_functor_model(rng: random.Random, sample_objects: Sequence[PointedSetTuple], labels: Sequence, max_rank: int = 12):
    """A random contravariant functor on ``Gamma^E`` built from representables.

    Building blocks: constants, additive ``(Z/m)^{X_e}`` pieces, representables
    ``R_Y`` and corepresentables on small ``Y``; combined by sums and tensor
    products, then re-presented in random bases.  Every block is a functor on
    all of ``Gamma^E``, so restrictions to any diagram are functorial.
    ``max_rank`` caps the generator count over ``sample_objects``.
    """
    labels = tuple(labels)

    def small_y():
        parts = {}
        total = rng.choice([1, 1, 2])
        for k in range(total):
            e = rng.choice(labels)
            parts.setdefault(e, []).append(f"y{k}")
        return PointedSetTuple(labels, parts)

    def block():
        kind = rng.choice(["const", "additive", "additive", "rep", "rep", "corep"])
        if kind == "const":
            return ConstantFunctor(FgAbGroup.from_divisors([rng.choice([0, 0, 2, 3])]))
        if kind == "additive":
            groups = {e: Presented.from_group(FgAbGroup.from_divisors([rng.choice([0, 0, 2, 3, 4])])) for e in labels}
            return AdditiveFunctor(groups)
        if kind == "rep":
            return RepresentableFunctor(small_y())
        return CorepresentableFunctor(PointedSetTuple(labels, {rng.choice(labels): ["y0"]}))

    def rank(model):
        return max(model.value(X).ngens for X in sample_objects)

    parts = []
    for _ in range(rng.randint(1, 3)):
        b = block()
        if rng.random() < 0.3:
            b2 = TensorFunctor(b, block())
            if rank(b2) <= max_rank:
                b = b2
        if rank(b) <= max_rank and sum(rank(p) for p in parts) + rank(b) <= max_rank:
            parts.append(b)
    if not parts:
        parts.append(AdditiveFunctor({e: Presented(1) for e in labels}))
    model = parts[0] if len(parts) == 1 else SumFunctor(parts)
    return BasisChange(model, rng)


def dg_h1_functor(fam) -> AdditiveFunctor:
    """``H_1 o D_G``: ``X -> sum_e (G_e^ab)^{X_e}``, contravariant on ``Gamma^E``."""
    return AdditiveFunctor({e: Presented.from_group(abelianization_of(fam[e])) for e in fam.labels})


def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))

"""Planted bipartite trees labelled by a finite set ``E``, ordered by folding.

A mute vertex is stored as the frozenset of its labelled children and a
labelled vertex as ``(label, frozenset of mute children)``.  A tree is the
mute vertex adjacent to the root ``*``.  Frozensets make structural equality
the same as isomorphism fixing the planting and the labels.

Serialized form: ``(*(m(1)(2)))`` is the star on ``{1, 2}``;
``(*(m(1(m(2)))))`` is the chain with ``2`` hanging below ``1``.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from itertools import combinations, product
from typing import Hashable, Iterable, Iterator

from .functors import GammaEMorphism, PointedSetTuple, ThetaMorphism, part_key
from .homology.chain import FinitePoset

ENUM_BOUND = 6


class TreeError(ValueError):
    """Invalid tree data or an operation on incompatible trees."""


def _lkey(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def _mute_labels(m) -> frozenset:
    out = set()
    for lab, kids in m:
        out.add(lab)
        for k in kids:
            out |= _mute_labels(k)
    return frozenset(out)


def _mute_str(m) -> str:
    items = sorted(m, key=lambda v: _lkey(v[0]))
    return "(m" + "".join(_lab_str(v) for v in items) + ")"


def _lab_str(v) -> str:
    lab, kids = v
    kids = sorted(kids, key=lambda k: min(_lkey(x) for x in _mute_labels(k)))
    return "(" + str(lab) + "".join(_mute_str(k) for k in kids) + ")"


class TreeJ:
    """An element of the folding poset ``J_E``."""

    __slots__ = ("top", "labels", "_index", "_str")

    def __init__(self, top: frozenset, check: bool = True):
        self.top = top
        self._index = None
        self._str = None
        if check:
            self._validate()
        self.labels = _mute_labels(top)

    def _validate(self):
        seen = []

        def mute(m, is_top):
            if not isinstance(m, frozenset):
                raise TreeError("mute vertices must be frozensets")
            if not m:
                raise TreeError("a mute vertex cannot be a leaf")
            for v in m:
                if not (isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], frozenset)):
                    raise TreeError("labelled vertices are (label, frozenset) pairs")
                seen.append(v[0])
                for k in v[1]:
                    mute(k, False)

        mute(self.top, True)
        if len(set(seen)) != len(seen):
            raise TreeError("a label appears twice")

    # --- structure ---------------------------------------------------------

    def _build_index(self):
        # label -> (parent mute, frozenset of child mutes)
        idx = {}

        def walk(m):
            for lab, kids in m:
                idx[lab] = (m, kids)
                for k in kids:
                    walk(k)

        walk(self.top)
        self._index = idx
        return idx

    def _node(self, e):
        idx = self._index or self._build_index()
        if e not in idx:
            raise TreeError(f"label {e!r} not in tree")
        return idx[e]

    def child_mutes(self, e) -> list[frozenset]:
        kids = self._node(e)[1]
        return sorted(kids, key=lambda k: min(_lkey(x) for x in _mute_labels(k)))

    def child_label_sets(self, e) -> list[frozenset]:
        """Label sets of the branches below ``e``: the non-base parts at ``e``."""
        return [_mute_labels(k) for k in self.child_mutes(e)]

    def parent_label(self, e):
        """The labelled vertex two steps above ``e``, or ``None`` under the root's mute vertex."""
        parent = self._node(e)[0]
        for lab, (_, kids) in (self._index or self._build_index()).items():
            if parent in kids:
                return lab
        return None

    def mute_count(self) -> int:
        def count(m):
            return 1 + sum(count(k) for _, kids in m for k in kids)

        return count(self.top)

    def mutes(self) -> list[frozenset]:
        out = []

        def walk(m):
            out.append(m)
            for _, kids in m:
                for k in kids:
                    walk(k)

        walk(self.top)
        return out

    def is_leaf(self, e) -> bool:
        return not self._node(e)[1]

    # --- equality and text -------------------------------------------------

    @property
    def canonical_key(self) -> str:
        if self._str is None:
            self._str = "(*" + _mute_str(self.top) + ")"
        return self._str

    def __str__(self):
        return self.canonical_key

    def __repr__(self):
        return f"TreeJ({self.canonical_key})"

    def __eq__(self, other):
        return isinstance(other, TreeJ) and self.top == other.top

    def __hash__(self):
        return hash(self.top)

    def sort_key(self):
        return (self.mute_count(), self.canonical_key)

    def to_obj(self) -> dict:
        """Explicit node and edge lists."""
        nodes = [{"id": 0, "kind": "root"}]
        edges = []

        def add_mute(m, parent):
            mid = len(nodes)
            nodes.append({"id": mid, "kind": "mute"})
            edges.append([parent, mid])
            for v in sorted(m, key=lambda v: _lkey(v[0])):
                lid = len(nodes)
                nodes.append({"id": lid, "kind": "labelled", "label": v[0]})
                edges.append([mid, lid])
                for k in sorted(v[1], key=lambda k: min(_lkey(x) for x in _mute_labels(k))):
                    add_mute(k, lid)

        add_mute(self.top, 0)
        return {"text": self.canonical_key, "nodes": nodes, "edges": edges}

    def to_json(self) -> str:
        return json.dumps(self.to_obj())


_TOKEN = re.compile(r"\s*(\(|\)|\*|[^()\s*]+)")


def parse_tree(text: str) -> TreeJ:
    """Inverse of ``str(tree)``; integer-looking labels become ints."""
    toks = _TOKEN.findall(text)
    pos = 0
    seen: set = set()

    def expect(t):
        nonlocal pos
        if pos >= len(toks) or toks[pos] != t:
            raise TreeError(f"expected {t!r} at token {pos} in {text!r}")
        pos += 1

    def mute():
        expect("(")
        expect("m")
        kids = []
        while pos < len(toks) and toks[pos] == "(":
            kids.append(labelled())
        expect(")")
        return frozenset(kids)

    def labelled():
        nonlocal pos
        expect("(")
        if pos >= len(toks) or toks[pos] in "()*":
            raise TreeError(f"label expected in {text!r}")
        lab = toks[pos]
        pos += 1
        lab = int(lab) if re.fullmatch(r"-?\d+", lab) else lab
        if lab in seen:
            raise TreeError(f"label {lab!r} appears twice in {text!r}")
        seen.add(lab)
        kids = []
        while pos < len(toks) and toks[pos] == "(":
            kids.append(mute())
        expect(")")
        return (lab, frozenset(kids))

    expect("(")
    expect("*")
    top = mute()
    expect(")")
    if pos != len(toks):
        raise TreeError(f"trailing input in {text!r}")
    return TreeJ(top)


# --- construction and enumeration ---------------------------------------------------


def _check_labels(E) -> tuple:
    E = tuple(sorted(set(E), key=_lkey))
    if not E:
        raise TreeError("no tree has an empty label set")
    return E


def minimal_tree(E: Iterable[Hashable]) -> TreeJ:
    """The star: one mute vertex carrying every label as a leaf."""
    E = _check_labels(E)
    return TreeJ(frozenset((e, frozenset()) for e in E), check=False)


def _set_partitions(items: tuple) -> Iterator[list[tuple]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        for others in combinations(rest, k):
            block = (first,) + others
            remaining = tuple(x for x in rest if x not in others)
            for p in _set_partitions(remaining):
                yield [block] + p


@lru_cache(maxsize=None)
def _mutes(S: tuple) -> tuple:
    """All mute vertices whose subtree carries exactly the labels ``S``."""
    out = []
    n = len(S)
    for k in range(1, n + 1):
        for top in combinations(S, k):
            rest = tuple(x for x in S if x not in top)
            # assign every remaining label to the top vertex above it
            for owners in product(range(k), repeat=len(rest)):
                below = [tuple(x for x, o in zip(rest, owners) if o == i) for i in range(k)]
                choices = [_labelled(top[i], below[i]) for i in range(k)]
                for combo in product(*choices):
                    out.append(frozenset(combo))
    return tuple(out)


@lru_cache(maxsize=None)
def _labelled(lab, below: tuple) -> tuple:
    out = []
    for blocks in _set_partitions(below):
        for kids in product(*(_mutes(b) for b in blocks)):
            out.append((lab, frozenset(kids)))
    return tuple(out)


def enumerate_trees(E: Iterable[Hashable], bound: int = ENUM_BOUND) -> list[TreeJ]:
    """Every element of ``J_E``, sorted by mute count then text."""
    E = _check_labels(E)
    if len(E) > bound:
        raise TreeError(f"tree enumeration limited to |E| <= {bound}, got {len(E)}")
    trees = {TreeJ(m, check=False) for m in _mutes(E)}
    return sorted(trees, key=TreeJ.sort_key)


# --- folding order -----------------------------------------------------------------


def _folds_at_mute(m: frozenset) -> Iterator[frozenset]:
    """Trees (as top mutes) one fold below, for folds inside the subtree of ``m``."""
    for v in m:
        lab, kids = v
        rest = m - {v}
        kids_l = list(kids)
        # merge a child mute into the parent mute
        for k in kids_l:
            yield rest | {(lab, kids - {k})} | k
        # merge two child mutes
        for a, b in combinations(kids_l, 2):
            yield rest | {(lab, (kids - {a, b}) | {a | b})}
        # fold deeper
        for k in kids_l:
            for k2 in _folds_at_mute(k):
                yield rest | {(lab, (kids - {k}) | {k2})}


def fold_steps(B: TreeJ) -> set[TreeJ]:
    """Trees obtained from ``B`` by merging two edges at one labelled vertex."""
    return {TreeJ(t, check=False) for t in _folds_at_mute(B.top)}


def fold_leq(A: TreeJ, B: TreeJ) -> bool:
    """Whether ``A`` is reachable from ``B`` by folding."""
    if A.labels != B.labels:
        raise TreeError("trees over different label sets")
    target = A.mute_count()
    level = {B}
    while level:
        if A in level:
            return True
        if next(iter(level)).mute_count() <= target:
            return False
        nxt = set()
        for t in level:
            nxt |= fold_steps(t)
        level = nxt
    return False


def tree_poset(E: Iterable[Hashable], bound: int = ENUM_BOUND) -> FinitePoset:
    """``J_E`` as a :class:`FinitePoset` with fold steps as covering pairs."""
    trees = enumerate_trees(E, bound)
    covers = [(A, B) for B in trees for A in fold_steps(B)]
    return FinitePoset(trees, covers)


def check_poset_axioms(E: Iterable[Hashable], bound: int = ENUM_BOUND) -> dict:
    """Exhaustive axiom check of the folding order on ``J_E``.

    Compares the level-by-level fold search with the transitive closure of
    the fold steps, then tests reflexivity, antisymmetry, transitivity and
    the grading by mute count.  Each list holds violating pairs or triples.
    """
    P = tree_poset(E, bound)
    els = P.elements
    leq = {(A, B): fold_leq(A, B) for A in els for B in els}
    out = {"size": len(els), "closure_mismatch": [], "reflexive": [], "antisymmetric": [], "transitive": [], "graded": []}
    for A in els:
        if not leq[(A, A)]:
            out["reflexive"].append(str(A))
        for B in els:
            if leq[(A, B)] != P.leq(A, B):
                out["closure_mismatch"].append((str(A), str(B)))
            if A != B and leq[(A, B)] and leq[(B, A)]:
                out["antisymmetric"].append((str(A), str(B)))
            if A != B and leq[(A, B)] and A.mute_count() >= B.mute_count():
                out["graded"].append((str(A), str(B)))
    up = {A: {B for B in els if leq[(A, B)]} for A in els}
    for A in els:
        for B in up[A]:
            for C in up[B] - up[A]:
                out["transitive"].append((str(A), str(B), str(C)))
    out["ok"] = not any(out[k] for k in ("closure_mismatch", "reflexive", "antisymmetric", "transitive", "graded"))
    return out


def fancyF_membership(A: TreeJ) -> bool:
    """Every mute vertex except the root's neighbour has exactly one child."""
    return all(len(m) == 1 for m in A.mutes()[1:])


def fancy_trees(E: Iterable[Hashable], bound: int = ENUM_BOUND) -> list[TreeJ]:
    return [A for A in enumerate_trees(E, bound) if fancyF_membership(A)]


# --- F_E ---------------------------------------------------------------------


def fe_object(A: TreeJ, labels: Iterable | None = None) -> PointedSetTuple:
    """``(P_e^A)_e``: the branches below each ``e``, keyed by their label sets."""
    labels = tuple(sorted(A.labels, key=_lkey)) if labels is None else tuple(labels)
    return PointedSetTuple(labels, {e: A.child_label_sets(e) for e in labels})


def fe_morphism(A: TreeJ, B: TreeJ, check: bool = True) -> GammaEMorphism:
    """``F_E(A <= B) : F_E(B) -> F_E(A)``: a branch of ``B`` goes to the branch of ``A`` containing it."""
    if check and not fold_leq(A, B):
        raise TreeError(f"{A} is not below {B}")
    X, Y = fe_object(B), fe_object(A)
    maps = {}
    for e in X.labels:
        m = {}
        for p in X.parts[e]:
            hits = [q for q in Y.parts[e] if p <= q]
            if len(hits) > 1:
                raise TreeError("branches of the larger tree must nest in those of the smaller")
            if hits:
                m[p] = hits[0]
            elif any(p & q for q in Y.parts[e]):
                raise TreeError("a branch straddles two branches of the smaller tree")
        maps[e] = m
    return GammaEMorphism(X, Y, maps)


# --- J_f ---------------------------------------------------------------------


def jf_map(f: ThetaMorphism, A: TreeJ) -> TreeJ:
    """Image of ``A`` under a partial injection ``f : E -> E'``.

    Vertices labelled outside the domain have all their edges folded onto the
    parent edge and are cut; emptied mute vertices disappear; the survivors
    are relabelled and the new labels hang under the root's mute vertex.
    """
    if set(A.labels) != set(f.source):
        raise TreeError("tree labels differ from the source of f")
    dom = f.domain

    def process(m) -> frozenset:
        out = set()
        for lab, kids in m:
            new_kids = [process(k) for k in kids]
            new_kids = [k for k in new_kids if k]
            if lab in dom:
                out.add((f.mapping[lab], frozenset(new_kids)))
            else:
                for k in new_kids:
                    out |= k
        return frozenset(out)

    top = set(process(A.top))
    fresh = set(f.target) - set(f.mapping.values())
    top |= {(e, frozenset()) for e in fresh}
    if not top:
        raise TreeError("the target label set is empty")
    return TreeJ(frozenset(top), check=False)


def part_sort(parts):
    return sorted(parts, key=part_key)

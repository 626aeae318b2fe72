"""Fouxe-Rabinovitch groups, symmetric automorphism groups and their H_1.

Presentations are assembled from executable automorphisms: every relator is
evaluated by composing the generators' actions before it is emitted.  A
relator that only involves the factors in ``L`` fixes the other factors and
preserves the free factor on ``L``, so it is checked on the subfamily
``(G_e)_{e in L}``; those checks are memoized by the factor tables involved.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Hashable, Iterable, Mapping, Sequence

from .freeprod import (
    GroupFamily,
    StructuralError,
    SymmetricAutomorphism,
    WhiteheadData,
    apply_automorphism,
    automorphisms_agree,
    compose,
    factor_automorphism,
    is_supported_by,
    permutation_automorphism,
    whitehead_automorphism,
    whitehead_generator,
)
from .functors import (
    PointedSetTuple,
    TabulatedFunctor,
    ThetaMorphism,
    cross_effect,
    dg_h1_functor,
    idempotent,
    polynomial_degree_at_most,
    random_functor_model,
    tabulate,
)
from .groups import FiniteGroup, abelianization_of, automorphism_group, compose_tables, find_isomorphism, invert_table
from .homology.abelian import FgAbGroup, Presented, group_from_relations
from .homology.bar import homology_table, kunneth_H
from .homology.chain import poset_homology
from .homology.matrix import IntMatrix
from .homology.presentation import H1Map, Presentation, abelianization, h1_induced_map
from .trees import TreeJ, fancyF_membership, fancy_trees, fe_morphism, fe_object, jf_map, tree_poset

STABILIZER_BOUND = 512


class RelatorError(StructuralError):
    """An emitted relator does not hold as an identity of automorphisms."""


def _lkey(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


# --- generators as data ---------------------------------------------------------
#
# ("a", i, j, g)                 partial conjugation of G_j by g in G_i
# ("aut", e, table)              automorphism of G_e
# ("perm", ((x, y, table), ..))  G_x -> G_y through table, for the moved labels


def build_generator(spec, fam: GroupFamily) -> SymmetricAutomorphism:
    kind = spec[0]
    if kind == "a":
        return whitehead_generator(spec[1], spec[2], spec[3], fam)
    if kind == "aut":
        return factor_automorphism(spec[1], spec[2], fam)
    if kind == "perm":
        perm = {x: y for x, y, _ in spec[1]}
        isos = {x: t for x, _, t in spec[1]}
        return permutation_automorphism(perm, isos, fam)
    raise StructuralError(f"unknown generator kind {kind!r}")


def _spec_labels(spec) -> list:
    if spec[0] == "a":
        return [spec[1], spec[2]]
    if spec[0] == "aut":
        return [spec[1]]
    return [x for x, _, _ in spec[1]]


def _relabel(spec, m):
    if spec[0] == "a":
        return ("a", m[spec[1]], m[spec[2]], spec[3])
    if spec[0] == "aut":
        return ("aut", m[spec[1]], spec[2])
    return ("perm", tuple(sorted((m[x], m[y], t) for x, y, t in spec[1])))


def evaluate(word, gens: Mapping[str, SymmetricAutomorphism], fam: GroupFamily) -> SymmetricAutomorphism:
    """The automorphism ``w_1 o w_2 o ...`` of a word of ``(name, exponent)`` pairs."""
    out = SymmetricAutomorphism.identity(fam)
    for name, exp in word:
        a = gens[name]
        if exp < 0:
            a = a.inverse()
        for _ in range(abs(exp)):
            out = compose(out, a)
    return out


@lru_cache(maxsize=None)
def _local_holds(tables: tuple, word: tuple) -> bool:
    fam = GroupFamily(list(range(len(tables))), [FiniteGroup(t, check=False) for t in tables])
    gens = {k: build_generator(spec, fam) for k, (spec, _) in enumerate(word)}
    phi = evaluate([(k, exp) for k, (_, exp) in enumerate(word)], gens, fam)
    return phi.is_identity and automorphisms_agree(phi, SymmetricAutomorphism.identity(fam))


def relator_holds(word, specs: Mapping[str, tuple], fam: GroupFamily) -> bool:
    """Exact check of ``word == 1`` on the subfamily of the factors it touches."""
    order: list = []
    for name, _ in word:
        for x in _spec_labels(specs[name]):
            if x not in order:
                order.append(x)
    m = {x: i for i, x in enumerate(order)}
    tables = tuple(fam[x].mult for x in order)
    local = tuple((_relabel(specs[name], m), exp) for name, exp in word)
    return _local_holds(tables, local)


def relator_holds_globally(word, gens: Mapping[str, SymmetricAutomorphism], fam: GroupFamily) -> bool:
    """Same check on the whole family (no localization)."""
    phi = evaluate(word, gens, fam)
    return automorphisms_agree(phi, SymmetricAutomorphism.identity(fam))


class AutPresentation(Presentation):
    """A presentation whose generators carry executable automorphisms."""

    def __init__(self, fam: GroupFamily, specs: Mapping[str, tuple], relators, labels):
        super().__init__(list(specs), relators, labels)
        self.fam = fam
        self.specs = dict(specs)
        self.raw_relators = [list(r) for r in relators]
        self._autos = None

    @property
    def automorphisms(self) -> dict:
        if self._autos is None:
            self._autos = {k: build_generator(s, self.fam) for k, s in self.specs.items()}
        return self._autos

    def verify(self, local: bool = True) -> list[str]:
        """Labels of relators that fail the automorphism check."""
        bad = []
        for r, lab in zip(self.raw_relators, self.labels):
            ok = relator_holds(r, self.specs, self.fam) if local else relator_holds_globally(r, self.automorphisms, self.fam)
            if not ok:
                bad.append(lab)
        return bad


def _a(i, j, g):
    return f"a[{i},{j},{g}]"


def _comm(x, y):
    return [(x, 1), (y, 1), (x, -1), (y, -1)]


# --- relation families ------------------------------------------------------------

VARIANTS = (
    "line1",
    "line1-swapped",
    "line2-printed",
    "line2-commute",
    "line3",
    "line3-literal",
    "disjoint-commute",
)

EMITTED = ("line1", "line2-commute", "line3", "disjoint-commute")


def relation_instances(fam: GroupFamily, variant: str):
    """``(label, word)`` pairs for one family of relations among the partial conjugations."""
    E = fam.labels
    out = []
    for i in E:
        G = fam[i]
        nonid = range(1, G.order)
        others = [j for j in E if j != i]
        if variant in ("line1", "line1-swapped"):
            for j in others:
                for g, h in product(nonid, nonid):
                    prod_ = G.mult[h][g] if variant == "line1" else G.mult[g][h]
                    w = [(_a(i, j, g), 1), (_a(i, j, h), 1)]
                    if prod_:
                        w.append((_a(i, j, prod_), -1))
                    out.append((f"{variant} i={i} j={j} g={g} g'={h}", w))
        elif variant in ("line2-printed", "line2-commute"):
            for j, k in permutations(others, 2):
                for g, h in product(nonid, nonid):
                    if variant == "line2-commute":
                        if _lkey(j) > _lkey(k):
                            continue
                        w = _comm(_a(i, j, g), _a(i, k, h))
                    else:
                        w = [(_a(i, j, g), 1), (_a(i, k, h), 1), (_a(i, j, h), -1), (_a(i, k, g), -1)]
                    out.append((f"{variant} i={i} j={j} j'={k} g={g} g'={h}", w))
        elif variant in ("line3", "line3-literal"):
            # alpha_{i,j}^g commutes with alpha_{i',j}^h o alpha_{i',i}^h
            for ip, j in permutations(others, 2):
                Gp = fam[ip]
                spare = [x for x in E if x not in (i, ip)] if variant == "line3-literal" else [j]
                if not spare:
                    continue
                for g, h in product(nonid, range(1, Gp.order)):
                    y = [(_a(ip, j, h), 1), (_a(ip, i, h), 1)]
                    w = [(_a(i, j, g), 1)] + y + [(_a(i, j, g), -1), (_a(ip, i, h), -1), (_a(ip, j, h), -1)]
                    out.append((f"{variant} i={i} i'={ip} j={j} g={g} g'={h}", w))
        elif variant == "disjoint-commute":
            for j in others:
                for k, l in permutations(E, 2):
                    if len({i, j, k, l}) < 4 or _lkey(i) > _lkey(k):
                        continue
                    for g, h in product(nonid, range(1, fam[k].order)):
                        out.append((f"{variant} i={i} j={j} k={k} l={l} g={g} h={h}", _comm(_a(i, j, g), _a(k, l, h))))
        else:
            raise ValueError(f"unknown relation family {variant!r}")
    return out


def fr_generators(fam: GroupFamily) -> dict:
    specs = {}
    for i in fam.labels:
        for j in fam.labels:
            if i != j:
                for g in range(1, fam[i].order):
                    specs[_a(i, j, g)] = ("a", i, j, g)
    return specs


def fr_presentation(fam: GroupFamily, verify: bool = True) -> AutPresentation:
    """Partial conjugations ``a[i,j,g]`` (``i != j``, ``g != 1``) and the verified relators.

    Relators: the composition law for fixed ``(i, j)``, commutation of
    conjugations by one factor on two others, the triangle relation, and
    commutation of conjugations on disjoint pairs.  Raises
    :class:`RelatorError` naming the first relator that fails.
    """
    specs = fr_generators(fam)
    rels, labels = [], []
    for variant in EMITTED:
        for lab, w in relation_instances(fam, variant):
            if verify and not relator_holds(w, specs, fam):
                raise RelatorError(f"relator does not hold: {lab}")
            rels.append(w)
            labels.append(lab)
    return AutPresentation(fam, specs, rels, labels)


def relation_report(fam: GroupFamily, local: bool = True) -> dict:
    """For every relation family: instance count, failures and the first failing instance."""
    specs = fr_generators(fam)
    gens = {k: build_generator(s, fam) for k, s in specs.items()} if not local else None
    out = {}
    for variant in VARIANTS:
        inst = relation_instances(fam, variant)
        bad = []
        for lab, w in inst:
            ok = relator_holds(w, specs, fam) if local else relator_holds_globally(w, gens, fam)
            if not ok:
                bad.append(lab)
        out[variant] = {
            "instances": len(inst),
            "failures": len(bad),
            "holds": not bad,
            "emitted": variant in EMITTED,
            "first_failure": bad[0] if bad else None,
        }
    return out


def h1_direct_formula(fam: GroupFamily) -> FgAbGroup:
    """``sum over ordered pairs i != j of G_i^ab``."""
    out = FgAbGroup()
    for i in fam.labels:
        ab = abelianization_of(fam[i])
        for j in fam.labels:
            if i != j:
                out = out + ab
    return out


def h1_fr_presentation(fam: GroupFamily) -> FgAbGroup:
    if len(fam) == 0:
        return FgAbGroup()
    return abelianization(fr_presentation(fam))


# --- the tree side -----------------------------------------------------------------


def hq_dg_value(fam: GroupFamily, X: PointedSetTuple, q: int) -> FgAbGroup:
    """``H_q(prod_e G_e^{X_e})`` by Kunneth from the factors' bar homology."""
    tables = []
    for e in X.labels:
        t = homology_table(fam[e], q)
        tables.extend([t] * len(X.parts[e]))
    return kunneth_H(tables, q)


def _shape(fam: GroupFamily, X: PointedSetTuple) -> tuple:
    return tuple(sorted((fam[e].mult, len(X.parts[e])) for e in X.labels if X.parts[e]))


@lru_cache(maxsize=4096)
def _fancy_term(shape: tuple) -> FgAbGroup:
    """``cr(H_1 o D_G)`` at an object with ``c`` parts over a factor with table ``t`` for each ``(t, c)``.

    The value only depends on this shape because isomorphic objects have
    isomorphic cross effects.
    """
    if not shape:
        return FgAbGroup()
    labels = list(range(len(shape)))
    fam = GroupFamily(labels, [FiniteGroup(t, check=False) for t, _ in shape])
    X = PointedSetTuple(labels, {k: list(range(c)) for k, (_, c) in enumerate(shape)})
    T = tabulate(dg_h1_functor(fam), [X], [], with_idempotents=True)
    kun = hq_dg_value(fam, X, 1)
    if kun != T.value(X).group():
        raise AssertionError(f"Kunneth value {kun} differs from the tabulated value {T.value(X).group()}")
    return cross_effect(T, X).group


def h1_fr_formula(fam: GroupFamily, detail: bool = False):
    """``sum over A in the fancy trees of cr_{F_E(A)}(H_1 o D_G)``.

    With ``detail`` also returns the nonzero contributions per tree.
    """
    if len(fam) == 0:
        return (FgAbGroup(), []) if detail else FgAbGroup()
    total = FgAbGroup()
    contrib = []
    for A in fancy_trees(fam.labels):
        g = _fancy_term(_shape(fam, fe_object(A, fam.labels)))
        if not g.is_trivial:
            contrib.append((A, g))
        total = total + g
    return (total, contrib) if detail else total


def h1_cokernel(m: H1Map) -> FgAbGroup:
    """Cokernel of an ``H_1`` map given in SNF coordinates."""
    k = len(m.target_orders)
    rows = [[d if c == i else 0 for c in range(k)] for i, d in enumerate(m.target_orders) if d]
    rows += [list(r) for r in m.matrix.data]
    return group_from_relations(IntMatrix(rows, k))


def h1_naturality_check(small: GroupFamily, big: GroupFamily, f: Mapping) -> dict:
    """Compatibility of the fancy-tree decomposition with an injection ``f : E -> E'``.

    ``f`` must preserve factors.  On ``H_1(FR)`` it induces
    ``a[i,j,g] -> a[f(i),f(j),g]``; the decomposition is natural when ``J_f``
    sends fancy trees injectively to fancy trees with the same summand, the
    induced map is injective, and its cokernel is the sum of the summands of
    the fancy trees outside the image.
    """
    f = dict(f)
    if set(f) != set(small.labels) or len(set(f.values())) != len(f) or not set(f.values()) <= set(big.labels):
        raise ValueError("f must be an everywhere-defined injection between the label sets")
    if any(big[f[e]] != small[e] for e in small.labels):
        raise ValueError("f must preserve the factors")
    theta = ThetaMorphism(small.labels, big.labels, f)
    images = {_a(i, j, g): [(_a(f[i], f[j], g), 1)] for _, i, j, g in fr_generators(small).values()}
    m = h1_induced_map(fr_presentation(small), fr_presentation(big), images)
    big_fancy = set(fancy_trees(big.labels))
    moved = {}
    summand_mismatch = []
    for A in fancy_trees(small.labels):
        B = jf_map(theta, A)
        moved[A] = B
        if _fancy_term(_shape(small, fe_object(A, small.labels))) != _fancy_term(_shape(big, fe_object(B, big.labels))):
            summand_mismatch.append([str(A), str(B)])
    image = set(moved.values())
    rest = FgAbGroup()
    for B in big_fancy - image:
        rest = rest + _fancy_term(_shape(big, fe_object(B, big.labels)))
    coker = h1_cokernel(m)
    fancy_ok = image <= big_fancy and len(image) == len(moved)
    return {
        "map": {str(k): str(v) for k, v in f.items()},
        "fancy_preserved": fancy_ok,
        "summands_match": not summand_mismatch,
        "injective": m.injective,
        "cokernel": str(coker),
        "complement_sum": str(rest),
        "pass": fancy_ok and not summand_mismatch and m.injective and coker == rest,
        "witnesses": summand_mismatch[:3],
    }


# --- stabilizers -------------------------------------------------------------------


def stabilizer_coordinates(A: TreeJ, fam: GroupFamily) -> list[tuple]:
    """``(e, P)`` for every non-base part ``P`` at ``e``; one copy of ``G_e`` each."""
    X = fe_object(A, fam.labels)
    return X.elements()


def stabilizer_map(A: TreeJ, fam: GroupFamily, element: Sequence[int]) -> SymmetricAutomorphism:
    """``prod_e prod_P prod_{p in P} alpha_{e,p}^{g_P}`` for ``element = (g_P)``."""
    coords = stabilizer_coordinates(A, fam)
    if len(element) != len(coords):
        raise StructuralError("one element per stabilizer coordinate expected")
    out = SymmetricAutomorphism.identity(fam)
    for (e, P), g in zip(coords, element):
        for p in sorted(P, key=_lkey):
            out = compose(out, whitehead_generator(e, p, g, fam))
    return out


def _signature(phi: SymmetricAutomorphism) -> tuple:
    return tuple(apply_automorphism(phi, w, phi.fam) for w in phi.fam.letters())


def stabilizer_check(A: TreeJ, fam: GroupFamily, bound: int = STABILIZER_BOUND, seed: int = 0) -> dict:
    """Homomorphism, injectivity and image of the stabilizer map.

    Exhaustive when the stabilizer has at most ``bound`` elements, otherwise
    a seeded sample of pairs is used and flagged.
    """
    coords = stabilizer_coordinates(A, fam)
    groups = [fam[e] for e, _ in coords]
    size = 1
    for G in groups:
        size *= G.order
    sampled = size > bound
    rng = random.Random(seed)
    if sampled:
        domain = [tuple(rng.randrange(G.order) for G in groups) for _ in range(bound)]
    else:
        domain = list(product(*(range(G.order) for G in groups)))
    images = {x: stabilizer_map(A, fam, x) for x in domain}
    # g -> alpha^g reverses products (alpha^g o alpha^h = alpha^{hg}), so the
    # map is multiplicative on prod G_e only where the factors commute
    hom_fail, op_fail = [], []
    pairs = [(x, y) for x in domain for y in domain]
    if len(pairs) > bound * 8:
        pairs = rng.sample(pairs, bound * 8)
    for x, y in pairs:
        both = compose(images[x], images[y])
        xy = tuple(G.mult[a][b] for G, a, b in zip(groups, x, y))
        yx = tuple(G.mult[b][a] for G, a, b in zip(groups, x, y))
        if both != (images.get(xy) or stabilizer_map(A, fam, xy)):
            hom_fail.append((x, y))
        if both != (images.get(yx) or stabilizer_map(A, fam, yx)):
            op_fail.append((x, y))
    sigs = {}
    collisions = []
    for x, phi in images.items():
        s = _signature(phi)
        if s in sigs:
            collisions.append((sigs[s], x))
        sigs[s] = x
    # image versus supported Whitehead data, one operating factor at a time
    support_fail = []
    image_keys = {phi.key() for phi in images.values()}
    for ell in fam.labels:
        others = [i for i in fam.labels if i != ell]
        Gl = fam[ell]
        if Gl.order ** len(others) > bound * 8:
            continue
        for vals in product(range(Gl.order), repeat=len(others)):
            w = WhiteheadData.make(ell, dict(zip(others, vals)), fam)
            supported = is_supported_by(w, A, fam)
            inside = whitehead_automorphism(w, fam).key() in image_keys
            if supported != inside and not (sampled and supported):
                support_fail.append({"ell": ell, "coefficients": list(vals), "supported": supported, "in_image": inside})
    for x, phi in images.items():
        # every image is a product of supported Whitehead automorphisms, factor by factor
        for ell in fam.labels:
            vals = {i: 0 for i in fam.labels if i != ell}
            for (e, P), g in zip(coords, x):
                if e == ell:
                    for p in P:
                        vals[p] = g
            if not is_supported_by(WhiteheadData.make(ell, vals, fam), A, fam):
                support_fail.append({"element": list(x), "ell": ell})
    return {
        "tree": str(A),
        "coordinates": [[str(e), sorted(P, key=_lkey)] for e, P in coords],
        "order": size,
        "sampled": sampled,
        "checked_elements": len(images),
        "homomorphism": not hom_fail,
        "opposite_homomorphism": not op_fail,
        "injective": not collisions,
        "image_is_supported": not support_fail,
        "witnesses": {"hom": hom_fail[:3], "opposite": op_fail[:3], "collisions": collisions[:3], "support": support_fail[:3]},
    }


# --- homology over the fancy-tree diagram -------------------------------------------


def fe_diagram(labels: Sequence[Hashable]):
    """Trees, the poset ``J_E``, the objects ``F_E(A)`` and the morphisms ``F_E(A <= B)``."""
    P = tree_poset(labels)
    objects = {A: fe_object(A, labels) for A in P.elements}
    morphisms = {}
    for A in P.elements:
        for B in P.above(A):
            morphisms[(A, B)] = fe_morphism(A, B, check=False)
    return P, objects, morphisms


class _TreeCoefficients:
    """``T o F_E`` on ``J_E`` as a covariant poset module."""

    def __init__(self, T: TabulatedFunctor, objects, morphisms):
        self.T, self.objects, self.morphisms = T, objects, morphisms

    def value(self, A):
        return self.T.value(self.objects[A])

    def map(self, A, B):
        if A == B:
            return IntMatrix.identity(self.value(A).ngens)
        return self.T.action(self.morphisms[(A, B)])


def tabulate_on_fe(model, labels: Sequence[Hashable]) -> TabulatedFunctor:
    P, objects, morphisms = fe_diagram(labels)
    return tabulate(model, objects.values(), morphisms.values(), with_idempotents=True)


def dec_pira_check(labels: Sequence[Hashable], T, nmax: int | None = None) -> dict:
    """Compare ``H_*(J_E; T o F_E)`` with the cross-effect sum over the fancy trees.

    ``T`` is a functor model or a :class:`TabulatedFunctor` already covering
    the ``F_E`` diagram.  Functoriality is validated first.
    """
    labels = tuple(labels)
    if nmax is None:
        nmax = len(labels) - 1
    P, objects, morphisms = fe_diagram(labels)
    if not isinstance(T, TabulatedFunctor):
        T = tabulate(T, objects.values(), morphisms.values(), with_idempotents=True)
    problems = T.validate()
    if problems:
        raise ValueError("coefficient functor is not functorial: " + "; ".join(problems[:3]))
    lhs = poset_homology(P, _TreeCoefficients(T, objects, morphisms), nmax)
    rhs = FgAbGroup()
    contrib = []
    for A in P.elements:
        if not fancyF_membership(A):
            continue
        ce = cross_effect(T, objects[A])
        if not ce.group.is_trivial:
            contrib.append([str(A), str(ce.group)])
        rhs = rhs + ce.group
    higher = [h for h in lhs[1:nmax + 1]]
    ok = lhs[0] == rhs and all(h.is_trivial for h in higher)
    return {
        "labels": list(labels),
        "H": [h.to_obj() for h in lhs],
        "rhs": rhs.to_obj(),
        "rhs_elementary_divisors": rhs.elementary_divisors(),
        "lhs_elementary_divisors": lhs[0].elementary_divisors(),
        "higher_vanish": all(h.is_trivial for h in higher),
        "contributions": contrib,
        "pass": ok,
    }


# --- degree of E -> H_1(FR(G_E)) ----------------------------------------------------


def fr_h1_theta_functor(G: FiniteGroup, n: int = 3) -> TabulatedFunctor:
    """``S -> H_1(FR(G^{*S}))`` on the subsets of ``{1..n}`` with the idempotents ``d_{S,U}``.

    ``d_{S,U}`` keeps the partial conjugations inside ``U`` and kills the rest;
    values and matrices come from the presentations through SNF.
    """
    coord = "S"
    full = list(range(1, n + 1))
    objs, values, actions = [], {}, {}
    cache = {}

    def pres(S):
        if S not in cache:
            fam = GroupFamily(list(S), [G] * len(S))
            cache[S] = fr_presentation(fam)
        return cache[S]

    for k in range(n + 1):
        for S in combinations(full, k):
            X = PointedSetTuple((coord,), {coord: list(S)})
            objs.append(X)
            P = pres(S)
            maps = {}
            for U in (c for r in range(len(S) + 1) for c in combinations(S, r)):
                images = {}
                for name, spec in P.specs.items():
                    _, i, j, g = spec
                    images[name] = [(name, 1)] if (i in U and j in U) else []
                m = h1_induced_map(P, P, images)
                M = X.sub((coord, u) for u in U)
                f = idempotent(X, M)
                maps[f.key()] = (f, m)
            values[X.key()] = _presented_from_map(m)
            actions.update((k2, (f, m.matrix)) for k2, (f, m) in maps.items())
    return TabulatedFunctor(objs, values, actions, variance=1, description={"kind": "fr-h1", "group": G.name, "n": n})


def _presented_from_map(m: H1Map) -> Presented:
    k = len(m.target_orders)
    rows = []
    for i, d in enumerate(m.target_orders):
        if d:
            row = [0] * k
            row[i] = d
            rows.append(row)
    return Presented(k, IntMatrix(rows, k))


def degree_check(G: FiniteGroup, n: int = 3, d: int = 2) -> dict:
    T = fr_h1_theta_functor(G, n)
    full = max(T.objects, key=lambda X: X.slots)
    ce = cross_effect(T, full)
    verdict = polynomial_degree_at_most(T, d)
    return {
        "group": G.name,
        "n": n,
        "d": d,
        "full_cross_effect": str(ce.group),
        "status": verdict.status,
        "witnesses": verdict.witnesses,
        "values": {",".join(map(str, X.parts["S"])) or "empty": str(T.value(X).group()) for X in T.objects},
    }


# --- symmetric automorphisms ----------------------------------------------------------


def isomorphism_classes(fam: GroupFamily) -> list[list]:
    """Labels grouped by isomorphism type of the factor, each class in label order."""
    classes: list[list] = []
    for e in fam.labels:
        for c in classes:
            if find_isomorphism(fam[c[0]], fam[e]) is not None:
                c.append(e)
                break
        else:
            classes.append([e])
    return classes


def _class_isos(fam: GroupFamily, classes) -> dict:
    # phi_e : G_e -> G_rep
    out = {}
    for c in classes:
        rep = fam[c[0]]
        for e in c:
            t = find_isomorphism(fam[e], rep)
            out[e] = t
    return out


def transposition_spec(fam: GroupFamily, x, y, isos) -> tuple:
    to_y = compose_tables(invert_table(isos[y]), isos[x])
    to_x = compose_tables(invert_table(isos[x]), isos[y])
    return ("perm", tuple(sorted([(x, y, to_y), (y, x, to_x)], key=lambda t: _lkey(t[0]))))


def _conjugate(phi: SymmetricAutomorphism, psi: SymmetricAutomorphism) -> SymmetricAutomorphism:
    return compose(compose(phi, psi), phi.inverse())


def sigma_aut_presentation(fam: GroupFamily, verify: bool = True) -> AutPresentation:
    """``FR(G) x| (prod Aut(G_e) x| S(G))`` as one presentation.

    Generators: the partial conjugations, every non-identity automorphism of
    each factor (``t[e,k]``, ``k`` indexing :func:`automorphism_group`), and
    adjacent transpositions ``s[x,y]`` inside each isomorphism class.
    The action relators ``x a x^-1 = a'`` are found by conjugating the actual
    automorphisms and looking the result up among the generators.
    """
    classes = isomorphism_classes(fam)
    isos = _class_isos(fam, classes)
    specs = fr_generators(fam)
    fr_names = list(specs)
    aut_tables = {e: automorphism_group(fam[e]) for e in fam.labels}
    t_names = {e: [] for e in fam.labels}
    for e in fam.labels:
        for k, t in enumerate(aut_tables[e]):
            if k:
                name = f"t[{e},{k}]"
                specs[name] = ("aut", e, t)
                t_names[e].append(name)
    s_names = []
    for c in classes:
        for x, y in zip(c, c[1:]):
            name = f"s[{x},{y}]"
            specs[name] = transposition_spec(fam, x, y, isos)
            s_names.append(name)
    gens = {k: build_generator(s, fam) for k, s in specs.items()}
    lookup = {phi.key(): k for k, phi in gens.items()}
    ident = SymmetricAutomorphism.identity(fam).key()

    rels, labels = [], []

    def emit(label, word):
        if verify and not relator_holds(word, specs, fam):
            raise RelatorError(f"relator does not hold: {label}")
        rels.append(word)
        labels.append(label)

    def name_of(phi, context):
        k = phi.key()
        if k == ident:
            return None
        if k not in lookup:
            raise RelatorError(f"conjugate is not a single generator: {context}")
        return lookup[k]

    for lab, w in (x for v in EMITTED for x in relation_instances(fam, v)):
        emit(lab, w)
    # Cayley tables of the Aut(G_e)
    for e in fam.labels:
        tabs = aut_tables[e]
        index = {t: k for k, t in enumerate(tabs)}
        for a, b in product(range(1, len(tabs)), repeat=2):
            c = index[compose_tables(tabs[a], tabs[b])]
            w = [(f"t[{e},{a}]", 1), (f"t[{e},{b}]", 1)]
            if c:
                w.append((f"t[{e},{c}]", -1))
            emit(f"aut e={e} {a}*{b}={c}", w)
    # distinct factors commute
    for e, f in combinations(fam.labels, 2):
        for x in t_names[e]:
            for y in t_names[f]:
                emit(f"aut-commute {x} {y}", _comm(x, y))
    # Coxeter relators per class, transpositions of different classes commute
    by_class = [[f"s[{x},{y}]" for x, y in zip(c, c[1:])] for c in classes]
    for ss in by_class:
        for k, s in enumerate(ss):
            emit(f"coxeter {s}^2", [(s, 2)])
            if k + 1 < len(ss):
                emit(f"coxeter ({s} {ss[k + 1]})^3", [(s, 1), (ss[k + 1], 1)] * 3)
            for s2 in ss[k + 2:]:
                emit(f"coxeter [{s},{s2}]", _comm(s, s2))
    for a, b in combinations(by_class, 2):
        for s1, s2 in product(a, b):
            emit(f"coxeter [{s1},{s2}]", _comm(s1, s2))
    # actions on the other generators
    for x in s_names + [n for e in fam.labels for n in t_names[e]]:
        targets = fr_names if x.startswith("t") else fr_names + [n for e in fam.labels for n in t_names[e]]
        for a in targets:
            img = name_of(_conjugate(gens[x], gens[a]), f"{x} {a} {x}^-1")
            w = [(x, 1), (a, 1), (x, -1)]
            if img is not None:
                w.append((img, -1))
            emit(f"action {x} {a} {x}^-1 = {img}", w)
    return AutPresentation(fam, specs, rels, labels)


def extend_automorphism(phi: SymmetricAutomorphism, big: GroupFamily) -> SymmetricAutomorphism:
    """Extend by the identity on the labels outside ``phi``'s family."""
    return SymmetricAutomorphism(big, phi.perm, phi.conj, phi.iso, check=False)


def _transposition_word(order: list, x, y) -> list:
    """Adjacent transpositions of ``order`` whose product is ``(x y)``."""
    p, q = sorted((order.index(x), order.index(y)))
    adj = [f"s[{order[k]},{order[k + 1]}]" for k in range(len(order) - 1)]
    seq = adj[p:q] + list(reversed(adj[p:q - 1]))
    return [(s, 1) for s in seq]


def inclusion_map(small: AutPresentation, big: AutPresentation, check: bool = True) -> H1Map:
    """``H_1`` map of ``SigmaAut(H) -> SigmaAut(G)`` for a subfamily ``H``.

    Each generator goes to the generator with the same name; a transposition
    that is not adjacent in ``G`` is rewritten through adjacent ones.  With
    ``check`` every image is compared with the extension by the identity.
    """
    classes = isomorphism_classes(big.fam)
    images = {}
    for name, spec in small.specs.items():
        if name in big.index:
            images[name] = [(name, 1)]
        elif spec[0] == "perm":
            x, y = spec[1][0][0], spec[1][1][0]
            c = next(c for c in classes if x in c)
            images[name] = _transposition_word(c, x, y)
        elif spec[0] == "aut":
            e, t = spec[1], spec[2]
            k = automorphism_group(big.fam[e]).index(tuple(t))
            images[name] = [(f"t[{e},{k}]", 1)]
        else:
            raise StructuralError(f"no image for generator {name}")
    if check:
        for name, w in images.items():
            ext = extend_automorphism(small.automorphisms[name], big.fam)
            if evaluate(w, big.automorphisms, big.fam) != ext:
                raise StructuralError(f"image of {name} is not its extension by the identity")
    return h1_induced_map(small, big, images)


def free_power(G: FiniteGroup, n: int) -> GroupFamily:
    return GroupFamily(list(range(1, n + 1)), [G] * n)


STABILITY_MAX_N = 6
STABILITY_MAX_ORDER = 6


def stability_h1_table(G: FiniteGroup, n_values: Iterable[int], check: bool = True,
                       max_n: int = STABILITY_MAX_N, max_order: int = STABILITY_MAX_ORDER) -> list[dict]:
    """``H_1(SigmaAut(G^{*n}))`` and the maps induced by ``n -> n+1``.

    Values of ``n`` beyond ``max_n`` (or any ``n`` when ``|G| > max_order``)
    are not computed; they appear as rows marked ``truncated``.
    """
    n_values = sorted(set(n_values))
    kept = [n for n in n_values if n <= max_n and G.order <= max_order]
    pres = {n: sigma_aut_presentation(free_power(G, n)) for n in kept}
    rows = []
    for n in n_values:
        if n not in pres:
            rows.append({"group": G.name, "n": n, "truncated": True})
            continue
        row = {"group": G.name, "n": n, "H1": str(abelianization(pres[n])), "generators": pres[n].ngens, "relators": len(pres[n].relators)}
        if n + 1 in pres:
            m = inclusion_map(pres[n], pres[n + 1], check)
            row.update({"map_to": n + 1, "flag": m.flag, "iso": m.is_iso, "matrix": [[str(x) for x in r] for r in m.matrix.data]})
        rows.append(row)
    return rows


def subfamily_instance(fam: GroupFamily, M: Sequence[Hashable], i: int = 1) -> dict:
    """Hypotheses of the subfamily criterion and the ``H_1`` map for ``M`` in ``E``."""
    sub = fam.restrict(M)
    cls_big = isomorphism_classes(fam)
    cls_small = isomorphism_classes(sub)
    cover = {next(k for k, c in enumerate(cls_big) if u[0] in c) for u in cls_small}
    surjective = cover == set(range(len(cls_big)))
    sizes_ok = True
    for u in cls_small:
        p = next(c for c in cls_big if u[0] in c)
        if len(u) != len(p) and len(u) < 2 * i + 2:
            sizes_ok = False
    small = sigma_aut_presentation(sub)
    big = sigma_aut_presentation(fam)
    m = inclusion_map(small, big)
    return {
        "family": repr(fam),
        "M": list(M),
        "hypotheses": {"orbits_surjective": surjective, "orbit_sizes": sizes_ok},
        "H1_small": str(abelianization(small)),
        "H1_big": str(abelianization(big)),
        "flag": m.flag,
        "iso": m.is_iso,
    }


def dec_pira_random_trial(n: int, seed: int, max_rank: int = 12) -> dict:
    """One seeded random coefficient functor on the ``F_E`` diagram, ``E = {1..n}``."""
    labels = tuple(range(1, n + 1))
    rng = random.Random(seed)
    P, objects, morphisms = fe_diagram(labels)
    model = random_functor_model(rng, list(objects.values()), labels, max_rank)
    T = tabulate(model, objects.values(), morphisms.values(), with_idempotents=True)
    out = dec_pira_check(labels, T)
    out["seed"] = seed
    out["functor"] = model.describe()
    return out

import itertools
import random

import pytest

from frstab.freeprod import GroupFamily, compose, whitehead_generator
from frstab.fr import (
    EMITTED,
    VARIANTS,
    RelatorError,
    degree_check,
    evaluate,
    fr_generators,
    fr_presentation,
    free_power,
    h1_direct_formula,
    h1_fr_formula,
    h1_fr_presentation,
    h1_naturality_check,
    inclusion_map,
    isomorphism_classes,
    relation_instances,
    relation_report,
    relator_holds,
    sigma_aut_presentation,
    stability_h1_table,
    stabilizer_check,
    subfamily_instance,
)
from frstab.groups import builtin_group
from frstab.homology.abelian import FgAbGroup
from frstab.homology.presentation import abelianization
from frstab.trees import enumerate_trees


def family(*names, labels=None):
    groups = [builtin_group(n) for n in names]
    if labels is None:
        return GroupFamily.of(groups)
    return GroupFamily(list(labels), groups)


# --- relation families -------------------------------------------------------------------


def test_emitted_relations_hold_for_nonabelian_factors():
    rep = relation_report(family("S3", "Z2", "Z3"))
    for v in EMITTED:
        assert rep[v]["holds"], (v, rep[v]["first_failure"])


def test_reported_variants_behave_as_analysed():
    ab = relation_report(family("Z3", "Z3", "Z2"))
    nonab = relation_report(family("S3", "Z2", "Z2"))
    # the swapped composition law only differs for nonabelian factors
    assert ab["line1-swapped"]["holds"]
    assert not nonab["line1-swapped"]["holds"]
    # the printed second line fails as soon as g != g'
    assert not ab["line2-printed"]["holds"]
    assert ab["line3-literal"]["holds"] and nonab["line3-literal"]["holds"]
    assert set(ab) == set(VARIANTS)


def test_disjoint_commutation_needs_four_labels():
    assert relation_instances(family("Z2", "Z2", "Z2"), "disjoint-commute") == []
    inst = relation_instances(family("Z2", "Z2", "Z2", "Z2"), "disjoint-commute")
    assert inst and all(relator_holds(w, fr_generators(family("Z2", "Z2", "Z2", "Z2")), family("Z2", "Z2", "Z2", "Z2")) for _, w in inst)


def test_local_and_global_verification_agree():
    fam = family("S3", "Z2", "Z3")
    local = relation_report(fam, local=True)
    glob = relation_report(fam, local=False)
    assert {v: r["failures"] for v, r in local.items()} == {v: r["failures"] for v, r in glob.items()}


def test_presentation_rejects_a_false_relator():
    fam = family("Z3", "Z2")
    specs = fr_generators(fam)
    bad = [("a[1,2,1]", 2)]
    assert not relator_holds(bad, specs, fam)
    P = fr_presentation(fam)
    assert P.verify() == [] and P.verify(local=False) == []


def test_relator_error_is_structural():
    assert issubclass(RelatorError, ValueError)


def test_generators_compose_in_reverse_order():
    fam = family("S3", "Z2")
    a, b = 1, 3  # noncommuting elements of S3
    lhs = compose(whitehead_generator(1, 2, a, fam), whitehead_generator(1, 2, b, fam))
    assert lhs == whitehead_generator(1, 2, fam[1].mult[b][a], fam)
    assert lhs != whitehead_generator(1, 2, fam[1].mult[a][b], fam)


# --- H_1 of FR ---------------------------------------------------------------------------


H1_CASES = [
    (("Z2", "Z2"), "(Z/2)^2"),
    (("Z3", "Z3", "Z3"), "(Z/3)^6"),
    (("Z4", "S3"), "Z/2 + Z/4"),
    (("S3", "Z2", "Z3"), "(Z/2)^2 + (Z/6)^2"),
]


@pytest.mark.parametrize("names,expected", H1_CASES)
def test_h1_three_ways(names, expected):
    fam = family(*names)
    a, b, c = h1_fr_presentation(fam), h1_fr_formula(fam), h1_direct_formula(fam)
    assert a == b == c
    assert str(a) == expected


def test_h1_invariant_under_relabeling():
    names = ("Z4", "S3", "Z2")
    ref = h1_fr_presentation(family(*names))
    for perm in itertools.permutations(names):
        assert h1_fr_presentation(family(*perm, labels=["c", "a", "b"])) == ref


def test_h1_small_families():
    assert h1_fr_presentation(GroupFamily([], [])).is_trivial
    assert h1_fr_presentation(family("S3")).is_trivial
    assert h1_fr_formula(family("S3")).is_trivial


def test_h1_formula_contributions_sit_on_fancy_trees():
    total, contrib = h1_fr_formula(family("Z2", "Z3"), detail=True)
    assert str(total) == "Z/6"
    assert len(contrib) == 2


@pytest.mark.parametrize("seed", range(12))
def test_decomposition_natural_under_injections(seed):
    rng = random.Random(seed)
    names = ["Z2", "Z3", "Z4", "Z2xZ2", "S3"]
    m = rng.randint(2, 4)
    big = family(*[rng.choice(names) for _ in range(m)])
    img = rng.sample(big.labels, rng.randint(1, m))
    small = GroupFamily(list(range(1, len(img) + 1)), [big[e] for e in img])
    r = h1_naturality_check(small, big, dict(zip(small.labels, img)))
    assert r["pass"], r


def test_naturality_identity_and_inputs():
    fam = family("Z2", "S3", "Z3")
    r = h1_naturality_check(fam, fam, {1: 1, 2: 2, 3: 3})
    assert r["pass"] and r["cokernel"] == r["complement_sum"] == "0"
    with pytest.raises(ValueError):
        h1_naturality_check(fam, fam, {1: 2, 2: 1, 3: 3})
    with pytest.raises(ValueError):
        h1_naturality_check(fam, fam, {1: 1, 2: 1, 3: 3})


def test_naturality_cokernel_for_one_new_label():
    # Z/2 * Z/2 into three copies: H_1 goes (Z/2)^2 -> (Z/2)^6
    r = h1_naturality_check(free_power(builtin_group("Z2"), 2), free_power(builtin_group("Z2"), 3), {1: 1, 2: 2})
    assert r["injective"] and r["cokernel"] == "(Z/2)^4" and r["pass"]


# --- stabilizers -------------------------------------------------------------------------


@pytest.mark.parametrize("names", [("Z2", "Z3"), ("Z3", "Z2", "Z2"), ("Z3", "Z3", "Z3")])
def test_stabilizers_abelian(names):
    fam = family(*names)
    for A in enumerate_trees(fam.labels):
        r = stabilizer_check(A, fam)
        assert r["homomorphism"] and r["injective"] and r["image_is_supported"], r


def test_stabilizers_nonabelian_are_opposite_homomorphisms():
    fam = family("S3", "Z2")
    results = [stabilizer_check(A, fam) for A in enumerate_trees(fam.labels)]
    assert all(r["opposite_homomorphism"] and r["injective"] and r["image_is_supported"] for r in results)
    assert any(not r["homomorphism"] for r in results)


def test_stabilizer_sampling_flag():
    fam = family("Z3", "Z3", "Z3")
    A = max(enumerate_trees(fam.labels), key=lambda A: stabilizer_check(A, fam, bound=10**6)["order"])
    r = stabilizer_check(A, fam, bound=4, seed=1)
    # sampled points may repeat
    assert r["sampled"] and 1 <= r["checked_elements"] <= 4
    assert r == stabilizer_check(A, fam, bound=4, seed=1)


# --- degree ------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "Z2xZ2"])
def test_degree_two(name):
    r = degree_check(builtin_group(name), 3, 2)
    assert r["full_cross_effect"] == "0" and r["status"] == "holds"
    assert degree_check(builtin_group(name), 3, 1)["status"] == "fails"


def test_degree_values_match_direct_formula():
    G = builtin_group("Z3")
    r = degree_check(G, 3, 2)
    for key, val in r["values"].items():
        k = 0 if key == "empty" else len(key.split(","))
        assert val == str(h1_direct_formula(free_power(G, k)) if k else FgAbGroup())


# --- symmetric automorphisms and stability ----------------------------------------------------


def test_isomorphism_classes():
    fam = family("Z2", "Z3", "Z2", "Z4")
    assert isomorphism_classes(fam) == [[1, 3], [2], [4]]


def test_sigma_aut_small_cases():
    assert abelianization(sigma_aut_presentation(family("Z2"))).is_trivial
    assert str(abelianization(sigma_aut_presentation(family("Z3")))) == "Z/2"
    P = sigma_aut_presentation(family("Z3", "Z3"))
    assert P.verify(local=False) == []


def test_sigma_aut_transposition_conjugates_partial_conjugations():
    fam = family("Z3", "Z3", "Z2")
    P = sigma_aut_presentation(fam)
    g = P.automorphisms
    s = g["s[1,2]"]
    conj = evaluate([("s[1,2]", 1), ("a[1,3,1]", 1), ("s[1,2]", -1)], g, fam)
    assert conj == g["a[2,3,1]"]
    assert compose(s, s).is_identity


def test_sigma_aut_mixed_family_verifies_globally():
    P = sigma_aut_presentation(family("S3", "S3", "Z2"))
    assert P.verify(local=False) == []
    assert str(abelianization(P)) == "(Z/2)^5"


def test_stability_table_small():
    rows = stability_h1_table(builtin_group("Z2"), range(1, 5))
    assert [r["H1"] for r in rows] == ["0", "(Z/2)^2", "(Z/2)^2", "(Z/2)^2"]
    assert rows[0]["flag"] == "mono"
    assert all(r["iso"] for r in rows[1:3])
    assert "map_to" not in rows[-1]


def test_stability_table_truncates():
    rows = stability_h1_table(builtin_group("Z2"), [1, 2, 9], max_n=6)
    assert rows[-1] == {"group": "Z2", "n": 9, "truncated": True}
    big = stability_h1_table(builtin_group("Z8"), [1])
    assert big[0]["truncated"]


def test_inclusion_map_rewrites_nonadjacent_transpositions():
    small = sigma_aut_presentation(family("Z2", "Z2", labels=[1, 3]))
    big = sigma_aut_presentation(family("Z2", "Z2", "Z2"))
    m = inclusion_map(small, big)
    assert m.flag == "iso"


def test_subfamily_instance():
    fam = GroupFamily([1, 2, 3, 4, 5, 6], [builtin_group("Z2")] * 5 + [builtin_group("Z3")])
    r = subfamily_instance(fam, [1, 2, 3, 4, 6])
    assert all(r["hypotheses"].values())
    assert r["H1_small"] == r["H1_big"] == "(Z/2)^4"
    assert r["iso"]


def test_subfamily_hypothesis_detection():
    fam = family("Z2", "Z2", "Z3")
    r = subfamily_instance(fam, [1, 2])
    assert not r["hypotheses"]["orbits_surjective"]

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frstab.freeprod import (
    GroupFamily,
    StructuralError,
    SymmetricAutomorphism,
    WhiteheadData,
    apply_automorphism,
    automorphisms_agree,
    compose,
    compose_all,
    factor_automorphism,
    is_supported_by,
    normalize,
    permutation_automorphism,
    power,
    whitehead_automorphism,
    whitehead_generator,
    word_inv,
    word_mul,
)
from frstab.groups import automorphism_group, builtin_group
from frstab.trees import minimal_tree, parse_tree


def fam_of(*names):
    return GroupFamily.of([builtin_group(n) for n in names])


def test_normal_form():
    F = fam_of("Z3", "Z2")
    assert normalize([(1, 1), (1, 2), (2, 1), (2, 0), (2, 1)], F) == ()
    assert normalize([(1, 1), (1, 1), (2, 1)], F) == ((1, 2), (2, 1))
    w = ((1, 1), (2, 1), (1, 2))
    assert word_mul(w, word_inv(w, F), F) == ()
    with pytest.raises(StructuralError):
        normalize([(1, 3)], F)
    with pytest.raises(StructuralError):
        normalize([(7, 1)], F)


def test_partial_conjugation_action():
    F = fam_of("S3", "Z2", "Z3")
    a = whitehead_generator(1, 2, 1, F)
    assert apply_automorphism(a, ((2, 1),), F) == ((1, 1), (2, 1), (1, F[1].inv[1]))
    assert apply_automorphism(a, ((3, 1),), F) == ((3, 1),)
    assert apply_automorphism(a, ((1, 2),), F) == ((1, 2),)
    with pytest.raises(StructuralError):
        whitehead_generator(1, 1, 1, F)
    assert whitehead_generator(1, 2, 0, F).is_identity


def random_auto(rng, F):
    gens = []
    for _ in range(rng.randint(0, 5)):
        kind = rng.random()
        if kind < 0.6:
            i, j = rng.sample(F.labels, 2)
            gens.append(whitehead_generator(i, j, rng.randrange(F[i].order), F))
        elif kind < 0.8:
            e = rng.choice(F.labels)
            gens.append(factor_automorphism(e, rng.choice(automorphism_group(F[e])), F))
        else:
            gens.append(permutation_automorphism({1: 2, 2: 1}, {}, F))
    return compose_all(gens, F)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_group_laws_by_action(seed):
    rng = random.Random(seed)
    F = fam_of("Z3", "Z3", "S3")
    a, b, c = (random_auto(rng, F) for _ in range(3))
    ident = SymmetricAutomorphism.identity(F)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, a.inverse()) == ident == compose(a.inverse(), a)
    for w in F.letters():
        assert apply_automorphism(compose(a, b), w, F) == apply_automorphism(a, apply_automorphism(b, w, F), F)
    # canonical data: equal keys exactly when the actions agree
    assert (a == b) == automorphisms_agree(a, b)


def test_inner_automorphism_of_target_absorbed():
    # conjugating G_2 by one of its own elements is recorded as an isomorphism
    F = fam_of("Z2", "S3")
    raw = SymmetricAutomorphism(F, conj={2: ((2, 1),)})
    inner = factor_automorphism(2, F[2].inner(1), F)
    assert raw == inner
    assert raw.conj[2] == ()


def test_raw_data_has_no_inverse():
    F = fam_of("Z2", "Z2")
    raw = SymmetricAutomorphism(F, conj={2: ((1, 1),)})
    with pytest.raises(StructuralError):
        raw.inverse()
    with pytest.raises(StructuralError):
        SymmetricAutomorphism(F, perm={1: 1, 2: 1})
    with pytest.raises(StructuralError):
        SymmetricAutomorphism(F, conj={1: ((1, 1), (1, 1))})


def test_permutations_need_isomorphic_factors():
    F = fam_of("Z2", "Z3")
    with pytest.raises(StructuralError):
        permutation_automorphism({1: 2, 2: 1}, {}, F)
    G = fam_of("Z3", "Z3")
    s = permutation_automorphism({1: 2, 2: 1}, {}, G)
    assert power(s, 2).is_identity and not s.pure()


def test_whitehead_automorphism_is_product_of_generators():
    F = fam_of("Z3", "Z2", "Z3")
    w = WhiteheadData.make(1, {2: 1, 3: 2}, F)
    prod_ = compose(whitehead_generator(1, 2, 1, F), whitehead_generator(1, 3, 2, F))
    assert whitehead_automorphism(w, F) == prod_
    with pytest.raises(StructuralError):
        WhiteheadData.make(1, {2: 1}, F)


def test_support():
    F = fam_of("Z3", "Z3", "Z3")
    N = minimal_tree(F.labels)
    assert is_supported_by(WhiteheadData.make(1, {2: 0, 3: 0}, F), N, F)
    assert not is_supported_by(WhiteheadData.make(1, {2: 1, 3: 0}, F), N, F)
    A = parse_tree("(*(m(1(m(2)(3)))))")  # 2 and 3 in one branch below 1
    assert is_supported_by(WhiteheadData.make(1, {2: 1, 3: 1}, F), A, F)
    assert not is_supported_by(WhiteheadData.make(1, {2: 1, 3: 2}, F), A, F)
    B = parse_tree("(*(m(1(m(2))(m(3)))))")  # separate branches
    assert is_supported_by(WhiteheadData.make(1, {2: 1, 3: 2}, F), B, F)

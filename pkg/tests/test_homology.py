import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frstab.groups import builtin_group, direct_product
from frstab.homology.abelian import (
    FgAbGroup,
    Presented,
    group_from_relations,
    image_lattice,
    kernel_lattice,
    lattice_contains,
    lattice_intersection,
    lattice_sum,
    quotient_group,
    row_basis,
)
from frstab.homology.bar import BoundExceeded, bar_complex, group_homology, homology_table, kunneth_H
from frstab.homology.chain import ChainComplexZ, ComplexError, ConstantModule, FinitePoset, order_complex, poset_homology
from frstab.homology.matrix import IntMatrix, det, matrix_from_json
from frstab.homology.presentation import IncompatibleMapError, Presentation, abelianization, h1_induced_map

from helpers import random_matrix


def Z(n=0, *tors):
    return FgAbGroup.from_divisors(list(tors), n)


# --- abelian groups -----------------------------------------------------------------


def test_normal_form_and_strings():
    g = FgAbGroup.from_divisors([2, 3, 4, 0])
    assert g == FgAbGroup(1, (2, 12))
    assert str(g) == "Z + Z/2 + Z/12"
    assert g.elementary_divisors() == [2, 3, 4]
    assert str(FgAbGroup()) == "0" and FgAbGroup().is_trivial
    with pytest.raises(ValueError):
        FgAbGroup(0, (4, 2))


def test_tensor_and_tor():
    a, b = Z(1, 4), Z(0, 6)
    assert a.tensor(b) == Z(0, 2, 6)
    assert a.tor(b) == Z(0, 2)
    assert Z(2).tensor(Z(3)) == Z(6)


def test_group_from_relations():
    assert group_from_relations(IntMatrix([[2, 0, 0], [0, 3, 0]], 3)) == Z(1, 6)
    assert group_from_relations(IntMatrix([], 2)) == Z(2)


def test_lattice_operations():
    a = IntMatrix([[2, 0], [0, 3]], 2)
    b = IntMatrix([[3, 0], [0, 2]], 2)
    inter = lattice_intersection(a, b)
    assert lattice_contains(inter, IntMatrix([[6, 0], [0, 6]], 2))
    assert not lattice_contains(inter, IntMatrix([[2, 0]], 2))
    assert quotient_group(IntMatrix.identity(2), inter) == Z(0, 6, 6)
    assert quotient_group(lattice_sum(a, b), IntMatrix.identity(2)) == Z()


def test_kernel_and_image_modulo_relations():
    # Z/4 --x2--> Z/4: kernel and image both 2Z/4
    v = Presented(1, IntMatrix([[4]], 1))
    m = IntMatrix([[2]], 1)
    ker = kernel_lattice(v, v, m)
    img = image_lattice(v, v, m)
    assert quotient_group(ker, row_basis(v.relations)) == Z(0, 2)
    assert quotient_group(img, row_basis(v.relations)) == Z(0, 2)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_quotient_of_sublattice_order(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, 3, 3, bound=5, density=1.0)
    d = abs(det(m))
    if d:
        assert quotient_group(IntMatrix.identity(3), m).order == d


def test_matrix_json_roundtrip():
    m = IntMatrix([[1, -2], [3, 4]], 2)
    assert matrix_from_json(m.to_json()) == m


# --- chain complexes and posets -------------------------------------------------------


def test_chain_complex_checks_d_squared():
    d1 = IntMatrix([[1]], 1)
    d2 = IntMatrix([[1]], 1)
    with pytest.raises(ComplexError):
        ChainComplexZ([1, 1, 1], {1: d1, 2: d2})


def test_circle_homology():
    # boundary of a triangle as a poset: 3 vertices below 3 edges
    covers = [("a", "ab"), ("b", "ab"), ("b", "bc"), ("c", "bc"), ("c", "ca"), ("a", "ca")]
    P = FinitePoset(["a", "b", "c", "ab", "bc", "ca"], covers)
    assert order_complex(P).homologies(2) == [Z(1), Z(1), Z()]
    assert poset_homology(P, ConstantModule(), 2) == [Z(1), Z(1), Z()]


def test_cone_is_acyclic():
    P = FinitePoset(["a", "b", "top"], [("a", "top"), ("b", "top")])
    assert order_complex(P).homologies() == [Z(1), Z()]


# --- group homology -------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cyclic_group_homology(n):
    G = builtin_group(f"Z{n}")
    assert homology_table(G, 3) == [Z(1), Z(0, n), Z(), Z(0, n)]


def test_known_nonabelian_homology():
    S3 = builtin_group("S3")
    assert homology_table(S3, 3) == [Z(1), Z(0, 2), Z(), Z(0, 6)]
    Q8 = builtin_group("Q8")
    assert group_homology(Q8, 1) == Z(0, 2, 2)
    assert group_homology(Q8, 2) == Z()


def test_kunneth_against_bar_complex():
    Z2 = builtin_group("Z2")
    V = direct_product(Z2, Z2)
    t = homology_table(Z2, 2)
    assert kunneth_H([t, t], 2) == group_homology(V, 2) == Z(0, 2)
    assert kunneth_H([t, t], 1) == group_homology(V, 1) == Z(0, 2, 2)


def test_bar_complex_is_a_complex():
    C = bar_complex(builtin_group("S3"), 3)
    for n in (2, 3):
        assert (C.diffs[n] @ C.diffs[n - 1]).is_zero()


def test_bar_bounds():
    with pytest.raises(BoundExceeded):
        group_homology(builtin_group("Z9"), 1)
    with pytest.raises(BoundExceeded):
        group_homology(builtin_group("Z2"), 4)


# --- presentations ----------------------------------------------------------------


def test_abelianization_of_presentations():
    P = Presentation(["a", "b"], [[("a", 2)], [("a", 1), ("b", 1), ("a", -1), ("b", -1)]])
    assert abelianization(P) == Z(1, 2)
    assert abelianization(Presentation(["x"], [["x", "x", "x"]])) == Z(0, 3)


def test_induced_map_flags():
    src = Presentation(["a"], [[("a", 2)]])
    dst = Presentation(["x", "y"], [[("x", 2)], [("y", 3)]])
    m = h1_induced_map(src, dst, {"a": [("x", 1)]})
    assert m.flag == "mono" and not m.is_iso
    back = h1_induced_map(dst, src, {"x": [("a", 1)], "y": []})
    assert back.flag == "epi"
    with pytest.raises(IncompatibleMapError):
        h1_induced_map(dst, src, {"x": [("a", 1)], "y": [("a", 1)]})

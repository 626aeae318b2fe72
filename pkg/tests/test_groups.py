import pytest

from frstab.groups import (
    FiniteGroup,
    GroupError,
    abelianization_of,
    automorphism_group,
    builtin_group,
    compose_tables,
    find_isomorphism,
    format_group_table,
    invert_table,
    parse_group_table,
    resolve_group,
)
from frstab.homology.abelian import FgAbGroup


@pytest.mark.parametrize("name,order,abelian", [
    ("Z1", 1, True), ("Z/4", 4, True), ("S3", 6, False), ("D4", 8, False),
    ("Q8", 8, False), ("Z2xZ2", 4, True), ("Z2xS3", 12, False),
])
def test_builtins_are_groups(name, order, abelian):
    G = builtin_group(name)
    FiniteGroup(G.mult)  # full validation
    assert G.order == order and G.is_abelian == abelian


@pytest.mark.parametrize("bad", ["Z0", "S6", "D2", "Q9", "foo"])
def test_bad_names(bad):
    with pytest.raises(GroupError):
        builtin_group(bad)


def test_validation_rejects_non_groups():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[1, 0], [0, 1]])
    # a Latin square with identity that is not associative
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        FiniteGroup(loop)


@pytest.mark.parametrize("name,count", [("Z2", 1), ("Z3", 2), ("Z4", 2), ("Z5", 4), ("Z6", 2), ("Z2xZ2", 6), ("S3", 6), ("D4", 8), ("Q8", 24)])
def test_automorphism_counts(name, count):
    G = builtin_group(name)
    auts = automorphism_group(G)
    assert len(auts) == count
    assert auts[0] == tuple(range(G.order))
    assert len(set(auts)) == count and all(G.is_isomorphism(a) for a in auts)
    # closed under composition and inverses
    s = set(auts)
    assert all(compose_tables(a, b) in s for a in auts for b in auts)
    assert all(invert_table(a) in s for a in auts)


def test_automorphism_bound():
    with pytest.raises(GroupError):
        automorphism_group(builtin_group("Z2xS3"), bound=8)


@pytest.mark.parametrize("name,ab", [
    ("S3", FgAbGroup(0, (2,))), ("Q8", FgAbGroup(0, (2, 2))), ("D4", FgAbGroup(0, (2, 2))),
    ("Z6", FgAbGroup(0, (6,))), ("Z2xZ2", FgAbGroup(0, (2, 2))), ("Z1", FgAbGroup()),
])
def test_abelianization(name, ab):
    assert abelianization_of(builtin_group(name)) == ab


def test_isomorphism_search():
    Z6 = builtin_group("Z6")
    Z2xZ3 = builtin_group("Z2xZ3")
    t = find_isomorphism(Z2xZ3, Z6)
    assert t is not None and Z2xZ3.is_isomorphism(t, Z6)
    assert find_isomorphism(builtin_group("S3"), Z6) is None


def test_table_file_roundtrip(tmp_path):
    G = builtin_group("S3")
    p = tmp_path / "s3.tbl"
    p.write_text("# symmetric group\n" + format_group_table(G))
    H = resolve_group(str(p))
    assert H.mult == G.mult and H.name == "s3"
    with pytest.raises(GroupError):
        resolve_group(str(tmp_path / "missing.tbl"))
    with pytest.raises(GroupError):
        parse_group_table("order 2\n0 1\n")

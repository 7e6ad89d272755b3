import pytest

from conftest import SMALL, group
from isocert.catalog import cyclic, dihedral, from_catalog, parse_group_text
from isocert.errors import ParseError, ScaleLimitError
from isocert.perm import Permutation
from isocert.permgroup import (
    PermutationGroup,
    all_subgroups,
    build_group,
    center,
    centralizer,
    conjugacy_classes,
    find_isomorphism,
    invariant_profile,
    is_conjugate,
    is_isomorphic,
    normalizer,
    section_group,
    subgroup_conjugacy_class,
    subgroups_up_to_conjugacy,
    verify_isomorphism,
)

import oracles


def P(text, n):
    return Permutation.parse(text, n)


def test_build_group_examples():
    assert build_group(1, []).order() == 1
    assert build_group(4, [P("(1,2,3)", 4), P("(1,2)(3,4)", 4)]).order() == 12
    assert group("Qd3").order() == 216 == 3 ** 3 * (3 ** 2 - 1)


@pytest.mark.parametrize("name", SMALL + ["A5", "Qd3", "Cn:64", "D2n:24"])
def test_chain_order_matches_closure(name):
    G = group(name)
    assert G.order() == len(oracles.closure(G.generators, G.degree))
    assert sorted(g.images for g in G.elements) == sorted(oracles.closure(G.generators, G.degree))


def test_identity_is_element_zero(A4):
    assert A4.elements[0].is_identity()
    assert A4.elements == sorted(A4.elements)


def test_class_examples(A4, D8):
    assert [s for _, s in conjugacy_classes(cyclic(3))] == [1, 1, 1]
    assert sorted(s for _, s in conjugacy_classes(A4)) == [1, 3, 4, 4]
    assert sorted(s for _, s in conjugacy_classes(D8)) == [1, 1, 2, 2, 2]


@pytest.mark.parametrize("name", SMALL + ["A5"])
def test_classes_match_brute_force(name):
    G = group(name)
    sizes = [s for _, s in G.conjugacy_classes()]
    assert sorted(sizes) == oracles.conjugacy_class_sizes(G)
    assert sum(sizes) == G.order()
    assert all(G.order() % s == 0 for s in sizes)
    for cls in G.classes:
        for s in G.generator_indices():
            assert {G.conj_index(s, x) for x in cls} == set(cls)


def test_is_conjugate(A4, S4):
    x = P("(1,2)(3,4)", 4)
    assert is_conjugate(A4, x, x).is_identity()
    g = is_conjugate(A4, x, P("(1,3)(2,4)", 4))
    assert g is not None and g * x * ~g == P("(1,3)(2,4)", 4)
    assert is_conjugate(S4, P("(1,2)", 4), P("(1,2)(3,4)", 4)) is None


def test_normalizer_centralizer(A4, S4):
    assert normalizer(A4, A4.trivial()).order() == 12
    V = A4.subgroup([P("(1,2)(3,4)", 4), P("(1,3)(2,4)", 4)])
    assert normalizer(A4, V).order() == 12
    assert centralizer(S4, S4.subgroup([P("(1,2)", 4)])).order() == 4


@pytest.mark.parametrize("name", ["A4", "S4", "D2n:4", "SL2_3", "Q8"])
def test_centralizer_inside_normalizer(name):
    G = group(name)
    Z = center(G)
    for H in subgroups_up_to_conjugacy(G):
        C = centralizer(G, H)
        N = normalizer(G, H)
        assert C.elements <= N.elements
        assert Z.elements <= C.elements


def test_subgroup_class_examples(A4, D8):
    assert len(subgroups_up_to_conjugacy(cyclic(5))) == 2
    assert [H.order() for H in subgroups_up_to_conjugacy(A4)] == [1, 2, 3, 4, 12]
    # D8 has 10 subgroups falling into 8 conjugacy classes
    assert len(subgroups_up_to_conjugacy(D8)) == 8
    assert len(all_subgroups(D8)) == 10


def test_a5_subgroup_classes():
    # the perfect group A5 is only reachable by joins, not by normalizing extensions
    orders = sorted(H.order() for H in subgroups_up_to_conjugacy(group("A5")))
    assert orders == [1, 2, 3, 4, 5, 6, 10, 12, 60]


@pytest.mark.parametrize("name", ["A4", "S4", "D2n:4", "Q8", "D2n:6", "Cn:12"])
def test_subgroup_count_matches_oracle(name):
    G = group(name)
    mine = {frozenset(G.elements[i].images for i in H.elements) for H in all_subgroups(G)}
    assert mine == oracles.all_subgroups(G)


def test_section_examples(A4, S4):
    S = section_group(S4, S4.trivial())
    assert is_isomorphic(S, S4)
    V = S4.subgroup([P("(1,2)(3,4)", 4), P("(1,3)(2,4)", 4)])
    Q = section_group(S4, V)
    assert Q.order() == 6 and not Q.is_abelian()
    C3 = A4.subgroup([P("(1,2,3)", 4)])
    assert section_group(A4, C3).order() == 1


def test_isomorphism_examples():
    D8a = dihedral(4)
    # D8 on 8 points: symmetries of the square acting on ordered pairs of vertices
    D8b = PermutationGroup(8, [P("(1,2,3,4)(5,6,7,8)", 8), P("(1,5)(2,8)(3,7)(4,6)", 8)])
    assert D8b.order() == 8
    iso = find_isomorphism(D8a, D8b)
    assert iso is not None and verify_isomorphism(D8a, D8b, iso)
    V4 = PermutationGroup(4, [P("(1,2)(3,4)", 4), P("(1,3)(2,4)", 4)])
    assert not is_isomorphic(cyclic(4), V4)
    assert not is_isomorphic(group("Q8"), D8a)
    assert is_isomorphic(group("A4"), group("A4"))


def test_isomorphism_rejects_bad_witness():
    D8a = dihedral(4)
    r, s = D8a.generators
    assert not verify_isomorphism(D8a, D8a, {r: s, s: r})


@pytest.mark.parametrize("a,b", [("Q8", "D2n:4"), ("Cn:6", "D2n:3"), ("A4", "D2n:6"), ("SL2_3", "S4"), ("S4", "S4")])
def test_isomorphism_symmetric_and_profile(a, b):
    G, H = group(a), group(b)
    assert is_isomorphic(G, H) == is_isomorphic(H, G)
    if is_isomorphic(G, H):
        assert invariant_profile(G) == invariant_profile(H)


def test_conjugacy_class_of_subgroup(S4):
    C2 = S4.subgroup([P("(1,2)", 4)])
    assert len(subgroup_conjugacy_class(S4, C2.elements)) == 6


def test_scale_limit():
    with pytest.raises(ScaleLimitError, match="scale limit"):
        subgroups_up_to_conjugacy(group("A5"), max_order=10)


def test_group_file_parsing():
    G = parse_group_text("# A4\ndegree: 4\ngen: (1,2,3)\ngen: (1,2)(3,4)\n")
    assert G.order() == 12
    assert parse_group_text("name: S4").order() == 24
    for bad in ["gen: (1,2)", "degree: x", "degree: 3\ngen: (1,4)", "degree: 3\nfoo: 1", "name: nope"]:
        with pytest.raises(ParseError):
            parse_group_text(bad)
    with pytest.raises(ParseError):
        from_catalog("Cn:x")

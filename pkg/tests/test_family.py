from collections import Counter

import pytest

from conftest import group
from isocert.catalog import dihedral
from isocert.chartab import character_table, restrict, trivial_character
from isocert.effective import EffectiveSearchSpec, search_p_effective
from isocert.family import (
    SylowFamily,
    assemble_family,
    compatible_family,
    subgroup_character,
    verify_compatibility,
)
from isocert.permgroup import all_subgroups, prime_factors
from isocert.pstructure import sylow_subgroup


def effective_family(G):
    return {p: search_p_effective(EffectiveSearchSpec(G, p)) for p in prime_factors(G.order())}


def ints(chi):
    return tuple(int(v.to_fraction()) for v in chi.values)


def d2q_family(q):
    G = dihedral(q)
    P2, Pq = sylow_subgroup(G, 2), sylow_subgroup(G, q)
    V2 = trivial_character(P2.as_group()).scale(2)
    irr = character_table(Pq.as_group()).irreducibles
    Vq = irr[1] + irr[-1]
    return G, {2: (P2, V2), q: (Pq, Vq)}


@pytest.fixture
def a4_family(A4):
    return assemble_family(A4, effective_family(A4))


def test_assemble_examples(A4):
    C6 = group("Cn:6")
    fam = assemble_family(C6, effective_family(C6))
    assert fam.n == 1
    eff = effective_family(A4)
    fam = assemble_family(A4, eff)
    assert fam.n == 3
    assert fam.character(3) == eff[3].character.scale(3)
    assert fam.character(2) == eff[2].character
    for q in (3, 5):
        G, raw = d2q_family(q)
        fam = assemble_family(G, raw)
        assert fam.n == 2 and fam.character(2) == raw[2][1]


def test_assemble_errors(A4, S4):
    eff = effective_family(A4)
    with pytest.raises(ValueError, match=r"\[3\]"):
        assemble_family(A4, {2: eff[2]})
    P = sylow_subgroup(S4, 2)
    chi2 = next(c for c in character_table(P.as_group()).irreducibles if c.degree == 2)
    P3 = sylow_subgroup(S4, 3)
    with pytest.raises(ValueError, match="fusion"):
        assemble_family(S4, {2: (P, chi2), 3: (P3, trivial_character(P3.as_group()).scale(2))})


def test_subgroup_character_examples(A4, a4_family):
    chi, _ = subgroup_character(a4_family, A4.trivial())
    assert ints(chi) == (3,)
    C2 = next(H for H in all_subgroups(A4) if H.order() == 2)
    chi, _ = subgroup_character(a4_family, C2)
    assert ints(chi) == (3, -1)
    G3 = a4_family.sylow(3)
    V3 = a4_family.character(3)
    for H in all_subgroups(A4):
        if H.order() == 3 and H != G3:
            chi, g = subgroup_character(a4_family, H)
            assert Counter(chi.values) == Counter(V3.values)
            assert not g.is_identity()
    with pytest.raises(ValueError):
        subgroup_character(a4_family, A4.subgroup([A4.generators[0], A4.generators[1]]))


def test_compatibility_examples(A4, a4_family):
    assert verify_compatibility(compatible_family(a4_family)) == (True, None)
    triv = {p: (sylow_subgroup(A4, p), trivial_character(sylow_subgroup(A4, p).as_group())) for p in (2, 3)}
    assert verify_compatibility(compatible_family(assemble_family(A4, triv)))[0]
    for q in (3, 5):
        G, raw = d2q_family(q)
        assert verify_compatibility(compatible_family(assemble_family(G, raw)))[0]


def test_corrupted_family_gives_counterexample(A4, a4_family):
    P = a4_family.sylow(2)
    irr = character_table(P.as_group()).irreducibles
    bad = irr[0] + irr[1] + irr[1]          # dimension 3 but not constant on the fused involutions
    entries = dict(a4_family.entries)
    entries[2] = (P, bad)
    ok, failure = verify_compatibility(compatible_family(SylowFamily(A4, entries, 3)))
    assert not ok
    assert failure is not None and str(failure)


@pytest.mark.parametrize("name", ["A4", "S4", "SL2_3"])
def test_scaling_invariance(name):
    G = group(name)
    fam = assemble_family(G, effective_family(G))
    base = compatible_family(fam)
    for k in (2, 3):
        scaled = compatible_family(fam.scaled(k))
        for a, b in zip(base.assignments, scaled.assignments):
            assert b.character == a.character.scale(k)


@pytest.mark.parametrize("name", ["A4", "S4", "SL2_3", "D2n:6"])
def test_restriction_coherence_and_genuine(name):
    G = group(name)
    fam = assemble_family(G, effective_family(G))
    subs = [H for H in all_subgroups(G) if len(prime_factors(H.order())) == 1]
    chars = {H.elements: subgroup_character(fam, H)[0] for H in subs}
    for H in subs:
        chi = chars[H.elements]
        assert chi.degree == fam.n
        mult = character_table(H.as_group()).decompose(chi)
        assert all(m.denominator == 1 and m >= 0 for m in mult)
        for K in subs:
            if H.elements < K.elements:
                assert restrict(chars[K.elements], H) == chi

"""G-invariant families of Sylow characters and their compatible extensions.

A family assigns to every prime p a fusion-stable character of a fixed Sylow
subgroup ``G_p``, all of one dimension n.  For a p-subgroup H the character
``V_H(x) = chi_p(g x g^-1)`` is transported along any g with ``g H g^-1 <= G_p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .chartab import ClassFunction
from .effective import EffectiveCharacter, fusion_partition, is_fusion_stable
from .perm import Permutation
from .permgroup import (
    PermutationGroup,
    SubgroupHandle,
    factorize,
    prime_factors,
    subgroup_conjugacy_class,
    subgroups_up_to_conjugacy,
)


@dataclass
class SylowFamily:
    group: PermutationGroup
    entries: dict[int, tuple[SubgroupHandle, ClassFunction]]
    n: int

    def character(self, p: int) -> ClassFunction:
        return self.entries[p][1]

    def sylow(self, p: int) -> SubgroupHandle:
        return self.entries[p][0]

    def scaled(self, k: int) -> SylowFamily:
        return SylowFamily(self.group, {p: (P, chi.scale(k)) for p, (P, chi) in self.entries.items()}, self.n * k)


FamilyInput = Union[EffectiveCharacter, tuple[SubgroupHandle, ClassFunction]]


def assemble_family(G: PermutationGroup, per_prime: Mapping[int, FamilyInput]) -> SylowFamily:
    """Scale every entry to the lcm of the dimensions (never pad with trivial summands)."""
    primes = [p for p, _ in factorize(G.order())]
    missing = [p for p in primes if p not in per_prime]
    if missing:
        raise ValueError(f"no Sylow character supplied for primes {missing}")
    raw = {}
    for p in primes:
        item = per_prime[p]
        if isinstance(item, EffectiveCharacter):
            raw[p] = (item.sylow, item.character)
        else:
            raw[p] = item
    dims = {p: chi.degree for p, (_, chi) in raw.items()}
    if any(d <= 0 for d in dims.values()):
        raise ValueError("Sylow characters must have positive dimension")
    n = math.lcm(1, *dims.values())
    entries = {}
    for p, (P, chi) in raw.items():
        fp = fusion_partition(G, p, P)
        if not is_fusion_stable(chi, fp):
            raise ValueError(f"Sylow character at p={p} does not respect fusion")
        scaled = chi.scale(n // dims[p])
        assert is_fusion_stable(scaled, fp)
        entries[p] = (P, scaled)
    return SylowFamily(G, entries, n)


def _prime_of(order: int) -> Optional[int]:
    ps = prime_factors(order)
    if len(ps) > 1:
        raise ValueError(f"subgroup of order {order} is not of prime-power order")
    return ps[0] if ps else None


def transport(fam: SylowFamily, H: SubgroupHandle, g: int) -> ClassFunction:
    """``x -> chi_p(g x g^-1)`` as a class function on H (requires g H g^-1 <= G_p)."""
    G = fam.group
    Hg = H.as_group()
    p = _prime_of(H.order())
    vals = []
    for rep, _ in Hg.conjugacy_classes():
        if p is None:
            vals.append(next(iter(fam.entries.values()))[1].values[0])
            continue
        P, chi = fam.entries[p]
        y = G.conj_index(g, G.index(rep))
        if y not in P.elements:
            raise ValueError("conjugator does not move H into the Sylow subgroup")
        vals.append(chi(G.elements[y]))
    return ClassFunction(Hg, tuple(vals))


def conjugators_into_sylow(fam: SylowFamily, H: SubgroupHandle) -> list[int]:
    G = fam.group
    p = _prime_of(H.order())
    if p is None:
        return list(range(G.order()))
    P = fam.entries[p][0]
    hg = [G.index(h) for h in H.generators]
    return [g for g in range(G.order()) if all(G.conj_index(g, h) in P.elements for h in hg)]


def subgroup_character(fam: SylowFamily, H: SubgroupHandle) -> tuple[ClassFunction, Permutation]:
    """``V_H`` via the first canonical conjugator g with ``g H g^-1 <= G_p``."""
    if H.order() == 1:
        G = fam.group
        n = next(iter(fam.entries.values()))[1].values[0]
        return ClassFunction(H.as_group(), (n,)), G.identity()
    g = conjugators_into_sylow(fam, H)[0]
    return transport(fam, H, g), fam.group.elements[g]


@dataclass
class FamilyAssignment:
    subgroup: SubgroupHandle
    prime: Optional[int]
    character: ClassFunction
    conjugator: Permutation


@dataclass
class CompatibleFamily:
    base: SylowFamily
    assignments: list[FamilyAssignment]

    @property
    def group(self) -> PermutationGroup:
        return self.base.group

    @property
    def n(self) -> int:
        return self.base.n


def prime_power_subgroups(G: PermutationGroup) -> list[SubgroupHandle]:
    return [H for H in subgroups_up_to_conjugacy(G) if len(prime_factors(H.order())) <= 1]


def compatible_family(fam: SylowFamily) -> CompatibleFamily:
    out = []
    for H in prime_power_subgroups(fam.group):
        chi, g = subgroup_character(fam, H)
        out.append(FamilyAssignment(H, _prime_of(H.order()), chi, g))
    return CompatibleFamily(fam, out)


@dataclass
class CompatibilityFailure:
    subgroup: SubgroupHandle
    other: SubgroupHandle
    conjugator: Permutation
    element: Permutation
    expected: object
    got: object

    def __str__(self) -> str:
        return (f"pulling back V_H along c^g with g={self.conjugator} gives {self.got} at "
                f"{self.element}, but V_K has {self.expected}")


def verify_compatibility(cf: CompatibleFamily) -> tuple[bool, Optional[CompatibilityFailure]]:
    """Exhaustive check of conjugator independence and of ``(c^g)^* V_H == V_K``
    for every conjugate ``K = g^-1 H g`` of every stored representative H."""
    fam = cf.base
    G = fam.group
    for a in cf.assignments:
        H = a.subgroup
        if H.order() == 1:
            continue
        Hg = H.as_group()
        reps = [rep for rep, _ in Hg.conjugacy_classes()]
        for g in conjugators_into_sylow(fam, H):
            alt = transport(fam, H, g)
            for rep, v, w in zip(reps, a.character.values, alt.values):
                if v != w:
                    return False, CompatibilityFailure(H, H, G.elements[g], rep, v, w)
        direct: dict[frozenset, ClassFunction] = {}
        for g in range(G.order()):
            K = H.conjugate(G.inv[g])
            if K.elements not in direct:
                direct[K.elements] = subgroup_character(fam, K)[0]
            VK = direct[K.elements]
            for rep, _ in VK.group.conjugacy_classes():
                x = G.index(rep)
                pulled = a.character(G.elements[G.conj_index(g, x)])
                if pulled != VK(rep):
                    return False, CompatibilityFailure(H, K, G.elements[g], rep, VK(rep), pulled)
    return True, None

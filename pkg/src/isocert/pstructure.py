"""Sylow subgroups, elementary abelian subgroups, rank, and Qd(p)-involvement."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .catalog import affine_qd
from .errors import ParseError, ScaleLimitError
from .perm import Permutation
from .permgroup import (
    DEFAULT_MAX_ORDER,
    PermutationGroup,
    SubgroupHandle,
    factorize,
    find_isomorphism,
    is_prime,
    normalizer,
    section_group,
    subgroup_conjugacy_class,
    subgroups_up_to_conjugacy,
)


@dataclass(frozen=True)
class PrimeDecomposition:
    primes: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, n: int) -> PrimeDecomposition:
        return cls(tuple(factorize(n)))

    def p_part(self, p: int) -> int:
        return p ** dict(self.primes).get(p, 0)


@dataclass
class RankProfile:
    per_prime: dict[int, int]
    witnesses: dict[int, SubgroupHandle]

    @property
    def rank(self) -> int:
        return max(self.per_prime.values(), default=0)


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def qd_order(p: int) -> int:
    return p ** 3 * (p * p - 1)


def sylow_subgroup(G: PermutationGroup, p: int) -> SubgroupHandle:
    """Grow a p-subgroup by the first canonical p-element normalizing it."""
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    target = p_part(G.order(), p)
    P = frozenset([0])
    orders = G.element_orders
    while len(P) < target:
        H = SubgroupHandle(G, P)
        N = normalizer(G, H).elements
        for g in range(G.order()):
            if g in N and g not in P and p_part(orders[g], p) == orders[g]:
                P = G.closure(set(P) | {g})
                break
        else:
            raise AssertionError("normalizer growth failed; Sylow theorem violated")
    return SubgroupHandle(G, P)


def _elementary_abelians_in(G: PermutationGroup, P: SubgroupHandle, p: int) -> list[frozenset[int]]:
    """All elementary abelian subgroups of the p-group ``P`` (not up to conjugacy)."""
    mul = G.mul
    order_p = [x for x in sorted(P.elements) if G.element_orders[x] == p]
    seen = {frozenset([0])}
    queue = [frozenset([0])]
    for E in queue:
        for x in order_p:
            if x in E or any(mul[x][e] != mul[e][x] for e in E):
                continue
            F = G.closure(set(E) | {x})
            if F not in seen:
                seen.add(F)
                queue.append(F)
    return sorted(seen, key=lambda E: (len(E), tuple(sorted(E))))


def _rank_of(order: int, p: int) -> int:
    r = 0
    while order > 1:
        order //= p
        r += 1
    return r


def elementary_abelians(G: PermutationGroup, p: int) -> list[tuple[SubgroupHandle, int]]:
    """Elementary abelian p-subgroups up to G-conjugacy, tagged with their rank."""
    P = sylow_subgroup(G, p)
    found: list[frozenset[int]] = []
    covered: set[frozenset[int]] = set()
    for E in _elementary_abelians_in(G, P, p):
        if E in covered:
            continue
        cls = subgroup_conjugacy_class(G, E)
        covered |= cls
        found.append(min(cls, key=lambda C: tuple(sorted(C))))
    found.sort(key=lambda E: (len(E), tuple(sorted(E))))
    return [(SubgroupHandle(G, E), _rank_of(len(E), p)) for E in found]


def rank_profile(G: PermutationGroup) -> RankProfile:
    per_prime = {}
    witnesses = {}
    for p, _ in factorize(G.order()):
        classes = elementary_abelians(G, p)
        r = max(rk for _, rk in classes)
        best = next(E for E, rk in classes if rk == r)
        per_prime[p] = r
        witnesses[p] = best
    return RankProfile(per_prime, witnesses)


def qd_group(p: int, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    if p < 3 or not is_prime(p):
        raise ParseError(f"Qd(p) needs an odd prime, got {p}")
    if qd_order(p) > max_order:
        raise ScaleLimitError(qd_order(p), max_order, what=f"Qd({p})")
    return affine_qd(p)


@dataclass
class InvolvementWitness:
    """Evidence that Qd(p) embeds in ``N_G(K)/K``."""

    p: int
    K: SubgroupHandle
    normalizer_order: int
    section: PermutationGroup
    embedded: list[Permutation]
    isomorphism: dict[Permutation, Permutation]


def _qd_subgroups_of(section: PermutationGroup, qd: PermutationGroup, max_order: int):
    target = qd.order()
    if section.order() == target:
        candidates = [section.whole()]
    else:
        candidates = [H for H in subgroups_up_to_conjugacy(section, max_order) if H.order() == target]
    for H in candidates:
        Hg = H.as_group() if H.order() != section.order() else section
        iso = find_isomorphism(qd, Hg, max_order)
        if iso is not None:
            return H, iso
    return None


def p_prime_involves_qd(G: PermutationGroup, p: int, max_order: int = DEFAULT_MAX_ORDER) -> Optional[InvolvementWitness]:
    """Search p'-subgroups K in ascending order for ``Qd(p) <= N_G(K)/K``."""
    if p == 2 or not is_prime(p):
        raise ParseError(f"p'-involvement of Qd(p) is defined for odd primes, got {p}")
    target = qd_order(p)
    if target > G.order():
        return None
    qd = qd_group(p, max_order)
    for K in subgroups_up_to_conjugacy(G, max_order):
        if math.gcd(K.order(), p) != 1:
            continue
        N = normalizer(G, K)
        if (N.order() // K.order()) % target:
            continue
        S = section_group(G, K)
        hit = _qd_subgroups_of(S, qd, max_order)
        if hit is not None:
            H, iso = hit
            return InvolvementWitness(p, K, N.order(), S, H.generators if H.order() != S.order() else list(S.generators), iso)
    return None


@dataclass
class QdPrimeReport:
    p: int
    status: str  # "pruned by order" | "not involved" | "involved"
    witness: Optional[InvolvementWitness] = None


def is_qd_free(G: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER) -> tuple[bool, dict[int, QdPrimeReport]]:
    report = {}
    for p, _ in factorize(G.order()):
        if p == 2:
            continue
        if qd_order(p) > G.order():
            report[p] = QdPrimeReport(p, "pruned by order")
            continue
        w = p_prime_involves_qd(G, p, max_order)
        report[p] = QdPrimeReport(p, "involved" if w else "not involved", w)
    return all(r.witness is None for r in report.values()), report

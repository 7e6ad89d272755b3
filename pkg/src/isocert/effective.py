"""Fusion in a Sylow subgroup and the search for p-effective characters.

A character of ``G_p`` is p-effective when it is constant on G-fusion blocks
of ``G_p``-classes and has no fixed vectors on any elementary abelian
subgroup of maximal p-rank.  Both conditions are linear in the multiplicity
vector over the irreducibles of ``G_p``, so the search is an exact
nonnegative integer feasibility problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chartab import (
    CharacterTable,
    ClassFunction,
    character_table,
    fixed_subspace_dim,
    inner_product,
    value_sum,
)
from .perm import Permutation
from .permgroup import PermutationGroup, SubgroupHandle, subgroup_conjugacy_class
from .pstructure import _elementary_abelians_in, _rank_of, sylow_subgroup


@dataclass
class FusionPartition:
    """Blocks of ``G_p``-classes (indices into ``sylow_group.classes``) fused in G."""

    group: PermutationGroup
    p: int
    sylow: SubgroupHandle
    sylow_group: PermutationGroup
    blocks: list[list[int]]
    witnesses: dict[tuple[int, int], Permutation] = field(default_factory=dict)

    def block_of(self, cls: int) -> int:
        return next(i for i, b in enumerate(self.blocks) if cls in b)


def fusion_partition(G: PermutationGroup, p: int, sylow: Optional[SubgroupHandle] = None) -> FusionPartition:
    P = sylow if sylow is not None else sylow_subgroup(G, p)
    Pg = P.as_group()
    reps = [G.index(rep) for rep, _ in Pg.conjugacy_classes()]
    blocks: list[list[int]] = []
    witnesses = {}
    for c, x in enumerate(reps):
        for block in blocks:
            head = block[0]
            g = None
            if G.class_of[reps[head]] == G.class_of[x]:
                g = next(g for g in range(G.order()) if G.conj_index(g, reps[head]) == x)
            if g is not None:
                block.append(c)
                witnesses[(head, c)] = G.elements[g]
                break
        else:
            blocks.append([c])
    return FusionPartition(G, p, P, Pg, blocks, witnesses)


def is_fusion_stable(chi: ClassFunction, fp: FusionPartition) -> bool:
    return all(all(chi.values[c] == chi.values[b[0]] for c in b) for b in fp.blocks)


def brute_force_fusion_check(chi: ClassFunction, G: PermutationGroup, P: SubgroupHandle) -> bool:
    """``chi(g x g^-1) == chi(x)`` for every g in G and x in P with g x g^-1 in P."""
    Pg = chi.group
    for x in P.elements:
        vx = chi(G.elements[x])
        for g in range(G.order()):
            y = G.conj_index(g, x)
            if y in P.elements and chi(G.elements[y]) != vx:
                return False
    return True


def maximal_rank_elementaries(G: PermutationGroup, P: SubgroupHandle, p: int) -> tuple[int, list[SubgroupHandle]]:
    """Rank of ``P`` and its elementary abelian subgroups of that rank up to P-conjugacy."""
    all_e = _elementary_abelians_in(G, P, p)
    rank = max(_rank_of(len(E), p) for E in all_e)
    Pg = P.as_group()
    covered: set[frozenset[int]] = set()
    reps = []
    for E in all_e:
        if _rank_of(len(E), p) != rank or E in covered:
            continue
        # orbit under conjugation by P
        orbit = {E}
        queue = [E]
        pgens = [G.index(g) for g in Pg.generators]
        for F in queue:
            for s in pgens:
                C = frozenset(G.conj_index(s, f) for f in F)
                if C not in orbit:
                    orbit.add(C)
                    queue.append(C)
        covered |= orbit
        reps.append(SubgroupHandle(G, min(orbit, key=lambda C: tuple(sorted(C)))))
    return rank, reps


@dataclass
class EffectiveSearchSpec:
    group: PermutationGroup
    p: int
    bound: Optional[int] = None
    sylow: Optional[SubgroupHandle] = None

    def __post_init__(self):
        if self.sylow is None:
            self.sylow = sylow_subgroup(self.group, self.p)
        if self.bound is None:
            self.bound = self.sylow.order()
        if self.bound < 1:
            raise ValueError("dimension bound must be at least 1")
        self._fusion = None
        self._maxrank = None
        self._table = None

    @property
    def fusion(self) -> FusionPartition:
        if self._fusion is None:
            self._fusion = fusion_partition(self.group, self.p, self.sylow)
        return self._fusion

    @property
    def target_rank(self) -> int:
        return self._elementaries()[0]

    @property
    def max_rank_subgroups(self) -> list[SubgroupHandle]:
        return self._elementaries()[1]

    def _elementaries(self):
        if self._maxrank is None:
            self._maxrank = maximal_rank_elementaries(self.group, self.sylow, self.p)
        return self._maxrank

    @property
    def table(self) -> CharacterTable:
        if self._table is None:
            self._table = character_table(self.fusion.sylow_group)
        return self._table


@dataclass
class EffectiveCharacter:
    p: int
    sylow: SubgroupHandle
    table: CharacterTable
    multiplicities: tuple[int, ...]
    character: ClassFunction

    @property
    def dimension(self) -> int:
        return self.character.degree

    def scaled(self, k: int) -> EffectiveCharacter:
        return EffectiveCharacter(
            self.p, self.sylow, self.table,
            tuple(k * m for m in self.multiplicities), self.character.scale(k),
        )


def is_p_effective(chi: ClassFunction, spec: EffectiveSearchSpec) -> tuple[bool, list[str]]:
    violations = []
    fp = spec.fusion
    for b in fp.blocks:
        vals = {chi.values[c] for c in b}
        if len(vals) > 1:
            violations.append(f"not constant on fusion block {b}")
    if not chi.group.order() == spec.sylow.order():
        raise ValueError("character is not defined on the Sylow subgroup being searched")
    for E in spec.max_rank_subgroups:
        d = fixed_subspace_dim(chi, E)
        if d:
            gens = ",".join(map(str, E.generators))
            violations.append(f"fixed subspace of dimension {d} on E=<{gens}>")
    return not violations, violations


def _integer_rows(val) -> list[int]:
    if not val.is_algebraic_integer():
        raise ArithmeticError("constraint coefficient is not an algebraic integer")
    return [int(c) for c in val.coeffs]


def constraint_matrix(spec: EffectiveSearchSpec) -> np.ndarray:
    """Integer matrix A with ``A @ m == 0`` iff the character with multiplicities m
    is fusion-stable and sums to zero over each maximal-rank E."""
    table = spec.table
    e = table.exponent
    Pg = spec.fusion.sylow_group
    irr = [chi.lift(e) for chi in table.irreducibles]
    cols = []
    for chi in irr:
        rows: list[int] = []
        for b in spec.fusion.blocks:
            for c in b[1:]:
                rows += _integer_rows(chi.values[c] - chi.values[b[0]])
        for E in spec.max_rank_subgroups:
            rows += _integer_rows(value_sum(chi, E).lift(e))
        cols.append(rows)
    A = np.array(cols, dtype=np.int64).T if cols and cols[0] else np.zeros((0, len(irr)), dtype=np.int64)
    # drop zero and repeated rows
    uniq = []
    seen = set()
    for row in A:
        key = tuple(row)
        if any(key) and key not in seen:
            seen.add(key)
            uniq.append(row)
    return np.array(uniq, dtype=np.int64).reshape(len(uniq), len(irr))


def _suffix_states(A: np.ndarray, degrees: list[int], bound: int) -> list[set]:
    """``states[j]`` = {(A @ m_suffix, dim)} over all suffix vectors m_j..m_{k-1}."""
    k = len(degrees)
    zero = tuple([0] * A.shape[0])
    states: list[set] = [set() for _ in range(k + 1)]
    states[k] = {(zero, 0)}
    for j in range(k - 1, -1, -1):
        col = [int(x) for x in A[:, j]]
        dj = degrees[j]
        out = set()
        for res, d in states[j + 1]:
            cur = res
            while d <= bound:
                out.add((cur, d))
                cur = tuple(a + b for a, b in zip(cur, col))
                d += dj
        states[j] = out
    return states


def minimal_solution(A: np.ndarray, degrees: list[int], bound: int) -> Optional[tuple[int, ...]]:
    """Minimal-dimension, then lexicographically minimal, nonzero m >= 0 with A m = 0.

    Iterative deepening on the dimension; within a dimension, coordinates are
    fixed left to right at the smallest value that still admits a completion,
    using the exhaustive table of reachable suffix states.
    """
    k = len(degrees)
    states = _suffix_states(A, degrees, bound)
    zero = tuple([0] * A.shape[0])
    for dim in range(1, bound + 1):
        if (zero, dim) not in states[0]:
            continue
        need = np.zeros(A.shape[0], dtype=np.int64)
        left = dim
        m: list[int] = []
        for j in range(k):
            for mj in range(left // degrees[j] + 1):
                res = tuple(int(x) for x in need - mj * A[:, j])
                if (res, left - mj * degrees[j]) in states[j + 1]:
                    m.append(mj)
                    need = need - mj * A[:, j]
                    left -= mj * degrees[j]
                    break
            else:
                raise AssertionError("reachable state lost during reconstruction")
        return tuple(m)
    return None


def search_p_effective(spec: EffectiveSearchSpec) -> Optional[EffectiveCharacter]:
    """Smallest p-effective character of ``G_p`` within the dimension bound.

    None means the bound was reached without a solution; it does not prove
    that no p-effective character exists.
    """
    table = spec.table
    A = constraint_matrix(spec)
    m = minimal_solution(A, table.degrees(), spec.bound)
    if m is None:
        return None
    chi = table.combine(m)
    ok, why = is_p_effective(chi, spec)
    assert ok, why
    return EffectiveCharacter(spec.p, spec.sylow, table, m, chi)

"""Finite permutation groups at desk scale.

Order and membership come from a deterministic Schreier-Sims stabilizer chain.
Everything that needs elements (classes, normalizers, subgroup lattices,
isomorphism tests) works on the sorted element list, where index 0 is always
the identity and indices follow the lexicographic order of image tuples.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import MembershipError, ParseError, ScaleLimitError
from .perm import Permutation

DEFAULT_MAX_ORDER = 1000


# --------------------------------------------------------------------------
# stabilizer chain

@dataclass
class _Level:
    base_point: int
    gens: list
    transversal: dict = field(default_factory=dict)

    def rebuild(self, degree: int) -> None:
        ident = Permutation.identity(degree)
        trans = {self.base_point: ident}
        queue = [self.base_point]
        for pt in queue:
            u = trans[pt]
            for s in self.gens:
                img = s.images[pt]
                if img not in trans:
                    trans[img] = s * u
                    queue.append(img)
        self.transversal = trans


class StabilizerChain:
    """Base and strong generating set built by the Schreier-Sims algorithm.

    Base points are chosen as the smallest point moved by the element that
    forces a new level, so the chain is a function of the generator order.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation]):
        self.degree = degree
        self.levels: list[_Level] = []
        gens = [g for g in generators if not g.is_identity()]
        for g in gens:
            if all(g.images[lv.base_point] == lv.base_point for lv in self.levels):
                self.levels.append(_Level(min(g.moved_points()), []))
        for i, lv in enumerate(self.levels):
            lv.gens = [g for g in gens if self._fixes_prefix(g, i)]
            lv.rebuild(degree)
        self._complete()

    def _fixes_prefix(self, g: Permutation, i: int) -> bool:
        return all(g.images[self.levels[j].base_point] == self.levels[j].base_point for j in range(i))

    def strip(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            beta = g.images[lv.base_point]
            u = lv.transversal.get(beta)
            if u is None:
                return g, i
            g = ~u * g
        return g, len(self.levels)

    def _complete(self) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            dropped = None
            for pt, u in list(lv.transversal.items()):
                for s in lv.gens:
                    y = ~lv.transversal[s.images[pt]] * s * u
                    h, j = self.strip(y, i + 1)
                    if j < len(self.levels) or not h.is_identity():
                        dropped = (h, j)
                        break
                if dropped:
                    break
            if dropped is None:
                i -= 1
                continue
            h, j = dropped
            if j == len(self.levels):
                self.levels.append(_Level(min(h.moved_points()), []))
            for lvl in range(i + 1, j + 1):
                self.levels[lvl].gens.append(h)
                self.levels[lvl].rebuild(self.degree)
            i = j

    @property
    def base(self) -> list[int]:
        return [lv.base_point for lv in self.levels]

    def order(self) -> int:
        return math.prod(len(lv.transversal) for lv in self.levels)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, j = self.strip(g)
        return j == len(self.levels) and h.is_identity()

    def elements(self) -> list[Permutation]:
        elems = [Permutation.identity(self.degree)]
        for lv in reversed(self.levels):
            reps = list(lv.transversal.values())
            elems = [u * e for u in reps for e in elems]
        return elems


# --------------------------------------------------------------------------
# groups and subgroups

class PermutationGroup:
    """A finite group generated by permutations of {1..degree}.

    Immutable after construction; element-level caches are filled lazily.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), name: Optional[str] = None):
        if degree < 1:
            raise ParseError("degree must be a positive integer")
        gens = tuple(generators)
        for g in gens:
            if g.degree != degree:
                raise ParseError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = gens
        self.name = name
        self.chain = StabilizerChain(degree, gens)
        self._order = self.chain.order()
        self._elements: Optional[list[Permutation]] = None
        self._index: Optional[dict[Permutation, int]] = None
        self._mul: Optional[list[list[int]]] = None
        self._inv: Optional[list[int]] = None
        self._orders: Optional[list[int]] = None
        self._classes: Optional[list[tuple[int, ...]]] = None
        self._class_of: Optional[list[int]] = None

    # -- basic queries -------------------------------------------------------

    def order(self) -> int:
        return self._order

    def __len__(self) -> int:
        return self._order

    def __contains__(self, g: Permutation) -> bool:
        return self.chain.contains(g)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __repr__(self) -> str:
        label = self.name or ", ".join(map(str, self.generators)) or "()"
        return f"<PermutationGroup {label} of order {self._order}>"

    def check_scale(self, max_order: int = DEFAULT_MAX_ORDER) -> None:
        if self._order > max_order:
            raise ScaleLimitError(self._order, max_order)

    # -- element tables ------------------------------------------------------

    @property
    def elements(self) -> list[Permutation]:
        if self._elements is None:
            self._elements = sorted(self.chain.elements())
            self._index = {g: i for i, g in enumerate(self._elements)}
        return self._elements

    def index(self, g: Permutation) -> int:
        self.elements
        try:
            return self._index[g]
        except KeyError:
            raise MembershipError(f"{g} is not an element of {self!r}") from None

    @property
    def mul(self) -> list[list[int]]:
        """``mul[a][b]`` is the index of ``elements[a] * elements[b]``."""
        if self._mul is None:
            elems = self.elements
            idx = self._index
            self._mul = [[idx[a * b] for b in elems] for a in elems]
        return self._mul

    @property
    def inv(self) -> list[int]:
        if self._inv is None:
            self._inv = [self._index[~g] for g in self.elements]
        return self._inv

    @property
    def element_orders(self) -> list[int]:
        if self._orders is None:
            self._orders = [g.order() for g in self.elements]
        return self._orders

    def conj_index(self, g: int, x: int) -> int:
        """Index of ``g x g^-1``."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def generator_indices(self) -> list[int]:
        return sorted({self.index(g) for g in self.generators if not g.is_identity()})

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by the given element indices."""
        gens = [g for g in set(gens) if g != 0]
        mul = self.mul
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                row = x
                for s in gens:
                    y = mul[s][row]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    # -- conjugacy -----------------------------------------------------------

    def _compute_classes(self) -> None:
        gens = self.generator_indices()
        n = self._order
        class_of = [-1] * n
        raw = []
        for start in range(n):
            if class_of[start] >= 0:
                continue
            members = [start]
            class_of[start] = len(raw)
            for x in members:
                for s in gens:
                    y = self.conj_index(s, x)
                    if class_of[y] < 0:
                        class_of[y] = len(raw)
                        members.append(y)
            raw.append(tuple(sorted(members)))
        orders = self.element_orders
        raw.sort(key=lambda c: (orders[c[0]], len(c), c[0]))
        self._classes = raw
        self._class_of = [0] * n
        for ci, members in enumerate(raw):
            for x in members:
                self._class_of[x] = ci

    @property
    def classes(self) -> list[tuple[int, ...]]:
        """Conjugacy classes as sorted tuples of element indices.

        The representative of a class is its first (lexicographically
        smallest) element.  Classes are ordered by element order, then size,
        then representative.
        """
        if self._classes is None:
            self._compute_classes()
        return self._classes

    @property
    def class_of(self) -> list[int]:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of

    def conjugacy_classes(self) -> list[tuple[Permutation, int]]:
        return [(self.elements[c[0]], len(c)) for c in self.classes]

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a, b in itertools.combinations(gens, 2))

    def exponent(self) -> int:
        return math.lcm(1, *self.element_orders)

    # -- subgroups -----------------------------------------------------------

    def subgroup(self, generators: Iterable[Permutation]) -> SubgroupHandle:
        gens = list(generators)
        for g in gens:
            if g not in self:
                raise MembershipError(f"{g} is not an element of {self!r}")
        elems = self.closure(self.index(g) for g in gens)
        return SubgroupHandle(self, elems)

    def whole(self) -> SubgroupHandle:
        return SubgroupHandle(self, frozenset(range(self._order)))

    def trivial(self) -> SubgroupHandle:
        return SubgroupHandle(self, frozenset([0]))


class SubgroupHandle:
    """A subgroup of an ambient PermutationGroup, stored as element indices."""

    def __init__(self, ambient: PermutationGroup, elements: frozenset[int]):
        self.ambient = ambient
        self.elements = frozenset(elements)
        self._generators: Optional[list[Permutation]] = None
        self._group: Optional[PermutationGroup] = None

    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Permutation) -> bool:
        try:
            return self.ambient.index(g) in self.elements
        except MembershipError:
            return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.ambient is other.ambient and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __le__(self, other: SubgroupHandle) -> bool:
        return self.elements <= other.elements

    def __repr__(self) -> str:
        gens = ", ".join(map(str, self.generators)) or "()"
        return f"<Subgroup <{gens}> of order {self.order()}>"

    @property
    def generators(self) -> list[Permutation]:
        """A small generating set, chosen greedily in canonical element order."""
        if self._generators is None:
            amb = self.ambient
            gens: list[int] = []
            span = frozenset([0])
            for x in sorted(self.elements, key=lambda i: (-amb.element_orders[i], i)):
                if x not in span:
                    gens.append(x)
                    span = amb.closure(gens)
                    if len(span) == len(self.elements):
                        break
            self._generators = [amb.elements[i] for i in sorted(gens)]
        return self._generators

    def members(self) -> list[Permutation]:
        return [self.ambient.elements[i] for i in sorted(self.elements)]

    def as_group(self) -> PermutationGroup:
        """The subgroup as a standalone PermutationGroup of the same degree."""
        if self._group is None:
            self._group = PermutationGroup(self.ambient.degree, self.generators)
        return self._group

    def conjugate(self, g: int) -> SubgroupHandle:
        """``g H g^-1`` for an ambient element index ``g``."""
        amb = self.ambient
        return SubgroupHandle(amb, frozenset(amb.conj_index(g, h) for h in self.elements))

    def is_p_group(self) -> bool:
        return len(prime_factors(self.order())) <= 1

    def is_elementary_abelian(self, p: int) -> bool:
        amb = self.ambient
        if any(amb.element_orders[x] not in (1, p) for x in self.elements):
            return False
        gens = [amb.index(g) for g in self.generators]
        return all(amb.mul[a][b] == amb.mul[b][a] for a in gens for b in gens)


# --------------------------------------------------------------------------
# arithmetic helpers

def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    for p in prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


# --------------------------------------------------------------------------
# operations

def build_group(degree: int, generators: Sequence[Permutation], name: Optional[str] = None) -> PermutationGroup:
    return PermutationGroup(degree, generators, name=name)


def conjugacy_classes(G: PermutationGroup) -> list[tuple[Permutation, int]]:
    return G.conjugacy_classes()


def is_conjugate(G: PermutationGroup, x: Permutation, y: Permutation) -> Optional[Permutation]:
    """First ``g`` in canonical order with ``g x g^-1 == y``, or None."""
    xi, yi = G.index(x), G.index(y)
    if G.class_of[xi] != G.class_of[yi]:
        return None
    for g in range(G.order()):
        if G.conj_index(g, xi) == yi:
            return G.elements[g]
    raise AssertionError("class bookkeeping disagrees with brute force")


def normalizer(G: PermutationGroup, H: SubgroupHandle) -> SubgroupHandle:
    hg = [G.index(h) for h in H.generators]
    elems = frozenset(
        g for g in range(G.order()) if all(G.conj_index(g, h) in H.elements for h in hg)
    )
    return SubgroupHandle(G, elems)


def centralizer(G: PermutationGroup, H: SubgroupHandle) -> SubgroupHandle:
    hg = [G.index(h) for h in H.generators]
    mul = G.mul
    elems = frozenset(g for g in range(G.order()) if all(mul[g][h] == mul[h][g] for h in hg))
    return SubgroupHandle(G, elems)


def center(G: PermutationGroup) -> SubgroupHandle:
    return centralizer(G, G.whole())


def normal_closure(G: PermutationGroup, elems: Iterable[int]) -> frozenset[int]:
    gens = G.generator_indices()
    current = G.closure(elems)
    while True:
        extra = {G.conj_index(s, x) for s in gens for x in current} - current
        if not extra:
            return current
        current = G.closure(set(current) | extra)


def derived_subgroup(G: PermutationGroup) -> SubgroupHandle:
    gens = G.generator_indices()
    mul, inv = G.mul, G.inv
    comms = {mul[mul[a][b]][mul[inv[a]][inv[b]]] for a in gens for b in gens}
    return SubgroupHandle(G, normal_closure(G, comms))


def subgroup_conjugacy_class(G: PermutationGroup, H: frozenset[int]) -> set[frozenset[int]]:
    """All conjugates of ``H`` (as element-index sets)."""
    gens = G.generator_indices()
    orbit = {H}
    queue = [H]
    for K in queue:
        for s in gens:
            C = frozenset(G.conj_index(s, k) for k in K)
            if C not in orbit:
                orbit.add(C)
                queue.append(C)
    return orbit


def subgroups_up_to_conjugacy(G: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[SubgroupHandle]:
    """One representative per conjugacy class of subgroups.

    Classes are grown from the trivial subgroup by joins ``<H, g>``; every
    subgroup is reached because any subgroup is a join of cyclic ones and the
    join of a conjugate is conjugate to a join.  Each class is represented by
    its conjugate with the smallest sorted index tuple; classes are ordered by
    (order, that tuple).
    """
    G.check_scale(max_order)
    n = G.order()
    registry: dict[frozenset[int], int] = {}
    reps: list[frozenset[int]] = []

    def register(H: frozenset[int]) -> None:
        if H in registry:
            return
        cls = subgroup_conjugacy_class(G, H)
        cid = len(reps)
        for C in cls:
            registry[C] = cid
        reps.append(min(cls, key=lambda C: tuple(sorted(C))))

    register(frozenset([0]))
    i = 0
    while i < len(reps):
        H = reps[i]
        done = set(H)
        mul = G.mul
        for g in range(n):
            if g in done:
                continue
            K = G.closure(set(H) | {g})
            for h in H:
                done.add(mul[h][g])
            register(K)
        i += 1
    reps.sort(key=lambda C: (len(C), tuple(sorted(C))))
    return [SubgroupHandle(G, C) for C in reps]


def all_subgroups(G: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[SubgroupHandle]:
    """Every subgroup (not up to conjugacy), via class expansion."""
    out = []
    for H in subgroups_up_to_conjugacy(G, max_order):
        for C in sorted(subgroup_conjugacy_class(G, H.elements), key=lambda C: tuple(sorted(C))):
            out.append(SubgroupHandle(G, C))
    return out


def section_group(G: PermutationGroup, K: SubgroupHandle) -> PermutationGroup:
    """``N_G(K)/K`` realized by the action of ``N_G(K)`` on the left cosets of ``K``."""
    N = normalizer(G, K)
    if K.order() == 1:
        return PermutationGroup(G.degree, N.generators)
    mul = G.mul
    cosets: list[frozenset[int]] = []
    coset_of: dict[int, int] = {}
    for g in sorted(N.elements):
        if g in coset_of:
            continue
        c = frozenset(mul[g][k] for k in K.elements)
        for x in c:
            coset_of[x] = len(cosets)
        cosets.append(c)
    reps = [min(c) for c in cosets]

    def act(n: int) -> Permutation:
        return Permutation(tuple(coset_of[mul[n][r]] for r in reps))

    images = {n: act(n) for n in N.elements}
    kernel = frozenset(n for n, p in images.items() if p.is_identity())
    # K is normal in N, so the action on N/K is faithful with kernel exactly K
    assert kernel == K.elements
    gens = [images[G.index(n)] for n in N.generators]
    S = PermutationGroup(len(cosets), gens)
    assert S.order() * K.order() == N.order()
    return S


# --------------------------------------------------------------------------
# isomorphism

def invariant_profile(G: PermutationGroup) -> tuple:
    orders = Counter(G.element_orders)
    return (
        G.order(),
        tuple(sorted(orders.items())),
        center(G).order(),
        G.order() // derived_subgroup(G).order(),
        tuple(sorted(Counter((G.element_orders[c[0]], len(c)) for c in G.classes).items())),
    )


def _element_signature(G: PermutationGroup, x: int) -> tuple[int, int]:
    return G.element_orders[x], len(G.classes[G.class_of[x]])


def _generating_pair_or_greedy(G: PermutationGroup) -> list[int]:
    n = G.order()
    if n == 1:
        return []
    class_size = lambda x: len(G.classes[G.class_of[x]])
    reps = sorted((c[0] for c in G.classes[1:]), key=lambda x: (class_size(x), x))
    for x in reps:
        if len(G.closure([x])) == n:
            return [x]
    others = sorted(range(1, n), key=lambda y: (class_size(y), y))
    for x in reps:
        for y in others:
            if len(G.closure([x, y])) == n:
                return [x, y]
    gens: list[int] = []
    span = frozenset([0])
    for y in others:
        if y not in span:
            gens.append(y)
            span = G.closure(gens)
    return gens


def _extend_map(G, H, gens, images) -> Optional[dict[int, int]]:
    """Extend generator images to a homomorphism on <gens>, or None on conflict."""
    phi = {0: 0}
    used = {0}
    queue = [0]
    for x in queue:
        for s, t in zip(gens, images):
            y = G.mul[s][x]
            img = H.mul[t][phi[x]]
            if y in phi:
                if phi[y] != img:
                    return None
            else:
                if img in used:
                    return None
                phi[y] = img
                used.add(img)
                queue.append(y)
    return phi


def find_isomorphism(G: PermutationGroup, H: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER) -> Optional[dict[Permutation, Permutation]]:
    """Generator images of an isomorphism ``G -> H``, or None.

    The first generator's image ranges over class representatives only, since
    composing with an inner automorphism of ``H`` moves it anywhere in its class.
    """
    G.check_scale(max_order)
    H.check_scale(max_order)
    if invariant_profile(G) != invariant_profile(H):
        return None
    gens = _generating_pair_or_greedy(G)
    if not gens:
        return {}
    cands = []
    for k, s in enumerate(gens):
        sig = _element_signature(G, s)
        pool = [c[0] for c in H.classes] if k == 0 else range(H.order())
        cands.append([t for t in pool if _element_signature(H, t) == sig])

    def search(k: int, images: list[int]) -> Optional[list[int]]:
        if k == len(gens):
            return images
        for t in cands[k]:
            trial = images + [t]
            phi = _extend_map(G, H, gens[: k + 1], trial)
            if phi is None:
                continue
            if k + 1 == len(gens) and len(phi) != G.order():
                continue
            found = search(k + 1, trial)
            if found is not None:
                return found
        return None

    images = search(0, [])
    if images is None:
        return None
    return {G.elements[s]: H.elements[t] for s, t in zip(gens, images)}


def verify_isomorphism(G: PermutationGroup, H: PermutationGroup, witness: dict[Permutation, Permutation]) -> bool:
    """Check that the generator map extends to a bijective homomorphism."""
    try:
        gens = [G.index(g) for g in witness]
        images = [H.index(h) for h in witness.values()]
    except MembershipError:
        return False
    if G.order() != H.order() or len(G.closure(gens)) != G.order():
        return False
    phi = _extend_map(G, H, gens, images)
    return phi is not None and len(phi) == G.order() and len(set(phi.values())) == H.order()


def is_isomorphic(G: PermutationGroup, H: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER) -> bool:
    return find_isomorphism(G, H, max_order) is not None

"""Fixed-point data of the linear model ``S(V_p^{+k})`` and the join calculus
for finiteness obstructions in an abstract finite abelian group."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .chartab import ClassFunction, fixed_subspace_dim
from .cyclotomic import CyclotomicNumber
from .family import CompatibleFamily, subgroup_character
from .permgroup import SubgroupHandle, factorize, prime_factors
from .pstructure import _elementary_abelians_in, _rank_of


class _Empty:
    """Marker for an empty fixed set; deliberately not a number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Empty"

    def __reduce__(self):
        return (_Empty, ())


Empty = _Empty()
SphereEntry = Union[int, _Empty]


def sphere_dim(fixed_dim: int, k: int) -> SphereEntry:
    """Dimension of the unit sphere of a complex space of dimension k*fixed_dim."""
    return 2 * k * fixed_dim - 1 if fixed_dim > 0 else Empty


def subgroup_rank(H: SubgroupHandle) -> int:
    ps = prime_factors(H.order())
    if not ps:
        return 0
    p = ps[0]
    return max(_rank_of(len(E), p) for E in _elementary_abelians_in(H.ambient, H, p))


@dataclass
class DimensionRecord:
    index: int
    subgroup: SubgroupHandle
    order: int
    rank: int
    fixed_dim: int
    entry: SphereEntry


@dataclass
class DimensionFunction:
    k: int
    records: list[DimensionRecord]

    def entry_for_order(self, order: int) -> list[SphereEntry]:
        return [r.entry for r in self.records if r.order == order]

    def isotropy(self) -> list[DimensionRecord]:
        return [r for r in self.records if r.entry is not Empty]

    def serialize(self) -> list[dict]:
        return [
            {
                "id": r.index,
                "generators": [str(g) for g in r.subgroup.generators],
                "order": r.order,
                "rank": r.rank,
                "entry": "empty" if r.entry is Empty else r.entry,
            }
            for r in self.records
        ]


def dimension_function(cf: CompatibleFamily, k: int = 1) -> DimensionFunction:
    if k < 1:
        raise ValueError("join multiplier k must be positive")
    records = []
    for i, a in enumerate(cf.assignments):
        d = fixed_subspace_dim(a.character, a.subgroup)
        records.append(DimensionRecord(i, a.subgroup, a.subgroup.order(), subgroup_rank(a.subgroup), d, sphere_dim(d, k)))
    return DimensionFunction(k, records)


def verify_rank_one_isotropy(cf: CompatibleFamily) -> tuple[bool, Optional[SubgroupHandle]]:
    """Every prime-power subgroup of rank >= 2 must have an empty fixed sphere."""
    for a in cf.assignments:
        if a.subgroup.order() > 1 and subgroup_rank(a.subgroup) >= 2:
            if fixed_subspace_dim(a.character, a.subgroup) != 0:
                return False, a.subgroup
    return True, None


@dataclass
class EulerReport:
    ok: bool
    prime_power: list[tuple[str, int, int]] = field(default_factory=list)
    composite: list[tuple[str, list[tuple[int, int]]]] = field(default_factory=list)


def _euler_char(entry: SphereEntry) -> int:
    if entry is Empty:
        return 0
    return 1 + (-1) ** entry


def euler_fixed_check(cf: CompatibleFamily, k: int = 1) -> EulerReport:
    """Euler characteristic of ``S(V^{+k})^<g>`` for every class of elements g != 1.

    Prime-power elements must give 0.  For composite-order elements the fixed
    dimensions of the prime-power parts are reported; nothing is required.
    """
    G = cf.group
    fam = cf.base
    report = EulerReport(True)
    for cls in G.classes[1:]:
        x = cls[0]
        o = G.element_orders[x]
        g = G.elements[x]
        if len(prime_factors(o)) == 1:
            C = G.subgroup([g])
            chi, _ = subgroup_character(fam, C)
            d = fixed_subspace_dim(chi, C)
            chi_e = _euler_char(sphere_dim(d, k))
            report.prime_power.append((str(g), d, chi_e))
            if chi_e != 0:
                report.ok = False
        else:
            parts = []
            for p, a in factorize(o):
                q = p ** a
                # the p-part of g is g^(o/q * u) with u the inverse of o/q mod q
                u = pow(o // q, -1, q)
                gp = g ** ((o // q) * u)
                C = G.subgroup([gp])
                chi, _ = subgroup_character(fam, C)
                parts.append((p, fixed_subspace_dim(chi, C)))
            report.composite.append((str(g), parts))
    return report


def rational_euler_class(chi: ClassFunction, k: int = 1) -> ClassFunction:
    """Alternating sum of rational homology of ``S(chi^{+k})`` as a virtual character.

    Only ``H_0`` and ``H_top`` are nonzero and both carry the trivial action
    (unitary actions preserve orientation), so the result is the zero function.
    """
    if chi.degree <= 0:
        raise ValueError("need a character of positive degree")
    top = 2 * k * chi.degree - 1
    one = CyclotomicNumber.rational(1, 1)
    trivial = ClassFunction(chi.group, tuple(one for _ in chi.values))
    return trivial + trivial.scale((-1) ** top)


# --------------------------------------------------------------------------
# join calculus in an abstract finite abelian group

Element = Union[int, Sequence[int]]


def _normalize(value: Element, invariants: Optional[Sequence[int]]) -> tuple[int, ...]:
    vec = (value,) if isinstance(value, int) else tuple(value)
    if invariants is None:
        return vec
    if len(vec) != len(invariants):
        raise ValueError(f"element {vec} does not live in Z/{' x Z/'.join(map(str, invariants))}")
    return tuple(v % n for v, n in zip(vec, invariants))


def join_sigma(s1: Element, m1: int, s2: Element, m2: int,
               invariants: Optional[Sequence[int]] = None) -> tuple[tuple[int, ...], int]:
    """Obstruction of the join of an (m1-1)- and an (m2-1)-resolution.

    Returns ``((-1)^m2 s1 + (-1)^m1 s2, m1 + m2)`` with the value reduced
    modulo the invariant factors when they are given.
    """
    a = _normalize(s1, invariants)
    b = _normalize(s2, invariants)
    if len(a) != len(b):
        raise ValueError("obstruction values from different groups")
    val = tuple((-1) ** m2 * x + (-1) ** m1 * y for x, y in zip(a, b))
    return _normalize(val, invariants), m1 + m2


@dataclass
class ObstructionSymbol:
    order: int
    dim_m: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("obstruction order must be positive")


def join_exponent(order: int, m: int) -> tuple[int, list[tuple[int, int, int]]]:
    """Smallest l with sigma of the l-fold self-join zero, plus the iteration trace.

    sigma is modelled as a generator of Z/order.  Each trace row is
    ``(l, sigma of the l-fold join, dimension parameter l*m)``.
    """
    ObstructionSymbol(order, m)
    if m <= 0 or m % 2:
        raise ValueError("self-joins are only supported for even m (complex representation spheres)")
    trace = [(1, 1 % order, m)]
    value, dim = (1 % order,), m
    l = 1
    while value != (0,):
        value, dim = join_sigma(value, dim, 1, m, invariants=(order,))
        l += 1
        trace.append((l, value[0], dim))
    return l, trace

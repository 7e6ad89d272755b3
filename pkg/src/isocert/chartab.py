"""Exact character tables by Dixon's method, and class-function arithmetic.

The class multiplication matrices are split into simultaneous eigenspaces over
a prime field F_l with l = 1 mod exponent and l > 2*sqrt(|G|).  Each common
eigenvector gives the central character of an irreducible; its degree and
values mod l follow, and values are lifted to Q(z_e) by recovering the
eigenvalue multiplicities of every element from the values on its powers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .cyclotomic import CyclotomicNumber, multiplication_tensor
from .errors import MembershipError, ScaleLimitError
from .permgroup import DEFAULT_MAX_ORDER, PermutationGroup, SubgroupHandle, is_prime, prime_factors

MAX_PRIME_RETRIES = 8


# --------------------------------------------------------------------------
# class functions

@dataclass(frozen=True, eq=False)
class ClassFunction:
    """Values on the conjugacy classes of ``group`` (in ``group.classes`` order)."""

    group: PermutationGroup
    values: tuple[CyclotomicNumber, ...]

    @property
    def e(self) -> int:
        return self.values[0].e

    @property
    def degree(self) -> int:
        d = self.values[0].to_fraction()
        if d.denominator != 1:
            raise ValueError(f"class function has non-integral value {d} at the identity")
        return int(d)

    def __call__(self, g) -> CyclotomicNumber:
        idx = g if isinstance(g, int) else self.group.index(g)
        return self.values[self.group.class_of[idx]]

    def __add__(self, other: ClassFunction) -> ClassFunction:
        _check_same_group(self.group, other.group)
        e = math.lcm(self.e, other.e)
        return ClassFunction(self.group, tuple(a.lift(e) + b.lift(e) for a, b in zip(self.values, other.values)))

    def __sub__(self, other: ClassFunction) -> ClassFunction:
        return self + other.scale(-1)

    def scale(self, k) -> ClassFunction:
        return ClassFunction(self.group, tuple(v * k for v in self.values))

    def lift(self, e: int) -> ClassFunction:
        return ClassFunction(self.group, tuple(v.lift(e) for v in self.values))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return same_group(self.group, other.group) and all(a == b for a, b in zip(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.values)

    def is_rational_valued(self) -> bool:
        return all(v.is_rational() for v in self.values)

    def serialize(self) -> list[str]:
        return [v.serialize() for v in self.values]

    def __repr__(self) -> str:
        return "ClassFunction(" + ", ".join(self.serialize()) + ")"


Character = ClassFunction


def same_group(G: PermutationGroup, H: PermutationGroup) -> bool:
    if G is H:
        return True
    return G.degree == H.degree and G.order() == H.order() and all(g in H for g in G.generators)


def _check_same_group(G: PermutationGroup, H: PermutationGroup) -> None:
    if not same_group(G, H):
        raise MembershipError("class functions live on different groups")


def trivial_character(G: PermutationGroup) -> ClassFunction:
    one = CyclotomicNumber.rational(1, 1)
    return ClassFunction(G, tuple(one for _ in G.classes))


def regular_character(G: PermutationGroup) -> ClassFunction:
    vals = [CyclotomicNumber.rational(1, G.order() if i == 0 else 0) for i in range(len(G.classes))]
    return ClassFunction(G, tuple(vals))


def constant_on(G: PermutationGroup, values_by_class: Sequence) -> ClassFunction:
    vals = [v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.rational(1, v) for v in values_by_class]
    e = math.lcm(*(v.e for v in vals))
    return ClassFunction(G, tuple(v.lift(e) for v in vals))


def _subgroup_group(H) -> PermutationGroup:
    return H.as_group() if isinstance(H, SubgroupHandle) else H


def restrict(chi: ClassFunction, H) -> ClassFunction:
    """Restriction to a subgroup (a SubgroupHandle or a PermutationGroup)."""
    Hg = _subgroup_group(H)
    G = chi.group
    vals = []
    for rep, _ in Hg.conjugacy_classes():
        if rep not in G:
            raise MembershipError(f"{rep} is not in the group of the character")
        vals.append(chi.values[G.class_of[G.index(rep)]])
    return ClassFunction(Hg, tuple(vals))


def inner_product(chi: ClassFunction, psi: ClassFunction, H=None) -> Fraction:
    """``(1/|H|) sum_h chi(h) conj(psi(h))``; both are restricted to ``H`` when given."""
    if H is not None:
        Hg = _subgroup_group(H)
        if not same_group(chi.group, Hg):
            chi = restrict(chi, Hg)
        if not same_group(psi.group, Hg):
            psi = restrict(psi, Hg)
    _check_same_group(chi.group, psi.group)
    G = chi.group
    e = math.lcm(chi.e, psi.e)
    total = CyclotomicNumber.rational(e, 0)
    for cls, a, b in zip(G.classes, chi.values, psi.values):
        total = total + a.lift(e) * b.lift(e).conjugate() * len(cls)
    if not total.is_rational():
        raise ValueError("inner product is not rational; inputs are not class functions")
    return total.to_fraction() / G.order()


def fixed_subspace_dim(chi: ClassFunction, H) -> int:
    """Dimension of the H-fixed subspace, ``<chi|_H, 1_H>``."""
    Hg = _subgroup_group(H)
    val = inner_product(chi, trivial_character(Hg), Hg)
    if val.denominator != 1 or val < 0:
        raise ValueError(f"<chi|_H, 1> = {val}; input is not a genuine character")
    return int(val)


def value_sum(chi: ClassFunction, H) -> CyclotomicNumber:
    """``sum_{h in H} chi(h)`` evaluated exactly."""
    Hg = _subgroup_group(H)
    res = restrict(chi, Hg) if not same_group(chi.group, Hg) else chi
    total = CyclotomicNumber.rational(res.e, 0)
    for cls, v in zip(Hg.classes, res.values):
        total = total + v * len(cls)
    return total


# --------------------------------------------------------------------------
# modular linear algebra

def _rref_mod(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = M.copy() % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _nullspace_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right kernel of M over F_p."""
    A, pivots = _rref_mod(M, p)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-A[i, f]) % p
    return basis


def _charpoly_mod(M: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial (lowest degree first) via Hessenberg reduction."""
    H = [[int(x) % p for x in row] for row in M]
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[m], H[piv] = H[piv], H[m]
            for row in H:
                row[m], row[piv] = row[piv], row[m]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % p
            if u:
                H[i] = [(a - u * b) % p for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = (row[m] + u * row[i]) % p
    polys = [[1]]
    for k in range(1, n + 1):
        hk = H[k - 1][k - 1]
        prev = polys[k - 1]
        cur = [0] * (k + 1)
        for i, c in enumerate(prev):
            cur[i + 1] = (cur[i + 1] + c) % p
            cur[i] = (cur[i] - hk * c) % p
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = prod * H[i][i - 1] % p
            coef = prod * H[i - 1][k - 1] % p
            if coef:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] = (cur[j] - coef * c) % p
        polys.append(cur)
    return polys[n]


def _roots_mod(poly: list[int], p: int) -> list[int]:
    roots = []
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


# --------------------------------------------------------------------------
# Dixon's algorithm

def _next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


def dixon_primes(order: int, exponent: int):
    """Admissible moduli in increasing order: l prime, l = 1 mod e, l > 2 sqrt(|G|)."""
    ell = max(2, math.isqrt(4 * order))
    while True:
        ell = _next_prime(ell)
        if ell % exponent == 1 and ell * ell > 4 * order:
            yield ell


def _primitive_root(p: int) -> int:
    fac = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    return 1


@dataclass
class CharacterTable:
    group: PermutationGroup
    exponent: int
    irreducibles: list[ClassFunction]
    modulus: int

    @property
    def classes(self) -> list[tuple]:
        return self.group.conjugacy_classes()

    def degrees(self) -> list[int]:
        return [chi.degree for chi in self.irreducibles]

    def decompose(self, chi: ClassFunction) -> list[Fraction]:
        """Multiplicities of each irreducible in ``chi``."""
        return [inner_product(chi, psi) for psi in self.irreducibles]

    def combine(self, multiplicities: Sequence[int]) -> ClassFunction:
        vals = [CyclotomicNumber.rational(self.exponent, 0) for _ in self.group.classes]
        for m, psi in zip(multiplicities, self.irreducibles):
            if m:
                vals = [a + b.lift(self.exponent) * m for a, b in zip(vals, psi.values)]
        return ClassFunction(self.group, tuple(vals))


def _class_matrices(G: PermutationGroup) -> list[np.ndarray]:
    """``A_i[j, k]`` = #{x in C_i : x^-1 z_k in C_j} for the representative z_k."""
    classes = G.classes
    r = len(classes)
    mul, inv, class_of = G.mul, G.inv, G.class_of
    A = np.zeros((r, r, r), dtype=np.int64)
    for k, cls in enumerate(classes):
        z = cls[0]
        for x in range(G.order()):
            A[class_of[x], class_of[mul[inv[x]][z]], k] += 1
    return [A[i] for i in range(r)]


def _split_spaces(mats: list[np.ndarray], ell: int) -> Optional[list[np.ndarray]]:
    r = mats[0].shape[0]
    rng = random.Random(20240601)
    combo = sum((rng.randrange(1, ell) * A for A in mats[1:]), np.zeros((r, r), dtype=np.int64)) % ell
    spaces = [np.eye(r, dtype=np.int64)]
    for A in [combo] + mats[1:]:
        if all(S.shape[1] == 1 for S in spaces):
            break
        new = []
        for S in spaces:
            d = S.shape[1]
            if d == 1:
                new.append(S)
                continue
            # column-reduce the basis so that rows ``piv`` form an identity block
            T, piv = _rref_mod(S.T, ell)
            B = T[: len(piv)].T
            R = (A % ell) @ B % ell
            R = R[piv, :]
            pieces = []
            for lam in _roots_mod(_charpoly_mod(R, ell), ell):
                V = _nullspace_mod((R - lam * np.eye(d, dtype=np.int64)) % ell, ell)
                if V.shape[1]:
                    pieces.append(B @ V % ell)
            if sum(P.shape[1] for P in pieces) != d:
                return None
            new.extend(pieces)
        spaces = new
    if any(S.shape[1] != 1 for S in spaces):
        return None
    return spaces


def _dixon_attempt(G: PermutationGroup, e: int, ell: int, mats) -> Optional[list[ClassFunction]]:
    classes = G.classes
    r = len(classes)
    n = G.order()
    spaces = _split_spaces(mats, ell) if r > 1 else [np.ones((1, 1), dtype=np.int64)]
    if spaces is None:
        return None
    sizes = [len(c) for c in classes]
    inv_class = [G.class_of[G.inv[c[0]]] for c in classes]
    # power map: class of rep^j for j = 0..e-1
    power = []
    for c in classes:
        x, row, cur = c[0], [], 0
        for _ in range(e):
            row.append(G.class_of[cur])
            cur = G.mul[x][cur]
        power.append(row)
    z = pow(_primitive_root(ell), (ell - 1) // e, ell)
    zinv = pow(z, -1, ell)
    e_inv = pow(e, -1, ell)
    # dft[m, j] = z^(-jm): turns values on the powers of x into eigenvalue multiplicities
    zpow = np.array([pow(zinv, t, ell) for t in range(e)], dtype=np.int64)
    dft = zpow[np.outer(np.arange(e), np.arange(e)) % e]
    power = np.array(power, dtype=np.int64)
    inv_sizes = np.array([pow(sz, -1, ell) for sz in sizes], dtype=np.int64)
    chars = []
    for S in spaces:
        w = S[:, 0] % ell
        if w[0] == 0:
            return None
        w = w * pow(int(w[0]), -1, ell) % ell
        s = sum(int(w[k]) * int(w[inv_class[k]]) * int(inv_sizes[k]) for k in range(r)) % ell
        if s == 0:
            return None
        d2 = n * pow(s, -1, ell) % ell
        deg = next((d for d in range(1, math.isqrt(n) + 1) if d * d % ell == d2), None)
        if deg is None:
            return None
        modvals = deg * w % ell * inv_sizes % ell
        mults = (modvals[power] @ dft.T) % ell * e_inv % ell
        if (mults > deg).any():
            return None
        values = tuple(CyclotomicNumber.from_exponents(e, [int(m) for m in row]) for row in mults)
        chars.append(ClassFunction(G, values))
    return chars


def _sort_key(chi: ClassFunction) -> tuple:
    return (chi.degree, tuple(v.sort_key() for v in chi.values))


def check_table(G: PermutationGroup, chars: list[ClassFunction]) -> bool:
    """Exact checks: class count, sum of squared degrees, integrality, and both
    orthogonality relations.

    Values are algebraic integers, so the relations are checked on integer
    coefficient tensors; products use the multiplication tensor of Q(z_e).
    """
    r = len(G.classes)
    if len(chars) != r or sum(c.degree ** 2 for c in chars) != G.order():
        return False
    e = math.lcm(*(c.e for c in chars))
    vals = [[v.lift(e) for v in c.values] for c in chars]
    if not all(v.is_algebraic_integer() for row in vals for v in row):
        return False
    X = np.array([[[int(x) for x in v.coeffs] for v in row] for row in vals], dtype=np.int64)
    Xc = np.array([[[int(x) for x in v.conjugate().coeffs] for v in row] for row in vals], dtype=np.int64)
    W = multiplication_tensor(e)
    sizes = np.array([len(c) for c in G.classes], dtype=np.int64)
    unit = np.zeros(X.shape[2], dtype=np.int64)
    unit[0] = 1

    rows = np.einsum("icu,jcv,c->ijuv", X, Xc, sizes, optimize=True)
    rows = np.einsum("ijuv,uva->ija", rows, W, optimize=True)
    expected_rows = np.einsum("ij,a->ija", np.eye(r, dtype=np.int64) * G.order(), unit)
    if not np.array_equal(rows, expected_rows):
        return False
    cols = np.einsum("iau,ibv->abuv", X, Xc, optimize=True)
    cols = np.einsum("abuv,uvk->abk", cols, W, optimize=True)
    centralizers = np.diag(G.order() // sizes)
    expected_cols = np.einsum("ab,k->abk", centralizers, unit)
    return bool(np.array_equal(cols, expected_cols))


def character_table(G: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER) -> CharacterTable:
    G.check_scale(max_order)
    e = G.exponent()
    if G.order() == 1:
        return CharacterTable(G, 1, [trivial_character(G)], 0)
    mats = _class_matrices(G)
    primes = dixon_primes(G.order(), e)
    for _ in range(MAX_PRIME_RETRIES):
        ell = next(primes)
        chars = _dixon_attempt(G, e, ell, mats)
        if chars is None:
            continue
        chars.sort(key=_sort_key)
        if check_table(G, chars):
            return CharacterTable(G, e, chars, ell)
    raise ArithmeticError(f"eigenspace splitting failed for {MAX_PRIME_RETRIES} admissible primes")

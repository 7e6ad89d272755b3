"""Named groups and the plain-text group file format.

A group file is either a ``degree:`` line followed by ``gen:`` lines in
1-based cycle notation, or a single ``name: <catalog-id>`` line::

    # comment
    degree: 4
    gen: (1,2,3)
    gen: (1,2)(3,4)
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .perm import Permutation
from .permgroup import PermutationGroup, is_prime

CATALOG_IDS = (
    "trivial", "Cn:<n>", "D2n:<n>", "Q8", "A4", "S4", "SL2_3", "A5",
    "extraspecial_27_exp3", "Qd3",
)


def _cycle(n: int) -> Permutation:
    return Permutation.from_cycles(n, [list(range(1, n + 1))])


def cyclic(n: int) -> PermutationGroup:
    if n < 1:
        raise ParseError("cyclic group order must be positive")
    if n == 1:
        return PermutationGroup(1, [], name="trivial")
    return PermutationGroup(n, [_cycle(n)], name=f"Cn:{n}")


def dihedral(n: int) -> PermutationGroup:
    """Dihedral group of order 2n acting on the n-gon (n >= 3), or the Klein
    four group / C2 in the degenerate cases."""
    if n < 1:
        raise ParseError("dihedral parameter must be positive")
    if n == 1:
        return PermutationGroup(2, [Permutation.parse("(1,2)", 2)], name="D2n:1")
    if n == 2:
        return PermutationGroup(4, [Permutation.parse("(1,2)", 4), Permutation.parse("(3,4)", 4)], name="D2n:2")
    refl = Permutation.from_cycles(n, [[i, n + 2 - i] for i in range(2, (n + 1) // 2 + 1) if i != n + 2 - i])
    return PermutationGroup(n, [_cycle(n), refl], name=f"D2n:{n}")


def quaternion() -> PermutationGroup:
    # regular representation of Q8
    i = Permutation.parse("(1,2,3,4)(5,6,7,8)", 8)
    j = Permutation.parse("(1,5,3,7)(2,8,4,6)", 8)
    return PermutationGroup(8, [i, j], name="Q8")


def alternating4() -> PermutationGroup:
    return PermutationGroup(4, [Permutation.parse("(1,2,3)", 4), Permutation.parse("(1,2)(3,4)", 4)], name="A4")


def symmetric4() -> PermutationGroup:
    return PermutationGroup(4, [Permutation.parse("(1,2,3,4)", 4), Permutation.parse("(1,2)", 4)], name="S4")


def sl2_3() -> PermutationGroup:
    # action on the 8 nonzero vectors of F_3^2
    return matrix_group_on_vectors(3, [((1, 1), (0, 1)), ((1, 0), (1, 1))], name="SL2_3")


def alternating5() -> PermutationGroup:
    return PermutationGroup(5, [Permutation.parse("(1,2,3,4,5)", 5), Permutation.parse("(1,2,3)", 5)], name="A5")


def extraspecial_27() -> PermutationGroup:
    """Heisenberg group mod 3 (order 27, exponent 3) acting on the 9 points of F_3^2.

    Generated by ``(x, y) -> (x + 1, y)`` and ``(x, y) -> (x, x + y)``.
    """
    vecs = _vectors(3)
    pos = {v: i for i, v in enumerate(vecs)}
    a = Permutation([pos[((x + 1) % 3, y)] for x, y in vecs])
    b = Permutation([pos[(x, (x + y) % 3)] for x, y in vecs])
    return PermutationGroup(9, [a, b], name="extraspecial_27_exp3")


def _vectors(p: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(p) for y in range(p)]


def matrix_group_on_vectors(p: int, matrices, name=None) -> PermutationGroup:
    """Linear action of 2x2 matrices over F_p on the nonzero vectors of F_p^2."""
    vecs = [v for v in _vectors(p) if v != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}
    gens = []
    for (a, b), (c, d) in matrices:
        gens.append(Permutation([pos[((a * x + b * y) % p, (c * x + d * y) % p)] for x, y in vecs]))
    return PermutationGroup(len(vecs), gens, name=name)


def affine_qd(p: int) -> PermutationGroup:
    """``(Z/p)^2`` semidirect ``SL_2(p)`` acting affinely on the p^2 points of F_p^2.

    Generators: the unit translations along each axis and the two elementary
    transvections.  Point ``(x, y)`` is numbered ``x*p + y + 1``.
    """
    if p < 3 or not is_prime(p):
        raise ParseError(f"Qd(p) requires an odd prime, got {p}")
    vecs = _vectors(p)
    pos = {v: i for i, v in enumerate(vecs)}
    t1 = Permutation([pos[((x + 1) % p, y)] for x, y in vecs])
    t2 = Permutation([pos[(x, (y + 1) % p)] for x, y in vecs])
    u = Permutation([pos[((x + y) % p, y)] for x, y in vecs])
    l = Permutation([pos[(x, (x + y) % p)] for x, y in vecs])
    return PermutationGroup(p * p, [t1, t2, u, l], name=f"Qd{p}" if p == 3 else f"Qd({p})")


def from_catalog(ident: str) -> PermutationGroup:
    ident = ident.strip()
    if ident == "trivial":
        return cyclic(1)
    if ident.startswith("Cn:") or ident.startswith("D2n:"):
        head, _, num = ident.partition(":")
        try:
            n = int(num)
        except ValueError:
            raise ParseError(f"bad catalog parameter in {ident!r}") from None
        return cyclic(n) if head == "Cn" else dihedral(n)
    fixed = {
        "Q8": quaternion,
        "A4": alternating4,
        "S4": symmetric4,
        "SL2_3": sl2_3,
        "A5": alternating5,
        "extraspecial_27_exp3": extraspecial_27,
        "Qd3": lambda: affine_qd(3),
    }
    # shorthand accepted on the command line
    if ident.startswith("C") and ident[1:].isdigit():
        return cyclic(int(ident[1:]))
    if ident in fixed:
        return fixed[ident]()
    raise ParseError(f"unknown catalog id {ident!r}; known: {', '.join(CATALOG_IDS)}")


def parse_group_text(text: str) -> PermutationGroup:
    degree = None
    gens: list[str] = []
    name = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key = key.strip()
        value = value.strip()
        if key == "degree":
            try:
                degree = int(value)
            except ValueError:
                raise ParseError(f"line {lineno}: degree must be an integer") from None
        elif key == "gen":
            gens.append(value)
        elif key == "name":
            name = value
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if name is not None:
        if degree is not None or gens:
            raise ParseError("'name:' cannot be combined with 'degree:'/'gen:'")
        return from_catalog(name)
    if degree is None:
        raise ParseError("missing 'degree:' line")
    if degree < 1:
        raise ParseError("degree must be a positive integer")
    return PermutationGroup(degree, [Permutation.parse(g, degree) for g in gens])


def load_group_file(path: str | Path) -> PermutationGroup:
    return parse_group_text(Path(path).read_text(encoding="utf-8"))


def format_group(G: PermutationGroup) -> str:
    lines = [f"degree: {G.degree}"] + [f"gen: {g}" for g in G.generators]
    return "\n".join(lines) + "\n"

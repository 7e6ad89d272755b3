"""``isocert`` command line.

Exit status: 0 success / Certified / RankOne / true, 2 NotQdFree / RankTooHigh / false,
3 SearchInconclusive, 1 input or scale errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .catalog import CATALOG_IDS, from_catalog, load_group_file
from .certifier import (
    CERTIFIED,
    NOT_QD_FREE,
    RANK_ONE,
    RANK_TOO_HIGH,
    SEARCH_INCONCLUSIVE,
    Certificate,
    certify,
    group_from_certificate,
    verify_certificate,
)
from .chartab import character_table
from .effective import EffectiveSearchSpec, search_p_effective
from .errors import IsocertError
from .family import assemble_family, compatible_family
from .permgroup import DEFAULT_MAX_ORDER, PermutationGroup, is_prime, prime_factors
from .pstructure import is_qd_free, rank_profile
from .spheremodel import dimension_function

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_INCONCLUSIVE = 3

VERDICT_STATUS = {
    CERTIFIED: EXIT_OK,
    RANK_ONE: EXIT_OK,
    NOT_QD_FREE: EXIT_NEGATIVE,
    RANK_TOO_HIGH: EXIT_NEGATIVE,
    SEARCH_INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _InputError(IsocertError):
    pass


def _group(args, required: bool = True) -> Optional[PermutationGroup]:
    if args.name:
        return from_catalog(args.name)
    if args.file:
        return load_group_file(args.file)
    if required:
        raise _InputError("give a group with --name or --file")
    return None


def _prime(args, G: PermutationGroup) -> int:
    p = args.p
    if p is None:
        raise _InputError("this command needs -p <prime>")
    if not is_prime(p) or G.order() % p:
        raise _InputError(f"p = {p} is not a prime divisor of |G| = {G.order()}")
    return p


def _emit(args, text: str) -> None:
    print(text)
    if getattr(args, "o", None):
        Path(args.o).write_text(text + "\n", encoding="utf-8")


def cmd_certify(args) -> int:
    G = _group(args)
    bounds = {}
    if args.bound is not None:
        primes = [_prime(args, G)] if args.p is not None else prime_factors(G.order())
        bounds = {p: args.bound for p in primes}
    cert = certify(G, bounds=bounds, k=args.k, max_order=args.max_order)
    print(cert.summary())
    if args.o:
        Path(args.o).write_text(cert.serialize(), encoding="utf-8")
        print(f"certificate written to {args.o}")
    return VERDICT_STATUS[cert.verdict]


def cmd_rank(args) -> int:
    G = _group(args)
    G.check_scale(args.max_order)
    rp = rank_profile(G)
    lines = [f"order {G.order()}", f"rank {rp.rank}"]
    for p, r in rp.per_prime.items():
        gens = ", ".join(map(str, rp.witnesses[p].generators))
        lines.append(f"p = {p}: rank {r}, witness <{gens}>")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_qdfree(args) -> int:
    G = _group(args)
    G.check_scale(args.max_order)
    free, report = is_qd_free(G, args.max_order)
    lines = [f"Qd(p)-free: {'true' if free else 'false'}"]
    for p, rep in report.items():
        line = f"p = {p}: {rep.status}"
        w = rep.witness
        if w is not None:
            kg = ", ".join(map(str, w.K.generators)) or "1"
            line += (f"; K = <{kg}> (order {w.K.order()}), |N_G(K)| = {w.normalizer_order}, "
                     f"Qd({p}) generated by {', '.join(map(str, w.embedded))} in N_G(K)/K")
        lines.append(line)
    _emit(args, "\n".join(lines))
    return EXIT_OK if free else EXIT_NEGATIVE


def cmd_chartab(args) -> int:
    G = _group(args)
    table = character_table(G, args.max_order)
    lines = [f"order {G.order()}, exponent {table.exponent}, {len(table.irreducibles)} classes"]
    for i, (rep, size) in enumerate(G.conjugacy_classes()):
        lines.append(f"class {i}: rep {rep}, size {size}, element order {rep.order()}")
    for i, chi in enumerate(table.irreducibles):
        lines.append(f"chi_{i}: " + " ".join(chi.serialize()))
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_fusion(args) -> int:
    G = _group(args)
    G.check_scale(args.max_order)
    p = _prime(args, G)
    spec = EffectiveSearchSpec(G, p)
    fp = spec.fusion
    classes = fp.sylow_group.conjugacy_classes()
    lines = [f"Sylow {p}-subgroup <{', '.join(map(str, spec.sylow.generators))}> of order {spec.sylow.order()}"]
    for b in fp.blocks:
        lines.append("block: " + " ".join(str(classes[c][0]) for c in b))
    _emit(args, "\n".join(lines))
    return EXIT_OK


def _search_line(res, spec: EffectiveSearchSpec) -> str:
    if res is None:
        return f"p = {spec.p}: no p-effective character of dimension <= {spec.bound}"
    return (f"p = {spec.p}: dimension {res.dimension}, multiplicities {res.multiplicities}, "
            f"values {' '.join(res.character.serialize())}")


def cmd_search(args) -> int:
    G = _group(args)
    G.check_scale(args.max_order)
    p = _prime(args, G)
    spec = EffectiveSearchSpec(G, p, args.bound)
    res = search_p_effective(spec)
    _emit(args, _search_line(res, spec))
    return EXIT_OK if res is not None else EXIT_INCONCLUSIVE


def cmd_dimfun(args) -> int:
    G = _group(args)
    G.check_scale(args.max_order)
    found = {}
    lines = []
    for p in prime_factors(G.order()):
        spec = EffectiveSearchSpec(G, p, args.bound)
        found[p] = search_p_effective(spec)
        lines.append(_search_line(found[p], spec))
    if any(v is None for v in found.values()):
        _emit(args, "\n".join(lines))
        return EXIT_INCONCLUSIVE
    cf = compatible_family(assemble_family(G, found))
    df = dimension_function(cf, args.k)
    lines.append(f"n = {cf.n}, k = {args.k}")
    for rec in df.serialize():
        gens = ", ".join(rec["generators"]) or "1"
        entry = "empty" if rec["entry"] == "empty" else f"S^{rec['entry']}"
        lines.append(f"H = <{gens}> order {rec['order']} rank {rec['rank']}: {entry}")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = Certificate.parse(Path(args.cert).read_text(encoding="utf-8"))
    G = _group(args, required=False) or group_from_certificate(cert)
    ok, why = verify_certificate(cert, G, explain=True)
    print(f"verdict {cert.verdict}; certificate {'valid' if ok else 'INVALID'}: {why}")
    return EXIT_OK if ok else EXIT_NEGATIVE


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors: exit 1, keeping 2 for negative verdicts
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isocert", description="Certify rank one prime power isotropy sphere actions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, helptext: str, group_required: bool = True):
        sp = sub.add_parser(name, help=helptext)
        src = sp.add_mutually_exclusive_group(required=group_required)
        src.add_argument("--name", help=f"catalog id ({', '.join(CATALOG_IDS)})")
        src.add_argument("--file", help="group file with 'degree:' and 'gen:' lines")
        sp.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, dest="max_order")
        sp.add_argument("-o", metavar="PATH", help="write output here")
        sp.set_defaults(func=fn)
        return sp

    sp = add("certify", cmd_certify, "run the full pipeline")
    sp.add_argument("-p", type=int, help="apply --bound to this prime only")
    sp.add_argument("--bound", type=int)
    sp.add_argument("-k", type=int, default=1)
    add("rank", cmd_rank, "rank profile with witnesses")
    add("qdfree", cmd_qdfree, "Qd(p)-freeness with witnesses")
    add("chartab", cmd_chartab, "character table")
    sp = add("fusion", cmd_fusion, "fusion blocks of Sylow classes")
    sp.add_argument("-p", type=int)
    sp = add("search-effective", cmd_search, "smallest p-effective character")
    sp.add_argument("-p", type=int)
    sp.add_argument("--bound", type=int)
    sp = add("dimfun", cmd_dimfun, "dimension function of the assembled family")
    sp.add_argument("--bound", type=int)
    sp.add_argument("-k", type=int, default=1)
    sp = add("verify", cmd_verify, "re-check a certificate", group_required=False)
    sp.add_argument("cert", help="certificate file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 1) < 1:
        print("error: -k must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (IsocertError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

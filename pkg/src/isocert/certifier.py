"""End-to-end pipeline: rank, Qd(p)-freeness, effective characters, family,
and the fixed-point checks of the linear sphere model, packed into a
certificate that can be re-verified from its own data."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .chartab import ClassFunction, character_table, value_sum
from .cyclotomic import CyclotomicNumber, parse_cyclotomic
from .effective import (
    EffectiveSearchSpec,
    brute_force_fusion_check,
    fusion_partition,
    is_fusion_stable,
    maximal_rank_elementaries,
    search_p_effective,
)
from .errors import IsocertError, ParseError, ScaleLimitError
from .family import (
    CompatibleFamily,
    FamilyAssignment,
    SylowFamily,
    assemble_family,
    compatible_family,
    prime_power_subgroups,
    verify_compatibility,
)
from .perm import Permutation
from .permgroup import (
    DEFAULT_MAX_ORDER,
    PermutationGroup,
    SubgroupHandle,
    factorize,
    normalizer,
    section_group,
    verify_isomorphism,
)
from .pstructure import _rank_of, is_qd_free, p_part, qd_group, rank_profile
from .spheremodel import (
    dimension_function,
    euler_fixed_check,
    rational_euler_class,
    verify_rank_one_isotropy,
)

FORMAT_TAG = "isocert-v1"

RANK_ONE = "RankOne"
RANK_TOO_HIGH = "RankTooHigh"
NOT_QD_FREE = "NotQdFree"
CERTIFIED = "Certified"
SEARCH_INCONCLUSIVE = "SearchInconclusive"
VERDICTS = (RANK_ONE, RANK_TOO_HIGH, NOT_QD_FREE, CERTIFIED, SEARCH_INCONCLUSIVE)

NOTE_RANK_ONE = ("rank one: every rank one finite group can act freely on a finite complex "
                 "homotopy equivalent to a sphere")
NOTE_RANK_HIGH = ("rank at least three: Smith theory forces rk(G) <= 2 for a finite G-CW-complex "
                  "homotopy equivalent to a sphere with rank one prime power isotropy")
NOTE_K = "sphere dimension is 2*k*n - 1; k is a free parameter, default 1"


@dataclass
class Certificate:
    group: dict
    options: dict
    rank_profile: dict
    verdict: str
    notes: list = field(default_factory=list)
    qd_report: dict = field(default_factory=dict)
    effective: dict = field(default_factory=dict)
    family: Optional[dict] = None
    compatible_family: Optional[list] = None
    dimension_function: Optional[dict] = None
    sphere_dimension: Optional[int] = None
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "options": self.options,
            "rank_profile": self.rank_profile,
            "verdict": self.verdict,
            "notes": self.notes,
            "qd_report": self.qd_report,
            "effective": self.effective,
            "family": self.family,
            "compatible_family": self.compatible_family,
            "dimension_function": self.dimension_function,
            "sphere_dimension": self.sphere_dimension,
            "flags": self.flags,
        }

    def serialize(self) -> str:
        body = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        return f"{FORMAT_TAG}\n{body}\n"

    @classmethod
    def parse(cls, text: str) -> Certificate:
        head, _, body = text.partition("\n")
        if head.strip() != FORMAT_TAG:
            raise ParseError(f"not an {FORMAT_TAG} certificate (first line {head!r})")
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ParseError(f"certificate body is not valid JSON: {exc}") from None
        try:
            cert = cls(**data)
        except TypeError as exc:
            raise ParseError(f"certificate has unexpected structure: {exc}") from None
        if cert.verdict not in VERDICTS:
            raise ParseError(f"unknown verdict {cert.verdict!r}")
        return cert

    def summary(self) -> str:
        g = self.group
        lines = [f"group: {g.get('name') or '?'} (order {g['order']}, degree {g['degree']})",
                 f"rank: {self.rank_profile['rank']} {self.rank_profile['per_prime']}",
                 f"verdict: {self.verdict}"]
        if self.sphere_dimension is not None:
            lines.append(f"n = {self.family['n']}, k = {self.options['k']}, sphere S^{self.sphere_dimension}")
            iso = [e["order"] for e in self.dimension_function["entries"] if e["entry"] != "empty"]
            lines.append(f"isotropy subgroup orders: {iso}")
        for p, rep in sorted(self.qd_report.items(), key=lambda kv: int(kv[0])):
            line = f"Qd({p}): {rep['status']}"
            if rep.get("witness"):
                w = rep["witness"]
                line += f", K = <{', '.join(w['K']) or '1'}> of order {w['K_order']}"
            lines.append(line)
        for p, eff in sorted(self.effective.items(), key=lambda kv: int(kv[0])):
            if eff.get("found"):
                lines.append(f"p = {p}: effective character of dimension {eff['dimension']}, "
                             f"multiplicities {tuple(eff['multiplicities'])}")
            else:
                lines.append(f"p = {p}: no effective character up to dimension {eff['bound']}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


# --------------------------------------------------------------------------
# serialization helpers

def _gens(H: SubgroupHandle) -> list[str]:
    return [str(g) for g in H.generators]


def _class_reps(Pg: PermutationGroup) -> list[str]:
    return [str(rep) for rep, _ in Pg.conjugacy_classes()]


def _group_meta(G: PermutationGroup) -> dict:
    return {"name": G.name, "degree": G.degree, "order": G.order(), "generators": [str(g) for g in G.generators]}


def _rank_dict(G: PermutationGroup) -> dict:
    rp = rank_profile(G)
    return {
        "rank": rp.rank,
        "per_prime": {str(p): r for p, r in rp.per_prime.items()},
        "witnesses": {str(p): _gens(E) for p, E in rp.witnesses.items()},
    }


def _qd_dict(report) -> dict:
    out = {}
    for p, rep in report.items():
        entry: dict[str, Any] = {"status": rep.status}
        w = rep.witness
        if w is not None:
            entry["witness"] = {
                "K": _gens(w.K),
                "K_order": w.K.order(),
                "normalizer_order": w.normalizer_order,
                "section_degree": w.section.degree,
                "section_order": w.section.order(),
                "embedded": [str(g) for g in w.embedded],
                "isomorphism": [[str(a), str(b)] for a, b in w.isomorphism.items()],
            }
        out[str(p)] = entry
    return out


def _effective_dict(spec: EffectiveSearchSpec, found) -> dict:
    base = {
        "sylow": _gens(spec.sylow),
        "sylow_order": spec.sylow.order(),
        "bound": spec.bound,
        "max_rank": spec.target_rank,
        "max_rank_subgroups": [_gens(E) for E in spec.max_rank_subgroups],
        "fusion_blocks": spec.fusion.blocks,
    }
    if found is None:
        base["found"] = False
        return base
    base.update({
        "found": True,
        "dimension": found.dimension,
        "multiplicities": list(found.multiplicities),
        "classes": _class_reps(spec.fusion.sylow_group),
        "values": found.character.serialize(),
    })
    return base


def _family_dict(fam: SylowFamily, dims: Mapping[int, int]) -> dict:
    return {
        "n": fam.n,
        "per_prime": {
            str(p): {"scale": fam.n // dims[p], "values": chi.serialize()}
            for p, (_, chi) in fam.entries.items()
        },
    }


def _compatible_list(cf: CompatibleFamily) -> list:
    return [
        {
            "id": i,
            "generators": _gens(a.subgroup),
            "order": a.subgroup.order(),
            "prime": a.prime,
            "conjugator": str(a.conjugator),
            "classes": _class_reps(a.character.group),
            "values": a.character.serialize(),
        }
        for i, a in enumerate(cf.assignments)
    ]


def _euler_dict(report) -> dict:
    return {
        "prime_power": [[g, d, chi] for g, d, chi in report.prime_power],
        "composite": [[g, [[p, d] for p, d in parts]] for g, parts in report.composite],
    }


# --------------------------------------------------------------------------
# pipeline

def _staged(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ScaleLimitError as exc:
        if exc.stage is None:
            exc.stage = stage
        raise


def certify(G: PermutationGroup, bounds: Optional[Mapping[int, int]] = None, k: int = 1,
            max_order: int = DEFAULT_MAX_ORDER) -> Certificate:
    """Run the whole pipeline on G and return a certificate.

    ``bounds`` maps primes to dimension bounds for the effective search
    (default: the order of the Sylow subgroup).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    bounds = dict(bounds or {})
    _staged("input", G.check_scale, max_order)
    primes = [p for p, _ in factorize(G.order())]
    bad = [p for p in bounds if p not in primes]
    if bad:
        raise ValueError(f"bounds given for primes {bad} not dividing |G| = {G.order()}")
    options = {"k": k, "max_order": max_order, "bounds": {str(p): b for p, b in sorted(bounds.items())}}
    rank = _staged("rank", _rank_dict, G)
    cert = Certificate(_group_meta(G), options, rank, RANK_ONE)
    r = rank["rank"]
    if r == 0:
        cert.notes.append(NOTE_RANK_ONE)
        return cert
    if r >= 3:
        cert.verdict = RANK_TOO_HIGH
        cert.notes.append(NOTE_RANK_HIGH)
        return cert

    free, report = _staged("qdfree", is_qd_free, G, max_order)
    cert.qd_report = _qd_dict(report)
    if not free:
        cert.verdict = NOT_QD_FREE
        return cert

    found = {}
    for p in primes:
        spec = EffectiveSearchSpec(G, p, bounds.get(p))
        res = _staged(f"search-effective p={p}", search_p_effective, spec)
        cert.effective[str(p)] = _effective_dict(spec, res)
        found[p] = res
    if any(v is None for v in found.values()):
        if r == 1:
            cert.verdict = RANK_ONE
            cert.notes.append(NOTE_RANK_ONE)
            cert.notes.append("effective search inconclusive within the bound; family not built")
        else:
            cert.verdict = SEARCH_INCONCLUSIVE
            missing = [p for p, v in found.items() if v is None]
            cert.notes.append(f"no effective character found for p in {missing} within the bound")
        return cert

    fam = _staged("family", assemble_family, G, found)
    cf = _staged("family", compatible_family, fam)
    compat, failure = verify_compatibility(cf)
    df = dimension_function(cf, k)
    rank_ok, offender = verify_rank_one_isotropy(cf)
    euler = euler_fixed_check(cf, k)
    rational_ok = all(
        all(v.is_zero() for v in rational_euler_class(fam.character(p), k).values) for p in primes
    )
    fusion_ok = all(brute_force_fusion_check(found[p].character, G, found[p].sylow) for p in primes)

    cert.family = _family_dict(fam, {p: found[p].dimension for p in primes})
    cert.compatible_family = _compatible_list(cf)
    cert.dimension_function = {"k": k, "entries": df.serialize(), "euler": _euler_dict(euler)}
    cert.sphere_dimension = 2 * k * fam.n - 1
    cert.flags = {
        "compatibility": compat,
        "rank_one_isotropy": rank_ok,
        "euler": euler.ok,
        "rational_euler": rational_ok,
        "fusion": fusion_ok,
    }
    if not all(cert.flags.values()):
        detail = failure or offender or euler
        raise IsocertError(f"internal consistency check failed for an effective family: {detail}")
    cert.verdict = CERTIFIED
    cert.notes.append(NOTE_K)
    if r == 1:
        cert.notes.append(NOTE_RANK_ONE)
    return cert


# --------------------------------------------------------------------------
# verification

class _Reject(Exception):
    pass


def _require(cond: bool, why: str) -> None:
    if not cond:
        raise _Reject(why)


def _perm(text: str, degree: int) -> Permutation:
    return Permutation.parse(text, degree)


def _subgroup(G: PermutationGroup, gens: list[str]) -> SubgroupHandle:
    elems = [_perm(g, G.degree) for g in gens]
    _require(all(g in G for g in elems), "subgroup generator outside G")
    return G.subgroup(elems)


def _class_function(Hg: PermutationGroup, reps: list[str], values: list[str], e: int) -> ClassFunction:
    """Order listed (rep, value) pairs along ``Hg.classes`` and check they cover every class once."""
    _require(len(reps) == len(values) == len(Hg.classes), "class function has the wrong number of classes")
    by_class: dict[int, CyclotomicNumber] = {}
    for rep, val in zip(reps, values):
        c = Hg.class_of[Hg.index(_perm(rep, Hg.degree))]
        _require(c not in by_class, "two listed representatives in one class")
        by_class[c] = parse_cyclotomic(val, e)
    vals = [by_class[c] for c in range(len(Hg.classes))]
    ee = math.lcm(*(v.e for v in vals))
    return ClassFunction(Hg, tuple(v.lift(ee) for v in vals))


def _check_group(cert: Certificate, G: PermutationGroup) -> None:
    g = cert.group
    _require(g["order"] == G.order() and g["degree"] == G.degree, "group order or degree mismatch")
    listed = PermutationGroup(G.degree, [_perm(s, G.degree) for s in g["generators"]])
    _require(listed.order() == G.order() and all(x in G for x in listed.generators),
             "certificate generators do not generate G")


def _check_rank(cert: Certificate, G: PermutationGroup) -> None:
    rp = cert.rank_profile
    _require(rp == _rank_dict(G), "rank profile does not reproduce")
    for p, gens in rp["witnesses"].items():
        E = _subgroup(G, gens)
        _require(E.is_elementary_abelian(int(p)), f"rank witness at p={p} is not elementary abelian")
        _require(_rank_of(E.order(), int(p)) == rp["per_prime"][p], f"rank witness at p={p} has the wrong rank")


def _check_qd(cert: Certificate, G: PermutationGroup, max_order: int) -> None:
    for p_s, rep in cert.qd_report.items():
        w = rep.get("witness")
        if rep["status"] != "involved":
            _require(w is None, "witness attached to a non-involved prime")
            continue
        _require(w is not None, "involved prime without a witness")
        p = int(p_s)
        K = _subgroup(G, w["K"])
        _require(K.order() == w["K_order"] and math.gcd(K.order(), p) == 1, "K is not a p'-subgroup")
        N = normalizer(G, K)
        _require(N.order() == w["normalizer_order"], "normalizer order mismatch")
        S = section_group(G, K)
        _require(S.degree == w["section_degree"] and S.order() == w["section_order"], "section mismatch")
        H = S.subgroup([_perm(s, S.degree) for s in w["embedded"]])
        Hg = S if H.order() == S.order() else H.as_group()
        qd = qd_group(p, max_order)
        iso = {_perm(a, qd.degree): _perm(b, S.degree) for a, b in w["isomorphism"]}
        _require(verify_isomorphism(qd, Hg, iso), "isomorphism witness does not verify")


def _check_effective(cert: Certificate, G: PermutationGroup) -> dict[int, tuple[SubgroupHandle, ClassFunction, int]]:
    out = {}
    for p_s, eff in cert.effective.items():
        p = int(p_s)
        P = _subgroup(G, eff["sylow"])
        _require(P.order() == eff["sylow_order"] == p_part(G.order(), p),
                 f"listed subgroup at p={p} is not a Sylow subgroup")
        if not eff["found"]:
            continue
        Pg = P.as_group()
        table = character_table(Pg)
        chi = _class_function(Pg, eff["classes"], eff["values"], table.exponent)
        m = eff["multiplicities"]
        _require(all(isinstance(x, int) and x >= 0 for x in m), "multiplicities must be nonnegative integers")
        _require(list(table.decompose(chi)) == m, f"p={p}: values do not match the multiplicity vector")
        _require(chi.degree == eff["dimension"] and chi.degree > 0, f"p={p}: dimension mismatch")
        _require(brute_force_fusion_check(chi, G, P), f"p={p}: character not fusion-stable")
        rank, maxrank = maximal_rank_elementaries(G, P, p)
        _require(rank == eff["max_rank"], f"p={p}: maximal rank mismatch")
        for E in maxrank:
            _require(value_sum(chi, E).is_zero(), f"p={p}: fixed vectors on a maximal-rank subgroup")
        out[p] = (P, chi, chi.degree)
    return out


def _check_family(cert: Certificate, G: PermutationGroup, eff: dict) -> None:
    fam_d = cert.family
    dims = {p: d for p, (_, _, d) in eff.items()}
    n = math.lcm(1, *dims.values())
    _require(fam_d["n"] == n, "family dimension is not the lcm of the effective dimensions")
    entries = {}
    for p, (P, chi, d) in eff.items():
        fd = fam_d["per_prime"][str(p)]
        _require(fd["scale"] == n // d, f"p={p}: wrong scale factor")
        scaled = chi.scale(n // d)
        listed = [parse_cyclotomic(v, scaled.e) for v in fd["values"]]
        _require(len(listed) == len(scaled.values) and all(a == b for a, b in zip(listed, scaled.values)),
                 f"p={p}: family values are not the scaled effective character")
        _require(is_fusion_stable(scaled, fusion_partition(G, p, P)), f"p={p}: scaled character not fusion-stable")
        entries[p] = (P, scaled)
    fam = SylowFamily(G, entries, n)

    reps = prime_power_subgroups(G)
    listed = cert.compatible_family
    _require(len(listed) == len(reps), "compatible family does not cover every prime-power subgroup class")
    assignments = []
    seen_classes = set()
    for rec, H0 in zip(listed, reps):
        H = _subgroup(G, rec["generators"])
        _require(H.elements == H0.elements, "compatible family representatives differ from the enumeration")
        seen_classes.add(H.elements)
        Hg = H.as_group()
        e = math.lcm(*(chi.e for _, chi in entries.values()))
        V = _class_function(Hg, rec["classes"], rec["values"], e)
        _require(V.degree == n, "V_H does not have dimension n")
        g = _perm(rec["conjugator"], G.degree)
        _require(g in G, "conjugator outside G")
        prime = rec["prime"]
        if H.order() > 1:
            P, chi = entries[prime]
            for x in H.elements:
                y = g * G.elements[x] * ~g
                _require(G.index(y) in P.elements, "conjugator does not move H into the Sylow subgroup")
                _require(V(G.elements[x]) == chi(y), "V_H is not the transported Sylow character")
        # genuine character of H
        mult = character_table(Hg).decompose(V)
        _require(all(q.denominator == 1 and q >= 0 for q in mult), "V_H is not a genuine character")
        assignments.append(FamilyAssignment(H, prime, V, g))
    cf = CompatibleFamily(fam, assignments)

    k = cert.options["k"]
    flags = cert.flags
    ok, _ = verify_compatibility(cf)
    _require(ok and flags["compatibility"], "compatibility does not reproduce")
    df = dimension_function(cf, k)
    _require(cert.dimension_function["k"] == k and cert.dimension_function["entries"] == df.serialize(),
             "dimension function does not reproduce")
    ok, _ = verify_rank_one_isotropy(cf)
    _require(ok and flags["rank_one_isotropy"], "rank-one isotropy does not reproduce")
    euler = euler_fixed_check(cf, k)
    _require(euler.ok and flags["euler"], "Euler check does not reproduce")
    _require(cert.dimension_function["euler"] == _euler_dict(euler), "Euler report does not reproduce")
    rational = all(all(v.is_zero() for v in rational_euler_class(chi, k).values) for _, chi in entries.values())
    _require(rational and flags["rational_euler"], "rational Euler class does not vanish")
    _require(flags["fusion"] is True, "fusion flag not set")
    _require(cert.sphere_dimension == 2 * k * n - 1, "sphere dimension mismatch")


def verify_certificate(cert: Certificate, G: PermutationGroup, explain: bool = False):
    """Re-check a certificate against G from its own data, without re-running searches.

    Returns a bool, or ``(bool, reason)`` when ``explain`` is set.
    """
    try:
        max_order = cert.options.get("max_order", DEFAULT_MAX_ORDER)
        _check_group(cert, G)
        _check_rank(cert, G)
        r = cert.rank_profile["rank"]
        v = cert.verdict
        if r == 0 or r >= 3:
            _require(v == (RANK_ONE if r == 0 else RANK_TOO_HIGH), "verdict inconsistent with rank")
            _require(not cert.effective and cert.family is None, "unexpected pipeline data")
        else:
            _check_qd(cert, G, max_order)
            involved = any(rep["status"] == "involved" for rep in cert.qd_report.values())
            _require(set(cert.qd_report) == {str(p) for p, _ in factorize(G.order()) if p != 2},
                     "Qd report does not cover every odd prime")
            if involved:
                _require(v == NOT_QD_FREE, "involvement witness but verdict is not NotQdFree")
                _require(not cert.effective, "unexpected effective data")
            else:
                _require(v != NOT_QD_FREE, "NotQdFree without a witness")
                eff = _check_effective(cert, G)
                primes = [p for p, _ in factorize(G.order())]
                _require(sorted(int(p) for p in cert.effective) == primes, "effective data missing a prime")
                complete = len(eff) == len(primes)
                if complete:
                    _require(v == CERTIFIED, "all effective characters present but not Certified")
                    _check_family(cert, G, eff)
                else:
                    _require(v == (RANK_ONE if r == 1 else SEARCH_INCONCLUSIVE), "verdict inconsistent with search")
                    _require(cert.family is None, "family without all effective characters")
    except _Reject as exc:
        return (False, str(exc)) if explain else False
    except (KeyError, TypeError, ValueError, IsocertError) as exc:
        msg = f"malformed certificate: {type(exc).__name__}: {exc}"
        return (False, msg) if explain else False
    return (True, "ok") if explain else True


def group_from_certificate(cert: Certificate) -> PermutationGroup:
    g = cert.group
    return PermutationGroup(g["degree"], [_perm(s, g["degree"]) for s in g["generators"]], name=g.get("name"))

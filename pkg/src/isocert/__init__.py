"""Certificates for finite group actions on spheres with rank one prime power isotropy."""

from .catalog import from_catalog, load_group_file, parse_group_text
from .certifier import Certificate, certify, verify_certificate
from .chartab import ClassFunction, character_table
from .effective import EffectiveSearchSpec, search_p_effective
from .errors import IsocertError, MembershipError, ParseError, ScaleLimitError
from .perm import Permutation
from .permgroup import PermutationGroup, SubgroupHandle
from .pstructure import is_qd_free, rank_profile

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ClassFunction",
    "EffectiveSearchSpec",
    "IsocertError",
    "MembershipError",
    "ParseError",
    "Permutation",
    "PermutationGroup",
    "ScaleLimitError",
    "SubgroupHandle",
    "certify",
    "character_table",
    "from_catalog",
    "is_qd_free",
    "load_group_file",
    "parse_group_text",
    "rank_profile",
    "search_p_effective",
    "verify_certificate",
]

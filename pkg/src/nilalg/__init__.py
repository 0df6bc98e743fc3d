"""Exact tools for nilpotent algebras: cocycles, cohomology, central extensions,
automorphism actions, isomorphism tests and a catalog of small algebras."""
from .algebra import Algebra, Fingerprint
from .cohomology import BilinearForm, Cohomology, cocycle_space, coboundary_space, h2, parse_form
from .errors import NilalgError
from .extension import ExtensionSpec, extend, is_nonsplit, recover_parent
from .identities import IdentityTemplate, builtin, holds, parse_template
from .iso import IsoVerdict, decide, fingerprint_separate, search_iso_gfp, verify_witness
from .orbit import act, is_automorphism, verify_action_block
from .scalars import QQ, QQ_I, FieldTag, Scalar, gaussian, parse_field, prime_field, quadratic, rationals

__version__ = "0.1.0"

__all__ = [
    "Algebra", "BilinearForm", "Cohomology", "ExtensionSpec", "FieldTag", "Fingerprint", "IdentityTemplate",
    "IsoVerdict", "NilalgError", "QQ", "QQ_I", "Scalar", "act", "builtin", "cocycle_space", "coboundary_space",
    "decide", "extend", "fingerprint_separate", "gaussian", "h2", "holds", "is_automorphism", "is_nonsplit",
    "parse_field", "parse_form", "parse_template", "prime_field", "quadratic", "rationals", "recover_parent",
    "search_iso_gfp", "verify_action_block", "verify_witness",
]

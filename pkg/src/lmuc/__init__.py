"""Multiple unicast over fixed linear network codes.

Exact finite-field linear algebra, network-to-channel compilation,
unambiguous external codes, and m-shot achievable rate regions.
"""

from .gf import FieldSpec, Mat, canonical_field, mat_kernel_basis, mat_rank, span
from .channel import (
    Lmuc,
    MCode,
    RatePoint,
    combine,
    decode,
    fan_out,
    interference_set,
    is_unambiguous,
    simulate,
)
from .netgraph import Network, NetworkCode, compile_network, realize, validate_network
from .region import (
    BoundSet,
    RegionReport,
    benchmark_lmuc,
    build_even_char_code,
    char_experiment,
    n1_capacity,
    outer_bound,
    search_region,
    time_share_closure,
)

__all__ = [
    "FieldSpec",
    "Mat",
    "canonical_field",
    "mat_kernel_basis",
    "mat_rank",
    "span",
    "Lmuc",
    "MCode",
    "RatePoint",
    "combine",
    "decode",
    "fan_out",
    "interference_set",
    "is_unambiguous",
    "simulate",
    "Network",
    "NetworkCode",
    "compile_network",
    "realize",
    "validate_network",
    "BoundSet",
    "RegionReport",
    "benchmark_lmuc",
    "build_even_char_code",
    "char_experiment",
    "n1_capacity",
    "outer_bound",
    "search_region",
    "time_share_closure",
]

__version__ = "0.1.0"

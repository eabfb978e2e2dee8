"""Exact tensor-rank computations for finite semifields via spread sets."""

from . import algebra, atlas, codec, codes, equivalence, gf, search  # noqa: F401
from .algebra import MatSpace, SpreadSet, field_construct, gtf_construct  # noqa: F401
from .equivalence import are_equivalent, automorphism_group  # noqa: F401
from .search import disprove_rank, spread_sets_by_rank, tensor_rank  # noqa: F401

__version__ = "0.1.0"

"""Orthonormal bases whose states all share one Schmidt number, and their certification."""
from .construct import ConstructionRequest, generate
from .exceptions import (
    DegenerateCoefficientError,
    DimensionOrderError,
    DispatchError,
    EbkError,
    InvalidDimensionError,
    InvalidInputError,
    NormalizationError,
    TilingNotFoundError,
    UnsupportedConstructionError,
)
from .isometry import Isometry, dft, od, theorem3_predicate, ud
from .model import BipartiteState, EntangledBasis, schmidt
from .multipartite import MultipartiteBasis, MultipartiteState, generate_npartite, ghz_check, lift
from .tiling import block_decompose, l_pattern_basis, tile_corner
from .verify import VerificationReport, verify_basis, verify_multipartite
from .weyl import meb

__version__ = "0.1.0"

__all__ = [
    "BipartiteState",
    "ConstructionRequest",
    "DegenerateCoefficientError",
    "DimensionOrderError",
    "DispatchError",
    "EbkError",
    "EntangledBasis",
    "InvalidDimensionError",
    "InvalidInputError",
    "Isometry",
    "MultipartiteBasis",
    "MultipartiteState",
    "NormalizationError",
    "TilingNotFoundError",
    "UnsupportedConstructionError",
    "VerificationReport",
    "block_decompose",
    "dft",
    "generate",
    "generate_npartite",
    "ghz_check",
    "l_pattern_basis",
    "lift",
    "meb",
    "od",
    "schmidt",
    "theorem3_predicate",
    "tile_corner",
    "ud",
    "verify_basis",
    "verify_multipartite",
]

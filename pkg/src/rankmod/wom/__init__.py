"""Write-once-memory ingredient codes."""

from .adapter import ConstantWeightAdapter, StrongAsWeak, flip_word
from .checksum import ChecksumWomCode
from .gf2n import Gf2nElement, gf2n_mul, hash_eval, index_to_pair, pair_to_index
from .hashwom import AsymptoticHashParams, HashWomCode, HashWomParams
from .table import (EXAMPLE_CODE, EXAMPLE_TABLE, TableWomCode, example_wom_decode,
                    example_wom_encode)

__all__ = [
    "AsymptoticHashParams", "ChecksumWomCode", "ConstantWeightAdapter", "EXAMPLE_CODE",
    "EXAMPLE_TABLE", "Gf2nElement", "HashWomCode", "HashWomParams", "StrongAsWeak",
    "TableWomCode", "example_wom_decode", "example_wom_encode", "flip_word", "gf2n_mul",
    "hash_eval", "index_to_pair", "pair_to_index",
]

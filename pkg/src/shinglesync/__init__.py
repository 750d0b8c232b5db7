"""Streaming unique-decodability testing and shingle-based string reconciliation."""

from .alphabet import DEFAULT_DELIMITER, Alphabet, validate_word
from .debruijn import DeBruijnGraph
from .decider import MergeOutcome, Reason, TokenDecider, UdDecider, Verdict, is_ud
from .field import P61, FieldSpec
from .oracle import (
    DecodingCount,
    decoding_count,
    find_obstruction,
    interior_equal,
    is_obstruction,
    obstruction_language_count,
    rotation_pair,
    transposition_pair,
)
from .setrecon import (
    Delta,
    EvalBundle,
    RatelessDecoder,
    RatelessSource,
    ShingleCodec,
    char_poly_evals,
    reconcile_fixed,
)
from .shinglelen import lambert_w, recommend_shingle_len, shingle_len_bound
from .shingles import (
    ShingleMultiset,
    bigram_map,
    delimited,
    fold,
    interior_qgrams,
    noconcat,
    overlaps,
    qgram_map,
    shingle_sequence,
    shingling,
)
from .stringrecon import (
    MODE_FIXED,
    MODE_RATELESS,
    MergeRecord,
    ReconConfig,
    SessionReport,
    apply_merge_records,
    merge_until_ud,
    random_edits,
    run_protocol,
    seams_to_records,
)
from .transport import Frame, FrameKind, Listener, channel_pair, connect

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "DEFAULT_DELIMITER",
    "DeBruijnGraph",
    "DecodingCount",
    "Delta",
    "EvalBundle",
    "FieldSpec",
    "Frame",
    "FrameKind",
    "Listener",
    "MODE_FIXED",
    "MODE_RATELESS",
    "MergeOutcome",
    "MergeRecord",
    "P61",
    "RatelessDecoder",
    "RatelessSource",
    "Reason",
    "ReconConfig",
    "SessionReport",
    "ShingleCodec",
    "ShingleMultiset",
    "TokenDecider",
    "UdDecider",
    "Verdict",
    "apply_merge_records",
    "bigram_map",
    "channel_pair",
    "char_poly_evals",
    "connect",
    "decoding_count",
    "delimited",
    "find_obstruction",
    "fold",
    "interior_equal",
    "interior_qgrams",
    "is_obstruction",
    "is_ud",
    "lambert_w",
    "merge_until_ud",
    "noconcat",
    "obstruction_language_count",
    "overlaps",
    "qgram_map",
    "random_edits",
    "reconcile_fixed",
    "recommend_shingle_len",
    "rotation_pair",
    "run_protocol",
    "seams_to_records",
    "shingle_len_bound",
    "shingle_sequence",
    "shingling",
    "transposition_pair",
    "validate_word",
]

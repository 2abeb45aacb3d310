"""Decode-time-optimal prefix codes for table-driven decoders."""

__version__ = "0.1.0"

from .approx import solve_constant_hierarchy, solve_pseudo_approx
from .codec import (
    EncodedContainer,
    compile_tables,
    decode_stream,
    encode_stream,
    measured_cost,
)
from .errors import (
    CorruptContainer,
    DpfxError,
    EmptyInput,
    Infeasible,
    InvalidShape,
    MalformedTable,
    NoValidTree,
    ParseError,
    SchemeTooShort,
    TableMismatch,
    TooLarge,
    UnknownSymbol,
    WorkLimitExceeded,
)
from .exact import enumerate_decode_values, solve_exact, solve_fixed_block_levels
from .huffman import classic_huffman, huffman_dp
from .ingest import ingest_frequencies, resolve_budget
from .model import (
    BlockingScheme,
    CostReport,
    FrequencyTable,
    PrefixCode,
    TreeShape,
    code_length,
    decode_time,
    decode_time_from_shape,
    len_from_shape,
    parse_blocking_scheme,
    validate_shape,
)
from .oracle import brute_force_optimal, enumerate_shapes
from .tree import build_tree_from_shape

"""Huffman coding with ones-rate balancing and a matcher evaluation harness."""

from .bitio import pack_bits, read_bits, unpack_bits, write_bits
from .codec import (
    CodecArtifact,
    apply_selection,
    best_over_all_arrangements,
    decode,
    encode,
    half_huffman,
)
from .distribution import SymbolDistribution, estimate_distribution
from .estimators import HuffmanCodec
from .huffman import (
    Codebook,
    LengthClass,
    LengthClassPartition,
    build_huffman,
    canonical_codewords,
    codebook_to_csv,
    expected_length,
    huffman_lengths,
    partition_by_length,
    write_codebook_csv,
)
from .matcher import (
    ChannelSpec,
    DyadicFit,
    MatcherCode,
    ParseResult,
    PipelineReport,
    StreamReport,
    average_cost,
    dyadic_search,
    evaluate_stream,
    kl_divergence,
    parse_stream,
    realize_matcher,
    run_pipeline,
)
from .ones import (
    OnesReport,
    count_ones,
    empirical_ones_rate,
    expected_ones_rate,
    normal_quantile,
    ones_report,
    wald_interval,
)
from .rng import SplitMix64, fair_bits, sample_symbols
from .selection import (
    EndpointProfile,
    Selection,
    dump_instance,
    endpoint_profile,
    extreme_arrangements,
    feasibility_search,
    load_instance,
    solve,
    solve_bisection,
    solve_branch_bound,
    solve_exhaustive,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "Codebook",
    "CodecArtifact",
    "DyadicFit",
    "EndpointProfile",
    "HuffmanCodec",
    "LengthClass",
    "LengthClassPartition",
    "MatcherCode",
    "OnesReport",
    "ParseResult",
    "PipelineReport",
    "Selection",
    "SplitMix64",
    "StreamReport",
    "SymbolDistribution",
    "apply_selection",
    "average_cost",
    "best_over_all_arrangements",
    "build_huffman",
    "canonical_codewords",
    "codebook_to_csv",
    "count_ones",
    "decode",
    "dump_instance",
    "dyadic_search",
    "empirical_ones_rate",
    "encode",
    "endpoint_profile",
    "estimate_distribution",
    "evaluate_stream",
    "expected_length",
    "expected_ones_rate",
    "extreme_arrangements",
    "fair_bits",
    "feasibility_search",
    "half_huffman",
    "huffman_lengths",
    "kl_divergence",
    "load_instance",
    "normal_quantile",
    "ones_report",
    "pack_bits",
    "parse_stream",
    "partition_by_length",
    "read_bits",
    "realize_matcher",
    "run_pipeline",
    "sample_symbols",
    "solve",
    "solve_bisection",
    "solve_branch_bound",
    "solve_exhaustive",
    "unpack_bits",
    "wald_interval",
    "write_bits",
    "write_codebook_csv",
]

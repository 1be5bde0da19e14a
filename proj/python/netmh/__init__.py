"""Python access to the netmh pipeline and its statistics."""

from ._netmh import (
    DataError,
    ParseError,
    StageError,
    bh_fdr,
    centrality,
    export_features,
    hypergeom_enrichment,
    run,
    static_gdv,
    synth,
    wilcoxon_rank_sum,
    wilcoxon_signed_rank,
)

__all__ = [
    "DataError",
    "ParseError",
    "StageError",
    "bh_fdr",
    "centrality",
    "export_features",
    "hypergeom_enrichment",
    "run",
    "static_gdv",
    "synth",
    "wilcoxon_rank_sum",
    "wilcoxon_signed_rank",
]

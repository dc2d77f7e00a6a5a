"""Gujarati morphological analyzer: boundary detection, feature tagging and an MDL baseline."""

from ._gumorph import (
    GumorphError,
    MdlSegmenter,
    Record,
    Segmenter,
    Tagger,
    ambiguity_ceiling,
    decode_segmentation,
    derive_boundary,
    format_percent,
    generate,
    grad_check,
    normalize_root,
    read_unimorph,
    reported_is_consistent,
    run_cli,
    split_train_test,
    train_mdl,
    train_segmenter,
    train_tagger,
    write_unimorph,
)

__all__ = [
    "GumorphError",
    "MdlSegmenter",
    "Record",
    "Segmenter",
    "Tagger",
    "ambiguity_ceiling",
    "decode_segmentation",
    "derive_boundary",
    "format_percent",
    "generate",
    "grad_check",
    "normalize_root",
    "read_unimorph",
    "reported_is_consistent",
    "run_cli",
    "split_train_test",
    "train_mdl",
    "train_segmenter",
    "train_tagger",
    "write_unimorph",
]

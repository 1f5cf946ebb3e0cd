"""Turn tabular data and a chart spec into a classical-style MIDI score."""

from ._melodify import (
    MelodifyError,
    Score,
    analyze,
    compile,
    compute_density,
    compute_variance,
    encode_vlq,
    least_squares_slope,
    parse_smf,
    quantize_pitch,
    segment_trends,
    tracklist,
)

__all__ = [
    "MelodifyError",
    "Score",
    "analyze",
    "compile",
    "compute_density",
    "compute_variance",
    "encode_vlq",
    "least_squares_slope",
    "parse_smf",
    "quantize_pitch",
    "segment_trends",
    "tracklist",
]

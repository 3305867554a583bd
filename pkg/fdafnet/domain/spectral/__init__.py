from .overlap_save import FrameBuffer, block_signal, frame_signal, overlap_save_convolve, zero_pad_block
from .transforms import (
    COMPLEX_DTYPE,
    REAL_DTYPE,
    analyze,
    as_complex,
    as_real,
    enforce_fir_constraint,
    mirror_to_full,
    power,
    require_length,
    select_nonredundant,
    synthesize,
)

__all__ = [
    "COMPLEX_DTYPE",
    "REAL_DTYPE",
    "FrameBuffer",
    "analyze",
    "as_complex",
    "as_real",
    "block_signal",
    "enforce_fir_constraint",
    "frame_signal",
    "mirror_to_full",
    "overlap_save_convolve",
    "power",
    "require_length",
    "select_nonredundant",
    "synthesize",
    "zero_pad_block",
]

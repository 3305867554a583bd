from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidConfigError


@dataclass(frozen=True)
class FilterDims:
    """
    Block geometry of the overlap-save filter: DFT size M, hop R, FIR length L = M - R.
    """

    fft_size: int
    hop: int

    def __post_init__(self) -> None:
        if self.fft_size <= 0 or self.fft_size % 2:
            raise InvalidConfigError(f"fft_size must be a positive even number, got {self.fft_size}")
        if not 0 < self.hop < self.fft_size:
            raise InvalidConfigError(f"hop must lie in (0, fft_size), got {self.hop}")

    @property
    def filter_length(self) -> int:
        return self.fft_size - self.hop

    @property
    def bins(self) -> int:
        return self.fft_size // 2 + 1

    @property
    def feature_size(self) -> int:
        return 2 * self.bins

    @property
    def m_over_r(self) -> float:
        return self.fft_size / self.hop

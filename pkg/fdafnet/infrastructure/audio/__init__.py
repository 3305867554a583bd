from .wav import read_mono, write_mono

__all__ = ["read_mono", "write_mono"]

from .format import MAGIC, VERSION, Checkpoint, decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint

__all__ = [
    "MAGIC",
    "VERSION",
    "Checkpoint",
    "decode_checkpoint",
    "encode_checkpoint",
    "read_checkpoint",
    "write_checkpoint",
]

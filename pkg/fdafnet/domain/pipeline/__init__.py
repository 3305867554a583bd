from .runner import BlockCallback, BlockResult, StreamOutput, StreamRunner, StreamState

__all__ = ["BlockCallback", "BlockResult", "StreamOutput", "StreamRunner", "StreamState"]

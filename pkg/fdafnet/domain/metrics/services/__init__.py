from .evaluator import Evaluator, RunEvaluation

__all__ = ["Evaluator", "RunEvaluation"]

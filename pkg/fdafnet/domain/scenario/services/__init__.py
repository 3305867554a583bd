from .scenario_builder import RandomizerFactory, ScenarioBuilder

__all__ = ["RandomizerFactory", "ScenarioBuilder"]

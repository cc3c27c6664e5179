from .pareto import dominates, non_dominated_sort, pareto_front, rank
from .trace import EvolutionTrace, TraceRecord, TRACE_COLUMNS
from .ga import EvolutionConfig, SelectionMode, evolve, next_generation

__all__ = [
    "dominates",
    "non_dominated_sort",
    "pareto_front",
    "rank",
    "EvolutionTrace",
    "TraceRecord",
    "TRACE_COLUMNS",
    "EvolutionConfig",
    "SelectionMode",
    "evolve",
    "next_generation",
]

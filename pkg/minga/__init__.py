from .genome import Genome, EntityClass, random_genome, crossover, mutate, validate, save_genome, load_genome
from .game import GameConfig, GameResult, ArenaLayout, build_arena, play_game, evaluate
from .objectives import ObjectiveScores, ObjectiveSelector, lifespan, challenge, usability, combined
from .evolution import EvolutionConfig, EvolutionTrace, evolve, pareto_front, rank
from .experiment import ConvergenceCriterion, SuiteConfig, SuiteReport, run_suite, write_report, read_report, compare_hardness
from .errors import MingaError, ConfigError, UsageError, SimulationError, ReportIOError
from .logger import logger

__version__ = "0.1.0"

__all__ = [
    'Genome',
    'EntityClass',
    'random_genome',
    'crossover',
    'mutate',
    'validate',
    'save_genome',
    'load_genome',
    'GameConfig',
    'GameResult',
    'ArenaLayout',
    'build_arena',
    'play_game',
    'evaluate',
    'ObjectiveScores',
    'ObjectiveSelector',
    'lifespan',
    'challenge',
    'usability',
    'combined',
    'EvolutionConfig',
    'EvolutionTrace',
    'evolve',
    'pareto_front',
    'rank',
    'ConvergenceCriterion',
    'SuiteConfig',
    'SuiteReport',
    'run_suite',
    'write_report',
    'read_report',
    'compare_hardness',
    'MingaError',
    'ConfigError',
    'UsageError',
    'SimulationError',
    'ReportIOError',
    'logger',
]

from .convergence import NOT_CONVERGING, ConvergenceCriterion, CriterionKind, Verdict, detect_convergence
from .suite import (
    BUILTIN_SUITES,
    DEFAULT_SUITES,
    RunRecord,
    SuiteConfig,
    SuiteReport,
    SuiteSummary,
    builtin_suite,
    run_suite,
)
from .report import REPORT_COLUMNS, read_report, report_filename, write_report
from .hardness import HARDNESS_COLUMNS, HardnessReport, compare_hardness, hardness_table

__all__ = [
    "NOT_CONVERGING",
    "ConvergenceCriterion",
    "CriterionKind",
    "Verdict",
    "detect_convergence",
    "BUILTIN_SUITES",
    "DEFAULT_SUITES",
    "RunRecord",
    "SuiteConfig",
    "SuiteReport",
    "SuiteSummary",
    "builtin_suite",
    "run_suite",
    "REPORT_COLUMNS",
    "read_report",
    "report_filename",
    "write_report",
    "HARDNESS_COLUMNS",
    "HardnessReport",
    "compare_hardness",
    "hardness_table",
]

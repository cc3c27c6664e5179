"""跨 master seed 比较单目标与多目标套件的收敛难度。

同样预算下，对每个 master seed 各跑一次单目标套件(默认 lifespan)和多目标套件(默认 combined)，
按套件聚合收敛比例、未收敛比例与收敛代数中位数。
"""
from dataclasses import dataclass
from pathlib import Path
import time
from typing import Dict, List, Sequence, Tuple, Union

import polars as pl

from ..errors import ReportIOError, UsageError, _require
from ..logger import logger as default_logger
from .suite import SuiteReport, builtin_suite, run_suite


HARDNESS_COLUMNS = [
    "suite",
    "seeds",
    "runs",
    "converged",
    "convergence_fraction",
    "non_convergence_fraction",
    "median_generation",
]


@dataclass(frozen=True)
class HardnessReport:
    single: str
    multi: str
    table: pl.DataFrame
    reports: Tuple[SuiteReport, ...]

    def non_convergence(self, suite: str) -> float:
        rows = self.table.filter(pl.col("suite") == suite)
        _require(rows.height == 1, f"suite {suite!r} not in hardness table", UsageError)
        return float(rows["non_convergence_fraction"][0])

    @property
    def multi_at_least_as_hard(self) -> bool:
        return self.non_convergence(self.multi) >= self.non_convergence(self.single)

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self.table.write_csv(path)
        except OSError as exc:
            raise ReportIOError(f"cannot write hardness table ({exc.strerror or exc})", path) from exc
        return path


def hardness_table(reports: Sequence[SuiteReport]) -> pl.DataFrame:
    rows: List[Dict] = [
        {
            "master_seed": report.master_seed,
            "suite": report.name,
            "run": record.run,
            "generation": record.generation,
        }
        for report in reports
        for record in report.records
    ]
    df = pl.DataFrame(
        rows,
        schema={"master_seed": pl.Int64, "suite": pl.Utf8, "run": pl.Int64, "generation": pl.Int64},
    )
    return (
        df.group_by("suite", maintain_order=True)
        .agg(
            pl.col("master_seed").n_unique().alias("seeds"),
            pl.col("run").count().alias("runs"),
            pl.col("generation").is_not_null().sum().alias("converged"),
            pl.col("generation").median().alias("median_generation"),
        )
        .with_columns((pl.col("converged") / pl.col("runs")).alias("convergence_fraction"))
        .with_columns((1.0 - pl.col("convergence_fraction")).alias("non_convergence_fraction"))
        .select(HARDNESS_COLUMNS)
    )


def compare_hardness(
    master_seeds: Sequence[int],
    runs: int = 6,
    *,
    single: str = "lifespan",
    multi: str = "combined",
    logger=None,
    **suite_overrides,
) -> HardnessReport:
    """
    Args:
        master_seeds: 参与比较的 master seed 列表，建议 >= 10 个
        runs: 每个套件每个 seed 的运行次数
        single / multi: 参与比较的内置套件名
        suite_overrides: 传给 builtin_suite 的其余参数(generations、game、criterion 等)，两侧相同
    """
    logger = logger or default_logger
    _require(len(master_seeds) > 0, "compare_hardness needs at least one master seed")
    _require(single != multi, f"single and multi suites must differ, both are {single!r}")

    start_time = time.time()
    reports: List[SuiteReport] = []
    for master_seed in master_seeds:
        for name in (single, multi):
            cfg = builtin_suite(name, runs=runs, master_seed=master_seed, **suite_overrides)
            reports.append(run_suite(cfg, logger=logger))

    result = HardnessReport(single=single, multi=multi, table=hardness_table(reports), reports=tuple(reports))
    total_time = time.time() - start_time
    logger.info(
        f"Hardness comparison over {len(master_seeds)} seeds: "
        f"non-convergence {single}={result.non_convergence(single):.3f}, "
        f"{multi}={result.non_convergence(multi):.3f}, total time: {total_time:.2f}s"
    )
    return result

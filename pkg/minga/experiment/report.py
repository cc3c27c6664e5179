"""套件报告的 CSV / JSON 读写。

文件名固定为 ``<suite>_<masterseed>.{csv,json}``；CSV 每条 RunRecord 一行，
JSON 包含完整配置快照，可无损读回。
"""
import json
from pathlib import Path
from typing import Literal, Union

import pandas as pd

from ..errors import ConfigError, ReportIOError, _require
from .suite import SuiteReport


ReportFormat = Literal["csv", "json"]

REPORT_COLUMNS = ["run", "seed", "objective", "mode", "verdict", "generation", "best_fitness"]


def report_filename(name: str, master_seed: int, fmt: ReportFormat) -> str:
    return f"{name}_{master_seed}.{fmt}"


def report_frame(report: SuiteReport) -> pd.DataFrame:
    rows = [record.to_dict() for record in report.records]
    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    df["generation"] = df["generation"].astype("Int64")
    return df


def write_report(
    report: SuiteReport,
    fmt: ReportFormat,
    destination: Union[str, Path],
) -> Path:
    """把报告写到目录 destination 下，返回写出的文件路径。"""
    _require(fmt in ("csv", "json"), f"report format must be csv or json, got {fmt!r}")
    directory = Path(destination)
    path = directory / report_filename(report.name, report.master_seed, fmt)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            report_frame(report).to_csv(path, index=False, lineterminator="\n")
        else:
            path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise ReportIOError(f"cannot write {fmt} report ({exc.strerror or exc})", path) from exc
    return path


def read_report(path: Union[str, Path]) -> SuiteReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ReportIOError(f"cannot read report ({exc.strerror or exc})", path) from exc
    except json.JSONDecodeError as exc:
        raise ReportIOError(f"malformed report JSON ({exc.msg})", path) from exc
    try:
        return SuiteReport.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid report content in {path}: {exc}") from exc

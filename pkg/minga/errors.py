class MingaError(Exception):
    """minga 所有错误的基类。"""


class ConfigError(MingaError, ValueError):
    """配置值非法，例如 sigma <= 0、墙体越界、elite_count 超出范围。"""


class UsageError(MingaError, ValueError):
    """在前置条件之外调用操作，例如空结果列表、对已结束的游戏继续 step。"""


class SimulationError(MingaError, RuntimeError):
    pass


class InitializationError(SimulationError):
    """实体数量超过可用空格数时无法摆放。"""


class ReportIOError(MingaError):
    """读写报告、轨迹或基因组文件失败，消息中包含路径。"""

    def __init__(self, message: str, path):
        self.path = str(path)
        super().__init__(f"{message}: {self.path}")


def _require(condition: bool, message: str, exc_type=ConfigError) -> None:
    if not condition:
        raise exc_type(message)


__all__ = [
    "MingaError",
    "ConfigError",
    "UsageError",
    "SimulationError",
    "InitializationError",
    "ReportIOError",
]

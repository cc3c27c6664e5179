from loguru import logger


logger.disable("minga")


__all__ = ["logger"]

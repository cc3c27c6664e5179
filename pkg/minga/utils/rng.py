"""随机流派生工具。

所有随机性都来自 ``numpy.random.Generator``。同一组 key 总是得到同一条流，
因此结果只由种子和内容决定，与调用顺序、并行度无关。
"""
import hashlib
import zlib
from typing import List, Sequence, Union

import numpy as np


Key = Union[int, str]

_MASK_64 = (1 << 64) - 1


def _entropy(key: Key) -> int:
    if isinstance(key, str):
        # 不能用内置 hash()，它在每个进程里都不同
        return zlib.crc32(key.encode("utf-8")) & 0xFFFFFFFF
    if isinstance(key, (bool, np.bool_)):
        raise TypeError(f"rng key must be int or str, got {key!r}")
    return int(key) & _MASK_64


def make_rng(*keys: Key) -> np.random.Generator:
    """由一组整数/字符串 key 构造确定性的随机流。"""
    if not keys:
        raise TypeError("make_rng requires at least one key")
    return np.random.default_rng(np.random.SeedSequence([_entropy(key) for key in keys]))


def game_streams(rng: np.random.Generator, n: int) -> List[np.random.Generator]:
    """从 rng 抽取一个基数，再按局序号派生 n 条互相独立的子流。"""
    base = int(rng.integers(0, 2**63))
    return [make_rng(base, index) for index in range(n)]


def genome_digest(genes: Union[Sequence[int], object]) -> int:
    values = getattr(genes, "genes", genes)
    payload = np.asarray(values, dtype=np.int64).tobytes()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")

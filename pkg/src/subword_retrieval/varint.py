"""LEB128-style unsigned varints (7 data bits per byte, high bit = continuation)."""

from __future__ import annotations

from typing import Iterable

import numpy as np


def encode_varints(values: Iterable[int], out: bytearray | None = None) -> bytearray:
    if out is None:
        out = bytearray()
    for v in values:
        v = int(v)
        if v < 0:
            raise ValueError(f"varint cannot encode negative value {v}")
        while v >= 0x80:
            out.append((v & 0x7F) | 0x80)
            v >>= 7
        out.append(v)
    return out


def decode_varints(buf, count: int, pos: int = 0) -> tuple[list[int], int]:
    """Decode ``count`` values starting at ``pos``; returns (values, next position)."""
    values = []
    n = len(buf)
    for _ in range(count):
        v = 0
        shift = 0
        while True:
            if pos >= n:
                raise ValueError("truncated varint stream")
            byte = buf[pos]
            pos += 1
            v |= (byte & 0x7F) << shift
            if byte < 0x80:
                break
            shift += 7
        values.append(v)
    return values, pos


def decode_varint_array(buf) -> np.ndarray:
    """Vectorized decode of a complete varint stream into a uint64 array."""
    arr = np.frombuffer(bytes(buf), dtype=np.uint8)
    if arr.size == 0:
        return np.zeros(0, dtype=np.uint64)
    if arr[-1] & 0x80:
        raise ValueError("truncated varint stream")
    ends = np.flatnonzero(arr < 0x80)
    starts = np.concatenate(([0], ends[:-1] + 1))
    if np.any(ends - starts >= 10):
        raise ValueError("varint longer than 64 bits")
    # position of each byte within its own value
    value_of_byte = np.repeat(np.arange(ends.size), ends - starts + 1)
    pos_in_value = np.arange(arr.size) - starts[value_of_byte]
    parts = (arr & 0x7F).astype(np.uint64) << (7 * pos_in_value).astype(np.uint64)
    return np.add.reduceat(parts, starts)

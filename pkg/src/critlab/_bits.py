"""Bitset helpers.

Subsets of a finite group are Python ints: bit ``i`` set means element index
``i`` is a member.  Arbitrary-precision ints make word-level union/intersection
free, and ``int.bit_count`` gives popcount.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

CHUNK = 8
CHUNK_MASK = (1 << CHUNK) - 1


def bits_from(indices: Iterable[int]) -> int:
    """Pack an iterable of element indices into a bitset."""
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def iter_bits(bits: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def permute_bits(bits: int, perm: list[int] | tuple[int, ...]) -> int:
    """Map bit ``i`` to bit ``perm[i]`` (a relabeling of set members)."""
    out = 0
    while bits:
        low = bits & -bits
        out |= 1 << perm[low.bit_length() - 1]
        bits ^= low
    return out


def build_chunk_table(perm: list[int] | tuple[int, ...]) -> list[list[int]]:
    """Precompute ``permute_bits`` chunk by chunk.

    ``table[c][byte]`` is the image of the byte placed at bit offset
    ``CHUNK*c``; applying a permutation to a bitset then costs one table
    lookup and one OR per chunk (see :func:`apply_chunk_table`).
    """
    n = len(perm)
    chunks = (n + CHUNK - 1) // CHUNK
    table: list[list[int]] = []
    for c in range(chunks):
        base = c * CHUNK
        width = min(CHUNK, n - base)
        row = [0] * (1 << width) if width < CHUNK else [0] * (1 << CHUNK)
        for byte in range(1, len(row)):
            low = byte & -byte
            k = low.bit_length() - 1
            row[byte] = row[byte ^ low] | (1 << perm[base + k])
        table.append(row)
    return table


def apply_chunk_table(bits: int, table: list[list[int]]) -> int:
    out = 0
    c = 0
    while bits:
        out |= table[c][bits & CHUNK_MASK]
        bits >>= CHUNK
        c += 1
    return out

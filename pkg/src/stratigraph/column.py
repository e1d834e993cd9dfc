"""Hereditary stratigraphic columns.

A column is the stack of strata an individual carries.  Each replication
appends one stratum holding a random differentia, after which the
retention policy discards whatever it no longer wants.  Deposit ranks are
never stored: they are recovered from ``(policy, deposit_count)``.

Binary layout (all integers little-endian)::

    offset  size  field
    0       1     format version (1)
    1       1     family tag
    2       8     policy parameter
    10      1     differentia width in bits (1, 8 or 64)
    11      8     deposit count
    19      8     differentia seed
    27      ...   differentia, bit-packed in storage order

Width-1 differentia pack eight to a byte, least significant bit first.
Width-64 differentia are stored as consecutive 8-byte words.
"""

from __future__ import annotations

import hashlib
import struct
from typing import Iterator, NamedTuple

import numpy as np

from .curation import PolicySpec, drop_indices, retained_count, retained_ranks
from .curation.spec import FAMILY_TAGS, TAG_FAMILIES

FORMAT_VERSION = 1
SUPPORTED_WIDTHS = (1, 8, 64)
_HEADER = struct.Struct("<BBQBQQ")
HEADER_SIZE = _HEADER.size
_SEED_MASK = (1 << 64) - 1


class ColumnConfigError(ValueError):
    pass


class DeserializationError(ValueError):
    pass


class Stratum(NamedTuple):
    rank: int
    differentia: int


def draw_differentia(seed: int, index: int, width: int) -> int:
    """Counter-based differentia for deposit ``index`` of lineage key ``seed``."""
    digest = hashlib.blake2b(
        struct.pack("<QQ", seed & _SEED_MASK, index), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little") >> (64 - width)


class Column:
    """One individual's hereditary stratigraphic column."""

    __slots__ = ("policy", "width", "seed", "deposit_count", "differentia")

    def __init__(self, policy: PolicySpec, width: int, seed: int,
                 deposit_count: int = 0, differentia: list[int] | None = None):
        if width not in SUPPORTED_WIDTHS:
            raise ColumnConfigError(f"differentia width must be one of {SUPPORTED_WIDTHS}, got {width}")
        self.policy = policy
        self.width = width
        self.seed = seed & _SEED_MASK
        self.deposit_count = deposit_count
        self.differentia = differentia if differentia is not None else []

    def __repr__(self) -> str:
        return (f"Column(policy={self.policy}, width={self.width}, "
                f"deposit_count={self.deposit_count}, strata={len(self.differentia)})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Column):
            return NotImplemented
        return (self.policy == other.policy and self.width == other.width
                and self.seed == other.seed and self.deposit_count == other.deposit_count
                and self.differentia == other.differentia)

    def __len__(self) -> int:
        return len(self.differentia)

    @property
    def ranks(self) -> tuple[int, ...]:
        return retained_ranks(self.policy, self.deposit_count)

    def strata(self) -> Iterator[Stratum]:
        return (Stratum(r, d) for r, d in zip(self.ranks, self.differentia))

    @property
    def payload_bits(self) -> int:
        return len(self.differentia) * self.width

    def deposit(self) -> Column:
        """Append one stratum and prune per policy.  Mutates and returns self."""
        n = self.deposit_count
        self.differentia.append(draw_differentia(self.seed, n, self.width))
        for i in drop_indices(self.policy, n):
            del self.differentia[i]
        self.deposit_count = n + 1
        return self

    def copy(self) -> Column:
        return Column(self.policy, self.width, self.seed, self.deposit_count,
                      list(self.differentia))

    def clone_for_offspring(self, child_seed: int) -> Column:
        """Copy this column under a new lineage key and deposit once on the copy."""
        child = Column(self.policy, self.width, child_seed, self.deposit_count,
                       list(self.differentia))
        return child.deposit()

    # -- serialization ------------------------------------------------------

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(FORMAT_VERSION, FAMILY_TAGS[self.policy.family],
                              self.policy.param, self.width, self.deposit_count, self.seed)
        return header + _pack(self.differentia, self.width)

    @classmethod
    def from_bytes(cls, data: bytes, policy: PolicySpec | None = None,
                   width: int | None = None) -> Column:
        if len(data) < HEADER_SIZE:
            raise DeserializationError("truncated column header")
        version, tag, param, w, n, seed = _HEADER.unpack_from(data)
        if version != FORMAT_VERSION:
            raise DeserializationError(f"unsupported column format version {version}")
        if tag not in TAG_FAMILIES:
            raise DeserializationError(f"unknown family tag {tag}")
        if w not in SUPPORTED_WIDTHS:
            raise DeserializationError(f"unsupported differentia width {w}")
        try:
            found = PolicySpec(TAG_FAMILIES[tag], param)
        except ValueError as exc:
            raise DeserializationError(str(exc)) from None
        if policy is not None and policy != found:
            raise DeserializationError(f"column was written under {found}, expected {policy}")
        if width is not None and width != w:
            raise DeserializationError(f"column has width {w}, expected {width}")
        count = retained_count(found, n)
        payload = data[HEADER_SIZE:]
        if len(payload) != payload_size(count, w):
            raise DeserializationError(
                f"payload is {len(payload)} bytes, expected {payload_size(count, w)} "
                f"for {count} strata"
            )
        return cls(found, w, seed, n, _unpack(payload, count, w))


def payload_size(count: int, width: int) -> int:
    return -(-count * width // 8)


def _pack(values: list[int], width: int) -> bytes:
    if width == 1:
        return np.packbits(np.asarray(values, dtype=np.uint8), bitorder="little").tobytes()
    if width == 8:
        return bytes(values)
    return np.asarray(values, dtype="<u8").tobytes()


def _unpack(payload: bytes, count: int, width: int) -> list[int]:
    raw = np.frombuffer(payload, dtype=np.uint8)
    if width == 1:
        return np.unpackbits(raw, count=count, bitorder="little").tolist()
    if width == 8:
        return raw.tolist()
    return np.frombuffer(payload, dtype="<u8").tolist()


def create_column(policy: PolicySpec, width: int, seed: int) -> Column:
    return Column(policy, width, seed)


def serialize(column: Column) -> bytes:
    return column.to_bytes()


def deserialize(data: bytes, policy: PolicySpec | None = None, width: int | None = None) -> Column:
    return Column.from_bytes(data, policy, width)


def deposit(column: Column) -> Column:
    """Value-semantics deposit: returns a deposited copy, leaving ``column`` as is."""
    return column.copy().deposit()

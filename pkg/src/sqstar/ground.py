"""Ground set: membership, sieved tables, rank/unrank, binary caches.

The default ground set is the set of sums of two integer squares (0 and 1
included).  A GroundTable materializes the sorted members below a limit
and provides the rank/unrank bijection plus counting queries; everything
upstream (the induced product, pattern generation, searches) is expressed
through these queries.
"""

from __future__ import annotations

import struct

import numpy as np

from . import _kernels
from .errors import (
    CorruptCacheError,
    NotMemberError,
    OutOfRangeError,
    PredicateMismatchError,
    ResourceBudgetError,
)

# Refuse builds whose working set would exceed this many bytes (sieve
# scratch plus element storage, estimated at 4 bytes per candidate).
DEFAULT_MAX_BYTES = 2**31

_MAGIC = b"SGT1"
_VERSION = 1


def is_member(n: int) -> bool:
    """Whether n is a sum of two squares, by trial-division factoring.

    Uses the classical criterion: n >= 0 qualifies iff every prime
    p = 3 (mod 4) appears in n to an even power.  Independent of any
    table, so it has no range ceiling beyond factoring cost.
    """
    if n < 0:
        raise ValueError("membership is defined for nonnegative integers")
    if n < 2:
        return True
    m = n
    while m % 2 == 0:
        m //= 2
    p = 3
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if p % 4 == 3 and e % 2 == 1:
                return False
        p += 2
    # leftover m is prime or 1
    return not (m > 1 and m % 4 == 3)


class GroundPredicate:
    """A named membership predicate with an optional bulk sieve."""

    def __init__(self, predicate_id: str, member, flags=None):
        if not predicate_id or len(predicate_id.encode("ascii")) > 255:
            raise ValueError("predicate id must be 1..255 ascii bytes")
        self.predicate_id = predicate_id
        self._member = member
        self._flags = flags

    def member(self, n: int) -> bool:
        return self._member(n)

    def flags(self, limit: int) -> np.ndarray:
        """uint8 flags for [0, limit); falls back to a scalar loop."""
        if self._flags is not None:
            return self._flags(limit)
        out = np.zeros(limit, dtype=np.uint8)
        for n in range(limit):
            if self._member(n):
                out[n] = 1
        return out

    def __repr__(self):
        return f"GroundPredicate({self.predicate_id!r})"


SIGMA = GroundPredicate("sigma", is_member, flags=_kernels.member_flags)


class GroundTable:
    """Sorted members of a predicate below a limit, with rank queries.

    elements is a read-only uint64 array; ranks are positions within it.
    A bucket index (prefix counts at stride 128) accelerates bulk rank
    queries on the numba path.
    """

    __slots__ = ("limit", "elements", "predicate_id", "_buckets")

    def __init__(self, limit: int, elements: np.ndarray, predicate_id: str):
        self.limit = int(limit)
        el = np.ascontiguousarray(elements, dtype=np.uint64)
        el.setflags(write=False)
        self.elements = el
        self.predicate_id = predicate_id
        self._buckets = _kernels.build_buckets(el, self.limit)

    @property
    def size(self) -> int:
        """Number of members below the limit."""
        return int(self.elements.size)

    def element(self, n: int) -> int:
        """Member with rank n (the n-th smallest, counting from 0)."""
        if n < 0:
            raise ValueError("rank must be nonnegative")
        if n >= self.elements.size:
            raise OutOfRangeError(
                f"rank {n} exceeds table size {self.elements.size} (limit {self.limit})"
            )
        return int(self.elements[n])

    def rank(self, s: int) -> int:
        """Rank of the member s; raises NotMemberError for non-members."""
        if s < 0:
            raise ValueError("rank query requires a nonnegative integer")
        if s >= self.limit:
            raise OutOfRangeError(f"value {s} not covered by table limit {self.limit}")
        i = int(np.searchsorted(self.elements, s))
        if i < self.elements.size and int(self.elements[i]) == s:
            return i
        raise NotMemberError(f"{s} is not in the ground set")

    def count_below(self, x: int) -> int:
        """Number of members strictly below x, for 0 <= x <= limit."""
        if x < 0:
            raise ValueError("count_below requires a nonnegative bound")
        if x > self.limit:
            raise OutOfRangeError(f"bound {x} exceeds table limit {self.limit}")
        return int(np.searchsorted(self.elements, x))

    def count_below_many(self, xs) -> np.ndarray:
        """Vectorized count_below over an array of bounds."""
        arr = np.asarray(xs)
        if arr.size and (arr.min() < 0 or int(arr.max()) > self.limit):
            raise OutOfRangeError("bounds must lie in [0, limit]")
        arr = np.ascontiguousarray(arr, dtype=np.uint64)
        return _kernels.count_below_many(self.elements, self._buckets, arr)

    def contains(self, s: int) -> bool:
        """Table-backed membership test for 0 <= s < limit."""
        if s < 0:
            raise ValueError("membership query requires a nonnegative integer")
        if s >= self.limit:
            raise OutOfRangeError(f"value {s} not covered by table limit {self.limit}")
        i = int(np.searchsorted(self.elements, s))
        return i < self.elements.size and int(self.elements[i]) == s

    def __repr__(self):
        return (
            f"GroundTable(limit={self.limit}, size={self.size}, "
            f"predicate={self.predicate_id!r})"
        )


def build_table(
    limit: int,
    predicate: GroundPredicate = SIGMA,
    max_bytes: int = DEFAULT_MAX_BYTES,
) -> GroundTable:
    """Sieve all members below limit into a GroundTable.

    The peak working set is roughly two byte-arrays of length limit plus
    the element storage, estimated here as 4*limit bytes and checked
    against max_bytes before any allocation.
    """
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if 4 * limit > max_bytes:
        raise ResourceBudgetError(
            f"limit {limit} needs ~{4 * limit} bytes, budget is {max_bytes}"
        )
    flags = predicate.flags(limit)
    elements = np.flatnonzero(flags).astype(np.uint64)
    return GroundTable(limit, elements, predicate.predicate_id)


def _checksum(elements: np.ndarray) -> int:
    if elements.size == 0:
        return 0
    return int(np.bitwise_xor.reduce(elements))


def save_cache(table: GroundTable, path: str) -> None:
    """Write a table to a binary cache file.

    Layout: magic "SGT1", version byte, length-prefixed predicate id,
    limit and count as little-endian u64, the elements as little-endian
    u64, and a trailing u64 XOR checksum over the element words.
    """
    pid = table.predicate_id.encode("ascii")
    payload = table.elements.astype("<u8").tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<B", _VERSION))
        fh.write(struct.pack("<B", len(pid)))
        fh.write(pid)
        fh.write(struct.pack("<QQ", table.limit, table.size))
        fh.write(payload)
        fh.write(struct.pack("<Q", _checksum(table.elements)))


def load_cache(path: str, predicate_id: str | None = None) -> GroundTable:
    """Load and validate a binary cache written by save_cache.

    Every structural property is checked: magic, version, declared
    length versus file size, checksum, strict monotonicity, and the
    elements staying below the declared limit.  Any failure raises
    CorruptCacheError; a predicate mismatch raises PredicateMismatchError.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 6:
        raise CorruptCacheError("file too short for header")
    if data[:4] != _MAGIC:
        raise CorruptCacheError("bad magic")
    if data[4] != _VERSION:
        raise CorruptCacheError(f"unsupported version {data[4]}")
    pid_len = data[5]
    head_end = 6 + pid_len + 16
    if len(data) < head_end:
        raise CorruptCacheError("truncated header")
    try:
        pid = data[6 : 6 + pid_len].decode("ascii")
    except UnicodeDecodeError as exc:
        raise CorruptCacheError("predicate id is not ascii") from exc
    limit, count = struct.unpack_from("<QQ", data, 6 + pid_len)
    expected = head_end + 8 * count + 8
    if len(data) != expected:
        raise CorruptCacheError(
            f"file length {len(data)} does not match declared count (expected {expected})"
        )
    elements = np.frombuffer(data, dtype="<u8", count=count, offset=head_end)
    elements = elements.astype(np.uint64)
    (stored_sum,) = struct.unpack_from("<Q", data, head_end + 8 * count)
    if _checksum(elements) != stored_sum:
        raise CorruptCacheError("checksum mismatch")
    if elements.size:
        if int(elements[-1]) >= limit:
            raise CorruptCacheError("element at or above declared limit")
        if elements.size > 1 and not bool(np.all(elements[1:] > elements[:-1])):
            raise CorruptCacheError("elements are not strictly increasing")
    if predicate_id is not None and pid != predicate_id:
        raise PredicateMismatchError(
            f"cache was built for predicate {pid!r}, requested {predicate_id!r}"
        )
    return GroundTable(int(limit), elements, pid)

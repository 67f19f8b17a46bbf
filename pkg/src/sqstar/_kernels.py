"""Hot kernels: membership sieve and bulk rank queries.

Two implementations live side by side.  The numba path is the default and
is what the throughput targets assume; the pure-numpy path is a fallback
selected with the SQSTAR_NO_NUMBA environment variable (any non-empty
value) or used automatically when numba is not importable.  Both paths
are exported unconditionally so benchmarks can compare them in one
process.

Membership test used by the sieve: n is a sum of two squares iff every
prime p = 3 (mod 4) divides n to an even power.  Ruling out one odd
exponent e of one such prime means clearing the integers divisible by
p^e but not p^(e+1); the union over all p and all odd e is exactly the
complement of the ground set.  The elimination must run over every prime
p = 3 (mod 4) below the limit, not just those below sqrt(limit): a
single large prime factor (e.g. 103 in 206) already breaks membership.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


NUMBA_DISABLED = bool(os.environ.get("SQSTAR_NO_NUMBA"))
USING_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED

# Bucket width 2**BUCKET_SHIFT for the rank-query index.  128 keeps the
# index at limit/16 bytes while making each in-bucket binary search touch
# only a handful of cache lines.
BUCKET_SHIFT = 7


@njit(cache=True)
def _member_flags_njit(limit):
    composite = np.zeros(limit, np.uint8)
    ok = np.ones(limit, np.uint8)
    p = 2
    while p < limit:
        if composite[p] == 0:
            if p * p < limit:
                m = p * p
                while m < limit:
                    composite[m] = 1
                    m += p
            if p % 4 == 3:
                # clear n with v_p(n) odd: for q = p^e (e odd), the runs
                # [q, 2q), [p*q+q, ...) of stride q inside blocks of p*q
                q = p
                while q < limit:
                    qp = q * p
                    base = 0
                    while base < limit:
                        m = base + q
                        end = base + qp
                        if end > limit:
                            end = limit
                        while m < end:
                            ok[m] = 0
                            m += q
                        base += qp
                    if qp >= limit:
                        break
                    q = qp * p
        p += 1
    return ok


def member_flags_numba(limit: int) -> np.ndarray:
    """Sieve membership flags for [0, limit) with the numba kernel."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    return _member_flags_njit(limit)


def primes_below(limit: int) -> np.ndarray:
    """All primes < limit, via a plain boolean Eratosthenes sieve."""
    if limit <= 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(limit, dtype=bool)
    is_p[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p)


def member_flags_numpy(limit: int) -> np.ndarray:
    """Sieve membership flags for [0, limit) with strided numpy clears.

    For each prime p = 3 (mod 4) and odd exponent e with p^e < limit,
    clears the slices j*p^e :: p^(e+1) for j = 1..p-1 (multiples of p^e
    that are not multiples of p^(e+1)).  Once p^(e+1) >= limit a single
    slice per j suffices, and for p > sqrt(limit) this degenerates to
    clearing every multiple of p not itself divisible by p.
    """
    ok = np.ones(limit, dtype=np.uint8)
    for p in primes_below(limit):
        if p % 4 != 3:
            continue
        p = int(p)
        q = p
        while q < limit:
            qp = q * p
            if qp >= limit:
                # no multiple of qp exists below limit, so every multiple
                # of q has odd p-valuation and the whole stride goes
                ok[q::q] = 0
                break
            for j in range(1, p):
                ok[j * q :: qp] = 0
            q = qp * p
    return ok


def member_flags(limit: int) -> np.ndarray:
    """Membership flags for [0, limit) using the selected implementation."""
    if USING_NUMBA:
        return member_flags_numba(limit)
    return member_flags_numpy(limit)


@njit(cache=True)
def _count_below_many_njit(elements, buckets, shift, xs, out):
    for i in range(xs.size):
        x = xs[i]
        k = x >> shift
        lo = buckets[k]
        hi = buckets[k + 1]
        while lo < hi:
            mid = (lo + hi) >> 1
            if elements[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        out[i] = lo


def count_below_many_numba(
    elements: np.ndarray, buckets: np.ndarray, xs: np.ndarray
) -> np.ndarray:
    """Ranks of xs within elements via per-query bucketed binary search."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    out = np.empty(xs.size, dtype=np.int64)
    _count_below_many_njit(elements, buckets, BUCKET_SHIFT, xs, out)
    return out


def count_below_many_numpy(elements: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Ranks of xs within elements via vectorized searchsorted."""
    return np.searchsorted(elements, xs, side="left").astype(np.int64)


def build_buckets(elements: np.ndarray, limit: int) -> np.ndarray:
    """Prefix-count index: buckets[k] = #elements below k * 2**BUCKET_SHIFT.

    Equivalent to searchsorted(elements, k << BUCKET_SHIFT) for every k
    covering [0, limit], but computed in one O(n) bincount pass.
    """
    nbuckets = (limit >> BUCKET_SHIFT) + 2
    if elements.size == 0:
        return np.zeros(nbuckets, dtype=np.int64)
    ids = (elements >> np.uint64(BUCKET_SHIFT)).astype(np.int64)
    counts = np.bincount(ids, minlength=nbuckets - 1)
    buckets = np.zeros(nbuckets, dtype=np.int64)
    np.cumsum(counts[: nbuckets - 1], out=buckets[1:])
    return buckets


def count_below_many(
    elements: np.ndarray, buckets: np.ndarray, xs: np.ndarray
) -> np.ndarray:
    """Bulk rank query using the selected implementation."""
    if USING_NUMBA:
        return count_below_many_numba(elements, buckets, xs)
    return count_below_many_numpy(elements, xs)


def warm_up() -> None:
    """Trigger JIT compilation of the numba kernels on tiny inputs."""
    if not USING_NUMBA:
        return
    flags = _member_flags_njit(64)
    el = np.flatnonzero(flags).astype(np.uint64)
    buckets = build_buckets(el, 64)
    out = np.empty(2, dtype=np.int64)
    _count_below_many_njit(el, buckets, BUCKET_SHIFT, np.array([3, 50], dtype=np.uint64), out)

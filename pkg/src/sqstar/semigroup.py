"""The induced product on ranks and its algebraic law checks.

With s_n the n-th ground-set member, the product of ranks m and n is the
rank of s_m * s_n (the ground set is closed under integer products).
Rank 1 is the identity (s_1 = 1) and rank 0 absorbs (s_0 = 0).  Repeated
products and monomials reduce to one exact integer product followed by a
single counting query, which is also how overflow stays impossible: the
product is formed in Python integers and checked against the table limit
before any array arithmetic sees it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import OutOfRangeError
from .ground import GroundTable

# A monomial is a sequence of (rank, exponent) pairs with exponents >= 0.
Monomial = Sequence[Tuple[int, int]]


def star(m: int, n: int, table: GroundTable) -> int:
    """Induced product of ranks m and n."""
    p = table.element(m) * table.element(n)
    if p >= table.limit:
        raise OutOfRangeError(
            f"product {table.element(m)}*{table.element(n)} = {p} "
            f"exceeds table limit {table.limit}"
        )
    return table.count_below(p)


def power(x: int, n: int, table: GroundTable) -> int:
    """n-th star-power of rank x; the 0-th power is the identity rank 1."""
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    if n == 0:
        return 1
    s = table.element(x)
    if s == 0:
        return 0
    if s == 1:
        return 1
    p = 1
    for _ in range(n):
        p *= s
        if p >= table.limit:
            raise OutOfRangeError(
                f"power {s}^{n} exceeds table limit {table.limit}"
            )
    return table.count_below(p)


def eval_monomial(factors: Monomial, table: GroundTable) -> int:
    """Rank of the product of element values prod s_{x_i}^{e_i}.

    The empty monomial evaluates to the identity rank 1.  A factor with
    element value 0 and positive exponent short-circuits to rank 0.
    """
    p = 1
    for x, e in factors:
        if e < 0:
            raise ValueError(f"exponent {e} for rank {x} is negative")
        if e == 0:
            continue
        s = table.element(x)
        if s == 0:
            return 0
        if s == 1:
            continue
        for _ in range(e):
            p *= s
            if p >= table.limit:
                raise OutOfRangeError(
                    f"monomial value passes table limit {table.limit} at factor "
                    f"(rank {x}, element {s})"
                )
    return table.count_below(p)


def finite_products(xs: Sequence[int], table: GroundTable) -> set:
    """Ranks of all nonempty-subset products of the given ranks.

    Products are developed over the subset lattice so each of the 2^k - 1
    subsets costs one multiplication; an overflowing subset is reported
    by its (1-based) positions.
    """
    svals = [table.element(x) for x in xs]
    k = len(svals)
    prods = [0] * (1 << k)
    prods[0] = 1
    out = set()
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        p = prods[mask & (mask - 1)] * svals[low]
        if p >= table.limit:
            positions = [i + 1 for i in range(k) if mask >> i & 1]
            raise OutOfRangeError(
                f"subset {positions} of ranks {list(xs)} has product {p} "
                f"beyond table limit {table.limit}"
            )
        prods[mask] = p
        out.add(table.count_below(p))
    return out


def star_many(ms, ns, table: GroundTable):
    """Vectorized star over paired rank arrays.

    Returns (ranks, valid) where valid marks pairs whose product stays
    below the table limit; ranks is meaningful only where valid.  A
    float64 prescreen keeps the uint64 multiply overflow-free: operands
    are below the limit, so true in-range products (< limit <= 2**53 for
    any practical table) are screened exactly.
    """
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    sm = table.elements[ms]
    sn = table.elements[ns]
    approx = sm.astype(np.float64) * sn.astype(np.float64)
    valid = approx < float(table.limit)
    prod = np.zeros(ms.shape, dtype=np.uint64)
    prod[valid] = sm[valid] * sn[valid]
    ranks = np.zeros(ms.shape, dtype=np.int64)
    if valid.any():
        ranks[valid] = table.count_below_many(prod[valid])
    return ranks, valid


@dataclass
class LawCheck:
    name: str
    checked: int
    skipped: int
    counterexample: Optional[tuple]

    @property
    def ok(self) -> bool:
        return self.counterexample is None


@dataclass
class LawReport:
    range_max: int
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __str__(self):
        lines = [f"laws on ranks 0..{self.range_max}:"]
        for c in self.checks:
            state = "ok" if c.ok else f"FAIL at {c.counterexample}"
            lines.append(
                f"  {c.name}: {state} ({c.checked} checked, {c.skipped} out of range)"
            )
        return "\n".join(lines)


def verify_laws(range_max: int, table: GroundTable) -> LawReport:
    """Exhaustively check semigroup laws on ranks 0..range_max.

    Laws: commutativity, identity (rank 1), absorption (rank 0),
    multiplicativity of the underlying element map, and associativity
    over all triples whose intermediate products stay below the limit.
    Pairs or triples that leave the table are skipped and counted.
    """
    if range_max < 0:
        raise ValueError("range_max must be nonnegative")
    if range_max >= table.size:
        raise OutOfRangeError(
            f"table holds only {table.size} ranks, cannot check up to {range_max}"
        )
    v = table.elements[: range_max + 1].astype(np.uint64)
    n = int(v.size)
    limit = table.limit
    if n and float(int(v.max())) ** 3 >= 2**63:
        return _verify_laws_scalar(range_max, table)

    prod = v[:, None] * v[None, :]
    in_range = prod < limit
    ranks = np.zeros_like(prod, dtype=np.int64)
    if in_range.any():
        ranks[in_range] = table.count_below_many(prod[in_range])

    checks = []

    # commutativity: the integer product grid is symmetric by construction,
    # so compare the rank grid against its transpose
    comm_pairs = int(in_range.sum())
    bad = None
    if not np.array_equal(ranks * in_range, (ranks * in_range).T):
        i, j = np.argwhere((ranks != ranks.T) & in_range & in_range.T)[0]
        bad = (int(i), int(j))
    checks.append(LawCheck("commutativity", comm_pairs, n * n - comm_pairs, bad))

    # identity: 1 * m = m for every m in range (requires range_max >= 1)
    bad = None
    checked = 0
    if n >= 2:
        row = ranks[1]
        good = in_range[1]
        checked = int(good.sum())
        mism = np.flatnonzero(good & (row != np.arange(n)))
        if mism.size:
            bad = (1, int(mism[0]))
    checks.append(LawCheck("identity", checked, n - checked if n >= 2 else 0, bad))

    # absorption: 0 * m = 0
    bad = None
    row = ranks[0]
    good = in_range[0]
    mism = np.flatnonzero(good & (row != 0))
    if mism.size:
        bad = (0, int(mism[0]))
    checks.append(LawCheck("absorption", int(good.sum()), n - int(good.sum()), bad))

    # multiplicativity: element(star(m, n)) equals s_m * s_n wherever defined
    bad = None
    el_of_rank = table.elements[ranks * in_range]
    mism = np.argwhere(in_range & (el_of_rank != prod * in_range))
    if mism.size:
        bad = (int(mism[0][0]), int(mism[0][1]))
    checks.append(LawCheck("multiplicativity", comm_pairs, n * n - comm_pairs, bad))

    # associativity: (m*n)*k vs m*(n*k); by multiplicativity both sides equal
    # the rank of s_m*s_n*s_k, but compute both sides literally
    triple = prod[:, :, None].astype(np.float64) * v[None, None, :].astype(np.float64)
    t_ok = in_range[:, :, None] & in_range[None, :, :] & (triple < float(limit))
    bad = None
    checked3 = int(t_ok.sum())
    if checked3:
        idx = np.argwhere(t_ok)
        lhs = table.count_below_many(prod[idx[:, 0], idx[:, 1]] * v[idx[:, 2]])
        rhs = table.count_below_many(v[idx[:, 0]] * prod[idx[:, 1], idx[:, 2]])
        mism = np.flatnonzero(lhs != rhs)
        if mism.size:
            bad = tuple(int(t) for t in idx[mism[0]])
    checks.append(LawCheck("associativity", checked3, n**3 - checked3, bad))

    return LawReport(range_max, checks)


def _verify_laws_scalar(range_max: int, table: GroundTable) -> LawReport:
    """Python-integer fallback for tables whose cubes leave 63 bits."""
    limit = table.limit
    vals = [table.element(i) for i in range(range_max + 1)]
    n = len(vals)

    def rank_of(p):
        return table.count_below(p) if p < limit else None

    comm = LawCheck("commutativity", 0, 0, None)
    ident = LawCheck("identity", 0, 0, None)
    absorb = LawCheck("absorption", 0, 0, None)
    mult = LawCheck("multiplicativity", 0, 0, None)
    assoc = LawCheck("associativity", 0, 0, None)
    for m in range(n):
        for k in range(n):
            p = vals[m] * vals[k]
            r = rank_of(p)
            if r is None:
                comm.skipped += 1
                mult.skipped += 1
            else:
                comm.checked += 1
                mult.checked += 1
                if rank_of(vals[k] * vals[m]) != r and comm.counterexample is None:
                    comm.counterexample = (m, k)
                if table.element(r) != p and mult.counterexample is None:
                    mult.counterexample = (m, k)
    for m in range(n):
        if n >= 2:
            r = rank_of(vals[1] * vals[m])
            if r is None:
                ident.skipped += 1
            else:
                ident.checked += 1
                if r != m and ident.counterexample is None:
                    ident.counterexample = (1, m)
        r = rank_of(0)
        absorb.checked += 1
        if r != 0 and absorb.counterexample is None:
            absorb.counterexample = (0, m)
    for m in range(n):
        for k in range(n):
            for j in range(n):
                pmk = vals[m] * vals[k]
                pkj = vals[k] * vals[j]
                if pmk >= limit or pkj >= limit or pmk * vals[j] >= limit:
                    assoc.skipped += 1
                    continue
                assoc.checked += 1
                lhs = rank_of(table.element(rank_of(pmk)) * vals[j])
                rhs = rank_of(vals[m] * table.element(rank_of(pkj)))
                if lhs != rhs and assoc.counterexample is None:
                    assoc.counterexample = (m, k, j)
    return LawReport(range_max, [comm, ident, absorb, mult, assoc])

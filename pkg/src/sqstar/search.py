"""Witness search over candidate generators, verification, thresholds.

Candidates are enumerated in a canonical lexicographic order (smallest
generator tuple first, indices starting at 2 so the absorber 0 and the
identity 1 stay out unless explicitly included).  The deterministic mode
therefore returns the least witness in that order regardless of worker
count: blocks of candidates are evaluated, possibly across threads, and
folded back in canonical order before the first hit is taken.  Candidates
whose configurations leave the value window or the table are skipped and
tallied, never treated as failures.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

from .colorings import Coloring, enumerate_all
from .errors import (
    EnumerationCapError,
    MalformedWitnessError,
    OutOfDomainError,
    OutOfRangeError,
)
from .ground import GroundTable
from .patterns import (
    Brauer,
    Deuber,
    FpF,
    GeoArithmetic,
    MillikenTaylor,
    PolyVdW,
    Witness,
    config_values,
    generate_configuration,
)

_BLOCK = 256


@dataclass(frozen=True)
class SearchBounds:
    """Window for a witness search.

    generator_max caps every generator index; value_bound is exclusive and
    must not exceed the coloring's domain; node_budget caps the number of
    candidates examined (None = unbounded); min_value discards candidates
    producing any value below it; include_identity admits generator index 1.
    """

    generator_max: int
    value_bound: int
    node_budget: Optional[int] = None
    min_value: int = 0
    include_identity: bool = False

    def __post_init__(self):
        if self.generator_max < 2:
            raise ValueError("generator_max must be at least 2")
        if self.value_bound < 1:
            raise ValueError("value_bound must be positive")
        if self.node_budget is not None and self.node_budget < 0:
            raise ValueError("node_budget must be nonnegative")


@dataclass
class SearchReport:
    status: str  # "witness" | "exhausted" | "budget"
    witness: Optional[Witness]
    nodes: int
    skipped_out_of_range: int
    elapsed: float
    mode: str

    @property
    def found(self) -> bool:
        return self.status == "witness"


def candidate_tuples(spec, bounds: SearchBounds) -> Iterator[tuple]:
    """Canonical generator-tuple order for a family within bounds.

    Tuple layouts: fpf/deuber/mt list the sequence entries; brauer is
    (x, z); geo is (b, g, a, d) with a single-index base monomial and a
    singleton gamma; pvw is (b, c).  Progression parameters a, d and the
    exponent c run from 1 (they are not generator indices).
    """
    lo = 1 if bounds.include_identity else 2
    gens = range(lo, bounds.generator_max + 1)
    aux = range(1, bounds.generator_max + 1)
    if isinstance(spec, FpF):
        return itertools.product(gens, repeat=spec.k)
    if isinstance(spec, Brauer):
        return itertools.product(gens, repeat=2)
    if isinstance(spec, Deuber):
        return itertools.product(gens, repeat=spec.m + 1)
    if isinstance(spec, MillikenTaylor):
        # shortest sequence allowing a non-singleton block: m + 1 entries
        return itertools.product(gens, repeat=spec.m + 1)
    if isinstance(spec, GeoArithmetic):
        return itertools.product(gens, gens, aux, aux)
    if isinstance(spec, PolyVdW):
        return itertools.product(gens, aux)
    raise TypeError(f"not a pattern spec: {spec!r}")


def generators_from_tuple(spec, tup: tuple) -> dict:
    if isinstance(spec, (FpF, Deuber, MillikenTaylor)):
        return {"xs": list(tup)}
    if isinstance(spec, Brauer):
        return {"x": tup[0], "z": tup[1]}
    if isinstance(spec, GeoArithmetic):
        return {"b": [(tup[0], 1)], "gamma": [tup[1]], "a": tup[2], "d": tup[3]}
    if isinstance(spec, PolyVdW):
        return {"b": [(tup[0], 1)], "c": tup[1]}
    raise TypeError(f"not a pattern spec: {spec!r}")


def _check_candidate(spec, tup, table, coloring, bounds) -> tuple:
    """Evaluate one candidate: ("hit", color), ("no",) or ("skip",).

    Values stream in the family's canonical order and the color check
    aborts on the first mismatch, so most rejections cost a few counting
    queries.  Any out-of-window or out-of-table value skips the candidate.
    """
    gens = generators_from_tuple(spec, tup)
    color = None
    try:
        for v in config_values(spec, gens, table):
            if v < bounds.min_value or v >= bounds.value_bound:
                return ("skip",)
            c = coloring.color_of(v)
            if color is None:
                color = c
            elif c != color:
                return ("no",)
    except OutOfRangeError:
        return ("skip",)
    if color is None:
        return ("skip",)
    return ("hit", color)


def find_witness(
    table: GroundTable,
    coloring: Coloring,
    spec,
    bounds: SearchBounds,
    mode: str = "deterministic",
    workers: int = 1,
) -> SearchReport:
    """Scan the canonical candidate order for a monochromatic configuration.

    Both modes return the least witness of the canonical order; the
    deterministic mode additionally guarantees this under worker
    partitioning by evaluating fixed blocks and folding results in order.
    Fast mode always streams serially with early exit and ignores workers.
    """
    if mode not in ("deterministic", "det", "fast"):
        raise ValueError(f"unknown mode {mode!r}")
    if bounds.value_bound > coloring.bound:
        raise ValueError(
            f"value_bound {bounds.value_bound} exceeds coloring bound {coloring.bound}"
        )
    t0 = time.perf_counter()
    it = candidate_tuples(spec, bounds)
    budget = bounds.node_budget
    use_workers = workers if mode != "fast" else 1
    nodes = 0
    skipped = 0
    witness = None
    exhausted = False
    pool = ThreadPoolExecutor(max_workers=use_workers) if use_workers > 1 else None
    try:
        while True:
            space = _BLOCK if budget is None else min(_BLOCK, budget - nodes)
            if space <= 0:
                break
            block = list(itertools.islice(it, space))
            if not block:
                exhausted = True
                break
            if pool is None:
                results = (
                    _check_candidate(spec, tup, table, coloring, bounds) for tup in block
                )
            else:
                chunks = [block[i::use_workers] for i in range(use_workers)]
                # interleaved chunks rebalance cost; reassemble by position
                flat = [None] * len(block)
                futures = [
                    pool.submit(
                        lambda ch: [
                            _check_candidate(spec, tup, table, coloring, bounds)
                            for tup in ch
                        ],
                        chunk,
                    )
                    for chunk in chunks
                ]
                for w_ix, fut in enumerate(futures):
                    for j, res in enumerate(fut.result()):
                        flat[w_ix + j * use_workers] = res
                results = iter(flat)
            hit = None
            for off, res in enumerate(results):
                nodes += 1
                if res[0] == "skip":
                    skipped += 1
                elif res[0] == "hit":
                    hit = (off, res[1])
                    break
            if hit is not None:
                off, color = hit
                gens = generators_from_tuple(spec, block[off])
                config = generate_configuration(spec, gens, table)
                witness = Witness(
                    spec, gens, config, color, coloring.provenance, table.limit
                )
                break
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    status = "witness" if witness is not None else ("exhausted" if exhausted else "budget")
    return SearchReport(
        status, witness, nodes, skipped, time.perf_counter() - t0, mode
    )


def verify_witness(w: Witness, coloring: Coloring, table: GroundTable) -> bool:
    """Re-derive a witness's configuration and check its coloring claim.

    Regeneration goes through the patterns module only; none of the
    search pruning machinery is involved.  Structural inconsistencies
    raise MalformedWitnessError; a table too small for the generators
    raises OutOfRangeError.
    """
    if not isinstance(w.color, int) or not (1 <= w.color <= coloring.r):
        raise MalformedWitnessError(
            f"color {w.color} outside 1..{coloring.r}"
        )
    if any(v >= coloring.bound or v < 0 for v in w.configuration):
        raise MalformedWitnessError(
            f"configuration values must lie below the coloring bound {coloring.bound}"
        )
    try:
        regen = generate_configuration(w.spec, w.generators, table)
    except ValueError as exc:
        raise MalformedWitnessError(f"generators do not fit the spec: {exc}") from exc
    if regen != tuple(w.configuration):
        return False
    try:
        return all(coloring.color_of(v) == w.color for v in w.configuration)
    except OutOfDomainError as exc:  # pragma: no cover - guarded above
        raise MalformedWitnessError(str(exc)) from exc


def threshold(
    spec,
    r: int,
    start_bound: int,
    max_bound: int,
    table: GroundTable,
    cap: Optional[int] = None,
) -> Optional[int]:
    """Least N in [start_bound, max_bound] forcing a witness in {1..N}.

    For each N, every r-coloring of {1..N} is enumerated and checked
    against the precomputed list of candidate configurations whose
    generators and values all lie in {1..N}.  Intended for oracle-grade
    tiny parameters; the enumeration cap guards against blowups.
    """
    if r < 1:
        raise ValueError("need at least one color")
    if start_bound < 1:
        raise ValueError("start_bound must be positive")
    for n in range(start_bound, max_bound + 1):
        configs = _configs_within(spec, n, table)
        if not configs:
            continue
        kwargs = {} if cap is None else {"cap": cap}
        forced = True
        for coloring in enumerate_all(r, n, **kwargs):
            # assignment index v-1 stands for the value v in {1..N}
            word = coloring.assignment
            if not any(_mono_under(word, cfg) for cfg in configs):
                forced = False
                break
        if forced:
            return n
    return None


def _mono_under(word, cfg) -> bool:
    c0 = word[cfg[0] - 1]
    for v in cfg[1:]:
        if word[v - 1] != c0:
            return False
    return True


def _configs_within(spec, n: int, table: GroundTable) -> list:
    """Candidate configurations entirely inside {1..N}, deduplicated."""
    bounds = SearchBounds(
        generator_max=max(2, n), value_bound=n + 1, min_value=1
    )
    seen = set()
    out = []
    for tup in candidate_tuples(spec, bounds):
        gens = generators_from_tuple(spec, tup)
        try:
            cfg = generate_configuration(spec, gens, table)
        except (OutOfRangeError, ValueError):
            continue
        if cfg and cfg[0] >= 1 and cfg[-1] <= n and cfg not in seen:
            seen.add(cfg)
            out.append(cfg)
    return out

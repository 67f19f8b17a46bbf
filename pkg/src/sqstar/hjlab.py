"""Located words, combinatorial-line search, and the polynomial grid.

A located word is a finitely supported map from positions >= 1 to letters
in {0..q-1}; disjoint words concatenate by union, making a partial
commutative semigroup.  Projection h sends a word to the rank of
prod s_pos^letter, turning monochromatic combinatorial lines of words
into monochromatic rank configurations.

The polynomial grid X(q, N, d) stores, for each degree j = 1..d, a total
map from [N]^j to letters {1..q}.  Substitution overwrites the gamma^j
block of the degree-j component with a chosen letter; projection m folds
every letter (as a rank index) with its multiplicity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .colorings import Coloring
from .errors import DomainOverlapError, EnumerationCapError, OutOfRangeError
from .ground import GroundTable
from .semigroup import eval_monomial

DEFAULT_ENUMERATION_CAP = 2**24


# ---------------------------------------------------------------------------
# located words

@dataclass(frozen=True)
class LocatedWord:
    q: int
    letters: Tuple[Tuple[int, int], ...]  # (position, letter), position-sorted

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("alphabet size must be >= 1")
        pairs = tuple(sorted((int(p), int(a)) for p, a in self.letters))
        last = 0
        for p, a in pairs:
            if p < 1:
                raise ValueError("positions must be >= 1")
            if p == last:
                raise ValueError(f"position {p} repeated")
            if not 0 <= a < self.q:
                raise ValueError(f"letter {a} outside alphabet of size {self.q}")
            last = p
        object.__setattr__(self, "letters", pairs)

    @property
    def domain(self) -> frozenset:
        return frozenset(p for p, _ in self.letters)

    def letter_at(self, pos: int) -> Optional[int]:
        for p, a in self.letters:
            if p == pos:
                return a
        return None


def located_word(q: int, mapping) -> LocatedWord:
    """Build a word from a dict or iterable of (position, letter) pairs."""
    pairs = mapping.items() if isinstance(mapping, dict) else mapping
    return LocatedWord(q, tuple(pairs))


@dataclass(frozen=True)
class LocatedVariableWord:
    q: int
    letters: Tuple[Tuple[int, int], ...]
    variable_positions: frozenset

    def __post_init__(self):
        fixed = LocatedWord(self.q, self.letters)
        object.__setattr__(self, "letters", fixed.letters)
        var = frozenset(int(p) for p in self.variable_positions)
        if not var:
            raise ValueError("the variable must occur at least once")
        if any(p < 1 for p in var):
            raise ValueError("positions must be >= 1")
        if var & fixed.domain:
            raise ValueError("variable positions overlap fixed letters")
        object.__setattr__(self, "variable_positions", var)


def concat(w1: LocatedWord, w2: LocatedWord) -> LocatedWord:
    """Union of two words with disjoint supports."""
    if w1.q != w2.q:
        raise ValueError("alphabet sizes differ")
    overlap = w1.domain & w2.domain
    if overlap:
        raise DomainOverlapError(f"supports intersect at {sorted(overlap)}")
    return LocatedWord(w1.q, w1.letters + w2.letters)


def substitute(vw: LocatedVariableWord, s: int) -> LocatedWord:
    """Fill every variable position with the letter s."""
    if not 0 <= s < vw.q:
        raise ValueError(f"letter {s} outside alphabet of size {vw.q}")
    extra = tuple((p, s) for p in sorted(vw.variable_positions))
    return LocatedWord(vw.q, vw.letters + extra)


def h_project(w: LocatedWord, table: GroundTable) -> int:
    """Rank of prod s_pos^letter over the word's support; empty word -> 1."""
    return eval_monomial(list(w.letters), table)


def word_coloring(coloring: Coloring, table: GroundTable) -> Callable:
    """Color words by the numeric color of their h-projection.

    Words whose projection leaves the table or the coloring domain are
    reported uncolorable (None), which searches treat as skips.
    """

    def wc(word: LocatedWord) -> Optional[int]:
        try:
            v = h_project(word, table)
        except OutOfRangeError:
            return None
        if v >= coloring.bound:
            return None
        return coloring.color_of(v)

    return wc


# ---------------------------------------------------------------------------
# combinatorial-line search over a finite window

@dataclass
class HjReport:
    status: str  # "witness" | "exhausted" | "budget"
    alpha: Optional[LocatedWord]
    gamma: Optional[tuple]
    family_set: Optional[tuple]
    color: Optional[int]
    line: Optional[tuple]
    nodes: int
    skipped: int

    @property
    def found(self) -> bool:
        return self.status == "witness"


def _subsets_lex(items: Sequence[int]) -> Iterator[tuple]:
    yield ()
    for i, x in enumerate(items):
        for rest in _subsets_lex(items[i + 1 :]):
            yield (x,) + rest


def gamma_order(n: int) -> Iterator[tuple]:
    """Nonempty subsets of {1..n}: increasing max, then lexicographic."""
    for mx in range(1, n + 1):
        for rest in _subsets_lex(tuple(range(1, mx))):
            yield rest + (mx,)


def _alpha_order(avail: tuple, q: int) -> Iterator[tuple]:
    """Partial maps on avail: by domain size, domain, then letters."""
    for size in range(len(avail) + 1):
        for dom in itertools.combinations(avail, size):
            for letters in itertools.product(range(q), repeat=size):
                yield tuple(zip(dom, letters))


def _ap_sets(window: tuple, terms: int) -> Iterator[tuple]:
    """Arithmetic progressions with `terms` entries inside a position set."""
    allowed = set(window)
    top = max(window) if window else 0
    for a in sorted(allowed):
        for d in range(1, top + 1):
            f = tuple(a + i * d for i in range(terms))
            if f[-1] > top:
                break
            if all(t in allowed for t in f):
                yield f


def hj_search(
    q: int,
    word_color: Callable,
    n: int,
    ap_k: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> HjReport:
    """Search the window {1..n} for a monochromatic located line.

    Without a family: candidates are (gamma, alpha) with disjoint supports
    and the line {alpha + gamma x {s} : s in alphabet}.  With ap_k: an
    additional (ap_k+1)-term progression F disjoint from both, and the
    line {alpha + (gamma u {t}) x {s} : s in alphabet, t in F}.  Candidates
    whose line contains an uncolorable word are skipped and counted.
    """
    if q < 1 or n < 1:
        raise ValueError("need q >= 1 and n >= 1")
    nodes = 0
    skipped = 0
    window = tuple(range(1, n + 1))
    for gamma in gamma_order(n):
        rest = tuple(p for p in window if p not in gamma)
        if ap_k is None:
            fam_iter = [None]
        else:
            fam_iter = _ap_sets(rest, ap_k + 1)
        for fam in fam_iter:
            avail = rest if fam is None else tuple(p for p in rest if p not in fam)
            for alpha_pairs in _alpha_order(avail, q):
                if node_budget is not None and nodes >= node_budget:
                    return HjReport("budget", None, None, None, None, None, nodes, skipped)
                nodes += 1
                line = _hj_line(q, alpha_pairs, gamma, fam)
                colors = [word_color(w) for w in line]
                if any(c is None for c in colors):
                    skipped += 1
                    continue
                if len(set(colors)) == 1:
                    alpha = LocatedWord(q, alpha_pairs)
                    return HjReport(
                        "witness",
                        alpha,
                        tuple(gamma),
                        tuple(fam) if fam is not None else None,
                        colors[0],
                        tuple(line),
                        nodes,
                        skipped,
                    )
    return HjReport("exhausted", None, None, None, None, None, nodes, skipped)


def _hj_line(q, alpha_pairs, gamma, fam) -> list:
    if fam is None:
        return [
            LocatedWord(q, alpha_pairs + tuple((p, s) for p in gamma))
            for s in range(q)
        ]
    out = []
    for s in range(q):
        for t in fam:
            pairs = alpha_pairs + tuple((p, s) for p in sorted(set(gamma) | {t}))
            out.append(LocatedWord(q, pairs))
    return out


def words_over(window: Sequence[int], q: int) -> Iterator[LocatedWord]:
    """Every located word with support inside the window, canonical order."""
    for pairs in _alpha_order(tuple(window), q):
        yield LocatedWord(q, pairs)


def hj_threshold(
    q: int,
    r: int,
    max_n: int,
    ap_k: Optional[int] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Optional[int]:
    """Least window size forcing a monochromatic line for every coloring.

    Walks every r-coloring of the words over {1..n}; the number of words
    grows like (q+1)^n, so this is strictly an oracle-grade tool guarded
    by the enumeration cap.
    """
    for n in range(1, max_n + 1):
        words = list(words_over(range(1, n + 1), q))
        total = r ** len(words)
        if total > cap:
            raise EnumerationCapError(
                f"{r}**{len(words)} colorings exceed the cap of {cap}"
            )
        forced = True
        for assignment in itertools.product(range(1, r + 1), repeat=len(words)):
            table = dict(zip(words, assignment))
            if not hj_search(q, table.get, n, ap_k=ap_k).found:
                forced = False
                break
        if forced:
            return n
    return None


# ---------------------------------------------------------------------------
# the polynomial grid

class PhjPoint:
    """A point of the degree-d grid over window [n] with letters 1..q.

    Component j (1-based) is an ndarray of shape (n,)*j holding the letter
    assigned to each j-tuple of window positions.
    """

    __slots__ = ("q", "n", "d", "components")

    def __init__(self, q: int, n: int, d: int, components):
        if q < 1 or n < 1 or d < 1:
            raise ValueError("need q, n, d >= 1")
        comps = []
        if len(components) != d:
            raise ValueError(f"need {d} components, got {len(components)}")
        for j, comp in enumerate(components, start=1):
            arr = np.array(comp, dtype=np.int16).reshape((n,) * j)
            if arr.size and (arr.min() < 1 or arr.max() > q):
                raise ValueError("letters must lie in 1..q")
            arr.setflags(write=False)
            comps.append(arr)
        self.q = q
        self.n = n
        self.d = d
        self.components = tuple(comps)

    def key(self) -> tuple:
        return tuple(tuple(int(v) for v in c.ravel()) for c in self.components)

    def __eq__(self, other):
        return (
            isinstance(other, PhjPoint)
            and (self.q, self.n, self.d) == (other.q, other.n, other.d)
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((self.q, self.n, self.d, self.key()))

    def __repr__(self):
        return f"PhjPoint(q={self.q}, n={self.n}, d={self.d}, {self.key()})"

    def to_doc(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "d": self.d,
            "components": [[int(v) for v in c.ravel()] for c in self.components],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "PhjPoint":
        return cls(doc["q"], doc["n"], doc["d"], doc["components"])


def constant_point(q: int, n: int, d: int, letter: int = 1) -> PhjPoint:
    comps = [np.full((n,) * j, letter, dtype=np.int16) for j in range(1, d + 1)]
    return PhjPoint(q, n, d, comps)


def phj_substitute(point: PhjPoint, gamma, xs: Sequence[int]) -> PhjPoint:
    """Overwrite each gamma^j block of component j with the letter xs[j-1]."""
    gamma = sorted(set(int(t) for t in gamma))
    if not gamma:
        raise ValueError("gamma must be nonempty")
    if gamma[0] < 1 or gamma[-1] > point.n:
        raise ValueError(f"gamma must lie inside 1..{point.n}")
    if len(xs) != point.d:
        raise ValueError(f"need {point.d} letters, got {len(xs)}")
    for x in xs:
        if not 1 <= x <= point.q:
            raise ValueError(f"letter {x} outside 1..{point.q}")
    idx = [g - 1 for g in gamma]
    comps = []
    for j, comp in enumerate(point.components, start=1):
        arr = comp.copy()
        arr[np.ix_(*([idx] * j))] = xs[j - 1]
        comps.append(arr)
    return PhjPoint(point.q, point.n, point.d, comps)


def m_project(point: PhjPoint, table: GroundTable) -> int:
    """Rank of the product of all letters, with multiplicity, as rank indices."""
    flat = np.concatenate([c.ravel() for c in point.components])
    counts = np.bincount(flat, minlength=point.q + 1)
    mono = [(int(v), int(counts[v])) for v in range(1, point.q + 1) if counts[v]]
    return eval_monomial(mono, table)


def point_coloring(coloring: Coloring, table: GroundTable) -> Callable:
    """Color grid points by the numeric color of their m-projection."""

    def pc(point: PhjPoint) -> Optional[int]:
        try:
            v = m_project(point, table)
        except OutOfRangeError:
            return None
        if v >= coloring.bound:
            return None
        return coloring.color_of(v)

    return pc


@dataclass
class PhjReport:
    status: str
    point: Optional[PhjPoint]
    gamma: Optional[tuple]
    color: Optional[int]
    line: Optional[tuple]
    nodes: int
    skipped: int

    @property
    def found(self) -> bool:
        return self.status == "witness"


def _free_cells(n: int, d: int, gamma: tuple) -> list:
    """Grid cells outside every gamma^j block, as (j, multi-index) pairs."""
    gset = set(gamma)
    cells = []
    for j in range(1, d + 1):
        for tup in itertools.product(range(1, n + 1), repeat=j):
            if not all(t in gset for t in tup):
                cells.append((j, tup))
    return cells


def phj_search(
    q: int,
    k_colors: int,
    d: int,
    n: int,
    point_color: Callable,
    node_budget: Optional[int] = None,
) -> PhjReport:
    """Search the degree-d grid over {1..n} for a monochromatic line.

    Candidates are (gamma, base point) pairs; base points carry letter 1
    on every gamma^j block (substitution overwrites those blocks, so
    nothing is lost) and range over all letters elsewhere.  The line is
    the q^d substitutions of the blocks.  k_colors only documents the
    expected color count; the coloring callable is authoritative.
    """
    if q < 1 or d < 1 or n < 1:
        raise ValueError("need q, d, n >= 1")
    nodes = 0
    skipped = 0
    for gamma in gamma_order(n):
        cells = _free_cells(n, d, gamma)
        base0 = constant_point(q, n, d, 1)
        for values in itertools.product(range(1, q + 1), repeat=len(cells)):
            if node_budget is not None and nodes >= node_budget:
                return PhjReport("budget", None, None, None, None, nodes, skipped)
            nodes += 1
            comps = [c.copy() for c in base0.components]
            for (j, tup), v in zip(cells, values):
                comps[j - 1][tuple(t - 1 for t in tup)] = v
            base = PhjPoint(q, n, d, comps)
            line = [
                phj_substitute(base, gamma, xs)
                for xs in itertools.product(range(1, q + 1), repeat=d)
            ]
            colors = [point_color(p) for p in line]
            if any(c is None for c in colors):
                skipped += 1
                continue
            if len(set(colors)) == 1:
                return PhjReport(
                    "witness", base, tuple(gamma), colors[0], tuple(line), nodes, skipped
                )
    return PhjReport("exhausted", None, None, None, None, nodes, skipped)


def grid_points(q: int, n: int, d: int) -> Iterator[PhjPoint]:
    """Every grid point, letters enumerated row-major, degree 1 slowest."""
    sizes = [n**j for j in range(1, d + 1)]
    total = sum(sizes)
    for flat in itertools.product(range(1, q + 1), repeat=total):
        comps = []
        pos = 0
        for j, size in enumerate(sizes, start=1):
            comps.append(np.array(flat[pos : pos + size]).reshape((n,) * j))
            pos += size
        yield PhjPoint(q, n, d, comps)


def phj_threshold(
    q: int,
    r: int,
    d: int,
    max_n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Optional[int]:
    """Least window size forcing a monochromatic grid line for every coloring."""
    for n in range(1, max_n + 1):
        points = list(grid_points(q, n, d))
        total = r ** len(points)
        if total > cap:
            raise EnumerationCapError(
                f"{r}**{len(points)} colorings exceed the cap of {cap}"
            )
        forced = True
        for assignment in itertools.product(range(1, r + 1), repeat=len(points)):
            lookup = dict(zip(points, assignment))
            if not phj_search(q, r, d, n, lookup.get).found:
                forced = False
                break
        if forced:
            return n
    return None

"""Independent brute-force oracles the tests compare against.

Nothing here goes through the package's sieve, product, or search code:
membership is literal two-squares enumeration, folds go through pairwise
star/power only, thresholds walk colorings as raw words, and the line
oracles re-enumerate line sets from first principles.
"""

import itertools
from functools import reduce

import numpy as np

from sqstar.semigroup import power, star


def two_squares_flags(limit: int) -> np.ndarray:
    """flags[n] = 1 iff n = a^2 + b^2, by enumerating all pairs."""
    flags = np.zeros(limit, dtype=np.uint8)
    amax = int(limit**0.5) + 1
    for a in range(amax):
        a2 = a * a
        if a2 >= limit:
            break
        b2 = np.arange(a, amax) ** 2
        vals = a2 + b2
        flags[vals[vals < limit]] = 1
    return flags


def members_brute(limit: int) -> np.ndarray:
    return np.flatnonzero(two_squares_flags(limit)).astype(np.uint64)


def fold_eval(factors, table) -> int:
    """Monomial evaluation by pairwise star over power chains only."""
    acc = 1
    for x, e in factors:
        acc = star(acc, power(x, e, table), table)
    return acc


def fold_star(ranks, table) -> int:
    return reduce(lambda a, b: star(a, b, table), ranks, 1)


def mono_configs_exist(word, configs) -> bool:
    """word[v-1] is the color of value v; any config monochromatic?"""
    for cfg in configs:
        c0 = word[cfg[0] - 1]
        if all(word[v - 1] == c0 for v in cfg[1:]):
            return True
    return False


def threshold_oracle(configs_for, r: int, start: int, stop: int):
    """Least N in [start, stop] such that every coloring word has a mono config.

    configs_for(N) must return the candidate configurations with all
    values in {1..N}.  Colorings are walked as raw tuples, no package
    coloring machinery involved.
    """
    for n in range(start, stop + 1):
        configs = [c for c in configs_for(n) if c and max(c) <= n and min(c) >= 1]
        if not configs:
            continue
        if all(
            mono_configs_exist(word, configs)
            for word in itertools.product(range(r), repeat=n)
        ):
            return n
    return None


def avoider_coloring(configs, r: int, n: int):
    """A coloring word of {1..n} with no monochromatic config, or None."""
    for word in itertools.product(range(1, r + 1), repeat=n):
        ok = True
        for cfg in configs:
            c0 = word[cfg[0] - 1]
            if all(word[v - 1] == c0 for v in cfg[1:]):
                ok = False
                break
        if ok:
            return word
    return None


# ---------------------------------------------------------------------------
# located-word line oracle (independent of the hjlab module internals)

def all_words(n: int, q: int):
    """Every finitely supported word over {1..n} as a frozenset of pairs."""
    out = []
    for mask in itertools.product(range(q + 1), repeat=n):
        # digit 0 = absent, digit l+1 = letter l
        out.append(frozenset((p + 1, d - 1) for p, d in enumerate(mask) if d))
    return out


def all_lines(n: int, q: int):
    """Every combinatorial line over the window, as a tuple of words."""
    positions = list(range(1, n + 1))
    lines = []
    for gsize in range(1, n + 1):
        for gamma in itertools.combinations(positions, gsize):
            rest = [p for p in positions if p not in gamma]
            for asz in range(len(rest) + 1):
                for dom in itertools.combinations(rest, asz):
                    for letters in itertools.product(range(q), repeat=asz):
                        alpha = frozenset(zip(dom, letters))
                        line = tuple(
                            alpha | frozenset((p, s) for p in gamma)
                            for s in range(q)
                        )
                        lines.append(line)
    return lines


def hj_threshold_oracle(q: int, r: int, max_n: int):
    """Minimal window forcing a monochromatic line for every word coloring."""
    for n in range(1, max_n + 1):
        words = all_words(n, q)
        lines = all_lines(n, q)
        forced = True
        for colors in itertools.product(range(r), repeat=len(words)):
            cmap = dict(zip(words, colors))
            if not any(len({cmap[w] for w in line}) == 1 for line in lines):
                forced = False
                break
        if forced:
            return n
    return None


def hj_avoider_oracle(q: int, r: int, n: int):
    """A word coloring of the window with no monochromatic line, or None."""
    words = all_words(n, q)
    lines = all_lines(n, q)
    for colors in itertools.product(range(1, r + 1), repeat=len(words)):
        cmap = dict(zip(words, colors))
        if not any(len({cmap[w] for w in line}) == 1 for line in lines):
            return cmap
    return None


# ---------------------------------------------------------------------------
# polynomial grid line oracle

def grid_tuples(q: int, n: int, d: int):
    """All grid points as flat letter tuples (component j has n^j cells)."""
    total = sum(n**j for j in range(1, d + 1))
    return list(itertools.product(range(1, q + 1), repeat=total))


def grid_lines(q: int, n: int, d: int):
    """All substitution lines over the grid, as tuples of flat points."""
    sizes = [n**j for j in range(1, d + 1)]
    offsets = [0]
    for s in sizes[:-1]:
        offsets.append(offsets[-1] + s)
    cell_index = {}
    for j in range(1, d + 1):
        for flat_i, tup in enumerate(
            itertools.product(range(1, n + 1), repeat=j)
        ):
            cell_index[(j, tup)] = offsets[j - 1] + flat_i
    lines = []
    points = grid_tuples(q, n, d)
    for gsize in range(1, n + 1):
        for gamma in itertools.combinations(range(1, n + 1), gsize):
            gset = set(gamma)
            blocks = [
                [
                    cell_index[(j, tup)]
                    for tup in itertools.product(gamma, repeat=j)
                ]
                for j in range(1, d + 1)
            ]
            seen = set()
            for pt in points:
                line = []
                for xs in itertools.product(range(1, q + 1), repeat=d):
                    v = list(pt)
                    for j, block in enumerate(blocks):
                        for ci in block:
                            v[ci] = xs[j]
                    line.append(tuple(v))
                key = tuple(sorted(set(line)))
                if key not in seen:
                    seen.add(key)
                    lines.append(tuple(line))
    return lines


def phj_threshold_oracle(q: int, r: int, d: int, max_n: int):
    for n in range(1, max_n + 1):
        points = grid_tuples(q, n, d)
        lines = grid_lines(q, n, d)
        forced = True
        for colors in itertools.product(range(r), repeat=len(points)):
            cmap = dict(zip(points, colors))
            if not any(len({cmap[p] for p in line}) == 1 for line in lines):
                forced = False
                break
        if forced:
            return n
    return None

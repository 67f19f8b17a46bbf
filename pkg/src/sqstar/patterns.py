"""The six monochromatic configuration families over the induced product.

Every family reduces to monomial evaluations: a configuration is a set of
ranks, each the count of ground-set members below one integer product.
Families:

  fpf      finite products of a fixed rank sequence (all nonempty subsets)
  brauer   {x, z} plus the ranks of s_x^j * s_z for j = 1..k
  deuber   (m, p)-set: x_0 plus ranks of s_{x_0}^{n_0}..s_{x_{j-1}}^{n_{j-1}} * s_{x_j}
  mt       block products of a sequence combined by a closed-form map
  geo      ranks of s_b * ((prod_{t in gamma} s_t) * s_{a+i*d})^j, 0 <= i,j <= k
  pvw      ranks of s_b * s_{a_{i1}}^c * s_{a_{i2}}^{c^2} * ... * s_{a_{id}}^{c^d}

Generator indices are everywhere >= 1: rank 0 is absorbing and would
collapse any configuration to {0}.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .errors import MalformedWitnessError, OrderViolationError, OutOfRangeError
from .ground import GroundTable
from .semigroup import Monomial, eval_monomial, finite_products


# ---------------------------------------------------------------------------
# closed-form combination maps for the mt family

@dataclass(frozen=True)
class PhiProjection:
    i: int  # 1-based coordinate

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("projection coordinate must be >= 1")


@dataclass(frozen=True)
class PhiSum:
    pass


@dataclass(frozen=True)
class PhiProduct:
    pass


@dataclass(frozen=True)
class PhiLinear:
    coeffs: Tuple[int, ...]
    constant: int = 0

    def __post_init__(self):
        if any(c < 0 for c in self.coeffs) or self.constant < 0:
            raise ValueError("linear coefficients must be nonnegative")


@dataclass(frozen=True)
class PhiStarFold:
    pass


def phi_eval(phi, values: Sequence[int], table: GroundTable) -> int:
    """Apply a combination map to a tuple of ranks."""
    if isinstance(phi, PhiProjection):
        if phi.i > len(values):
            raise ValueError(f"projection {phi.i} exceeds arity {len(values)}")
        return int(values[phi.i - 1])
    if isinstance(phi, PhiSum):
        return int(sum(values))
    if isinstance(phi, PhiProduct):
        return int(math.prod(values))
    if isinstance(phi, PhiLinear):
        if len(phi.coeffs) != len(values):
            raise ValueError(
                f"linear map of arity {len(phi.coeffs)} applied to {len(values)} values"
            )
        return int(sum(c * v for c, v in zip(phi.coeffs, values)) + phi.constant)
    if isinstance(phi, PhiStarFold):
        return eval_monomial([(v, 1) for v in values], table)
    raise TypeError(f"not a combination map: {phi!r}")


def phi_to_str(phi) -> str:
    if isinstance(phi, PhiProjection):
        return f"proj:{phi.i}"
    if isinstance(phi, PhiSum):
        return "sum"
    if isinstance(phi, PhiProduct):
        return "product"
    if isinstance(phi, PhiLinear):
        coeffs = ";".join(str(c) for c in phi.coeffs)
        return f"linear:{coeffs}:{phi.constant}"
    if isinstance(phi, PhiStarFold):
        return "starfold"
    raise TypeError(f"not a combination map: {phi!r}")


def phi_from_str(text: str):
    parts = text.split(":")
    head = parts[0]
    try:
        if head in ("proj", "projection") and len(parts) == 2:
            return PhiProjection(int(parts[1]))
        if head == "sum" and len(parts) == 1:
            return PhiSum()
        if head == "product" and len(parts) == 1:
            return PhiProduct()
        if head == "starfold" and len(parts) == 1:
            return PhiStarFold()
        if head == "linear" and len(parts) == 3:
            coeffs = tuple(int(c) for c in parts[1].split(";")) if parts[1] else ()
            return PhiLinear(coeffs, int(parts[2]))
    except ValueError as exc:
        raise ValueError(f"bad combination map {text!r}: {exc}") from exc
    raise ValueError(f"unknown combination map {text!r}")


# ---------------------------------------------------------------------------
# pattern specifications

@dataclass(frozen=True)
class FpF:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("sequence length must be >= 1")


@dataclass(frozen=True)
class Brauer:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("progression length must be >= 1")


@dataclass(frozen=True)
class Deuber:
    m: int
    p: int

    def __post_init__(self):
        if self.m < 1 or self.p < 1:
            raise ValueError("m and p must be >= 1")


@dataclass(frozen=True)
class MillikenTaylor:
    m: int
    phi: object

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("block count must be >= 1")
        phi_to_str(self.phi)  # rejects anything outside the builtin family


@dataclass(frozen=True)
class GeoArithmetic:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("grid size must be >= 1")


@dataclass(frozen=True)
class PolyVdW:
    d: int
    sets: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree must be >= 1")
        if not self.sets:
            raise ValueError("need at least one index set")
        sets = tuple(tuple(int(a) for a in f) for f in self.sets)
        object.__setattr__(self, "sets", sets)
        for f in sets:
            if len(f) != self.d:
                raise ValueError(f"index set {f} does not have {self.d} members")
            if len(set(f)) != len(f):
                raise ValueError(f"index set {f} has repeated members")
            if min(f) < 1:
                raise ValueError("index sets must contain ranks >= 1")


FAMILY_NAMES = {
    FpF: "fpf",
    Brauer: "brauer",
    Deuber: "deuber",
    MillikenTaylor: "mt",
    GeoArithmetic: "geo",
    PolyVdW: "pvw",
}


def family_name(spec) -> str:
    try:
        return FAMILY_NAMES[type(spec)]
    except KeyError:
        raise TypeError(f"not a pattern spec: {spec!r}") from None


# ---------------------------------------------------------------------------
# generation

def _require_positive(indices: Iterable[int], what: str) -> None:
    for x in indices:
        if x < 1:
            raise ValueError(f"{what} must be >= 1, got {x}")


def gen_fpf(xs: Sequence[int], table: GroundTable) -> set:
    """All nonempty-subset products of the ranks xs."""
    _require_positive(xs, "sequence entries")
    return finite_products(xs, table)


def gen_brauer(x: int, z: int, k: int, table: GroundTable) -> set:
    """{x, z} together with the ranks of s_x^j * s_z, j = 1..k."""
    _require_positive((x, z), "generators")
    out = {x, z}
    for j in range(1, k + 1):
        out.add(eval_monomial([(x, j), (z, 1)], table))
    return out


def gen_deuber(xs: Sequence[int], p: int, table: GroundTable) -> set:
    """(m, p)-set generated by x_0..x_m with exponents in {0..p}."""
    _require_positive(xs, "generators")
    if len(xs) < 2:
        raise ValueError("need x_0 and at least one further generator")
    if p < 0:
        raise ValueError("exponent cap must be nonnegative")
    out = {xs[0]}
    m = len(xs) - 1
    for j in range(1, m + 1):
        for expo in itertools.product(range(p + 1), repeat=j):
            mono = [(xs[i], expo[i]) for i in range(j)] + [(xs[j], 1)]
            out.add(eval_monomial(mono, table))
    return out


def block_tuples(length: int, m: int) -> Iterator[tuple]:
    """All tuples (F_1 < ... < F_m) of nonempty index blocks inside {1..length}.

    Blocks are sets of 1-based positions with max(F_i) < min(F_{i+1}).
    Enumeration is deterministic: each block by size then lexicographically,
    earlier blocks varying slowest.
    """

    def rec(start, m_left):
        if m_left == 0:
            yield ()
            return
        room = length - start + 1
        for size in range(1, room + 1):
            for comb in itertools.combinations(range(start, length + 1), size):
                for rest in rec(comb[-1] + 1, m_left - 1):
                    yield (comb,) + rest

    return rec(1, m)


def gen_milliken_taylor(
    xs: Sequence[int], fs: Sequence[Sequence[int]], phi, table: GroundTable
) -> int:
    """Combine the block products of xs over the blocks fs with phi.

    fs lists 1-based position blocks into xs, strictly ordered:
    max(F_i) < min(F_{i+1}).  The value is phi(v_1, ..., v_m) where v_i
    is the rank of the product of s-values of xs over F_i.
    """
    _require_positive(xs, "sequence entries")
    blocks = [sorted(set(int(t) for t in f)) for f in fs]
    if not blocks:
        raise ValueError("need at least one block")
    for f in blocks:
        if not f:
            raise OrderViolationError("blocks must be nonempty")
        if f[0] < 1 or f[-1] > len(xs):
            raise ValueError(f"block {f} outside positions 1..{len(xs)}")
    for a, b in zip(blocks, blocks[1:]):
        if a[-1] >= b[0]:
            raise OrderViolationError(
                f"blocks must be strictly ordered, got max {a[-1]} >= min {b[0]}"
            )
    values = [
        eval_monomial([(xs[t - 1], 1) for t in f], table) for f in blocks
    ]
    return phi_eval(phi, values, table)


def mt_configuration(
    xs: Sequence[int], m: int, phi, table: GroundTable
) -> list:
    """Values of all ordered m-block families over positions of xs."""
    out = []
    for fs in block_tuples(len(xs), m):
        out.append(gen_milliken_taylor(xs, fs, phi, table))
    if not out:
        raise ValueError(f"no {m}-block families fit into {len(xs)} positions")
    return out


def gen_geo_arithmetic(
    b_monomial: Monomial, gamma: Sequence[int], a: int, d: int, k: int, table: GroundTable
) -> set:
    """Ranks of s_b * ((prod_{t in gamma} s_t) * s_{a+i*d})^j for 0 <= i,j <= k."""
    gamma = sorted(set(int(t) for t in gamma))
    if not gamma:
        raise ValueError("gamma must be nonempty")
    _require_positive(gamma, "gamma entries")
    _require_positive((a, d), "progression parameters")
    _require_positive((t for t, _ in b_monomial), "base monomial ranks")
    out = set()
    base = list(b_monomial)
    for i in range(k + 1):
        for j in range(k + 1):
            mono = base + [(t, j) for t in gamma] + [(a + i * d, j)]
            out.add(eval_monomial(mono, table))
    return out


def gen_poly_vdw(
    b_monomial: Monomial, c: int, sets: Sequence[Sequence[int]], table: GroundTable
) -> set:
    """Ranks of s_b * s_{a_{i1}}^c * ... * s_{a_{id}}^{c^d} over the index sets."""
    if c < 1:
        raise ValueError("c must be >= 1")
    _require_positive((t for t, _ in b_monomial), "base monomial ranks")
    base = list(b_monomial)
    out = set()
    for f in sets:
        f = list(f)
        _require_positive(f, "index set entries")
        mono = base + [(a, c ** (j + 1)) for j, a in enumerate(f)]
        out.add(eval_monomial(mono, table))
    return out


def check_monochromatic(config, coloring) -> Optional[int]:
    """The common color of a configuration, or None if colors differ."""
    color = None
    empty = True
    for v in config:
        empty = False
        c = coloring.color_of(v)
        if color is None:
            color = c
        elif c != color:
            return None
    if empty:
        return None
    return color


# ---------------------------------------------------------------------------
# uniform access used by search and verification

def config_values(spec, generators: dict, table: GroundTable) -> Iterator[int]:
    """Stream the configuration values of a family in its canonical order.

    The search consumes this incrementally (pruning on color mismatch);
    generate_configuration materializes the same stream.  Duplicate values
    may appear in the stream; configurations are their dedup.
    """
    if isinstance(spec, FpF):
        xs = _want_indices(generators, "xs", spec.k)
        svals = [table.element(x) for x in xs]
        prods = [0] * (1 << spec.k)
        prods[0] = 1
        for mask in range(1, 1 << spec.k):
            low = (mask & -mask).bit_length() - 1
            p = prods[mask & (mask - 1)] * svals[low]
            if p >= table.limit:
                raise OutOfRangeError(
                    f"subset product {p} beyond table limit {table.limit}"
                )
            prods[mask] = p
            yield table.count_below(p)
    elif isinstance(spec, Brauer):
        x = _want_int(generators, "x")
        z = _want_int(generators, "z")
        _require_positive((x, z), "generators")
        yield x
        yield z
        for j in range(1, spec.k + 1):
            yield eval_monomial([(x, j), (z, 1)], table)
    elif isinstance(spec, Deuber):
        xs = _want_indices(generators, "xs", spec.m + 1)
        _require_positive(xs, "generators")
        yield xs[0]
        for j in range(1, spec.m + 1):
            for expo in itertools.product(range(spec.p + 1), repeat=j):
                mono = [(xs[i], expo[i]) for i in range(j)] + [(xs[j], 1)]
                yield eval_monomial(mono, table)
    elif isinstance(spec, MillikenTaylor):
        xs = _want_indices(generators, "xs", None)
        any_blocks = False
        for fs in block_tuples(len(xs), spec.m):
            any_blocks = True
            yield gen_milliken_taylor(xs, fs, spec.phi, table)
        if not any_blocks:
            raise ValueError(
                f"no {spec.m}-block families fit into {len(xs)} positions"
            )
    elif isinstance(spec, GeoArithmetic):
        b = _want_monomial(generators, "b")
        gamma = sorted(set(_want_indices(generators, "gamma", None)))
        a = _want_int(generators, "a")
        d = _want_int(generators, "d")
        if not gamma:
            raise ValueError("gamma must be nonempty")
        _require_positive(gamma, "gamma entries")
        _require_positive((a, d), "progression parameters")
        _require_positive((t for t, _ in b), "base monomial ranks")
        for i in range(spec.k + 1):
            for j in range(spec.k + 1):
                mono = list(b) + [(t, j) for t in gamma] + [(a + i * d, j)]
                yield eval_monomial(mono, table)
    elif isinstance(spec, PolyVdW):
        b = _want_monomial(generators, "b")
        c = _want_int(generators, "c")
        if c < 1:
            raise ValueError("c must be >= 1")
        _require_positive((t for t, _ in b), "base monomial ranks")
        for f in spec.sets:
            mono = list(b) + [(a, c ** (j + 1)) for j, a in enumerate(f)]
            yield eval_monomial(mono, table)
    else:
        raise TypeError(f"not a pattern spec: {spec!r}")


def generate_configuration(spec, generators: dict, table: GroundTable) -> tuple:
    """Full configuration for a generator assignment, sorted ascending."""
    return tuple(sorted(set(config_values(spec, generators, table))))


def _want_int(generators: dict, key: str) -> int:
    if key not in generators:
        raise ValueError(f"generators missing {key!r}")
    v = generators[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"generator {key!r} must be an integer")
    return v


def _want_indices(generators: dict, key: str, expect: Optional[int]) -> list:
    if key not in generators:
        raise ValueError(f"generators missing {key!r}")
    xs = generators[key]
    if not isinstance(xs, (list, tuple)) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in xs
    ):
        raise ValueError(f"generator {key!r} must be a list of integers")
    xs = list(xs)
    if expect is not None and len(xs) != expect:
        raise ValueError(f"generator {key!r} must have {expect} entries, got {len(xs)}")
    if not xs:
        raise ValueError(f"generator {key!r} must be nonempty")
    _require_positive(xs, f"generator {key!r} entries")
    return xs


def _want_monomial(generators: dict, key: str) -> list:
    if key not in generators:
        raise ValueError(f"generators missing {key!r}")
    mono = generators[key]
    if not isinstance(mono, (list, tuple)):
        raise ValueError(f"generator {key!r} must be a list of (rank, exponent) pairs")
    out = []
    for pair in mono:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"generator {key!r} entries must be (rank, exponent) pairs")
        t, e = pair
        ok = all(isinstance(v, int) and not isinstance(v, bool) for v in (t, e))
        if not ok or t < 1 or e < 0:
            raise ValueError(f"bad monomial factor ({t}, {e}) in generator {key!r}")
        out.append((t, e))
    return out


# ---------------------------------------------------------------------------
# witnesses and their documents

@dataclass(frozen=True)
class Witness:
    spec: object
    generators: dict
    configuration: Tuple[int, ...]
    color: int
    coloring_provenance: str
    table_limit: int


def spec_to_doc(spec) -> dict:
    name = family_name(spec)
    if isinstance(spec, FpF):
        params = {"k": spec.k}
    elif isinstance(spec, Brauer):
        params = {"k": spec.k}
    elif isinstance(spec, Deuber):
        params = {"m": spec.m, "p": spec.p}
    elif isinstance(spec, MillikenTaylor):
        params = {"m": spec.m, "phi": phi_to_str(spec.phi)}
    elif isinstance(spec, GeoArithmetic):
        params = {"k": spec.k}
    else:
        params = {"d": spec.d, "sets": [list(f) for f in spec.sets]}
    return {"family": name, "params": params}


def spec_from_doc(doc: dict):
    try:
        name = doc["family"]
        params = doc["params"]
        if name == "fpf":
            return FpF(int(params["k"]))
        if name == "brauer":
            return Brauer(int(params["k"]))
        if name == "deuber":
            return Deuber(int(params["m"]), int(params["p"]))
        if name == "mt":
            return MillikenTaylor(int(params["m"]), phi_from_str(params["phi"]))
        if name == "geo":
            return GeoArithmetic(int(params["k"]))
        if name == "pvw":
            return PolyVdW(
                int(params["d"]), tuple(tuple(int(a) for a in f) for f in params["sets"])
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedWitnessError(f"bad pattern spec document: {exc}") from exc
    raise MalformedWitnessError(f"unknown family {name!r}")


def witness_to_doc(w: Witness) -> dict:
    return {
        "spec": spec_to_doc(w.spec),
        "generators": generators_to_doc(w.spec, w.generators),
        "configuration": [int(v) for v in w.configuration],
        "color": int(w.color),
        "coloring-provenance": w.coloring_provenance,
        "table-limit": int(w.table_limit),
    }


def witness_from_doc(doc) -> Witness:
    if not isinstance(doc, dict):
        raise MalformedWitnessError("witness document must be a JSON object")
    for key in (
        "spec",
        "generators",
        "configuration",
        "color",
        "coloring-provenance",
        "table-limit",
    ):
        if key not in doc:
            raise MalformedWitnessError(f"witness document missing key {key!r}")
    spec = spec_from_doc(doc["spec"])
    gens = generators_from_doc(spec, doc["generators"])
    config = doc["configuration"]
    if not isinstance(config, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in config
    ):
        raise MalformedWitnessError("configuration must be a list of ranks")
    if sorted(config) != config or len(set(config)) != len(config):
        raise MalformedWitnessError("configuration must be sorted and duplicate-free")
    color = doc["color"]
    if not isinstance(color, int) or isinstance(color, bool) or color < 1:
        raise MalformedWitnessError("color must be a positive integer")
    prov = doc["coloring-provenance"]
    if not isinstance(prov, str):
        raise MalformedWitnessError("coloring-provenance must be a string")
    limit = doc["table-limit"]
    if not isinstance(limit, int) or isinstance(limit, bool) or limit < 2:
        raise MalformedWitnessError("table-limit must be an integer >= 2")
    return Witness(spec, gens, tuple(config), color, prov, limit)


def generators_to_doc(spec, gens: dict) -> dict:
    if isinstance(spec, (FpF, Deuber, MillikenTaylor)):
        return {"xs": [int(x) for x in gens["xs"]]}
    if isinstance(spec, Brauer):
        return {"x": int(gens["x"]), "z": int(gens["z"])}
    if isinstance(spec, GeoArithmetic):
        return {
            "b": [[int(t), int(e)] for t, e in gens["b"]],
            "gamma": [int(t) for t in gens["gamma"]],
            "a": int(gens["a"]),
            "d": int(gens["d"]),
        }
    if isinstance(spec, PolyVdW):
        return {"b": [[int(t), int(e)] for t, e in gens["b"]], "c": int(gens["c"])}
    raise TypeError(f"not a pattern spec: {spec!r}")


def generators_from_doc(spec, doc) -> dict:
    if not isinstance(doc, dict):
        raise MalformedWitnessError("generators must be a JSON object")
    try:
        if isinstance(spec, (FpF, Deuber, MillikenTaylor)):
            expect = None
            if isinstance(spec, FpF):
                expect = spec.k
            elif isinstance(spec, Deuber):
                expect = spec.m + 1
            xs = _want_indices(doc, "xs", expect)
            return {"xs": xs}
        if isinstance(spec, Brauer):
            gens = {"x": _want_int(doc, "x"), "z": _want_int(doc, "z")}
            _require_positive(gens.values(), "generators")
            return gens
        if isinstance(spec, GeoArithmetic):
            return {
                "b": [tuple(p) for p in _want_monomial(doc, "b")],
                "gamma": _want_indices(doc, "gamma", None),
                "a": _want_int(doc, "a"),
                "d": _want_int(doc, "d"),
            }
        if isinstance(spec, PolyVdW):
            return {"b": [tuple(p) for p in _want_monomial(doc, "b")], "c": _want_int(doc, "c")}
    except ValueError as exc:
        raise MalformedWitnessError(str(exc)) from exc
    raise MalformedWitnessError(f"not a pattern spec: {spec!r}")


def save_witness(w: Witness, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(witness_to_doc(w), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_witness(path: str) -> Witness:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedWitnessError(f"not valid JSON: {exc}") from exc
    return witness_from_doc(doc)

"""Finite ordered Bratteli diagrams, telescoping, and odometer certificates.

Orders are stored as the coding words c(w) themselves: the word of a
target vertex lists the sources of its incoming edges in increasing edge
order, so telescoping is word substitution.  Level 0 always has the
single root vertex.
"""

import hashlib
import json
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from .core import OrderingTable
from .errors import ShapeMismatch


@dataclass(frozen=True)
class OrderedDiagram:
    """codings[n-1][w] is the word of level-(n-1) source ids for target w
    at level n; every word is nonempty and every source is used."""

    codings: tuple  # tuple over levels 1..N of tuples of word-tuples

    def __post_init__(self):
        sizes = self.level_sizes
        for n, level in enumerate(self.codings, start=1):
            if not level:
                raise ValueError(f"level {n} has no vertices")
            seen = set()
            for w, word in enumerate(level):
                if not word:
                    raise ValueError(f"empty coding at level {n} vertex {w}")
                bad = [s for s in word if not 0 <= s < sizes[n - 1]]
                if bad:
                    raise ValueError(f"bad source ids {bad} at level {n}")
                seen.update(word)
            if seen != set(range(sizes[n - 1])):
                raise ValueError(f"sources not surjective into level {n}")

    @property
    def depth(self):
        return len(self.codings)

    @property
    def level_sizes(self):
        return [1] + [len(level) for level in self.codings]

    def coding(self, n: int, w: int):
        return self.codings[n - 1][w]

    def to_json(self) -> str:
        return json.dumps({"levels": self.level_sizes,
                           "coding": [[list(word) for word in level]
                                      for level in self.codings]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "OrderedDiagram":
        doc = json.loads(text)
        codings = tuple(tuple(tuple(word) for word in level)
                        for level in doc["coding"])
        diagram = cls(codings)
        if doc.get("levels") and doc["levels"] != diagram.level_sizes:
            raise ValueError("levels field disagrees with coding shape")
        return diagram


def vertex_coding(d: OrderedDiagram, n: int, w: int) -> tuple:
    """c(w): sources of the incoming edges of w in increasing edge order."""
    return d.coding(n, w)


def _primitive_root(word: tuple) -> tuple:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def uniform_base(words) -> Optional[tuple]:
    """Shortest v with every word a positive power of v, if one exists."""
    words = [tuple(w) for w in words]
    base = _primitive_root(words[0])
    for w in words[1:]:
        if len(w) % len(base) or base * (len(w) // len(base)) != w:
            return None
    return base


def is_uniformly_ordered(d: OrderedDiagram, n: int) -> Optional[tuple]:
    """The base word when level n is uniformly ordered, else None."""
    return uniform_base(d.codings[n - 1])


def _window_codings(d: OrderedDiagram, a: int, b: int) -> tuple:
    """Codings of level-b vertices over level-a ids, by substitution."""
    expanded = [(v,) for v in range(d.level_sizes[a])]
    for lvl in range(a + 1, b + 1):
        expanded = [tuple(s for src in word for s in expanded[src])
                    for word in d.codings[lvl - 1]]
    return tuple(expanded)


def telescope(d: OrderedDiagram, cuts) -> OrderedDiagram:
    """Compose levels between consecutive cuts by word substitution."""
    cuts = list(cuts)
    if cuts[0] != 0 or cuts[-1] != d.depth or sorted(set(cuts)) != cuts:
        raise ValueError("cuts must increase from 0 to the last level")
    return OrderedDiagram(tuple(_window_codings(d, a, b)
                                for a, b in zip(cuts, cuts[1:])))


@dataclass
class OdometerCertificate:
    found: bool
    segments: list  # (start level, end level, base word) per telescoped level
    searched_depth: int
    message: str = ""

    @property
    def cuts(self):
        return [0] + [end for _, end, _ in self.segments]


def odometer_certificate(d: OrderedDiagram, search_depth: int) -> OdometerCertificate:
    """Greedy search for a telescoping making every level uniformly ordered.

    Windows of up to `search_depth` consecutive levels are telescoped and
    tested left to right.  Success certifies conjugacy to an odometer for
    the finite diagram; failure is reported, never asserted as a negative.
    """
    segments = []
    pos = 0
    while pos < d.depth:
        base = None
        for width in range(1, min(search_depth, d.depth - pos) + 1):
            base = uniform_base(_window_codings(d, pos, pos + width))
            if base is not None:
                segments.append((pos, pos + width, base))
                pos += width
                break
        if base is None:
            return OdometerCertificate(False, segments, search_depth,
                                       "NO-CERTIFICATE-FOUND")
    return OdometerCertificate(True, segments, search_depth,
                               "uniformly ordered after telescoping")


@dataclass(frozen=True)
class Shape:
    """Bipartite level pattern: multiplicity[s][t] edges from source s to
    target t."""

    multiplicity: tuple

    def __post_init__(self):
        rows = self.multiplicity
        if not rows or not rows[0]:
            raise ValueError("empty shape")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged multiplicity matrix")
        if any(all(m == 0 for m in r) for r in rows):
            raise ValueError("source with no outgoing edges")
        for t in range(len(rows[0])):
            if all(r[t] == 0 for r in rows):
                raise ValueError("target with no incoming edges")

    @property
    def source_count(self):
        return len(self.multiplicity)

    @property
    def target_count(self):
        return len(self.multiplicity[0])

    def in_edges(self, t: int):
        """Multiset of sources of the edges into target t."""
        out = []
        for s, row in enumerate(self.multiplicity):
            out.extend([s] * row[t])
        return out

    def in_degree(self, t: int):
        return sum(row[t] for row in self.multiplicity)

    @classmethod
    def constant(cls, sources: int, targets: int, m: int = 1) -> "Shape":
        return cls(tuple((m,) * targets for _ in range(sources)))


def _keyed_rng_perm(seed: int, trial: int, level: int, vertex: int, items):
    """Deterministic shuffle keyed by (seed, trial, level, vertex)."""
    import random

    key = hashlib.blake2b(struct.pack("<QQQQ", seed & (2**64 - 1), trial,
                                      level, vertex), digest_size=8).digest()
    rng = random.Random(int.from_bytes(key, "little"))
    items = list(items)
    rng.shuffle(items)
    return tuple(items)


def random_ordering(shape: Shape, rng) -> tuple:
    """One ordered level: an independent uniform edge order per target."""
    words = []
    for t in range(shape.target_count):
        edges = shape.in_edges(t)
        rng.shuffle(edges)
        words.append(tuple(edges))
    return tuple(words)


def exact_uniform_probability(shape: Shape,
                              budget: int = 10**6) -> Optional[Fraction]:
    """Probability that a uniform random order on the shape is uniformly
    ordered; exhaustive over edge permutations when feasible.

    For one edge between every source-target pair this equals
    r! / (r!)^V with r the common in-degree and V the target count.
    """
    import itertools

    total = 1
    for t in range(shape.target_count):
        total *= factorial(shape.in_degree(t))
    if total <= budget:
        per_target = [list(itertools.permutations(range(shape.in_degree(t))))
                      for t in range(shape.target_count)]
        edge_lists = [shape.in_edges(t) for t in range(shape.target_count)]
        good = 0
        for combo in itertools.product(*per_target):
            words = [tuple(edge_lists[t][i] for i in perm)
                     for t, perm in enumerate(combo)]
            if uniform_base(words) is not None:
                good += 1
        return Fraction(good, total)
    if all(m == 1 for row in shape.multiplicity for m in row):
        r = shape.source_count
        return Fraction(factorial(r), factorial(r) ** shape.target_count)
    return None


@dataclass
class MonteCarloLevel:
    shape: Shape
    trials: int
    uniform_hits: int
    exact: Optional[Fraction]

    @property
    def frequency(self):
        return self.uniform_hits / self.trials


@dataclass
class MonteCarloReport:
    seed: int
    levels: list = field(default_factory=list)

    @property
    def partial_sums(self):
        """Borel-Cantelli partial sums of the exact probabilities."""
        sums = []
        acc = Fraction(0)
        for lvl in self.levels:
            if lvl.exact is None:
                return sums
            acc += lvl.exact
            sums.append(acc)
        return sums


def monte_carlo_uniform(shapes, trials: int, seed: int) -> MonteCarloReport:
    """Empirical uniform-level frequency per shape, with exact values and
    Borel-Cantelli partial sums where computable."""
    if trials < 1:
        raise ValueError("trials >= 1")
    report = MonteCarloReport(seed=seed)
    for lvl_idx, shape in enumerate(shapes):
        hits = 0
        for trial in range(trials):
            words = tuple(
                _keyed_rng_perm(seed, trial, lvl_idx, t, shape.in_edges(t))
                for t in range(shape.target_count))
            if uniform_base(words) is not None:
                hits += 1
        report.levels.append(MonteCarloLevel(shape, trials, hits,
                                             exact_uniform_probability(shape)))
    return report


@dataclass(frozen=True)
class OrderedShape:
    """A shape together with a fixed edge order (its target coding words)."""

    source_count: int
    words: tuple

    def __post_init__(self):
        used = {s for w in self.words for s in w}
        if used != set(range(self.source_count)):
            raise ShapeMismatch("ordered shape sources not surjective")

    @property
    def target_count(self):
        return len(self.words)


@dataclass
class ShapeProcessReport:
    diagram: OrderedDiagram
    uniform_levels: int
    sampled: int

    @property
    def frequency(self):
        return self.uniform_levels / self.sampled


def shape_process(alphabet, weights, N: int, seed: int) -> ShapeProcessReport:
    """Sample N ordered shapes i.i.d. and stack them into a diagram.

    All alphabet shapes must have equal source and target counts so that
    consecutive samples fit; a root connector level is prepended.  The
    report counts how many sampled levels are uniformly ordered (a
    positive frequency is the finite shadow of the recurrence argument
    that yields an odometer almost surely).
    """
    import random

    alphabet = list(alphabet)
    if not alphabet:
        raise ValueError("empty alphabet")
    v = alphabet[0].source_count
    for s in alphabet:
        if s.source_count != v or s.target_count != v:
            raise ShapeMismatch("alphabet shapes must be square and equal")
    key = hashlib.blake2b(struct.pack("<QQ", seed & (2**64 - 1), N),
                          digest_size=8).digest()
    rng = random.Random(int.from_bytes(key, "little"))
    samples = rng.choices(alphabet, weights=list(weights), k=N)
    levels = [tuple((0,) for _ in range(v))]  # root connector
    uniform = 0
    for s in samples:
        levels.append(s.words)
        if uniform_base(s.words) is not None:
            uniform += 1
    return ShapeProcessReport(OrderedDiagram(tuple(levels)), uniform, N)


def pascal_as_diagram(xi: OrderingTable, L: int) -> OrderedDiagram:
    """The Pascal graph to level L as an ordered diagram.

    Vertex (x, y) at level n gets id y; interior coding words follow the
    bit at (x, y): bit 0 lists the (x, y-1) parent first.
    """
    levels = []
    for n in range(1, L + 1):
        words = []
        for y in range(n + 1):
            x = n - y
            if y == 0:
                words.append((0,))
            elif x == 0:
                words.append((n - 1,))
            elif xi.bit(x, y) == 0:
                words.append((y - 1, y))
            else:
                words.append((y, y - 1))
        levels.append(tuple(words))
    return OrderedDiagram(tuple(levels))

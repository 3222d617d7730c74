"""Pascal graph geometry: edge orderings, finite paths, ranks, and measures.

Vertices are pairs (x, y) with level x + y; edges go from (x, y) to
(x+1, y) ("a" step) and to (x, y+1) ("b" step).  An ordering assigns one
bit to every interior vertex (x, y), x >= 1 and y >= 1: bit 1 means the
edge arriving from (x-1, y) is the smaller of the two incoming edges,
bit 0 means the edge arriving from (x, y-1) is the smaller.  Edges into
boundary vertices are both maximal and minimal.
"""

import hashlib
import json
import math
import struct
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import AlphaOutOfRange, MissingBit, RankOutOfRange

MIN = "min"
MAX = "max"

#: Marker returned when a boundary vertex (single incoming edge) is queried.
BOTH_EXTREMAL = "both-extremal"

A_STEP = 0  # (x, y) -> (x+1, y)
B_STEP = 1  # (x, y) -> (x, y+1)


class Vertex(NamedTuple):
    x: int
    y: int

    @property
    def level(self):
        return self.x + self.y

    @property
    def interior(self):
        return self.x >= 1 and self.y >= 1


def binomial(n: int, k: int) -> int:
    """C(n, k) as an exact integer; 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be non-negative")
    if k > n:
        return 0
    return math.comb(n, k)


def column_size(v: Vertex) -> int:
    """Number of root paths to v."""
    return binomial(v.x + v.y, v.x)


@dataclass(frozen=True)
class PathPrefix:
    """A finite edge path from the root, stored as a tuple of steps."""

    steps: tuple

    def __post_init__(self):
        if any(s not in (A_STEP, B_STEP) for s in self.steps):
            raise ValueError("steps must be 0 (a) or 1 (b)")

    def __len__(self):
        return len(self.steps)

    @property
    def terminal(self) -> Vertex:
        b = sum(self.steps)
        return Vertex(len(self.steps) - b, b)

    def vertex_at(self, level: int) -> Vertex:
        b = sum(self.steps[:level])
        return Vertex(level - b, b)

    def word(self) -> str:
        """First-edge letters of the steps, e.g. 'aab'."""
        return "".join("ab"[s] for s in self.steps)

    def prefix(self, level: int) -> "PathPrefix":
        return PathPrefix(self.steps[:level])

    def extend(self, steps) -> "PathPrefix":
        return PathPrefix(self.steps + tuple(steps))

    @classmethod
    def from_word(cls, word: str) -> "PathPrefix":
        return cls(tuple("ab".index(c) for c in word))

    def __repr__(self):
        return f"PathPrefix({self.word()!r})"


def _seeded_bit(seed: int, x: int, y: int, threshold: int) -> int:
    # Counter-based: a keyed hash of (seed, x, y), so lazy queries in any
    # order agree and parallel traversals are reproducible.
    digest = hashlib.blake2b(struct.pack("<QQQ", seed & (2**64 - 1), x, y),
                             digest_size=8).digest()
    u = int.from_bytes(digest, "little")
    return 0 if u < threshold else 1


class OrderingTable:
    """Map from interior vertices to order bits.

    Supported kinds: constant, seeded (counter-based hash of (seed, x, y)),
    explicit (finite map with a level bound), tree (binary-tree embedding),
    and rule (arbitrary total function, used for the named paper orderings).
    Instances are immutable; the memo is only ever extended under a lock.
    """

    def __init__(self, kind, *, bit=None, seed=None, bias=0.5, bits=None,
                 max_level=None, default=0, rule=None, name=None):
        self.kind = kind
        self._bit = bit
        self._seed = seed
        self._bias = bias
        self._threshold = int(float(bias) * 2.0**64) if kind == "seeded" else None
        self._bits = dict(bits) if bits is not None else None
        self._max_level = max_level
        self._default = default
        self._rule = rule
        self._name = name
        self._memo = {}
        self._lock = threading.Lock()

    def bit(self, x: int, y: int):
        """Order bit at (x, y); BOTH_EXTREMAL for boundary vertices."""
        if x < 0 or y < 0 or (x == 0 and y == 0):
            raise ValueError(f"no incoming edges at ({x}, {y})")
        if x == 0 or y == 0:
            return BOTH_EXTREMAL
        if self.kind == "constant":
            return self._bit
        if self.kind == "explicit":
            if self._max_level is not None and x + y > self._max_level:
                raise MissingBit(f"explicit table bounded at level {self._max_level}")
            return self._bits.get((x, y), self._default)
        if self.kind == "tree":
            return self._bits.get((x, y), 0)
        key = (x, y)
        got = self._memo.get(key)
        if got is None:
            if self.kind == "seeded":
                got = _seeded_bit(self._seed, x, y, self._threshold)
            else:
                got = self._rule(x, y)
            with self._lock:
                self._memo[key] = got
        return got

    def min_parent(self, v: Vertex) -> Vertex:
        """Source of the minimal incoming edge of v."""
        if v.x == 0:
            return Vertex(0, v.y - 1)
        if v.y == 0:
            return Vertex(v.x - 1, 0)
        return Vertex(v.x - 1, v.y) if self.bit(v.x, v.y) == 1 else Vertex(v.x, v.y - 1)

    def max_parent(self, v: Vertex) -> Vertex:
        if v.x == 0:
            return Vertex(0, v.y - 1)
        if v.y == 0:
            return Vertex(v.x - 1, 0)
        return Vertex(v.x, v.y - 1) if self.bit(v.x, v.y) == 1 else Vertex(v.x - 1, v.y)

    def step_is_minimal(self, step: int, target: Vertex) -> bool:
        """Is the edge entering `target` via `step` minimal?"""
        b = self.bit(target.x, target.y)
        if b == BOTH_EXTREMAL:
            return True
        return b == (1 if step == A_STEP else 0)

    def step_is_maximal(self, step: int, target: Vertex) -> bool:
        b = self.bit(target.x, target.y)
        if b == BOTH_EXTREMAL:
            return True
        return b == (0 if step == A_STEP else 1)

    def bit_array(self, max_level: int):
        """Dense int8 bit table for the compiled kernels.

        Entry [x, y] is the bit at (x, y); boundary entries are 0 and never
        consulted by the kernels.
        """
        import numpy as np

        n = max_level + 1
        arr = np.zeros((n, n), dtype=np.uint8)
        for x in range(1, max_level):
            for y in range(1, max_level - x + 1):
                arr[x, y] = self.bit(x, y)
        return arr

    def fingerprint(self) -> str:
        """Canonical identity string, used as a cache key."""
        if self.kind == "constant":
            return f"constant:{self._bit}"
        if self.kind == "seeded":
            return f"seeded:{self._seed}:{self._bias!r}"
        if self.kind == "explicit":
            items = ",".join(f"{x}.{y}.{b}" for (x, y), b in sorted(self._bits.items()))
            return f"explicit:{self._max_level}:{self._default}:{items}"
        if self.kind == "tree":
            return f"tree:{self._name}"
        return f"rule:{self._name}"

    def __repr__(self):
        return f"OrderingTable<{self.fingerprint()}>"

    def to_json(self) -> str:
        if self.kind == "constant":
            doc = {"kind": "constant", "bit": self._bit}
        elif self.kind == "seeded":
            doc = {"kind": "seeded", "seed": self._seed, "bias": self._bias}
        elif self.kind == "explicit":
            doc = {"kind": "explicit",
                   "bits": [[x, y, b] for (x, y), b in sorted(self._bits.items())],
                   "maxLevel": self._max_level}
        elif self.kind == "tree":
            doc = {"kind": "tree", "depth": self._depth}
        else:
            raise ValueError(f"{self.kind} orderings have no JSON form")
        return json.dumps(doc, sort_keys=True)


def constant_ordering(bit: int) -> OrderingTable:
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    return OrderingTable("constant", bit=bit)


def seeded_ordering(seed: int, bias: float = 0.5) -> OrderingTable:
    """Deterministic random ordering; `bias` is the probability of bit 0."""
    return OrderingTable("seeded", seed=seed, bias=bias)


def explicit_ordering(bits, max_level: int, default: int = 0) -> OrderingTable:
    """Finite table; unlisted interior vertices up to max_level get `default`."""
    bits = {(int(x), int(y)): int(b) for (x, y), b in dict(bits).items()}
    for (x, y), b in bits.items():
        if x < 1 or y < 1 or x + y > max_level or b not in (0, 1):
            raise ValueError(f"bad explicit bit ({x},{y})={b}")
    return OrderingTable("explicit", bits=bits, max_level=max_level, default=default)


def rule_ordering(rule, name: str) -> OrderingTable:
    return OrderingTable("rule", rule=rule, name=name)


def doubling_level(d: int) -> int:
    """Level of the d-th doubling stage of the tree embedding (2 leaves at d=1)."""
    if d < 1:
        raise ValueError("d >= 1")
    return 2 ** (d + 1) - 1


def tree_embedding_ordering(depth: int) -> OrderingTable:
    """Ordering with an embedded binary tree made entirely of minimal edges.

    The tree reaches 2^d non-intersecting branches at level 2^(d+1) - 1 for
    each d <= depth, starting from two branches to (3, 0) and (1, 2) at
    level 3.  Each stage first spreads branch tips from every other vertex
    to every fourth vertex (b steps first, then a steps; tips never meet),
    then forks each tip in two.  Bits away from the tree are constant 0.
    """
    if depth < 1:
        raise ValueError("depth >= 1")
    bits = {}

    def add_edge(src: Vertex, step: int):
        tgt = Vertex(src.x + 1, src.y) if step == A_STEP else Vertex(src.x, src.y + 1)
        if tgt.interior:
            want = 1 if step == A_STEP else 0
            if bits.setdefault((tgt.x, tgt.y), want) != want:
                raise AssertionError(f"tree branches collide at {tuple(tgt)}")
        return tgt

    def add_path(src: Vertex, steps):
        for s in steps:
            src = add_edge(src, s)
        return src

    # Base stage d=1: branches to (3,0) and (1,2).
    leaves = [add_path(Vertex(0, 0), (A_STEP,) * 3),
              add_path(Vertex(0, 0), (B_STEP, B_STEP, A_STEP))]
    for d in range(1, depth):
        spread = max(v.y for v in leaves)
        leaves = [add_path(v, (B_STEP,) * v.y + (A_STEP,) * (spread - v.y))
                  for v in leaves]
        forked = []
        for v in leaves:
            forked.append(add_path(v, (A_STEP, A_STEP)))
            forked.append(add_path(v, (B_STEP, B_STEP)))
        leaves = forked
    table = OrderingTable("tree", bits=bits, name=f"depth{depth}")
    table._depth = depth
    table._leaves = tuple(leaves)
    return table


def make_ordering(spec) -> OrderingTable:
    """Build a table from a JSON-style dict (see `ordering_from_json`)."""
    kind = spec["kind"]
    if kind == "constant":
        return constant_ordering(spec["bit"])
    if kind == "seeded":
        return seeded_ordering(spec["seed"], spec.get("bias", 0.5))
    if kind == "explicit":
        bits = {(x, y): b for x, y, b in spec["bits"]}
        return explicit_ordering(bits, spec["maxLevel"], spec.get("default", 0))
    if kind == "tree":
        return tree_embedding_ordering(spec["depth"])
    raise ValueError(f"unknown ordering kind {kind!r}")


def ordering_from_json(text: str) -> OrderingTable:
    return make_ordering(json.loads(text))


def extreme_path(xi: OrderingTable, v: Vertex, which: str) -> PathPrefix:
    """The unique all-minimal (or all-maximal) path from the root to v."""
    v = Vertex(*v)
    parent = xi.min_parent if which == MIN else xi.max_parent
    rev = []
    while v != (0, 0):
        u = parent(v)
        rev.append(A_STEP if u.x < v.x else B_STEP)
        v = u
    return PathPrefix(tuple(reversed(rev)))


def rank(xi: OrderingTable, p: PathPrefix) -> int:
    """Position of p among all root paths to its terminal, in the xi order."""
    r = 0
    x = y = 0
    for s in p.steps:
        tgt = Vertex(x + 1, y) if s == A_STEP else Vertex(x, y + 1)
        if tgt.interior and xi.step_is_maximal(s, tgt):
            m = xi.min_parent(tgt)
            r += binomial(m.x + m.y, m.x)
        x, y = tgt
    return r


def unrank(xi: OrderingTable, v: Vertex, r: int) -> PathPrefix:
    """The rank-r path to v; inverse of `rank` on the column of v."""
    v = Vertex(*v)
    total = column_size(v)
    if not 0 <= r < total:
        raise RankOutOfRange(f"rank {r} not in [0, {total}) at {tuple(v)}")
    rev = []
    while v != (0, 0):
        if not v.interior:
            u = xi.min_parent(v)
        else:
            mn = xi.min_parent(v)
            low = column_size(mn)
            if r < low:
                u = mn
            else:
                r -= low
                u = xi.max_parent(v)
        rev.append(A_STEP if u.x < v.x else B_STEP)
        v = u
    return PathPrefix(tuple(reversed(rev)))


def compare_paths(xi: OrderingTable, p: PathPrefix, q: PathPrefix) -> int:
    """Order two equal-length paths to the same vertex (-1, 0, or 1).

    Comparison finds the highest level where the edges differ; the smaller
    path is the one whose edge there is smaller in the xi order.
    """
    if len(p) != len(q) or p.terminal != q.terminal:
        raise ValueError("paths must have equal length and terminal")
    if p.steps == q.steps:
        return 0
    k = max(i for i in range(len(p)) if p.steps[i] != q.steps[i])
    tgt = p.vertex_at(k + 1)
    assert tgt == q.vertex_at(k + 1)
    return -1 if xi.step_is_minimal(p.steps[k], tgt) else 1


def cylinder_measure(alpha, p: PathPrefix) -> Fraction:
    """Exact mu_alpha measure of the cylinder of p: alpha per b step,
    1 - alpha per a step."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise AlphaOutOfRange(f"alpha={alpha} not in (0, 1)")
    b = sum(p.steps)
    return alpha**b * (1 - alpha) ** (len(p) - b)


def cylinder_measure_approx(alpha: float, p: PathPrefix) -> float:
    """Floating-point cylinder measure, for plotting only (approximate)."""
    if not 0 < alpha < 1:
        raise AlphaOutOfRange(f"alpha={alpha} not in (0, 1)")
    b = sum(p.steps)
    return alpha**b * (1 - alpha) ** (len(p) - b)


def count_extremal_prefixes(xi: OrderingTable, level: int, which: str,
                            horizon: Optional[int] = None) -> int:
    """Count level-`level` prefixes of infinite all-minimal (all-maximal) paths.

    Each vertex carries at most one all-extremal prefix (the backward walk
    along extremal incoming edges is forced), so this counts the vertices at
    `level` from which an extremal continuation survives to `horizon`.
    Continuation is checked by backward DP from the horizon (default
    level + 16), which over-approximates the infinite condition.
    """
    if level == 0:
        return 1
    if horizon is None:
        horizon = level + 16
    is_ext = (OrderingTable.step_is_minimal if which == MIN
              else OrderingTable.step_is_maximal)
    alive = {Vertex(horizon - y, y) for y in range(horizon + 1)}
    for lvl in range(horizon - 1, level - 1, -1):
        nxt = set()
        for y in range(lvl + 1):
            v = Vertex(lvl - y, y)
            for s in (A_STEP, B_STEP):
                t = Vertex(v.x + 1, v.y) if s == A_STEP else Vertex(v.x, v.y + 1)
                if t in alive and is_ext(xi, s, t):
                    nxt.add(v)
                    break
        alive = nxt
    return len(alive)

"""Basic blocks, symbol censuses, language approximation, and complexity.

The basic block at (x, y) is the word over {a, b} built by concatenating
the two parent blocks in the order the bit at (x, y) dictates; row and
column vertices carry the one-letter blocks "a" and "b".  The language of
an ordering is approximated from below by the set of fixed-length windows
seen in basic blocks up to a level bound; windows inside deep blocks are
collected without materializing them, from child prefixes and suffixes
around each concatenation junction.
"""

import itertools
import os
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import kernels
from .core import (OrderingTable, PathPrefix, Vertex, binomial,
                   column_size, rank, unrank)
from .errors import BlockMemoryCap, LevelBelowK, SizeCap

DEFAULT_MEMORY_CAP = 2 << 30  # bytes of memoized block text


class CylSymbol(NamedTuple):
    """Name of the s-th path (in xi order) from the root to (k-m, m)."""

    k: int
    m: int
    s: int


def cyl_offsets(k: int):
    """Start index of each m class when the 2^k symbols are numbered."""
    offs = [0]
    for m in range(k + 1):
        offs.append(offs[-1] + binomial(k, m))
    return offs


def symbol_to_id(sym: CylSymbol, offs=None) -> int:
    offs = offs or cyl_offsets(sym.k)
    return offs[sym.m] + sym.s - 1


def id_to_symbol(k: int, ident: int, offs=None) -> CylSymbol:
    offs = offs or cyl_offsets(k)
    m = bisect_right(offs, ident) - 1
    return CylSymbol(k, m, ident - offs[m] + 1)


class BlockStore:
    """Memo of basic blocks for one ordering, with a byte budget.

    When the ADICLAB_CACHE_DIR environment variable is set, blocks above
    the spill threshold are also written there (keyed by the ordering
    fingerprint) and recovered on later runs.
    """

    SPILL_THRESHOLD = 1 << 16

    def __init__(self, xi: OrderingTable, max_bytes: int = DEFAULT_MEMORY_CAP):
        import threading

        self.xi = xi
        self.max_bytes = max_bytes
        self.bytes_used = 0
        self._memo = {}
        self._build_lock = threading.Lock()  # construction serialized
        cache_root = os.environ.get("ADICLAB_CACHE_DIR")
        self._cache_dir = None
        if cache_root:
            import hashlib

            tag = hashlib.blake2b(xi.fingerprint().encode(), digest_size=8).hexdigest()
            self._cache_dir = os.path.join(cache_root, tag)
            os.makedirs(self._cache_dir, exist_ok=True)

    def _disk_path(self, x, y):
        return os.path.join(self._cache_dir, f"{x}_{y}.txt")

    def _remember(self, key, word):
        self.bytes_used += len(word)
        if self.bytes_used > self.max_bytes:
            raise BlockMemoryCap(
                f"block memo would exceed {self.max_bytes} bytes")
        self._memo[key] = word
        if self._cache_dir and len(word) >= self.SPILL_THRESHOLD:
            path = self._disk_path(*key)
            if not os.path.exists(path):
                with open(path, "w") as fh:
                    fh.write(word)

    def block(self, x: int, y: int) -> str:
        if x < 0 or y < 0 or (x == 0 and y == 0):
            raise ValueError(f"no basic block at ({x}, {y})")
        if y == 0:
            return "a"
        if x == 0:
            return "b"
        memo = self._memo
        got = memo.get((x, y))
        if got is not None:
            return got
        with self._build_lock:
            return self._build(x, y)

    def _build(self, x, y):
        memo = self._memo
        stack = [(x, y)]
        while stack:
            u, v = stack[-1]
            if (u, v) in memo:
                stack.pop()
                continue
            if self._cache_dir:
                path = self._disk_path(u, v)
                if os.path.exists(path):
                    with open(path) as fh:
                        self._remember((u, v), fh.read())
                    stack.pop()
                    continue
            if self.xi.bit(u, v) == 0:
                first, second = (u, v - 1), (u - 1, v)
            else:
                first, second = (u - 1, v), (u, v - 1)
            parts = []
            ready = True
            for (p, q) in (first, second):
                if q == 0:
                    parts.append("a")
                elif p == 0:
                    parts.append("b")
                elif (p, q) in memo:
                    parts.append(memo[(p, q)])
                else:
                    stack.append((p, q))
                    ready = False
            if ready:
                self._remember((u, v), parts[0] + parts[1])
                stack.pop()
        return memo[(x, y)]


def block_store(xi: OrderingTable, max_bytes: Optional[int] = None) -> BlockStore:
    """The store attached to xi (created on first use)."""
    store = getattr(xi, "_block_store", None)
    if store is None:
        store = BlockStore(xi, max_bytes or DEFAULT_MEMORY_CAP)
        xi._block_store = store
    elif max_bytes is not None:
        store.max_bytes = max_bytes
    return store


def basic_block(xi: OrderingTable, x: int, y: int) -> str:
    """The level x+y basic block at (x, y); length C(x+y, x)."""
    return block_store(xi).block(x, y)


def basic_block_k(xi: OrderingTable, k: int, x: int, y: int) -> tuple:
    """Basic block at (x, y) over the 2^k symbols of the k-coding."""
    word = block_word_k(xi, k, x, y)
    offs = cyl_offsets(k)
    return tuple(id_to_symbol(k, i, offs) for i in word)


def block_word_k(xi: OrderingTable, k: int, x: int, y: int) -> bytes:
    """Same block with symbols packed as small integer ids (k <= 8)."""
    if k < 1 or k > 8:
        raise ValueError("1 <= k <= 8")
    if x + y < k:
        raise LevelBelowK(f"({x},{y}) is below level {k}")
    memos = getattr(xi, "_k_block_memos", None)
    if memos is None:
        memos = xi._k_block_memos = {}
    memo = memos.setdefault(k, {})
    offs = cyl_offsets(k)

    def base(u, v):
        return bytes(range(offs[v], offs[v] + binomial(k, v)))

    def get(u, v):
        if u + v == k:
            return base(u, v)
        if v == 0:
            return base(k, 0)
        if u == 0:
            return base(0, k)
        got = memo.get((u, v))
        if got is None:
            if xi.bit(u, v) == 0:
                got = get(u, v - 1) + get(u - 1, v)
            else:
                got = get(u - 1, v) + get(u, v - 1)
            memo[(u, v)] = got
        return got

    return get(x, y)


def letters_from_k1(word) -> str:
    """Spell a 1-coding word (ids or CylSymbols) as letters."""
    out = []
    for sym in word:
        ident = sym if isinstance(sym, int) else symbol_to_id(sym)
        out.append("ab"[ident])
    return "".join(out)


def project_symbol_to_letter(xi: OrderingTable, sym: CylSymbol) -> str:
    """First-edge letter of the path a symbol names (the factor map to k=1)."""
    path = unrank(xi, Vertex(sym.k - sym.m, sym.m), sym.s - 1)
    return path.word()[0]


def symbol_census(w: str):
    """Letter counts of w plus the vertex they pin down, if any.

    A block at interior (x, y) has C(x+y-1, x-1) a's and C(x+y-1, y-1)
    b's; pure-letter words are attributed to the boundary row of their
    length.
    """
    ca = w.count("a")
    cb = w.count("b")
    if ca + cb != len(w):
        raise ValueError("alphabet must be {a, b}")
    if not w:
        return 0, 0, None
    if cb == 0:
        return ca, 0, Vertex(ca, 0)
    if ca == 0:
        return 0, cb, Vertex(0, cb)
    if ca == 1:
        return ca, cb, Vertex(1, cb)
    if cb == 1:
        return ca, cb, Vertex(ca, 1)
    total = ca + cb
    n = 4
    while n * (n - 1) // 2 <= total:
        if (n * ca) % total == 0:
            x = n * ca // total
            if 2 <= x <= n - 2 and binomial(n - 1, x - 1) == ca \
                    and binomial(n - 1, n - x - 1) == cb:
                return ca, cb, Vertex(x, n - x)
        n += 1
    return ca, cb, None


def iter_restricted_blocks(x: int, y: int, bit_budget: int = 20):
    """Yield (bits, block) over all restricted orderings of the (x, y) box.

    Restricted means the rows into (u, 1) and (1, v) are ordered left to
    right, so only the bits at (u, v) with u, v >= 2 vary.
    """
    if x < 1 or y < 1:
        raise ValueError("x, y >= 1")
    free = [(u, v) for u in range(2, x + 1) for v in range(2, y + 1)]
    if len(free) > bit_budget:
        raise SizeCap(f"{len(free)} free bits exceed budget {bit_budget}")
    for choice in itertools.product((0, 1), repeat=len(free)):
        bits = dict(zip(free, choice))
        table = {}
        for u in range(1, x + 1):
            table[(u, 1)] = "a" * u + "b"
        for v in range(1, y + 1):
            table[(1, v)] = "a" + "b" * v
        for u in range(2, x + 1):
            for v in range(2, y + 1):
                if bits[(u, v)] == 0:
                    table[(u, v)] = table[(u, v - 1)] + table[(u - 1, v)]
                else:
                    table[(u, v)] = table[(u - 1, v)] + table[(u, v - 1)]
        yield bits, table[(x, y)]


def enumerate_blocks(x: int, y: int, bit_budget: int = 20) -> set:
    """All basic blocks at (x, y) over the restricted orderings."""
    return {word for _, word in iter_restricted_blocks(x, y, bit_budget)}


def _tail(s: str, m: int) -> str:
    return s[-m:] if m else ""


class _LanguageScan:
    """Collects n-windows of all basic blocks, level by level.

    Blocks short enough to hold a window plus context are materialized;
    longer blocks contribute only the windows spanning their junction,
    built from the suffix of the first child and the prefix of the second.
    """

    def __init__(self, xi: OrderingTable, n: int):
        if n < 1:
            raise ValueError("n >= 1")
        self.xi = xi
        self.n = n
        self.margin = n - 1
        self.short_cap = max(2 * n, 4)
        self.words = set()
        self.level = 0
        self._short = {}
        self._pref = {}
        self._suf = {}

    def _child_text(self, v):
        if v[1] == 0:
            return "a"
        if v[0] == 0:
            return "b"
        return self._short.get(v)

    def _pref_of(self, v):
        text = self._child_text(v)
        return text if text is not None else self._pref[v]

    def _suf_of(self, v):
        text = self._child_text(v)
        return text if text is not None else self._suf[v]

    def _add_windows(self, text):
        n = self.n
        for i in range(len(text) - n + 1):
            self.words.add(text[i:i + n])

    def advance_to(self, level: int):
        while self.level < level:
            self.level += 1
            lvl = self.level
            if lvl == 1:
                self._add_windows("a")
                self._add_windows("b")
                continue
            for x in range(1, lvl):
                y = lvl - x
                if self.xi.bit(x, y) == 0:
                    c1, c2 = (x, y - 1), (x - 1, y)
                else:
                    c1, c2 = (x - 1, y), (x, y - 1)
                if binomial(lvl, x) <= self.short_cap:
                    text = self._child_text(c1) + self._child_text(c2)
                    self._short[(x, y)] = text
                    self._add_windows(text)
                else:
                    m = self.margin
                    junction = _tail(self._suf_of(c1), m) + self._pref_of(c2)[:m]
                    self._add_windows(junction)
                    self._pref[(x, y)] = (self._pref_of(c1)
                                          + self._pref_of(c2))[:m]
                    self._suf[(x, y)] = _tail(self._suf_of(c1)
                                              + self._suf_of(c2), m)

    def count(self):
        return len(self.words)


def language_words(xi: OrderingTable, n: int, L: int) -> set:
    """All n-windows seen in basic blocks up to level L.

    This under-approximates the language of the coding subshift (junctions
    between different columns of an orbit are not enumerated) and is
    monotone nondecreasing in L.
    """
    scan = _LanguageScan(xi, n)
    scan.advance_to(max(L, 1))
    return scan.words


def complexity(xi: OrderingTable, n: int, L: int):
    """(number of n-windows up to level L, count unchanged since L-2?)."""
    scan = _LanguageScan(xi, n)
    counts = []
    for lvl in range(1, max(L, 1) + 1):
        scan.advance_to(lvl)
        counts.append(scan.count())
    stabilized = len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]
    return counts[-1], stabilized


def stabilized_complexity(xi: OrderingTable, n: int, max_level: int = 80):
    """Scan levels until the window count is flat over three levels.

    Zero-count plateaus (levels too shallow for any n-window) do not
    count as stabilization.  Returns (count, level reached, stabilized).
    """
    scan = _LanguageScan(xi, n)
    counts = []
    for lvl in range(1, max_level + 1):
        scan.advance_to(lvl)
        counts.append(scan.count())
        if (len(counts) >= 3 and counts[-1] > 0
                and counts[-1] == counts[-2] == counts[-3]):
            return counts[-1], lvl, True
    return counts[-1], max_level, False


def big_language_count(n: int, level_cap: int, ordering_budget: int,
                       seed: int = 0) -> int:
    """Lower bound on the number of n-words across all orderings.

    Samples `ordering_budget` seeded orderings, and when n is a triangular
    length (k+1)(k+2)/2 also enumerates the restricted (k, 2) block family,
    whose 2^(k-1) members all have length exactly n.
    """
    from .core import seeded_ordering

    words = set()
    k = 2
    while (k + 1) * (k + 2) // 2 < n:
        k += 1
    if (k + 1) * (k + 2) // 2 == n:
        words |= enumerate_blocks(k, 2)
    for t in range(ordering_budget):
        words |= language_words(seeded_ordering(seed + t), n, level_cap)
    return len(words)


@dataclass
class PairSeparation:
    path_a: str
    path_b: str
    coordinate: Optional[int]  # None when not separated within the window
    window: tuple


@dataclass
class FaithfulnessReport:
    k: int
    level: int
    delta: int
    pairs: list = field(default_factory=list)

    @property
    def total(self):
        return len(self.pairs)

    @property
    def separated(self):
        return sum(1 for p in self.pairs if p.coordinate is not None)

    @property
    def unseparated(self):
        return [p for p in self.pairs if p.coordinate is None]

    @property
    def all_separated(self):
        return self.separated == self.total


def faithfulness_probe(xi: OrderingTable, L: int, k: int,
                       delta: int) -> FaithfulnessReport:
    """Try to separate every pair of distinct level-L paths by k-codings.

    Each path is extended to level L + delta by its minimal continuation;
    the two coding sequences are compared over the largest window around
    time 0 that stays inside both columns.  The separation coordinate is
    reported per pair; NOT-SEPARATED pairs carry coordinate None.
    """
    from .adic import minimal_continuation

    if k > L:
        raise ValueError("k <= L required")
    deep = L + delta
    bits = xi.bit_array(deep)
    paths = [PathPrefix(s) for s in itertools.product((0, 1), repeat=L)]
    extended = [minimal_continuation(xi, p, deep) for p in paths]
    ranks = [rank(xi, e) for e in extended]
    codings = {}
    for e in extended:
        v = e.terminal
        if v not in codings:
            sweep = kernels.column_coding(bits, v.x, v.y, k)
            assert len(sweep) == column_size(v)
            codings[v] = sweep
    report = FaithfulnessReport(k=k, level=L, delta=delta)
    for i in range(len(paths)):
        si, ri = codings[extended[i].terminal], ranks[i]
        for j in range(i + 1, len(paths)):
            sj, rj = codings[extended[j].terminal], ranks[j]
            back = min(ri, rj)
            fwd = min(len(si) - ri, len(sj) - rj)
            wa = si[ri - back:ri + fwd]
            wb = sj[rj - back:rj + fwd]
            coord = None
            if wa != wb:
                # report the separation coordinate closest to time 0
                for d in range(max(back, fwd)):
                    if d < fwd and wa[back + d] != wb[back + d]:
                        coord = d
                        break
                    if d < back and wa[back - 1 - d] != wb[back - 1 - d]:
                        coord = -1 - d
                        break
            report.pairs.append(PairSeparation(paths[i].word(), paths[j].word(),
                                               coord, (-back, fwd - 1)))
    return report

"""Vershik successor dynamics on path prefixes and the return-time table.

The successor replaces the lowest non-maximal edge of a prefix by the
other incoming edge of its range vertex and refills everything below with
a minimal path.  It is kept partial: prefixes maximal in their column
raise MaximalPrefix and callers decide how to deepen.
"""

import math
from typing import NamedTuple

from . import kernels
from .coding import CylSymbol
from .core import (A_STEP, B_STEP, MIN, OrderingTable, PathPrefix, Vertex,
                   binomial, column_size, extreme_path, rank, unrank)
from .errors import (BoundExceeded, KinkPreconditionFailed, MaximalPrefix,
                     MinimalPrefix, NotFound, WindowEscapesColumn)


def successor(xi: OrderingTable, p: PathPrefix) -> PathPrefix:
    """The next-larger path to the same terminal vertex (rank + 1)."""
    steps = list(p.steps)
    x = y = 0
    for i, s in enumerate(steps):
        if s == A_STEP:
            x += 1
        else:
            y += 1
        if x > 0 and y > 0 and s != xi.bit(x, y):
            # this edge is minimal, hence non-maximal: pivot here
            flipped = 1 - s
            steps[i] = flipped
            src = Vertex(x - 1, y) if flipped == A_STEP else Vertex(x, y - 1)
            steps[:i] = extreme_path(xi, src, MIN).steps
            return PathPrefix(tuple(steps))
    raise MaximalPrefix(f"maximal path to {tuple(p.terminal)}")


def predecessor(xi: OrderingTable, p: PathPrefix) -> PathPrefix:
    """Inverse of `successor`; raises MinimalPrefix at the column bottom."""
    steps = list(p.steps)
    x = y = 0
    for i, s in enumerate(steps):
        if s == A_STEP:
            x += 1
        else:
            y += 1
        if x > 0 and y > 0 and s == xi.bit(x, y):
            # this edge is maximal, hence non-minimal: pivot here
            flipped = 1 - s
            steps[i] = flipped
            src = Vertex(x - 1, y) if flipped == A_STEP else Vertex(x, y - 1)
            steps[:i] = extreme_path(xi, src, "max").steps
            return PathPrefix(tuple(steps))
    raise MinimalPrefix(f"minimal path to {tuple(p.terminal)}")


def minimal_continuation(xi: OrderingTable, p: PathPrefix, level: int) -> PathPrefix:
    """Extend p to `level` following minimal edges, biased off the boundary.

    From a side vertex the interior-pointing edge is taken even when not
    minimal, so continuations never run along the diagram's sides (side
    paths have no consistent factoring scheme and a trivial orbit window).
    Among two minimal interior edges the b step is preferred; when neither
    is minimal the b step is taken anyway.  The choice only has to be
    deterministic.
    """
    steps = list(p.steps)
    x, y = p.terminal
    while x + y < level:
        if x == 0 and y > 0:
            s = A_STEP
        elif (y == 0 and x > 0) or xi.bit(x, y + 1) == 0 \
                or xi.bit(x + 1, y) != 1:
            s = B_STEP
        else:
            s = A_STEP
        steps.append(s)
        if s == A_STEP:
            x += 1
        else:
            y += 1
    return PathPrefix(tuple(steps))


def path_symbol(xi: OrderingTable, p: PathPrefix, k: int) -> CylSymbol:
    """Cylinder symbol named by the first k edges of p."""
    head = p.prefix(k)
    m = head.terminal.y
    return CylSymbol(k, m, rank(xi, head) + 1)


def orbit_coding(xi: OrderingTable, p: PathPrefix, k: int, window) -> tuple:
    """Symbols of the k-coding of p over iterate times window = (t0, t1).

    The whole window must stay inside the column of p's terminal vertex;
    otherwise WindowEscapesColumn is raised and the caller should deepen p.
    """
    t0, t1 = window
    if k > len(p):
        raise ValueError("k must not exceed the prefix length")
    if t1 < t0:
        raise ValueError("empty window")
    r = rank(xi, p)
    size = column_size(p.terminal)
    if r + t0 < 0 or r + t1 >= size:
        raise WindowEscapesColumn(
            f"window [{t0},{t1}] leaves column of {tuple(p.terminal)}")
    q = unrank(xi, p.terminal, r + t0)
    out = []
    for t in range(t0, t1 + 1):
        out.append(path_symbol(xi, q, k))
        if t < t1:
            q = successor(xi, q)
    return tuple(out)


class KinkCase(NamedTuple):
    """One of the eight (a1, a2, a3) configurations.

    a1: status of the path's edge out of (i, j); a2: status of the other
    edge out of (i, j); a3: 'LR' when the path's edge goes to (i+1, j),
    'RL' when it goes to (i, j+1).
    """

    a1: str
    a2: str
    a3: str


KINK_CASES = tuple(KinkCase(a1, a2, a3)
                   for a1 in ("max", "min")
                   for a2 in ("max", "min")
                   for a3 in ("LR", "RL"))


def kink_classify(xi: OrderingTable, p: PathPrefix) -> KinkCase:
    """Classify the kink configuration at the end of p.

    p must pass through an interior (i, j), continue to (i+1, j+1), and
    enter (i+1, j+1) along a minimal edge.
    """
    term = p.terminal
    i, j = term.x - 1, term.y - 1
    if i < 1 or j < 1:
        raise KinkPreconditionFailed(f"({i},{j}) is not interior")
    if p.steps[-2:] not in ((A_STEP, B_STEP), (B_STEP, A_STEP)):
        raise KinkPreconditionFailed("path does not pass through (i, j)")
    if not xi.step_is_minimal(p.steps[-1], term):
        raise KinkPreconditionFailed("edge into (i+1, j+1) is not minimal")
    gamma_step = p.steps[-2]
    mid = Vertex(i + 1, j) if gamma_step == A_STEP else Vertex(i, j + 1)
    other_step = 1 - gamma_step
    other_mid = Vertex(i + 1, j) if other_step == A_STEP else Vertex(i, j + 1)
    a1 = "max" if xi.step_is_maximal(gamma_step, mid) else "min"
    a2 = "max" if xi.step_is_maximal(other_step, other_mid) else "min"
    a3 = "LR" if gamma_step == A_STEP else "RL"
    return KinkCase(a1, a2, a3)


def kink_return_time(case: KinkCase, n: int, j: int) -> int:
    """Return time r_n for a kink at (i, j) with n = i + j."""
    key = (case.a1, case.a2, case.a3)
    if key in (("max", "min", "LR"), ("max", "min", "RL")):
        return binomial(n, j)
    if key in (("min", "min", "RL"), ("max", "max", "LR")):
        return binomial(n + 1, j + 1)
    if key in (("min", "min", "LR"), ("max", "max", "RL")):
        return binomial(n + 1, j)
    if key in (("min", "max", "LR"), ("min", "max", "RL")):
        return binomial(n + 1, j) + binomial(n, j + 1)
    raise ValueError(f"not a kink case: {case}")


def kink_verify(xi: OrderingTable, p: PathPrefix, max_level: int = 64,
                offset: int = 0) -> bool:
    """Check that the r_n-th successor of p repeats its first n edges.

    p is extended by its minimal continuation, doubling the level until the
    r_n iterates fit inside one column (or max_level is hit).  With a
    nonzero `offset` the check runs at T^offset of the extension instead,
    which is how the r_n +/- 1 non-vacuity probes are driven.
    """
    case = kink_classify(xi, p)
    n = len(p) - 2
    j = p.vertex_at(n).y
    r = kink_return_time(case, n, j) + offset
    level = len(p)
    while True:
        ext = minimal_continuation(xi, p, level)
        rk = rank(xi, ext)
        if rk + r < column_size(ext.terminal):
            break
        if level >= max_level:
            raise WindowEscapesColumn(
                f"window does not fit below level {max_level}")
        level = min(2 * level, max_level)
    steps = bytearray(ext.steps)
    bits = xi.bit_array(level)
    applied = kernels.advance_path(bits, steps, r)
    assert applied == r
    return bytes(steps[:n]) == bytes(ext.steps[:n])


def _check_prime(q: int):
    if q < 2 or any(q % d == 0 for d in range(2, int(math.isqrt(q)) + 1)):
        raise ValueError(f"{q} is not prime")


def binom_mod(n: int, k: int, q: int) -> int:
    """C(n, k) mod prime q by Lucas' theorem on base-q digits."""
    _check_prime(q)
    if k < 0 or k > n:
        return 0
    r = 1
    while n or k:
        nd, kd = n % q, k % q
        if kd > nd:
            return 0
        r = r * math.comb(nd, kd) % q
        n //= q
        k //= q
    return r


def weakmixing_row_check(q: int, s: int, bound: int = 2**20) -> bool:
    """Check the two mod-q facts behind the no-rational-eigenvalue argument.

    For n = q^s - 2 the row satisfies C(n, k) = (-1)^k (k+1) mod q for all
    k, and every entry of row q^s - 1 is nonzero mod q.
    """
    _check_prime(q)
    if s < 1:
        raise ValueError("s >= 1")
    big = q**s
    if big > bound:
        raise BoundExceeded(f"q^s = {big} exceeds bound {bound}")
    n = big - 2
    for k in range(n + 1):
        if binom_mod(n, k, q) != ((-1) ** k * (k + 1)) % q:
            return False
    return all(binom_mod(big - 1, t, q) != 0 for t in range(big))


def weakmixing_vertex_search(q: int, s: int) -> int:
    """Smallest j with q not dividing j+1, q dividing j+2, and all four
    return-time values at n = q^s - 2 nonzero mod q."""
    _check_prime(q)
    if q**s < 4:
        raise ValueError("q^s >= 4 required")
    n = q**s - 2
    for j in range(n + 1):
        if (j + 1) % q == 0 or (j + 2) % q != 0:
            continue
        values = (binom_mod(n, j, q),
                  binom_mod(n + 1, j + 1, q),
                  binom_mod(n + 1, j, q),
                  (binom_mod(n + 1, j, q) + binom_mod(n, j + 1, q)) % q)
        if all(v != 0 for v in values):
            return j
    raise NotFound(f"no admissible j for q={q}, s={s}")

"""Pure-Python successor kernels; same contract as the compiled module.

Paths are bytearrays of steps (0 = a step, 1 = b step); `bits` is a dense
2D table indexed [x][y].  An interior edge entered via step s is maximal
iff s equals the bit at its range, minimal iff it differs; boundary edges
are both and are skipped when looking for a pivot.
"""

IMPLEMENTATION = "python"


def _as_rows(bits):
    try:
        return bits.tolist()
    except AttributeError:
        return [list(r) for r in bits]


def _fill_min_path(rows, x, y, steps, upto):
    # Fill steps[0:upto] with the minimal path to (x, y), walking backward.
    for pos in range(upto - 1, -1, -1):
        if x == 0:
            steps[pos] = 1
            y -= 1
        elif y == 0:
            steps[pos] = 0
            x -= 1
        elif rows[x][y] == 1:
            steps[pos] = 0
            x -= 1
        else:
            steps[pos] = 1
            y -= 1


def _successor_inplace(rows, steps, n):
    # Returns the pivot level, or -1 when the path is maximal.
    x = y = 0
    for i in range(n):
        s = steps[i]
        if s == 0:
            x += 1
        else:
            y += 1
        if x > 0 and y > 0 and s != rows[x][y]:
            flipped = 1 - s
            steps[i] = flipped
            if flipped == 0:
                _fill_min_path(rows, x - 1, y, steps, i)
            else:
                _fill_min_path(rows, x, y - 1, steps, i)
            return i
    return -1


def min_path(bits, x, y):
    rows = _as_rows(bits)
    steps = bytearray(x + y)
    _fill_min_path(rows, x, y, steps, x + y)
    return steps


def advance_path(bits, steps, count):
    """Apply the successor `count` times in place; returns how many applied."""
    rows = _as_rows(bits)
    n = len(steps)
    done = 0
    while done < count:
        if _successor_inplace(rows, steps, n) < 0:
            break
        done += 1
    return done


def column_coding(bits, x, y, k):
    """Sweep the whole column over (x, y) in rank order.

    Emits one byte per path: the bitmask of its first min(k, x+y) steps
    (bit t set iff step t is a b step).  Requires k <= 8.
    """
    if k > 8:
        raise ValueError("k <= 8 for byte-coded symbols")
    rows = _as_rows(bits)
    n = x + y
    kk = min(k, n)
    steps = bytearray(n)
    _fill_min_path(rows, x, y, steps, n)
    out = bytearray()
    while True:
        sym = 0
        for t in range(kk):
            sym |= steps[t] << t
        out.append(sym)
        if _successor_inplace(rows, steps, n) < 0:
            return bytes(out)

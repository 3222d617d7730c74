import pytest

from adiclab import kernels
from adiclab.coding import basic_block
from adiclab.core import (MIN, Vertex, column_size, extreme_path,
                          seeded_ordering)


@pytest.fixture(params=kernels.implementations(),
                ids=lambda m: m.IMPLEMENTATION)
def impl(request):
    return request.param


def test_min_path_matches_core(impl):
    xi = seeded_ordering(21)
    bits = xi.bit_array(10)
    for x in range(11):
        y = 10 - x
        steps = impl.min_path(bits, x, y)
        assert bytes(steps) == bytes(extreme_path(xi, Vertex(x, y), MIN).steps)


def test_column_coding_counts_and_letters(impl):
    xi = seeded_ordering(34)
    bits = xi.bit_array(9)
    for x in range(10):
        y = 9 - x
        sweep = impl.column_coding(bits, x, y, 1)
        assert len(sweep) == column_size(Vertex(x, y))
        blk = basic_block(xi, x, y) if 0 < x < 9 else ("a" if y == 0 else "b")
        assert "".join("ab"[c] for c in sweep) == blk


def test_column_coding_k3_symbols(impl):
    xi = seeded_ordering(2)
    bits = xi.bit_array(7)
    v = Vertex(4, 3)
    sweep = impl.column_coding(bits, 4, 3, 3)
    # the kernel emits step bitmasks; check they track the actual prefixes
    p = extreme_path(xi, v, MIN)
    for r in range(column_size(v)):
        mask = sum(p.steps[t] << t for t in range(3))
        assert sweep[r] == mask
        if r < column_size(v) - 1:
            from adiclab.adic import successor

            p = successor(xi, p)


def test_advance_path_matches_successor(impl):
    from adiclab.adic import successor

    xi = seeded_ordering(55)
    bits = xi.bit_array(9)
    p = extreme_path(xi, Vertex(5, 4), MIN)
    steps = bytearray(p.steps)
    done = impl.advance_path(bits, steps, 17)
    assert done == 17
    q = p
    for _ in range(17):
        q = successor(xi, q)
    assert bytes(steps) == bytes(q.steps)


def test_advance_path_stops_at_maximum(impl):
    xi = seeded_ordering(55)
    bits = xi.bit_array(6)
    v = Vertex(3, 3)
    steps = bytearray(extreme_path(xi, v, MIN).steps)
    done = impl.advance_path(bits, steps, 10**6)
    assert done == column_size(v) - 1


def test_implementations_agree():
    mods = kernels.implementations()
    if len(mods) < 2:
        pytest.skip("compiled kernel not built")
    py, c = mods
    xi = seeded_ordering(77)
    bits = xi.bit_array(12)
    for x in range(13):
        assert py.column_coding(bits, x, 12 - x, 3) == \
            c.column_coding(bits, x, 12 - x, 3)

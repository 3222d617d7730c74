from fractions import Fraction

import pytest

from adiclab.core import (BOTH_EXTREMAL, MAX, MIN, PathPrefix, Vertex, binomial,
                          column_size, compare_paths, constant_ordering,
                          count_extremal_prefixes, cylinder_measure,
                          cylinder_measure_approx, doubling_level,
                          explicit_ordering, extreme_path, make_ordering,
                          ordering_from_json, rank, seeded_ordering,
                          tree_embedding_ordering, unrank)
from adiclab.errors import AlphaOutOfRange, MissingBit, RankOutOfRange

from conftest import all_paths, column_paths, seeds


def pascal_table(n_max):
    """Independent oracle: the additive Pascal recurrence."""
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def test_binomial_against_recurrence_oracle():
    rows = pascal_table(25)
    for n in range(26):
        for k in range(n + 1):
            assert binomial(n, k) == rows[n][k]
    assert binomial(7, 0) == 1
    assert binomial(5, 2) == 10
    assert binomial(22, 11) == rows[22][11]
    assert binomial(3, 5) == 0


def test_ordering_kinds_and_bits():
    xi0 = constant_ordering(0)
    assert xi0.bit(3, 4) == 0
    assert xi0.bit(3, 0) is BOTH_EXTREMAL
    xi1 = constant_ordering(1)
    assert xi1.bit(2, 2) == 1

    a = seeded_ordering(42)
    b = seeded_ordering(42)
    bits = [(x, y, a.bit(x, y)) for x in range(1, 9) for y in range(1, 9)]
    assert bits == [(x, y, b.bit(x, y)) for x in range(1, 9) for y in range(1, 9)]
    assert bits == [(x, y, a.bit(x, y)) for x in range(1, 9) for y in range(1, 9)]

    ex = explicit_ordering({(2, 2): 1}, max_level=4)
    assert ex.bit(2, 2) == 1
    assert ex.bit(1, 2) == 0  # default fill
    with pytest.raises(MissingBit):
        ex.bit(3, 2)

    with pytest.raises(ValueError):
        constant_ordering(2)


def test_ordering_json_roundtrip():
    for doc in ({"kind": "constant", "bit": 1},
                {"kind": "seeded", "seed": 9, "bias": 0.25},
                {"kind": "explicit", "bits": [[2, 2, 1], [1, 1, 0]],
                 "maxLevel": 5},
                {"kind": "tree", "depth": 2}):
        xi = make_ordering(doc)
        again = ordering_from_json(xi.to_json())
        probes = [(x, y) for x in range(1, 4) for y in range(1, 4)
                  if x + y <= 4]
        assert [xi.bit(x, y) for x, y in probes] == \
            [again.bit(x, y) for x, y in probes]


def test_path_prefix_basics():
    p = PathPrefix.from_word("aab")
    assert p.terminal == Vertex(2, 1)
    assert p.word() == "aab"
    assert p.vertex_at(2) == Vertex(2, 0)
    assert len(PathPrefix(())) == 0


def test_extreme_paths():
    xi = seeded_ordering(3)
    for which in (MIN, MAX):
        assert extreme_path(xi, Vertex(4, 0), which).word() == "aaaa"
    xi0 = constant_ordering(0)
    assert extreme_path(xi0, Vertex(1, 1), MIN).word() == "ab"
    assert extreme_path(xi0, Vertex(1, 1), MAX).word() == "ba"


def test_rank_extremes_to_level_12():
    for xi in seeds(5):
        for level in (6, 12):
            for x in range(level + 1):
                v = Vertex(x, level - x)
                assert rank(xi, extreme_path(xi, v, MIN)) == 0
                assert rank(xi, extreme_path(xi, v, MAX)) == column_size(v) - 1


def test_rank_is_sort_position_level_8_50_seeds():
    # oracle: sort all paths of a column by pairwise order comparison
    import functools

    for xi in seeds(50):
        for level in (4, 8):
            for x in range(level + 1):
                col = column_paths(level, x)
                ordered = sorted(col, key=functools.cmp_to_key(
                    lambda p, q: compare_paths(xi, p, q)))
                for pos, p in enumerate(ordered):
                    assert rank(xi, p) == pos


def test_unrank_roundtrip_level_8_50_seeds():
    for xi in seeds(50):
        for p in all_paths(8):
            assert unrank(xi, p.terminal, rank(xi, p)) == p


def test_unrank_bounds():
    xi = seeded_ordering(1)
    v = Vertex(3, 2)
    assert unrank(xi, v, 0) == extreme_path(xi, v, MIN)
    with pytest.raises(RankOutOfRange):
        unrank(xi, v, column_size(v))
    with pytest.raises(RankOutOfRange):
        unrank(xi, v, -1)


def test_order_totality_small():
    xi = seeded_ordering(17)
    for x in range(6):
        col = column_paths(5, x)
        for i, p in enumerate(col):
            for q in col[i + 1:]:
                assert compare_paths(xi, p, q) == -compare_paths(xi, q, p) != 0


def test_cylinder_measure():
    alpha = Fraction(1, 3)
    assert cylinder_measure(alpha, PathPrefix(())) == 1
    assert cylinder_measure(alpha, PathPrefix((0,))) == Fraction(2, 3)
    assert cylinder_measure(alpha, PathPrefix((1,))) == Fraction(1, 3)
    with pytest.raises(AlphaOutOfRange):
        cylinder_measure(Fraction(7, 5), PathPrefix((0,)))
    approx = cylinder_measure_approx(0.25, PathPrefix((0, 1)))
    assert abs(approx - 0.75 * 0.25) < 1e-12


def test_measure_additivity():
    alpha = Fraction(3, 7)
    xi = seeded_ordering(2)
    for p in all_paths(6):
        both = (cylinder_measure(alpha, p.extend((0,)))
                + cylinder_measure(alpha, p.extend((1,))))
        assert both == cylinder_measure(alpha, p)


def test_minimal_cylinder_bound():
    # sum over a level of minimal-path cylinder measures <= (n+1) s^n
    alpha = Fraction(2, 5)
    s = max(alpha, 1 - alpha)
    xi = seeded_ordering(11)
    for n in range(1, 21):
        total = sum(cylinder_measure(alpha, extreme_path(xi, Vertex(x, n - x), MIN))
                    for x in range(n + 1))
        assert total <= (n + 1) * s**n


def test_count_extremal_prefixes_constant0():
    xi0 = constant_ordering(0)
    assert count_extremal_prefixes(xi0, 0, MIN) == 1
    for level in (1, 4, 9):
        assert count_extremal_prefixes(xi0, level, MIN) == level + 1
        assert count_extremal_prefixes(xi0, level, MAX) == level + 1


def test_tree_embedding_doubles_minimal_prefixes():
    for d in (1, 2, 3):
        xi = tree_embedding_ordering(d)
        level = doubling_level(d)
        assert count_extremal_prefixes(xi, level, MIN) >= 2**d


def test_tree_ordering_is_total_and_deterministic():
    xi = tree_embedding_ordering(2)
    seen = [xi.bit(x, y) for x in range(1, 10) for y in range(1, 10)]
    assert all(b in (0, 1) for b in seen)
    assert seen == [xi.bit(x, y) for x in range(1, 10) for y in range(1, 10)]

import itertools
import random

import pytest

from adiclab.coding import basic_block, iter_restricted_blocks
from adiclab.core import Vertex, binomial, explicit_ordering, seeded_ordering
from adiclab.errors import CapExceeded, InvalidPeriodWord, ParseError
from adiclab.factoring import (CDToken, CondensedForm,
                               alt_state, alternation_exclusion, combine_alt,
                               condense_concat, condensed_form, decode_ordering,
                               decompose_CD, factor_block,
                               factorization_scheme_counts, intersection_probe,
                               periodic_exclusion, reachable_alt_states,
                               run_context_report, small_subshift_orderings,
                               unique_factorization_check)

from conftest import WORKED_BITS, WORKED_BLOCK, WORKED_TOKENS, seeds


def test_decompose_worked_example():
    assert [str(t) for t in decompose_CD(WORKED_BLOCK)] == WORKED_TOKENS


def test_decompose_simple_and_errors():
    assert decompose_CD("aab") == [CDToken("C", 2)]
    assert decompose_CD("abb") == [CDToken("D", 2)]
    with pytest.raises(ParseError) as err:
        decompose_CD("ba")
    assert err.value.position == 0
    with pytest.raises(ParseError):
        decompose_CD("ab")  # ambiguous token is banned
    with pytest.raises(ParseError):
        decompose_CD("aabba")  # leftover b after a C token


def test_decompose_expansion_roundtrip():
    for _, word in iter_restricted_blocks(4, 3):
        tokens = decompose_CD(word)
        assert "".join(t.expand() for t in tokens) == word
        assert all(t.index >= 2 for t in tokens)


def test_decode_worked_example():
    vertex, table = decode_ordering(WORKED_BLOCK)
    assert vertex == Vertex(4, 3)
    got = {(x, y): table.bit(x, y) for x in range(2, 5) for y in range(2, 4)}
    assert got == WORKED_BITS


def test_decode_small_cases():
    assert decode_ordering("aab")[0] == Vertex(2, 1)
    assert decode_ordering("ab")[0] == Vertex(1, 1)
    assert decode_ordering("abbb")[0] == Vertex(1, 3)


def test_decode_roundtrip_exhaustive_to_4():
    for x in range(2, 5):
        for y in range(2, 5):
            for bits, word in iter_restricted_blocks(x, y):
                vertex, table = decode_ordering(word)
                assert vertex == Vertex(x, y)
                for (u, v), b in bits.items():
                    assert table.bit(u, v) == b


def test_decode_roundtrip_sampled_to_6():
    rng = random.Random(0)
    free = [(u, v) for u in range(2, 7) for v in range(2, 7)]
    for _ in range(40):
        bits = {uv: rng.randint(0, 1) for uv in free}
        xi = explicit_ordering(bits, max_level=12)
        word = basic_block(xi, 6, 6)
        vertex, table = decode_ordering(word)
        assert vertex == Vertex(6, 6)
        assert all(table.bit(u, v) == b for (u, v), b in bits.items())


def test_decode_rejects_corrupt_words():
    word = WORKED_BLOCK[:-1] + "a"
    with pytest.raises(ParseError):
        decode_ordering(word)


def test_factor_block(worked_ordering):
    assert factor_block(worked_ordering, 1, (4, 3), 7) == \
        [(Vertex(4, 3), WORKED_BLOCK)]
    factors = factor_block(worked_ordering, 1, (4, 3), 6)
    assert [v for v, _ in factors] == [Vertex(3, 3), Vertex(4, 2)]
    assert "".join(w for _, w in factors) == WORKED_BLOCK


def test_factor_block_concatenates_everywhere():
    for xi in seeds(3):
        for n in range(2, 13):
            for x in range(1, n):
                for m in range(1, n + 1):
                    factors = factor_block(xi, 1, (x, n - x), m)
                    joined = "".join(w for _, w in factors)
                    assert joined == basic_block(xi, x, n - x)
                    assert sum(len(w) for _, w in factors) == binomial(n, x)


def test_factor_block_k3():
    from adiclab.coding import block_word_k

    xi = seeded_ordering(6)
    factors = factor_block(xi, 3, (4, 2), 3)
    assert b"".join(w for _, w in factors) == block_word_k(xi, 3, 4, 2)
    with pytest.raises(Exception):
        factor_block(xi, 3, (4, 2), 2)  # m below k


def test_unique_factorization_k3_seeded():
    for xi in seeds(10):
        for n in range(3, 9):
            assert unique_factorization_check(xi, 3, n)


def test_unique_factorization_k1_restricted_box3():
    free = [(u, v) for u in range(2, 4) for v in range(2, 4)]
    for choice in itertools.product((0, 1), repeat=len(free)):
        xi = explicit_ordering(dict(zip(free, choice)), max_level=6)
        for n in range(2, 7):
            assert unique_factorization_check(xi, 1, n)


def test_factorization_counts_report_mode():
    counts = factorization_scheme_counts(seeded_ordering(3), 1, 5)
    assert all(c >= 1 for c in counts.values())
    assert (Vertex(2, 3), 1) in counts


def test_condensed_form_examples():
    assert condensed_form("ababaab") == CondensedForm("ababa", "ab", False)
    assert condensed_form("abab") == CondensedForm("abab", "abab", True)
    assert condensed_form("a") == CondensedForm("a", "a", True)


def test_condense_concat_cases():
    s1 = condensed_form("ababaab")
    s2 = condensed_form("babbab")
    assert condense_concat(s1, s2) == CondensedForm("ababa", "bab", False)
    assert condense_concat(condensed_form("ab"), condensed_form("ab")) == \
        CondensedForm("abab", "abab", True)
    assert condense_concat(condensed_form("ab"), condensed_form("ba")) == \
        CondensedForm("ab", "ba", False)


def test_condense_concat_homomorphism_and_associativity():
    rng = random.Random(1)

    def word():
        return "".join(rng.choice("ab") for _ in range(rng.randint(1, 14)))

    for _ in range(10000):
        u, v = word(), word()
        assert condense_concat(condensed_form(u), condensed_form(v)) == \
            condensed_form(u + v)
    for _ in range(2000):
        u, v, w = word(), word(), word()
        a = condense_concat(condense_concat(condensed_form(u), condensed_form(v)),
                            condensed_form(w))
        b = condense_concat(condensed_form(u),
                            condense_concat(condensed_form(v), condensed_form(w)))
        assert a == b == condensed_form(u + v + w)


def test_alt_state_combine_matches_direct():
    rng = random.Random(2)
    for _ in range(10000):
        u = "".join(rng.choice("ab") for _ in range(rng.randint(1, 25)))
        v = "".join(rng.choice("ab") for _ in range(rng.randint(1, 25)))
        assert combine_alt(alt_state(u), alt_state(v)) == alt_state(u + v)


def test_alt_state_of_extremal_alternation_blocks():
    xi, xi_prime = small_subshift_orderings()
    s = alt_state(basic_block(xi, 3, 3))
    assert (s.maxab, s.maxba) == (18, 17)
    s = alt_state(basic_block(xi_prime, 3, 3))
    assert (s.maxab, s.maxba) == (17, 18)


def test_alternation_exclusion_small():
    verdict = alternation_exclusion(8, 9, exact_level=6)
    assert verdict.excluded and verdict.exact_excluded and verdict.dp_excluded
    with pytest.raises(CapExceeded):
        alternation_exclusion(6, 12)


def test_alternation_exclusion_negative_control():
    # (ab)^3 and (ba)^3 do co-occur in real blocks, so j = 3 must fail
    verdict = alternation_exclusion(7, 3, exact_level=5)
    assert not verdict.exact_excluded
    assert verdict.witness_level == 5
    assert verdict.witness_state.maxab >= 6 and verdict.witness_state.maxba >= 6


def test_phase2_contains_exact_states():
    reach = reachable_alt_states(5)
    free = [(x, y) for n in range(2, 6) for x in range(1, n) for y in [n - x]]
    for choice in itertools.product((0, 1), repeat=len(free)):
        xi = explicit_ordering(dict(zip(free, choice)), max_level=5)
        for x, y in free:
            assert alt_state(basic_block(xi, x, y)) in reach[(x, y)]


def test_run_context_report_xi():
    xi, _ = small_subshift_orderings()
    for l in (7, 8, 9, 10):
        rep = run_context_report(xi, l, 16, "bab-run")
        long = "b" + "a" * l + "b" + "a" * l + "b" + "a" * (l - 1) + "b"
        short = "b" + "a" * l + "b" + "a" * (l - 1) + "b"
        assert set(rep.contexts) == {long, short}


def test_run_context_report_xi_prime_forms():
    import re

    _, xi_prime = small_subshift_orderings()
    for l in (7, 8):
        rep = run_context_report(xi_prime, l, 16, "bab-run")
        a = "a" * l
        form = re.compile(f"b{a}b|b{a}b{a}b{{2,}}a")
        assert all(form.fullmatch(w) for w in rep.contexts)


def test_run_context_generic_reporting():
    rep = run_context_report(seeded_ordering(3), 7, 14, "aba-run")
    assert rep.pattern == "aba-run"
    with pytest.raises(ValueError):
        run_context_report(seeded_ordering(3), 5, 10)


def test_intersection_probe_basics():
    xi, xi_prime = small_subshift_orderings()
    assert intersection_probe(xi, xi_prime, 1, 4) == {"a", "b"}
    a = intersection_probe(xi, xi_prime, 7, 12)
    b = intersection_probe(xi_prime, xi, 7, 12)
    assert a == b


def test_periodic_exclusion():
    xi = seeded_ordering(5)
    rep = periodic_exclusion(xi, 2, 18)
    assert rep.all_excluded and len(rep.cases) == 2
    assert rep.window_length == 3 * binomial(12, 6) + 1
    with pytest.raises(InvalidPeriodWord):
        periodic_exclusion(xi, 4, 10, words=["aaaa"])
    with pytest.raises(InvalidPeriodWord):
        periodic_exclusion(xi, 1, 10)


def test_periodic_exclusion_constant0_aabb():
    rep = periodic_exclusion(explicit_ordering({}, max_level=20), 4, 18,
                             words=["aabb"])
    assert rep.all_excluded
    case = rep.cases[0]
    assert case.absent_window is not None
    assert case.minimal_absent_length <= case.window_length

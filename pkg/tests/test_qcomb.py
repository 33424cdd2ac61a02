import itertools
import math
from collections import deque

import pytest
from hypothesis import given, strategies as st

from qdicke.qcomb import (
    LaurentPoly,
    compositions,
    identity_word,
    inversion_generating_poly,
    inversion_number,
    max_inversion,
    multinomial,
    multiset_permutations,
    q_bracket,
    q_bracket_poly,
    q_multinomial_log,
    q_multinomial_poly,
    reverse_composition,
    split_crossing_count,
    verify_inversion_identity,
)


def min_adjacent_swaps(start, goal):
    """BFS over adjacent transpositions."""
    start, goal = tuple(start), tuple(goal)
    dist = {start: 0}
    todo = deque([start])
    while todo:
        w = todo.popleft()
        if w == goal:
            return dist[w]
        for i in range(len(w) - 1):
            v = list(w)
            v[i], v[i + 1] = v[i + 1], v[i]
            v = tuple(v)
            if v not in dist:
                dist[v] = dist[w] + 1
                todo.append(v)
    raise AssertionError("goal unreachable")


def naive_inversions(w):
    return sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])


def all_compositions(max_n, max_d, min_n=1):
    for d in range(1, max_d + 1):
        for n in range(min_n, max_n + 1):
            yield from compositions(n, d)


# -- brackets ---------------------------------------------------------------

def test_q_bracket_examples():
    assert q_bracket(0, 2) == 0
    assert q_bracket(5, 1) == 5
    assert q_bracket(2, 2) == pytest.approx((4 - 0.25) / (2 - 0.5), abs=1e-15)
    assert q_bracket(2, 2) == pytest.approx(2.5)


def test_q_bracket_symmetric_and_near_one():
    for x in (0.5, 3, 7.25):
        assert q_bracket(x, 1.7) == pytest.approx(q_bracket(x, 1 / 1.7), rel=1e-13)
    assert q_bracket(4, 1 + 1e-13) == 4.0
    assert q_bracket(4, 1 + 1e-6) == pytest.approx(4, rel=1e-9)


def test_q_bracket_poly():
    assert q_bracket_poly(1) == LaurentPoly.one()
    assert str(q_bracket_poly(3)) == "q^2 + 1 + q^-2"
    assert str(q_bracket_poly(5)) == "q^4 + q^2 + 1 + q^-2 + q^-4"
    with pytest.raises(ValueError):
        q_bracket_poly(0)


@pytest.mark.parametrize("q", [0.5, 1.3, 2.0])
def test_bracket_poly_matches_numeric(q):
    for n in range(1, 21):
        assert q_bracket_poly(n).evaluate(q) == pytest.approx(q_bracket(n, q), rel=1e-12, abs=1e-12)


# -- Laurent polynomials ----------------------------------------------------

def test_worked_multinomial():
    p = q_multinomial_poly((1, 2, 1))
    assert str(p) == "q^5 + 2*q^3 + 3*q + 3*q^-1 + 2*q^-3 + q^-5"
    assert p.to_latex() == "q^5+2q^3+3q+3q^{-1}+2q^{-3}+q^{-5}"
    assert q_multinomial_poly((4, 0, 0)) == LaurentPoly.one()
    assert q_multinomial_poly((2, 1)) == q_bracket_poly(3)


def test_half_integer_text():
    assert str(LaurentPoly({5: 1, -5: 2})) == "q^(5/2) + 2*q^(-5/2)"
    assert str(LaurentPoly({2: -1, 0: 3})) == "-q + 3"
    assert str(LaurentPoly()) == "0"


def test_inexact_division_asserts():
    with pytest.raises(AssertionError):
        q_bracket_poly(3) // q_bracket_poly(2)


polys = st.dictionaries(st.integers(-8, 8), st.integers(-50, 50), max_size=6).map(LaurentPoly)


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(polys, polys)
def test_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b) // b == a


@given(polys, st.floats(0.3, 3.0))
def test_evaluate_is_homomorphic(a, q):
    b = LaurentPoly({2: 1, -4: 3})
    assert (a * b).evaluate(q) == pytest.approx(a.evaluate(q) * b.evaluate(q), rel=1e-9, abs=1e-9)


def test_multinomial_at_one_and_palindromic():
    for k in all_compositions(8, 4):
        p = q_multinomial_poly(k)
        assert p.is_palindromic()
        assert all(v > 0 for v in p.coeffs.values())
        assert p.evaluate(1.0) == multinomial(k)


def test_multinomial_log():
    assert q_multinomial_log((1, 2, 1), 1.0) == pytest.approx(math.log(12), abs=1e-14)
    assert q_multinomial_log((5, 0), 1.7) == 0
    exact = q_multinomial_poly((2, 2)).evaluate(1.5)
    assert q_multinomial_log((2, 2), 1.5) == pytest.approx(math.log(exact), abs=1e-12)
    # large n stays finite
    assert math.isfinite(q_multinomial_log((13, 13, 13, 13), 2.0))


def test_coefficients_are_big_integers():
    k = (20, 20, 20)
    p = q_multinomial_poly(k)
    assert max(p.coeffs.values()) > 2**63
    # exact integer equality, no floating point involved
    assert sum(p.coeffs.values()) == multinomial(k)


# -- words ------------------------------------------------------------------

def test_inversion_examples():
    assert inversion_number((1, 2, 0, 1)) == 3
    assert inversion_number(identity_word((1, 2, 1))) == 0
    assert inversion_number((2, 1, 1, 0)) == min_adjacent_swaps((0, 1, 1, 2), (2, 1, 1, 0)) == 5
    assert max_inversion((1, 2, 1)) == 5


def test_inversion_matches_bfs_oracle():
    for k in all_compositions(6, 3):
        e = identity_word(k)
        for w in multiset_permutations(k):
            assert inversion_number(w) == naive_inversions(w)
        # BFS is costly, so one orbit per composition only
        for w in itertools.islice(multiset_permutations(k), 0, None, 7):
            assert inversion_number(w) == min_adjacent_swaps(e, w)


def test_max_inversion():
    assert max_inversion((4, 0, 0)) == 0
    assert max_inversion((2, 3)) == 6 == inversion_number((1, 1, 1, 0, 0))
    for k in all_compositions(8, 4):
        rev = tuple(reversed(identity_word(k)))
        assert inversion_number(rev) == max_inversion(k)
        assert max(inversion_number(w) for w in multiset_permutations(k)) == max_inversion(k)


def test_identity_word_and_reverse():
    assert identity_word((1, 2, 1)) == (0, 1, 1, 2)
    assert identity_word((0, 3)) == (1, 1, 1)
    assert identity_word((2, 1, 1)) == tuple(sorted((2, 0, 1, 0)))
    assert reverse_composition((1, 2, 1)) == (1, 2, 1)
    assert reverse_composition((26, 16, 9, 1)) == (1, 9, 16, 26)
    assert reverse_composition((2, 3)) == (3, 2)


def test_multiset_permutations():
    words = list(multiset_permutations((1, 2, 1)))
    expected = {"0112", "1012", "0121", "1102", "0211", "1021",
             "1120", "1201", "2011", "1210", "2101", "2110"}
    assert {"".join(map(str, w)) for w in words} == expected
    assert list(multiset_permutations((3, 0))) == [(0, 0, 0)]
    assert ["".join(map(str, w)) for w in multiset_permutations((2, 2))] == [
        "0011", "0101", "0110", "1001", "1010", "1100"]


def test_permutation_count_order_and_uniqueness():
    for k in all_compositions(8, 4):
        words = list(multiset_permutations(k))
        assert len(words) == multinomial(k)
        assert words == sorted(set(words))


def test_inversion_identity():
    assert verify_inversion_identity((1, 2, 1))
    assert inversion_generating_poly((1, 2, 1)).coefficient_multiset() == [1, 2, 3, 3, 2, 1]
    assert verify_inversion_identity((1, 0, 0))
    assert verify_inversion_identity((2, 2, 2))
    assert len(list(multiset_permutations((2, 2, 2)))) == 90


def test_inversion_identity_fails_for_wrong_statistic():
    # the identity must be sensitive: a different exponent convention breaks it
    k = (1, 2, 1)
    J = max_inversion(k)
    wrong = LaurentPoly()
    for w in multiset_permutations(k):
        wrong = wrong + LaurentPoly.monomial(J - 2 * inversion_number(w))
    assert wrong != q_multinomial_poly(k)


def test_split_inversion_lemma():
    """inv(w) = inv(prefix) + inv(suffix) + sum_{i<j} (k_i - a_i) a_j."""
    for k in all_compositions(6, 3):
        n, d = sum(k), len(k)
        for w in multiset_permutations(k):
            for l in range(n + 1):
                a = [0] * d
                for c in w[:l]:
                    a[c] += 1
                lhs = inversion_number(w)
                rhs = inversion_number(w[:l]) + inversion_number(w[l:]) + split_crossing_count(k, a)
                assert lhs == rhs

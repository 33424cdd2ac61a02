import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdicke import entanglement
from qdicke.entanglement import (
    entanglement_entropy,
    entropy_bruteforce,
    entropy_curve,
    enumerate_cuts,
    jacobi_eigenvalues,
    schmidt_coefficient,
    schmidt_coefficients,
    schmidt_reconstruct,
    verify_q_vandermonde,
)
from qdicke.qcomb import DeformationParam, compositions, multiset_permutations, reverse_composition
from qdicke.states import basis_state, dicke_recursive, dicke_sum


def grid(max_n, max_d, min_n=2, min_d=1):
    for d in range(min_d, max_d + 1):
        for n in range(min_n, max_n + 1):
            yield from compositions(n, d)


def test_enumerate_cuts():
    assert enumerate_cuts((1, 2, 1), 2) == [(0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0)]
    assert enumerate_cuts((3, 0), 2) == [(2, 0)]
    with pytest.raises(ValueError):
        enumerate_cuts((1, 2, 1), 4)
    with pytest.raises(ValueError):
        enumerate_cuts((1, 2, 1), 0)


def test_cut_cardinality_symmetry():
    for k in grid(7, 4):
        n = sum(k)
        for l in range(1, n):
            cuts = enumerate_cuts(k, l)
            assert len(cuts) == len(set(cuts))
            assert len(cuts) == len(enumerate_cuts(k, n - l))
            assert all(sum(a) == l and all(0 <= x <= y for x, y in zip(a, k)) for a in cuts)


@pytest.mark.parametrize("q", [0.5, 1.0, 1.07, 2.0])
def test_schmidt_normalization(q):
    for d in range(1, 5):
        for n in (2, 3, 5, 8, 13, 21, 40):
            for k in compositions(n, d) if n <= 13 or d <= 2 else [tuple(n // d + (i < n % d) for i in range(d))]:
                for l in range(1, n):
                    total = math.fsum(lam for _, lam in schmidt_coefficients(k, l, q))
                    assert abs(total - 1) < 1e-10


def test_schmidt_normalization_wide_at_n40():
    rng = np.random.default_rng(7)
    for _ in range(30):
        d = int(rng.integers(2, 5))
        cuts = np.sort(rng.integers(0, 41, size=d - 1))
        k = tuple(np.diff(np.concatenate([[0], cuts, [40]])).tolist())
        for q in (0.5, 2.0):
            for l in (1, 13, 20, 39):
                assert abs(math.fsum(lam for _, lam in schmidt_coefficients(k, l, q)) - 1) < 1e-10


def test_lambda_symmetries():
    for k in grid(6, 3):
        n = sum(k)
        for q in (0.6, 1.7):
            for l in range(1, n):
                for a in enumerate_cuts(k, l):
                    lam = schmidt_coefficient(k, a, l, q)
                    rest = tuple(x - y for x, y in zip(k, a))
                    assert abs(lam - schmidt_coefficient(k, rest, n - l, 1 / q)) < 1e-12
                    rk, ra = reverse_composition(k), reverse_composition(a)
                    assert abs(lam - schmidt_coefficient(rk, ra, l, 1 / q)) < 1e-12


def test_schmidt_coefficient_validation():
    with pytest.raises(ValueError):
        schmidt_coefficient((1, 2, 1), (2, 0, 0), 2, 1.0)
    with pytest.raises(ValueError):
        schmidt_coefficient((1, 2, 1), (0, 1, 0), 2, 1.0)


def hypergeometric_by_counting(k, l):
    """Fraction of words of M(k) whose first l letters have content a."""
    counts = {}
    words = list(multiset_permutations(k))
    for w in words:
        a = tuple(w[:l].count(c) for c in range(len(k)))
        counts[a] = counts.get(a, 0) + 1
    return {a: Fraction(c, len(words)) for a, c in counts.items()}


def test_q_one_is_hypergeometric():
    ref = hypergeometric_by_counting((1, 2, 1), 2)
    assert sorted(ref.values()) == sorted(Fraction(x, 12) for x in (4, 2, 4, 2))
    for k in grid(6, 3):
        for l in range(1, sum(k)):
            ref = hypergeometric_by_counting(k, l)
            got = dict(schmidt_coefficients(k, l, 1.0))
            assert set(got) == set(ref)
            for a in ref:
                assert abs(got[a] - float(ref[a])) < 1e-13


def test_entropy_examples():
    assert entanglement_entropy((1, 1), 1.0, 1) == pytest.approx(1.0, abs=1e-15)
    assert entanglement_entropy((4, 0, 0), 1.7, 2) == 0
    assert entanglement_entropy((3,), 1.7, 1) == 0
    assert entanglement_entropy((1, 1), 1.0, 1, base=math.e) == pytest.approx(math.log(2))
    # complex q: only the magnitude matters
    assert entanglement_entropy((2, 2), DeformationParam(1.3, 1.0), 2) == entanglement_entropy((2, 2), 1.3, 2)
    with pytest.raises(ValueError):
        entanglement_entropy((1, 1), 1.0, 2)


def test_entropy_bounded_by_schmidt_rank():
    for k in grid(7, 3):
        for l in range(1, sum(k)):
            s = entanglement_entropy(k, 1.3, l)
            rank = len(enumerate_cuts(k, l))
            assert -1e-15 <= s <= math.log(rank, len(k)) + 1e-12 if len(k) > 1 else s == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.data())
def test_jacobi_matches_numpy(m, data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    h = a + a.conj().T
    ours = np.sort(jacobi_eigenvalues(h))
    ref = np.linalg.eigvalsh(h)  # reference only; the package never calls it
    assert np.max(np.abs(ours - ref)) < 1e-10 * max(1, np.max(np.abs(ref)))


def test_jacobi_small_cases():
    assert np.allclose(sorted(jacobi_eigenvalues(np.array([[2, 1j], [-1j, 2]]))), [1, 3])
    assert jacobi_eigenvalues(np.array([[5.0]])).tolist() == [5.0]
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.zeros((2, 3)))


def test_bruteforce_examples():
    assert abs(entropy_bruteforce(dicke_sum((1, 2, 1), 1.3), 2) - entanglement_entropy((1, 2, 1), 1.3, 2)) < 1e-9
    assert entropy_bruteforce(basis_state((0, 1, 2, 1), 3), 2) == 0
    Q = DeformationParam(1.2, 0.9)
    assert abs(entropy_bruteforce(dicke_sum((2, 1, 2), Q), 2) - entanglement_entropy((2, 1, 2), 1.2, 2)) < 1e-9


@pytest.mark.parametrize("Q", [DeformationParam(0.5), DeformationParam(1.07), DeformationParam(2.0, 2.1)])
def test_bruteforce_oracle(Q):
    for k in grid(6, 3):
        st_ = dicke_sum(k, Q)
        for l in range(1, sum(k)):
            assert abs(entropy_bruteforce(st_, l) - entanglement_entropy(k, Q.magnitude, l)) < 1e-9


def test_reconstruction():
    assert schmidt_reconstruct((1, 1, 2), 1.4, 2).distance(dicke_sum((1, 1, 2), 1.4)) < 1e-12
    assert schmidt_reconstruct((1, 2, 1), 1.0, 2).distance(dicke_sum((1, 2, 1), 1.0)) < 1e-12
    for Q in (DeformationParam(0.7, 0.0), DeformationParam(1.3, 2.5)):
        for k in grid(5, 3):
            for l in range(1, sum(k)):
                assert schmidt_reconstruct(k, Q, l).distance(dicke_sum(k, Q)) < 1e-12
    # l = n-1 is the one-qudit recursion
    Q = DeformationParam(1.5, 0.4)
    assert schmidt_reconstruct((2, 1, 2), Q, 4).distance(dicke_recursive((2, 1, 2), Q)) < 1e-12


def test_vandermonde():
    assert verify_q_vandermonde((1, 2, 1), 2)
    assert verify_q_vandermonde((5, 0), 3)
    for k in grid(7, 3):
        for l in range(1, sum(k)):
            assert verify_q_vandermonde(k, l)


def test_vandermonde_detects_missing_exponent(monkeypatch):
    # a global sign flip is invisible here (q -> 1/q symmetry), dropping the power is not
    monkeypatch.setattr(entanglement, "cut_exponent", lambda k, a: 0)
    assert not verify_q_vandermonde((1, 2, 1), 2)


def test_curve_symmetries():
    k = (3, 5, 2)
    n = sum(k)
    a = entropy_curve(k, 1.3).values()
    b = entropy_curve(k, 1 / 1.3).values()
    c = entropy_curve(reverse_composition(k), 1.3).values()
    for l in range(1, n):
        assert abs(a[l - 1] - b[n - l - 1]) < 1e-12
        assert abs(a[l - 1] - c[n - l - 1]) < 1e-12
    sym = entropy_curve((15, 15, 15), 1.07).values()
    assert max(abs(x - y) for x, y in zip(sym, reversed(sym))) < 1e-9


def test_curve_matches_pointwise():
    curve = entropy_curve((2, 3, 1), 0.8, ls=[1, 4])
    assert [l for l, _ in curve.rows] == [1, 4]
    assert curve.values() == [entanglement_entropy((2, 3, 1), 0.8, l) for l in (1, 4)]


def test_curve_csv_and_filename():
    curve = entropy_curve((2, 0), 1.5)
    assert curve.to_csv() == "l,S\n1,0\n"
    c = entropy_curve((1, 1), 1.0)
    assert c.to_csv() == "l,S\n1,1\n"
    assert entropy_curve((15, 15, 15), 1.07).filename() == "3_45_15-15-15_1.07.csv"
    lines = entropy_curve((13, 13, 13, 13), 1.1).to_csv().splitlines()
    assert len(lines) == 52 and all(len(r.split(",")) == 2 for r in lines)

"""su_q(d) generators on n qudits as sparse matrices.

Generator indices ``i`` are 1-based (``1 <= i <= d-1``) while basis states
``|j>`` are 0-based, so ``e_{i,i}`` projects onto ``|i-1>``.  Tensor factors
are ordered with the leftmost site most significant, the same convention as
:mod:`qdicke.states`.

All operators are ``scipy.sparse.csr_matrix`` with complex entries.  Every
stored entry is a product of q powers and 0/1 matrix elements, and explicit
zeros are eliminated.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .qcomb import q_bracket

SparseOperator = sp.csr_matrix


def _check_index(d: int, i: int):
    if d < 2 or not 1 <= i <= d - 1:
        raise IndexError(f"generator index {i} out of range for d={d}")


def _csr(m) -> sp.csr_matrix:
    out = sp.csr_matrix(m, dtype=complex)
    out.eliminate_zeros()
    return out


def elementary(d: int, i: int, j: int) -> sp.csr_matrix:
    """``e_{ij}`` with 1-based indices."""
    return _csr(sp.coo_matrix(([1.0], ([i - 1], [j - 1])), shape=(d, d)))


def site_cartan(d: int, i: int) -> sp.csr_matrix:
    _check_index(d, i)
    return _csr(elementary(d, i, i) - elementary(d, i + 1, i + 1))


def site_chevalley(d: int, i: int, sign: int) -> sp.csr_matrix:
    _check_index(d, i)
    if sign > 0:
        return elementary(d, i, i + 1)
    return elementary(d, i + 1, i)


def site_q_cartan(d: int, i: int, q_mag: float, power: float) -> sp.csr_matrix:
    """``q**(power * H_i)`` on one site; ``H_i`` is diagonal."""
    h = site_cartan(d, i).diagonal().real
    return _csr(sp.diags(q_mag ** (power * h)))


def kron_all(ops) -> sp.csr_matrix:
    return _csr(reduce(lambda a, b: sp.kron(a, b, format="csr"), ops))


def identity(d: int, n: int) -> sp.csr_matrix:
    return _csr(sp.identity(d**n))


def embed(op, d: int, n: int, j: int) -> sp.csr_matrix:
    """``I x ... x op (site j) x ... x I``."""
    eye = sp.identity(d, format="csr")
    return kron_all([op if s == j else eye for s in range(n)])


def coproduct_cartan(d: int, n: int, i: int) -> sp.csr_matrix:
    h = site_cartan(d, i)
    return _csr(sum(embed(h, d, n, j) for j in range(n)))


def coproduct_chevalley(d: int, n: int, i: int, sign: int, q_mag: float) -> sp.csr_matrix:
    """Dressed sum: ``q^{H/2}`` left of the active site, ``q^{-H/2}`` right of it."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x = site_chevalley(d, i, sign)
    up = site_q_cartan(d, i, q_mag, 0.5)
    down = site_q_cartan(d, i, q_mag, -0.5)
    terms = []
    for j in range(n):
        terms.append(kron_all([up] * j + [x] + [down] * (n - 1 - j)))
    return _csr(sum(terms))


def coproduct_chevalley_recursive(d: int, n: int, i: int, sign: int, q_mag: float) -> sp.csr_matrix:
    """Same operator built through the one-site-at-a-time recursion."""
    x = site_chevalley(d, i, sign)
    if n == 1:
        return x
    up = site_q_cartan(d, i, q_mag, 0.5)
    down = site_q_cartan(d, i, q_mag, -0.5)
    head = sp.kron(kron_all([up] * (n - 1)), x, format="csr")
    tail = sp.kron(coproduct_chevalley_recursive(d, n - 1, i, sign, q_mag), down, format="csr")
    return _csr(head + tail)


def commutator(a, b) -> sp.csr_matrix:
    return _csr(a @ b - b @ a)


def nested_lowering(d: int, n: int, j: int, q_mag: float) -> sp.csr_matrix:
    """``[X^-_j, [..., [X^-_2, X^-_1]...]]`` on n qudits."""
    _check_index(d, j)
    out = coproduct_chevalley(d, n, 1, -1, q_mag)
    for i in range(2, j + 1):
        out = commutator(coproduct_chevalley(d, n, i, -1, q_mag), out)
    return out


def ordered_lowering(d: int, n: int, i: int, q_mag: float) -> sp.csr_matrix:
    """``X^-_i X^-_{i-1} ... X^-_1`` on n qudits."""
    _check_index(d, i)
    out = coproduct_chevalley(d, n, 1, -1, q_mag)
    for r in range(2, i + 1):
        out = _csr(coproduct_chevalley(d, n, r, -1, q_mag) @ out)
    return out


def bracket_of_cartan(d: int, n: int, i: int, q_mag: float) -> sp.csr_matrix:
    """``[H^{(n)}_i]``: the q-bracket applied to the (diagonal) Cartan matrix."""
    h = coproduct_cartan(d, n, i).diagonal().real
    return _csr(sp.diags([q_bracket(x, q_mag) for x in h]))


def charge_conjugation(d: int, n: int) -> sp.csr_matrix:
    if d < 2:
        raise ValueError("charge conjugation needs d >= 2")
    c = _csr(sp.coo_matrix((np.ones(d), (np.arange(d), np.arange(d)[::-1])), shape=(d, d)))
    return kron_all([c] * n)


def max_abs(m) -> float:
    if sp.issparse(m):
        return float(abs(m).max()) if m.nnz else 0.0
    return float(np.max(np.abs(m))) if m.size else 0.0


@dataclass
class CommutationReport:
    d: int
    n: int
    q_mag: float
    cartan_chevalley: float
    raising_lowering: float
    tol: float = 1e-12

    @property
    def worst(self) -> float:
        return max(self.cartan_chevalley, self.raising_lowering)

    @property
    def ok(self) -> bool:
        return self.worst < self.tol


def verify_commutation(d: int, n: int, q_mag: float, tol: float = 1e-12) -> CommutationReport:
    """Max entrywise violation of both displayed su_q(d) relations."""
    H = {i: coproduct_cartan(d, n, i) for i in range(1, d)}
    Xp = {i: coproduct_chevalley(d, n, i, +1, q_mag) for i in range(1, d)}
    Xm = {i: coproduct_chevalley(d, n, i, -1, q_mag) for i in range(1, d)}
    worst_h = 0.0
    worst_x = 0.0
    for i in range(1, d):
        for j in range(1, d):
            a = 2 * (i == j) - (i - 1 == j) - (i + 1 == j)
            for sign, X in ((+1, Xp), (-1, Xm)):
                lhs = commutator(H[i], X[j])
                worst_h = max(worst_h, max_abs(lhs - sign * a * X[j]))
            lhs = commutator(Xp[i], Xm[j])
            rhs = bracket_of_cartan(d, n, i, q_mag) if i == j else sp.csr_matrix(lhs.shape, dtype=complex)
            worst_x = max(worst_x, max_abs(lhs - rhs))
    return CommutationReport(d, n, q_mag, worst_h, worst_x, tol)


def verify_recursion(d: int, n: int, q_mag: float) -> float:
    """Max deviation between the summed and recursive coproducts over all i, signs."""
    worst = 0.0
    for i in range(1, d):
        for sign in (+1, -1):
            a = coproduct_chevalley(d, n, i, sign, q_mag)
            b = coproduct_chevalley_recursive(d, n, i, sign, q_mag)
            worst = max(worst, max_abs(a - b))
    return worst


def basis_vector(word, d: int) -> np.ndarray:
    idx = 0
    for c in word:
        idx = idx * d + int(c)
    v = np.zeros(d ** len(word), dtype=complex)
    v[idx] = 1.0
    return v


def vacuum(d: int, n: int) -> np.ndarray:
    return basis_vector((0,) * n, d)

"""Bipartite entanglement of q-qudit Dicke states.

Schmidt weights are evaluated in the log domain from q-factorial tables, so
curves at n ~ 50 never build a statevector.  :func:`entropy_bruteforce` is an
independent check: it reshapes an explicit state, forms the Gram matrix and
diagonalizes it with cyclic Jacobi rotations.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qcomb import (
    LaurentPoly,
    as_composition,
    as_deformation,
    log_q_factorials,
    q_multinomial_poly,
)
from .states import ResourceLimitError, StateVector, check_dimension, dicke_sum

EIGEN_FLOOR = 1e-14
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
# largest Gram block handed to the Jacobi solver
BRUTEFORCE_LIMIT = 4096


def _check_l(k: Sequence[int], l: int):
    n = sum(k)
    if not 1 <= l <= n - 1:
        raise ValueError(f"cut position l={l} out of range 1..{n - 1}")


def enumerate_cuts(k, l: int) -> list[tuple[int, ...]]:
    """All ``a`` with ``0 <= a_i <= k_i`` and ``sum(a) = l``, lexicographically."""
    k = as_composition(k)
    _check_l(k, l)
    out = []

    def rec(i: int, left: int, prefix: tuple):
        if i == len(k) - 1:
            if left <= k[i]:
                out.append(prefix + (left,))
            return
        room = sum(k[i + 1:])
        for ai in range(max(0, left - room), min(k[i], left) + 1):
            rec(i + 1, left - ai, prefix + (ai,))

    rec(0, l, ())
    return out


def cut_exponent(k: Sequence[int], a: Sequence[int]) -> int:
    """``sum_{i<j} (a_i k_j - a_j k_i)``."""
    d = len(k)
    return sum(a[i] * k[j] - a[j] * k[i] for i in range(d) for j in range(i + 1, d))


def _check_cut(k, a, l):
    if len(a) != len(k) or sum(a) != l or any(not 0 <= x <= y for x, y in zip(a, k)):
        raise ValueError(f"{tuple(a)} is not a cut of {tuple(k)} at l={l}")


def _log_lambda(k, a, l, log_q: float, table: list[float]) -> float:
    n = sum(k)
    rest = [x - y for x, y in zip(k, a)]
    return (
        cut_exponent(k, a) * log_q
        + table[l] - sum(table[x] for x in a)
        + table[n - l] - sum(table[x] for x in rest)
        - (table[n] - sum(table[x] for x in k))
    )


def schmidt_coefficient(k, a, l: int, q_mag: float) -> float:
    k = as_composition(k)
    a = tuple(a)
    _check_l(k, l)
    _check_cut(k, a, l)
    table = log_q_factorials(sum(k), q_mag)
    return math.exp(_log_lambda(k, a, l, math.log(q_mag), table))


def schmidt_coefficients(k, l: int, q_mag: float) -> list[tuple[tuple[int, ...], float]]:
    k = as_composition(k)
    table = log_q_factorials(sum(k), q_mag)
    log_q = math.log(q_mag)
    return [(a, math.exp(_log_lambda(k, a, l, log_q, table))) for a in enumerate_cuts(k, l)]


def schmidt_reconstruct(k, q, l: int) -> StateVector:
    """Rebuild the Dicke state from its Schmidt decomposition at cut ``l``."""
    k = as_composition(k)
    Q = as_deformation(q)
    _check_l(k, l)
    d, n = len(k), sum(k)
    check_dimension(d, n)
    amps = np.zeros(d**n, dtype=complex)
    for a, lam in schmidt_coefficients(k, l, Q.magnitude):
        rest = tuple(x - y for x, y in zip(k, a))
        coeff = math.sqrt(lam) * Q.phase_half(cut_exponent(k, a))
        left = dicke_sum(a, Q).amplitudes
        right = dicke_sum(rest, Q).amplitudes
        amps += coeff * np.kron(left, right)
    return StateVector(d, n, amps)


def _entropy(weights, base: float) -> float:
    s = -math.fsum(w * math.log(w) for w in weights if w > 0)
    if base == 1:
        # d = 1 states are product states; log_1 is undefined
        return 0.0
    return max(0.0, s) / math.log(base)


def entanglement_entropy(k, q_mag: float, l: int, base: float | None = None) -> float:
    """Von Neumann entropy of the first ``l`` qudits, in base ``d`` by default."""
    k = as_composition(k)
    _check_l(k, l)
    q_mag = as_deformation(q_mag).magnitude
    lams = [lam for _, lam in schmidt_coefficients(k, l, q_mag)]
    return _entropy(lams, base or len(k))


# ---------------------------------------------------------------------------
# brute-force oracle


def jacobi_eigenvalues(a: np.ndarray, tol: float = JACOBI_TOL,
                       max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps over all ``(p, q)`` pairs until the off-diagonal Frobenius norm
    drops below ``tol``.
    """
    a = np.array(a, dtype=complex)
    m = a.shape[0]
    if a.shape != (m, m):
        raise ValueError("jacobi_eigenvalues needs a square matrix")
    if m == 1:
        return a.diagonal().real.copy()

    def off_norm():
        return math.sqrt(max(0.0, float(np.sum(np.abs(a) ** 2) - np.sum(np.abs(a.diagonal()) ** 2))))

    for _ in range(max_sweeps):
        if off_norm() < tol:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau  # avoid overflow in tau * tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes a[p, q]
                u00, u01 = c, s
                u10, u11 = -s * phase.conjugate(), c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * u00 + col_q * u10
                a[:, q] = col_p * u01 + col_q * u11
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(u00) * row_p + np.conj(u10) * row_q
                a[q, :] = np.conj(u01) * row_p + np.conj(u11) * row_q
                a[p, q] = a[q, p] = 0.0
    return a.diagonal().real.copy()


def _blocks(gram: np.ndarray) -> list[np.ndarray]:
    """Index sets of the connected components of the Gram matrix support."""
    m = gram.shape[0]
    support = np.abs(gram) > 0
    seen = np.zeros(m, dtype=bool)
    out = []
    for start in range(m):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(support[i] & ~seen):
                seen[j] = True
                comp.append(int(j))
                stack.append(int(j))
        out.append(np.array(sorted(comp)))
    return out


def reduced_spectrum(state: StateVector, l: int) -> np.ndarray:
    """Eigenvalues of the reduced density matrix of the first ``l`` sites."""
    d, n = state.d, state.n
    if not 1 <= l <= n - 1:
        raise ValueError(f"cut position l={l} out of range 1..{n - 1}")
    m = state.amplitudes.reshape(d**l, d ** (n - l))
    # nonzero spectra of M M^dagger and M^dagger M coincide; use the smaller side
    if m.shape[0] > m.shape[1]:
        m = m.T
    m = m[np.any(m != 0, axis=1)]
    gram = m @ m.conj().T
    eigs = []
    for idx in _blocks(gram):
        if len(idx) > BRUTEFORCE_LIMIT:
            raise ResourceLimitError(f"Gram block of size {len(idx)} is too large for Jacobi")
        eigs.extend(jacobi_eigenvalues(gram[np.ix_(idx, idx)]))
    return np.array(sorted(eigs, reverse=True))


def entropy_bruteforce(state: StateVector, l: int, base: float | None = None) -> float:
    eigs = reduced_spectrum(state, l)
    return _entropy([x for x in eigs if x > EIGEN_FLOOR], base or state.d)


# ---------------------------------------------------------------------------
# identities and curves


def verify_q_vandermonde(k, l: int) -> bool:
    k = as_composition(k)
    _check_l(k, l)
    n = sum(k)
    lhs = LaurentPoly()
    for a in enumerate_cuts(k, l):
        rest = tuple(x - y for x, y in zip(k, a))
        # q^e is s^(2e)
        lhs = lhs + LaurentPoly.monomial(2 * cut_exponent(k, a)) * q_multinomial_poly(a) * q_multinomial_poly(rest)
    return lhs == q_multinomial_poly(k)


@dataclass
class EntropyCurve:
    k: tuple[int, ...]
    q_mag: float
    rows: list[tuple[int, float]] = field(default_factory=list)
    base: float | None = None

    @property
    def d(self) -> int:
        return len(self.k)

    @property
    def n(self) -> int:
        return sum(self.k)

    def values(self) -> list[float]:
        return [s for _, s in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["l", "S"])
        for l, s in self.rows:
            writer.writerow([l, f"{s:.12g}"])
        return buf.getvalue()

    def filename(self) -> str:
        return f"{self.d}_{self.n}_{'-'.join(map(str, self.k))}_{self.q_mag:g}.csv"


def entropy_curve(k, q_mag: float, ls: Sequence[int] | None = None,
                  base: float | None = None) -> EntropyCurve:
    k = as_composition(k)
    n = sum(k)
    q_mag = as_deformation(q_mag).magnitude
    ls = list(ls) if ls is not None else list(range(1, n))
    table = log_q_factorials(n, q_mag)
    log_q = math.log(q_mag)
    rows = []
    for l in ls:
        _check_l(k, l)
        lams = [math.exp(_log_lambda(k, a, l, log_q, table)) for a in enumerate_cuts(k, l)]
        rows.append((l, _entropy(lams, base or len(k))))
    return EntropyCurve(k, q_mag, rows, base)

"""q-qudit Dicke statevectors.

Three independent constructions are provided:

* :func:`dicke_sum` -- weighted sum over multiset permutations,
  amplitude ``q**(J/2 - inv(w))``;
* :func:`dicke_recursive` -- peel off the last qudit, one branch per letter;
* :func:`dicke_operator` -- apply ordered lowering operators to ``|0...0>``
  (real q only, small n; a verification oracle).

Word ``w_1 ... w_n`` lives at index ``sum_i w_i * d**(n - i)``: the leftmost
letter is the most significant digit.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import algebra
from .qcomb import (
    DeformationParam,
    as_composition,
    as_deformation,
    identity_word,
    inversion_number,
    is_permutation_of,
    log_q_bracket,
    log_q_factorials,
    max_inversion,
    multiset_permutations,
    q_multinomial_log,
    q_multinomial_poly,
    reverse_composition,
)

# Largest statevector (number of amplitudes) any constructor will allocate.
MAX_DIMENSION = 1 << 24


class ResourceLimitError(MemoryError):
    pass


def check_dimension(d: int, n: int, limit: int = MAX_DIMENSION) -> int:
    dim = d**n
    if dim > limit:
        raise ResourceLimitError(f"d**n = {d}**{n} = {dim} exceeds the limit {limit}")
    return dim


@dataclass(frozen=True)
class StateVector:
    d: int
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.d**self.n,):
            raise ValueError(f"expected {self.d**self.n} amplitudes, got shape {amps.shape}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.d**self.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def index_of(self, word: Sequence[int]) -> int:
        return word_index(word, self.d)

    def __getitem__(self, word) -> complex:
        if isinstance(word, str):
            word = tuple(int(c) for c in word)
        return complex(self.amplitudes[word_index(word, self.d)])

    def nonzero(self, tol: float = 0.0) -> list[tuple[tuple[int, ...], complex]]:
        """``(word, amplitude)`` pairs sorted by word."""
        idx = np.flatnonzero(np.abs(self.amplitudes) > tol)
        return [(index_word(int(i), self.d, self.n), complex(self.amplitudes[i])) for i in idx]

    def distance(self, other: "StateVector") -> float:
        _check_shapes(self, other)
        return float(np.max(np.abs(self.amplitudes - other.amplitudes)))


def word_index(word: Sequence[int], d: int) -> int:
    idx = 0
    for c in word:
        idx = idx * d + int(c)
    return idx


def index_word(idx: int, d: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for pos in range(n - 1, -1, -1):
        idx, out[pos] = divmod(idx, d)
    return tuple(out)


def basis_state(word: Sequence[int], d: int) -> StateVector:
    n = len(word)
    check_dimension(d, n)
    amps = np.zeros(d**n, dtype=complex)
    amps[word_index(word, d)] = 1.0
    return StateVector(d, n, amps)


def _check_shapes(a: StateVector, b: StateVector):
    if (a.d, a.n) != (b.d, b.n):
        raise ValueError(f"shape mismatch: (d, n) = {(a.d, a.n)} vs {(b.d, b.n)}")


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_shapes(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def _validate(k) -> tuple[int, ...]:
    k = as_composition(k)
    if sum(k) < 1:
        raise ValueError("a Dicke state needs n >= 1")
    return k


def amplitude(k, q, w) -> complex:
    """Coefficient of ``|w>`` in the q-Dicke state for composition ``k``."""
    k = _validate(k)
    Q = as_deformation(q)
    w = tuple(w)
    if not is_permutation_of(w, k):
        raise ValueError(f"word {w} is not a permutation of M{k}")
    e = max_inversion(k) - 2 * inversion_number(w)
    log_mod = 0.5 * e * math.log(Q.magnitude) - 0.5 * q_multinomial_log(k, Q.magnitude)
    return math.exp(log_mod) * Q.phase_half(e)


def dicke_sum(k, q) -> StateVector:
    k = _validate(k)
    Q = as_deformation(q)
    d, n = len(k), sum(k)
    check_dimension(d, n)
    J = max_inversion(k)
    log_q = math.log(Q.magnitude)
    log_norm = 0.5 * q_multinomial_log(k, Q.magnitude)
    amps = np.zeros(d**n, dtype=complex)
    for w in multiset_permutations(k):
        e = J - 2 * inversion_number(w)
        amps[word_index(w, d)] = math.exp(0.5 * e * log_q - log_norm) * Q.phase_half(e)
    return StateVector(d, n, amps)


def branch_coefficient(k: Sequence[int], s: int, Q: DeformationParam) -> complex:
    """Weight of ``|D(k - s_hat)> (x) |s>`` in the one-qudit recursion."""
    n = sum(k)
    e = sum(k[:s]) - sum(k[s + 1:])
    mod = math.exp(0.5 * (log_q_bracket(k[s], Q.magnitude) - log_q_bracket(n, Q.magnitude)))
    return mod * Q.power_half(e)


def _recursive_amplitudes(k: tuple[int, ...], Q: DeformationParam, cache: dict) -> np.ndarray:
    hit = cache.get(k)
    if hit is not None:
        return hit
    d, n = len(k), sum(k)
    if n == 1:
        out = np.zeros(d, dtype=complex)
        out[k.index(1)] = 1.0
    else:
        out = np.zeros(d**n, dtype=complex)
        view = out.reshape(-1, d)
        for s in range(d):
            if k[s] == 0:
                continue
            sub = k[:s] + (k[s] - 1,) + k[s + 1:]
            view[:, s] += branch_coefficient(k, s, Q) * _recursive_amplitudes(sub, Q, cache)
    cache[k] = out
    return out


def dicke_recursive(k, q) -> StateVector:
    k = _validate(k)
    Q = as_deformation(q)
    check_dimension(len(k), sum(k))
    # cache is per call, so concurrent calls never share state
    return StateVector(len(k), sum(k), _recursive_amplitudes(k, Q, {}))


def dicke_operator(k, q_mag: float, form: str = "ordered") -> StateVector:
    """Apply lowering operators to the vacuum and normalize.

    ``form="ordered"`` uses products ``X^-_i ... X^-_1``; ``form="nested"``
    uses nested commutators ``[X^-_i, [..., X^-_1]]`` instead.  Both agree on
    the vacuum.  Only real positive q is accepted.
    """
    k = _validate(k)
    if isinstance(q_mag, DeformationParam):
        if not q_mag.is_real:
            raise ValueError("the operator construction is defined for real q > 0 only")
        q_mag = q_mag.magnitude
    q_mag = float(q_mag)
    if not q_mag > 0:
        raise ValueError("q_mag must be positive")
    d, n = len(k), sum(k)
    check_dimension(d, n, limit=1 << 16)
    build = {"ordered": algebra.ordered_lowering, "nested": algebra.nested_lowering}[form]
    vec = algebra.vacuum(d, n)
    # rightmost factor (largest i) acts first
    for i in range(d - 1, 0, -1):
        if k[i] == 0:
            continue
        op = build(d, n, i, q_mag)
        for _ in range(k[i]):
            vec = op @ vec
    table = log_q_factorials(n, q_mag)
    log_scale = -sum(table[x] for x in k[1:]) - 0.5 * q_multinomial_log(k, q_mag)
    return StateVector(d, n, vec * math.exp(log_scale))


def dual_transform(state: StateVector) -> StateVector:
    """Relabel every site ``j -> d - 1 - j``."""
    d, n = state.d, state.n
    amps = state.amplitudes.reshape((d,) * n) if n else state.amplitudes
    flipped = amps[(slice(None, None, -1),) * n]
    return StateVector(d, n, flipped.reshape(-1))


def dicke_state(k, q, method: str = "sum") -> StateVector:
    if method == "sum":
        return dicke_sum(k, q)
    if method == "recursive":
        return dicke_recursive(k, q)
    if method == "operator":
        return dicke_operator(k, as_deformation(q))
    raise ValueError(f"unknown construction {method!r}")


def state_to_dict(state: StateVector, k, q, exact: bool = False, tol: float = 0.0) -> dict:
    Q = as_deformation(q)
    out = {
        "d": state.d,
        "n": state.n,
        "k": list(k),
        "q": Q.magnitude,
        "alpha": Q.phase,
        "amplitudes": [
            {"word": "".join(map(str, w)), "re": a.real, "im": a.imag}
            for w, a in state.nonzero(tol)
        ],
    }
    if exact and Q.is_real:
        out["normalization"] = str(q_multinomial_poly(k))
    return out


def state_to_json(state: StateVector, k, q, exact: bool = False) -> str:
    return json.dumps(state_to_dict(state, k, q, exact), indent=2) + "\n"


"""Verification suites shared by the ``verify`` subcommand and the tests."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

from . import algebra, circuits, entanglement, states
from .qcomb import DeformationParam, compositions, verify_inversion_identity


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    max_deviation: float = 0.0
    seconds: float = 0.0
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, deviation: float = 0.0, what: str = ""):
        self.checks += 1
        if not math.isnan(deviation):
            self.max_deviation = max(self.max_deviation, deviation)
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = what

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name}: {self.checks} checks, max deviation {self.max_deviation:.3e}"
        if self.first_failure:
            out += f", first failure: {self.first_failure}"
        return out


@dataclass
class Bounds:
    max_n: int = 6
    max_d: int = 3
    q_values: tuple[float, ...] = (0.5, 1.0, 2.0)
    alphas: tuple[float, ...] = (0.0, 2 * math.pi / 3)
    # the circuit suite is cheap; it has its own size bound
    max_circuit_n: int = 8
    max_algebra_n: int = 3


def _all_k(b: Bounds, min_d: int = 1):
    for d in range(min_d, b.max_d + 1):
        for n in range(1, b.max_n + 1):
            yield from compositions(n, d)


def suite_inversion_identity(b: Bounds) -> SuiteResult:
    r = SuiteResult("inversion-identity")
    for k in _all_k(b):
        r.record(verify_inversion_identity(k), what=f"k={k}")
    return r


def suite_q_vandermonde(b: Bounds) -> SuiteResult:
    r = SuiteResult("q-vandermonde")
    for k in _all_k(b):
        for l in range(1, sum(k)):
            r.record(entanglement.verify_q_vandermonde(k, l), what=f"k={k}, l={l}")
    return r


def suite_constructors(b: Bounds, tol: float = 1e-10) -> SuiteResult:
    r = SuiteResult("three-constructor agreement")
    for k in _all_k(b):
        for q in b.q_values:
            a = states.dicke_sum(k, q)
            others = [states.dicke_recursive(k, q)]
            if len(k) > 1:
                others.append(states.dicke_operator(k, q))
            dev = max(a.distance(o) for o in others)
            r.record(dev < tol, dev, f"k={k}, q={q}")
    return r


def suite_schmidt(b: Bounds, tol: float = 1e-12) -> SuiteResult:
    r = SuiteResult("schmidt reconstruction")
    for k in _all_k(b):
        for q in b.q_values:
            for alpha in b.alphas:
                Q = DeformationParam(q, alpha)
                ref = states.dicke_sum(k, Q)
                for l in range(1, sum(k)):
                    dev = entanglement.schmidt_reconstruct(k, Q, l).distance(ref)
                    r.record(dev < tol, dev, f"k={k}, q={q}, alpha={alpha}, l={l}")
    return r


def suite_entropy_oracle(b: Bounds, tol: float = 1e-9,
                         entropy: Callable = entanglement.entanglement_entropy) -> SuiteResult:
    r = SuiteResult("entropy oracle")
    for k in _all_k(b):
        for q in b.q_values:
            for alpha in b.alphas:
                st = states.dicke_sum(k, DeformationParam(q, alpha))
                for l in range(1, sum(k)):
                    dev = abs(entanglement.entropy_bruteforce(st, l) - entropy(k, q, l))
                    r.record(dev < tol, dev, f"k={k}, q={q}, alpha={alpha}, l={l}")
    return r


def suite_circuits(b: Bounds, tol: float = 1e-10) -> SuiteResult:
    r = SuiteResult("circuit fidelity")
    for n in range(2, min(b.max_n, b.max_circuit_n) + 1):
        for l in range(1, n):
            for q in b.q_values:
                for alpha in b.alphas:
                    rep = circuits.prepare_and_verify(n, l, DeformationParam(q, alpha))
                    dev = max(1 - rep.fidelity_full, 1 - rep.fidelity_pruned)
                    ok = dev < tol and rep.gates_pruned == circuits.gate_count(n, l)
                    r.record(ok, dev, f"n={n}, l={l}, q={q}, alpha={alpha}")
    return r


def suite_algebra(b: Bounds, tol: float = 1e-12) -> SuiteResult:
    r = SuiteResult("algebra relations")
    for d in range(2, b.max_d + 1):
        for n in range(1, min(b.max_n, b.max_algebra_n) + 1):
            for q in (0.5, 1.3, 2.0):
                rep = algebra.verify_commutation(d, n, q, tol)
                rec = algebra.verify_recursion(d, n, q)
                dev = max(rep.worst, rec)
                r.record(dev < tol, dev, f"d={d}, n={n}, q={q}")
    return r


SUITES = {
    "inversion": suite_inversion_identity,
    "vandermonde": suite_q_vandermonde,
    "constructors": suite_constructors,
    "schmidt": suite_schmidt,
    "entropy": suite_entropy_oracle,
    "circuits": suite_circuits,
    "algebra": suite_algebra,
}


def run_all(b: Bounds, overrides: dict | None = None) -> list[SuiteResult]:
    """Run every suite; ``overrides`` maps suite keys to replacement callables."""
    results = []
    for key, fn in SUITES.items():
        fn = (overrides or {}).get(key, fn)
        t0 = time.perf_counter()
        res = fn(b)
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results

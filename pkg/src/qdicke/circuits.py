"""Preparation circuits for q-qubit Dicke states (d = 2).

Wire convention: qubit ``j`` carries the ``j``-th letter counted from the
right, so letter ``w_i`` (1-based from the left) sits on qubit ``n - i``.  For
qubits this makes the simulator index ``sum_j bit_j 2**j`` identical to the
word index used by :mod:`qdicke.states`; :func:`word_to_bits` and
:func:`bits_to_word` are the explicit conversion.

A full circuit ``U_n`` is the application-order sequence
``W_n, W_{n-1} (x) I, ..., W_2 (x) I^{n-2}``, where ``W_m`` acts on the top
``m`` letters (qubits ``n-m .. n-1``) and is the block sequence
``I_{m,1}, I_{m,2}, ..., I_{m,m-1}``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qcomb import DeformationParam, as_deformation, q_bracket
from .states import StateVector, check_dimension, dicke_sum, inner_product


@dataclass(frozen=True)
class GateParams:
    theta: float
    phi: float
    lam: float

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        return np.array([
            [c, -np.exp(1j * self.lam) * s],
            [np.exp(1j * self.phi) * s, np.exp(1j * (self.phi + self.lam)) * c],
        ])


@dataclass(frozen=True)
class Gate:
    kind: str  # "X", "CX" or "MCU"
    controls: tuple[int, ...]
    target: int
    params: GateParams | None = None
    # (m, l) of the I-block an MCU belongs to; informational only
    label: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("X", "CX", "MCU"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(set(self.controls)) != len(self.controls) or self.target in self.controls:
            raise ValueError(f"controls {self.controls} must be distinct and exclude target {self.target}")
        expected = {"X": (0, 0), "CX": (1, 1), "MCU": (1, 2)}[self.kind]
        if not expected[0] <= len(self.controls) <= expected[1]:
            raise ValueError(f"{self.kind} gate with {len(self.controls)} controls")
        if (self.kind == "MCU") != (self.params is not None):
            raise ValueError("MCU gates, and only MCU gates, carry angle parameters")

    def shifted(self, offset: int) -> "Gate":
        return Gate(self.kind, tuple(c + offset for c in self.controls), self.target + offset,
                    self.params, self.label)

    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate):
        if any(not 0 <= i < self.n_qubits for i in g.qubits()):
            raise ValueError(f"gate {g} addresses a qubit outside 0..{self.n_qubits - 1}")

    def append(self, g: Gate):
        self._check(g)
        self.gates.append(g)

    def extend(self, gates):
        for g in gates:
            self.append(g)

    def block_labels(self) -> list[tuple[int, int]]:
        return [g.label for g in self.gates if g.kind == "MCU"]

    @property
    def block_count(self) -> int:
        return sum(g.kind == "MCU" for g in self.gates)

    def structure(self) -> list[tuple[str, tuple[int, ...], int]]:
        """Gate list with the angles stripped."""
        return [(g.kind, g.controls, g.target) for g in self.gates]


def _check_ml(m: int, l: int):
    if m < 2 or not 1 <= l <= m - 1:
        raise ValueError(f"need 1 <= l <= m-1, got m={m}, l={l}")


def cos_half_theta(m: int, l: int, q_mag: float) -> float:
    """``sqrt([l]/[m]) * q**((m-l)/2)``; never exceeds 1 since ``[m] = q^(m-l)[l] + q^(-l)[m-l]``."""
    return math.sqrt(q_bracket(l, q_mag) / q_bracket(m, q_mag)) * q_mag ** ((m - l) / 2)


def u_angles(m: int, l: int, q) -> GateParams:
    _check_ml(m, l)
    Q = as_deformation(q)
    x = min(1.0, cos_half_theta(m, l, Q.magnitude))  # clip rounding only
    return GateParams(2 * math.acos(x), m * Q.phase / 2 - math.pi, -l * Q.phase / 2 + math.pi)


def build_block_I(m: int, l: int, q) -> list[Gate]:
    """``I_{m,l}`` on an m-qubit register (qubits 0..m-1)."""
    _check_ml(m, l)
    u = u_angles(m, l, q)
    controls = (l,) if l == 1 else (l - 1, l)
    return [
        Gate("CX", (0,), l),
        Gate("MCU", controls, 0, u, (m, l)),
        Gate("CX", (0,), l),
    ]


def build_W(m: int, q, ls: Sequence[int] | None = None) -> Circuit:
    if m < 2:
        raise ValueError("W_m needs m >= 2")
    ls = range(1, m) if ls is None else ls
    c = Circuit(m)
    for l in ls:
        c.extend(build_block_I(m, l, q))
    return c


def build_U(n: int, q) -> Circuit:
    if n < 2:
        raise ValueError("U_n needs n >= 2")
    c = Circuit(n)
    for m in range(n, 1, -1):
        c.extend(g.shifted(n - m) for g in build_W(m, q).gates)
    return c


def pruned_range(n: int, m: int, l: int) -> range:
    return range(max(l + m - n, 1), min(l, m - 1) + 1)


def build_pruned_U(n: int, l: int, q) -> Circuit:
    """Circuit specialised to the input ``e(n-l, l)``."""
    if n < 2 or not 1 <= l <= n - 1:
        raise ValueError(f"need 1 <= l <= n-1, got n={n}, l={l}")
    c = Circuit(n)
    for m in range(n, 1, -1):
        c.extend(g.shifted(n - m) for g in build_W(m, q, pruned_range(n, m, l)).gates)
    return c


def gate_count(n: int, l: int) -> int:
    if n < 2 or not 1 <= l <= n - 1:
        raise ValueError(f"need 1 <= l <= n-1, got n={n}, l={l}")
    return sum(1 + min(l, m - 1) - max(l + m - n, 1) for m in range(2, n + 1))


# ---------------------------------------------------------------------------
# simulation


def word_to_bits(word: Sequence[int]) -> list[int]:
    """Bit on qubit j for each j = 0..n-1."""
    return [int(c) for c in reversed(tuple(word))]


def bits_to_word(bits: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(b) for b in reversed(tuple(bits)))


def apply_gate(psi: np.ndarray, g: Gate) -> None:
    """In-place action on a ``2**n`` amplitude array (index bit j = qubit j)."""
    idx = np.arange(psi.size)
    cmask = 0
    for c in g.controls:
        cmask |= 1 << c
    tbit = 1 << g.target
    sel = ((idx & cmask) == cmask) & ((idx & tbit) == 0)
    i0 = idx[sel]
    i1 = i0 | tbit
    a0, a1 = psi[i0].copy(), psi[i1].copy()
    if g.kind == "MCU":
        u = g.params.matrix()
        psi[i0] = u[0, 0] * a0 + u[0, 1] * a1
        psi[i1] = u[1, 0] * a0 + u[1, 1] * a1
    else:
        psi[i0], psi[i1] = a1, a0


def simulate(c: Circuit, input_word: Sequence[int] | str) -> StateVector:
    if isinstance(input_word, str):
        input_word = tuple(int(ch) for ch in input_word)
    if len(input_word) != c.n_qubits or any(b not in (0, 1) for b in input_word):
        raise ValueError(f"input must be a binary word of length {c.n_qubits}")
    n = c.n_qubits
    check_dimension(2, n)
    psi = np.zeros(2**n, dtype=complex)
    psi[sum(b << j for j, b in enumerate(word_to_bits(input_word)))] = 1.0
    for g in c.gates:
        apply_gate(psi, g)
    return StateVector(2, n, psi)


def unitary(c: Circuit) -> np.ndarray:
    """Dense matrix of the circuit, columns indexed like the simulator."""
    n = c.n_qubits
    cols = []
    for i in range(2**n):
        word = bits_to_word([(i >> j) & 1 for j in range(n)])
        cols.append(simulate(c, word).amplitudes)
    return np.array(cols).T


def identity_input(n: int, l: int) -> tuple[int, ...]:
    return (0,) * (n - l) + (1,) * l


@dataclass
class FidelityReport:
    n: int
    l: int
    q: float
    alpha: float
    fidelity_full: float
    fidelity_pruned: float
    gates_full: int
    gates_pruned: int
    max_full_pruned_deviation: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n, "l": self.l, "q": self.q, "alpha": self.alpha,
            "fidelity_full": self.fidelity_full, "fidelity_pruned": self.fidelity_pruned,
            "gates_full": self.gates_full, "gates_pruned": self.gates_pruned,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def prepare_and_verify(n: int, l: int, q) -> FidelityReport:
    Q = as_deformation(q)
    target = dicke_sum((n - l, l), Q)
    start = identity_input(n, l)
    full = build_U(n, Q)
    pruned = build_pruned_U(n, l, Q)
    out_full = simulate(full, start)
    out_pruned = simulate(pruned, start)
    return FidelityReport(
        n, l, Q.magnitude, Q.phase,
        abs(inner_product(target, out_full)) ** 2,
        abs(inner_product(target, out_pruned)) ** 2,
        full.block_count, pruned.block_count,
        out_full.distance(out_pruned),
    )


# ---------------------------------------------------------------------------
# OpenQASM 3


def _angle(x: float) -> str:
    return format(x, ".17g")


def export_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{c.n_qubits}] q;"]
    for g in c.gates:
        if g.kind == "X":
            lines.append(f"x q[{g.target}];")
        elif g.kind == "CX":
            lines.append(f"cx q[{g.controls[0]}], q[{g.target}];")
        else:
            p = g.params
            mods = "ctrl @ " * len(g.controls)
            operands = ", ".join(f"q[{i}]" for i in g.controls + (g.target,))
            line = f"{mods}U({_angle(p.theta)}, {_angle(p.phi)}, {_angle(p.lam)}) {operands};"
            if g.label is not None:
                line += f" // I[{g.label[0]},{g.label[1]}]"
            lines.append(line)
    return "\n".join(lines) + "\n"


_QUBITS = re.compile(r"qubit\[(\d+)\]\s+q;")
_X = re.compile(r"x q\[(\d+)\];")
_CX = re.compile(r"cx q\[(\d+)\], q\[(\d+)\];")
_MCU = re.compile(
    r"((?:ctrl @ )+)U\(([^,]+), ([^,]+), ([^)]+)\) ((?:q\[\d+\](?:, )?)+);(?: // I\[(\d+),(\d+)\])?"
)


def parse_qasm(text: str) -> Circuit:
    """Read back the subset of OpenQASM 3 written by :func:`export_qasm`."""
    n = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if (mt := _QUBITS.fullmatch(line)):
            n = int(mt.group(1))
        elif (mt := _X.fullmatch(line)):
            gates.append(Gate("X", (), int(mt.group(1))))
        elif (mt := _CX.fullmatch(line)):
            gates.append(Gate("CX", (int(mt.group(1)),), int(mt.group(2))))
        elif (mt := _MCU.fullmatch(line)):
            qubits = [int(x) for x in re.findall(r"q\[(\d+)\]", mt.group(5))]
            n_ctrl = mt.group(1).count("ctrl")
            if len(qubits) != n_ctrl + 1:
                raise ValueError(f"operand count does not match modifiers: {line!r}")
            params = GateParams(float(mt.group(2)), float(mt.group(3)), float(mt.group(4)))
            label = (int(mt.group(6)), int(mt.group(7))) if mt.group(6) else None
            gates.append(Gate("MCU", tuple(qubits[:-1]), qubits[-1], params, label))
        else:
            raise ValueError(f"unsupported QASM line: {line!r}")
    if n is None:
        raise ValueError("no qubit declaration")
    return Circuit(n, gates)

"""q-analog arithmetic and multiset-permutation combinatorics.

Compositions are plain tuples of non-negative ints ``(k_0, ..., k_{d-1})`` and
words are tuples of letters in ``range(d)``.  Exact q-objects are
:class:`LaurentPoly` instances in the variable ``s = q**(1/2)``, so a power
``q**x`` with half-integer ``x`` is stored under the integer key ``2*x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

# |q - 1| below this is treated as the undeformed point q = 1.
Q_ONE_EPS = 1e-12

Composition = tuple
Word = tuple


def as_composition(k: Iterable[int]) -> tuple[int, ...]:
    parts = tuple(int(x) for x in k)
    if len(parts) < 1:
        raise ValueError("a composition needs at least one part")
    if any(x < 0 for x in parts):
        raise ValueError(f"composition parts must be non-negative, got {parts}")
    return parts


def as_word(w: Iterable[int] | str, d: int | None = None) -> tuple[int, ...]:
    if isinstance(w, str):
        letters = tuple(int(c) for c in w)
    else:
        letters = tuple(int(c) for c in w)
    if any(c < 0 for c in letters) or (d is not None and any(c >= d for c in letters)):
        raise ValueError(f"word {letters} has letters outside [0, {d})")
    return letters


def letter_counts(w: Sequence[int], d: int) -> tuple[int, ...]:
    counts = [0] * d
    for c in w:
        counts[c] += 1
    return tuple(counts)


def is_permutation_of(w: Sequence[int], k: Sequence[int]) -> bool:
    d = len(k)
    if any(c < 0 or c >= d for c in w):
        return False
    return letter_counts(w, d) == tuple(k)


@dataclass(frozen=True)
class DeformationParam:
    """Complex deformation parameter ``magnitude * exp(1j * phase)``.

    Fractional powers are taken from the fixed half power
    ``sqrt(magnitude) * exp(1j * phase / 2)``; the phase is never reduced
    mod 2*pi, so ``power_half(e)`` is single valued.
    """

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.magnitude > 0 or not math.isfinite(self.magnitude):
            raise ValueError(f"|q| must be positive and finite, got {self.magnitude}")

    @classmethod
    def from_complex(cls, q: complex) -> "DeformationParam":
        return cls(abs(q), math.atan2(q.imag, q.real))

    @property
    def is_real(self) -> bool:
        return self.phase == 0.0

    @property
    def value(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    def inverse(self) -> "DeformationParam":
        return DeformationParam(1.0 / self.magnitude, -self.phase)

    def power_half(self, e: int) -> complex:
        """``q**(e/2)`` for integer ``e``."""
        mod = math.exp(0.5 * e * math.log(self.magnitude))
        ang = 0.5 * e * self.phase
        return mod * complex(math.cos(ang), math.sin(ang))

    def phase_half(self, e: int) -> complex:
        """Unit-modulus part of ``q**(e/2)``."""
        ang = 0.5 * e * self.phase
        return complex(math.cos(ang), math.sin(ang))


def as_deformation(q) -> DeformationParam:
    if isinstance(q, DeformationParam):
        return q
    if isinstance(q, complex):
        return DeformationParam.from_complex(q)
    return DeformationParam(float(q))


# ---------------------------------------------------------------------------
# Laurent polynomials


def _q_exponent_text(e: int) -> str:
    if e % 2 == 0:
        x = e // 2
        return "" if x == 0 else ("q" if x == 1 else f"q^{x}")
    return f"q^({e}/2)"


class LaurentPoly:
    """Exact Laurent polynomial in ``s = q**(1/2)`` with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            if not isinstance(v, int):
                raise TypeError("LaurentPoly coefficients must be integers")
            if v:
                c[int(e)] = v
        self._c = c

    @classmethod
    def monomial(cls, s_exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({s_exp: coeff})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def terms(self) -> list[tuple[int, int]]:
        """``(s_exponent, coefficient)`` pairs by descending exponent."""
        return sorted(self._c.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        return max(self._c)

    def low_degree(self) -> int:
        return min(self._c)

    def is_palindromic(self) -> bool:
        return all(self._c.get(-e) == v for e, v in self._c.items())

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def divmod_exact(self, divisor: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Long division from the top degree down.

        The quotient is the part with exponents >= ``low(self) - low(divisor)``;
        the remainder collects what is left below that.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self._c)
        quot: dict[int, int] = {}
        top_d = divisor.degree()
        lead = divisor._c[top_d]
        span = top_d - divisor.low_degree()
        floor = (self.low_degree() if self._c else 0) + span
        while rem:
            top = max(rem)
            if top < floor:
                break
            v = rem[top]
            if v % lead:
                break
            factor = v // lead
            shift = top - top_d
            quot[shift] = factor
            for e, dv in divisor._c.items():
                key = e + shift
                nv = rem.get(key, 0) - factor * dv
                if nv:
                    rem[key] = nv
                else:
                    rem.pop(key, None)
        return LaurentPoly(quot), LaurentPoly(rem)

    def __floordiv__(self, divisor: "LaurentPoly") -> "LaurentPoly":
        quot, rem = self.divmod_exact(divisor)
        assert rem.is_zero(), f"inexact Laurent division, remainder {rem}"
        return quot

    def evaluate(self, q_mag: float) -> float:
        s = math.sqrt(q_mag)
        return math.fsum(v * s**e for e, v in self._c.items())

    def coefficient_multiset(self) -> list[int]:
        return [v for _, v in self.terms()]

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for i, (e, v) in enumerate(self.terms()):
            mono = _q_exponent_text(e)
            mag = abs(v)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                parts.append(("-" if v < 0 else "") + body)
            else:
                parts.append((" - " if v < 0 else " + ") + body)
        return "".join(parts)

    def to_latex(self) -> str:
        """Compact TeX form, e.g. ``q^5+2q^3+3q+3q^{-1}``."""
        if not self._c:
            return "0"
        out = []
        for i, (e, v) in enumerate(self.terms()):
            x = Fraction(e, 2)
            if x == 0:
                mono = ""
            elif x == 1:
                mono = "q"
            else:
                xs = str(x)
                mono = f"q^{xs}" if (x > 0 and x.denominator == 1 and x < 10) else f"q^{{{xs}}}"
            mag = abs(v)
            body = (str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}"))
            sign = "-" if v < 0 else ("+" if i else "")
            out.append(sign + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


# ---------------------------------------------------------------------------
# brackets and multinomials


def q_bracket(x: float, q_mag: float) -> float:
    """``(q**x - q**-x) / (q - q**-1)``, equal to ``x`` at q = 1."""
    if not q_mag > 0:
        raise ValueError("q_mag must be positive")
    if abs(q_mag - 1.0) < Q_ONE_EPS:
        return float(x)
    t = math.log(q_mag)
    return math.sinh(x * t) / math.sinh(t)


def log_q_bracket(m: int, q_mag: float) -> float:
    """``log [m]`` for a positive integer ``m`` without overflow."""
    if m < 1:
        raise ValueError("log_q_bracket needs m >= 1")
    if abs(q_mag - 1.0) < Q_ONE_EPS:
        return math.log(m)
    t = abs(math.log(q_mag))
    # [m] = q^(m-1) (1 - q^-2m) / (1 - q^-2) for q > 1, symmetric in q -> 1/q
    return (m - 1) * t + math.log(-math.expm1(-2 * m * t)) - math.log(-math.expm1(-2 * t))


def log_q_factorials(n: int, q_mag: float) -> list[float]:
    """Table ``[log [0]!, log [1]!, ..., log [n]!]``."""
    out = [0.0] * (n + 1)
    acc = 0.0
    for m in range(1, n + 1):
        acc += log_q_bracket(m, q_mag)
        out[m] = acc
    return out


def q_bracket_poly(n: int) -> LaurentPoly:
    if n < 1:
        raise ValueError(f"q_bracket_poly needs n >= 1, got {n}")
    return LaurentPoly({2 * (n - 1 - 2 * j): 1 for j in range(n)})


def q_factorial_poly(n: int) -> LaurentPoly:
    out = LaurentPoly.one()
    for m in range(2, n + 1):
        out = out * q_bracket_poly(m)
    return out


def q_multinomial_poly(k: Sequence[int]) -> LaurentPoly:
    k = as_composition(k)
    num = q_factorial_poly(sum(k))
    den = LaurentPoly.one()
    for part in k:
        den = den * q_factorial_poly(part)
    return num // den


def q_multinomial_log(k: Sequence[int], q_mag: float) -> float:
    k = as_composition(k)
    table = log_q_factorials(sum(k), q_mag)
    return table[sum(k)] - math.fsum(table[x] for x in k)


def multinomial(k: Sequence[int]) -> int:
    out = math.factorial(sum(k))
    for x in k:
        out //= math.factorial(x)
    return out


# ---------------------------------------------------------------------------
# words


def inversion_number(w: Sequence[int]) -> int:
    """Number of pairs ``i < j`` with ``w[i] > w[j]``."""
    if not w:
        return 0
    seen = [0] * (max(w) + 1)
    inv = 0
    for i, c in enumerate(w):
        # letters left of position i that are strictly larger than c
        inv += i - sum(seen[: c + 1])
        seen[c] += 1
    return inv


def max_inversion(k: Sequence[int]) -> int:
    total = 0
    right = sum(k)
    for x in k:
        right -= x
        total += x * right
    return total


def identity_word(k: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(k) for _ in range(x))


def reverse_composition(k: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(tuple(k)))


def multiset_permutations(k: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All distinct words with letter multiplicities ``k``, lexicographically."""
    w = list(identity_word(as_composition(k)))
    n = len(w)
    while True:
        yield tuple(w)
        i = n - 2
        while i >= 0 and w[i] >= w[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while w[j] <= w[i]:
            j -= 1
        w[i], w[j] = w[j], w[i]
        w[i + 1:] = reversed(w[i + 1:])


def compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Weak d-compositions of n in lexicographic order."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, d - 1):
            yield (first,) + rest


def inversion_generating_poly(k: Sequence[int]) -> LaurentPoly:
    """``sum_w q**(J - 2 inv(w))`` over all words of ``M(k)``."""
    J = max_inversion(k)
    counts: dict[int, int] = {}
    for w in multiset_permutations(k):
        e = 2 * (J - 2 * inversion_number(w))
        counts[e] = counts.get(e, 0) + 1
    return LaurentPoly(counts)


def verify_inversion_identity(k: Sequence[int]) -> bool:
    return inversion_generating_poly(k) == q_multinomial_poly(k)


def split_crossing_count(k: Sequence[int], a: Sequence[int]) -> int:
    """``sum_{i<j} (k_i - a_i) a_j``: transpositions from e(k) to e(a) e(k-a)."""
    total = 0
    right_a = sum(a)
    for ki, ai in zip(k, a):
        right_a -= ai
        total += (ki - ai) * right_a
    return total

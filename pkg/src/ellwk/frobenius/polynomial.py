"""Sparse multivariate polynomials with exact (Fraction) or complex coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

Exps = tuple[int, ...]


def _coerce(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**12) if c == int(c) else c
    c = complex(c)
    return Fraction(c.real).limit_denominator(10**12) if c.imag == 0 and c.real == int(c.real) else c


class Poly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exps, object] | Iterable[tuple[object, Exps]] = ()):
        self.n = n
        acc: dict[Exps, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((tuple(e), c) for c, e in terms)
        for e, c in items:
            e = tuple(int(k) for k in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for n={n}")
            acc[e] = acc.get(e, 0) + _coerce(c)
        self.terms = {e: c for e, c in acc.items() if c != 0}

    # constructors
    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        return cls(n, {tuple(int(k == i) for k in range(n)): 1})

    @classmethod
    def linear(cls, coeffs: Iterable, const=0) -> "Poly":
        coeffs = list(coeffs)
        n = len(coeffs)
        out = cls.const(n, const)
        for i, c in enumerate(coeffs):
            out = out + cls.var(n, i) * c
        return out

    # arithmetic
    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = merged.get(e, 0) + c
        return Poly(self.n, merged)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Number):
            c = _coerce(other)
            return Poly(self.n, {e: v * c for e, v in self.terms.items()})
        out: dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Poly":
        c = _coerce(c)
        return self * (Fraction(1) / c if isinstance(c, Fraction) else 1 / c)

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(self.n, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = Poly.const(self.n, other)
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"t{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # calculus
    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly(self.n, out)

    def grad(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.n)]

    def apply_field(self, coeffs: list["Poly"]) -> "Poly":
        """Derivative along the vector field sum_i coeffs[i] d_i."""
        out = Poly(self.n)
        for i, ci in enumerate(coeffs):
            if ci.terms:
                out = out + ci * self.diff(i)
        return out

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degrees(self, weights) -> set:
        return {sum(Fraction(w) * k for w, k in zip(weights, e)) for e in self.terms}

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    # evaluation
    def __call__(self, t) -> complex:
        t = np.asarray(t, dtype=complex)
        total = 0j
        for e, c in self.terms.items():
            total += complex(c) * np.prod(t ** np.array(e))
        return total

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=complex)
        out = np.zeros(ts.shape[0], dtype=complex)
        for e, c in self.terms.items():
            out += complex(c) * np.prod(ts ** np.array(e), axis=1)
        return out

    def max_abs_coefficient(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def as_list(self) -> list:
        out = []
        for e, c in sorted(self.terms.items()):
            z = complex(c)
            out.append([z.real, z.imag, list(e)])
        return out

    @classmethod
    def from_list(cls, n: int, data: Iterable) -> "Poly":
        terms = []
        for re, im, exps in data:
            c = complex(re, im) if im else Fraction(re).limit_denominator(10**9)
            terms.append((c, tuple(exps)))
        return cls(n, terms)

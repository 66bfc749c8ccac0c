"""Polynomials in the parameters w, coefficient sequences, polynomials in (w, z).

Coefficients are gmpy2 ``mpc`` values (see :mod:`universal_series.mp`).
All containers are canonical (no stored zeros) and treated as immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from . import mp
from .kernels import evaluate_monomials


def _horner(terms: Mapping, w: list):
    """Nested Horner evaluation, one variable at a time."""
    if not terms:
        return mp.zero()
    if not w:
        return terms.get((), mp.zero())
    groups: dict = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    acc = mp.zero()
    for e0 in range(max(groups), -1, -1):
        acc = acc * w[0]
        if e0 in groups:
            acc = acc + _horner(groups[e0], w[1:])
    return acc


class ParamPolynomial:
    """Finitely supported map from w-exponents (length ``r``) to coefficients.

    ``r == 0`` is the scalar case with the single key ``()``.
    """

    __slots__ = ("r", "_terms")

    def __init__(self, r: int, terms: Optional[Mapping] = None):
        self.r = int(r)
        clean = {}
        with mp.ctx():
            for e, c in (terms or {}).items():
                e = tuple(int(x) for x in e)
                if len(e) != self.r or any(x < 0 for x in e):
                    raise ValueError(f"bad w-exponent {e} for r={self.r}")
                c = mp.to_mpc(c)
                if c != 0:
                    clean[e] = c
        self._terms = clean

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @classmethod
    def zero(cls, r: int) -> "ParamPolynomial":
        return cls(r)

    @classmethod
    def constant(cls, r: int, c) -> "ParamPolynomial":
        return cls(r, {(0,) * r: c})

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, ParamPolynomial):
            return NotImplemented
        return self.r == other.r and self._terms == other._terms

    def __hash__(self):
        return hash((self.r, frozenset(self._terms)))

    def __repr__(self):
        body = ", ".join(f"{e}: {complex(c)}" for e, c in sorted(self._terms.items()))
        return f"ParamPolynomial(r={self.r}, {{{body}}})"

    def _combine(self, other: "ParamPolynomial", sign: int) -> "ParamPolynomial":
        if other.r != self.r:
            raise ValueError("parameter dimensions differ")
        out = dict(self._terms)
        with mp.ctx():
            for e, c in other._terms.items():
                out[e] = out[e] + sign * c if e in out else sign * c
        return ParamPolynomial(self.r, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "ParamPolynomial":
        with mp.ctx():
            s = mp.to_mpc(s)
            return ParamPolynomial(self.r, {e: c * s for e, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ParamPolynomial):
            return self.scale(other)
        if other.r != self.r:
            raise ValueError("parameter dimensions differ")
        out: dict = {}
        with mp.ctx():
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return ParamPolynomial(self.r, out)

    __rmul__ = scale

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self._terms.values()), default=0.0)

    def evaluate(self, w):
        """Value at one point ``w`` (length r), as an mpc."""
        if len(w) != self.r:
            raise ValueError(f"w has dimension {len(w)}, expected {self.r}")
        with mp.ctx():
            return _horner(self._terms, [mp.to_mpc(x) for x in w])


def eval_param_poly(p: ParamPolynomial, w=()) -> complex:
    return complex(p.evaluate(tuple(w)))


class CoefficientSequence:
    """Finitely supported sequence k -> ParamPolynomial; absent means zero."""

    __slots__ = ("r", "_items")

    def __init__(self, r: int, items: Optional[Mapping] = None):
        self.r = int(r)
        clean = {}
        for k, p in (items or {}).items():
            if int(k) < 0:
                raise ValueError("series indices are non-negative")
            if not isinstance(p, ParamPolynomial):
                p = ParamPolynomial.constant(self.r, p)
            if p.r != self.r:
                raise ValueError("parameter dimensions differ")
            if not p.is_zero():
                clean[int(k)] = p
        self._items = clean

    def __getitem__(self, k: int) -> ParamPolynomial:
        return self._items.get(k) or ParamPolynomial.zero(self.r)

    def get(self, k: int) -> ParamPolynomial:
        return self[k]

    def support(self) -> list:
        return sorted(self._items)

    def items(self):
        return sorted(self._items.items())

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        if not isinstance(other, CoefficientSequence):
            return NotImplemented
        return self.r == other.r and self._items == other._items

    def updated(self, changes: Mapping) -> "CoefficientSequence":
        """Copy with ``changes`` (k -> ParamPolynomial) applied."""
        merged = dict(self._items)
        merged.update(changes)
        return CoefficientSequence(self.r, merged)

    def truncated(self, k: int) -> "CoefficientSequence":
        """Copy keeping indices < k."""
        return CoefficientSequence(self.r, {i: p for i, p in self._items.items() if i < k})

    def combine(self, other: "CoefficientSequence", alpha=1, beta=1) -> "CoefficientSequence":
        keys = set(self._items) | set(other._items)
        return CoefficientSequence(self.r, {
            k: self[k].scale(alpha) + other[k].scale(beta) for k in keys})


class PolyWZ:
    """Polynomial in (w, z): map from z-exponents (length d) to ParamPolynomial."""

    __slots__ = ("r", "d", "_terms")

    def __init__(self, r: int, d: int, terms: Optional[Mapping] = None):
        self.r, self.d = int(r), int(d)
        clean = {}
        for a, p in (terms or {}).items():
            a = tuple(int(x) for x in a)
            if len(a) != self.d or any(x < 0 for x in a):
                raise ValueError(f"bad z-exponent {a} for d={self.d}")
            if not isinstance(p, ParamPolynomial):
                p = ParamPolynomial.constant(self.r, p)
            if p.r != self.r:
                raise ValueError("parameter dimensions differ")
            if not p.is_zero():
                clean[a] = p
        self._terms = clean

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, PolyWZ):
            return NotImplemented
        return (self.r, self.d, self._terms) == (other.r, other.d, other._terms)

    def __repr__(self):
        return f"PolyWZ(r={self.r}, d={self.d}, {len(self._terms)} z-terms)"

    def flatten(self):
        """(coeffs, exps) with exps rows = (w-exponents, z-exponents)."""
        coeffs, exps = [], []
        for a, p in sorted(self._terms.items()):
            for e, c in sorted(p.terms.items()):
                coeffs.append(c)
                exps.append(e + a)
        return coeffs, np.array(exps, dtype=np.int64).reshape(len(coeffs), self.r + self.d)

    @classmethod
    def from_flat(cls, r: int, d: int, coeffs, exps) -> "PolyWZ":
        grouped: dict = {}
        for c, e in zip(coeffs, exps):
            e = tuple(int(x) for x in e)
            grouped.setdefault(e[r:], {})[e[:r]] = c
        return cls(r, d, {a: ParamPolynomial(r, t) for a, t in grouped.items()})

    def evaluate(self, points, accuracy: float = 1e-12) -> np.ndarray:
        """Values at rows of ``points`` (shape (P, r + d))."""
        coeffs, exps = self.flatten()
        return evaluate_monomials(coeffs, exps, points, accuracy)

    def max_coefficient_distance(self, other: "PolyWZ") -> float:
        keys = set(self._terms) | set(other._terms)
        out = 0.0
        zero = ParamPolynomial.zero(self.r)
        for a in keys:
            diff = self._terms.get(a, zero) - other._terms.get(a, zero)
            out = max(out, diff.max_abs())
        return out


def eval_poly_wz(q: PolyWZ, w=(), z=()) -> complex:
    """Value of q at a single point (w, z)."""
    with mp.ctx():
        total = mp.zero()
        zz = [mp.to_mpc(x) for x in z]
        for a, p in q.terms.items():
            mono = p.evaluate(tuple(w))
            for zi, ai in zip(zz, a):
                mono = mono * zi ** ai
            total = total + mono
    return complex(total)


@dataclass(frozen=True)
class TargetFunction:
    """Black-box target h(w, z) with an optional holomorphy guard.

    ``evaluator(W, Z)`` takes arrays of shape (P, r) and (P, d) and returns P
    complex values. ``guard(F, T)`` returns True when h is holomorphic on a
    neighborhood of F x T.
    """

    evaluator: Callable
    guard: Optional[Callable] = None
    label: str = "target"

    def __call__(self, W, Z) -> np.ndarray:
        out = np.asarray(self.evaluator(W, Z), dtype=np.complex128)
        return np.broadcast_to(out, (np.shape(Z)[0],)).copy() if out.ndim == 0 else out

    def holomorphic_on(self, F, T) -> bool:
        return True if self.guard is None else bool(self.guard(F, T))


def flatten_partial_sum(values, e, r: int):
    """Flatten transform values b_0..b_n into monomial (coeffs, exps)."""
    coeffs, exps = [], []
    for k, p in enumerate(values):
        if p.is_zero():
            continue
        nk = e.enumerate(k)
        for ew, c in sorted(p.terms.items()):
            coeffs.append(c)
            exps.append(ew + nk)
    return coeffs, np.array(exps, dtype=np.int64).reshape(len(coeffs), r + e.dimension)


def partial_sum_eval(a: CoefficientSequence, b, e, n: int, grid, accuracy: float = 1e-12):
    """S_n(a)(w)(z) = sum_{k<=n} b_k(a_0..a_k)(w) z^(N_k) at every grid point.

    Transform values are computed once per k, then the whole sum is evaluated
    as one monomial sum in (w, z).
    """
    if n < 0:
        return np.zeros(len(grid.points), dtype=np.complex128)
    values = b.apply_all(a, n)
    coeffs, exps = flatten_partial_sum(values, e, a.r)
    points = grid.points if hasattr(grid, "points") else np.asarray(grid)
    return evaluate_monomials(coeffs, exps, points, accuracy)

"""Lower-triangular sequence transforms b_k(a_0, ..., a_k) = sum_i c_{k,i} a_i.

Sums run on exact rationals. Partial sums of a universal series cancel
catastrophically (coefficients of size 1e30 combine into values of size 1),
so b_k must be computed from the stored a_i without intermediate rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from gmpy2 import mpq

from . import mp
from .errors import ConfigError, InvalidTransformError
from .series import CoefficientSequence, ParamPolynomial

KINDS = ("identity", "cesaro", "custom")
MIN_DIAGONAL = 1e-9


@dataclass(frozen=True)
class SequenceTransform:
    """Identity, Cesaro means, or a custom table of lower-triangular rows.

    Custom rows missing from the table are identity rows. Every diagonal
    entry must satisfy ``|c_kk| >= 1e-9`` so that :meth:`solve_last` exists.
    """

    kind: str = "identity"
    rows: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown transform {self.kind!r}", "transform.kind")
        if self.kind != "custom" and self.rows:
            raise ConfigError("rows are only allowed for 'custom'", "transform.rows")
        clean = {}
        with mp.ctx():
            for k, row in dict(self.rows).items():
                k = int(k)
                if k < 0 or len(row) != k + 1:
                    raise ConfigError(f"row {k} must have {k + 1} entries", f"transform.rows.{k}")
                row = tuple(mp.to_mpc(c) for c in row)
                if abs(complex(row[k])) < MIN_DIAGONAL:
                    raise InvalidTransformError(
                        f"row {k}: diagonal entry {complex(row[k])} is below {MIN_DIAGONAL}")
                clean[k] = row
        object.__setattr__(self, "rows", clean)

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def cesaro(cls):
        return cls("cesaro")

    @classmethod
    def custom(cls, rows):
        return cls("custom", rows)

    def diagonal(self, k: int):
        if self.kind == "cesaro":
            with mp.ctx():
                return mp.to_mpc(1) / (k + 1)
        if self.kind == "custom" and k in self.rows:
            return self.rows[k][k]
        return mp.to_mpc(1)

    def _is_identity_row(self, k: int) -> bool:
        return self.kind == "identity" or (self.kind == "custom" and k not in self.rows)

    def _weighted_prefix(self, a: CoefficientSequence, k: int) -> dict:
        """sum_{i<k} c_{k,i} a_i exactly; Cesaro returns the plain sum (no 1/(k+1))."""
        acc: dict = {}
        if self._is_identity_row(k):
            return acc
        row = self.rows.get(k) if self.kind == "custom" else None
        for i in a.support():
            if i >= k:
                break
            _axpy(acc, a[i], None if row is None else mp.to_exact(row[i]))
        return acc

    def apply(self, a: CoefficientSequence, k: int) -> ParamPolynomial:
        """b_k(a_0, ..., a_k); only indices <= k of ``a`` are read.

        The sum is formed exactly and rounded once, so b_k carries the full
        relative precision even when the a_i are huge and cancel.
        """
        if k < 0:
            raise ValueError("k must be non-negative")
        if self._is_identity_row(k):
            return a[k]
        acc = self._weighted_prefix(a, k)
        if self.kind == "cesaro":
            _axpy(acc, a[k])
            return _rounded(a.r, acc, mpq(1, k + 1))
        _axpy(acc, a[k], mp.to_exact(self.rows[k][k]))
        return _rounded(a.r, acc)

    def apply_all(self, a: CoefficientSequence, n: int) -> list:
        """[b_0, ..., b_n], sharing work across k (prefix sums for Cesaro)."""
        if self.kind == "identity":
            return [a[k] for k in range(n + 1)]
        if self.kind == "cesaro":
            out, running = [], {}
            for k in range(n + 1):
                _axpy(running, a[k])
                out.append(_rounded(a.r, running, mpq(1, k + 1)))
            return out
        return [self.apply(a, k) for k in range(n + 1)]

    def solve_last(self, a: CoefficientSequence, k: int, target: ParamPolynomial) -> ParamPolynomial:
        """c with b_k(a_0, ..., a_{k-1}, c) = target (indices >= k of ``a`` ignored).

        Identity and Cesaro rows are solved exactly (the result is again a
        binary number). A custom row divides by its diagonal, so the result is
        rounded at twice the working precision plus a guard.
        """
        if self._is_identity_row(k):
            return target
        if self.kind == "cesaro":
            acc = {}
            _axpy(acc, target, (mpq(k + 1), mpq(0)))
            prefix = self._weighted_prefix(a, k)
            for e, (re, im) in prefix.items():
                _add(acc, e, -re, -im)
            return _exact_poly(a.r, acc)
        diag = self.rows[k][k]
        if abs(complex(diag)) < MIN_DIAGONAL:
            raise InvalidTransformError(f"zero diagonal at row {k}")
        acc = {}
        _axpy(acc, target)
        for e, (re, im) in self._weighted_prefix(a, k).items():
            _add(acc, e, -re, -im)
        dr, di = mp.to_exact(diag)
        norm = dr * dr + di * di
        inv = (dr / norm, -di / norm)
        out = {}
        for e, (re, im) in acc.items():
            out[e] = (re * inv[0] - im * inv[1], re * inv[1] + im * inv[0])
        return _rounded(a.r, out, bits=2 * mp.get_precision() + 16)

    def solve_run(self, a: CoefficientSequence, start: int, targets: Sequence) -> dict:
        """Solve consecutive rows ``start, start+1, ...`` for ``targets`` in order.

        Equivalent to repeated :meth:`solve_last`, each row seeing the values
        solved before it; Cesaro keeps an exact running sum instead of re-adding.
        """
        out = {}
        if self.kind == "cesaro":
            running: dict = {}
            for i in a.support():
                if i >= start:
                    break
                _axpy(running, a[i])
            for off, t in enumerate(targets):
                k = start + off
                c: dict = {}
                _axpy(c, t, (mpq(k + 1), mpq(0)))
                for e, (re, im) in running.items():
                    _add(c, e, -re, -im)
                for e, (re, im) in c.items():
                    _add(running, e, re, im)
                out[k] = _exact_poly(a.r, c)
            return out
        work = a.truncated(start)
        for off, t in enumerate(targets):
            k = start + off
            c = self.solve_last(work, k, t)
            out[k] = c
            work = work.updated({k: c})
        return out

    def to_config(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "custom":
            out["rows"] = {str(k): [mp.mpc_to_pair(c) for c in row]
                           for k, row in sorted(self.rows.items())}
        return out


def apply(b: SequenceTransform, a: CoefficientSequence, k: int) -> ParamPolynomial:
    return b.apply(a, k)


def solve_last(b: SequenceTransform, a: CoefficientSequence, k: int, target) -> ParamPolynomial:
    if not isinstance(target, ParamPolynomial):
        target = ParamPolynomial.constant(a.r, target)
    return b.solve_last(a, k, target)


# exact accumulators: dict w-exponent -> (re, im) as mpq

def _add(acc: dict, e, re, im) -> None:
    if e in acc:
        r0, i0 = acc[e]
        re, im = r0 + re, i0 + im
    if re == 0 and im == 0:
        acc.pop(e, None)
    else:
        acc[e] = (re, im)


def _axpy(acc: dict, p: ParamPolynomial, w=None) -> None:
    """acc += w * p with w an exact complex pair (default 1)."""
    for e, c in p.terms.items():
        re, im = mp.to_exact(c)
        if w is not None:
            re, im = re * w[0] - im * w[1], re * w[1] + im * w[0]
        _add(acc, e, re, im)


def _rounded(r: int, acc: dict, scale=None, bits: int | None = None) -> ParamPolynomial:
    bits = bits or mp.get_precision()
    s = scale if scale is not None else mpq(1)
    return ParamPolynomial(r, {e: mp.from_exact(re * s, im * s, bits) for e, (re, im) in acc.items()})


def _exact_poly(r: int, acc: dict) -> ParamPolynomial:
    return ParamPolynomial(r, {e: mp.from_exact(re, im) for e, (re, im) in acc.items()})

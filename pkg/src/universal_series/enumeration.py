"""Enumerations of N^d and infinite index sets of N.

Multi-indices are plain tuples of non-negative ints. Graded schemes rank and
unrank in closed form (binomial / power counts), so arbitrarily large indices
work without tables.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .errors import ConfigError

MultiIndex = tuple

SCHEMES = ("graded-lex", "graded-max", "table")
MU_SCHEMES = ("all", "arith", "list+arith")


def _check_multi_index(m, d: int) -> tuple:
    m = tuple(int(x) for x in m)
    if len(m) != d:
        raise ValueError(f"multi-index {m} has dimension {len(m)}, expected {d}")
    if any(x < 0 for x in m):
        raise ValueError(f"multi-index {m} has negative entries")
    return m


def _compositions(total: int, parts: int) -> int:
    """Number of tuples of ``parts`` non-negative ints summing to ``total``."""
    if total < 0:
        return 0
    if parts == 0:
        return 1 if total == 0 else 0
    return comb(total + parts - 1, parts - 1)


# -- graded lexicographic ---------------------------------------------------

def glex_rank(m: tuple) -> int:
    d = len(m)
    deg = sum(m)
    rank = comb(deg + d - 1, d)  # all multi-indices of smaller total degree
    rem = deg
    for i in range(d - 1):
        parts = d - 1 - i
        # hockey stick: sum_{v < m_i} C(rem - v + parts - 1, parts - 1)
        rank += comb(rem + parts, parts) - comb(rem - m[i] + parts, parts)
        rem -= m[i]
    return rank


def _last_true(lo: int, hi: int, pred) -> int:
    """Largest x in [lo, hi] with pred(x), for pred monotone decreasing and pred(lo) true."""
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return hi if pred(hi) else lo


def glex_unrank(k: int, d: int) -> tuple:
    hi = 1
    while comb(hi + d, d) <= k:
        hi *= 2
    # smallest deg with C(deg + d, d) > k
    deg = _last_true(0, hi, lambda t: t == 0 or comb(t - 1 + d, d) <= k)
    r = k - comb(deg + d - 1, d)
    out = []
    rem = deg
    for i in range(d - 1):
        parts = d - 1 - i
        top = comb(rem + parts, parts)
        # number of tuples whose entry i is < v (hockey stick)
        below = lambda v: top - comb(rem - v + parts, parts)
        v = _last_true(0, rem, lambda v: below(v) <= r)
        r -= below(v)
        out.append(v)
        rem -= v
    out.append(rem)
    return tuple(out)


# -- graded by max norm -----------------------------------------------------

def _iroot_floor(k: int, d: int) -> int:
    """Largest D with D**d <= k."""
    if k == 0:
        return 0
    lo, hi = 0, 1
    while hi ** d <= k:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** d <= k:
            lo = mid
        else:
            hi = mid
    return lo


def gmax_rank(m: tuple) -> int:
    d = len(m)
    shell = max(m)
    rank = shell ** d if shell else 0
    has_top = False
    for i, mi in enumerate(m):
        rest = d - 1 - i
        full = (shell + 1) ** rest
        rank += mi * (full if has_top else full - shell ** rest)
        if mi == shell:
            has_top = True
    return rank


def gmax_unrank(k: int, d: int) -> tuple:
    shell = _iroot_floor(k, d)
    r = k - shell ** d
    out = []
    has_top = shell == 0
    for i in range(d):
        rest = d - 1 - i
        full = (shell + 1) ** rest
        if has_top:
            v, r = divmod(r, full)
        else:
            per = full - shell ** rest
            if per and r < shell * per:
                v, r = divmod(r, per)
            else:
                v = shell
                r -= shell * per
                has_top = True
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class Enumeration:
    """A bijection k -> N_k of the naturals onto N^d.

    ``scheme`` is ``"graded-lex"`` (total degree, then lexicographic),
    ``"graded-max"`` (max-norm shells, then lexicographic) or ``"table"``
    (explicit duplicate-free ``prefix`` followed by the graded-lex order of
    everything not in the prefix).
    """

    dimension: int
    scheme: str = "graded-lex"
    prefix: tuple = ()
    _prefix_index: dict = field(init=False, repr=False, compare=False)
    _prefix_ranks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError("dimension must be >= 1", "enumeration.dimension")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown enumeration scheme {self.scheme!r}", "enumeration.scheme")
        prefix = tuple(_check_multi_index(m, self.dimension) for m in self.prefix)
        if self.scheme != "table" and prefix:
            raise ConfigError("prefix is only allowed for the 'table' scheme", "enumeration.prefix")
        index = {m: i for i, m in enumerate(prefix)}
        if len(index) != len(prefix):
            raise ConfigError("table prefix contains duplicates", "enumeration.prefix")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "_prefix_index", index)
        object.__setattr__(self, "_prefix_ranks", tuple(sorted(glex_rank(m) for m in prefix)))

    def enumerate(self, k: int) -> tuple:
        """Return N_k."""
        if k < 0:
            raise ValueError("k must be non-negative")
        d = self.dimension
        if self.scheme == "graded-lex":
            return glex_unrank(k, d)
        if self.scheme == "graded-max":
            return gmax_unrank(k, d)
        n = len(self.prefix)
        if k < n:
            return self.prefix[k]
        j = k - n
        for r in self._prefix_ranks:
            if r <= j:
                j += 1
            else:
                break
        return glex_unrank(j, d)

    def index_of(self, m: Sequence[int]) -> int:
        """Return k with N_k = m."""
        m = _check_multi_index(m, self.dimension)
        if self.scheme == "graded-lex":
            return glex_rank(m)
        if self.scheme == "graded-max":
            return gmax_rank(m)
        hit = self._prefix_index.get(m)
        if hit is not None:
            return hit
        r = glex_rank(m)
        return len(self.prefix) + r - bisect.bisect_left(self._prefix_ranks, r)

    def to_config(self) -> dict:
        out = {"scheme": self.scheme}
        if self.scheme == "table":
            out["prefix"] = [list(m) for m in self.prefix]
        return out


def enumerate_index(e: Enumeration, k: int) -> tuple:
    return e.enumerate(k)


def index_of(e: Enumeration, m) -> int:
    return e.index_of(m)


@dataclass(frozen=True)
class MuSet:
    """An infinite subset of N with decidable membership.

    ``"all"`` is N itself, ``"arith"`` is {a + b n}, ``"list+arith"`` is a finite
    explicit list united with the arithmetic tail {a + b n}.
    """

    scheme: str = "all"
    a: int = 0
    b: int = 1
    values: tuple = ()

    def __post_init__(self):
        if self.scheme not in MU_SCHEMES:
            raise ConfigError(f"unknown mu scheme {self.scheme!r}", "mu.scheme")
        if self.a < 0 or self.b < 1:
            raise ConfigError("arithmetic tail needs a >= 0 and b >= 1", "mu")
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ConfigError("mu list entries must be non-negative", "mu.list")
        if list(vals) != sorted(set(vals)):
            raise ConfigError("mu list must be strictly increasing", "mu.list")
        if self.scheme != "list+arith" and vals:
            raise ConfigError("explicit list only allowed with 'list+arith'", "mu.list")
        object.__setattr__(self, "values", vals)

    def _tail_next(self, n: int) -> int:
        if self.scheme == "all":
            return max(n, 0)
        if n <= self.a:
            return self.a
        steps = -(-(n - self.a) // self.b)
        return self.a + steps * self.b

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if self.scheme == "all":
            return True
        if n in self.values:
            return True
        return n >= self.a and (n - self.a) % self.b == 0

    def next(self, n_min: int) -> int:
        """Smallest element of the set that is >= ``n_min``."""
        best = self._tail_next(n_min)
        i = bisect.bisect_left(self.values, n_min)
        if i < len(self.values):
            best = min(best, self.values[i])
        return best

    def to_config(self) -> dict:
        if self.scheme == "all":
            return {"scheme": "all"}
        out = {"scheme": self.scheme, "a": self.a, "b": self.b}
        if self.scheme == "list+arith":
            out["list"] = list(self.values)
        return out


def mu_next(mu: MuSet, n_min: int) -> int:
    return mu.next(n_min)

"""Planar compacta with connected complement and their Cartesian products.

Only three shapes are supported (closed discs, segments, filled simple
polygons); each has connected complement by construction. Sup norms of
holomorphic functions are taken on the distinguished boundary, i.e. the
product of the factor boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, GridSizeError

SEGMENT_TOL = 1e-12
DEFAULT_MAX_POINTS = 10**6


class PlanarCompact:
    """Common interface of the planar shapes."""

    def boundary_samples(self, count: int, offset: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def contains(self, z: complex) -> bool:
        raise NotImplementedError

    def sup_modulus(self) -> float:
        """Exact max of |z| over the set (attained on the boundary)."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ClosedDisc(PlanarCompact):
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ConfigError("disc radius must be positive", "disc.radius")

    def boundary_samples(self, count, offset=0.0):
        theta = 2 * np.pi * (np.arange(count) + offset) / count
        pts = self.center + self.radius * np.exp(1j * theta)
        if offset == 0.0:
            # snap the quarter points so that e.g. count=4 gives exactly 1, i, -1, -i
            j = np.arange(count)
            for q, unit in enumerate((1, 1j, -1, -1j)):
                hit = (4 * j) == q * count
                pts[hit] = self.center + self.radius * unit
        return pts

    def contains(self, z):
        return abs(complex(z) - self.center) <= self.radius * (1 + 1e-15) + 1e-15

    def sup_modulus(self):
        return abs(self.center) + self.radius

    def to_config(self):
        c = self.center
        return {"disc": {"center": [c.real, c.imag], "radius": self.radius}}


def _dist_to_segment(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((z - a) * ab.conjugate()).real / abs(ab) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


@dataclass(frozen=True)
class Segment(PlanarCompact):
    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == self.b:
            raise ConfigError("segment endpoints must differ", "segment")

    def boundary_samples(self, count, offset=0.0):
        # a segment is its own boundary; offset=0 keeps both endpoints
        if offset == 0.0:
            t = np.linspace(0.0, 1.0, count)
        else:
            t = (np.arange(count) + offset) / count
        return self.a + t * (self.b - self.a)

    def contains(self, z):
        return _dist_to_segment(complex(z), self.a, self.b) < SEGMENT_TOL

    def sup_modulus(self):
        return max(abs(self.a), abs(self.b))

    def to_config(self):
        return {"segment": {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}}


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return ((b - a).conjugate() * (c - a)).imag

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
        return True
    # touching / collinear overlap
    return min(
        _dist_to_segment(p1, q1, q2), _dist_to_segment(p2, q1, q2),
        _dist_to_segment(q1, p1, p2), _dist_to_segment(q2, p1, p2),
    ) < SEGMENT_TOL


@dataclass(frozen=True)
class FilledPolygon(PlanarCompact):
    """Closed region bounded by a simple, positively oriented polygon."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        n = len(vs)
        if n < 3:
            raise ConfigError("polygon needs at least 3 vertices", "polygon.vertices")
        area2 = sum((vs[i].conjugate() * vs[(i + 1) % n]).imag for i in range(n))
        if not area2 > 0:
            raise ConfigError("polygon must be positively oriented with nonzero area",
                              "polygon.vertices")
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_cross(vs[i], vs[(i + 1) % n], vs[j], vs[(j + 1) % n]):
                    raise ConfigError("polygon is not simple", "polygon.vertices")

    def _edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def boundary_samples(self, count, offset=0.0):
        edges = self._edges()
        lengths = np.array([abs(b - a) for a, b in edges])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        s = (np.arange(count) + offset) / count * cum[-1]
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(edges) - 1)
        out = np.empty(count, dtype=complex)
        for n, (i, si) in enumerate(zip(idx, s)):
            a, b = edges[i]
            out[n] = a + (si - cum[i]) / lengths[i] * (b - a)
        return out

    def contains(self, z):
        z = complex(z)
        if any(_dist_to_segment(z, a, b) < SEGMENT_TOL for a, b in self._edges()):
            return True
        inside = False
        for a, b in self._edges():
            if (a.imag > z.imag) != (b.imag > z.imag):
                x = a.real + (z.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
                if x > z.real:
                    inside = not inside
        return inside

    def sup_modulus(self):
        return max(abs(v) for v in self.vertices)

    def to_config(self):
        return {"polygon": {"vertices": [[v.real, v.imag] for v in self.vertices]}}


def compact_from_config(spec: dict, where: str = "factor") -> PlanarCompact:
    """Build a shape from ``{"disc": {...}}``, ``{"segment": ...}`` or ``{"polygon": ...}``."""
    def cplx(v, name):
        if isinstance(v, (int, float)):
            return complex(v)
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise ConfigError("complex numbers are written as [re, im]", f"{where}.{name}")
        return complex(float(v[0]), float(v[1]))

    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("factor must be a single-key object: disc, segment or polygon", where)
    (kind, body), = spec.items()
    try:
        if kind == "disc":
            return ClosedDisc(cplx(body["center"], "disc.center"), float(body["radius"]))
        if kind == "segment":
            return Segment(cplx(body["a"], "segment.a"), cplx(body["b"], "segment.b"))
        if kind == "polygon":
            return FilledPolygon(tuple(cplx(v, "polygon.vertices") for v in body["vertices"]))
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r}", f"{where}.{kind}") from None
    except ConfigError as exc:
        raise ConfigError(str(exc), where) from None
    raise ConfigError(f"unknown factor kind {kind!r}", where)


@dataclass(frozen=True)
class ProductCompact:
    """Product of planar compacta; the empty product is a single point."""

    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __len__(self):
        return len(self.factors)

    def __mul__(self, other: "ProductCompact") -> "ProductCompact":
        return ProductCompact(self.factors + other.factors)

    def to_config(self) -> list:
        return [f.to_config() for f in self.factors]


@dataclass(frozen=True)
class SampleGrid:
    """Cartesian product of per-factor sample sets.

    ``points`` has shape (P, n) in C order over ``axes``; the first
    ``n_params`` columns are parameter coordinates w, the rest are z.
    """

    axes: tuple
    points: np.ndarray
    n_params: int = 0

    @property
    def shape(self) -> tuple:
        return tuple(len(a) for a in self.axes)

    def __len__(self):
        return self.points.shape[0]

    @property
    def w(self) -> np.ndarray:
        return self.points[:, : self.n_params]

    @property
    def z(self) -> np.ndarray:
        return self.points[:, self.n_params:]


def boundary_samples(c: PlanarCompact, count: int, offset: float = 0.0) -> np.ndarray:
    """``count`` boundary points, equispaced by arclength (deterministic)."""
    if count < 1:
        raise ValueError("count must be positive")
    return c.boundary_samples(int(count), offset)


def product_boundary_grid(p: ProductCompact, per_factor, offset: float = 0.0,
                          max_points: int = DEFAULT_MAX_POINTS,
                          n_params: int = 0) -> SampleGrid:
    """Cartesian product of factor boundary samples.

    ``per_factor`` is an int or one count per factor. The empty product gives a
    single point with no coordinates.
    """
    n = len(p.factors)
    counts = [int(per_factor)] * n if np.isscalar(per_factor) else [int(c) for c in per_factor]
    if len(counts) != n:
        raise ValueError("need one sample count per factor")
    size = math.prod(counts)
    if size > max_points:
        raise GridSizeError(f"grid of {size} points exceeds cap {max_points}", "max_points")
    axes = tuple(boundary_samples(f, c, offset) for f, c in zip(p.factors, counts))
    if n == 0:
        return SampleGrid((), np.zeros((1, 0), dtype=complex), n_params)
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
    return SampleGrid(axes, pts, n_params)


def excludes_zero(p: ProductCompact):
    """Index of a factor not containing 0, or None.

    Among several candidates the one with the smallest sup |z| wins (ties go
    to the lower index): it keeps the division power z^(l+1) small.
    """
    best = None
    for i, f in enumerate(p.factors):
        if f.contains(0):
            continue
        if best is None or f.sup_modulus() < p.factors[best].sup_modulus():
            best = i
    return best


def monomial_sup(p: ProductCompact, m: Sequence[int]) -> float:
    """sup over the product of |z^m| = prod_i (sup |z_i|)^(m_i)."""
    if len(m) != len(p.factors):
        raise ValueError("multi-index dimension does not match factor count")
    out = 1.0
    for f, mi in zip(p.factors, m):
        if mi:
            out *= f.sup_modulus() ** mi
    return out


def contains(c: PlanarCompact, z: complex) -> bool:
    return c.contains(z)


def separated(c1: PlanarCompact, c2: PlanarCompact, samples: int = 512) -> bool:
    """True when the two planar sets are (numerically) disjoint."""
    if isinstance(c1, ClosedDisc) and isinstance(c2, ClosedDisc):
        return abs(c1.center - c2.center) > c1.radius + c2.radius
    b1 = c1.boundary_samples(samples)
    b2 = c2.boundary_samples(samples)
    if any(c2.contains(z) for z in b1) or any(c1.contains(z) for z in b2):
        return False
    gap = np.min(np.abs(b1[:, None] - b2[None, :]))
    return gap > 0

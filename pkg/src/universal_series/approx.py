"""Least-squares polynomial approximation on products of planar compacta.

Each variable gets its own discrete-orthonormal basis, built by Arnoldi on
that factor's boundary samples (Vandermonde-with-Arnoldi). On a Cartesian
sample grid the tensor products of these bases are orthonormal, so the
least-squares fit is a plain projection. Monomial coefficients are recovered
from the Arnoldi recurrence in multiprecision, because the change of basis is
badly conditioned (e.g. powers of z on a disc far from the origin).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpc

from . import mp
from .compacta import ProductCompact, SampleGrid, product_boundary_grid, DEFAULT_MAX_POINTS
from .errors import ApproximationFailure, ConditioningError, TargetDomainError
from .series import ParamPolynomial, PolyWZ

ORTHO_FLAG = 1e-8
RANK_TOL = 1e-12
DOUBLE_FLOOR = 8 * np.finfo(float).eps  # relative; fits cannot beat roundoff in the samples
STALL_BAND = 1e6  # stall detection only within this factor of the floor


@dataclass
class ArnoldiBasis:
    """Discrete orthonormal polynomials q_0..q_n on a sample set.

    ``H`` is the (n+1, n) Hessenberg matrix of the recurrence
    x q_j = sum_{i<=j+1} H[i, j] q_i; columns of ``Q`` satisfy Q^H Q = N I.
    """

    H: np.ndarray
    Q: np.ndarray
    ortho_residual: float

    @property
    def degree(self) -> int:
        return self.H.shape[1]

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        n = self.degree
        W = np.empty((x.shape[0], n + 1), dtype=np.complex128)
        W[:, 0] = 1.0
        for k in range(n):
            v = x * W[:, k] - W[:, : k + 1] @ self.H[: k + 1, k]
            W[:, k + 1] = v / self.H[k + 1, k]
        return W

    def monomial_matrix(self):
        """Object array T with q_j(x) = sum_k T[k, j] x^k, in multiprecision."""
        n = self.degree
        with mp.ctx():
            zero = mpc(0)
            T = np.array([[zero] * (n + 1) for _ in range(n + 1)], dtype=object)
            T[0, 0] = mpc(1)
            for k in range(n):
                col = np.array([zero] + list(T[:n, k]), dtype=object)
                for i in range(k + 1):
                    h = self.H[i, k]
                    if h != 0:
                        col = col - T[:, i] * mpc(h)
                T[:, k + 1] = col * (mpc(1) / mpc(self.H[k + 1, k]))
        return T


def arnoldi(x, n: int, variable: int | None = None) -> ArnoldiBasis:
    """Arnoldi orthogonalization of the Krylov columns 1, x, x^2, ..., x^n."""
    x = np.asarray(x, dtype=np.complex128)
    N = x.shape[0]
    Q = np.empty((N, n + 1), dtype=np.complex128)
    H = np.zeros((n + 1, n), dtype=np.complex128)
    Q[:, 0] = 1.0
    scale = max(1.0, float(np.max(np.abs(x)))) if N else 1.0
    for k in range(n):
        v = x * Q[:, k]
        for _ in range(2):  # classical Gram-Schmidt, twice is enough
            h = (v.conj() @ Q[:, : k + 1]).conj() / N  # Q^H v without copying Q
            v = v - Q[:, : k + 1] @ h
            H[: k + 1, k] += h
        H[k + 1, k] = np.linalg.norm(v) / math.sqrt(N)
        if not H[k + 1, k].real > RANK_TOL * scale:
            raise ConditioningError(
                f"basis rank deficient at degree {k + 1}"
                + (f" in variable {variable}" if variable is not None else "")
                + f" ({N} samples)", degree=k + 1, variable=variable)
        Q[:, k + 1] = v / H[k + 1, k]
    gram = Q.conj().T @ Q / max(N, 1)
    resid = float(np.max(np.abs(gram - np.eye(n + 1)))) if N else 0.0
    return ArnoldiBasis(H, Q, resid)


def _contract(C, mats):
    """Apply ``mats[i]`` (shape (a_i, b_i)) along axis i of C (shape (a_1, ...))."""
    for M in mats:
        C = np.tensordot(C, M, axes=([0], [0]))
    return C


@dataclass
class TensorFit:
    """Coefficients ``C`` of a fit in the tensor Arnoldi basis."""

    C: np.ndarray
    bases: list
    n_params: int

    @property
    def degrees(self) -> tuple:
        return tuple(b.degree for b in self.bases)

    def values_on_axes(self, axes) -> np.ndarray:
        mats = [b.evaluate(ax).T for b, ax in zip(self.bases, axes)]
        return _contract(self.C, mats).reshape(-1)

    def trailing_norms(self) -> list:
        out = []
        for i in range(self.C.ndim):
            out.append(float(np.linalg.norm(np.take(self.C, -1, axis=i))))
        return out

    def to_poly(self, prune_budget: float = 0.0, sups=None) -> PolyWZ:
        """Monomial form; drops terms whose total sup contribution <= budget."""
        nvar = self.C.ndim
        with mp.ctx():
            Cobj = np.empty(self.C.shape, dtype=object)
            flat = Cobj.reshape(-1)
            for i, v in enumerate(self.C.reshape(-1)):
                flat[i] = mpc(complex(v))
            mats = [b.monomial_matrix().T for b in self.bases]
            M = _contract(Cobj, mats) if nvar else Cobj
        entries = []
        for idx in np.ndindex(*M.shape):
            c = M[idx]
            if c != 0:
                entries.append((idx, c))
        if prune_budget > 0 and sups is not None:
            bounds = []
            for idx, c in entries:
                s = abs(complex(c)) if math.isfinite(abs(complex(c))) else math.inf
                for e, sp in zip(idx, sups):
                    s *= sp ** e
                bounds.append(s)
            order = np.argsort(bounds, kind="stable")
            spent, drop = 0.0, set()
            for j in order:
                if spent + bounds[j] > prune_budget:
                    break
                spent += bounds[j]
                drop.add(j)
            entries = [t for j, t in enumerate(entries) if j not in drop]
        r = self.n_params
        coeffs = [c for _, c in entries]
        exps = [idx for idx, _ in entries]
        return PolyWZ.from_flat(r, nvar - r, coeffs, exps)


def _fit_tensor(grid: SampleGrid, values, degrees) -> TensorFit:
    bases = [arnoldi(ax, n, variable=i) for i, (ax, n) in enumerate(zip(grid.axes, degrees))]
    V = np.asarray(values, dtype=np.complex128).reshape(grid.shape)
    mats = [b.Q.conj() / b.Q.shape[0] for b in bases]
    return TensorFit(_contract(V, mats), bases, grid.n_params)


def _fit_dense(points, values, degrees, n_params) -> TensorFit:
    points = np.asarray(points, dtype=np.complex128)
    bases = [arnoldi(points[:, i], n, variable=i) for i, n in enumerate(degrees)]
    P = points.shape[0]
    A = np.ones((P, 1), dtype=np.complex128)
    for b in bases:
        A = (A[:, :, None] * b.Q[:, None, :]).reshape(P, -1)
    sol, _, rank, sv = np.linalg.lstsq(A, np.asarray(values, dtype=np.complex128), rcond=None)
    if sv.size and sv[-1] < RANK_TOL * sv[0] * max(A.shape):
        raise ConditioningError(f"sample matrix rank deficient for degrees {tuple(degrees)}",
                                degree=max(degrees, default=0))
    shape = tuple(n + 1 for n in degrees)
    return TensorFit(sol.reshape(shape), bases, n_params)


def _fit(grid: SampleGrid, values, degrees) -> TensorFit:
    degrees = tuple(int(n) for n in degrees)
    if len(degrees) != grid.points.shape[1]:
        raise ValueError("need one degree bound per variable")
    if grid.axes and len(grid.points) == math.prod(grid.shape):
        return _fit_tensor(grid, values, degrees)
    return _fit_dense(grid.points, values, degrees, grid.n_params)


def fit_polynomial(grid: SampleGrid, values, degree_bounds) -> PolyWZ:
    """Least-squares polynomial with per-variable degree bounds.

    Cartesian grids use the tensor projection; any other point set goes
    through a dense least-squares solve on the same orthogonalized basis.
    """
    nbasis = math.prod(int(n) + 1 for n in degree_bounds)
    if len(grid.points) < nbasis:
        raise ValueError(f"{len(grid.points)} samples cannot determine {nbasis} coefficients")
    return _fit(grid, values, degree_bounds).to_poly()


@dataclass
class PolyApproxResult:
    polynomial: PolyWZ
    fitted_error: float
    certified_error: float
    degree_used: tuple
    condition_flag: bool
    per_factor: tuple = ()
    trace: list = field(default_factory=list)


@dataclass(frozen=True)
class ApproxOptions:
    start_degree: int = 4
    growth: float = 1.5
    max_basis: int = 10_000
    oversample: int = 4
    min_samples: int = 32
    cert_multiplier: int = 3
    max_points: int = DEFAULT_MAX_POINTS
    prune_fraction: float = 1e-3
    stall_rounds: int = 4


def _eval_target(target, grid: SampleGrid) -> np.ndarray:
    vals = np.asarray(target(grid.w, grid.z), dtype=np.complex128)
    if vals.shape != (len(grid.points),):
        vals = np.broadcast_to(vals, (len(grid.points),)).copy()
    if not np.all(np.isfinite(vals)):
        raise TargetDomainError("target is not finite on the sample grid")
    return vals


def certify(poly: PolyWZ, F: ProductCompact, T: ProductCompact, target, per_factor,
            multiplier: int = 3, offset: float = 0.5, accuracy: float = 1e-12,
            max_points: int = DEFAULT_MAX_POINTS) -> float:
    """sup |target - poly| on a fresh product boundary grid.

    The grid has ``multiplier`` times the fitting density and is rotated by
    ``offset`` of a step, so no fitting sample is reused.
    """
    P = F * T
    counts = [multiplier * c for c in
              ([per_factor] * len(P) if np.isscalar(per_factor) else per_factor)]
    grid = product_boundary_grid(P, counts, offset=offset, max_points=max_points,
                                 n_params=len(F))
    vals = _eval_target(target, grid)
    approx = poly.evaluate(grid.points, accuracy) if not poly.is_zero() else 0.0
    return float(np.max(np.abs(vals - approx)))


def approximate_on_product(F: ProductCompact, T: ProductCompact, target, tol: float,
                           options: ApproxOptions = ApproxOptions()) -> PolyApproxResult:
    """Polynomial p(w, z) with certified sup |target - p| < tol on F x T.

    Starts from the zero polynomial, then fits with per-variable degree
    ``start_degree`` and grows the degree of the variable with the largest
    trailing coefficients by ``growth`` each round until the certificate
    passes or the basis budget runs out. The last growth step is then
    bisected, so the returned degree of that variable is the smallest one in
    its bracket that still certifies.

    Fitting runs in double precision, so a tolerance below a few ulps of
    ``max |target|`` fails at once. Near that floor a run whose best error has
    not halved over ``stall_rounds`` consecutive escalations also fails.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    holo = getattr(target, "holomorphic_on", None)
    if holo is not None and not holo(F, T):
        raise TargetDomainError(f"{getattr(target, 'label', 'target')} is not holomorphic "
                                "near the requested compacta")
    P = F * T
    nvar = len(P)
    r = len(F)
    opts = options
    accuracy = tol * 1e-3
    degrees = [opts.start_degree] * nvar
    trace = []
    best = math.inf

    def counts_for(degs):
        return tuple(max(opts.min_samples, opts.oversample * n) for n in degs)

    # round 0: the zero polynomial
    counts = counts_for(degrees)
    grid = product_boundary_grid(P, counts, max_points=opts.max_points, n_params=r)
    vals = _eval_target(target, grid)
    if np.max(np.abs(vals)) < tol:
        zero = PolyWZ(r, len(T))
        cert = certify(zero, F, T, target, counts, opts.cert_multiplier,
                       accuracy=accuracy, max_points=opts.max_points)
        trace.append({"degrees": [0] * nvar, "fitted": float(np.max(np.abs(vals))),
                      "certified": cert})
        if cert < tol:
            return PolyApproxResult(zero, float(np.max(np.abs(vals))), cert,
                                    (0,) * nvar, False, counts, trace)
        best = cert
    floor = DOUBLE_FLOOR * float(np.max(np.abs(vals)))
    if tol <= floor:
        raise ApproximationFailure(
            f"tol {tol:.3g} is below the double-precision floor {floor:.3g} of this target "
            f"(max |target| {float(np.max(np.abs(vals))):.3g})", best, trace)

    sups = [f.sup_modulus() for f in P.factors]

    def attempt(degs):
        """Fit at ``degs``; returns (result or None, fit)."""
        nonlocal best
        counts = counts_for(degs)
        grid = product_boundary_grid(P, counts, max_points=opts.max_points, n_params=r)
        vals = _eval_target(target, grid)
        fit = _fit(grid, vals, degs)
        fitted = float(np.max(np.abs(vals - fit.values_on_axes(grid.axes))))
        cgrid = product_boundary_grid(P, [opts.cert_multiplier * c for c in counts],
                                      offset=0.5, max_points=opts.max_points, n_params=r)
        cvals = _eval_target(target, cgrid)
        quick = float(np.max(np.abs(cvals - fit.values_on_axes(cgrid.axes))))
        flag = any(b.ortho_residual > ORTHO_FLAG for b in fit.bases)
        row = {"degrees": list(degs), "fitted": fitted, "quick": quick}
        trace.append(row)
        if not quick < tol:
            best = min(best, quick)
            return None, fit
        poly = fit.to_poly(prune_budget=opts.prune_fraction * tol, sups=sups)
        cert = certify(poly, F, T, target, counts, opts.cert_multiplier,
                       accuracy=accuracy, max_points=opts.max_points)
        row["certified"] = cert
        best = min(best, cert)
        if not cert < tol:
            return None, fit
        return PolyApproxResult(poly, fitted, cert, tuple(degs), flag, counts, trace), fit

    last = None  # (variable, degree before the last raise)
    mark, stalled = math.inf, 0
    while True:
        if math.prod(n + 1 for n in degrees) > opts.max_basis:
            raise ApproximationFailure(
                f"basis budget {opts.max_basis} exhausted at degrees {tuple(degrees)}; "
                f"best certified error {best:.3g} vs tol {tol:.3g}", best, trace)
        found, fit = attempt(degrees)
        if found is not None:
            break
        if best < 0.5 * mark or best > STALL_BAND * floor:
            mark, stalled = min(mark, best), 0
        else:
            stalled += 1
            if stalled >= opts.stall_rounds:
                raise ApproximationFailure(
                    f"no progress over {stalled} escalations at degrees {tuple(degrees)}; "
                    f"best certified error {best:.3g} vs tol {tol:.3g}", best, trace)
        tails = fit.trailing_norms()
        i = int(np.argmax(tails))
        last = (i, degrees[i])
        degrees[i] = int(math.ceil(degrees[i] * opts.growth))

    if last is not None:
        # the growth step overshoots; bisect the last bracket for the smallest passing degree
        i, lo = last
        hi = degrees[i]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            trial = list(degrees)
            trial[i] = mid
            res, _ = attempt(trial)
            if res is not None:
                found, hi = res, mid
            else:
                lo = mid
    found.trace = trace
    return found

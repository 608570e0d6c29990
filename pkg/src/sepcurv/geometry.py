"""Separable hypersurfaces: points, normals, tangent frames, height solves.

A surface is the zero set of F(x) = f_1(x_1) + ... + f_n(x_n) with each f_k
a single-variable function on an open interval.  One coordinate (the
"height", 1-based index, last by default) is the one solved for when lifting
partial coordinates onto the surface, and all frame formulas assume its
slope is bounded away from zero.

grad F = (f_1'(x_1), ..., f_n'(x_n)) and the ambient Hessian of F is
diagonal, so every geometric quantity here reduces to the 2-jets of the f_k
and is exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import fsum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    NonFiniteError,
    OffSurfaceError,
    RegularityError,
    SolveError,
)
from .expr import Function1D
from .jets import Jet2

REGULARITY_EPS = 1e-8      # lower bound for both ||grad F|| and |f'_height|
ON_SURFACE_RTOL = 1e-12    # residual tolerance relative to max(1, sum |f_k|)
MAX_SOLVE_ITERATIONS = 200


@dataclass(frozen=True)
class SurfacePoint:
    """Coordinates certified to satisfy |sum f_k| <= tolerance."""

    coords: tuple[float, ...]
    residual: float


@dataclass(frozen=True)
class TangentFrame:
    """Tangent basis, unit normal and fundamental forms at a surface point.

    Row r of `basis` is the tangent vector with 1 in the r-th non-height
    slot and -f'_k/f'_h in the height slot.  `gram` holds the pairwise inner
    products of those rows.  `second_form` holds II(X_r, X_s) for the
    gradient-directed unit normal N with the convention
    II(X, Y) = <-dN(X), Y>, i.e. minus the ambient Hessian pairing of F
    divided by ||grad F||.
    """

    basis: np.ndarray        # shape (n-1, n)
    normal: np.ndarray       # shape (n,)
    gram: np.ndarray         # shape (n-1, n-1)
    second_form: np.ndarray  # shape (n-1, n-1)


@dataclass(frozen=True)
class SeparableSurface:
    """Zero set of f_1(x_1) + ... + f_n(x_n) with a designated height index.

    `height` is 1-based and defaults to n.  Immutable; all evaluation state
    lives in the per-call jets, so instances are safe to share across
    threads.
    """

    funcs: tuple[Function1D, ...]
    height: int | None = None

    def __post_init__(self):
        funcs = tuple(self.funcs)
        object.__setattr__(self, "funcs", funcs)
        if len(funcs) < 3:
            raise ValueError(f"need at least 3 coordinate functions, got {len(funcs)}")
        h = self.height if self.height is not None else len(funcs)
        if not isinstance(h, int) or not 1 <= h <= len(funcs):
            raise ValueError(f"height index {self.height!r} outside 1..{len(funcs)}")
        object.__setattr__(self, "height", h)

    @property
    def n(self) -> int:
        return len(self.funcs)

    @property
    def non_height(self) -> tuple[int, ...]:
        """1-based coordinate indices excluding the height, ascending."""
        return tuple(k for k in range(1, self.n + 1) if k != self.height)

    def jets(self, coords: Sequence[float]) -> tuple[Jet2, ...]:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        return tuple(f.jet(x) for f, x in zip(self.funcs, coords))

    def values(self, coords: Sequence[float]) -> list[float]:
        return [j.v for j in self.jets(coords)]

    def on_surface_tol(self, values: Iterable[float]) -> float:
        return ON_SURFACE_RTOL * max(1.0, fsum(abs(v) for v in values))

    def point(self, coords: Sequence[float]) -> SurfacePoint:
        """Certify explicit coordinates as a surface point.

        Raises `OffSurfaceError` if the residual exceeds the scale-relative
        tolerance; use `solve_height` to produce points from partial
        coordinates instead.
        """
        coords = tuple(float(c) for c in coords)
        values = self.values(coords)
        residual = abs(fsum(values))
        tol = self.on_surface_tol(values)
        if residual > tol:
            raise OffSurfaceError(
                f"|sum f_k| = {residual:.6e} exceeds tolerance {tol:.6e} at {coords!r}"
            )
        return SurfacePoint(coords, residual)

    def insert_height(self, partial: Sequence[float], height_value: float) -> tuple[float, ...]:
        """Merge partial non-height coordinates with a height value."""
        if len(partial) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} partial coordinates, got {len(partial)}")
        coords = list(partial)
        coords.insert(self.height - 1, height_value)
        return tuple(float(c) for c in coords)


def _check_regular(d1: Sequence[float], height: int) -> float:
    """Both regularity gates; returns ||grad F|| or raises naming the gate."""
    gradnorm = math.sqrt(fsum(d * d for d in d1))
    if gradnorm < REGULARITY_EPS:
        raise RegularityError(
            f"gradient norm {gradnorm:.3e} below regularity threshold {REGULARITY_EPS:g}"
        )
    slope = abs(d1[height - 1])
    if slope < REGULARITY_EPS:
        raise RegularityError(
            f"height slope |f'_{height}| = {slope:.3e} below regularity threshold "
            f"{REGULARITY_EPS:g}"
        )
    return gradnorm


def ensure_regular(surface: SeparableSurface, point: SurfacePoint) -> float:
    """Check both regularity gates at a point; returns ||grad F||."""
    jets = surface.jets(point.coords)
    return _check_regular([j.d1 for j in jets], surface.height)


def unit_normal(surface: SeparableSurface, point: SurfacePoint) -> np.ndarray:
    """Gradient-directed unit normal grad F / ||grad F|| at a surface point."""
    jets = surface.jets(point.coords)
    grad = np.array([j.d1 for j in jets], dtype=float)
    gradnorm = math.sqrt(fsum(d * d for d in grad.tolist()))
    if gradnorm < REGULARITY_EPS:
        raise RegularityError(
            f"gradient norm {gradnorm:.3e} below regularity threshold {REGULARITY_EPS:g}"
        )
    return grad / gradnorm


def tangent_frame(surface: SeparableSurface, point: SurfacePoint) -> TangentFrame:
    """Coordinate tangent basis with Gram matrix and second fundamental form.

    For non-height coordinates k the basis vector is X_k = e_k - (f'_k/f'_h) e_h,
    so the Gram matrix is I + t t^T with t_k = f'_k/f'_h, and the second
    fundamental form is -(diag(f''_k) + (f''_h/f'_h^2) g g^T)/||grad F|| with
    g the non-height gradient entries.
    """
    jets = surface.jets(point.coords)
    d1 = np.array([j.d1 for j in jets], dtype=float)
    d2 = np.array([j.d2 for j in jets], dtype=float)
    gradnorm = _check_regular(d1.tolist(), surface.height)
    h0 = surface.height - 1
    others = [k - 1 for k in surface.non_height]

    ratios = d1[others] / d1[h0]
    basis = np.zeros((surface.n - 1, surface.n))
    basis[np.arange(surface.n - 1), others] = 1.0
    basis[:, h0] = -ratios

    gram = np.eye(surface.n - 1) + np.outer(ratios, ratios)
    second = -(
        np.diag(d2[others]) + np.outer(d1[others], d1[others]) * (d2[h0] / d1[h0] ** 2)
    ) / gradnorm
    return TangentFrame(basis, d1 / gradnorm, gram, second)


def solve_height(
    surface: SeparableSurface,
    partial: Sequence[float],
    bracket: tuple[float, float],
    max_iterations: int = MAX_SOLVE_ITERATIONS,
) -> SurfacePoint:
    """Lift partial coordinates onto the surface by solving for the height.

    The root of g(t) = f_h(t) + sum of the other f_k is isolated by a
    sign-change bracket and refined with Newton steps from exact jet slopes,
    falling back to bisection whenever a Newton step leaves the bracket or
    fails to shrink the residual fast enough.  The accepted root satisfies
    the scale-relative on-surface tolerance, and its height slope must clear
    the regularity threshold.
    """
    n = surface.n
    h0 = surface.height - 1
    partial = [float(v) for v in partial]
    if len(partial) != n - 1:
        raise ValueError(f"expected {n - 1} partial coordinates, got {len(partial)}")
    fh = surface.funcs[h0]
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"bracket ends must be increasing, got ({lo!r}, {hi!r})")
    dlo, dhi = fh.domain
    if not (dlo < lo and hi < dhi):
        raise DomainError(
            f"bracket ({lo!r}, {hi!r}) not inside height domain ({dlo!r}, {dhi!r})"
        )

    other_funcs = [surface.funcs[k] for k in range(n) if k != h0]
    vals = [f.jet(x).v for f, x in zip(other_funcs, partial)]
    rest = fsum(vals)
    abs_rest = fsum(abs(v) for v in vals)

    def residual_tol(height_value: float) -> float:
        return ON_SURFACE_RTOL * max(1.0, abs_rest + abs(height_value))

    def accept(t: float, jet: Jet2) -> SurfacePoint:
        if abs(jet.d1) < REGULARITY_EPS:
            raise RegularityError(
                f"height slope |f'_{surface.height}| = {abs(jet.d1):.3e} below "
                f"regularity threshold {REGULARITY_EPS:g} at solved root t = {t!r}"
            )
        return SurfacePoint(surface.insert_height(partial, t), abs(jet.v + rest))

    jlo = fh.jet(lo)
    glo = jlo.v + rest
    if abs(glo) <= residual_tol(jlo.v):
        return accept(lo, jlo)
    jhi = fh.jet(hi)
    ghi = jhi.v + rest
    if abs(ghi) <= residual_tol(jhi.v):
        return accept(hi, jhi)
    if (glo < 0.0) == (ghi < 0.0):
        raise BracketError(
            f"no sign change in bracket ({lo!r}, {hi!r}): "
            f"g(lo) = {glo:.6e}, g(hi) = {ghi:.6e}"
        )

    # orient so g(a) < 0 < g(b); a, b need not be ordered
    a, b = (lo, hi) if glo < 0.0 else (hi, lo)
    t = 0.5 * (lo + hi)
    step_prev = abs(hi - lo)
    gx = math.inf
    for _ in range(max_iterations):
        jet = fh.jet(t)
        gx = jet.v + rest
        if abs(gx) <= residual_tol(jet.v):
            return accept(t, jet)
        if gx < 0.0:
            a = t
        else:
            b = t
        lo_c, hi_c = (a, b) if a < b else (b, a)
        trial = t - gx / jet.d1 if jet.d1 != 0.0 else math.nan
        if lo_c < trial < hi_c and abs(2.0 * gx) <= abs(step_prev * jet.d1):
            step_prev = abs(trial - t)
            nxt = trial
        else:
            nxt = 0.5 * (a + b)
            step_prev = abs(nxt - t)
        if nxt == a or nxt == b:
            raise ConvergenceError(
                f"bracket collapsed at t = {t!r} with residual {gx:.3e} still above "
                f"tolerance {residual_tol(jet.v):.3e}"
            )
        t = nxt
    raise ConvergenceError(
        f"no convergence after {max_iterations} iterations; last residual {gx:.3e}"
    )


def sample_points(
    surface: SeparableSurface,
    ranges: Sequence[tuple[float, float]],
    count: int,
    seed,
    bracket: tuple[float, float],
    max_iterations: int = MAX_SOLVE_ITERATIONS,
) -> tuple[list[SurfacePoint], list[tuple[int, str]]]:
    """Draw seeded uniform partial coordinates and lift each onto the surface.

    `ranges` gives one (lo, hi) box per non-height coordinate, ascending by
    coordinate index.  Returns surviving points in draw order plus
    (draw_index, reason) entries for draws that failed the domain check, the
    solve, or the regularity gates.  Failures are recorded, never fatal.
    The same seed always produces the same draws.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    if len(ranges) != surface.n - 1:
        raise ValueError(
            f"expected {surface.n - 1} sampling ranges, got {len(ranges)}"
        )
    lows = np.array([float(r[0]) for r in ranges])
    highs = np.array([float(r[1]) for r in ranges])
    if not np.all(lows < highs):
        raise ValueError("every sampling range needs lo < hi")
    rng = np.random.default_rng(seed)
    partials = rng.uniform(lows, highs, size=(count, surface.n - 1))

    points: list[SurfacePoint] = []
    failures: list[tuple[int, str]] = []
    for i in range(count):
        try:
            p = solve_height(surface, partials[i].tolist(), bracket, max_iterations)
            ensure_regular(surface, p)
        except (SolveError, RegularityError, DomainError, NonFiniteError, OffSurfaceError) as exc:
            failures.append((i, f"{type(exc).__name__}: {exc}"))
        else:
            points.append(p)
    return points, failures

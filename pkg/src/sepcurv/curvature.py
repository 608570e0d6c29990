"""Sectional curvature engines and curvature-constancy scans.

Two independent engines are provided.  `sectional_special` is a closed form
for the tangent plane picked out by a pair of non-height coordinates:

    K(i, j) = (f_i'^2 f_j'' f_h'' + f_j'^2 f_i'' f_h'' + f_h'^2 f_i'' f_j'')
              / ((sum_k f_k'^2) * (f_i'^2 + f_j'^2 + f_h'^2))

with h the height coordinate.  `sectional_oracle` is a general implicit-
hypersurface engine built from the Gauss equation

    K = (H(X, X) H(Y, Y) - H(X, Y)^2) / ||grad F||^2

for an orthonormalized tangent pair (X, Y), where H is the ambient Hessian
pairing of F (diagonal here, entries f_k'').  Agreement of the two engines
on coordinate planes is the package's primary cross-check; `scan_constancy`
sweeps both over sampled points and reports whether K is constant.

`flatness_residual` is the numerator of the closed form: identically zero
along a surface exactly when every coordinate-pair curvature vanishes.
`constk_residual(..., k0)` vanishes exactly when K(i, j) = k0/4; the factor
4 is internal to the residual's normalization, public curvature values are
always K itself.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import fsum
from typing import Sequence

import numpy as np

from .errors import (
    DegeneratePlaneError,
    DomainError,
    NonFiniteError,
    RegularityError,
)
from .geometry import (
    REGULARITY_EPS,
    SeparableSurface,
    SurfacePoint,
    _check_regular,
)

EQUIVALENCE_RTOL = 1e-9        # |k_special - k_oracle| <= rtol * max(1, |k_oracle|)
DEFAULT_CONSTANCY_TOL = 1e-7
PLANE_EPS = 1e-10              # tangency and independence thresholds
PLANE_RETRIES = 100


@dataclass(frozen=True)
class PlaneSection:
    """A 2-plane in the tangent space, spanned by ambient vectors u and w.

    Vectors must be tangent at the point they are used (normal component
    within `PLANE_EPS` after normalization) and independent (the wedge norm
    of the normalized pair above `PLANE_EPS`); `sectional_oracle` enforces
    both and orthonormalizes internally.
    """

    u: tuple[float, ...]
    w: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(float(c) for c in self.u))
        object.__setattr__(self, "w", tuple(float(c) for c in self.w))
        if len(self.u) != len(self.w):
            raise ValueError("spanning vectors must have equal length")


def _pair_sorted(surface: SeparableSurface, i: int, j: int) -> tuple[int, int]:
    """Validate a 1-based non-height coordinate pair; returns it sorted."""
    n = surface.n
    for idx in (i, j):
        if not isinstance(idx, int) or not 1 <= idx <= n:
            raise ValueError(f"pair index {idx!r} outside 1..{n}")
        if idx == surface.height:
            raise ValueError(f"pair index {idx} is the height coordinate")
    if i == j:
        raise ValueError(f"pair indices must differ, got ({i}, {j})")
    return (i, j) if i < j else (j, i)


def _jet_columns(surface: SeparableSurface, point: SurfacePoint) -> tuple[list[float], list[float]]:
    jets = surface.jets(point.coords)
    return [j.d1 for j in jets], [j.d2 for j in jets]


def sectional_special(surface: SeparableSurface, point: SurfacePoint, i: int, j: int) -> float:
    """Closed-form curvature of the coordinate-pair tangent plane (i, j).

    Indices are 1-based, must differ, and must avoid the height coordinate.
    The result is symmetric in (i, j) and bit-identical for both orders.
    """
    lo, hi = _pair_sorted(surface, i, j)
    d1, d2 = _jet_columns(surface, point)
    _check_regular(d1, surface.height)
    h0 = surface.height - 1
    p, q, r = d1[lo - 1], d1[hi - 1], d1[h0]
    pp, qq, rr = d2[lo - 1], d2[hi - 1], d2[h0]
    num = p * p * qq * rr + q * q * pp * rr + r * r * pp * qq
    den = fsum(d * d for d in d1) * (p * p + q * q + r * r)
    return num / den


def flatness_residual(surface: SeparableSurface, point: SurfacePoint, i: int, j: int) -> float:
    """Numerator of the closed form: zero iff the (i, j)-plane curvature is.

    Involves no division, so it stays defined where regularity fails.
    """
    lo, hi = _pair_sorted(surface, i, j)
    d1, d2 = _jet_columns(surface, point)
    h0 = surface.height - 1
    p, q, r = d1[lo - 1], d1[hi - 1], d1[h0]
    pp, qq, rr = d2[lo - 1], d2[hi - 1], d2[h0]
    return p * p * qq * rr + q * q * pp * rr + r * r * pp * qq


def constk_residual(
    surface: SeparableSurface, point: SurfacePoint, i: int, j: int, k0: float
) -> float:
    """Residual that vanishes exactly when K(i, j) equals k0/4.

    With X_k = f_k'^2 and X_k' = 2 f_k'' the residual is
    k0 * (X_i + X_j + X_h) * (sum_k X_k) - (X_i X_j' X_h' + X_j X_i' X_h'
    + X_h X_i' X_j'); it equals 4 * (X_i + X_j + X_h) * (sum_k X_k) * (k0/4 - K).
    """
    k0 = float(k0)
    if not math.isfinite(k0):
        raise ValueError(f"k0 must be finite, got {k0!r}")
    lo, hi = _pair_sorted(surface, i, j)
    d1, d2 = _jet_columns(surface, point)
    _check_regular(d1, surface.height)
    h0 = surface.height - 1
    X = [d * d for d in d1]
    Xp = [2.0 * d for d in d2]
    s = X[lo - 1] + X[hi - 1] + X[h0]
    total = fsum(X)
    quad = (
        X[lo - 1] * Xp[hi - 1] * Xp[h0]
        + X[hi - 1] * Xp[lo - 1] * Xp[h0]
        + X[h0] * Xp[lo - 1] * Xp[hi - 1]
    )
    return k0 * s * total - quad


def coordinate_plane(surface: SeparableSurface, point: SurfacePoint, i: int, j: int) -> PlaneSection:
    """The tangent plane spanned by the frame vectors of coordinates i and j."""
    lo, hi = _pair_sorted(surface, i, j)
    d1, _ = _jet_columns(surface, point)
    _check_regular(d1, surface.height)
    h0 = surface.height - 1
    n = surface.n

    def frame_vector(k: int) -> tuple[float, ...]:
        vec = [0.0] * n
        vec[k - 1] = 1.0
        vec[h0] = -d1[k - 1] / d1[h0]
        return tuple(vec)

    return PlaneSection(frame_vector(lo), frame_vector(hi))


def sectional_oracle(surface: SeparableSurface, point: SurfacePoint, section: PlaneSection) -> float:
    """Gauss-equation curvature of an arbitrary tangent 2-plane.

    Orthonormalizes the section's spanning pair, pairs it with the diagonal
    ambient Hessian of F, and divides by ||grad F||^2.  Independent of the
    closed form: no height coordinate, no coordinate-pair structure.
    """
    d1, d2 = _jet_columns(surface, point)
    gradnorm = math.sqrt(fsum(d * d for d in d1))
    if gradnorm < REGULARITY_EPS:
        raise RegularityError(
            f"gradient norm {gradnorm:.3e} below regularity threshold {REGULARITY_EPS:g}"
        )
    if len(section.u) != surface.n:
        raise ValueError(
            f"section vectors have length {len(section.u)}, surface needs {surface.n}"
        )
    normal = np.array(d1) / gradnorm
    u = np.asarray(section.u, dtype=float)
    w = np.asarray(section.w, dtype=float)
    nu = float(np.linalg.norm(u))
    nw = float(np.linalg.norm(w))
    if nu == 0.0 or nw == 0.0:
        raise DegeneratePlaneError("plane spanning vector is zero")
    u = u / nu
    w = w / nw
    for name, vec in (("u", u), ("w", w)):
        drift = abs(float(vec @ normal))
        if drift > PLANE_EPS:
            raise DegeneratePlaneError(
                f"plane vector {name} is not tangent: |<{name}, N>| = {drift:.3e} "
                f"exceeds {PLANE_EPS:g}"
            )
    cos = float(u @ w)
    # wedge norm of the unit pair as |w - <w, u> u|: unlike sqrt(1 - cos^2)
    # this keeps full precision when the vectors are nearly dependent
    y = w - cos * u
    wedge = float(np.linalg.norm(y))
    if wedge <= PLANE_EPS:
        raise DegeneratePlaneError(
            f"plane spanning vectors nearly dependent: wedge norm {wedge:.3e} "
            f"at or below {PLANE_EPS:g}"
        )
    X = u
    Y = y / wedge
    hess = np.array(d2)
    hxx = float((hess * X) @ X)
    hyy = float((hess * Y) @ Y)
    hxy = float((hess * X) @ Y)
    return (hxx * hyy - hxy * hxy) / (gradnorm * gradnorm)


def random_tangent_plane(
    surface: SeparableSurface, point: SurfacePoint, rng: np.random.Generator
) -> PlaneSection:
    """Draw a uniformly random tangent 2-plane at a regular point.

    Projects a pair of standard-normal ambient vectors onto the tangent
    space and normalizes them; nearly dependent draws are rejected and
    retried (at most `PLANE_RETRIES` times).
    """
    d1, _ = _jet_columns(surface, point)
    gradnorm = math.sqrt(fsum(d * d for d in d1))
    if gradnorm < REGULARITY_EPS:
        raise RegularityError(
            f"gradient norm {gradnorm:.3e} below regularity threshold {REGULARITY_EPS:g}"
        )
    normal = np.array(d1) / gradnorm
    for _ in range(PLANE_RETRIES):
        raw = rng.standard_normal((2, surface.n))
        tangents = []
        for row in raw:
            vec = row - float(row @ normal) * normal
            norm = float(np.linalg.norm(vec))
            if norm < 1e-6:
                break
            tangents.append(vec / norm)
        if len(tangents) < 2:
            continue
        u, w = tangents
        wedge = float(np.linalg.norm(w - float(u @ w) * u))
        if wedge > PLANE_EPS:
            return PlaneSection(tuple(u.tolist()), tuple(w.tolist()))
    raise DegeneratePlaneError(
        f"no independent tangent plane found after {PLANE_RETRIES} draws"
    )


@dataclass(frozen=True)
class ScanPolicy:
    """Plane and tolerance policy for constancy scans.

    `oblique_per_point` adds that many random tangent planes per point on
    top of all coordinate pairs; their curvatures enter the summary
    statistics.  `k0` (when set) adds a constant-curvature residual per pair
    record.  Seeds must be non-negative; per-point substreams are derived
    from (seed, point position), so results are independent of thread count.
    """

    oblique_per_point: int = 0
    seed: int = 0
    constancy_tol: float = DEFAULT_CONSTANCY_TOL
    k0: float | None = None

    def __post_init__(self):
        if self.oblique_per_point < 0:
            raise ValueError("oblique_per_point must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if not (math.isfinite(self.constancy_tol) and self.constancy_tol > 0.0):
            raise ValueError(f"constancy_tol must be positive, got {self.constancy_tol!r}")


@dataclass(frozen=True)
class ScanRecord:
    """One curvature evaluation: a coordinate pair, an oblique plane, or an error."""

    sample: int
    coords: tuple[float, ...]
    kind: str                              # "pair" | "plane" | "error"
    i: int | None = None
    j: int | None = None
    u: tuple[float, ...] | None = None
    w: tuple[float, ...] | None = None
    k_special: float | None = None
    k_oracle: float | None = None
    residual_flat: float | None = None
    residual_constk: float | None = None
    flagged: bool = False
    error: str | None = None

    def k_value(self) -> float | None:
        return self.k_special if self.k_special is not None else self.k_oracle


@dataclass(frozen=True)
class CurvatureReport:
    """Scan outcome: per-plane records plus summary statistics.

    `verdict` is "constant" iff the spread (max - min over every curvature
    value) is at most the constancy tolerance, "non-constant" if it exceeds
    it, and "undetermined" when no value could be computed.
    `constant_estimate` is the mean, reported only for a "constant" verdict.
    """

    n: int
    seed: int
    constancy_tol: float
    oblique_per_point: int
    records: tuple[ScanRecord, ...]
    point_count: int
    value_count: int
    failure_count: int
    k_min: float | None
    k_max: float | None
    k_mean: float | None
    spread: float | None
    verdict: str
    constant_estimate: float | None


def _point_records(
    surface: SeparableSurface,
    point: SurfacePoint,
    position: int,
    pairs: Sequence[tuple[int, int]],
    policy: ScanPolicy,
) -> list[ScanRecord]:
    records: list[ScanRecord] = []
    try:
        for i, j in pairs:
            ks = sectional_special(surface, point, i, j)
            ko = sectional_oracle(surface, point, coordinate_plane(surface, point, i, j))
            flagged = abs(ks - ko) > EQUIVALENCE_RTOL * max(1.0, abs(ko))
            rc = (
                constk_residual(surface, point, i, j, policy.k0)
                if policy.k0 is not None
                else None
            )
            records.append(
                ScanRecord(
                    sample=position,
                    coords=point.coords,
                    kind="pair",
                    i=i,
                    j=j,
                    k_special=ks,
                    k_oracle=ko,
                    residual_flat=flatness_residual(surface, point, i, j),
                    residual_constk=rc,
                    flagged=flagged,
                )
            )
    except (RegularityError, DomainError, NonFiniteError, DegeneratePlaneError) as exc:
        return [
            ScanRecord(
                sample=position,
                coords=point.coords,
                kind="error",
                error=f"{type(exc).__name__}: {exc}",
            )
        ]
    if policy.oblique_per_point > 0:
        rng = np.random.default_rng([policy.seed, position])
        for _ in range(policy.oblique_per_point):
            try:
                section = random_tangent_plane(surface, point, rng)
                ko = sectional_oracle(surface, point, section)
            except (RegularityError, DegeneratePlaneError) as exc:
                records.append(
                    ScanRecord(
                        sample=position,
                        coords=point.coords,
                        kind="error",
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
            else:
                records.append(
                    ScanRecord(
                        sample=position,
                        coords=point.coords,
                        kind="plane",
                        u=section.u,
                        w=section.w,
                        k_oracle=ko,
                    )
                )
    return records


def scan_constancy(
    surface: SeparableSurface,
    samples: Sequence[SurfacePoint],
    policy: ScanPolicy = ScanPolicy(),
    threads: int = 1,
) -> CurvatureReport:
    """Evaluate curvature over every coordinate pair (and optional random
    planes) at every sample point and judge constancy.

    Per-point failures become error records, never abort the scan.  Records
    are ordered by (sample position, pairs ascending, then planes in draw
    order) regardless of `threads`; statistics aggregate in that fixed
    order, so output is identical for any thread count.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError(f"constancy scan needs at least 2 sample points, got {len(samples)}")
    pairs = list(combinations(surface.non_height, 2))

    def work(position: int) -> list[ScanRecord]:
        return _point_records(surface, samples[position], position, pairs, policy)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, range(len(samples))))
    else:
        chunks = [work(pos) for pos in range(len(samples))]
    records = tuple(rec for chunk in chunks for rec in chunk)

    values = [rec.k_value() for rec in records if rec.kind != "error"]
    failure_count = sum(1 for rec in records if rec.kind == "error")
    if values:
        k_min = min(values)
        k_max = max(values)
        k_mean = fsum(values) / len(values)
        spread = k_max - k_min
        verdict = "constant" if spread <= policy.constancy_tol else "non-constant"
        estimate = k_mean if verdict == "constant" else None
    else:
        k_min = k_max = k_mean = spread = estimate = None
        verdict = "undetermined"
    return CurvatureReport(
        n=surface.n,
        seed=policy.seed,
        constancy_tol=policy.constancy_tol,
        oblique_per_point=policy.oblique_per_point,
        records=records,
        point_count=len(samples),
        value_count=len(values),
        failure_count=failure_count,
        k_min=k_min,
        k_max=k_max,
        k_mean=k_mean,
        spread=spread,
        verdict=verdict,
        constant_estimate=estimate,
    )

"""Built-in certification suites over the generated families.

The flat suite scans every flat family (hyperplane, parabolic cylinder,
Cobb-Douglas square-root graph) across a dimension sweep and expects
curvature constant at zero, then runs two engineered controls that must
come out non-constant.  The constant suite scans hyperspheres across radii
and dimensions, expecting curvature constant at 1/r^2, and verifies that a
flat family fails every nonzero constant-curvature residual while the same
controls again come out non-constant.

Suites are pure functions of their arguments: sampling seeds derive from
(base seed, row ordinal, n), so repeat runs reproduce row for row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .curvature import ScanPolicy, constk_residual, scan_constancy
from .errors import SepcurvError
from .expr import parse_function
from .families import (
    make_cobb_douglas_perturbed,
    make_cobb_douglas_sqrt,
    make_cylinder,
    make_hyperplane,
    make_hypersphere,
)
from .geometry import SeparableSurface, sample_points

FLAT_TOL = 1e-9           # max |K| accepted as flat
SPHERE_TOL = 1e-9         # max |K - 1/r^2| and spread accepted as constant
CONTROL_MIN_SPREAD = 1e-3  # engineered non-examples must spread at least this
DEFAULT_SEED = 20260819
NONZERO_K0S = (-1.0, 0.5, 1.0, 4.0)


@dataclass(frozen=True)
class SuiteRow:
    """One suite check: what ran, what was expected, what came out."""

    name: str
    n: int
    expected: str
    observed: str
    ok: bool


def make_exp_control(n: int, height: int | None = None) -> SeparableSurface:
    """Engineered non-example: f_k = exp(x_k) off the height and
    f_h = exp(x_h) - n, so the surface is nonempty but nowhere close to
    constant curvature."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    h = n if height is None else height
    funcs = [
        parse_function(f"exp(x) - {float(n)!r}" if k == h else "exp(x)")
        for k in range(1, n + 1)
    ]
    return SeparableSurface(tuple(funcs), h)


def exp_control_ranges(n: int) -> list[tuple[float, float]]:
    # keep sum exp(x_k) < n so the height equation exp(t) = n - sum stays solvable
    hi = 0.2 if n <= 5 else 0.0
    return [(-0.5, hi)] * (n - 1)


EXP_CONTROL_BRACKET = (-6.0, 2.0)


def _scan(
    surface: SeparableSurface,
    ranges: Sequence[tuple[float, float]],
    bracket: tuple[float, float],
    count: int,
    seed_entropy: Sequence[int],
    oblique: int = 0,
):
    points, failures = sample_points(surface, ranges, count, list(seed_entropy), bracket)
    if len(points) < 2:
        raise SepcurvError(
            f"only {len(points)} of {count} draws lifted onto the surface "
            f"({len(failures)} failures)"
        )
    policy = ScanPolicy(oblique_per_point=oblique, seed=int(seed_entropy[0]))
    return scan_constancy(surface, points, policy), points


def _flat_row(name: str, n: int, report) -> SuiteRow:
    peak = max(abs(report.k_min), abs(report.k_max)) if report.k_min is not None else math.inf
    ok = report.verdict == "constant" and peak <= FLAT_TOL
    return SuiteRow(
        name,
        n,
        f"constant 0 (max |K| <= {FLAT_TOL:g})",
        f"{report.verdict}, max |K| = {peak:.3e}",
        ok,
    )


def _control_row(name: str, n: int, report) -> SuiteRow:
    spread = report.spread if report.spread is not None else 0.0
    ok = report.verdict == "non-constant" and spread > CONTROL_MIN_SPREAD
    return SuiteRow(
        name,
        n,
        f"non-constant (spread > {CONTROL_MIN_SPREAD:g})",
        f"{report.verdict}, spread = {spread:.3e}",
        ok,
    )


def _control_rows(dims: Sequence[int], count: int, seed: int, base_ordinal: int) -> list[SuiteRow]:
    n = 4 if 4 in dims else dims[0]
    rows = []
    perturbed = make_cobb_douglas_perturbed(1.0, n, 0.05)
    ranges = [(0.5, 2.0)] * (n - 1)
    report, _ = _scan(perturbed, ranges, (0.05, 8.0), count, (seed, base_ordinal, n))
    rows.append(_control_row("cobb_douglas_perturbed(eps=0.05)", n, report))
    control = make_exp_control(n)
    report, _ = _scan(
        control, exp_control_ranges(n), EXP_CONTROL_BRACKET, count, (seed, base_ordinal + 1, n)
    )
    rows.append(_control_row("exp_control", n, report))
    return rows


def run_flat_suite(
    dims: Sequence[int] = (4, 5, 6),
    count: int = 100,
    seed: int = DEFAULT_SEED,
) -> list[SuiteRow]:
    """Flat families scan to K = 0; engineered controls refuse to."""
    rows: list[SuiteRow] = []
    for n in dims:
        surface = make_hyperplane([1.0] * n, offset=0.5)
        report, _ = _scan(surface, [(-2.0, 2.0)] * (n - 1), (-12.0, 12.0), count, (seed, 0, n))
        rows.append(_flat_row("hyperplane(1,...,1)", n, report))

        profile = parse_function("x^2")
        surface = make_cylinder(profile, n)
        report, _ = _scan(surface, [(-2.0, 2.0)] * (n - 1), (-16.0, 16.0), count, (seed, 1, n))
        rows.append(_flat_row("cylinder(x^2)", n, report))

        surface = make_cobb_douglas_sqrt(1.0, n)
        report, _ = _scan(surface, [(0.5, 2.0)] * (n - 1), (0.05, 8.0), count, (seed, 2, n))
        rows.append(_flat_row("cobb_douglas_sqrt(A=1)", n, report))
    rows.extend(_control_rows(dims, count, seed, 3))
    return rows


def run_constant_suite(
    radii: Sequence[float] = (0.5, 1.0, 2.0, 3.0),
    dims: Sequence[int] = (4, 5),
    count: int = 100,
    oblique: int = 20,
    seed: int = DEFAULT_SEED,
) -> list[SuiteRow]:
    """Hyperspheres scan to K = 1/r^2 on coordinate pairs and random oblique
    planes; a flat family fails every nonzero constant-curvature residual;
    the engineered controls stay non-constant."""
    rows: list[SuiteRow] = []
    for n in dims:
        for r in radii:
            surface = make_hypersphere([0.0] * n, r)
            half = r / (2.0 * math.sqrt(n - 1))
            report, _ = _scan(
                surface,
                [(-half, half)] * (n - 1),
                (0.1 * r, 1.01 * r),
                count,
                (seed, 10, n, int(r * 1000)),
                oblique=oblique,
            )
            target = 1.0 / (r * r)
            if report.k_min is None:
                ok, observed = False, "no values"
            else:
                peak_err = max(abs(report.k_min - target), abs(report.k_max - target))
                spread = report.spread
                ok = report.verdict == "constant" and peak_err <= SPHERE_TOL and spread <= SPHERE_TOL
                observed = (
                    f"{report.verdict}, max |K - 1/r^2| = {peak_err:.3e}, spread = {spread:.3e}"
                )
            rows.append(
                SuiteRow(
                    f"hypersphere(r={r:g})",
                    n,
                    f"constant 1/r^2 = {target:.6g} (err and spread <= {SPHERE_TOL:g})",
                    observed,
                    ok,
                )
            )

    # a flat family must fail every nonzero constant-curvature residual
    n = 4 if 4 in dims else dims[0]
    flat = make_cobb_douglas_sqrt(1.0, n)
    points, _ = sample_points(flat, [(0.5, 2.0)] * (n - 1), 25, [seed, 20, n], (0.05, 8.0))
    pairs = [(i, j) for ix, i in enumerate(flat.non_height) for j in flat.non_height[ix + 1:]]
    worst_min = math.inf
    for k0 in NONZERO_K0S:
        smallest = min(
            abs(constk_residual(flat, p, i, j, k0)) for p in points for i, j in pairs
        )
        worst_min = min(worst_min, smallest)
    ok = worst_min > CONTROL_MIN_SPREAD
    rows.append(
        SuiteRow(
            f"cobb_douglas_sqrt vs k0 in {NONZERO_K0S}",
            n,
            f"every nonzero-k0 residual magnitude > {CONTROL_MIN_SPREAD:g}",
            f"min |residual| = {worst_min:.3e}",
            ok,
        )
    )
    rows.extend(_control_rows(dims, count, seed, 21))
    return rows


def format_rows(rows: Sequence[SuiteRow]) -> str:
    """Fixed-width table, one row per check, PASS/FAIL column first."""
    name_w = max(len(r.name) for r in rows)
    exp_w = max(len(r.expected) for r in rows)
    lines = []
    for r in rows:
        status = "PASS" if r.ok else "FAIL"
        lines.append(
            f"{status}  {r.name:<{name_w}}  n={r.n}  {r.expected:<{exp_w}}  {r.observed}"
        )
    passed = sum(1 for r in rows if r.ok)
    lines.append(f"{passed}/{len(rows)} checks passed")
    return "\n".join(lines)

"""Command-line interface: eval, scan, certify, mesh.

Exit codes
    0  success
    1  certification suite failure
    2  spec-file / expression parse error or bad usage
    3  regularity violation or root-solve failure
    4  mesh export produced fewer than 3 valid vertices
    5  unexpected internal error

The constancy tolerance resolves in precedence order: --tol flag, then the
spec file's tolerances.constancy, then the SEPCURV_TOL environment
variable, then the built-in default of 1e-7.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .curvature import (
    DEFAULT_CONSTANCY_TOL,
    ScanPolicy,
    constk_residual,
    coordinate_plane,
    flatness_residual,
    scan_constancy,
    sectional_oracle,
    sectional_special,
)
from .errors import (
    DegeneratePlaneError,
    DomainError,
    MeshError,
    NonFiniteError,
    OffSurfaceError,
    ParseError,
    RegularityError,
    SolveError,
    SpecFileError,
)
from .geometry import sample_points, solve_height
from .meshing import build_mesh, write_curvature_csv, write_obj
from .report import report_body_csv, report_body_json, write_report
from .specfile import LoadedSpec, load_spec
from .suites import format_rows, run_constant_suite, run_flat_suite

ENV_TOL = "SEPCURV_TOL"


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags exist on the main parser and every subparser so they may
    # appear on either side of the subcommand; the subparser copies suppress
    # their defaults so a pre-subcommand value is not clobbered
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--seed", type=int, default=default(None),
        help="override the spec file's sampling seed",
    )
    parser.add_argument(
        "--tol", type=float, default=default(None),
        help="override the constancy tolerance",
    )
    parser.add_argument(
        "--threads", type=int, default=default(os.cpu_count() or 1),
        help="scan worker threads (output is identical for any value)",
    )
    parser.add_argument(
        "--format", choices=("json", "csv"), default=default("json"),
        help="report body format",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepcurv",
        description="Sectional curvature laboratory for separable hypersurfaces "
        "f1(x1) + ... + fn(xn) = 0.",
    )
    parser.add_argument("--version", action="version", version=f"sepcurv {__version__}")
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="curvature of one point and coordinate pair")
    _add_global_flags(p, suppress=True)
    p.add_argument("spec", help="surface-spec JSON file")
    p.add_argument("--point", required=True, help="comma-separated non-height coordinates")
    p.add_argument("--pair", default=None, help="coordinate pair i,j (default: first two non-height)")
    p.add_argument("--k0", type=float, default=None, help="also report the constant-curvature residual")

    p = sub.add_parser("scan", help="sample points and test curvature constancy")
    _add_global_flags(p, suppress=True)
    p.add_argument("spec", help="surface-spec JSON file")
    p.add_argument("--out", required=True, help="report file to write")

    p = sub.add_parser("certify", help="run a built-in family certification suite")
    _add_global_flags(p, suppress=True)
    p.add_argument("suite", choices=("flat", "constant"))
    p.add_argument("--dims", default=None, help="comma-separated dimension sweep")
    p.add_argument("--count", type=int, default=100, help="sample points per scan")

    p = sub.add_parser("mesh", help="export a triangulated mesh (n = 3 only)")
    _add_global_flags(p, suppress=True)
    p.add_argument("spec", help="surface-spec JSON file")
    p.add_argument("--out", required=True, help="OBJ file to write")
    return parser


def _resolve_tol(flag_value: float | None, spec_value: float | None) -> float:
    if flag_value is not None:
        if not flag_value > 0.0:
            raise SpecFileError(f"--tol must be positive, got {flag_value!r}")
        return flag_value
    if spec_value is not None:
        return spec_value
    env = os.environ.get(ENV_TOL)
    if env:
        try:
            value = float(env)
        except ValueError as exc:
            raise SpecFileError(f"{ENV_TOL} must be a number, got {env!r}") from exc
        if not value > 0.0:
            raise SpecFileError(f"{ENV_TOL} must be positive, got {env!r}")
        return value
    return DEFAULT_CONSTANCY_TOL


def _parse_floats(text: str, expected: int, what: str) -> list[float]:
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise SpecFileError(f"{what} must be comma-separated numbers: {exc}") from exc
    if len(values) != expected:
        raise SpecFileError(f"{what} needs {expected} values, got {len(values)}")
    return values


def _eval_pair(spec: LoadedSpec, pair_text: str | None) -> tuple[int, int]:
    surface = spec.surface
    if pair_text is None:
        return surface.non_height[0], surface.non_height[1]
    parts = [p.strip() for p in pair_text.split(",")]
    if len(parts) != 2:
        raise SpecFileError(f"--pair needs two indices, got {pair_text!r}")
    try:
        i, j = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise SpecFileError(f"--pair must be integers: {exc}") from exc
    if i == j or i not in surface.non_height or j not in surface.non_height:
        raise SpecFileError(
            f"--pair must name two distinct non-height coordinates from "
            f"{surface.non_height}, got ({i}, {j})"
        )
    return i, j


def _cmd_eval(ns: argparse.Namespace) -> int:
    spec = load_spec(ns.spec)
    surface = spec.surface
    partial = _parse_floats(ns.point, surface.n - 1, "--point")
    i, j = _eval_pair(spec, ns.pair)
    point = solve_height(surface, partial, spec.bracket)
    k_special = sectional_special(surface, point, i, j)
    k_oracle = sectional_oracle(surface, point, coordinate_plane(surface, point, i, j))
    flat = flatness_residual(surface, point, i, j)
    constk = constk_residual(surface, point, i, j, ns.k0) if ns.k0 is not None else None
    if ns.format == "json":
        doc = {
            "coords": list(point.coords),
            "residual": point.residual,
            "pair": [i, j],
            "k_special": k_special,
            "k_oracle": k_oracle,
            "flatness_residual": flat,
        }
        if constk is not None:
            doc["k0"] = ns.k0
            doc["constk_residual"] = constk
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(f"point: {point.coords!r}  (residual {point.residual:.3e})")
        print(f"pair: ({i}, {j})")
        print(f"K closed form:  {k_special!r}")
        print(f"K Gauss oracle: {k_oracle!r}")
        print(f"flatness residual: {flat!r}")
        if constk is not None:
            print(f"constant-K residual (k0={ns.k0!r}): {constk!r}")
    return 0


def _cmd_scan(ns: argparse.Namespace) -> int:
    spec = load_spec(ns.spec)
    if spec.ranges is None:
        raise SpecFileError(f"{ns.spec}: sampling.ranges is required for scanning")
    seed = spec.seed if ns.seed is None else ns.seed
    if seed < 0:
        raise SpecFileError(f"--seed must be non-negative, got {seed}")
    tol = _resolve_tol(ns.tol, spec.constancy_tol)
    points, failures = sample_points(
        spec.surface, spec.ranges, spec.count, seed, spec.bracket
    )
    if len(points) < 2:
        raise SolveError(
            f"only {len(points)} of {spec.count} draws lifted onto the surface; "
            f"first failure: {failures[0][1] if failures else 'n/a'}"
        )
    policy = ScanPolicy(
        oblique_per_point=spec.oblique, seed=seed, constancy_tol=tol
    )
    report = scan_constancy(spec.surface, points, policy, threads=max(1, ns.threads))
    if ns.format == "json":
        body = report_body_json(
            report,
            input_digest=spec.digest,
            tool_version=__version__,
            sampling_failures=failures,
        )
    else:
        body = report_body_csv(report, sampling_failures=failures)
    write_report(ns.out, body)
    line = f"verdict: {report.verdict}"
    if report.spread is not None:
        rel = "<=" if report.verdict == "constant" else ">"
        line += f" (spread {report.spread:.3e} {rel} tol {tol:g})"
    if report.constant_estimate is not None:
        line += f" (K = {report.constant_estimate!r})"
    print(line)
    print(f"report: {ns.out}")
    return 0


def _cmd_certify(ns: argparse.Namespace) -> int:
    dims = None
    if ns.dims is not None:
        try:
            dims = tuple(int(p.strip()) for p in ns.dims.split(","))
        except ValueError as exc:
            raise SpecFileError(f"--dims must be comma-separated integers: {exc}") from exc
        if any(d < 3 for d in dims):
            raise SpecFileError("--dims entries must be >= 3")
    if ns.count < 2:
        raise SpecFileError("--count must be at least 2")
    if ns.suite == "flat":
        rows = run_flat_suite(dims or (4, 5, 6), count=ns.count)
    else:
        rows = run_constant_suite(dims=dims or (4, 5), count=ns.count)
    print(format_rows(rows))
    return 0 if all(r.ok for r in rows) else 1


def _cmd_mesh(ns: argparse.Namespace) -> int:
    spec = load_spec(ns.spec)
    if spec.surface.n != 3:
        raise SpecFileError(f"{ns.spec}: mesh export needs n = 3, got n = {spec.surface.n}")
    if spec.ranges is None:
        raise SpecFileError(f"{ns.spec}: sampling.ranges is required for meshing")
    grid = spec.grid if spec.grid is not None else (32, 32)
    mesh = build_mesh(spec.surface, spec.ranges, grid, spec.bracket)
    write_obj(ns.out, mesh)
    sidecar = os.path.splitext(ns.out)[0] + "_curvature.csv"
    write_curvature_csv(sidecar, mesh)
    k_lo, k_hi = min(mesh.curvatures), max(mesh.curvatures)
    print(
        f"mesh: {len(mesh.vertices)} vertices, {len(mesh.faces)} triangles, "
        f"{mesh.dropped} grid nodes dropped"
    )
    print(f"K range: [{k_lo!r}, {k_hi!r}]")
    print(f"wrote {ns.out} and {sidecar}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "eval": _cmd_eval,
        "scan": _cmd_scan,
        "certify": _cmd_certify,
        "mesh": _cmd_mesh,
    }
    try:
        return handlers[ns.command](ns)
    except (SpecFileError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        RegularityError,
        SolveError,
        DomainError,
        NonFiniteError,
        OffSurfaceError,
        DegeneratePlaneError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MeshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # contract: anything unexpected is exit 5
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    raise SystemExit(main())

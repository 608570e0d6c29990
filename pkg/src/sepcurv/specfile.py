"""Surface-spec files: a small versioned JSON schema describing a surface
plus how to sample it.

Schema (format_version 1): a JSON object with exactly one of

    "functions": [{"expr": str, "domain": [lo|null, hi|null],
                   "bracket": [lo, hi]  (height entry only, required there)},
                  ...]
    "family":    {"kind": str, "n": int, "height"?: int, ...kind parameters}

plus optional blocks

    "n":            int   (functions form only; must match the list length)
    "height_index": int   (functions form only; default n)
    "bracket":      [lo, hi]   (family form only; overrides the default)
    "sampling":     {"count"?: int, "seed"?: int, "ranges"?: [[lo, hi], ...],
                     "oblique_planes"?: int}
    "tolerances":   {"constancy"?: float}
    "grid":         [nx, ny]   (mesh export, n = 3 only)

Domain ends of null mean unbounded.  Family kinds and their parameters are
documented in `sepcurv.families`; families supply default sampling ranges
and a default height bracket, raw-function specs must spell them out
(`sampling.ranges` only if the spec is used for scanning or meshing).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

from .errors import ParseError, SpecFileError
from .expr import Function1D, parse_function
from .families import FamilySpec
from .geometry import SeparableSurface

FORMAT_VERSION = 1


@dataclass(frozen=True)
class LoadedSpec:
    """A fully validated spec file: surface plus sampling configuration."""

    surface: SeparableSurface
    bracket: tuple[float, float]
    ranges: tuple[tuple[float, float], ...] | None
    count: int
    seed: int
    oblique: int
    constancy_tol: float | None
    grid: tuple[int, int] | None
    digest: str
    family: FamilySpec | None


def spec_digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def _domain_from(value, where: str) -> tuple[float, float]:
    if value is None:
        return (-math.inf, math.inf)
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SpecFileError(f"{where}: domain must be [lo, hi] with null for unbounded")
    lo = -math.inf if value[0] is None else float(value[0])
    hi = math.inf if value[1] is None else float(value[1])
    if not lo < hi:
        raise SpecFileError(f"{where}: domain needs lo < hi, got [{value[0]}, {value[1]}]")
    return (lo, hi)


def _pair_of_floats(value, where: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SpecFileError(f"{where} must be [lo, hi]")
    try:
        lo, hi = float(value[0]), float(value[1])
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"{where} must contain two numbers: {exc}") from exc
    if not lo < hi:
        raise SpecFileError(f"{where} needs lo < hi, got [{lo!r}, {hi!r}]")
    return (lo, hi)


def load_spec(path: str) -> LoadedSpec:
    """Read, validate, and materialize a surface-spec file."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file {path!r}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecFileError(f"{path}: top level must be a JSON object")

    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise SpecFileError(
            f"{path}: format_version must be {FORMAT_VERSION}, got {version!r}"
        )

    has_functions = "functions" in data
    has_family = "family" in data
    if has_functions == has_family:
        raise SpecFileError(f"{path}: give exactly one of 'functions' or 'family'")

    known = {
        "format_version", "functions", "family", "n", "height_index",
        "bracket", "sampling", "tolerances", "grid",
    }
    unknown = set(data) - known
    if unknown:
        raise SpecFileError(f"{path}: unknown top-level keys {sorted(unknown)}")

    sampling = data.get("sampling", {})
    if not isinstance(sampling, dict):
        raise SpecFileError(f"{path}: 'sampling' must be an object")
    unknown = set(sampling) - {"count", "seed", "ranges", "oblique_planes"}
    if unknown:
        raise SpecFileError(f"{path}: unknown sampling keys {sorted(unknown)}")
    count = sampling.get("count", 100)
    seed = sampling.get("seed", 0)
    oblique = sampling.get("oblique_planes", 0)
    if not isinstance(count, int) or count < 1:
        raise SpecFileError(f"{path}: sampling.count must be a positive integer")
    if not isinstance(seed, int) or seed < 0:
        raise SpecFileError(f"{path}: sampling.seed must be a non-negative integer")
    if not isinstance(oblique, int) or oblique < 0:
        raise SpecFileError(f"{path}: sampling.oblique_planes must be a non-negative integer")

    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise SpecFileError(f"{path}: 'tolerances' must be an object")
    unknown = set(tolerances) - {"constancy"}
    if unknown:
        raise SpecFileError(f"{path}: unknown tolerance keys {sorted(unknown)}")
    constancy_tol = tolerances.get("constancy")
    if constancy_tol is not None:
        constancy_tol = float(constancy_tol)
        if not constancy_tol > 0.0:
            raise SpecFileError(f"{path}: tolerances.constancy must be positive")

    grid = data.get("grid")
    if grid is not None:
        if (
            not isinstance(grid, (list, tuple))
            or len(grid) != 2
            or not all(isinstance(g, int) and g >= 2 for g in grid)
        ):
            raise SpecFileError(f"{path}: grid must be [nx, ny] with integers >= 2")
        grid = (grid[0], grid[1])

    ranges = None
    if "ranges" in sampling:
        raw_ranges = sampling["ranges"]
        if not isinstance(raw_ranges, (list, tuple)):
            raise SpecFileError(f"{path}: sampling.ranges must be a list of [lo, hi]")
        ranges = tuple(
            _pair_of_floats(r, f"{path}: sampling.ranges[{k}]")
            for k, r in enumerate(raw_ranges)
        )

    if has_family:
        if "height_index" in data:
            raise SpecFileError(
                f"{path}: put 'height' inside the family object, not 'height_index'"
            )
        if "n" in data:
            raise SpecFileError(f"{path}: 'n' lives inside the family object")
        if not isinstance(data["family"], dict):
            raise SpecFileError(f"{path}: 'family' must be an object")
        family = FamilySpec.from_dict(data["family"])
        surface = family.build()
        bracket = (
            _pair_of_floats(data["bracket"], f"{path}: bracket")
            if "bracket" in data
            else family.default_bracket()
        )
        if ranges is None:
            ranges = tuple(family.default_ranges())
    else:
        if "bracket" in data:
            raise SpecFileError(
                f"{path}: in the functions form the bracket belongs to the height entry"
            )
        family = None
        items = data["functions"]
        if not isinstance(items, list) or len(items) < 3:
            raise SpecFileError(f"{path}: 'functions' must list at least 3 entries")
        n = len(items)
        declared_n = data.get("n")
        if declared_n is not None and declared_n != n:
            raise SpecFileError(
                f"{path}: n = {declared_n} inconsistent with {n} function entries"
            )
        height = data.get("height_index", n)
        if not isinstance(height, int) or not 1 <= height <= n:
            raise SpecFileError(f"{path}: height_index must be an integer in 1..{n}")
        funcs: list[Function1D] = []
        bracket = None
        for k, item in enumerate(items):
            where = f"{path}: functions[{k}]"
            if not isinstance(item, dict):
                raise SpecFileError(f"{where} must be an object")
            unknown = set(item) - {"expr", "domain", "bracket"}
            if unknown:
                raise SpecFileError(f"{where}: unknown keys {sorted(unknown)}")
            if "expr" not in item or not isinstance(item["expr"], str):
                raise SpecFileError(f"{where} needs a string 'expr'")
            domain = _domain_from(item.get("domain"), where)
            try:
                funcs.append(parse_function(item["expr"], domain))
            except ParseError as exc:
                raise SpecFileError(f"{where}: {exc}") from exc
            if "bracket" in item:
                if k != height - 1:
                    raise SpecFileError(
                        f"{where}: only the height entry (index {height}) takes a bracket"
                    )
                bracket = _pair_of_floats(item["bracket"], f"{where}: bracket")
        if bracket is None:
            raise SpecFileError(
                f"{path}: the height entry functions[{height - 1}] needs a bracket"
            )
        surface = SeparableSurface(tuple(funcs), height)

    if ranges is not None and len(ranges) != surface.n - 1:
        raise SpecFileError(
            f"{path}: sampling.ranges needs {surface.n - 1} entries, got {len(ranges)}"
        )

    return LoadedSpec(
        surface=surface,
        bracket=bracket,
        ranges=ranges,
        count=count,
        seed=seed,
        oblique=oblique,
        constancy_tol=constancy_tol,
        grid=grid,
        digest=spec_digest(raw),
        family=family,
    )

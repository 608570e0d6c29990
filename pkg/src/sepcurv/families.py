"""Ready-made surface families plus sampling defaults for each.

Constructors return `SeparableSurface` instances built from explicit ASTs:

* `make_hyperplane`: every f_k affine.
* `make_cylinder`: one non-affine profile coordinate, all others affine,
  the height coordinate strictly affine with nonzero slope.
* `make_cobb_douglas_sqrt`: f_k = -log(x_k + mu_k) off the height and
  f_h = 2 log(x_h + mu_h) - 2 log(A); its graph is
  x_h + mu_h = A * sqrt(prod (x_k + mu_k)).
* `make_log_ode`: the one-parameter logarithmic family
  f_k = -lam log(x_k + mu_k) + beta_k, f_h = 2 lam log(x_h + mu_h) + beta_h,
  whose members all satisfy f_k'' = f_k'^2 / lam_k with lam_k = lam off the
  height and lam_h = -2 lam (so lam_i + lam_j + lam_h = 0 for every pair).
* `make_hypersphere`: f_k = (x_k - c_k)^2 with the -r^2 constant folded into
  the height function; curvature 1/r^2 on every tangent plane.
* `make_cobb_douglas_perturbed`: engineered non-example, one log coefficient
  nudged off the flat family's value.

`FamilySpec` is the declarative form used by surface-spec files; its
`default_ranges`/`default_bracket` keep every draw on the branch each
family is built on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import SpecFileError
from .expr import BinOp, Call, Const, Function1D, Neg, Node, Pow, Var, eval_jet2, parse_function
from .geometry import SeparableSurface

FAMILY_KINDS = ("hyperplane", "cylinder", "cobb_douglas_sqrt", "hypersphere", "log_ode")


def _affine(lam: float, mu: float) -> Node:
    """AST for lam*x + mu with minimal node count."""
    if lam == 0.0:
        return Const(mu)
    term: Node
    if lam == 1.0:
        term = Var()
    elif lam == -1.0:
        term = Neg(Var())
    else:
        term = BinOp("*", Const(lam), Var())
    if mu == 0.0:
        return term
    if mu < 0.0:
        return BinOp("-", term, Const(-mu))
    return BinOp("+", term, Const(mu))


def _shifted_var(shift: float) -> Node:
    """AST for x + shift."""
    if shift == 0.0:
        return Var()
    if shift < 0.0:
        return BinOp("-", Var(), Const(-shift))
    return BinOp("+", Var(), Const(shift))


def _log_term(coef: float, shift: float, offset: float) -> Node:
    """AST for coef*log(x + shift) + offset."""
    node: Node = Call("log", _shifted_var(shift))
    if coef == -1.0:
        node = Neg(node)
    elif coef != 1.0:
        node = BinOp("*", Const(coef), node)
    if offset == 0.0:
        return node
    if offset < 0.0:
        return BinOp("-", node, Const(-offset))
    return BinOp("+", node, Const(offset))


def _resolve_height(n: int, height: int | None) -> int:
    h = n if height is None else height
    if not 1 <= h <= n:
        raise ValueError(f"height index {height!r} outside 1..{n}")
    return h


def make_hyperplane(
    coeffs: Sequence[float], offset: float = 0.0, height: int | None = None
) -> SeparableSurface:
    """Affine surface sum lam_k x_k + offset = 0; flat everywhere.

    The coefficient vector must be nonzero and the height coefficient must
    be nonzero (the height coordinate has to be solvable).
    """
    coeffs = [float(c) for c in coeffs]
    n = len(coeffs)
    if n < 3:
        raise ValueError(f"need at least 3 coefficients, got {n}")
    h = _resolve_height(n, height)
    if all(c == 0.0 for c in coeffs):
        raise ValueError("coefficient vector must be nonzero")
    if coeffs[h - 1] == 0.0:
        raise ValueError(f"height coefficient lam_{h} must be nonzero")
    funcs = [
        Function1D(_affine(c, float(offset) if k == h - 1 else 0.0))
        for k, c in enumerate(coeffs)
    ]
    return SeparableSurface(tuple(funcs), h)


def make_cylinder(
    profile: Function1D,
    n: int,
    lin: Sequence[float] | None = None,
    offsets: Sequence[float] | None = None,
    profile_slot: int = 1,
    height: int | None = None,
) -> SeparableSurface:
    """Product of a plane curve with a flat factor: one profile coordinate,
    affine everywhere else, affine height with nonzero slope.

    `lin` and `offsets` list the affine slopes/intercepts for the non-profile
    coordinates, ascending by coordinate index (defaults: slope 1, intercept
    0).  The profile may sit at any non-height slot via `profile_slot`.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    h = _resolve_height(n, height)
    if not 1 <= profile_slot <= n:
        raise ValueError(f"profile_slot {profile_slot} outside 1..{n}")
    if profile_slot == h:
        raise ValueError("profile cannot occupy the height coordinate")
    others = [k for k in range(1, n + 1) if k != profile_slot]
    lin = [1.0] * (n - 1) if lin is None else [float(v) for v in lin]
    offsets = [0.0] * (n - 1) if offsets is None else [float(v) for v in offsets]
    if len(lin) != n - 1 or len(offsets) != n - 1:
        raise ValueError(f"lin and offsets must have length {n - 1}")
    slot_of = dict(zip(others, range(n - 1)))
    if lin[slot_of[h]] == 0.0:
        raise ValueError(f"height coefficient lam_{h} must be nonzero")
    funcs: list[Function1D] = []
    for k in range(1, n + 1):
        if k == profile_slot:
            funcs.append(profile)
        else:
            r = slot_of[k]
            funcs.append(Function1D(_affine(lin[r], offsets[r])))
    return SeparableSurface(tuple(funcs), h)


def make_cobb_douglas_sqrt(
    a: float, n: int, shifts: Sequence[float] | None = None, height: int | None = None
) -> SeparableSurface:
    """Graph of x_h + mu_h = A sqrt(prod_k (x_k + mu_k)); flat everywhere.

    Realized with f_k = -log(x_k + mu_k) off the height and
    f_h = 2 log(x_h + mu_h) - 2 log(A); each domain is (-mu_k, inf).
    A must be positive.
    """
    a = float(a)
    if not a > 0.0:
        raise ValueError(f"scale constant A must be positive, got {a!r}")
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    h = _resolve_height(n, height)
    shifts = [0.0] * n if shifts is None else [float(v) for v in shifts]
    if len(shifts) != n:
        raise ValueError(f"shifts must have length {n}")
    beta_h = -2.0 * math.log(a)
    funcs = [
        Function1D(
            _log_term(2.0 if k == h - 1 else -1.0, shifts[k], beta_h if k == h - 1 else 0.0),
            (-shifts[k], math.inf),
        )
        for k in range(n)
    ]
    return SeparableSurface(tuple(funcs), h)


def make_log_ode(
    lam: float,
    n: int,
    shifts: Sequence[float] | None = None,
    betas: Sequence[float] | None = None,
    height: int | None = None,
) -> SeparableSurface:
    """Logarithmic family f_k = -lam log(x_k + mu_k) + beta_k with the height
    carrying coefficient 2 lam; flat for every lam != 0.

    Every member satisfies f_k'' = f_k'^2 / lam_k for the coefficient vector
    from `log_family_lambdas(n, lam)`.
    """
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lam must be nonzero")
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    h = _resolve_height(n, height)
    shifts = [0.0] * n if shifts is None else [float(v) for v in shifts]
    betas = [0.0] * n if betas is None else [float(v) for v in betas]
    if len(shifts) != n or len(betas) != n:
        raise ValueError(f"shifts and betas must have length {n}")
    funcs = [
        Function1D(
            _log_term(2.0 * lam if k == h - 1 else -lam, shifts[k], betas[k]),
            (-shifts[k], math.inf),
        )
        for k in range(n)
    ]
    return SeparableSurface(tuple(funcs), h)


def log_family_lambdas(n: int, lam: float = 1.0, height: int | None = None) -> tuple[float, ...]:
    """Coefficient vector of the logarithmic family: lam off the height,
    -2 lam at it.  Pairwise sums lam_i + lam_j + lam_h vanish exactly, in
    floating point too."""
    h = _resolve_height(n, height)
    lam = float(lam)
    return tuple(-2.0 * lam if k == h else lam for k in range(1, n + 1))


def make_hypersphere(
    center: Sequence[float], radius: float, height: int | None = None
) -> SeparableSurface:
    """Sphere of the given center and radius: f_k = (x_k - c_k)^2 with the
    -r^2 constant folded into the height function.  Curvature is 1/r^2 on
    every tangent plane."""
    radius = float(radius)
    if not radius > 0.0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    center = [float(c) for c in center]
    n = len(center)
    if n < 3:
        raise ValueError(f"need at least 3 center coordinates, got {n}")
    h = _resolve_height(n, height)
    funcs: list[Function1D] = []
    for k, c in enumerate(center):
        node: Node = Pow(_shifted_var(-c), 2.0)
        if k == h - 1:
            node = BinOp("-", node, Const(radius * radius))
        funcs.append(Function1D(node))
    return SeparableSurface(tuple(funcs), h)


def make_cobb_douglas_perturbed(
    a: float, n: int, epsilon: float, slot: int = 1, height: int | None = None
) -> SeparableSurface:
    """Engineered non-example: one log coefficient moved off the flat value.

    Identical to `make_cobb_douglas_sqrt(a, n)` except coordinate `slot`
    carries f = -(1 + 2*epsilon) log(x); already epsilon = 0.05 makes the
    curvature visibly non-constant."""
    base = make_cobb_douglas_sqrt(a, n, height=height)
    if not 1 <= slot <= n or slot == base.height:
        raise ValueError(f"slot {slot} must be a non-height coordinate in 1..{n}")
    epsilon = float(epsilon)
    if epsilon == 0.0:
        raise ValueError("epsilon must be nonzero, otherwise the surface is the flat member")
    funcs = list(base.funcs)
    funcs[slot - 1] = Function1D(_log_term(-(1.0 + 2.0 * epsilon), 0.0, 0.0), (0.0, math.inf))
    return SeparableSurface(tuple(funcs), base.height)


def ode_residual_subcase21(f: Function1D, lam_k: float, x: float) -> float:
    """Residual of f'' = f'^2 / lam_k at x; zero along the logarithmic family
    with its constructed coefficient vector."""
    lam_k = float(lam_k)
    if lam_k == 0.0:
        raise ValueError("lam_k must be nonzero")
    jet = eval_jet2(f, x)
    return jet.d2 - jet.d1 * jet.d1 / lam_k


def _as_float_list(value, name: str, length: int) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != length:
        raise SpecFileError(f"{name} must be a list of {length} numbers")
    try:
        return [float(v) for v in value]
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"{name} must contain only numbers: {exc}") from exc


@dataclass(frozen=True)
class FamilySpec:
    """Declarative family instance: a kind plus its parameters.

    The spec-file shorthand for generated surfaces.  `build()` materializes
    the surface; `default_ranges()` and `default_bracket()` give sampling
    boxes and a height bracket that keep draws on the regular branch."""

    kind: str
    n: int
    params: Mapping[str, object] = field(default_factory=dict)
    height: int | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise SpecFileError(
                f"unknown family kind {self.kind!r}; valid kinds: {', '.join(FAMILY_KINDS)}"
            )
        if not isinstance(self.n, int) or self.n < 3:
            raise SpecFileError(f"family n must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "params", dict(self.params))
        _resolve_height(self.n, self.height)

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "FamilySpec":
        data = dict(data)
        kind = data.pop("kind", None)
        if not isinstance(kind, str):
            raise SpecFileError("family needs a string 'kind'")
        n = data.pop("n", None)
        if not isinstance(n, int):
            raise SpecFileError("family needs an integer 'n'")
        height = data.pop("height", None)
        if height is not None and not isinstance(height, int):
            raise SpecFileError("family height must be an integer")
        return cls(kind, n, data, height)

    def _param(self, name: str, default=None, required: bool = False):
        if required and name not in self.params:
            raise SpecFileError(f"family kind {self.kind!r} requires parameter {name!r}")
        return self.params.get(name, default)

    def _known_params(self, names: set[str]) -> None:
        unknown = set(self.params) - names
        if unknown:
            raise SpecFileError(
                f"unknown parameters for family kind {self.kind!r}: {sorted(unknown)}"
            )

    def build(self) -> SeparableSurface:
        n, h = self.n, self.height
        if self.kind == "hyperplane":
            self._known_params({"coeffs", "offset"})
            coeffs = _as_float_list(self._param("coeffs", required=True), "coeffs", n)
            return make_hyperplane(coeffs, float(self._param("offset", 0.0)), h)
        if self.kind == "cylinder":
            self._known_params({"profile_expr", "profile_domain", "lin", "offsets", "profile_slot"})
            expr = self._param("profile_expr", "x^2")
            dom = self._param("profile_domain")
            domain = (-math.inf, math.inf)
            if dom is not None:
                if not isinstance(dom, (list, tuple)) or len(dom) != 2:
                    raise SpecFileError("profile_domain must be [lo, hi] (null ends allowed)")
                domain = (
                    -math.inf if dom[0] is None else float(dom[0]),
                    math.inf if dom[1] is None else float(dom[1]),
                )
            profile = parse_function(str(expr), domain)
            lin = self._param("lin")
            offsets = self._param("offsets")
            return make_cylinder(
                profile,
                n,
                None if lin is None else _as_float_list(lin, "lin", n - 1),
                None if offsets is None else _as_float_list(offsets, "offsets", n - 1),
                int(self._param("profile_slot", 1)),
                h,
            )
        if self.kind == "cobb_douglas_sqrt":
            self._known_params({"a", "shifts"})
            shifts = self._param("shifts")
            return make_cobb_douglas_sqrt(
                float(self._param("a", required=True)),
                n,
                None if shifts is None else _as_float_list(shifts, "shifts", n),
                h,
            )
        if self.kind == "hypersphere":
            self._known_params({"center", "radius"})
            center = self._param("center", [0.0] * n)
            return make_hypersphere(
                _as_float_list(center, "center", n),
                float(self._param("radius", required=True)),
                h,
            )
        self._known_params({"lam", "shifts", "betas"})
        shifts = self._param("shifts")
        betas = self._param("betas")
        return make_log_ode(
            float(self._param("lam", required=True)),
            n,
            None if shifts is None else _as_float_list(shifts, "shifts", n),
            None if betas is None else _as_float_list(betas, "betas", n),
            h,
        )

    def default_ranges(self) -> list[tuple[float, float]]:
        """Per non-height coordinate sampling boxes, ascending by index."""
        surface = self.build()
        n, h = self.n, surface.height
        if self.kind in ("hyperplane", "cylinder"):
            ranges: list[tuple[float, float]] = []
            for k in surface.non_height:
                lo, hi = surface.funcs[k - 1].domain
                a = -2.0 if lo == -math.inf else lo + 0.1 * min(hi - lo, 1.0)
                b = 2.0 if hi == math.inf else hi - 0.1 * min(hi - lo, 1.0)
                a, b = max(a, -2.0), min(b, 2.0)
                if not a < b:
                    raise SpecFileError(
                        f"cannot derive a default range inside domain ({lo!r}, {hi!r})"
                    )
                ranges.append((a, b))
            return ranges
        if self.kind in ("cobb_douglas_sqrt", "log_ode"):
            shifts = self.params.get("shifts") or [0.0] * n
            return [(0.5 - float(shifts[k - 1]), 2.0 - float(shifts[k - 1])) for k in surface.non_height]
        # hypersphere: stay well inside the ball so the lift is single-valued
        center = _as_float_list(self.params.get("center", [0.0] * n), "center", n)
        radius = float(self.params["radius"])
        half = radius / (2.0 * math.sqrt(n - 1))
        return [(center[k - 1] - half, center[k - 1] + half) for k in surface.non_height]

    def default_bracket(self) -> tuple[float, float]:
        """Height bracket guaranteed to straddle the lift for default ranges."""
        surface = self.build()
        n, h = self.n, surface.height
        if self.kind in ("hyperplane", "cylinder"):
            bound = 1.0
            for k, rng in zip(surface.non_height, self.default_ranges()):
                f = surface.funcs[k - 1]
                grid = [rng[0] + (rng[1] - rng[0]) * t / 32.0 for t in range(33)]
                bound += 1.5 * max(abs(eval_jet2(f, x).v) for x in grid)
            fh = surface.funcs[h - 1]
            # affine height: slope from the jet, intercept from the value
            jet = eval_jet2(fh, 0.0)
            slope, intercept = jet.d1, jet.v
            m = (bound + abs(intercept)) / abs(slope) + 1.0
            return (-m, m)
        if self.kind in ("cobb_douglas_sqrt", "log_ode"):
            shifts = self.params.get("shifts") or [0.0] * n
            betas = self.params.get("betas") or [0.0] * n
            if self.kind == "cobb_douglas_sqrt":
                a_eff = float(self.params["a"])
            else:
                lam = float(self.params["lam"])
                a_eff = math.exp(-math.fsum(float(b) for b in betas) / (2.0 * lam))
            mu_h = float(shifts[h - 1])
            lo = 0.9 * a_eff * 0.5 ** ((n - 1) / 2.0) - mu_h
            hi = 1.1 * a_eff * 2.0 ** ((n - 1) / 2.0) - mu_h
            return (lo, hi)
        center = _as_float_list(self.params.get("center", [0.0] * n), "center", n)
        radius = float(self.params["radius"])
        c_h = center[h - 1]
        return (c_h + 0.1 * radius, c_h + 1.01 * radius)

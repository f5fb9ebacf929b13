"""Weight families and orthonormal-polynomial recurrences.

A weight is one of the classical families (Jacobi, Laguerre, Hermite) or a
generalized family: the classical exponential factor times a product of
singular factors |x - c_j|^gamma_j.  For classical families the recurrence
coefficients of the orthonormal polynomials are closed-form; generalized
families go through the discretized Stieltjes procedure driven by a
singularity-respecting quadrature rule.

Orthonormal normalization throughout: p_0 = 1/sqrt(mass) and
x p_k = b_k p_{k+1} + a_k p_k + b_{k-1} p_{k-1}, with every b_k > 0 and the
leading coefficient of each p_k positive.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import QuadratureError, WeightError

CLASSICAL_FAMILIES = ("jacobi", "laguerre", "hermite")
GENERALIZED_FAMILIES = ("gen_jacobi", "gen_laguerre", "gen_hermite")
FAMILIES = CLASSICAL_FAMILIES + GENERALIZED_FAMILIES

DEFAULT_MAX_N = 60
STABILIZE_TOL = 1e-12
MAX_REFINE = 6

_SUM_TOL = 1e-12  # tolerance for the "sum of exponents is zero" hypothesis


def max_degree_cap() -> int:
    """Degree cap for recurrence/sharp-constant computations.

    Defaults to 60 (double precision keeps the recurrences healthy there);
    override with the MARKOVSHARP_MAX_N environment variable.
    """
    raw = os.environ.get("MARKOVSHARP_MAX_N", "")
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise WeightError(f"MARKOVSHARP_MAX_N is not an integer: {raw!r}") from exc
    return DEFAULT_MAX_N


@dataclass(frozen=True)
class WeightSpec:
    """A validated weight: family, interval, exponents, singular factors, scale."""

    family: str
    interval: tuple[float, float]
    alpha: float = 0.0
    beta: float = 0.0
    singularities: tuple[tuple[float, float], ...] = ()
    scale: float = 1.0

    @property
    def weight_id(self) -> str:
        return json.dumps(weight_to_json(self), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class RecurrenceTable:
    """Three-term recurrence coefficients of the orthonormal polynomials."""

    n_max: int
    diag: np.ndarray
    offdiag: np.ndarray
    mass: float
    weight_id: str = field(default="", compare=False)

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.shape != (self.n_max + 1,) or offdiag.shape != (self.n_max,):
            raise ValueError("recurrence arrays inconsistent with n_max")
        if self.n_max > 0 and not np.all(offdiag > 0):
            raise ValueError("offdiag coefficients must be strictly positive")
        diag.setflags(write=False)
        offdiag.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)


def _as_float(value, name: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise WeightError(f"{name} is not a number: {value!r}") from exc
    if math.isnan(out):
        raise WeightError(f"{name} is NaN")
    return out


def _parse_endpoint(value, name: str) -> float:
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "+inf", "infinity"):
            return math.inf
        if token == "-inf":
            return -math.inf
        raise WeightError(f"{name}: unrecognized endpoint {value!r}")
    return _as_float(value, name)


_DEFAULT_INTERVALS = {
    "jacobi": (-1.0, 1.0),
    "laguerre": (0.0, math.inf),
    "hermite": (-math.inf, math.inf),
    "gen_laguerre": (0.0, math.inf),
    "gen_hermite": (-math.inf, math.inf),
}


def make_weight(raw) -> WeightSpec:
    """Validate a weight description and return a WeightSpec.

    ``raw`` is a JSON-style mapping with keys family, interval, alpha, beta,
    singularities, scale (endpoints may be the strings "inf"/"-inf"), or an
    existing WeightSpec (returned unchanged).
    """
    if isinstance(raw, WeightSpec):
        return raw
    if not isinstance(raw, dict):
        raise WeightError(f"weight description must be a mapping, got {type(raw).__name__}")
    known = {"family", "interval", "alpha", "beta", "singularities", "scale"}
    unknown = set(raw) - known
    if unknown:
        raise WeightError(f"unknown weight fields: {sorted(unknown)}")

    family = raw.get("family")
    if family not in FAMILIES:
        raise WeightError(f"unknown family {family!r}; expected one of {FAMILIES}")

    if "interval" in raw:
        pair = raw["interval"]
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise WeightError("interval must be a pair [a, b]")
        a = _parse_endpoint(pair[0], "interval[0]")
        b = _parse_endpoint(pair[1], "interval[1]")
    elif family in _DEFAULT_INTERVALS:
        a, b = _DEFAULT_INTERVALS[family]
    else:
        raise WeightError(f"{family}: interval is required")
    if not a < b:
        raise WeightError(f"empty interval: [{a}, {b}]")

    alpha = _as_float(raw.get("alpha", 0.0), "alpha")
    beta = _as_float(raw.get("beta", 0.0), "beta")
    scale = _as_float(raw.get("scale", 1.0), "scale")
    if not (scale > 0 and math.isfinite(scale)):
        raise WeightError(f"scale must be a positive finite number, got {scale}")

    sings = []
    for item in raw.get("singularities", ()):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise WeightError("singularities must be pairs [c, gamma]")
        c = _as_float(item[0], "singularity location")
        g = _as_float(item[1], "singularity exponent")
        if not (math.isfinite(c) and math.isfinite(g)):
            raise WeightError("singularity entries must be finite")
        sings.append((c, g))

    if family in ("laguerre", "gen_laguerre") and (a, b) != (0.0, math.inf):
        raise WeightError(f"{family}: interval must be [0, inf)")
    if family in ("hermite", "gen_hermite") and (a, b) != (-math.inf, math.inf):
        raise WeightError(f"{family}: interval must be the whole real line")
    if family in ("jacobi", "gen_jacobi") and not (math.isfinite(a) and math.isfinite(b)):
        raise WeightError(f"{family}: interval must be finite")

    if family == "jacobi":
        if alpha <= -1 or beta <= -1:
            raise WeightError("jacobi: non-integrable endpoint singularity (need alpha, beta > -1)")
    elif family == "laguerre":
        if alpha <= -1:
            raise WeightError("laguerre: non-integrable endpoint singularity (need alpha > -1)")
        if beta != 0.0:
            raise WeightError("laguerre: beta is not used")
    elif family == "hermite":
        if alpha != 0.0 or beta != 0.0:
            raise WeightError("hermite: alpha/beta are not used")
    elif family == "gen_hermite":
        if beta != 0.0:
            raise WeightError("gen_hermite: beta is not used")
        if alpha != 0.0:
            if alpha < 0:
                raise WeightError("gen_hermite: the |x|^alpha exponent must be >= 0")
            if any(c == 0.0 for c, _ in sings):
                raise WeightError("gen_hermite: alpha duplicates an explicit singularity at 0")
            sings.append((0.0, alpha))
            sings.sort()
            alpha = 0.0
    elif alpha != 0.0 or beta != 0.0:
        raise WeightError(f"{family}: alpha/beta are not used (put exponents in singularities)")

    if family in ("jacobi", "laguerre", "hermite") and sings:
        raise WeightError(f"{family}: singularities are not allowed for classical families")

    cs = [c for c, _ in sings]
    if any(c2 <= c1 for c1, c2 in zip(cs, cs[1:])):
        raise WeightError("singularity locations must be strictly increasing")
    for c, g in sings:
        if a <= c <= b and g <= -1:
            raise WeightError(f"non-integrable singularity: gamma={g} at c={c} inside the interval")

    if family == "gen_laguerre" and sings:
        if cs[-1] < 0:
            raise WeightError("gen_laguerre: the largest singularity location must be >= 0")
        inner_sum = sum(g for _, g in sings[:-1])
        total_sum = sum(g for _, g in sings)
        if abs(inner_sum) > _SUM_TOL and not total_sum > -1:
            raise WeightError(
                "gen_laguerre: need either sum of all but the last exponent = 0 "
                f"(got {inner_sum}) or total exponent sum > -1 (got {total_sum})"
            )
    if family == "gen_hermite":
        total_sum = sum(g for _, g in sings)
        if total_sum < 0:
            raise WeightError(f"gen_hermite: exponent sum must be >= 0, got {total_sum}")

    return WeightSpec(
        family=family,
        interval=(a, b),
        alpha=alpha,
        beta=beta,
        singularities=tuple(sings),
        scale=scale,
    )


def weight_to_json(spec: WeightSpec) -> dict:
    """JSON-ready mapping for a WeightSpec (infinite endpoints become strings)."""
    def endpoint(v):
        if v == math.inf:
            return "inf"
        if v == -math.inf:
            return "-inf"
        return v

    return {
        "family": spec.family,
        "interval": [endpoint(spec.interval[0]), endpoint(spec.interval[1])],
        "alpha": spec.alpha,
        "beta": spec.beta,
        "singularities": [[c, g] for c, g in spec.singularities],
        "scale": spec.scale,
    }


def is_symmetric(spec: WeightSpec) -> bool:
    """True when the weight is even about the midpoint of its interval."""
    if spec.family == "hermite":
        return True
    if spec.family == "gen_hermite":
        pts = spec.singularities
        return all(
            (pts[i][0] == -pts[len(pts) - 1 - i][0]) and (pts[i][1] == pts[len(pts) - 1 - i][1])
            for i in range(len(pts))
        )
    if spec.family == "jacobi":
        return spec.alpha == spec.beta
    if spec.family == "gen_jacobi":
        mid = 0.5 * (spec.interval[0] + spec.interval[1])
        pts = spec.singularities
        return all(
            (pts[i][0] - mid == mid - pts[len(pts) - 1 - i][0])
            and (pts[i][1] == pts[len(pts) - 1 - i][1])
            for i in range(len(pts))
        )
    return False


def _gamma(x: float) -> float:
    if x <= 170.0:
        return math.gamma(x)
    return math.exp(math.lgamma(x))


def _jacobi_monic_beta(k: int, al: float, be: float) -> float:
    # beta_k of the monic recurrence on [-1, 1]; k >= 1
    if k == 1:
        return 4 * (1 + al) * (1 + be) / ((2 + al + be) ** 2 * (3 + al + be))
    s = 2 * k + al + be
    return 4 * k * (k + al) * (k + be) * (k + al + be) / (s * s * (s + 1) * (s - 1))


def recurrence_classical(spec: WeightSpec, n: int) -> RecurrenceTable:
    """Closed-form orthonormal recurrence for a classical family.

    Supports jacobi (any finite interval), laguerre, hermite, and gen_hermite
    whose only singular factor sits at the origin (|x|^gamma e^{-x^2}).  The
    coefficient formulas are the standard ones for these families; see e.g.
    Gautschi, "Orthogonal Polynomials: Computation and Approximation".
    """
    if n < 0:
        raise WeightError("n must be >= 0")

    fam = spec.family
    if fam == "jacobi":
        al, be = spec.alpha, spec.beta
        a, b = spec.interval
        mid, h = 0.5 * (a + b), 0.5 * (b - a)
        diag = np.empty(n + 1)
        diag[0] = (be - al) / (al + be + 2)
        for k in range(1, n + 1):
            s = 2 * k + al + be
            diag[k] = (be * be - al * al) / (s * (s + 2))
        offdiag = np.array([math.sqrt(_jacobi_monic_beta(k + 1, al, be)) for k in range(n)])
        mass = (b - a) ** (al + be + 1) * math.exp(
            math.lgamma(al + 1) + math.lgamma(be + 1) - math.lgamma(al + be + 2)
        )
        diag = mid + h * diag
        offdiag = h * offdiag
    elif fam == "laguerre":
        al = spec.alpha
        diag = np.array([2.0 * k + al + 1.0 for k in range(n + 1)])
        offdiag = np.array([math.sqrt((k + 1) * (k + 1 + al)) for k in range(n)])
        mass = _gamma(al + 1)
    elif fam == "hermite":
        diag = np.zeros(n + 1)
        offdiag = np.sqrt(np.arange(1.0, n + 1.0) / 2.0)
        mass = math.sqrt(math.pi)
    elif fam == "gen_hermite":
        sings = spec.singularities
        if len(sings) > 1 or (len(sings) == 1 and sings[0][0] != 0.0):
            raise WeightError(
                "recurrence_classical handles gen_hermite only with a single singular "
                "factor at the origin; use recurrence_stieltjes"
            )
        g = sings[0][1] if sings else 0.0
        diag = np.zeros(n + 1)
        beta = [(k / 2.0 + (g / 2.0 if k % 2 else 0.0)) for k in range(1, n + 1)]
        offdiag = np.sqrt(np.array(beta))
        mass = _gamma((g + 1) / 2)
    else:
        raise WeightError(f"no closed-form recurrence for family {fam!r}; use recurrence_stieltjes")

    return RecurrenceTable(
        n_max=n, diag=diag, offdiag=offdiag, mass=mass * spec.scale, weight_id=spec.weight_id
    )


def _stieltjes_once(rule, n: int, weight_id: str) -> RecurrenceTable:
    nodes = np.asarray(rule.nodes, dtype=float)
    weights = np.asarray(rule.weights, dtype=float)
    if nodes.shape[0] < n + 1:
        raise QuadratureError(
            f"rule too short: {nodes.shape[0]} nodes cannot support degree {n} "
            f"(need at least {n + 1})"
        )
    diag, offdiag, mass, status = _kernels.stieltjes(nodes, weights, n)
    if status >= 0:
        raise QuadratureError(f"quadrature insufficient: lost positivity at degree {status}")
    return RecurrenceTable(n_max=n, diag=diag, offdiag=offdiag, mass=mass, weight_id=weight_id)


def _recurrence_change(old: RecurrenceTable, new: RecurrenceTable, hint: float = 0.0) -> float:
    # componentwise relative change; entries far below the natural scale of
    # the recurrence (roundoff-level diag entries of symmetric weights, say)
    # are measured against that scale instead.  The Stieltjes sums round off
    # proportionally to the node magnitudes, hence the hint.
    scale = float(np.max(np.abs(new.diag)))
    if new.n_max > 0:
        scale = max(scale, float(np.max(new.offdiag)))
    floor = max(scale, hint, 1e-300)
    d = np.max(np.abs(new.diag - old.diag) / np.maximum(np.abs(new.diag), floor))
    if new.n_max > 0:
        d = max(d, np.max(np.abs(new.offdiag - old.offdiag) / np.maximum(new.offdiag, floor)))
    return float(d)


def stabilized_stieltjes(spec: WeightSpec, n: int, degree: int | None = None):
    """Stieltjes recurrence certified by rule refinement.

    Builds composite rules of doubling density for integrals of polynomial
    degree ``degree`` (default 2n+1) and accepts once two consecutive
    densities give coefficients within 1e-12 relative of each other (at most
    6 refinements, else an error).  Returns the accepted (table, rule) pair.
    """
    if degree is None:
        degree = 2 * n + 1
    from .quadrature import composite_rule

    prev = None
    for level in range(MAX_REFINE + 1):
        rule = composite_rule(spec, degree, refine=level)
        cur = _stieltjes_once(rule, n, spec.weight_id)
        if rule.exactness >= 2 * n + 1:
            return cur, rule  # singularity-free reduction: the rule is exact
        hint = float(np.max(np.abs(rule.nodes)))
        if prev is not None and _recurrence_change(prev, cur, hint) <= STABILIZE_TOL:
            return cur, rule
        prev = cur
    raise QuadratureError(
        f"recurrence coefficients did not stabilize after {MAX_REFINE} rule refinements"
    )


def recurrence_stieltjes(spec: WeightSpec, rule, n: int) -> RecurrenceTable:
    """Recurrence coefficients from a quadrature discretization of the weight.

    A rule whose stated exactness covers degree 2n+1 determines the
    coefficients exactly and a single pass is returned.  A
    tolerance-controlled rule (exactness -1) only seeds validation: the
    result is certified by rebuilding composite rules of doubling density
    until the coefficients change by at most 1e-12 relative (at most 6
    refinements, else an error).
    """
    if n < 0:
        raise WeightError("n must be >= 0")
    rec = _stieltjes_once(rule, n, spec.weight_id)
    if rule.exactness >= 2 * n + 1:
        return rec
    return stabilized_stieltjes(spec, n)[0]


def _as_points(x):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise ValueError("evaluation points must be a scalar or 1-D array")
    return arr, np.isscalar(x) or getattr(x, "ndim", 1) == 0


def eval_orthonormal(rec: RecurrenceTable, x, n: int) -> np.ndarray:
    """Values (p_0(x), ..., p_n(x)) by the forward three-term recurrence."""
    if n < 0 or n > rec.n_max:
        raise ValueError(f"need 0 <= n <= n_max={rec.n_max}, got {n}")
    pts, scalar = _as_points(x)
    table = _kernels.poly_table(rec.diag[: n + 1], rec.offdiag[:n], 1.0 / math.sqrt(rec.mass), pts)
    return table[:, 0] if scalar else table


def eval_derivatives(rec: RecurrenceTable, x, n: int) -> np.ndarray:
    """Values (p_0'(x), ..., p_n'(x)); p_0' = 0."""
    return eval_derivative_table(rec, x, n, order=1)[1]


def eval_derivative_table(rec: RecurrenceTable, x, n: int, order: int) -> np.ndarray:
    """Stack of derivative values p_k^(d)(x) for d = 0..order.

    Shape (order+1, n+1) for scalar x, else (order+1, n+1, len(x)).
    """
    if n < 0 or n > rec.n_max:
        raise ValueError(f"need 0 <= n <= n_max={rec.n_max}, got {n}")
    if order < 0:
        raise ValueError("order must be >= 0")
    pts, scalar = _as_points(x)
    stack = _kernels.deriv_tables(
        rec.diag[: n + 1], rec.offdiag[:n], 1.0 / math.sqrt(rec.mass), pts, order
    )
    return stack[:, :, 0] if scalar else stack

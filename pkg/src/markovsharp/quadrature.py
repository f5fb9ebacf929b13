"""Gauss rules from recurrence tables and composite rules for generalized weights.

``gauss_rule`` is the Golub-Welsch construction: nodes are the eigenvalues of
the symmetric tridiagonal Jacobi matrix, weights come from the first
eigenvector components.  ``composite_rule`` handles generalized weights by
splitting the interval at every singular point (and, on unbounded intervals,
truncating at a certified radius): each finite piece gets a Gauss-Jacobi rule
whose weight absorbs the endpoint factors |x-c|^gamma exactly, while the
exponential factor and the off-piece singular factors are folded into the
rule weights.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from . import _kernels
from .errors import QuadratureError, WeightError
from .orthopoly import GENERALIZED_FAMILIES, RecurrenceTable, WeightSpec, recurrence_classical

TAIL_TOL = 1e-14
_MAX_RADIUS_DOUBLINGS = 60


@dataclass(frozen=True)
class QuadRule:
    """Positive quadrature rule for integrals against one weight."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness: int  # polynomial degree through which the rule is exact; -1 = tolerance-controlled
    weight_id: str = ""

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if nodes.size == 0:
            raise ValueError("empty rule")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("nodes must be strictly increasing")
        if not np.all(weights > 0):
            raise ValueError("weights must be strictly positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)


def gauss_rule(rec: RecurrenceTable, m: int) -> QuadRule:
    """m-point Gauss rule for the measure behind a recurrence table.

    Nodes are the eigenvalues of the m x m Jacobi matrix.  The weight at a
    node equals mass times the squared first eigenvector component, which is
    computed here through the equivalent Christoffel-function identity
    w_j = 1 / sum_k p_k(x_j)^2: LAPACK flushes first components below ~1e-17
    to zero (extreme Gauss-Laguerre nodes), while the polynomial-table form
    keeps them positive.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > rec.n_max + 1:
        raise ValueError(f"recurrence table too short for an {m}-point rule (n_max={rec.n_max})")
    import scipy.linalg

    from .errors import EigenError

    try:
        nodes = scipy.linalg.eigh_tridiagonal(
            rec.diag[:m], rec.offdiag[: m - 1], eigvals_only=True
        )
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigenError(f"tridiagonal eigensolver did not converge: {exc}") from exc
    table = _kernels.poly_table(rec.diag[:m], rec.offdiag[: m - 1], 1.0 / math.sqrt(rec.mass), nodes)
    weights = 1.0 / np.sum(table * table, axis=0)
    return QuadRule(nodes=nodes, weights=weights, exactness=2 * m - 1, weight_id=rec.weight_id)


def integrate(rule: QuadRule, f) -> float:
    """Sum of weights_i * f(nodes_i); exact for polynomials up to rule.exactness."""
    try:
        vals = np.asarray(f(rule.nodes), dtype=float)
        if vals.shape != rule.nodes.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([float(f(t)) for t in rule.nodes])
    return float(np.dot(rule.weights, vals))


def _gauss_jacobi_piece(lo: float, hi: float, g_lo: float, g_hi: float, m: int):
    """Nodes/weights on [lo, hi] with weight (hi-x)^g_hi (x-lo)^g_lo absorbed."""
    base = WeightSpec(family="jacobi", interval=(-1.0, 1.0), alpha=g_hi, beta=g_lo)
    rule = gauss_rule(recurrence_classical(base, m), m)
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (lo + hi) + half * rule.nodes
    # the [-1,1] rule's mass is 2^(g_lo+g_hi+1) B(...); rescale to the piece length
    weights = rule.weights * half ** (g_lo + g_hi + 1)
    return nodes, weights


def _exponent_sums(spec: WeightSpec):
    total = sum(g for _, g in spec.singularities)
    absolute = sum(abs(g) for _, g in spec.singularities)
    return total, absolute


def _truncation_radius(spec: WeightSpec, degree: int) -> float:
    """Radius beyond which the weight's degree-weighted tail is negligible.

    The estimate bounds every singular factor by powers of x (valid once
    x >= 2 max|c_j|) and reduces the tail to a regularized incomplete gamma
    function of the base family.  The radius is doubled until the relative
    tail drops below 1e-14.
    """
    total, absolute = _exponent_sums(spec)
    cmax = max((abs(c) for c, _ in spec.singularities), default=0.0)
    fudge = 4.0**absolute
    if spec.family == "gen_laguerre":
        radius = max(10.0, 1.0 + cmax, 2.0 * cmax)
        a = degree + total + 1.0

        def rel_tail(r):
            return fudge * gammaincc(a, r)

    else:  # gen_hermite
        radius = max(6.0, 1.0 + cmax, 2.0 * cmax)
        a = 0.5 * (degree + total + 1.0)

        def rel_tail(r):
            return fudge * gammaincc(a, r * r)

    for _ in range(_MAX_RADIUS_DOUBLINGS):
        if rel_tail(radius) < TAIL_TOL:
            return radius
        radius *= 2.0
    raise QuadratureError("tail mass beyond the truncation radius exceeds tolerance")


def _graded_subpieces(u: float, v: float, spec: WeightSpec) -> list[float]:
    """Split [u, v] dyadically away from nearby off-piece singular points.

    A singular factor whose branch point sits just outside a long piece makes
    Gauss rules on the whole piece converge slowly; sub-pieces whose lengths
    grow geometrically away from that end restore fast convergence.
    """
    outside_left = [u - c for c, _ in spec.singularities if c < u]
    outside_right = [c - v for c, _ in spec.singularities if c > v]
    delta_u = min(outside_left) if outside_left else math.inf
    delta_v = min(outside_right) if outside_right else math.inf
    length = v - u
    pts = {u, v}
    if length > 4 * delta_u:
        step = delta_u
        x = u + step
        while x < u + 0.6 * length:
            pts.add(x)
            step *= 2
            x += step
    if length > 4 * delta_v:
        step = delta_v
        x = v - step
        while x > v - 0.6 * length:
            pts.add(x)
            step *= 2
            x -= step
    ordered = sorted(pts)
    out = [ordered[0]]
    for p in ordered[1:]:
        if p - out[-1] > 1e-8 * length:
            out.append(p)
    out[-1] = v
    return out


def _piece_node_count(spec: WeightSpec, lo: float, hi: float, degree: int, refine: int) -> int:
    base = degree // 2 + 1 + 8
    if spec.family == "gen_laguerre":
        span = hi - lo
    elif spec.family == "gen_hermite":
        if lo < 0.0 < hi:
            span = max(lo * lo, hi * hi)
        else:
            span = abs(hi * hi - lo * lo)
    else:
        span = 0.0
    if span > 0.0:
        # resolve the exponential factor's variation across the piece
        base += math.ceil(0.25 * span) + 13
    return base * (2**refine)


def composite_rule(spec: WeightSpec, degree: int, refine: int = 0) -> QuadRule:
    """Singularity-respecting rule for a generalized weight.

    Accurate (tolerance-controlled, exactness reported as -1) for integrands
    polynomial of the given degree times the weight.  ``refine`` doubles the
    per-piece node count ``refine`` times; the Stieltjes stabilization loop
    uses this to certify convergence.
    """
    if spec.family not in GENERALIZED_FAMILIES:
        raise WeightError(f"composite_rule needs a generalized family, got {spec.family!r}")
    if degree < 0:
        raise ValueError("degree must be >= 0")

    if not spec.singularities:
        base_family = {"gen_jacobi": "jacobi", "gen_laguerre": "laguerre", "gen_hermite": "hermite"}
        base = WeightSpec(
            family=base_family[spec.family], interval=spec.interval, scale=spec.scale
        )
        m = _piece_node_count(spec, 0.0, 0.0, degree, refine)
        rule = gauss_rule(recurrence_classical(base, m), m)
        return QuadRule(rule.nodes, rule.weights, rule.exactness, weight_id=spec.weight_id)

    a, b = spec.interval
    if spec.family == "gen_jacobi":
        lo, hi = a, b
    elif spec.family == "gen_laguerre":
        lo, hi = 0.0, _truncation_radius(spec, degree)
    else:
        r = _truncation_radius(spec, degree)
        lo, hi = -r, r

    exponent_at = dict(spec.singularities)
    breaks = [lo] + [c for c, _ in spec.singularities if lo < c < hi] + [hi]

    if spec.family == "gen_laguerre":
        smooth_exp = lambda x: np.exp(-x)
    elif spec.family == "gen_hermite":
        smooth_exp = lambda x: np.exp(-(x**2))
    else:
        smooth_exp = lambda x: np.ones_like(x)

    all_nodes = []
    all_weights = []
    for u, v in zip(breaks, breaks[1:]):
        for lo_s, hi_s in zip(sub := _graded_subpieces(u, v, spec), sub[1:]):
            g_lo = exponent_at.get(lo_s, 0.0)
            g_hi = exponent_at.get(hi_s, 0.0)
            m = _piece_node_count(spec, lo_s, hi_s, degree, refine)
            nodes, weights = _gauss_jacobi_piece(lo_s, hi_s, g_lo, g_hi, m)
            smooth = spec.scale * smooth_exp(nodes)
            for c, g in spec.singularities:
                if c != lo_s and c != hi_s:
                    smooth = smooth * np.abs(nodes - c) ** g
            weights = weights * smooth
            keep = weights > 0  # drop any node whose weight underflowed
            all_nodes.append(nodes[keep])
            all_weights.append(weights[keep])

    nodes = np.concatenate(all_nodes)
    weights = np.concatenate(all_weights)
    order = np.argsort(nodes)
    return QuadRule(nodes[order], weights[order], exactness=-1, weight_id=spec.weight_id)


def rule_to_csv(rule: QuadRule) -> str:
    """CSV dump (node,weight rows) with weight identity and exactness up front."""
    buf = io.StringIO()
    buf.write(f"# weight_id: {rule.weight_id}\n")
    buf.write(f"# exactness: {rule.exactness}\n")
    buf.write("node,weight\n")
    for x, w in zip(rule.nodes, rule.weights):
        buf.write(f"{float(x)!r},{float(w)!r}\n")
    return buf.getvalue()

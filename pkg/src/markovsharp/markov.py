"""Sharp Markov constants in weighted L2 and weighted Sobolev norms.

For polynomials of degree at most n and a weight w, the least constant in
||P'|| <= C ||P|| over the weighted L2 norm is the greatest singular value of
the derivative connection matrix whose entries pair the derivatives of the
orthonormal basis with the basis itself.  The Sobolev variant replaces both
norms by ||P||^2 + sum_j lambda_j ||P^(j)||^2 and becomes a generalized
symmetric eigenproblem between the two Gram forms.

The connection matrix is stored with rows indexed by the target basis (the
transpose of the usual convention) so it acts directly on coefficient
vectors; singular values are unaffected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError, WeightError
from .linalg import gen_sym_eigen_max, svd_largest
from .orthopoly import (
    CLASSICAL_FAMILIES,
    RecurrenceTable,
    WeightSpec,
    eval_derivative_table,
    max_degree_cap,
    recurrence_classical,
    stabilized_stieltjes,
    weight_to_json,
)
from .quadrature import QuadRule, gauss_rule

RESIDUAL_TOL = 1e-8
MAX_SOBOLEV_ORDER = 4

_VANISH_RTOL = 1e-11


@dataclass(frozen=True)
class DerivativeMatrix:
    """Connection matrix: entry (i, j) pairs p_j' with p_i against the weight."""

    n: int
    matrix: np.ndarray  # shape (n, n+1)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.n, self.n + 1):
            raise ValueError(f"expected shape {(self.n, self.n + 1)}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class SobolevSpec:
    """Derivative weights lambda_1..lambda_k of a weighted Sobolev norm."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        lams = tuple(float(v) for v in self.lambdas)
        if len(lams) < 1:
            raise WeightError("need at least one lambda (k >= 1)")
        if any(not (v >= 0 and math.isfinite(v)) for v in lams):
            raise WeightError(f"lambdas must be finite and >= 0, got {lams}")
        object.__setattr__(self, "lambdas", lams)

    @property
    def k(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True)
class SharpResult:
    """Sharp constant, extremal coefficients, and the verification residual."""

    n: int
    value: float
    coeffs: np.ndarray
    residual: float
    weight: WeightSpec
    lambdas: tuple[float, ...] = ()

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


def result_to_json(res: SharpResult) -> dict:
    return {
        "n": res.n,
        "value": res.value,
        "coeffs": [float(c) for c in res.coeffs],
        "residual": res.residual,
        "weight": weight_to_json(res.weight),
        "lambdas": list(res.lambdas),
    }


def basis_for(spec: WeightSpec, n: int) -> tuple[RecurrenceTable, QuadRule]:
    """Recurrence table (to degree n+1 at least) plus a rule good for degree 2n+2 integrals."""
    cap = max_degree_cap()
    if n > cap:
        raise WeightError(f"n={n} exceeds the degree cap {cap} (set MARKOVSHARP_MAX_N to raise it)")
    if spec.family in CLASSICAL_FAMILIES or (
        spec.family == "gen_hermite"
        and all(c == 0.0 for c, _ in spec.singularities)
    ):
        rec = recurrence_classical(spec, n + 2)
        return rec, gauss_rule(rec, n + 2)
    return stabilized_stieltjes(spec, n + 1, degree=2 * n + 3)


def derivative_matrix(rec: RecurrenceTable, rule: QuadRule, n: int) -> DerivativeMatrix:
    """Assemble the n x (n+1) derivative connection matrix by quadrature.

    Entries with column <= row must vanish (a derivative of degree j-1 is
    orthogonal to every basis element of degree >= j); the assembly checks
    this within 1e-11 of the matrix norm and then zeroes those entries.
    """
    if n < 0:
        raise WeightError("n must be >= 0")
    if n > rec.n_max:
        raise WeightError(f"recurrence table too short: n={n} > n_max={rec.n_max}")
    if rule.exactness >= 0 and rule.exactness < max(2 * n - 1, 0):
        raise QuadratureError(
            f"rule exactness {rule.exactness} below the 2n-1 = {2 * n - 1} required"
        )
    if n == 0:
        return DerivativeMatrix(n=0, matrix=np.zeros((0, 1)))

    stack = eval_derivative_table(rec, rule.nodes, n, order=1)
    values, derivs = stack[0], stack[1]
    full = (values * rule.weights) @ derivs.T  # (n+1, n+1); row i col j = <p_i, p_j'>
    mat = full[:n, :].copy()

    norm = np.linalg.norm(mat)
    lower = np.tril(np.ones_like(mat, dtype=bool), k=0)
    worst = np.max(np.abs(mat[lower])) if norm > 0 else 0.0
    if worst > _VANISH_RTOL * norm:
        raise QuadratureError(
            f"quadrature insufficient: lower-triangular residue {worst:.3e} "
            f"exceeds {_VANISH_RTOL:.0e} * ||M|| = {_VANISH_RTOL * norm:.3e}"
        )
    mat[lower] = 0.0
    return DerivativeMatrix(n=n, matrix=mat)


def _derivative_operators(mat: np.ndarray, n: int, k: int) -> list[np.ndarray]:
    """[D_1, ..., D_k]: D_j maps degree-n coefficients to those of the j-th derivative."""
    ops = []
    cur = np.eye(n + 1)
    for j in range(1, k + 1):
        rows = n - j + 1
        if rows <= 0:
            ops.append(np.zeros((0, n + 1)))
            cur = ops[-1]
            continue
        cur = mat[:rows, : rows + 1] @ cur if j > 1 else mat[:rows, : rows + 1]
        ops.append(cur)
    return ops


def sobolev_forms(spec: WeightSpec, sob: SobolevSpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gram matrices (A, B) of ||P'||_W^2 and ||P||_W^2 in the orthonormal basis."""
    if n < 1:
        raise WeightError("n must be >= 1")
    _check_order(sob)
    rec, rule = basis_for(spec, n)
    mat = derivative_matrix(rec, rule, n).matrix
    return _forms_from_matrix(mat, sob, n)


def _forms_from_matrix(mat: np.ndarray, sob: SobolevSpec, n: int):
    k = sob.k
    ops = _derivative_operators(mat, n, k + 1)
    b = np.eye(n + 1)
    for j in range(1, k + 1):
        lam = sob.lambdas[j - 1]
        if lam:
            b = b + lam * ops[j - 1].T @ ops[j - 1]
    a = ops[0].T @ ops[0]
    for j in range(1, k + 1):
        lam = sob.lambdas[j - 1]
        if lam:
            a = a + lam * ops[j].T @ ops[j]
    return 0.5 * (a + a.T), 0.5 * (b + b.T)


def _check_order(sob: SobolevSpec, max_order: int = MAX_SOBOLEV_ORDER):
    if sob.k > max_order:
        raise WeightError(
            f"derivative order k={sob.k} beyond the supported cap {max_order} "
            "(higher orders are numerically fragile at these degrees)"
        )


def _l2_norms(rec, rule, coeffs, n, order):
    """Weighted L2 norms squared of P, P', ..., P^(order) for P = sum coeffs p_k."""
    stack = eval_derivative_table(rec, rule.nodes, n, order=order)
    out = []
    for d in range(order + 1):
        vals = coeffs @ stack[d]
        out.append(float(np.dot(rule.weights, vals * vals)))
    return out


def sharp_constant_l2(spec: WeightSpec, n: int) -> SharpResult:
    """Sharp constant of ||P'|| <= C ||P|| over P_n in the weighted L2 norm."""
    if n < 1:
        raise WeightError("n must be >= 1")
    rec, rule = basis_for(spec, n)
    mat = derivative_matrix(rec, rule, n).matrix
    sigma, coeffs = svd_largest(mat)
    norms = _l2_norms(rec, rule, coeffs, n, order=1)
    achieved = math.sqrt(norms[1] / norms[0])
    residual = abs(achieved - sigma) / sigma
    if residual > RESIDUAL_TOL:
        raise QuadratureError(
            f"sharp-constant residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}; "
            "quadrature or eigensolver failure"
        )
    return SharpResult(n=n, value=sigma, coeffs=coeffs, residual=residual, weight=spec)


def sharp_constant_sobolev(spec: WeightSpec, sob: SobolevSpec, n: int) -> SharpResult:
    """Sharp constant of ||P'||_W <= C ||P||_W over P_n in the weighted Sobolev norm."""
    if n < 1:
        raise WeightError("n must be >= 1")
    _check_order(sob)
    rec, rule = basis_for(spec, n)
    mat = derivative_matrix(rec, rule, n).matrix
    a, b = _forms_from_matrix(mat, sob, n)
    theta, coeffs = gen_sym_eigen_max(a, b)
    value = math.sqrt(max(theta, 0.0))

    norms = _l2_norms(rec, rule, coeffs, n, order=sob.k + 1)
    den = norms[0] + sum(lam * norms[j + 1] for j, lam in enumerate(sob.lambdas))
    num = norms[1] + sum(lam * norms[j + 2] for j, lam in enumerate(sob.lambdas))
    achieved = math.sqrt(num / den)
    residual = abs(achieved - value) / value
    if residual > RESIDUAL_TOL:
        raise QuadratureError(
            f"sharp-constant residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}; "
            "quadrature or eigensolver failure"
        )
    return SharpResult(
        n=n, value=value, coeffs=coeffs, residual=residual, weight=spec, lambdas=sob.lambdas
    )


def mirsky_bound(spec: WeightSpec, n: int) -> float:
    """Upper bound (sum_nu nu ||p_nu'||^2)^(1/2) for the sharp L2 constant."""
    if n < 1:
        raise WeightError("n must be >= 1")
    rec, rule = basis_for(spec, n)
    mat = derivative_matrix(rec, rule, n).matrix
    col_sq = np.sum(mat * mat, axis=0)
    return float(np.sqrt(np.dot(np.arange(n + 1), col_sq)))


class ExtremalPolynomial:
    """Evaluator for the extremal polynomial of a SharpResult, with its report."""

    def __init__(self, res: SharpResult, rec: RecurrenceTable):
        if rec.n_max < res.n + 1:
            raise WeightError(f"recurrence table too short: need n_max >= {res.n + 1}")
        self.result = res
        self._rec = rec
        rule = gauss_rule(rec, res.n + 1)
        order = len(res.lambdas) + 1 if res.lambdas else 1
        norms = _l2_norms(rec, rule, res.coeffs, res.n, order=order)
        if res.lambdas:
            den = norms[0] + sum(lam * norms[j + 1] for j, lam in enumerate(res.lambdas))
            num = norms[1] + sum(lam * norms[j + 2] for j, lam in enumerate(res.lambdas))
        else:
            den, num = norms[0], norms[1]
        self.achieved_ratio = math.sqrt(num / den)
        self.residual = abs(self.achieved_ratio - res.value) / res.value

    def __call__(self, x):
        from .orthopoly import eval_orthonormal

        table = eval_orthonormal(self._rec, x, self.result.n)
        return self.result.coeffs @ table

    @property
    def report(self) -> dict:
        return {
            "n": self.result.n,
            "value": self.result.value,
            "achieved_ratio": self.achieved_ratio,
            "residual": self.residual,
        }


def extremal_polynomial(res: SharpResult, rec: RecurrenceTable) -> ExtremalPolynomial:
    """Wrap a SharpResult as a callable polynomial plus an achievement report."""
    return ExtremalPolynomial(res, rec)

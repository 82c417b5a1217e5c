"""Polynomial capacity inf_{x>0, x∈K} f(x)/x^α by multi-start local descent.

The search runs in log coordinates, minimizing log f(eʸ) − ⟨α, y⟩ with an
Armijo backtracking line search. Steps that leave the feasible region (f ≤ 0,
or eʸ outside the cone) are rejected. When f is homogeneous and Σα = deg f the
objective is constant along 𝟙, so gradients are projected onto Σyᵢ = 0.

For mixed-sign f this is not a convex program; the best local value is an
upper bound on the capacity and every result is labelled as such.
"""

import logging
import math
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from . import config
from .errors import InfeasibleError, InvalidInputError, NumericalError
from .hyperbolic import (
    cone_contains,
    direction_for_matrix,
    hyperbolicity_cone,
    orthant,
    sample_interior,
)
from .models import CapacityAudit, CapacityResult, ConeSpec, ConeVariant
from .numeric import FloatArray, Rows, as_rows, check_length, require_square
from .permanent import generating_polynomial
from .poly import MultiPoly, coefficient, evaluate, gradient_at
from .workers import parallel_map

logger = logging.getLogger(__name__)

ARMIJO = 1e-4
MIN_STEP = 1e-20
MAX_STEP = 1e6
GRADIENT_FLOOR = 1e-12
AUDIT_SLACK = 1e-9


class CapacityConfig(BaseModel):
    starts: int = Field(16, ge=1)
    max_iter: int = Field(500, ge=1)
    tol: float = Field(1e-10, gt=0)
    seed: Optional[int] = None

    model_config = ConfigDict(frozen=True)


class _Objective:
    def __init__(self, f: MultiPoly, alpha: FloatArray, K: ConeSpec) -> None:
        self.f = f.to_float()
        self.alpha = alpha
        self.cone = K
        self.project = f.is_homogeneous and math.isclose(
            float(alpha.sum()), f.degree, rel_tol=0, abs_tol=1e-12
        )

    def feasible(self, x: FloatArray) -> bool:
        if not np.all(np.isfinite(x)) or np.any(x <= 0):
            return False
        if self.cone.variant is ConeVariant.ORTHANT:
            return True
        return cone_contains(self.cone, list(x))

    def value(self, y: FloatArray) -> Optional[float]:
        """log f(eʸ) − ⟨α, y⟩, or None outside the feasible region."""
        with np.errstate(over="ignore"):
            x = np.exp(y)
        if not self.feasible(x):
            return None
        fx = float(evaluate(self.f, list(x)))
        if not math.isfinite(fx) or fx <= 0:
            return None
        return math.log(fx) - float(self.alpha @ y)

    def gradient(self, y: FloatArray) -> FloatArray:
        x = np.exp(y)
        fx = float(evaluate(self.f, list(x)))
        grad = x * gradient_at(self.f, list(x)) / fx - self.alpha
        if not np.all(np.isfinite(grad)):
            raise NumericalError("non-finite gradient during capacity descent")
        if self.project:
            grad = grad - grad.mean()
        return grad


def _descend(
    objective: _Objective, y0: FloatArray, max_iter: int, tol: float
) -> Tuple[FloatArray, float, int, bool]:
    y = y0 - y0.mean() if objective.project else y0
    current = objective.value(y)
    if current is None:
        raise InfeasibleError("descent started outside the feasible region")
    step = 1.0
    for iteration in range(1, max_iter + 1):
        grad = objective.gradient(y)
        norm2 = float(grad @ grad)
        if math.sqrt(norm2) < GRADIENT_FLOOR:
            return y, current, iteration, True
        t = step
        accepted: Optional[Tuple[FloatArray, float]] = None
        while t >= MIN_STEP:
            candidate = y - t * grad
            value = objective.value(candidate)
            if value is not None and value <= current - ARMIJO * t * norm2:
                accepted = (candidate, value)
                break
            t /= 2
        if accepted is None:
            return y, current, iteration, True
        change = current - accepted[1]
        y, current = accepted
        step = min(2 * t, MAX_STEP)
        if abs(change) <= tol * max(1.0, abs(current)):
            return y, current, iteration, True
    return y, current, max_iter, False


def _starts(
    objective: _Objective, K: ConeSpec, n: int, cfg: CapacityConfig
) -> Tuple[List[FloatArray], int]:
    seed = config.resolve_seed(cfg.seed)
    rng = np.random.default_rng(seed)
    candidates = [np.zeros(n)] + list(rng.standard_normal((cfg.starts - 1, n)))
    starts = [y for y in candidates if objective.value(y) is not None]
    if not starts and K.variant is not ConeVariant.ORTHANT:
        logger.warning("no feasible log-normal start, sampling the cone instead")
        for x in sample_interior(K, 4 * cfg.starts, rng):
            if np.all(x > 0):
                y = np.log(x)
                if objective.value(y) is not None:
                    starts.append(y)
            if len(starts) == cfg.starts:
                break
    return starts, seed


def capacity_estimate(
    f: MultiPoly,
    alpha: Sequence[Any],
    K: Optional[ConeSpec] = None,
    cfg: Optional[CapacityConfig] = None,
) -> CapacityResult:
    """Best local minimum of f(x)/x^α over the positive orthant intersected with K."""
    check_length(alpha, f.nvars, "alpha")
    weights = np.asarray([float(a) for a in alpha], dtype=np.float64)
    if np.any(weights < 0):
        raise InvalidInputError("alpha must be non-negative")
    cone = K if K is not None else orthant(f.nvars)
    if cone.n != f.nvars:
        raise InvalidInputError(f"cone has dimension {cone.n}, polynomial {f.nvars}")
    cfg = cfg if cfg is not None else CapacityConfig()
    objective = _Objective(f, weights, cone)
    starts, seed = _starts(objective, cone, f.nvars, cfg)
    if not starts:
        logger.warning("capacity problem is infeasible (seed=%d)", seed)
        return CapacityResult(
            value=math.inf,
            log_value=math.inf,
            argmin=(),
            iterations=0,
            starts=0,
            converged=False,
            feasible=False,
        )
    runs = parallel_map(
        lambda y0: _descend(objective, y0, cfg.max_iter, cfg.tol), starts
    )
    for index, (_, value, iterations, converged) in enumerate(runs):
        logger.debug(
            "start %d: log value %.12g after %d iterations (converged=%s)",
            index,
            value,
            iterations,
            converged,
        )
    best = min(range(len(runs)), key=lambda i: (runs[i][1], i))
    y, log_value, iterations, converged = runs[best]
    x = np.exp(y)
    value = float(evaluate(objective.f, list(x))) / float(np.prod(x**weights))
    logger.info(
        "capacity upper bound %.12g from %d starts (seed=%d)", value, len(starts), seed
    )
    return CapacityResult(
        value=value,
        log_value=log_value,
        argmin=tuple(float(v) for v in x),
        iterations=sum(r[2] for r in runs),
        starts=len(starts),
        converged=converged,
        feasible=True,
    )


def capacity_bounds_audit(
    f: MultiPoly, mu: Sequence[int], cfg: Optional[CapacityConfig] = None
) -> CapacityAudit:
    """Check f(𝟙) ≥ Cap_μ(f) ≥ f_μ for a polynomial with nonnegative coefficients."""
    if any(term.coefficient < 0 for term in f.terms()):
        raise InvalidInputError("the capacity audit needs nonnegative coefficients")
    f_mu = coefficient(f, mu)
    if f_mu == 0:
        raise InvalidInputError(f"{tuple(mu)} is not in the support of f")
    f_ones = evaluate(f, [1] * f.nvars)
    result = capacity_estimate(f, mu, orthant(f.nvars), cfg)
    violations: List[str] = []
    top, bottom = float(f_ones), float(f_mu)
    if result.value > top + AUDIT_SLACK * max(1.0, abs(top)):
        violations.append(f"capacity {result.value} exceeds f(1) = {top}")
    if result.value < bottom - AUDIT_SLACK * max(1.0, abs(bottom)):
        violations.append(f"capacity {result.value} is below the coefficient {bottom}")
    return CapacityAudit(
        f_at_ones=f_ones,
        capacity=result,
        coefficient=f_mu,
        violations=tuple(violations),
    )


def van_der_waerden_bound(n: int) -> Fraction:
    """n!/nⁿ, the minimum permanent over n×n doubly stochastic matrices."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    return Fraction(math.factorial(n), n**n)


def uniform_doubly_stochastic(n: int) -> Rows:
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    return [[Fraction(1, n)] * n for _ in range(n)]


def sinkhorn_normalize(
    A: Any, tol: float = 1e-12, max_iter: int = 10_000
) -> FloatArray:
    """Alternate row and column scaling until both sums are within tol of 1."""
    rows, _ = as_rows(A, False)
    require_square(rows)
    m = np.asarray(rows, dtype=np.float64)
    if np.any(m < 0):
        raise InvalidInputError("Sinkhorn scaling needs a nonnegative matrix")
    if np.any(m.sum(axis=1) == 0) or np.any(m.sum(axis=0) == 0):
        raise InfeasibleError("a zero row or column cannot be scaled to stochastic")
    for _ in range(max_iter):
        m = m / m.sum(axis=1, keepdims=True)
        m = m / m.sum(axis=0, keepdims=True)
        if np.max(np.abs(m.sum(axis=1) - 1)) <= tol:
            return m
    raise NumericalError(f"Sinkhorn scaling did not converge in {max_iter} rounds")


def permanent_capacity(A: Any, cfg: Optional[CapacityConfig] = None) -> CapacityResult:
    """Cap_𝟙 of f_A over the orthant intersected with a hyperbolicity cone of f_A.

    The cone direction is the first of 𝟙, e and −e (e from Aᵀe = 𝟙) at which
    f_A is nonzero, with f_A negated when it is negative there.
    """
    rows, _ = as_rows(A)
    n = require_square(rows)
    f = generating_polynomial(rows)
    ones = [1] * n
    candidates: List[List[Any]] = [ones]
    try:
        e = direction_for_matrix(rows)
        candidates.extend([e, [-v for v in e]])
    except InfeasibleError:
        logger.info("no generating direction, only 𝟙 is tried")
    for direction in candidates:
        value = evaluate(f, direction)
        if value == 0:
            continue
        target = f if value > 0 else -f
        cone = hyperbolicity_cone(target, direction, validate=False)
        return capacity_estimate(target, ones, cone, cfg)
    raise InfeasibleError("f_A vanishes at every candidate cone direction")

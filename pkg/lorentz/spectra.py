"""Inertia of symmetric matrices and the quadratic-form tests behind log-concavity."""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, NumericalError
from .models import LorentzClass, RayleighViolation, SignatureReport, SlcReport
from .numeric import (
    ZERO_BAND,
    FloatArray,
    Scalar,
    SymMatrix,
    check_length,
    is_exact_scalar,
    is_exact_vector,
    to_scalar,
    to_vector,
)
from .poly import MultiPoly, evaluate, multi_indices, partial_derivative

logger = logging.getLogger(__name__)

RAYLEIGH_SLACK = 1e-9


def zero_band(Q: SymMatrix) -> float:
    return ZERO_BAND * max(1.0, Q.frobenius_norm())


def _eigvalsh(matrix: FloatArray) -> FloatArray:
    if matrix.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.eigvalsh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}")


def eigen_signature(Q: SymMatrix, tol: Optional[float] = None) -> SignatureReport:
    tau = zero_band(Q) if tol is None else tol
    eigenvalues = _eigvalsh(Q.to_numpy())
    n_pos = int(np.sum(eigenvalues > tau))
    n_neg = int(np.sum(eigenvalues < -tau))
    return SignatureReport(
        n_pos=n_pos,
        n_zero=Q.n - n_pos - n_neg,
        n_neg=n_neg,
        eigenvalues=tuple(float(v) for v in eigenvalues),
        tolerance=tau,
    )


def classify(report: SignatureReport) -> LorentzClass:
    if report.n_pos == 0:
        return LorentzClass.NEGATIVE_SEMIDEFINITE
    if report.n_pos == 1:
        if report.n_zero == 0:
            return LorentzClass.LORENTZIAN_STRICT
        return LorentzClass.LORENTZIAN
    return LorentzClass.NOT_LORENTZIAN


def lorentz_class(Q: SymMatrix, tol: Optional[float] = None) -> LorentzClass:
    return classify(eigen_signature(Q, tol))


def congruence(Q: SymMatrix, M: Any) -> SymMatrix:
    """MᵀQM."""
    m = np.asarray(M, dtype=np.float64)
    if m.shape[0] != Q.n:
        raise InvalidInputError(
            f"congruence matrix has {m.shape[0]} rows, expected {Q.n}"
        )
    return SymMatrix(m.T @ Q.to_numpy() @ m, exact=False, symmetrize=True)


def _matvec(Q: SymMatrix, a: Sequence[Scalar]) -> List[Scalar]:
    out: List[Scalar] = []
    for i in range(Q.n):
        total: Scalar = Fraction(0)
        for j in range(Q.n):
            total = total + Q[i, j] * a[j]
        out.append(total)
    return out


def deflate(Q: SymMatrix, a: Sequence[Any], t: Any = 1) -> SymMatrix:
    """(aᵀQa)·Q − t·(Qa)(Qa)ᵀ."""
    check_length(a, Q.n, "vector")
    exact = Q.exact and is_exact_vector(a) and is_exact_scalar(t)
    av = to_vector(a, exact)
    tt = to_scalar(t, exact)
    if tt < 1:
        raise InvalidInputError(f"deflation parameter must be >= 1, got {t}")
    qa = _matvec(Q, av)
    aqa = sum((x * y for x, y in zip(av, qa)), Fraction(0))
    if aqa <= 0:
        raise InvalidInputError(f"deflation needs aᵀQa > 0, got {float(aqa)}")
    rows = [
        [aqa * Q[i, j] - tt * qa[i] * qa[j] for j in range(Q.n)] for i in range(Q.n)
    ]
    return SymMatrix(rows, exact, symmetrize=not exact)


def deflation_check(Q: SymMatrix, a: Sequence[Any], t: Any = 1) -> bool:
    """True iff (aᵀQa)·Q − t·(Qa)(Qa)ᵀ has no eigenvalue above the zero band."""
    return eigen_signature(deflate(Q, a, t)).n_pos == 0


def complement_restriction(Q: SymMatrix, a: Sequence[Any]) -> SymMatrix:
    """Q restricted to an orthonormal basis of (Qa)^⊥."""
    check_length(a, Q.n, "vector")
    q = Q.to_numpy()
    qa = q @ np.asarray([float(v) for v in a], dtype=np.float64)
    if not np.any(qa):
        raise InvalidInputError(
            "Qa vanishes, its orthogonal complement is the whole space"
        )
    basis = scipy.linalg.null_space(qa.reshape(1, -1))
    return SymMatrix(basis.T @ q @ basis, exact=False, symmetrize=True)


def negative_definite_on_complement(
    Q: SymMatrix, a: Sequence[Any], tol: Optional[float] = None
) -> bool:
    restricted = complement_restriction(Q, a)
    tau = zero_band(Q) if tol is None else tol
    signature = eigen_signature(restricted, tau)
    return signature.n_neg == restricted.n


def slc_equivalence(Q: SymMatrix, a: Sequence[Any]) -> SlcReport:
    report = SlcReport(
        signature_strict=lorentz_class(Q) is LorentzClass.LORENTZIAN_STRICT,
        deflation_semidefinite=deflation_check(Q, a, 1),
        complement_negative_definite=negative_definite_on_complement(Q, a),
    )
    if not report.consistent:
        logger.warning("strict log-concavity criteria disagree: %s", report)
    return report


def rayleigh_check(
    f: MultiPoly, c: float, points: Sequence[Sequence[Any]]
) -> List[RayleighViolation]:
    """Scan ∂^α f·∂^{α+e_i+e_j} f ≤ c·∂^{α+e_i} f·∂^{α+e_j} f at each point.

    α ranges over |α| ≤ deg f − 2 and i ≠ j. Only tuples where ∂^α f,
    ∂^{α+e_i} f and ∂^{α+e_j} f are positive at the point are tested. The
    result is a sample-based verdict over the supplied points.
    """
    n, d = f.nvars, f.degree
    if d < 2:
        return []
    derivatives: Dict[Tuple[int, ...], MultiPoly] = {}

    def derivative(alpha: Tuple[int, ...]) -> MultiPoly:
        if alpha not in derivatives:
            derivatives[alpha] = partial_derivative(f, alpha)
        return derivatives[alpha]

    def bump(alpha: Tuple[int, ...], *indices: int) -> Tuple[int, ...]:
        out = list(alpha)
        for k in indices:
            out[k] += 1
        return tuple(out)

    violations: List[RayleighViolation] = []
    for point in points:
        check_length(point, n, "point")
        values: Dict[Tuple[int, ...], float] = {}

        def value(alpha: Tuple[int, ...]) -> float:
            if alpha not in values:
                values[alpha] = float(evaluate(derivative(alpha), point))
            return values[alpha]

        for alpha in multi_indices(n, d - 2):
            base = value(alpha)
            if base <= 0:
                continue
            for i in range(n):
                left = value(bump(alpha, i))
                if left <= 0:
                    continue
                for j in range(n):
                    if j == i:
                        continue
                    right = value(bump(alpha, j))
                    if right <= 0:
                        continue
                    lhs = base * value(bump(alpha, i, j))
                    rhs = c * (left * right)
                    slack = RAYLEIGH_SLACK * max(abs(lhs), abs(rhs))
                    if math.isfinite(rhs) and lhs - rhs > slack:
                        violations.append(
                            RayleighViolation(
                                point=tuple(float(v) for v in point),
                                alpha=alpha,
                                i=i,
                                j=j,
                                lhs=lhs,
                                rhs=rhs,
                            )
                        )
    logger.debug("rayleigh scan c=%s found %d violations", c, len(violations))
    return violations

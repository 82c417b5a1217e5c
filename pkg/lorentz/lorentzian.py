"""Log-concavity and Lorentzian-signature predicates over convex cones.

Cone-quantified predicates are Monte-Carlo checks: every report carries the
number of chains or samples drawn and the seed that drew them.
"""

import logging
import math
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import InvalidInputError
from .hyperbolic import (
    cone_membership,
    cone_rng,
    hyperbolicity_cone,
    is_hyperbolic,
    nuij_approx,
    sample_interior,
)
from .models import (
    ChainWitness,
    ConeSpec,
    LorentzClass,
    LorentzianReport,
    NuijStep,
    SampledVerdict,
)
from .numeric import Scalar, check_length, close, is_exact_scalar, to_scalar
from .poly import (
    MultiPoly,
    coefficient,
    coefficient_distance,
    directional_derivative,
    evaluate,
    hessian_at,
)
from .spectra import classify, eigen_signature, lorentz_class, slc_equivalence
from .workers import parallel_map

logger = logging.getLogger(__name__)

MAX_WITNESSES = 8
DEFAULT_LINE_SAMPLES = 32


def is_log_concave_at(f: MultiPoly, a: Sequence[Any]) -> bool:
    check_length(a, f.nvars, "point")
    if f.degree < 2:
        return True
    return lorentz_class(hessian_at(f, a)) is not LorentzClass.NOT_LORENTZIAN


def is_strictly_log_concave_at(f: MultiPoly, a: Sequence[Any]) -> bool:
    """Exactly one positive Hessian eigenvalue and no zero ones at a.

    For homogeneous f of degree at least 2 the verdict is cross-checked against
    the deflation and orthogonal-complement criteria; a disagreement is logged.
    """
    check_length(a, f.nvars, "point")
    if evaluate(f, a) <= 0:
        raise InvalidInputError("strict log-concavity needs f(a) > 0")
    if f.degree < 2:
        return False
    Q = hessian_at(f, a)
    strict = lorentz_class(Q) is LorentzClass.LORENTZIAN_STRICT
    if f.is_homogeneous:
        slc_equivalence(Q, a)
    return strict


def contraction(f: MultiPoly, directions: Sequence[Sequence[Any]]) -> MultiPoly:
    """D_{a_k} … D_{a_1} f."""
    out = f
    for a in directions:
        out = directional_derivative(out, a)
    return out


def _check_chain(f: MultiPoly, chain: np.ndarray) -> Tuple[bool, bool, ChainWitness]:
    quadratic = contraction(f, [list(a) for a in chain[2:]])
    Q = hessian_at(quadratic, [0.0] * f.nvars)
    signature = eigen_signature(Q)
    cls = classify(signature)
    q = Q.to_numpy()
    value = float(chain[0] @ q @ chain[1])
    reasons = []
    if cls is LorentzClass.NOT_LORENTZIAN:
        reasons.append("contracted Hessian has two or more positive eigenvalues")
    if value <= 0:
        reasons.append("full contraction is not positive")
    witness = ChainWitness(
        directions=tuple(tuple(float(v) for v in a) for a in chain),
        inertia=signature.inertia,
        lorentz_class=cls,
        contraction=value,
        reason="; ".join(reasons),
    )
    return not reasons, cls is LorentzClass.LORENTZIAN_STRICT, witness


def lorentzian_over_cone(
    f: MultiPoly,
    K: ConeSpec,
    n_chains: Optional[int] = None,
    seed: Optional[int] = None,
    normalize_sign: bool = False,
) -> LorentzianReport:
    """Sampled Lorentzian-signature check of f over int K.

    Each chain draws d directions from int K, contracts f along the last d − 2
    of them and classifies the Hessian of the resulting quadratic. The chain
    passes when that Hessian has at most one positive eigenvalue and the full
    contraction D_{a_1} … D_{a_d} f is positive. ``strict`` additionally asks
    every Hessian to be nonsingular with exactly one positive eigenvalue.
    """
    if f.nvars != K.n:
        raise InvalidInputError(f"polynomial has {f.nvars} variables, cone has {K.n}")
    if not f.is_homogeneous:
        raise InvalidInputError("Lorentzian checks require a homogeneous polynomial")
    chains = config.resolve_chains(n_chains)
    rng, seed = cone_rng(K, seed)
    if f.is_zero:
        return LorentzianReport(holds=True, strict=False, n_chains=0, seed=seed)

    fast = f.to_float()
    negated = False
    d = f.degree
    if normalize_sign:
        anchor = sample_interior(K, 1, rng)[0]
        if evaluate(fast, list(anchor)) < 0:
            logger.warning("polynomial is negative on the cone, checking -f instead")
            fast, negated = -fast, True

    if d < 2:
        points = sample_interior(K, chains, rng)
        values = [
            float(evaluate(contraction(fast, [list(p)] * d), [0.0] * f.nvars))
            for p in points
        ]
        holds = all(v > 0 for v in values)
        logger.info("degree %d Lorentzian check holds=%s (seed=%d)", d, holds, seed)
        return LorentzianReport(
            holds=holds, strict=False, n_chains=chains, seed=seed, negated=negated
        )

    # all randomness is drawn before dispatch
    directions = sample_interior(K, chains * d, rng).reshape(chains, d, K.n)
    results = parallel_map(lambda chain: _check_chain(fast, chain), list(directions))
    failures = [witness for ok, _, witness in results if not ok]
    holds = not failures
    strict = holds and all(is_strict for _, is_strict, _ in results)
    logger.info(
        "Lorentzian check over %s cone: holds=%s strict=%s chains=%d seed=%d",
        K.variant.value,
        holds,
        strict,
        chains,
        seed,
    )
    return LorentzianReport(
        holds=holds,
        strict=strict,
        n_chains=chains,
        seed=seed,
        witnesses=tuple(failures[:MAX_WITNESSES]),
        negated=negated,
    )


def k_stable_check(
    f: MultiPoly,
    K: ConeSpec,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    line_samples: Optional[int] = None,
) -> SampledVerdict:
    """Sampled K-stability: f is hyperbolic with respect to every point of int K.

    Besides hyperbolicity at each sampled y, f must keep one sign over the
    samples and every sample must lie in the hyperbolicity cone of the first.
    """
    if f.nvars != K.n:
        raise InvalidInputError(f"polynomial has {f.nvars} variables, cone has {K.n}")
    samples = config.resolve_samples(n_samples)
    lines = DEFAULT_LINE_SAMPLES if line_samples is None else line_samples
    rng, seed = cone_rng(K, seed)
    points = sample_interior(K, samples, rng)
    line_seeds = rng.integers(0, 2**31 - 1, size=samples)
    fast = f.to_float()

    def fail(point: np.ndarray, reason: str) -> SampledVerdict:
        logger.info("K-stability fails: %s (seed=%d)", reason, seed)
        return SampledVerdict(
            holds=False,
            n_samples=samples,
            seed=seed,
            witness=tuple(float(v) for v in point),
            reason=reason,
        )

    if samples == 0:
        return SampledVerdict(holds=True, n_samples=0, seed=seed)
    anchor = list(points[0])
    anchor_sign = np.sign(evaluate(fast, anchor))
    for point, line_seed in zip(points, line_seeds):
        y = list(point)
        value = evaluate(fast, y)
        if value == 0:
            return fail(point, "f vanishes at an interior point")
        if np.sign(value) != anchor_sign:
            return fail(point, "f changes sign inside the cone")
        if not cone_membership(fast, anchor, y):
            return fail(point, "sample leaves the cone of the first sample")
        if not is_hyperbolic(fast, y, lines, int(line_seed)):
            return fail(point, "f is not hyperbolic with respect to the sample")
    logger.info("K-stability holds on %d samples (seed=%d)", samples, seed)
    return SampledVerdict(holds=True, n_samples=samples, seed=seed)


def m_convex_support(f: MultiPoly, symmetric: bool = False) -> bool:
    """Brute-force exchange property over supp(f)."""
    support = set(f.support)
    n = f.nvars

    def shifted(alpha: Tuple[int, ...], minus: int, plus: int) -> Tuple[int, ...]:
        out = list(alpha)
        out[minus] -= 1
        out[plus] += 1
        return tuple(out)

    for alpha in support:
        for beta in support:
            for i in range(n):
                if alpha[i] <= beta[i]:
                    continue
                found = False
                for j in range(n):
                    if alpha[j] >= beta[j]:
                        continue
                    if shifted(alpha, i, j) not in support:
                        continue
                    if symmetric and shifted(beta, j, i) not in support:
                        continue
                    found = True
                    break
                if not found:
                    return False
    return True


def nuij_closure(
    f: MultiPoly,
    j: int,
    s_values: Sequence[Any],
    n_chains: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[NuijStep]:
    """Strict Lorentzian reports for Nuij perturbations of f at shrinking s.

    Each perturbation F is checked on its own hyperbolicity cone at e_j, after
    flipping its sign when F(e_j) < 0.
    """
    unit = [int(k == j) for k in range(f.nvars)]
    steps: List[NuijStep] = []
    for s in s_values:
        perturbed = nuij_approx(f, j, s)
        target = -perturbed if evaluate(perturbed, unit) < 0 else perturbed
        cone = hyperbolicity_cone(target, unit, validate=False)
        report = lorentzian_over_cone(target, cone, n_chains, seed)
        distance = coefficient_distance(perturbed, f)
        logger.debug("nuij s=%s distance=%.3e strict=%s", s, distance, report.strict)
        steps.append(NuijStep(s=float(s), distance=distance, report=report))
    return steps


def is_log_concave_sequence(values: Sequence[Any], ultra: bool = False) -> bool:
    """Nonnegative, no internal zeros and a_k² ≥ a_{k−1}·a_{k+1}.

    With ``ultra`` the test runs on a_k / C(m, k), m = len(values) − 1.
    """
    if any(v < 0 for v in values):
        return False
    nonzero = [k for k, v in enumerate(values) if v != 0]
    if nonzero and nonzero[-1] - nonzero[0] + 1 != len(nonzero):
        return False
    m = len(values) - 1
    exact = all(is_exact_scalar(v) for v in values)
    seq: List[Scalar] = [to_scalar(v, exact) for v in values]
    if ultra:
        seq = [v / math.comb(m, k) for k, v in enumerate(seq)]
    for k in range(1, m):
        square, cross = seq[k] * seq[k], seq[k - 1] * seq[k + 1]
        if square < cross and not close(square, cross):
            return False
    return True


def bivariate_coefficients(f: MultiPoly) -> List[Scalar]:
    """[c_{(d,0)}, c_{(d−1,1)}, …, c_{(0,d)}] of a homogeneous bivariate f."""
    if f.nvars != 2 or not f.is_homogeneous:
        raise InvalidInputError("expected a homogeneous polynomial in two variables")
    d = f.degree
    return [coefficient(f, (d - k, k)) for k in range(d + 1)]


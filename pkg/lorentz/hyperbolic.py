"""Hyperbolicity tests, hyperbolicity cones and the perturbations that act on them.

Realness of t ↦ f(x + te) is decided from companion-matrix eigenvalues. Exact
coefficient vectors are first split into square-free factors with sympy, so a
repeated root is found once per factor and reported with its multiplicity.
Float coefficient vectors are clustered instead: a group of nearby roots counts
as real only when its centroid is real and its spread is no larger than
rounding can produce around a real root of that multiplicity.
"""

import logging
from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize
import sympy

from . import config
from .errors import InfeasibleError, InvalidInputError, NumericalError
from .models import ConeSpec, ConeVariant, RootProfile, SampledVerdict
from .numeric import (
    FloatArray,
    Scalar,
    as_rows,
    check_length,
    frobenius_norm,
    inverse,
    is_exact_scalar,
    is_exact_vector,
    require_square,
    solve_exact,
    to_scalar,
    to_vector,
    transpose,
)
from .poly import (
    MultiPoly,
    compose_linear,
    directional_derivative,
    evaluate,
    partial_derivative,
    restrict_line,
)
from .workers import parallel_map

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = 1e-8
CLUSTER_RADIUS = 2e-2
SPREAD_FACTOR = 4.0
FLOAT_EPS = float(np.finfo(np.float64).eps)
DIRECTION_RESIDUAL = 1e-9
GENERATOR_RESIDUAL = 1e-9

# rejection sampling of hyperbolicity cones
SAMPLE_ATTEMPTS = 200
SHRINK_AFTER = 8


# roots


def _strip(coeffs: Sequence[Any]) -> List[Any]:
    start = 0
    while start < len(coeffs) and coeffs[start] == 0:
        start += 1
    return list(coeffs[start:])


def _companion_roots(coeffs: Sequence[float]) -> np.ndarray:
    monic = np.asarray(coeffs[1:], dtype=np.float64) / float(coeffs[0])
    d = monic.size
    if d == 0:
        return np.zeros(0, dtype=np.complex128)
    companion = np.zeros((d, d))
    companion[0, :] = -monic
    companion[1:, :-1] = np.eye(d - 1)
    try:
        return np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"companion eigenvalues did not converge: {exc}")


def _exact_roots(coeffs: Sequence[Fraction]) -> List[complex]:
    t = sympy.Symbol("t")
    poly = sympy.Poly.from_list(
        [sympy.Rational(c.numerator, c.denominator) for c in coeffs], t
    )
    _, factors = poly.sqf_list()
    roots: List[complex] = []
    for factor, multiplicity in factors:
        simple = _companion_roots([float(c) for c in factor.all_coeffs()])
        roots.extend(complex(r) for r in simple for _ in range(multiplicity))
    return roots


def _perturbation_radius(
    monic: np.ndarray, centre: complex, others: Sequence[complex], m: int
) -> float:
    """Spread within which float roots cannot tell an m-fold real root apart.

    With p(t) = (t − s)^m q(t), a backward error err = d·ε·Σ|a_k||s|^k / |q(s)|
    moves the roots by about err^(1/m), and separated roots inside a cluster of
    width δ pick up imaginary parts near err / δ^(m−1). The radius covers both
    up to the width where the latter falls under ROOT_TOLERANCE.
    """
    s = abs(centre)
    scale = float(np.sum(np.abs(monic) * s ** np.arange(monic.size - 1, -1, -1)))
    gap = float(np.prod([abs(centre - r) for r in others])) if others else 1.0
    err = (monic.size - 1) * FLOAT_EPS * scale / max(gap, FLOAT_EPS)
    crossover = (err / (ROOT_TOLERANCE * (1 + s))) ** (1.0 / (m - 1))
    return float(SPREAD_FACTOR * max(err ** (1.0 / m), crossover))


def _cluster(roots: Sequence[complex], monic: np.ndarray) -> List[complex]:
    """Treat nearby roots as real when rounding explains their imaginary parts.

    A group is accepted only when its centroid is real within ROOT_TOLERANCE and
    its spread is within the perturbation radius for its size; accepted members
    keep their real parts. Any other group keeps its raw roots.
    """
    groups: List[List[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for group in groups:
            if any(abs(r - s) <= CLUSTER_RADIUS * (1 + abs(s)) for s in group):
                group.append(r)
                break
        else:
            groups.append([r])
    out: List[complex] = []
    for group in groups:
        m = len(group)
        if m == 1:
            out.append(group[0])
            continue
        centroid = sum(group) / m
        others = [r for g in groups if g is not group for r in g]
        spread = max(abs(r - centroid) for r in group)
        real_centre = abs(centroid.imag) <= ROOT_TOLERANCE * (1 + abs(centroid))
        if real_centre and spread <= _perturbation_radius(monic, centroid, others, m):
            out.extend(complex(r.real, 0.0) for r in group)
        else:
            out.extend(group)
    return out


def real_root_profile(coeffs: Sequence[Any]) -> RootProfile:
    """Roots of a univariate polynomial given highest degree first."""
    trimmed = _strip(coeffs)
    if not trimmed:
        raise InvalidInputError("the zero polynomial has no root profile")
    if is_exact_vector(trimmed):
        roots = _exact_roots([Fraction(c) for c in to_vector(trimmed, True)])
    else:
        floats = [float(c) for c in trimmed]
        monic = np.asarray(floats, dtype=np.float64) / floats[0]
        roots = _cluster([complex(r) for r in _companion_roots(floats)], monic)
    ratio = max((abs(r.imag) / (1 + abs(r)) for r in roots), default=0.0)
    all_real = ratio <= ROOT_TOLERANCE
    all_negative = all_real and all(
        r.real < -ROOT_TOLERANCE * (1 + abs(r)) for r in roots
    )
    return RootProfile(
        roots=tuple(sorted(roots, key=lambda z: (z.real, z.imag))),
        max_imag_ratio=ratio,
        all_real=all_real,
        all_negative=all_negative,
    )


def interlaces(g: Sequence[Any], f: Sequence[Any]) -> bool:
    """True iff the roots of g weakly interlace the roots of f."""
    g_trim, f_trim = _strip(g), _strip(f)
    if not g_trim or not f_trim or len(g_trim) != len(f_trim) - 1:
        raise InvalidInputError("interlacing needs deg g = deg f - 1")
    g_profile, f_profile = real_root_profile(g_trim), real_root_profile(f_trim)
    if not (g_profile.all_real and f_profile.all_real):
        raise InvalidInputError("interlacing is only defined for real-rooted inputs")
    alpha, beta = f_profile.real_roots, g_profile.real_roots

    def at_most(a: float, b: float) -> bool:
        return a <= b + ROOT_TOLERANCE * (1 + max(abs(a), abs(b)))

    return all(
        at_most(alpha[i], beta[i]) and at_most(beta[i], alpha[i + 1])
        for i in range(len(beta))
    )


# hyperbolicity


def _require_direction(f: MultiPoly, e: Sequence[Any]) -> Scalar:
    check_length(e, f.nvars, "direction")
    if not f.is_homogeneous:
        raise InvalidInputError("hyperbolicity requires a homogeneous polynomial")
    value = evaluate(f, e)
    if value == 0:
        raise InvalidInputError("f vanishes at the direction e")
    return value


def _sampled(
    check: Callable[[FloatArray], bool], points: FloatArray, seed: int, what: str
) -> SampledVerdict:
    outcomes = parallel_map(check, list(points))
    for point, ok in zip(points, outcomes):
        if not ok:
            logger.info("%s failed at a sampled point (seed=%d)", what, seed)
            return SampledVerdict(
                holds=False,
                n_samples=len(points),
                seed=seed,
                witness=tuple(float(v) for v in point),
                reason=f"{what} fails at the witness",
            )
    logger.info("%s holds on %d samples (seed=%d)", what, len(points), seed)
    return SampledVerdict(holds=True, n_samples=len(points), seed=seed)


def is_hyperbolic(
    f: MultiPoly,
    e: Sequence[Any],
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> SampledVerdict:
    """Monte-Carlo hyperbolicity test along standard Gaussian points."""
    _require_direction(f, e)
    samples = config.resolve_samples(n_samples)
    seed = config.resolve_seed(seed)
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((samples, f.nvars))
    fast = f.to_float()
    direction = [float(v) for v in e]

    def real_rooted(x: FloatArray) -> bool:
        return real_root_profile(restrict_line(fast, list(x), direction)).all_real

    return _sampled(real_rooted, points, seed, "hyperbolicity")


def cone_membership(
    f: MultiPoly, e: Sequence[Any], x: Sequence[Any], closed: bool = False
) -> bool:
    """x ∈ Λ₊₊(f, e), or its closure with ``closed=True``."""
    profile = real_root_profile(restrict_line(f, x, e))
    if not profile.all_real:
        return False
    if closed:
        return all(r.real <= ROOT_TOLERANCE * (1 + abs(r)) for r in profile.roots)
    return profile.all_negative


def direction_for_matrix(A: Any) -> List[Scalar]:
    """Solve Aᵀe = 𝟙, so that Σ eᵢAᵢ = I for the diagonal coefficient matrices."""
    rows, exact = as_rows(A)
    n = require_square(rows)
    if exact:
        solution = solve_exact(transpose(rows), [Fraction(1)] * n)
        if solution is None:
            raise InfeasibleError(
                "no generating direction: 𝟙 is not in the range of Aᵀ"
            )
        return list(solution)
    matrix = np.asarray(rows, dtype=np.float64)
    ones = np.ones(n)
    e, *_ = np.linalg.lstsq(matrix.T, ones, rcond=None)
    residual = float(np.linalg.norm(matrix.T @ e - ones))
    scale = max(1.0, frobenius_norm(rows) * float(np.linalg.norm(e)))
    if residual > DIRECTION_RESIDUAL * scale:
        raise InfeasibleError(
            f"no generating direction: least-squares residual {residual:.3e}"
        )
    return [float(v) for v in e]


# perturbations and relaxations


def nuij_step(f: MultiPoly, i: int, j: int, s: Any) -> MultiPoly:
    """(1 + s·x_i·∂_j) f."""
    n = f.nvars
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidInputError(f"indices ({i}, {j}) out of range for {n} variables")
    if i == j:
        raise InvalidInputError("the Nuij operator needs i != j")
    exact = f.exact and is_exact_scalar(s)
    step = to_scalar(s, exact)
    if step == 0:
        return f
    unit = tuple(int(k == j) for k in range(n))
    shift = MultiPoly.variable(i, n, exact) * partial_derivative(f, unit)
    return f + shift.scale(step)


def nuij_approx(f: MultiPoly, j: int, s: Any) -> MultiPoly:
    """Apply the (i, j) Nuij step deg f times for every i != j."""
    if not f.is_homogeneous:
        raise InvalidInputError("Nuij approximation requires a homogeneous polynomial")
    if not 0 <= j < f.nvars:
        raise InvalidInputError(f"index {j} out of range for {f.nvars} variables")
    out = f
    for i in range(f.nvars):
        if i == j:
            continue
        for _ in range(f.degree):
            out = nuij_step(out, i, j, s)
    return out


def derivative_relaxation(f: MultiPoly, e: Sequence[Any], m: int) -> MultiPoly:
    """D_e^(m) f."""
    if m < 0:
        raise InvalidInputError(f"derivative order must be non-negative, got {m}")
    out = f
    for _ in range(m):
        out = directional_derivative(out, e)
    return out


def relaxation_inclusion_check(
    f: MultiPoly,
    e: Sequence[Any],
    k: int,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> SampledVerdict:
    """Sampled Λ₊₊(f, e) ⊆ Λ₊(D_e^(m) f, e) for 1 ≤ m ≤ k."""
    if k < 1 or k >= f.degree:
        raise InvalidInputError(
            f"relaxation order k={k} must satisfy 1 <= k < {f.degree}"
        )
    # the cone only depends on f up to sign
    positive = -f if evaluate(f, e) < 0 else f
    cone = hyperbolicity_cone(positive, e, validate=False)
    seed = config.resolve_seed(seed)
    rng = np.random.default_rng(seed)
    points = sample_interior(cone, config.resolve_samples(n_samples), rng)
    direction = [float(v) for v in e]
    fast = f.to_float()
    relaxations = [derivative_relaxation(fast, direction, m) for m in range(1, k + 1)]

    def included(x: FloatArray) -> bool:
        return all(
            cone_membership(g, direction, list(x), closed=True) for g in relaxations
        )

    return _sampled(included, points, seed, f"derivative relaxation up to order {k}")


def lineality_space(f: MultiPoly) -> List[Tuple[float, ...]]:
    """Orthonormal basis of {x : D_x f ≡ 0}."""
    n = f.nvars
    partials = [
        partial_derivative(f, tuple(int(k == i) for k in range(n))).as_dict()
        for i in range(n)
    ]
    monomials = sorted({exp for p in partials for exp in p})
    if not monomials:
        return [tuple(row) for row in np.eye(n).tolist()]
    matrix = np.array(
        [[float(p.get(exp, 0)) for p in partials] for exp in monomials],
        dtype=np.float64,
    )
    basis = scipy.linalg.null_space(matrix)
    return [tuple(float(v) for v in col) for col in basis.T]


def is_complete(f: MultiPoly) -> bool:
    return not lineality_space(f)


# cones


def orthant(n: int, seed: Optional[int] = None) -> ConeSpec:
    if n < 1:
        raise InvalidInputError(f"orthant dimension must be positive, got {n}")
    return ConeSpec(variant=ConeVariant.ORTHANT, n=n, seed=seed)


def generated_cone(
    generators: Sequence[Sequence[Any]], seed: Optional[int] = None
) -> ConeSpec:
    gens = [tuple(float(v) for v in g) for g in generators]
    if not gens:
        raise InvalidInputError("a generated cone needs at least one generator")
    n = len(gens[0])
    if n < 1 or any(len(g) != n for g in gens):
        raise InvalidInputError("generators must be non-empty vectors of equal length")
    if any(not any(g) for g in gens):
        raise InvalidInputError("generators must be nonzero")
    return ConeSpec(
        variant=ConeVariant.GENERATORS, n=n, generators=tuple(gens), seed=seed
    )


def hyperbolicity_cone(
    f: MultiPoly,
    e: Sequence[Any],
    validate: bool = True,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> ConeSpec:
    """Λ₊₊(f, e); f(e) must be positive and, when validating, f sampled hyperbolic."""
    if _require_direction(f, e) < 0:
        raise InvalidInputError("hyperbolicity cones need f(e) > 0; pass -f instead")
    if validate:
        verdict = is_hyperbolic(f, e, n_samples, seed)
        if not verdict:
            shown = tuple(float(v) for v in e)
            raise InvalidInputError(f"not hyperbolic in direction {shown}")
    direction = tuple(to_vector(e, f.exact and is_exact_vector(e)))
    return ConeSpec(
        variant=ConeVariant.HYPERBOLICITY,
        n=f.nvars,
        poly=f,
        direction=direction,
        seed=seed,
    )


def cone_rng(
    K: ConeSpec, seed: Optional[int] = None
) -> Tuple[np.random.Generator, int]:
    """RNG for sampling K. An explicit seed wins over the cone's own seed."""
    resolved = config.resolve_seed(seed if seed is not None else K.seed)
    return np.random.default_rng(resolved), resolved


def sample_interior(K: ConeSpec, count: int, rng: np.random.Generator) -> FloatArray:
    if count < 0:
        raise InvalidInputError(f"sample count must be non-negative, got {count}")
    if K.variant is ConeVariant.ORTHANT:
        return rng.exponential(size=(count, K.n))
    if K.variant is ConeVariant.GENERATORS:
        gens = np.asarray(K.generators, dtype=np.float64)
        weights = rng.dirichlet(np.ones(len(gens)), size=count)
        return weights @ gens
    return _sample_hyperbolicity(K, count, rng)


def _sample_hyperbolicity(
    K: ConeSpec, count: int, rng: np.random.Generator
) -> FloatArray:
    assert K.poly is not None
    fast = K.poly.to_float()
    e = np.asarray([float(v) for v in K.direction], dtype=np.float64)
    direction = list(e)
    radius = float(np.linalg.norm(e))
    points = np.zeros((count, K.n))
    for index in range(count):
        misses = 0
        for _ in range(SAMPLE_ATTEMPTS):
            candidate = e + radius * rng.standard_normal(K.n)
            if cone_membership(fast, direction, list(candidate)):
                points[index] = candidate
                break
            misses += 1
            if misses % SHRINK_AFTER == 0:
                radius /= 2
        else:
            raise InfeasibleError(
                f"no hyperbolicity cone sample after {SAMPLE_ATTEMPTS} attempts"
            )
    logger.debug("sampled %d cone points, final radius %.3e", count, radius)
    return points


def cone_contains(K: ConeSpec, x: Sequence[Any], closed: bool = False) -> bool:
    """Membership in K. Generated cones are always tested as closed cones."""
    check_length(x, K.n, "point")
    if K.variant is ConeVariant.ORTHANT:
        values = [float(v) for v in x]
        return all(v >= 0 for v in values) if closed else all(v > 0 for v in values)
    if K.variant is ConeVariant.GENERATORS:
        gens = np.asarray(K.generators, dtype=np.float64)
        target = np.asarray([float(v) for v in x], dtype=np.float64)
        _, residual = scipy.optimize.nnls(gens.T, target)
        scale = max(1.0, float(np.linalg.norm(target)))
        return bool(residual <= GENERATOR_RESIDUAL * scale)
    assert K.poly is not None
    return cone_membership(K.poly, K.direction, x, closed)


def _apply(rows: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> List[Scalar]:
    out: List[Scalar] = []
    for row in rows:
        total: Scalar = Fraction(0)
        for a, b in zip(row, v):
            total = total + a * b
        out.append(total)
    return out


def pullback_cone(K: ConeSpec, M: Any) -> ConeSpec:
    """M⁻¹K, the cone on which f∘M inherits the properties f has on K."""
    rows, exact = as_rows(M)
    if require_square(rows, "substitution matrix") != K.n:
        raise InvalidInputError(f"substitution matrix must be {K.n}x{K.n}")
    inv = inverse(rows)
    if K.variant is ConeVariant.ORTHANT:
        return generated_cone(transpose(inv), K.seed)
    if K.variant is ConeVariant.GENERATORS:
        return generated_cone([_apply(inv, g) for g in K.generators], K.seed)
    assert K.poly is not None
    direction_exact = exact and is_exact_vector(K.direction)
    e = to_vector(K.direction, direction_exact)
    inv_rows = inv if direction_exact else [[float(v) for v in row] for row in inv]
    return hyperbolicity_cone(
        compose_linear(K.poly, rows), _apply(inv_rows, e), validate=False, seed=K.seed
    )

"""Mixed discriminants and determinant expansions of matrix sums."""

import logging
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations

from .errors import InvalidInputError, NumericalError
from .models import DetSumExpansion, RankOneUpdate
from .numeric import (
    Rows,
    Scalar,
    as_rows,
    close,
    det,
    identity,
    inverse,
    is_exact_vector,
    matmul,
    one,
    require_square,
    to_vector,
    zero,
)
from .poly import MultiPoly, coefficient
from .workers import parallel_map

logger = logging.getLogger(__name__)

MAX_DIRECT = 8
MAX_SYMBOLIC = 6


def normalize_matrices(matrices: Sequence[Any]) -> Tuple[List[Rows], bool]:
    """Square matrices of one common size, in one common scalar mode."""
    if not matrices:
        raise InvalidInputError("at least one matrix is required")
    parsed = [as_rows(m) for m in matrices]
    exact = all(mode for _, mode in parsed)
    rows = [as_rows(r, exact)[0] for r, _ in parsed]
    n = require_square(rows[0])
    for r in rows[1:]:
        if require_square(r) != n:
            raise InvalidInputError("all matrices must have the same size")
    return rows, exact


def _expand_slots(count: int, multiplicities: Optional[Sequence[int]]) -> List[int]:
    ks = [1] * count if multiplicities is None else [int(k) for k in multiplicities]
    if len(ks) != count:
        raise InvalidInputError(f"{len(ks)} multiplicities for {count} matrices")
    if any(k < 0 for k in ks):
        raise InvalidInputError("multiplicities must be non-negative")
    return [idx for idx, k in enumerate(ks) for _ in range(k)]


def _slot_sum(mats: List[Rows], slots: List[int], exact: bool) -> Scalar:
    n, k = len(mats[0]), len(slots)
    if k == 0:
        return one(exact)
    orders = [tuple(p) for p in multiset_permutations(slots)]

    def subset_term(alpha: Tuple[int, ...]) -> Scalar:
        total = zero(exact)
        for sigma in orders:
            block = [[mats[sigma[r]][alpha[r]][c] for c in alpha] for r in range(k)]
            total = total + det(block)
        return total

    terms = parallel_map(subset_term, list(combinations(range(n), k)))
    total = zero(exact)
    for term in terms:
        total = total + term
    return total


def mixed_discriminant(
    matrices: Sequence[Any], multiplicities: Optional[Sequence[int]] = None
) -> Scalar:
    """D(A₁^(k₁), …, A_m^(k_m)) evaluated from its defining double sum.

    The sum runs over increasing index tuples α of length k = Σkᵢ and the
    distinct orderings σ of the slot multiset; row r of each k×k block is
    taken from matrix σ(r).
    """
    mats, exact = normalize_matrices(matrices)
    n = len(mats[0])
    if n > MAX_DIRECT:
        raise InvalidInputError(
            f"direct mixed discriminants are capped at n={MAX_DIRECT}"
        )
    slots = _expand_slots(len(mats), multiplicities)
    if len(slots) > n:
        raise InvalidInputError(f"{len(slots)} slots exceed the matrix size {n}")
    return _slot_sum(mats, slots, exact)


def _entry_poly(
    mats: List[Rows], base: Optional[Rows], r: int, c: int, exact: bool
) -> MultiPoly:
    m = len(mats)
    terms: Dict[Tuple[int, ...], Scalar] = {}
    if base is not None and base[r][c] != 0:
        terms[(0,) * m] = base[r][c]
    for i, mat in enumerate(mats):
        if mat[r][c] != 0:
            terms[tuple(int(k == i) for k in range(m))] = mat[r][c]
    return MultiPoly(m, terms, exact)


def determinantal_polynomial(
    matrices: Sequence[Any], base: Optional[Any] = None
) -> MultiPoly:
    """det(B + Σ xᵢAᵢ) as a polynomial in one variable per matrix."""
    mats, exact = normalize_matrices(matrices)
    n = len(mats[0])
    if n > MAX_SYMBOLIC:
        raise InvalidInputError(
            f"symbolic determinants are capped at n={MAX_SYMBOLIC}"
        )
    base_rows: Optional[Rows] = None
    if base is not None:
        raw, base_exact = as_rows(base)
        if require_square(raw) != n:
            raise InvalidInputError("base matrix has the wrong size")
        if exact and not base_exact:
            exact = False
            mats = [as_rows(mat, False)[0] for mat in mats]
        base_rows = as_rows(raw, exact)[0]
    entries = [
        [_entry_poly(mats, base_rows, r, c, exact) for c in range(n)] for r in range(n)
    ]
    m = len(mats)
    # Laplace expansion row by row over the set of columns already used
    partial: Dict[int, MultiPoly] = {0: MultiPoly.constant(m, 1, exact)}
    for r in range(n):
        nxt: Dict[int, MultiPoly] = {}
        for mask, acc in partial.items():
            for c in range(n):
                if mask >> c & 1 or entries[r][c].is_zero:
                    continue
                sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = acc * entries[r][c]
                term = -term if sign < 0 else term
                key = mask | 1 << c
                nxt[key] = nxt[key] + term if key in nxt else term
        partial = nxt
    return partial.get((1 << n) - 1, MultiPoly.zero(m, exact))


def md_via_coefficients(
    matrices: Sequence[Any], multiplicities: Optional[Sequence[int]] = None
) -> Scalar:
    """The same mixed discriminant, read off as a determinantal coefficient.

    For k = n it is the x^k coefficient of det(Σ xᵢAᵢ); for k < n the identity
    is added and the coefficient is taken from det(I + Σ xᵢAᵢ).
    """
    mats, exact = normalize_matrices(matrices)
    n = len(mats[0])
    slots = _expand_slots(len(mats), multiplicities)
    k = len(slots)
    if k > n:
        raise InvalidInputError(f"{k} slots exceed the matrix size {n}")
    ks = [slots.count(i) for i in range(len(mats))]
    base = identity(n, exact) if k < n else None
    return coefficient(determinantal_polynomial(mats, base), ks)


def _compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    out: List[Tuple[int, ...]] = []
    for first in range(total, -1, -1):
        out.extend((first,) + rest for rest in _compositions(total - first, parts - 1))
    return out


def _mat_sum(mats: List[Rows], exact: bool) -> Rows:
    n = len(mats[0])
    out = [[zero(exact)] * n for _ in range(n)]
    for mat in mats:
        out = [[out[r][c] + mat[r][c] for c in range(n)] for r in range(n)]
    return out


def det_of_sum_expansion(matrices: Sequence[Any]) -> DetSumExpansion:
    """det(ΣAᵢ) directly and as Σ over compositions of n of mixed discriminants."""
    mats, exact = normalize_matrices(matrices)
    n = len(mats[0])
    if n > MAX_DIRECT:
        raise InvalidInputError(
            f"direct mixed discriminants are capped at n={MAX_DIRECT}"
        )
    direct = det(_mat_sum(mats, exact))
    terms: List[Tuple[Tuple[int, ...], Scalar]] = []
    total = zero(exact)
    for ks in _compositions(n, len(mats)):
        slots = [idx for idx, k in enumerate(ks) for _ in range(k)]
        value = _slot_sum(mats, slots, exact)
        terms.append((ks, value))
        total = total + value
    if not close(direct, total):
        raise NumericalError(
            f"determinant expansion disagrees: direct {direct} vs mixed sum {total}"
        )
    return DetSumExpansion(direct=direct, total=total, terms=tuple(terms))


def _outer(u: Sequence[Scalar], v: Sequence[Scalar]) -> Rows:
    return [[a * b for b in v] for a in u]


def rank_one_update_det(A: Any, u: Sequence[Any], v: Sequence[Any]) -> RankOneUpdate:
    """det(A + uvᵀ) against (1 + vᵀA⁻¹u)·det A and det A + D(A, …, A, uvᵀ)."""
    rows, exact = as_rows(A)
    n = require_square(rows)
    if len(u) != n or len(v) != n:
        raise InvalidInputError(f"update vectors must have length {n}")
    exact = exact and is_exact_vector(u) and is_exact_vector(v)
    rows = as_rows(rows, exact)[0]
    uu, vv = to_vector(u, exact), to_vector(v, exact)
    base = det(rows)
    if base == 0:
        raise InvalidInputError("matrix is singular")
    update = _outer(uu, vv)
    lhs = det(_mat_sum([rows, update], exact))
    inv_u = matmul(inverse(rows), [[x] for x in uu])
    quad = zero(exact)
    for i in range(n):
        quad = quad + vv[i] * inv_u[i][0]
    rhs = (one(exact) + quad) * base
    via_mixed: Optional[Scalar] = None
    if n <= MAX_DIRECT:
        via_mixed = base + _slot_sum([rows, update], [0] * (n - 1) + [1], exact)
    mixed_ok = via_mixed is None or close(lhs, via_mixed)
    if not (close(lhs, rhs) and mixed_ok):
        raise NumericalError(
            f"matrix determinant lemma fails: {lhs} vs {rhs} (mixed {via_mixed})"
        )
    return RankOneUpdate(lhs=lhs, rhs=rhs, via_mixed=via_mixed)


def scaling_identity_check(
    X: Any, Y: Any, matrices: Sequence[Any], alphas: Sequence[Any]
) -> bool:
    """D(Xα₁A₁Y, …, Xα_nA_nY) = det X · det Y · Πα_i · D(A₁, …, A_n)."""
    mats, exact = normalize_matrices(list(matrices) + [X, Y])
    *mats, x_rows, y_rows = mats
    n = len(x_rows)
    if len(mats) != n or len(alphas) != n:
        raise InvalidInputError(
            f"the scaling identity needs exactly {n} matrices and scalars"
        )
    exact = exact and is_exact_vector(alphas)
    scalars = to_vector(alphas, exact)
    scaled = [
        [[a * entry for entry in row] for row in matmul(matmul(x_rows, mat), y_rows)]
        for a, mat in zip(scalars, mats)
    ]
    lhs = mixed_discriminant(scaled)
    factor = det(x_rows) * det(y_rows)
    for a in scalars:
        factor = factor * a
    rhs = factor * mixed_discriminant(mats)
    return close(lhs, rhs)


def trace(A: Any) -> Scalar:
    rows, exact = as_rows(A)
    n = require_square(rows)
    total = zero(exact)
    for i in range(n):
        total = total + rows[i][i]
    return total


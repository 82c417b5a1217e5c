"""Exact permanents and the generating-polynomial identities around them."""

import itertools
import logging
import math
from fractions import Fraction
from typing import Any, List, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidInputError, NumericalError
from .mixeddisc import determinantal_polynomial
from .models import CongruenceCheck, PermanentMethod
from .numeric import (
    Rows,
    Scalar,
    as_rows,
    close,
    det,
    is_exact_vector,
    matmul,
    require_square,
    to_vector,
    transpose,
    zero,
)
from .poly import MultiPoly, coefficient, evaluate, partial_derivative, product

logger = logging.getLogger(__name__)

MAX_NAIVE = 8
MAX_DERIVATIVES = 8
MAX_PERSTABLE = 5
FLOAT_RYSER_WARN = 20


def _square(A: Any) -> Tuple[Rows, bool, int]:
    rows, exact = as_rows(A)
    return rows, exact, require_square(rows)


def _ryser_sum(rows: Sequence[Sequence[Any]], n: int, unit: Any) -> Any:
    """Σ_S (−1)^{n−|S|} Π_i Σ_{j∈S} a_ij, visiting S in Gray-code order."""
    sums = [unit * 0] * n
    total = unit * 0
    in_set = [False] * n
    size = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        in_set[j] = not in_set[j]
        if in_set[j]:
            size += 1
            sums = [s + rows[i][j] for i, s in enumerate(sums)]
        else:
            size -= 1
            sums = [s - rows[i][j] for i, s in enumerate(sums)]
        prod = unit
        for s in sums:
            prod = prod * s
            if not prod:
                break
        total = total + (prod if (n - size) % 2 == 0 else -prod)
    return total


def permanent_ryser(A: Any) -> Scalar:
    """Ryser's inclusion-exclusion formula with Gray-code row-sum updates.

    Exact input is scaled row by row to integers, so the inner loop runs on
    Python ints and the result is divided back exactly.
    """
    rows, exact, n = _square(A)
    if exact:
        scales = [math.lcm(*(v.denominator for v in row)) for row in rows]
        ints = [[int(v * s) for v in row] for row, s in zip(rows, scales)]
        value = _ryser_sum(ints, n, 1)
        return Fraction(value, math.prod(scales))
    if n > FLOAT_RYSER_WARN:
        logger.warning("float Ryser permanent at n=%d may lose precision", n)
    return float(_ryser_sum([[float(v) for v in row] for row in rows], n, 1.0))


def permanent_naive(A: Any) -> Scalar:
    rows, exact, n = _square(A)
    if n > MAX_NAIVE:
        raise InvalidInputError(f"naive permanent is capped at n={MAX_NAIVE}")
    total = zero(exact)
    for sigma in itertools.permutations(range(n)):
        term: Scalar = Fraction(1) if exact else 1.0
        for i, j in enumerate(sigma):
            term = term * rows[i][j]
        total = total + term
    return total


def generating_polynomial(A: Any) -> MultiPoly:
    """f_A(x) = Π_j (Σ_i a_ij x_i), so that the x₁…x_n coefficient is per(A)."""
    rows, exact, n = _square(A)
    columns = transpose(rows)
    return product([MultiPoly.linear_form(col, exact) for col in columns])


def permanent_via_derivatives(A: Any) -> Scalar:
    """∂₁ … ∂_n f_A evaluated at the origin."""
    rows, exact, n = _square(A)
    if n > MAX_DERIVATIVES:
        raise InvalidInputError(
            f"derivative permanent is capped at n={MAX_DERIVATIVES}"
        )
    f = generating_polynomial(rows)
    return evaluate(partial_derivative(f, [1] * n), [0] * n)


def permanent(
    A: Any, method: Union[str, PermanentMethod] = PermanentMethod.RYSER
) -> Scalar:
    chosen = PermanentMethod(method)
    if chosen is PermanentMethod.RYSER:
        return permanent_ryser(A)
    if chosen is PermanentMethod.NAIVE:
        return permanent_naive(A)
    if chosen is PermanentMethod.DERIVATIVES:
        return permanent_via_derivatives(A)
    raise InvalidInputError(
        "capacity estimates are not exact permanents, use capacity.permanent_capacity"
    )


def _diagonal(D: Any, n: int) -> List[Any]:
    values = list(D)
    if values and isinstance(values[0], (list, tuple, np.ndarray)):
        rows = [list(row) for row in values]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise InvalidInputError(f"diagonal matrix must be {n}x{n}")
        if any(rows[i][j] != 0 for i in range(n) for j in range(n) if i != j):
            raise InvalidInputError("D must be diagonal")
        values = [rows[i][i] for i in range(n)]
    if len(values) != n:
        raise InvalidInputError(f"diagonal has length {len(values)}, expected {n}")
    if any(v == 0 for v in values):
        raise InvalidInputError("diagonal entries must be nonzero")
    return values


def diagonal_congruence_per(A: Any, D: Any) -> CongruenceCheck:
    """per(DAD) against det(D)²·per(A)."""
    rows, exact, n = _square(A)
    diag = _diagonal(D, n)
    exact = exact and is_exact_vector(diag)
    rows = as_rows(rows, exact)[0]
    d = to_vector(diag, exact)
    congruent = [[d[i] * rows[i][j] * d[j] for j in range(n)] for i in range(n)]
    lhs = permanent_ryser(congruent)
    det_d: Scalar = Fraction(1) if exact else 1.0
    for v in d:
        det_d = det_d * v
    rhs = det_d * det_d * permanent_ryser(rows)
    return CongruenceCheck(lhs=lhs, rhs=rhs, holds=close(lhs, rhs))


def perstable_coefficient(V: Any, A: Any) -> Scalar:
    """x₁…x_n coefficient of det(Σ xᵢAᵢ) for Aᵢ = V·diag(row i of A)·Vᵀ.

    The value is checked against det(V)²·per(A); a mismatch raises.
    """
    v_rows, v_exact, n = _square(V)
    a_rows, a_exact, m = _square(A)
    if m != n:
        raise InvalidInputError(f"V is {n}x{n} but A is {m}x{m}")
    if n > MAX_PERSTABLE:
        raise InvalidInputError(
            f"perstable coefficients are capped at n={MAX_PERSTABLE}"
        )
    if any(v < 0 for row in a_rows for v in row):
        raise InvalidInputError("A must be entrywise nonnegative")
    exact = v_exact and a_exact
    v_rows, a_rows = as_rows(v_rows, exact)[0], as_rows(a_rows, exact)[0]
    det_v = det(v_rows)
    if det_v == 0:
        raise InvalidInputError("V is singular")
    v_t = transpose(v_rows)
    coefficient_matrices = []
    for row in a_rows:
        scaled = [[v_rows[r][c] * row[c] for c in range(n)] for r in range(n)]
        coefficient_matrices.append(matmul(scaled, v_t))
    value = coefficient(determinantal_polynomial(coefficient_matrices), [1] * n)
    expected = det_v * det_v * permanent_ryser(a_rows)
    if not close(value, expected, 1e-8):
        raise NumericalError(
            f"perstable identity fails: coefficient {value}, expected {expected}"
        )
    return value

"""Scalar modes and small dense-matrix helpers shared by every module.

Two scalar modes are supported: exact rationals (``fractions.Fraction``) and
double floats. A value is "exact" when it is an int or a Fraction; exact
linear algebra goes through sympy, float linear algebra through numpy.
"""

import math
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
import sympy

from .errors import InvalidInputError, NumericalError

Scalar = Union[Fraction, float]
Rows = List[List[Scalar]]
FloatArray = npt.NDArray[np.float64]

ZERO_BAND = 1e-9


def is_exact_scalar(value: Any) -> bool:
    if isinstance(value, bool):
        return False
    return isinstance(value, (int, Fraction, np.integer))


def is_exact_vector(values: Iterable[Any]) -> bool:
    return all(is_exact_scalar(v) for v in values)


def to_scalar(value: Any, exact: bool) -> Scalar:
    """Coerce `value` into the requested mode.

    In exact mode floats are read through their shortest decimal form, so
    0.1 becomes 1/10 rather than its binary expansion. Strings may hold
    "p/q" or decimal literals in either mode.
    """
    if isinstance(value, bool):
        raise InvalidInputError(f"unsupported scalar {value!r}")
    if isinstance(value, str):
        try:
            parsed = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"cannot parse scalar {value!r}")
        return parsed if exact else float(parsed)
    if isinstance(value, (sympy.Rational, sympy.Integer)):
        value = Fraction(int(value.p), int(value.q))
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(float(value)):
                raise InvalidInputError(f"non-finite scalar {value!r}")
            return Fraction(str(float(value)))
        raise InvalidInputError(f"unsupported scalar {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"unsupported scalar {value!r}")
    if not math.isfinite(out):
        raise InvalidInputError(f"non-finite scalar {value!r}")
    return out


def to_vector(values: Iterable[Any], exact: bool) -> List[Scalar]:
    return [to_scalar(v, exact) for v in values]


def as_float_array(values: Any) -> FloatArray:
    if _is_nested(values):
        return np.asarray(
            [[float(v) for v in row] for row in values], dtype=np.float64
        )
    return np.asarray([float(v) for v in values], dtype=np.float64)


def _is_nested(values: Any) -> bool:
    if isinstance(values, np.ndarray):
        return values.ndim == 2
    return len(values) > 0 and isinstance(values[0], (list, tuple, np.ndarray))


def zero(exact: bool) -> Scalar:
    return Fraction(0) if exact else 0.0


def one(exact: bool) -> Scalar:
    return Fraction(1) if exact else 1.0


def check_length(values: Sequence[Any], n: int, what: str) -> None:
    if len(values) != n:
        raise InvalidInputError(f"{what} has length {len(values)}, expected {n}")


def as_rows(matrix: Any, exact: Optional[bool] = None) -> Tuple[Rows, bool]:
    """Normalize a nested sequence (or ndarray) into rectangular rows.

    With ``exact=None`` the mode is inferred: exact iff every entry is exact.
    """
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2:
            raise InvalidInputError("matrix must be two-dimensional")
        raw: List[List[Any]] = matrix.tolist()
    else:
        raw = [list(row) for row in matrix]
    if not raw or not raw[0]:
        raise InvalidInputError("matrix must be non-empty")
    width = len(raw[0])
    if any(len(row) != width for row in raw):
        raise InvalidInputError("matrix rows have different lengths")
    if exact is None:
        exact = all(is_exact_scalar(v) for row in raw for v in row)
    return [[to_scalar(v, exact) for v in row] for row in raw], exact


def require_square(rows: Rows, what: str = "matrix") -> int:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise InvalidInputError(f"{what} must be square, got {n}x{len(rows[0])}")
    return n


def identity(n: int, exact: bool = True) -> Rows:
    return [[one(exact) if i == j else zero(exact) for j in range(n)] for i in range(n)]


def transpose(rows: Rows) -> Rows:
    return [list(col) for col in zip(*rows)]


def matmul(a: Rows, b: Rows) -> Rows:
    if len(a[0]) != len(b):
        raise InvalidInputError(
            f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}"
        )
    cols = transpose(b)
    return [[_dot(row, col) for col in cols] for row in a]


def _dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    total: Scalar = Fraction(0)
    for x, y in zip(u, v):
        total = total + x * y
    return total


def frobenius_norm(rows: Sequence[Sequence[Scalar]]) -> float:
    return math.sqrt(sum(float(v) ** 2 for row in rows for v in row))


def _to_sympy(rows: Rows) -> sympy.Matrix:
    return sympy.Matrix(
        [[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows]
    )


def _from_sympy(value: Any) -> Fraction:
    rational = sympy.sympify(value)
    if not isinstance(rational, sympy.Rational):
        raise NumericalError(f"exact computation produced a non-rational {value!r}")
    return Fraction(int(rational.p), int(rational.q))


def det(matrix: Any) -> Scalar:
    """Determinant; exact (fraction-free Bareiss) for exact input."""
    rows, exact = as_rows(matrix)
    require_square(rows)
    if exact:
        return _from_sympy(_to_sympy(rows).det(method="bareiss"))
    try:
        return float(np.linalg.det(as_float_array(rows)))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"determinant failed: {exc}")


def inverse(matrix: Any) -> Rows:
    rows, exact = as_rows(matrix)
    n = require_square(rows)
    if exact:
        try:
            inv = _to_sympy(rows).inv()
        except ValueError:
            raise InvalidInputError("matrix is singular")
        return [[_from_sympy(inv[i, j]) for j in range(n)] for i in range(n)]
    try:
        out = np.linalg.inv(as_float_array(rows))
    except np.linalg.LinAlgError:
        raise InvalidInputError("matrix is singular")
    return [[float(v) for v in row] for row in out]


def solve_exact(matrix: Rows, rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Exact solution of ``matrix @ x = rhs`` (free parameters set to 0), or None."""
    system = _to_sympy(matrix)
    b = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in rhs])
    try:
        solution, params = system.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    return [_from_sympy(solution[i, 0]) for i in range(solution.shape[0])]


def close(a: Scalar, b: Scalar, rel: float = ZERO_BAND) -> bool:
    """Exact equality for two exact values, relative comparison otherwise."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= rel * max(1.0, abs(fa), abs(fb))


def format_scalar(value: Scalar) -> Union[str, float]:
    """Exact values serialize as "p/q" strings, floats stay numbers."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


class SymMatrix:
    """Dense real symmetric matrix in exact or float mode.

    Symmetry is checked entrywise and exactly. Computed float matrices that are
    only symmetric up to rounding can pass ``symmetrize=True``.
    """

    def __init__(
        self, matrix: Any, exact: Optional[bool] = None, symmetrize: bool = False
    ) -> None:
        rows, mode = as_rows(matrix, exact)
        n = require_square(rows, "symmetric matrix")
        if symmetrize:
            half = Fraction(1, 2) if mode else 0.5
            rows = [
                [(rows[i][j] + rows[j][i]) * half for j in range(n)] for i in range(n)
            ]
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InvalidInputError(
                        f"matrix is not symmetric at ({i}, {j}): "
                        f"{rows[i][j]} != {rows[j][i]}"
                    )
        self._rows: Tuple[Tuple[Scalar, ...], ...] = tuple(tuple(row) for row in rows)
        self._exact = mode

    @classmethod
    def zeros(cls, n: int, exact: bool = True) -> "SymMatrix":
        return cls([[zero(exact)] * n for _ in range(n)], exact)

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def rows(self) -> Rows:
        return [list(row) for row in self._rows]

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self._rows[i][j]

    def to_numpy(self) -> FloatArray:
        return np.array(
            [[float(v) for v in row] for row in self._rows], dtype=np.float64
        )

    def frobenius_norm(self) -> float:
        return frobenius_norm(self._rows)

    def scaled(self, factor: Any) -> "SymMatrix":
        c = to_scalar(factor, self._exact and is_exact_scalar(factor))
        return SymMatrix([[v * c for v in row] for row in self._rows])

    def principal(self, indices: Sequence[int]) -> "SymMatrix":
        return SymMatrix(
            [[self._rows[i][j] for j in indices] for i in indices], self._exact
        )

    def __neg__(self) -> "SymMatrix":
        return SymMatrix([[-v for v in row] for row in self._rows], self._exact)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"SymMatrix({self.rows!r})"

"""Locally PSD and nonsingular locally singular matrices.

G(n, k) = k/(k−1)·I − 1/(k−1)·𝟙𝟙ᵀ is the canonical NLS matrix; its permanent
has a closed form that is evaluated here in exact rationals.
"""

import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidInputError, NumericalError
from .models import NormalizedGnk, PositivityVerdict
from .numeric import SymMatrix, det
from .spectra import zero_band
from .workers import parallel_map

logger = logging.getLogger(__name__)

MAX_LOCAL_SCAN = 16
DET_BAND = 1e-9


def _check_gnk_args(n: int, k: int) -> None:
    if n < 2:
        raise InvalidInputError(f"G(n, k) needs n >= 2, got n={n}")
    if k < 2:
        raise InvalidInputError(f"G(n, k) needs k >= 2, got k={k}")


def gnk(n: int, k: int) -> SymMatrix:
    _check_gnk_args(n, k)
    off = Fraction(-1, k - 1)
    return SymMatrix(
        [[Fraction(1) if i == j else off for j in range(n)] for i in range(n)]
    )


def gnk_per_closed_form(n: int, k: int) -> Fraction:
    """per(G(n, k)) = (k/(k−1))ⁿ · Σᵢ (−1/k)ⁱ · n!/(n−i)!."""
    _check_gnk_args(n, k)
    total = sum(
        (Fraction(-1, k) ** i * math.perm(n, i) for i in range(n + 1)), Fraction(0)
    )
    return Fraction(k, k - 1) ** n * total


def nls_positivity_predicate(n: int, k: int) -> PositivityVerdict:
    """Sufficient condition for per(M) > 0 on every (n, k) NLS matrix.

    A negative verdict does not mean the permanent can be negative.
    """
    _check_gnk_args(n, k)
    if k > n - 1:
        raise InvalidInputError(f"NLS matrices need k <= n - 1, got ({n}, {k})")
    if (n, k) == (4, 2):
        return PositivityVerdict(True, "(n, k) = (4, 2)")
    if n % 2 == 0:
        if n - 1 > k > 2:
            return PositivityVerdict(True, "even n with n - 1 > k > 2")
        return PositivityVerdict(False, "even n needs n - 1 > k > 2")
    if n - 1 > k and k * k > 2 * (n - 1):
        return PositivityVerdict(True, "odd n with n - 1 > k > sqrt(2(n - 1))")
    return PositivityVerdict(False, "odd n needs k > sqrt(2(n - 1))")


def gnk_nested_values(n: int) -> List[Tuple[int, Fraction]]:
    start = 1 + math.isqrt(2 * (n - 1))
    ks = range(start, n)
    if not ks:
        raise InvalidInputError(f"no k satisfies sqrt(2(n - 1)) < k < n for n={n}")
    return [(k, gnk_per_closed_form(n, k)) for k in ks]


def gnk_nested_check(n: int) -> bool:
    """per(G(4,2)) > per(G(n,k)) > per(G(n,k+1)) over the admissible k."""
    values = gnk_nested_values(n)
    ceiling = gnk_per_closed_form(4, 2)
    decreasing = all(a[1] > b[1] for a, b in zip(values, values[1:]))
    below = all(value < ceiling for _, value in values) if n > 4 else True
    return decreasing and below


def gnk_normalized(n: int, k: int) -> NormalizedGnk:
    """G(n, k)/n, which has trace 1, and its permanent per(G(n, k))/nⁿ."""
    matrix = gnk(n, k).scaled(Fraction(1, n))
    return NormalizedGnk(matrix=matrix, per=gnk_per_closed_form(n, k) / n**n)


def cnm(n: int, m: int) -> SymMatrix:
    """All-ones matrix with the last m diagonal entries set to −1."""
    if n < 1 or not 0 <= m <= n:
        raise InvalidInputError(f"C(n, m) needs 0 <= m <= n, got ({n}, {m})")
    out = SymMatrix(
        [
            [Fraction(-1) if i == j and i >= n - m else Fraction(1) for j in range(n)]
            for i in range(n)
        ]
    )
    if m == n and n >= 2 and out != -gnk(n, 2):
        raise NumericalError("C(n, n) does not match -G(n, 2)")
    return out


def _principal_subsets(M: SymMatrix, k: int) -> List[Tuple[int, ...]]:
    if M.n > MAX_LOCAL_SCAN:
        raise InvalidInputError(f"principal scans are capped at n={MAX_LOCAL_SCAN}")
    if not 1 <= k <= M.n:
        raise InvalidInputError(f"k must satisfy 1 <= k <= {M.n}, got {k}")
    return list(combinations(range(M.n), k))


def is_k_locally_psd(M: SymMatrix, k: int, tol: Optional[float] = None) -> bool:
    """Every k×k principal submatrix has its smallest eigenvalue ≥ −τ."""
    subsets = _principal_subsets(M, k)
    tau = zero_band(M) if tol is None else tol
    q = M.to_numpy()

    def psd(idx: Tuple[int, ...]) -> bool:
        return bool(np.linalg.eigvalsh(q[np.ix_(idx, idx)])[0] >= -tau)

    return all(parallel_map(psd, subsets))


def is_nls(M: SymMatrix, k: int, tol: Optional[float] = None) -> bool:
    """k-locally PSD, every k×k principal minor singular and M itself nonsingular.

    Exact matrices use exact determinants; float matrices use the eigenvalue
    band for the minors and |det M| > 1e-9·‖M‖_F for M.
    """
    if not is_k_locally_psd(M, k, tol):
        return False
    subsets = _principal_subsets(M, k)
    if M.exact:
        if any(det(M.principal(idx).rows) != 0 for idx in subsets):
            return False
        return det(M.rows) != 0
    tau = zero_band(M) if tol is None else tol
    q = M.to_numpy()

    def singular(idx: Tuple[int, ...]) -> bool:
        eigenvalues = np.linalg.eigvalsh(q[np.ix_(idx, idx)])
        return bool(np.any(np.abs(eigenvalues) <= tau))

    if not all(parallel_map(singular, subsets)):
        return False
    return abs(float(np.linalg.det(q))) > DET_BAND * M.frobenius_norm()

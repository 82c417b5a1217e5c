"""Sparse multivariate polynomials.

A ``MultiPoly`` maps exponent vectors to non-zero coefficients. Coefficients are
either all exact (``Fraction``) or all float, fixed at construction. Operations
that mix an exact polynomial with float data return a float polynomial; an
exact polynomial combined with exact data stays exact.

Variables are indexed from 0 in code (``x_0 … x_{n-1}``).
"""

import itertools
import logging
import math
from fractions import Fraction
from functools import cached_property
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .errors import InvalidInputError
from .numeric import (
    FloatArray,
    Scalar,
    SymMatrix,
    check_length,
    is_exact_scalar,
    is_exact_vector,
    to_scalar,
    to_vector,
    zero,
)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
TermSource = Union[Mapping[Sequence[int], Any], Iterable[Tuple[Sequence[int], Any]]]


class Term(NamedTuple):
    exponents: Exponent
    coefficient: Scalar


def _graded_lex(exp: Exponent) -> Tuple[int, Exponent]:
    return sum(exp), exp


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    def __init__(self, nvars: int, terms: TermSource = (), exact: bool = True) -> None:
        if nvars < 1:
            raise InvalidInputError(f"nvars must be positive, got {nvars}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[Exponent, Scalar] = {}
        for exp, coef in items:
            key = tuple(int(e) for e in exp)
            if len(key) != nvars:
                raise InvalidInputError(
                    f"exponent {key} has length {len(key)}, expected {nvars}"
                )
            if any(e < 0 for e in key):
                raise InvalidInputError(f"negative exponent in {key}")
            value = to_scalar(coef, exact)
            merged[key] = merged[key] + value if key in merged else value
        # graded-lex, highest first
        ordered = sorted(merged, key=_graded_lex, reverse=True)
        self._terms: Dict[Exponent, Scalar] = {
            k: merged[k] for k in ordered if merged[k] != 0
        }
        self._nvars = nvars
        self._exact = exact

    # constructors

    @classmethod
    def zero(cls, nvars: int, exact: bool = True) -> "MultiPoly":
        return cls(nvars, {}, exact)

    @classmethod
    def constant(cls, nvars: int, value: Any, exact: bool = True) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: value}, exact)

    @classmethod
    def variable(cls, index: int, nvars: int, exact: bool = True) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise InvalidInputError(f"variable index {index} out of range")
        exp = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exp: 1}, exact)

    @classmethod
    def linear_form(
        cls, coefficients: Sequence[Any], exact: Optional[bool] = None
    ) -> "MultiPoly":
        mode = is_exact_vector(coefficients) if exact is None else exact
        n = len(coefficients)
        return cls(
            n,
            {
                tuple(1 if i == j else 0 for i in range(n)): c
                for j, c in enumerate(coefficients)
            },
            mode,
        )

    # accessors

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def exact(self) -> bool:
        return self._exact

    @cached_property
    def degree(self) -> int:
        return max((sum(exp) for exp in self._terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @cached_property
    def is_homogeneous(self) -> bool:
        d = self.degree
        return all(sum(exp) == d for exp in self._terms)

    @property
    def support(self) -> List[Exponent]:
        return list(self._terms)

    def terms(self) -> Iterator[Term]:
        for exp, coef in self._terms.items():
            yield Term(exp, coef)

    def as_dict(self) -> Dict[Exponent, Scalar]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @cached_property
    def arrays(self) -> Tuple[FloatArray, FloatArray]:
        """Float projection: (exponent matrix, coefficient vector)."""
        if not self._terms:
            return np.zeros((0, self._nvars)), np.zeros(0)
        exps = np.array(list(self._terms), dtype=np.float64)
        coefs = np.array([float(c) for c in self._terms.values()], dtype=np.float64)
        return exps, coefs

    @cached_property
    def float_partials(self) -> Tuple["MultiPoly", ...]:
        """First partials in float mode, cached for repeated gradient evaluation."""
        n = self._nvars
        unit = [tuple(int(k == i) for k in range(n)) for i in range(n)]
        return tuple(partial_derivative(self, u).to_float() for u in unit)

    def to_float(self) -> "MultiPoly":
        if not self._exact:
            return self
        terms = {k: float(v) for k, v in self._terms.items()}
        return MultiPoly(self._nvars, terms, False)

    def sup_norm(self) -> float:
        return max((abs(float(c)) for c in self._terms.values()), default=0.0)

    # arithmetic

    def _check_compatible(self, other: "MultiPoly") -> None:
        if other.nvars != self._nvars:
            raise InvalidInputError(
                f"polynomials in {self._nvars} and {other.nvars} variables"
            )

    def __add__(self, other: Any) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, float, Fraction)):
                other = MultiPoly.constant(self._nvars, other, is_exact_scalar(other))
            else:
                return NotImplemented
        self._check_compatible(other)
        exact = self._exact and other.exact
        merged: Dict[Exponent, Scalar] = dict(self._terms)
        for exp, coef in other._terms.items():
            merged[exp] = merged[exp] + coef if exp in merged else coef
        return MultiPoly(self._nvars, merged, exact)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        terms = {k: -v for k, v in self._terms.items()}
        return MultiPoly(self._nvars, terms, self._exact)

    def __sub__(self, other: Any) -> "MultiPoly":
        if isinstance(other, (MultiPoly, int, float, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> "MultiPoly":
        return (-self) + other

    def scale(self, factor: Any) -> "MultiPoly":
        exact = self._exact and is_exact_scalar(factor)
        c = to_scalar(factor, exact)
        return MultiPoly(self._nvars, {k: v * c for k, v in self._terms.items()}, exact)

    def __mul__(self, other: Any) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, float, Fraction, np.integer, np.floating)):
                return self.scale(other)
            return NotImplemented
        self._check_compatible(other)
        product: Dict[Exponent, Scalar] = {}
        other_items = list(other._terms.items())
        for a_exp, a_coef in self._terms.items():
            for b_exp, b_coef in other_items:
                key = tuple(x + y for x, y in zip(a_exp, b_exp))
                value = a_coef * b_coef
                product[key] = product[key] + value if key in product else value
        return MultiPoly(self._nvars, product, self._exact and other.exact)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "MultiPoly":
        if power < 0:
            raise InvalidInputError("negative polynomial power")
        result = MultiPoly.constant(self._nvars, 1, self._exact)
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"MultiPoly({self._nvars}, 0)"
        parts = []
        for exp, coef in self._terms.items():
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exp) if e
            )
            parts.append(f"{coef}*{mono}" if mono else f"{coef}")
        return f"MultiPoly({self._nvars}, {' + '.join(parts)})"


def product(polys: Sequence[MultiPoly]) -> MultiPoly:
    if not polys:
        raise InvalidInputError("empty product")
    result = polys[0]
    for p in polys[1:]:
        result = result * p
    return result


def _monomial(xs: Sequence[Scalar], exp: Exponent) -> Scalar:
    value: Scalar = Fraction(1)
    for base, e in zip(xs, exp):
        if e:
            value = value * base**e
    return value


def evaluate(f: MultiPoly, x: Sequence[Any]) -> Scalar:
    check_length(x, f.nvars, "point")
    if f.exact and is_exact_vector(x):
        xs = to_vector(x, True)
        total: Scalar = Fraction(0)
        for exp, coef in f.as_dict().items():
            total = total + coef * _monomial(xs, exp)
        return total
    exps, coefs = f.arrays
    if coefs.size == 0:
        return 0.0
    point = np.asarray([float(v) for v in x], dtype=np.float64)
    return float(coefs @ np.prod(point**exps, axis=1))


def gradient_at(f: MultiPoly, x: Sequence[Any]) -> FloatArray:
    check_length(x, f.nvars, "point")
    return np.array([float(evaluate(p, x)) for p in f.float_partials])


def partial_derivative(f: MultiPoly, alpha: Sequence[int]) -> MultiPoly:
    check_length(alpha, f.nvars, "multi-index")
    if any(a < 0 for a in alpha):
        raise InvalidInputError(f"negative multi-index {tuple(alpha)}")
    out: Dict[Exponent, Scalar] = {}
    for exp, coef in f.as_dict().items():
        if any(e < a for e, a in zip(exp, alpha)):
            continue
        factor = math.prod(math.perm(e, a) for e, a in zip(exp, alpha))
        out[tuple(e - a for e, a in zip(exp, alpha))] = coef * factor
    return MultiPoly(f.nvars, out, f.exact)


def directional_derivative(f: MultiPoly, a: Sequence[Any]) -> MultiPoly:
    """D_a f = Σ a_i ∂_i f."""
    check_length(a, f.nvars, "direction")
    exact = f.exact and is_exact_vector(a)
    direction = to_vector(a, exact)
    out: Dict[Exponent, Scalar] = {}
    for exp, coef in f.as_dict().items():
        for i, e in enumerate(exp):
            if not e or direction[i] == 0:
                continue
            key = exp[:i] + (e - 1,) + exp[i + 1 :]
            value = coef * e * direction[i]
            out[key] = out[key] + value if key in out else value
    return MultiPoly(f.nvars, out, exact)


def hessian_at(f: MultiPoly, a: Sequence[Any]) -> SymMatrix:
    check_length(a, f.nvars, "point")
    n = f.nvars
    exact = f.exact and is_exact_vector(a)
    xs = to_vector(a, exact)
    h: List[List[Scalar]] = [[zero(exact)] * n for _ in range(n)]
    for exp, coef in f.as_dict().items():
        c = coef if exact else float(coef)
        for i in range(n):
            if not exp[i]:
                continue
            for j in range(i, n):
                if i == j:
                    if exp[i] < 2:
                        continue
                    factor = exp[i] * (exp[i] - 1)
                    reduced = exp[:i] + (exp[i] - 2,) + exp[i + 1 :]
                else:
                    if not exp[j]:
                        continue
                    factor = exp[i] * exp[j]
                    lowered = list(exp)
                    lowered[i] -= 1
                    lowered[j] -= 1
                    reduced = tuple(lowered)
                h[i][j] = h[i][j] + c * factor * _monomial(xs, reduced)
    for i in range(n):
        for j in range(i):
            h[i][j] = h[j][i]
    return SymMatrix(h, exact)


def compose_linear(f: MultiPoly, matrix: Sequence[Sequence[Any]]) -> MultiPoly:
    """f∘M: substitute x_i = Σ_j M[i][j] y_j."""
    rows = [list(row) for row in matrix]
    check_length(rows, f.nvars, "substitution matrix")
    if not rows or not rows[0]:
        raise InvalidInputError("substitution matrix must be non-empty")
    m = len(rows[0])
    if any(len(row) != m for row in rows):
        raise InvalidInputError("substitution matrix rows have different lengths")
    exact = f.exact and all(is_exact_vector(row) for row in rows)
    forms = [MultiPoly.linear_form(to_vector(row, exact), exact) for row in rows]
    powers: List[List[MultiPoly]] = [[MultiPoly.constant(m, 1, exact)] for _ in forms]
    result = MultiPoly.zero(m, exact)
    for exp, coef in f.as_dict().items():
        term = MultiPoly.constant(m, coef if exact else float(coef), exact)
        for i, e in enumerate(exp):
            while len(powers[i]) <= e:
                powers[i].append(powers[i][-1] * forms[i])
            if e:
                term = term * powers[i][e]
        result = result + term
    return result


def _upoly_mul(a: List[Scalar], b: List[Scalar]) -> List[Scalar]:
    out: List[Scalar] = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def restrict_line(f: MultiPoly, x: Sequence[Any], e: Sequence[Any]) -> List[Scalar]:
    """Coefficients of t ↦ f(x + t·e), highest degree first, length deg f + 1."""
    check_length(x, f.nvars, "point")
    check_length(e, f.nvars, "direction")
    exact = f.exact and is_exact_vector(x) and is_exact_vector(e)
    xs, es = to_vector(x, exact), to_vector(e, exact)
    d = f.degree
    out: List[Scalar] = [zero(exact)] * (d + 1)
    powers: List[List[List[Scalar]]] = [[[1]] for _ in range(f.nvars)]
    for exp, coef in f.as_dict().items():
        c = coef if exact else float(coef)
        acc: List[Scalar] = [c]
        for i, k in enumerate(exp):
            if not k:
                continue
            cache = powers[i]
            while len(cache) <= k:
                cache.append(_upoly_mul(cache[-1], [es[i], xs[i]]))
            acc = _upoly_mul(acc, cache[k])
        offset = d + 1 - len(acc)
        for idx, value in enumerate(acc):
            out[offset + idx] = out[offset + idx] + value
    return out if exact else [float(v) for v in out]


def coefficient(f: MultiPoly, alpha: Sequence[int]) -> Scalar:
    check_length(alpha, f.nvars, "multi-index")
    return f.as_dict().get(tuple(int(a) for a in alpha), zero(f.exact))


def coefficient_distance(perturbed: MultiPoly, base: MultiPoly) -> float:
    """Sup-norm coefficient distance relative to the base polynomial's scale."""
    scale = base.sup_norm()
    return (perturbed - base).sup_norm() / (scale if scale > 0 else 1.0)


def permute_variables(f: MultiPoly, perm: Sequence[int]) -> MultiPoly:
    """Rename x_i to x_{perm[i]}."""
    if sorted(perm) != list(range(f.nvars)):
        raise InvalidInputError(
            f"{tuple(perm)} is not a permutation of {f.nvars} indices"
        )
    out: Dict[Exponent, Scalar] = {}
    for exp, coef in f.as_dict().items():
        moved = [0] * f.nvars
        for i, e in enumerate(exp):
            moved[perm[i]] = e
        out[tuple(moved)] = coef
    return MultiPoly(f.nvars, out, f.exact)


def specialize(f: MultiPoly, index: int, value: Any) -> MultiPoly:
    """Substitute x_index = value and drop that variable."""
    if f.nvars == 1:
        raise InvalidInputError("cannot specialize a univariate polynomial")
    if not 0 <= index < f.nvars:
        raise InvalidInputError(f"variable index {index} out of range")
    exact = f.exact and is_exact_scalar(value)
    v = to_scalar(value, exact)
    out: Dict[Exponent, Scalar] = {}
    for exp, coef in f.as_dict().items():
        key = exp[:index] + exp[index + 1 :]
        term = (coef if exact else float(coef)) * v ** exp[index]
        out[key] = out[key] + term if key in out else term
    return MultiPoly(f.nvars - 1, out, exact)


def scale_variables(f: MultiPoly, factors: Sequence[Any]) -> MultiPoly:
    """f(λ_0 x_0, …, λ_{n-1} x_{n-1})."""
    check_length(factors, f.nvars, "scaling vector")
    exact = f.exact and is_exact_vector(factors)
    lam = to_vector(factors, exact)
    out: Dict[Exponent, Scalar] = {}
    for exp, coef in f.as_dict().items():
        out[exp] = (coef if exact else float(coef)) * _monomial(lam, exp)
    return MultiPoly(f.nvars, out, exact)


def multi_indices(nvars: int, max_degree: int) -> Iterator[Exponent]:
    """All exponent vectors with total degree ≤ max_degree."""
    for total in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            exp = [0] * nvars
            for i in combo:
                exp[i] += 1
            yield tuple(exp)

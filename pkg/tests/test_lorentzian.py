"""
Unit tests for log-concavity, Lorentzian-signature and K-stability checks.
"""

from fractions import Fraction

import numpy as np
import pytest

from lorentz.errors import InvalidInputError
from lorentz.hyperbolic import (
    hyperbolicity_cone,
    orthant,
    pullback_cone,
    sample_interior,
)
from lorentz.lorentzian import (
    bivariate_coefficients,
    contraction,
    is_log_concave_at,
    is_log_concave_sequence,
    is_strictly_log_concave_at,
    k_stable_check,
    lorentzian_over_cone,
    m_convex_support,
    nuij_closure,
)
from lorentz.mixeddisc import determinantal_polynomial
from lorentz.numeric import det
from lorentz.poly import MultiPoly, compose_linear, directional_derivative


@pytest.fixture
def circle() -> MultiPoly:
    """x1^2 + x2^2."""
    return MultiPoly(2, {(2, 0): 1, (0, 2): 1})


@pytest.fixture
def pencil() -> MultiPoly:
    """det(x1 A1 + x2 A2) for a tridiagonal A1 and A2 = diag(1, 2, 3)."""
    A1 = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
    A2 = [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    return determinantal_polynomial([A1, A2])


@pytest.mark.unit
class TestPointwiseLogConcavity:
    """Tests for log-concavity at a single point."""

    def test_e2_at_ones(self, e2: MultiPoly) -> None:
        """The Hessian of e2 is J - I, strictly Lorentzian."""
        assert is_log_concave_at(e2, [1, 1, 1])
        assert is_strictly_log_concave_at(e2, [1, 1, 1])

    def test_circle_is_not_log_concave(self, circle: MultiPoly) -> None:
        """2 I has two positive eigenvalues."""
        assert not is_log_concave_at(circle, [1, 1])
        assert not is_strictly_log_concave_at(circle, [1, 1])

    def test_linear_forms(self) -> None:
        """Degree one is log-concave but never strictly so."""
        f = MultiPoly.linear_form([1, 2])

        assert is_log_concave_at(f, [1, 1])
        assert not is_strictly_log_concave_at(f, [1, 1])

    def test_strict_needs_positive_value(self, quadric: MultiPoly) -> None:
        """f(a) must be positive for strict log-concavity."""
        with pytest.raises(InvalidInputError):
            is_strictly_log_concave_at(quadric, [0, 1, 0])

    def test_point_length_checked(self, e2: MultiPoly) -> None:
        """The point must have one entry per variable."""
        with pytest.raises(InvalidInputError):
            is_log_concave_at(e2, [1, 1])

    def test_cubic_with_two_positive_eigenvalues(self) -> None:
        """x1^3 - x1^2 x2 + x2^3 has Hessian [[4, -2], [-2, 6]] at (1, 1)."""
        f = MultiPoly(2, {(3, 0): 1, (2, 1): -1, (0, 3): 1})

        assert not is_log_concave_at(f, [1, 1])

    def test_contraction(self, e2: MultiPoly) -> None:
        """D_1 e2 = 2 (x1 + x2 + x3), D_1 D_1 e2 = 6."""
        assert contraction(e2, [[1, 1, 1]]).as_dict() == {
            (1, 0, 0): 2,
            (0, 1, 0): 2,
            (0, 0, 1): 2,
        }
        assert contraction(e2, [[1, 1, 1]] * 2).as_dict() == {(0, 0, 0): 6}


@pytest.mark.unit
class TestLorentzianOverCone:
    """Tests for the sampled Lorentzian-signature check."""

    def test_e2_on_orthant(self, e2: MultiPoly) -> None:
        """e2 is strictly Lorentzian on the positive orthant."""
        report = lorentzian_over_cone(e2, orthant(3), n_chains=16, seed=0)

        assert report.holds
        assert report.strict
        assert report.n_chains == 16
        assert report.seed == 0
        assert report.witnesses == ()

    def test_circle_fails_with_witness(self, circle: MultiPoly) -> None:
        """Every chain of x1^2 + x2^2 has two positive eigenvalues."""
        report = lorentzian_over_cone(circle, orthant(2), n_chains=4, seed=0)

        assert not report
        assert report.witnesses
        assert report.witnesses[0].inertia == (2, 0, 0)

    def test_quartic_on_its_hyperbolicity_cone(self, quartic: MultiPoly) -> None:
        """A hyperbolic polynomial is Lorentzian on its hyperbolicity cone."""
        K = hyperbolicity_cone(quartic, [1, 1, 1, 1], validate=False)

        report = lorentzian_over_cone(quartic, K, n_chains=8, seed=5)

        assert report.holds

    def test_sign_normalization(self, e2: MultiPoly) -> None:
        """-e2 is checked as e2 when asked to normalize the sign."""
        report = lorentzian_over_cone(
            -e2, orthant(3), n_chains=8, seed=0, normalize_sign=True
        )

        assert report.negated
        assert report.holds

    def test_degree_one(self) -> None:
        """Linear forms positive on the cone pass, never strictly."""
        report = lorentzian_over_cone(
            MultiPoly.linear_form([1, 2]), orthant(2), n_chains=8, seed=0
        )

        assert report.holds
        assert not report.strict

    def test_same_seed_same_report(self, e2: MultiPoly) -> None:
        """Reports are reproducible for a fixed seed."""
        first = lorentzian_over_cone(e2, orthant(3), n_chains=8, seed=42)
        second = lorentzian_over_cone(e2, orthant(3), n_chains=8, seed=42)

        assert first == second

    def test_rejects_bad_inputs(self, e2: MultiPoly) -> None:
        """Dimension mismatches and inhomogeneous inputs are rejected."""
        with pytest.raises(InvalidInputError):
            lorentzian_over_cone(e2, orthant(2), n_chains=4)
        with pytest.raises(InvalidInputError):
            lorentzian_over_cone(e2 + 1, orthant(3), n_chains=4)

    def test_invariant_under_linear_substitution(self, e2: MultiPoly) -> None:
        """e2(My) is Lorentzian on the pulled-back orthant M^-1 K."""
        rng = np.random.default_rng(1)
        checked = 0

        while checked < 5:
            M = rng.integers(-2, 3, size=(3, 3)).tolist()
            if det(M) == 0:
                continue
            K = pullback_cone(orthant(3), M)

            report = lorentzian_over_cone(compose_linear(e2, M), K, n_chains=8, seed=0)

            assert report.holds, M
            checked += 1

    def test_closed_under_directional_derivatives(self, quartic: MultiPoly) -> None:
        """D_a f stays Lorentzian on K for a sampled from K."""
        K = hyperbolicity_cone(quartic, [1, 1, 1, 1], validate=False)
        directions = sample_interior(K, 3, np.random.default_rng(7))

        for a in directions:
            derivative = directional_derivative(quartic, list(a))

            assert lorentzian_over_cone(derivative, K, n_chains=8, seed=0).holds


@pytest.mark.unit
class TestKStability:
    """Tests for sampled K-stability."""

    def test_e2_is_orthant_stable(self, e2: MultiPoly) -> None:
        """e2 is hyperbolic in every positive direction."""
        verdict = k_stable_check(e2, orthant(3), n_samples=12, seed=0, line_samples=8)

        assert verdict.holds
        assert verdict.n_samples == 12

    def test_quadric_is_not_orthant_stable(self, quadric: MultiPoly) -> None:
        """The Lorentz quadric changes sign on the positive orthant."""
        verdict = k_stable_check(
            quadric, orthant(3), n_samples=32, seed=0, line_samples=8
        )

        assert not verdict.holds
        assert verdict.witness is not None

    def test_no_samples(self, e2: MultiPoly) -> None:
        """Zero samples hold vacuously."""
        assert k_stable_check(e2, orthant(3), n_samples=0, seed=0).holds

    def test_positive_definite_pencil(self, pencil: MultiPoly) -> None:
        """det(x1 A1 + x2 A2) with positive definite A_i is orthant-stable."""
        verdict = k_stable_check(
            pencil, orthant(2), n_samples=32, seed=0, line_samples=16
        )

        assert verdict.holds

    def test_stable_polynomials_are_lorentzian(self, pencil: MultiPoly) -> None:
        """A K-stable polynomial and its negative pass the check on K."""
        K = orthant(2)

        assert k_stable_check(pencil, K, n_samples=16, seed=1).holds
        assert lorentzian_over_cone(pencil, K, n_chains=16, seed=1).holds
        negative = lorentzian_over_cone(
            -pencil, K, n_chains=16, seed=1, normalize_sign=True
        )
        assert negative.holds
        assert negative.negated


@pytest.mark.unit
class TestSupportAndSequences:
    """Tests for M-convexity and log-concave sequences."""

    def test_e2_support_is_m_convex(self, e2: MultiPoly) -> None:
        """The support of e2 is the set of 0/1 vectors of weight two."""
        assert m_convex_support(e2)
        assert m_convex_support(e2, symmetric=True)

    def test_circle_support_is_not_m_convex(self, circle: MultiPoly) -> None:
        """(2,0) and (0,2) have no exchange through (1,1)."""
        assert not m_convex_support(circle)

    @pytest.mark.parametrize(
        ("values", "expected"),
        [
            ([1, 2, 1], True),
            ([1, 1, 2], False),
            ([1, 0, 1], False),
            ([0, 0, 1, 2, 1], True),
            ([1, -1, 1], False),
            ([Fraction(1, 2), 1, 2], True),
        ],
    )
    def test_log_concave_sequences(self, values: list, expected: bool) -> None:
        """Internal zeros and negative entries fail, a_k^2 >= a_{k-1} a_{k+1}."""
        assert is_log_concave_sequence(values) is expected

    def test_ultra_log_concavity(self) -> None:
        """[1, 1, 1] is log-concave but 1/4 < 1 breaks the ultra form."""
        assert is_log_concave_sequence([1, 1, 1])
        assert not is_log_concave_sequence([1, 1, 1], ultra=True)
        assert is_log_concave_sequence([1, 2, 1], ultra=True)

    def test_bivariate_coefficients(self) -> None:
        """(x1 + x2)^2 has coefficients 1, 2, 1."""
        f = MultiPoly.linear_form([1, 1]) ** 2

        coeffs = bivariate_coefficients(f)

        assert coeffs == [1, 2, 1]
        assert is_log_concave_sequence(coeffs, ultra=True)

    def test_bivariate_needs_two_variables(self, e2: MultiPoly) -> None:
        """Three variables are rejected."""
        with pytest.raises(InvalidInputError):
            bivariate_coefficients(e2)


@pytest.mark.unit
class TestNuijClosure:
    """Tests for strict Lorentzian approximation by Nuij perturbations."""

    def test_perturbations_are_strict_and_close(self, quadric: MultiPoly) -> None:
        """Smaller s moves the coefficients less and stays strictly Lorentzian."""
        steps = nuij_closure(quadric, 0, [0.1, 0.01], n_chains=8, seed=0)

        assert len(steps) == 2
        assert steps[0].distance > steps[1].distance
        assert steps[1].distance < 1e-1
        assert all(step.report.holds and step.report.strict for step in steps)

    def test_quartic_perturbations(self, quartic: MultiPoly) -> None:
        """Distances shrink with s and every perturbation is strictly Lorentzian."""
        steps = nuij_closure(quartic, 0, [0.1, 0.01, 0.001], n_chains=16, seed=0)

        distances = [step.distance for step in steps]
        assert distances[0] > distances[1] > distances[2]
        assert distances == pytest.approx([0.451, 0.0408, 0.0040], rel=0.05)
        assert distances[2] < 1e-2
        assert all(step.report.holds and step.report.strict for step in steps)

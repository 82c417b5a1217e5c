"""
Unit tests for inertia, Lorentzian classification and the
equivalent strict log-concavity criteria.
"""

from typing import List, Tuple

import numpy as np
import pytest

from lorentz.errors import InvalidInputError
from lorentz.models import LorentzClass
from lorentz.numeric import SymMatrix
from lorentz.poly import MultiPoly, hessian_at
from lorentz.spectra import (
    congruence,
    deflate,
    deflation_check,
    eigen_signature,
    lorentz_class,
    negative_definite_on_complement,
    rayleigh_check,
    slc_equivalence,
)


@pytest.fixture
def quartic_hessian(quartic: MultiPoly) -> SymMatrix:
    return hessian_at(quartic, [1, 1, 1, 1])


@pytest.mark.unit
class TestEigenSignature:
    """Tests for inertia counting and classification."""

    def test_quartic_hessian_is_strictly_lorentzian(
        self, quartic_hessian: SymMatrix
    ) -> None:
        """16 (J - I) has eigenvalues 48 and -16 three times."""
        report = eigen_signature(quartic_hessian)

        assert report.inertia == (1, 0, 3)
        assert abs(max(report.eigenvalues) - 48.0) < 1e-9
        assert all(abs(v + 16.0) < 1e-9 for v in sorted(report.eigenvalues)[:3])
        assert lorentz_class(quartic_hessian) is LorentzClass.LORENTZIAN_STRICT

    def test_zero_eigenvalue_is_lorentzian(self) -> None:
        """One positive and one zero eigenvalue: Lorentzian but not strict."""
        Q = SymMatrix([[1, 0, 0], [0, 0, 0], [0, 0, -1]])

        assert eigen_signature(Q).inertia == (1, 1, 1)
        assert lorentz_class(Q) is LorentzClass.LORENTZIAN

    def test_negative_semidefinite(self) -> None:
        """No positive eigenvalue."""
        Q = SymMatrix([[-2, 1], [1, -2]])

        assert lorentz_class(Q) is LorentzClass.NEGATIVE_SEMIDEFINITE

    def test_two_positive_eigenvalues(self) -> None:
        """The identity is not Lorentzian beyond dimension one."""
        assert lorentz_class(SymMatrix([[1, 0], [0, 1]])) is LorentzClass.NOT_LORENTZIAN

    def test_custom_tolerance_absorbs_small_eigenvalue(self) -> None:
        """An eigenvalue inside the tolerance counts as zero."""
        Q = SymMatrix([[1.0, 0.0], [0.0, 1e-6]])

        assert eigen_signature(Q, tol=1e-3).inertia == (1, 1, 0)

    def test_asymmetric_matrix_rejected(self) -> None:
        """Symmetry is checked on construction."""
        with pytest.raises(InvalidInputError):
            SymMatrix([[1, 2], [3, 4]])


@pytest.mark.unit
class TestCongruence:
    """Tests for inertia-preserving congruences."""

    def test_congruence_preserves_inertia(self, quartic_hessian: SymMatrix) -> None:
        """Sylvester's law of inertia under a random invertible congruence."""
        rng = np.random.default_rng(7)
        M = rng.standard_normal((4, 4)) + 4 * np.eye(4)

        transformed = congruence(quartic_hessian, M)

        assert eigen_signature(transformed).inertia == (1, 0, 3)


@pytest.mark.unit
class TestStrictLogConcavityCriteria:
    """Tests for the deflation and complement criteria."""

    def test_deflation_of_quartic_hessian(self, quartic_hessian: SymMatrix) -> None:
        """(a'Qa) Q - (Qa)(Qa)' = 768 J - 3072 I at a = 1."""
        D = deflate(quartic_hessian, [1, 1, 1, 1])

        assert D.exact
        assert D[0, 0] == 768 - 3072
        assert D[0, 1] == 768
        assert deflation_check(quartic_hessian, [1, 1, 1, 1])

    def test_complement_of_quartic_hessian(self, quartic_hessian: SymMatrix) -> None:
        """On the complement of 1 the Hessian is -16 I."""
        assert negative_definite_on_complement(quartic_hessian, [1, 1, 1, 1])

    def test_all_criteria_agree_when_strict(self, quartic_hessian: SymMatrix) -> None:
        """The three criteria hold together for a strictly Lorentzian Hessian."""
        report = slc_equivalence(quartic_hessian, [1, 1, 1, 1])

        assert report.signature_strict
        assert report.deflation_semidefinite
        assert report.complement_negative_definite
        assert report.consistent

    def test_all_criteria_agree_when_not_strict(self) -> None:
        """diag(1, 1, -1) fails all three criteria at e1."""
        Q = SymMatrix([[1, 0, 0], [0, 1, 0], [0, 0, -1]])

        report = slc_equivalence(Q, [1, 0, 0])

        assert not report.signature_strict
        assert not report.deflation_semidefinite
        assert not report.complement_negative_definite
        assert report.consistent

    def test_deflation_rejects_small_t(self, quartic_hessian: SymMatrix) -> None:
        """The deflation parameter must be at least one."""
        with pytest.raises(InvalidInputError):
            deflate(quartic_hessian, [1, 1, 1, 1], t=0.5)

    def test_deflation_needs_positive_quadratic_value(self) -> None:
        """a'Qa must be positive."""
        Q = SymMatrix([[1, 0], [0, -1]])

        with pytest.raises(InvalidInputError):
            deflate(Q, [0, 1])


def _random_form(rng: np.random.Generator, n_pos: int) -> Tuple[SymMatrix, List[float]]:
    """Random symmetric Q with n_pos positive eigenvalues and a with a'Qa > 0."""
    n = int(rng.integers(max(3, n_pos + 1), 7))
    basis, _ = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.array([1.0] * n_pos + [-1.0] * (n - n_pos))
    q = basis @ np.diag(signs * rng.uniform(0.5, 3.0, n)) @ basis.T
    Q = SymMatrix(q.tolist(), exact=False, symmetrize=True)
    while True:
        a = basis[:, 0] + 0.1 * rng.standard_normal(n)
        if a @ q @ a > 0:
            return Q, [float(v) for v in a]


@pytest.mark.unit
class TestDeflationLemma:
    """Tests for the negative semidefinite deflation of Lorentzian forms."""

    @pytest.mark.parametrize("t", [1, 2, 10])
    def test_lorentzian_forms_deflate(self, t: int) -> None:
        """(a'Qa) Q - t (Qa)(Qa)' is negative semidefinite for Lorentzian Q."""
        rng = np.random.default_rng(t)

        for _ in range(100):
            Q, a = _random_form(rng, 1)

            assert deflation_check(Q, a, t)

    def test_two_positive_eigenvalues_are_rejected(self) -> None:
        """A second positive eigenvalue survives the rank-one deflation."""
        rng = np.random.default_rng(0)

        for _ in range(100):
            Q, a = _random_form(rng, int(rng.integers(2, 4)))

            assert not deflation_check(Q, a, 1)

    def test_criteria_agree_on_random_forms(self) -> None:
        """Signature, deflation and complement tests give the same answer."""
        rng = np.random.default_rng(1)
        checked = 0

        while checked < 100:
            n = int(rng.integers(2, 6))
            g = rng.standard_normal((n, n))
            q = (g + g.T) / 2
            a = rng.standard_normal(n)
            if a @ q @ a <= 0:
                continue

            report = slc_equivalence(SymMatrix(q.tolist(), exact=False), list(a))

            assert report.consistent, q
            checked += 1


@pytest.mark.unit
class TestRayleighCheck:
    """Tests for the c-Rayleigh scan on the quartic."""

    def test_quartic_violates_c_one_and_a_half(self, quartic: MultiPoly) -> None:
        """At the all-ones point 16 * 8 > 1.5 * 8 * 8."""
        violations = rayleigh_check(quartic, 1.5, [[1, 1, 1, 1]])

        assert violations
        assert any(
            v.alpha == (1, 1, 0, 0) and {v.i, v.j} == {2, 3} for v in violations
        )

    def test_quartic_passes_c_two(self, quartic: MultiPoly) -> None:
        """c = 2 meets the witness with equality and nothing else breaks."""
        assert rayleigh_check(quartic, 2.0, [[1, 1, 1, 1]]) == []

    def test_linear_polynomial_has_nothing_to_check(self) -> None:
        """Degree below two gives no tuples."""
        assert rayleigh_check(MultiPoly.linear_form([1, 2]), 1.0, [[1, 1]]) == []

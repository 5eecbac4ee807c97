import math

import numpy as np
import pytest

from rs_toolkit import DomainError, QParameter, q_pochhammer_finite
from rs_toolkit.polynomials import (
    MomentKernel,
    generating_function,
    generating_product,
    integral_representation_check,
    kernel_moment,
    rs_poly,
    rs_poly_direct,
    rs_poly_eval,
    rs_poly_normalized,
    rs_poly_table,
    sw_poly,
    szego_gram,
)


def brute_q_binomial(n, k, q):
    """Oracle via plain products; also valid for q > 1 (the swapped family)."""
    if k < 0 or k > n:
        return 0.0
    out = 1.0
    for j in range(1, k + 1):
        out *= (1.0 - q ** (n - k + j)) / (1.0 - q**j)
    return out


class TestBasePolynomials:
    def test_low_degrees(self, qp):
        z = 0.3 - 0.7j
        assert rs_poly(0, z, qp) == 1.0
        assert rs_poly(1, z, qp) == pytest.approx(1 + z)
        assert rs_poly(2, z, qp) == pytest.approx(1 + (1 + qp.q) * z + z * z)

    def test_value_at_one(self):
        assert rs_poly(2, 1.0, 0.5) == pytest.approx(3.5, rel=1e-14)

    def test_constant_term(self, qp):
        for n in range(6):
            assert rs_poly(n, 0.0, qp) == 1.0

    def test_recurrence_vs_direct(self, qp, rng):
        # |z| up to the circle radius, degrees up to 64
        radius = qp.q**-0.5
        zs = radius * rng.uniform(0.1, 1.0, 6) * np.exp(1j * rng.uniform(-np.pi, np.pi, 6))
        for n in range(0, 65, 8):
            for z in zs:
                a = rs_poly(n, z, qp)
                b = rs_poly_direct(n, z, qp)
                assert abs(a - b) <= 1e-11 * max(1.0, abs(b))

    def test_eval_method_switch(self):
        assert rs_poly_eval(4, 0.2, 0.5).method == "direct_sum"
        assert rs_poly_eval(17, 0.2, 0.5).method == "recurrence"

    def test_table_consistency(self, q_half):
        z = np.array([0.4 + 0.1j, -0.3j])
        table = rs_poly_table(10, z, q_half)
        for n in (0, 3, 10):
            for i in range(2):
                assert table[n, i] == pytest.approx(rs_poly_direct(n, z[i], q_half))


class TestNormalizedFamily:
    def test_ground_level(self, q_half):
        assert rs_poly_normalized(0, 0.7, q_half) == pytest.approx(
            (2 * math.pi) ** -0.5)

    def test_three_term_recurrence(self, qp, rng):
        z = complex(*rng.uniform(-0.8, 0.8, 2))
        q = qp.q
        for n in range(1, 33):
            lhs = rs_poly_normalized(n + 1, z, qp)
            rhs = math.sqrt(q / (1 - q ** (n + 1))) * (
                (1 + z) * rs_poly_normalized(n, z, qp)
                - math.sqrt(q * (1 - q**n)) * z * rs_poly_normalized(n - 1, z, qp))
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))

    def test_shift_identities(self, qp, rng):
        # the four scaling-shift relations of the normalized family
        z = complex(*rng.uniform(-0.7, 0.7, 2))
        q = qp.q
        for n in range(1, 17):
            r_z = rs_poly_normalized(n, z, qp)
            r_qz = rs_poly_normalized(n, q * z, qp)
            r_q2z = rs_poly_normalized(n, q * q * z, qp)
            rm_z = rs_poly_normalized(n - 1, z, qp)
            rm_qz = rs_poly_normalized(n - 1, q * z, qp)
            c = math.sqrt(q * (1 - q**n))
            assert abs(r_z - r_qz - c * z * rm_z) < 1e-11
            assert abs(r_qz - q**n * r_z - c * rm_qz) < 1e-11
            assert abs(r_qz - r_q2z - c * q * z * rm_qz) < 1e-11
            assert abs(r_z - r_q2z - q * (1 - q**n) * z * r_z
                       - c * (1 - q * z) * z * rm_z) < 1e-11


class TestCompanionFamily:
    def test_low_degrees(self, q_half):
        assert sw_poly(0, 0.9, q_half) == 1.0
        assert sw_poly(1, 0.9, q_half) == pytest.approx(1.9)

    def test_parameter_swap_identity(self, qp):
        # G_n(z; q) equals the base family at the inverted parameter,
        # expanded term by term with the oracle binomial
        z = 0.37 - 0.21j
        for n in range(11):
            swapped = sum(brute_q_binomial(n, k, 1.0 / qp.q) * z**k
                          for k in range(n + 1))
            assert sw_poly(n, z, qp) == pytest.approx(swapped, rel=1e-10)


class TestGeneratingFunction:
    def test_zero_argument_reduces_to_euler_product(self, qp):
        w = 0.4
        got = generating_function(w, 0.0, qp, n_terms=80)
        want = generating_product(w, 0.0, qp)
        assert got.value == pytest.approx(want, rel=1e-12)

    def test_zero_weight(self, qp):
        assert generating_function(0.0, 0.7, qp).value == 1.0

    def test_partial_sum_against_product(self):
        q = QParameter(0.5)
        got = generating_function(0.3, 0.5, q, n_terms=60)
        want = generating_product(0.3, 0.5, q)
        assert abs(got.value - want) < 1e-12
        assert abs(got.value - want) <= got.error + 1e-12

    def test_tail_decreases(self, q_half):
        want = generating_product(0.5, 0.8, q_half)
        diffs = [abs(generating_function(0.5, 0.8, q_half, n_terms=n).value - want)
                 for n in range(5, 61, 5)]
        floor = 1e-12  # below this the difference is rounding noise
        for a, b in zip(diffs, diffs[1:]):
            if a < floor:
                break
            assert b <= a * 1.001

    def test_domain(self, q_half):
        with pytest.raises(DomainError):
            generating_function(1.2, 0.1, q_half)
        with pytest.raises(DomainError):
            generating_function(0.9, 1.2, q_half)


class TestMomentKernels:
    @pytest.mark.parametrize("kind,r", [("P", 1.0), ("P", 0.0), ("Y", 0.0), ("Y", 1.5)])
    def test_moments_match_closed_form(self, kind, r, q_half):
        kernel = MomentKernel(kind, r, q_half)
        for k in range(9):
            got = kernel_moment(k, kernel)
            assert got == pytest.approx(kernel.exact_moment(k), rel=1e-9)

    def test_ground_moment_is_one(self, q_half):
        assert kernel_moment(0, MomentKernel("P", 1.0, q_half)) == pytest.approx(
            1.0, rel=1e-12)

    def test_spec_values(self):
        q = QParameter(0.5)
        assert kernel_moment(1, MomentKernel("P", 1.0, q)) == pytest.approx(2.0, rel=1e-10)
        assert kernel_moment(2, MomentKernel("Y", 0.0, q)) == pytest.approx(16.0, rel=1e-10)

    def test_density_nonnegative(self, q_half):
        w = np.geomspace(1e-3, 1e3, 301)
        for kind in ("P", "Y"):
            assert np.all(MomentKernel(kind, 1.0, q_half).density(w) >= 0.0)

    def test_degenerate_q_rejected(self):
        with pytest.raises(DomainError):
            MomentKernel("P", 1.0, QParameter(1.0 - 1e-9))


class TestIntegralRepresentations:
    def test_circle_average_trivial_degree(self, q_half):
        assert integral_representation_check("pochhammer_e5", 0, q_half, a=0.3) < 1e-14

    def test_circle_average(self, q_half):
        res = integral_representation_check("pochhammer_e5", 1, q_half, a=0.3)
        assert res < 1e-12
        # right-hand side sanity: (0.3; q)_1 = 0.7
        assert q_pochhammer_finite(0.3, q_half, 1) == pytest.approx(0.7)

    def test_circle_average_requires_integer_ratio(self, q_half):
        with pytest.raises(DomainError):
            integral_representation_check("pochhammer_e5", 2, q_half, a=0.3, s=3, u=1)

    def test_kernel_p_degree_zero(self, q_half):
        assert integral_representation_check("kernelP_e6", 0, q_half, z=0.5) < 1e-12

    def test_kernel_p(self, q_half):
        res = integral_representation_check("kernelP_e6", 2, q_half, z=0.4)
        assert res < 1e-10

    def test_kernel_y(self, q_half):
        res = integral_representation_check("kernelY_e10", 2, q_half, z=0.4)
        assert res < 1e-10


class TestSzegoOrthogonality:
    def test_gram_matrix(self, qp):
        gram = szego_gram(8, qp)
        target = np.diag([
            float(np.real(q_pochhammer_finite(qp.q, qp, n))) / qp.q**n
            for n in range(9)])
        assert np.max(np.abs(gram - target)) < 1e-9

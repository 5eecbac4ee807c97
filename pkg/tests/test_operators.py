import math

import numpy as np
import pytest

from rs_toolkit import CirclePoint, DomainError, QParameter, q_number
from rs_toolkit.operators import (
    BasisTruncation,
    algebra_check,
    build_operator,
    energy_spectrum,
    qdiff_ladder_check,
    qdiff_lower,
    qdiff_number_check,
    qdiff_raise,
)
from rs_toolkit.rsfunctions import rs_function


@pytest.fixture
def trunc():
    return BasisTruncation(32)


class TestMatrices:
    def test_lowering_entries(self, trunc, qp):
        b = build_operator("B", trunc, qp).matrix
        assert b[0, 1] == pytest.approx(1.0)  # [1]_q = 1
        for n in range(1, 6):
            assert b[n - 1, n] == pytest.approx(math.sqrt(q_number(n, qp)))

    def test_adjoint_pair(self, trunc, qp):
        b = build_operator("B", trunc, qp).matrix
        bd = build_operator("Bdag", trunc, qp).matrix
        assert np.array_equal(bd, b.conj().T)

    def test_number_from_ladder(self, trunc, qp):
        b = build_operator("B", trunc, qp).matrix
        bd = build_operator("Bdag", trunc, qp).matrix
        nq = build_operator("Nq", trunc, qp).matrix
        interior = slice(0, trunc.n_max - 1)
        assert np.max(np.abs((bd @ b - nq)[interior, interior])) < 1e-13

    def test_hermitian_by_construction(self, trunc, qp):
        for label in ("C", "S"):
            m = build_operator(label, trunc, qp).matrix
            assert np.max(np.abs(m - m.conj().T)) == 0.0

    def test_shift_products(self, trunc, qp):
        em = build_operator("Eminus", trunc, qp).matrix
        ep = build_operator("Eplus", trunc, qp).matrix
        n = trunc.n_max
        interior = slice(0, n - 1)
        assert np.max(np.abs((em @ ep - np.eye(n))[interior, interior])) == 0.0
        proj0 = np.zeros((n, n))
        proj0[0, 0] = 1.0
        assert np.max(np.abs((ep @ em - np.eye(n) + proj0)[interior, interior])) == 0.0

    def test_unknown_label(self, trunc, qp):
        with pytest.raises(DomainError):
            build_operator("X", trunc, qp)

    def test_truncation_validation(self):
        with pytest.raises(DomainError):
            BasisTruncation(1)


class TestTrigCombinations:
    def test_sum_of_squares(self, trunc, qp):
        c = build_operator("C", trunc, qp).matrix
        s = build_operator("S", trunc, qp).matrix
        n = trunc.n_max
        proj0 = np.zeros((n, n))
        proj0[0, 0] = 1.0
        target = np.eye(n) - 0.5 * proj0
        got = c @ c + s @ s
        interior = slice(0, n - 1)
        assert np.max(np.abs((got - target)[interior, interior])) < 1e-15

    def test_commutator_is_ground_projector(self, trunc, qp):
        c = build_operator("C", trunc, qp).matrix
        s = build_operator("S", trunc, qp).matrix
        n = trunc.n_max
        proj0 = np.zeros((n, n), dtype=complex)
        proj0[0, 0] = 1.0
        interior = slice(0, n - 1)
        got = c @ s - s @ c
        assert np.max(np.abs((got - 0.5j * proj0)[interior, interior])) < 1e-15


class TestAlgebra:
    def test_all_relations(self, qp):
        res = algebra_check(BasisTruncation(64), qp)
        assert max(res.values()) < 1e-12

    def test_weyl_recovery(self):
        # standard commutator approaches the undeformed one as q -> 1
        q = QParameter(1.0 - 1e-8)
        trunc = BasisTruncation(64)
        b = build_operator("B", trunc, q).matrix
        bd = build_operator("Bdag", trunc, q).matrix
        comm = (b @ bd - bd @ b)[:63, :63]
        assert np.max(np.abs(comm - np.eye(63))) < 1e-6


class TestLadderForms:
    def test_actions(self, qp):
        p = CirclePoint(0.8, qp)
        for n in range(1, 9):
            res_low, res_up = qdiff_ladder_check(n, p)
            assert res_low < 1e-8
            assert res_up < 1e-8

    def test_lowering_annihilates_ground(self, qp):
        res_low, _ = qdiff_ladder_check(0, CirclePoint(0.8, qp))
        assert res_low < 1e-10

    def test_number_form(self, qp):
        p = CirclePoint(0.8, qp)
        for n in range(0, 9):
            assert qdiff_number_check(n, p) < 1e-8

    def test_matrix_route_agrees_with_function_route(self, q_half):
        # lowering a basis element in coefficient space matches the
        # pointwise q-differential action on the circle
        p = CirclePoint(1.2, q_half)
        trunc = BasisTruncation(12)
        b = build_operator("B", trunc, q_half).matrix
        for n in range(1, 8):
            e_n = np.zeros(trunc.n_max, dtype=complex)
            e_n[n] = 1.0
            coeffs = b @ e_n
            synth = sum(coeffs[k] * rs_function(k, p) for k in range(trunc.n_max))
            direct = qdiff_lower(n, p)
            assert abs(synth - direct) < 1e-8

    def test_raising_with_supplied_values(self, q_half):
        # explicit value route equals the basis-function route
        p = CirclePoint(0.9, q_half)
        n = 3
        from rs_toolkit.rsfunctions import rs_function_lattice
        fz = rs_function_lattice(n, p, 0)
        fq2z = rs_function_lattice(n, p, 1)
        a = qdiff_raise(n, p)
        b = qdiff_raise(n, p, values=(fz, fq2z))
        assert a == pytest.approx(b, rel=1e-13)


class TestSpectrum:
    def test_first_gap(self, qp):
        _, delta0 = energy_spectrum(0, qp)
        assert delta0 == pytest.approx(1.0 + qp.q, rel=1e-14)

    def test_gap_consistency(self, qp):
        for n in range(6):
            e_n, delta_n = energy_spectrum(n, qp, e0=2.0)
            e_next, _ = energy_spectrum(n + 1, qp, e0=2.0)
            assert e_next - e_n == pytest.approx(delta_n * 2.0, rel=1e-12)

    def test_gaps_decrease(self, qp):
        gaps = [energy_spectrum(n, qp)[1] for n in range(10)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_equal_spacing_limit(self):
        q = QParameter(1.0 - 1e-10)
        for n in range(5):
            assert energy_spectrum(n, q)[1] == pytest.approx(2.0, rel=1e-8)

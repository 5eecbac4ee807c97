import math

import numpy as np
import pytest

from rs_toolkit import DegenerateLabel, QParameter
from rs_toolkit.observables import (
    auxiliary_series,
    moments_closed_form,
    moments_matrix_route,
    number_moment,
    uncertainty_CS,
    uncertainty_CS_from_moments,
    uncertainty_symmetric,
    uncertainty_symmetric_from_moments,
)
from rs_toolkit.operators import BasisTruncation
from rs_toolkit.states import CoherentLabel

FIELDS = ("meanC", "meanS", "meanC2", "meanS2", "meanCSplus", "meanCSminus",
          "meanN", "meanN2", "meanNC", "meanNS")


def label_of(qv, mu2, theta=math.pi / 3):
    return CoherentLabel(math.sqrt(mu2), theta, QParameter(qv))


class TestAuxiliarySeries:
    def test_at_zero(self, qp):
        aux = auxiliary_series(label_of(qp.q, 0.0))
        assert aux.Mq == pytest.approx(1.0, rel=1e-14)
        assert aux.Lq == pytest.approx(1.0, rel=1e-14)
        assert aux.Nq_series == pytest.approx(1.0 / math.sqrt(1.0 + qp.q), rel=1e-13)

    def test_monotone_in_mu2(self, qp):
        grid = np.linspace(0.0, 0.9 / (1.0 - qp.q), 8)
        prev = None
        for mu2 in grid:
            aux = auxiliary_series(label_of(qp.q, mu2))
            if prev is not None:
                assert aux.Mq > prev.Mq
                assert aux.Nq_series > prev.Nq_series
                assert aux.Lq > prev.Lq
            prev = aux

    def test_positive(self, qp):
        aux = auxiliary_series(label_of(qp.q, 1.0 if qp.q > 0.4 else 0.5))
        assert aux.Mq > 0 and aux.Nq_series > 0 and aux.Lq > 0

    def test_weighted_consistency(self, rng):
        # the L series is the (2n+1)-weighted M series, term by term
        from rs_toolkit import q_factorial, q_number
        for _ in range(5):
            qv = rng.uniform(0.4, 0.9)
            mu2 = rng.uniform(0.0, 0.8) / (1.0 - qv)
            aux = auxiliary_series(label_of(qv, mu2))
            direct = sum((2 * n + 1) * mu2**n
                         / (q_factorial(n, qv) * math.sqrt(q_number(n + 1, qv)))
                         for n in range(120))
            assert aux.Lq == pytest.approx(direct, rel=1e-10)


class TestNumberMoments:
    def test_vacuum(self, qp):
        label = label_of(qp.q, 0.0)
        assert number_moment(0, label) == pytest.approx(1.0)
        assert number_moment(1, label) == 0.0
        assert number_moment(2, label) == 0.0

    def test_variance_nonnegative(self, qp):
        label = label_of(qp.q, 0.5 / (1.0 - qp.q))
        assert number_moment(2, label) >= number_moment(1, label) ** 2

    def test_not_poissonian(self):
        # the deformed excitation distribution has variance != mean
        label = label_of(0.8, 2.0)
        v = number_moment(2, label) - number_moment(1, label) ** 2
        assert abs(v - number_moment(1, label)) > 1e-6


class TestMomentRoutes:
    def test_vacuum_closed_form(self, qp):
        ms = moments_closed_form(label_of(qp.q, 0.0))
        assert ms.meanC == 0.0
        assert ms.meanS == 0.0
        assert ms.meanC2 + ms.meanS2 == pytest.approx(0.5, rel=1e-13)

    def test_two_route_agreement(self):
        trunc = BasisTruncation(300)
        for qv in (0.5, 0.7, 0.9):
            for mu2 in (0.2, 0.8, 1.6):
                a = moments_closed_form(label_of(qv, mu2))
                b = moments_matrix_route(label_of(qv, mu2), trunc)
                for f in FIELDS:
                    assert abs(getattr(a, f) - getattr(b, f)) < 1e-8, (qv, mu2, f)

    def test_commutator_mean_is_imaginary(self, qp):
        ms = moments_closed_form(label_of(qp.q, 0.5))
        assert np.real(ms.meanCSminus) == pytest.approx(0.0, abs=1e-15)
        assert np.imag(ms.meanCSminus) > 0.0

    def test_second_moment_ratio(self):
        # <C^2 - S^2> / <CS + SC> = cot(2 theta) when both are nonzero
        ms = moments_closed_form(label_of(0.8, 1.5, theta=0.4))
        ratio = (ms.meanC2 - ms.meanS2) / ms.meanCSplus
        assert ratio == pytest.approx(1.0 / math.tan(0.8), rel=1e-12)

    def test_asymptotic_regime(self):
        ms = moments_closed_form(label_of(0.99, 50.0))
        assert abs(ms.meanC - math.cos(math.pi / 3)) < 0.05
        assert abs(ms.meanC2 + ms.meanS2 - 1.0) < 0.05


class TestUncertaintyCS:
    def test_vacuum_equality(self, qp):
        u, bound = uncertainty_CS(label_of(qp.q, 0.0))
        assert u == pytest.approx(1.0 / 16.0, rel=1e-13)
        assert bound == pytest.approx(1.0 / 16.0, rel=1e-13)

    def test_bound_holds_on_grid(self):
        for qv in (0.8, 0.85, 0.9, 0.95):
            for mu2 in np.linspace(0.0, 4.0, 9):
                if (1.0 - qv) * mu2 >= 0.999:
                    continue
                u, bound = uncertainty_CS(label_of(qv, mu2))
                assert u + 1e-12 >= bound

    def test_theta_invariance(self):
        values = []
        for theta in (0.0, math.pi / 3, 1.7):
            ms = moments_closed_form(label_of(0.85, 1.2, theta=theta))
            values.append(uncertainty_CS_from_moments(ms)[0])
        assert max(values) - min(values) < 1e-14

    def test_moment_route_agrees(self):
        label = label_of(0.85, 1.2, theta=0.9)
        a = uncertainty_CS(label)
        b = uncertainty_CS_from_moments(moments_closed_form(label))
        assert a[0] == pytest.approx(b[0], rel=1e-11)
        assert a[1] == pytest.approx(b[1], rel=1e-11)

    def test_commutator_bound_fades_near_classical_limit(self):
        _, bound_deformed = uncertainty_CS(label_of(0.8, 2.0))
        _, bound_classical = uncertainty_CS(label_of(0.99, 50.0))
        assert bound_classical < 1e-3
        assert bound_classical < bound_deformed


class TestUncertaintySymmetric:
    def test_degenerate_vacuum(self):
        with pytest.raises(DegenerateLabel):
            uncertainty_symmetric(label_of(0.8, 0.0))

    def test_lower_bound_on_grid(self):
        for qv in (0.8, 0.85, 0.9, 0.95):
            for mu2 in np.linspace(0.1, 4.0, 8):
                if (1.0 - qv) * mu2 >= 0.999:
                    continue
                assert uncertainty_symmetric(label_of(qv, mu2)) >= 0.25 - 1e-12

    def test_theta_invariance(self):
        values = []
        for theta in (0.0, math.pi / 3, 1.7):
            ms = moments_closed_form(label_of(0.9, 1.5, theta=theta))
            values.append(uncertainty_symmetric_from_moments(ms))
        assert max(values) - min(values) < 1e-12

    def test_asymptotic_limit(self):
        assert abs(uncertainty_symmetric(label_of(0.99, 50.0)) - 0.25) < 0.02

    def test_monotone_approach_along_probe_path(self):
        # probes along (1-q)|mu|^2 = 0.5 approach the classical value
        dist = [abs(uncertainty_symmetric(label_of(qv, 0.5 / (1.0 - qv))) - 0.25)
                for qv in (0.9, 0.96, 0.99)]
        assert dist[0] > dist[1] > dist[2]
        assert dist[2] < 0.05


def test_asymptotic_mean_values_monotone():
    # the first moment approaches cos(theta) monotonically along the probe path
    dist = [abs(moments_closed_form(label_of(qv, 0.5 / (1.0 - qv))).meanC - 0.5)
            for qv in (0.9, 0.96, 0.99)]
    assert dist[0] > dist[1] > dist[2]
    assert dist[2] < 0.05

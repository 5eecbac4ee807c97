"""Mean values of the cosine/sine/number observables in coherent states, the
auxiliary power series behind them, and both uncertainty relations.

Every closed-form moment has an independent matrix route (coefficient-space
expectation with the truncated operators); their agreement is the module's
master cross-check. The uncertainty combinations are angle-independent, which
the tests verify through the moment route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLabel, DomainError, NonConvergence
from .operators import BasisTruncation, build_operator
from .qcalc import (
    DEFAULT_POLICY,
    QParameter,
    TruncationPolicy,
    q_exponential,
    q_number,
)
from .states import CoherentLabel, coherent_coefficients

__all__ = [
    "AuxiliarySeries",
    "MomentSet",
    "auxiliary_series",
    "number_moment",
    "moments_closed_form",
    "moments_matrix_route",
    "uncertainty_CS",
    "uncertainty_CS_from_moments",
    "uncertainty_symmetric",
    "uncertainty_symmetric_from_moments",
]


@dataclass(frozen=True)
class AuxiliarySeries:
    """Values of the three positive series M_q, N_q, L_q at x = |mu|^2:

    M_q(x) = sum x^n / ([n]_q! sqrt([n+1]_q))
    N_q(x) = sum x^n / ([n]_q! sqrt([n+2]_q [n+1]_q))
    L_q(x) = sum (2n+1) x^n / ([n]_q! sqrt([n+1]_q))
    """

    Mq: float
    Nq_series: float
    Lq: float


@dataclass(frozen=True)
class MomentSet:
    """Named first and second moments of the cosine, sine and number
    observables for one coherent label."""

    meanC: float
    meanS: float
    meanC2: float
    meanS2: float
    meanCSplus: float       # <CS + SC>
    meanCSminus: complex    # <CS - SC>, purely imaginary
    meanN: float
    meanN2: float
    meanNC: float           # <(NC + CN)/2>
    meanNS: float
    label: CoherentLabel


def auxiliary_series(label: CoherentLabel,
                     policy: TruncationPolicy | None = None) -> AuxiliarySeries:
    """Sum the three auxiliary series with term recursions on the
    [n]_q!-denominators."""
    policy = policy or DEFAULT_POLICY
    q = label.q
    x = label.mu_abs**2
    m_tot = n_tot = l_tot = 0.0
    # t_n = x^n / ([n]_q! sqrt([n+1]_q)); u_n adds the sqrt([n+2]_q) factor
    t = 1.0 / math.sqrt(q_number(1, q))
    u = 1.0 / math.sqrt(q_number(2, q) * q_number(1, q))
    for n in range(policy.max_terms):
        m_tot += t
        n_tot += u
        l_tot += (2 * n + 1) * t
        if (2 * n + 1) * t < policy.abs_tol and n > 0:
            return AuxiliarySeries(m_tot, n_tot, l_tot)
        r = x / math.sqrt(q_number(n + 1, q) * q_number(n + 2, q))
        t *= r
        u *= r * math.sqrt(q_number(n + 2, q) / q_number(n + 3, q))
    raise NonConvergence("auxiliary series did not meet tolerance")


def number_moment(k: int, label: CoherentLabel,
                  policy: TruncationPolicy | None = None) -> float:
    """<N^k> = e_q^(-1)((1-q)|mu|^2) sum_n n^k |mu|^(2n) / [n]_q!."""
    if k < 0:
        raise DomainError("number_moment needs k >= 0")
    policy = policy or DEFAULT_POLICY
    q = label.q
    x = label.mu_abs**2
    prefactor = 1.0 / float(np.real(q_exponential((1.0 - q.q) * x, q).value))
    total = 0.0
    t = 1.0
    for n in range(policy.max_terms):
        total += n**k * t
        if t * max(1, n) ** k < policy.abs_tol and n > 0:
            return prefactor * total
        t *= x / q_number(n + 1, q)
    raise NonConvergence("number moment series did not meet tolerance")


def moments_closed_form(label: CoherentLabel) -> MomentSet:
    """All MomentSet entries from the closed forms.

    With E = e_q^(-1)((1-q)|mu|^2) and the auxiliary series at x = |mu|^2:

        <C> = |mu| E M_q cos(theta),          <S> = same with sin(theta)
        <C^2 +- S^2> = (1 - E/2) +- |mu|^2 E N_q cos(2 theta)
        <CS + SC> = |mu|^2 E N_q sin(2 theta)
        <CS - SC> = (i/2) E
        <(NC + CN)/2> = (|mu|/2) E L_q cos(theta), <(NS + SN)/2> likewise
    """
    q = label.q
    x = label.mu_abs**2
    aux = auxiliary_series(label)
    e_inv = 1.0 / float(np.real(q_exponential((1.0 - q.q) * x, q).value))
    c1 = label.mu_abs * e_inv * aux.Mq
    c2 = x * e_inv * aux.Nq_series
    sum_sq = 1.0 - 0.5 * e_inv
    return MomentSet(
        meanC=c1 * math.cos(label.theta),
        meanS=c1 * math.sin(label.theta),
        meanC2=0.5 * sum_sq + 0.5 * c2 * math.cos(2.0 * label.theta),
        meanS2=0.5 * sum_sq - 0.5 * c2 * math.cos(2.0 * label.theta),
        meanCSplus=c2 * math.sin(2.0 * label.theta),
        meanCSminus=0.5j * e_inv,
        meanN=number_moment(1, label),
        meanN2=number_moment(2, label),
        meanNC=0.5 * label.mu_abs * e_inv * aux.Lq * math.cos(label.theta),
        meanNS=0.5 * label.mu_abs * e_inv * aux.Lq * math.sin(label.theta),
        label=label,
    )


def moments_matrix_route(label: CoherentLabel, trunc: BasisTruncation) -> MomentSet:
    """Same moments as coefficient-space expectations v^H M v with the
    truncated operator matrices; independent of the closed forms."""
    q = label.q
    v = coherent_coefficients(label, trunc).coeffs
    c = build_operator("C", trunc, q).matrix
    s = build_operator("S", trunc, q).matrix
    nmat = build_operator("N", trunc, q).matrix

    def expect(m) -> complex:
        return complex(np.conj(v) @ (m @ v))

    cs = c @ s
    sc = s @ c
    nc = 0.5 * (nmat @ c + c @ nmat)
    ns = 0.5 * (nmat @ s + s @ nmat)
    return MomentSet(
        meanC=float(np.real(expect(c))),
        meanS=float(np.real(expect(s))),
        meanC2=float(np.real(expect(c @ c))),
        meanS2=float(np.real(expect(s @ s))),
        meanCSplus=float(np.real(expect(cs + sc))),
        meanCSminus=expect(cs - sc),
        meanN=float(np.real(expect(nmat))),
        meanN2=float(np.real(expect(nmat @ nmat))),
        meanNC=float(np.real(expect(nc))),
        meanNS=float(np.real(expect(ns))),
        label=label,
    )


def _abc(label: CoherentLabel) -> tuple[float, float, float]:
    q = label.q
    x = label.mu_abs**2
    aux = auxiliary_series(label)
    e_inv = 1.0 / float(np.real(q_exponential((1.0 - q.q) * x, q).value))
    a = 0.5 - 0.25 * e_inv
    b = 0.5 * x * e_inv * aux.Nq_series
    c = label.mu_abs * e_inv * aux.Mq
    return a, b, c


def uncertainty_CS(label: CoherentLabel) -> tuple[float, float]:
    """Variance-product uncertainty for the cosine/sine pair.

    Returns (U, bound) with U = (a - b)(a + b - c^2) and
    bound = |<CS - SC>|^2 / 4; U >= bound, with equality at the vacuum. U does
    not depend on the label angle.
    """
    a, b, c = _abc(label)
    q = label.q
    e_inv = 1.0 / float(np.real(
        q_exponential((1.0 - q.q) * label.mu_abs**2, q).value))
    return (a - b) * (a + b - c * c), 0.0625 * e_inv**2


def uncertainty_CS_from_moments(ms: MomentSet) -> tuple[float, float]:
    """Same quantity assembled from raw moments (angle dependence must
    cancel): V_C V_S - V_CS^2 and |<[C, S]>|^2 / 4."""
    v_c = ms.meanC2 - ms.meanC**2
    v_s = ms.meanS2 - ms.meanS**2
    v_cs = 0.5 * ms.meanCSplus - ms.meanC * ms.meanS
    return v_c * v_s - v_cs**2, 0.25 * abs(ms.meanCSminus) ** 2


def uncertainty_symmetric(label: CoherentLabel) -> float:
    """Symmetric number/phase uncertainty ratio; >= 1/4, angle-independent,
    and -> 1/4 in the weak-deformation large-|mu| regime."""
    if label.mu_abs == 0.0:
        raise DegenerateLabel("the symmetric relation divides by <C>^2 + <S>^2")
    return uncertainty_symmetric_from_moments(moments_closed_form(label))


def uncertainty_symmetric_from_moments(ms: MomentSet) -> float:
    if ms.meanC == 0.0 and ms.meanS == 0.0:
        raise DegenerateLabel("the symmetric relation divides by <C>^2 + <S>^2")
    v_n = ms.meanN2 - ms.meanN**2
    v_c = ms.meanC2 - ms.meanC**2
    v_s = ms.meanS2 - ms.meanS**2
    v_nc = ms.meanNC - ms.meanN * ms.meanC
    v_ns = ms.meanNS - ms.meanN * ms.meanS
    return (v_n * (v_c + v_s) - (v_nc**2 + v_ns**2)) / (ms.meanC**2 + ms.meanS**2)

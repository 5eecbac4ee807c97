"""Orthonormal circle functions Psi_n, the complex weight, scaling relations,
the bilinear kernel, and the q-derivative identities.

All evaluation happens on the circle chart z = -q^(-1/2) e^(i phi). Fractional
powers are pinned by the principal branch there:

    z^(1/2) = i q^(-1/4) e^(i phi/2),     z^(1/4) = e^(i pi/4) q^(-1/8) e^(i phi/4),

under which the weight constituents reduce to theta functions at phi/4:
F -> theta3, G -> theta1, and M(z; q) = E(phi; q).

Lattice points q^s z (integer s >= 0 shifts) are reachable two ways: through
the exact scaling relations, and through the shifted two-sided series

    F(q^s z) = sum_l nome^(l(l+s)) e^(i l phi / 2)
    G(q^s z) = -i sum_l (-1)^l nome^((l+1/2)(l+1/2+s)) e^(i (2l+1) phi / 4)

(nome = sqrt(q)); the two routes are independent, which is what the scaling
check exercises. Odd shifts land on the companion half-lattice: there the
scaling relations hold with the constituents continued to the theta2/theta4
companions and the root conventions i^(1/2) = e^(i pi/4),
(-i)^(1/2) = e^(3i pi/4), (-1)^(1/2) = i, pinned numerically at the reference
point phi = 0.37, q = 0.5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import theta_sum
from .errors import DomainError, NonConvergence
from .numerics import periodic_trapezoid
from .polynomials import rs_poly_normalized_table
from .qcalc import (
    DEFAULT_POLICY,
    QParameter,
    TruncationPolicy,
    q_number,
    q_pochhammer_infinite,
)
from .theta import CirclePoint, theta1_grid, theta3_grid

__all__ = [
    "WeightValue",
    "weight",
    "weight_grid",
    "weight_scaled_series",
    "rs_function",
    "rs_function_grid",
    "rs_function_lattice",
    "scaling_relations_check",
    "orthonormality_gram",
    "bilinear_kernel",
    "bilinear_kernel_series",
    "kernel_reproducing_residual",
    "kernel_semigroup_residual",
    "q_derivative_identities_check",
]


@dataclass(frozen=True)
class WeightValue:
    """Weight M(z; q) and its two constituents at one circle point."""

    M: complex
    F: complex
    G: complex


def _norm_const(q: QParameter) -> float:
    return float(theta3_grid(0.0, math.sqrt(q.q))[0]) ** (-1.5)


def weight_grid(phi, q: QParameter) -> np.ndarray:
    """M on a grid of circle angles."""
    nome = math.sqrt(q.q)
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    f = theta3_grid(phi / 4.0, nome)
    g = theta1_grid(phi / 4.0, nome)
    return _norm_const(q) * (f * f + 1j * g * g)


def weight(p: CirclePoint) -> WeightValue:
    """Weight and constituents at a circle point; F and G are real there."""
    nome = math.sqrt(p.q.q)
    f = float(theta3_grid(p.phi / 4.0, nome)[0])
    g = float(theta1_grid(p.phi / 4.0, nome)[0])
    return WeightValue(M=_norm_const(p.q) * (f * f + 1j * g * g), F=f, G=g)


def _lattice_series_length(nome: float, shift: int, policy: TruncationPolicy) -> int:
    base = int(math.ceil(math.sqrt(math.log(policy.abs_tol) / math.log(nome)))) + 3
    terms = abs(shift) + base
    if terms > policy.max_terms:
        raise NonConvergence("lattice theta series exceeds the term budget")
    return terms


def weight_scaled_series(p: CirclePoint, shift: int,
                         policy: TruncationPolicy | None = None) -> WeightValue:
    """F, G, M at the lattice point q^shift z via the shifted two-sided sums.

    Independent of the closed-form scaling relations; used to cross-check
    them and to evaluate the weight q-derivative non-tautologically.
    """
    policy = policy or DEFAULT_POLICY
    q = p.q
    nome = math.sqrt(q.q)
    L = _lattice_series_length(nome, shift, policy)
    ell = np.arange(-L, L + 1, dtype=float)
    f = complex(np.sum(nome ** (ell * (ell + shift)) * np.exp(0.5j * ell * p.phi)))
    g = complex(-1j * np.sum((-1.0) ** ell
                             * nome ** ((ell + 0.5) * (ell + 0.5 + shift))
                             * np.exp(0.25j * (2.0 * ell + 1.0) * p.phi)))
    return WeightValue(M=_norm_const(q) * (f * f + 1j * g * g), F=f, G=g)


def rs_function_grid(n_top: int, phi, q: QParameter) -> np.ndarray:
    """Psi_0..Psi_{n_top} on a grid of angles (rows indexed by degree)."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    z = -q.q ** (-0.5) * np.exp(1j * phi)
    return rs_poly_normalized_table(n_top, z, q) * weight_grid(phi, q)[None, :]


def rs_function(n: int, p: CirclePoint) -> complex:
    """Psi_n(z; q) = R_n(z; q) M(z; q) on the circle."""
    if n < 0:
        return 0.0 + 0.0j  # Psi_{-1} convention for boundary identities
    return complex(rs_function_grid(n, p.phi, p.q)[n, 0])


def rs_function_lattice(n: int, p: CirclePoint, r: int) -> complex:
    """Psi_n at the even lattice point q^(2r) z, using the exact relation
    M(q^(2r) z) = (-1)^r q^(-r(r+1/2)) z^(-r) M(z)."""
    if n < 0:
        return 0.0 + 0.0j
    q = p.q
    z = p.z
    from .polynomials import normalization_coeffs, rs_poly_table
    rn = complex(normalization_coeffs(n, q)[n]
                 * rs_poly_table(n, np.array([q.q ** (2 * r) * z]), q.q)[n, 0])
    scale = (-1.0) ** r * q.q ** (-r * (r + 0.5)) * z ** (-r)
    return rn * scale * complex(weight_grid(p.phi, q)[0])


# root conventions pinned at the reference point phi = 0.37, q = 0.5
_ROOT_I = np.exp(0.25j * math.pi)        # i^(1/2)
_ROOT_MINUS_I = np.exp(0.75j * math.pi)  # (-i)^(1/2)
_ROOT_MINUS_ONE = 1j                     # (-1)^(1/2)


def _companions(p: CirclePoint) -> tuple[float, float]:
    """theta2/theta4 companions of F and G on the shifted half-lattice."""
    nome = math.sqrt(p.q.q)
    f_c = float(theta_sum(p.phi / 4.0, nome, _lattice_series_length(nome, 0, DEFAULT_POLICY), 2)[0])
    g_c = float(theta_sum(p.phi / 4.0, nome, _lattice_series_length(nome, 0, DEFAULT_POLICY), 4)[0])
    return f_c, g_c


def scaling_relations_check(r: int, p: CirclePoint) -> dict[str, float]:
    """Scaled residuals of the six lattice scaling identities at one point.

    Even case, shift 2r:
        F(q^(2r) z) = i^r q^(-r(r+1/2)/2) z^(-r/2) F(z)
        G(q^(2r) z) = (-i)^r q^(-r(r+1/2)/2) z^(-r/2) G(z)
        M(q^(2r) z) = (-1)^r q^(-r(r+1/2)) z^(-r) M(z)

    Odd case, shift 2r+1: same shape with half-odd exponents, the right-hand
    constituents continued to the companion sheet (F -> theta2, G -> theta4,
    M -> conjugate-structured companion), and the module root conventions.
    Left sides come from the independent shifted series route.
    """
    q = p.q
    qv = q.q
    z = p.z
    zhalf = 1j * qv ** (-0.25) * np.exp(0.5j * p.phi)
    zquarter = _ROOT_I * qv ** (-0.125) * np.exp(0.25j * p.phi)
    w0 = weight(p)
    f_c, g_c = _companions(p)
    m_c = _norm_const(q) * (f_c * f_c - 1j * g_c * g_c)

    even = weight_scaled_series(p, 2 * r)
    pref = qv ** (-0.5 * r * (r + 0.5)) * zhalf ** (-r)
    even_rhs_f = (1j) ** r * pref * w0.F
    even_rhs_g = (-1j) ** r * pref * w0.G
    even_rhs_m = (-1.0) ** r * qv ** (-r * (r + 0.5)) * z ** (-r) * w0.M

    odd = weight_scaled_series(p, 2 * r + 1)
    pref = qv ** (-0.5 * (r + 0.5) * (r + 1.0)) * zquarter ** (-(2 * r + 1))
    odd_rhs_f = (1j) ** r * _ROOT_I * pref * f_c
    odd_rhs_g = (-1j) ** r * _ROOT_MINUS_I * pref * g_c
    odd_rhs_m = ((-1.0) ** r * _ROOT_MINUS_ONE
                 * qv ** (-(r + 0.5) * (r + 1.0)) * zhalf ** (-(2 * r + 1)) * m_c)

    def rel(a, b):
        return float(abs(a - b) / max(1.0, abs(a), abs(b)))

    return {
        "F_even": rel(even.F, even_rhs_f),
        "G_even": rel(even.G, even_rhs_g),
        "M_even": rel(even.M, even_rhs_m),
        "F_odd": rel(odd.F, odd_rhs_f),
        "G_odd": rel(odd.G, odd_rhs_g),
        "M_odd": rel(odd.M, odd_rhs_m),
    }


def orthonormality_gram(n_top: int, q: QParameter, nodes: int = 2048) -> np.ndarray:
    """Gram matrix of Psi_0..Psi_{n_top} under the circle average; exactly the
    identity in the limit."""
    grid = periodic_trapezoid(nodes)
    phi, wgt = grid.nodes_weights()
    table = rs_function_grid(n_top, phi, q)
    return np.einsum("mk,nk,k->mn", np.conj(table), table, wgt.astype(complex))


def _qpoch_grid(a: np.ndarray, qv: float, policy: TruncationPolicy) -> np.ndarray:
    from ._backend import qpoch_prod
    from .qcalc import _qpoch_terms
    amax = float(np.max(np.abs(a)))
    if amax == 0.0:
        return np.ones_like(a)
    return qpoch_prod(np.ascontiguousarray(a, dtype=complex), qv,
                      _qpoch_terms(amax, qv, policy))


def bilinear_kernel(beta, phi, epsilon: float, q: QParameter,
                    policy: TruncationPolicy | None = None) -> np.ndarray | complex:
    """Closed form of the bilinear kernel K_eps(beta, phi; q) on the circle.

    Hermitian in (beta, phi); broadcasts over array angle arguments. The
    eps = 0 value is Psi_0*(beta) Psi_0(phi).
    """
    if not (0.0 <= epsilon < 1.0):
        raise DomainError("bilinear kernel needs 0 <= epsilon < 1")
    policy = policy or DEFAULT_POLICY
    qv = q.q
    beta = np.asarray(beta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    scalar = beta.ndim == 0 and phi.ndim == 0
    beta, phi = np.broadcast_arrays(np.atleast_1d(beta), np.atleast_1d(phi))
    delta = np.exp(1j * (phi - beta))
    num = (_qpoch_grid(qv * epsilon**2 * delta, qv, policy)
           * np.conj(weight_grid(beta, q)) * weight_grid(phi, q))
    den = (2.0 * math.pi
           * _qpoch_grid(epsilon * delta, qv, policy)
           * _qpoch_grid(-math.sqrt(qv) * epsilon * np.exp(-1j * beta), qv, policy)
           * _qpoch_grid(-math.sqrt(qv) * epsilon * np.exp(1j * phi), qv, policy)
           * q_pochhammer_infinite(qv * epsilon, q, policy).value)
    out = num / den
    return complex(out[0]) if scalar else out


def bilinear_kernel_series(beta: float, phi: float, epsilon: float, q: QParameter,
                           n_terms: int = 200) -> complex:
    """Truncated eigenfunction sum sum_n eps^n Psi_n*(beta) Psi_n(phi)."""
    if not (0.0 <= epsilon < 1.0):
        raise DomainError("bilinear kernel needs 0 <= epsilon < 1")
    tb = rs_function_grid(n_terms, beta, q)[:, 0]
    tp = rs_function_grid(n_terms, phi, q)[:, 0]
    eps_pow = epsilon ** np.arange(n_terms + 1)
    return complex(np.sum(eps_pow * np.conj(tb) * tp))


def kernel_reproducing_residual(n: int, epsilon: float, phi: float,
                                q: QParameter, nodes: int = 2048) -> float:
    """|circle integral of K_eps(beta, phi) Psi_n(beta) - eps^n Psi_n(phi)|."""
    grid = periodic_trapezoid(nodes)
    beta, wgt = grid.nodes_weights()
    kvals = bilinear_kernel(beta, phi, epsilon, q)
    psi_beta = rs_function_grid(n, beta, q)[n]
    lhs = np.sum(wgt * kvals * psi_beta)
    rhs = epsilon**n * rs_function(n, CirclePoint(phi, q))
    return float(abs(lhs - rhs))


def kernel_semigroup_residual(eps1: float, eps2: float, gamma: float, phi: float,
                              q: QParameter, nodes: int = 2048) -> float:
    """|integral over beta of K_eps1(beta, phi) K_eps2(gamma, beta)
    - K_(eps1 eps2)(gamma, phi)|."""
    grid = periodic_trapezoid(nodes)
    beta, wgt = grid.nodes_weights()
    lhs = np.sum(wgt * bilinear_kernel(beta, phi, eps1, q)
                 * bilinear_kernel(gamma, beta, eps2, q))
    rhs = bilinear_kernel(gamma, phi, eps1 * eps2, q)
    return float(abs(lhs - rhs))


def q_derivative_identities_check(n: int, p: CirclePoint) -> tuple[float, float]:
    """Residuals of the two displayed forms of D_{q^2} Psi_n at one point.

    The derivative itself is the finite difference between the circle point
    and the even lattice point q^2 z (reached via the exact scaling of the
    weight). Form one lowers to Psi_{n-1}; form two raises to Psi_{n+1}.
    """
    q = p.q
    qv = q.q
    z = p.z
    psi_n = rs_function(n, p)
    psi_m = rs_function(n - 1, p)
    psi_p = rs_function(n + 1, p)
    dpsi = (psi_n - rs_function_lattice(n, p, 1)) / (z * (1.0 - qv * qv))

    sq = math.sqrt(qv)
    lower = ((1.0 - qv * z * (1.0 - sq - qv**n)) / (qv**1.5 * z * z * (1.0 - qv * qv)) * psi_n
             - math.sqrt(q_number(n, q) / (1.0 - qv)) * (1.0 - qv * z)
             / (qv * z * (1.0 + qv)) * psi_m)
    upper = (-(1.0 - qv * (z + sq + qv**n)) / (qv**1.5 * z * (1.0 - qv * qv)) * psi_n
             + math.sqrt(q_number(n + 1, q) / (1.0 - qv)) * (1.0 - qv * z)
             / (qv**2 * z * z * (1.0 + qv)) * psi_p)
    return float(abs(dpsi - lower)), float(abs(dpsi - upper))

"""Deformed coherent states and cosine/sine phase states.

Coherent states are eigenvectors of the lowering operator with label mu;
their coefficients over the Psi_n basis and the closed-form circle function
are two independent routes that must agree. Phase states are eigenvectors of
the Hermitian cosine and sine combinations of the one-step shifts; all their
identities live at coefficient level, so circle evaluation is composition
with the basis functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, TruncationWarning
from .numerics import gauss_legendre
from .operators import BasisTruncation
from .qcalc import (
    QParameter,
    TruncationPolicy,
    jackson_q_integral,
    q_exponential,
    q_factorial,
    q_number,
    q_pochhammer_infinite,
)
from .rsfunctions import rs_function_grid, weight_grid
from .theta import CirclePoint

__all__ = [
    "CoherentLabel",
    "PhaseLabel",
    "StateVector",
    "coherent_coefficients",
    "coherent_function",
    "coherent_function_grid",
    "coherent_expansion",
    "coherent_overlap",
    "resolution_of_unity_check",
    "phase_state_coefficients",
    "phase_completeness_check",
    "phase_orthogonality_kernel",
    "phase_kernel_smear",
]

_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class CoherentLabel:
    """Lowering-operator eigenvalue mu = mu_abs e^(i theta); the coefficient
    series converges only while (1-q) |mu|^2 < 1."""

    mu_abs: float
    theta: float
    q: QParameter

    def __post_init__(self):
        if self.mu_abs < 0.0:
            raise DomainError("mu_abs must be >= 0")
        if (1.0 - self.q.q) * self.mu_abs**2 >= 1.0:
            raise DomainError(
                f"label outside the convergence region: (1-q) |mu|^2 = "
                f"{(1.0 - self.q.q) * self.mu_abs ** 2:.6g} >= 1")

    @property
    def mu(self) -> complex:
        return self.mu_abs * complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class PhaseLabel:
    """Phase angle gamma; cosine states live on [0, pi], sine states on
    [-pi/2, pi/2]."""

    gamma: float
    kind: Literal["cosine", "sine"]

    def __post_init__(self):
        if self.kind == "cosine":
            lo, hi = 0.0, math.pi
        elif self.kind == "sine":
            lo, hi = -0.5 * math.pi, 0.5 * math.pi
        else:
            raise DomainError(f"unknown phase kind {self.kind!r}")
        if not (lo <= self.gamma <= hi):
            raise DomainError(f"gamma = {self.gamma} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class StateVector:
    """Coefficient sequence over the Psi_n basis, indices 0..n_max-1."""

    coeffs: np.ndarray

    @property
    def n_max(self) -> int:
        return self.coeffs.shape[0]

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def coherent_coefficients(label: CoherentLabel, trunc: BasisTruncation) -> StateVector:
    """Coefficients e_q^(-1/2)((1-q)|mu|^2) mu^n / sqrt([n]_q!).

    The squared moduli are the excitation probabilities; a warning is issued
    when the truncated tail mass exceeds 1e-10.
    """
    q = label.q
    mu = label.mu
    c = np.empty(trunc.n_max, dtype=complex)
    c[0] = q_exponential((1.0 - q.q) * label.mu_abs**2, q).value ** (-0.5)
    for n in range(1, trunc.n_max):
        c[n] = c[n - 1] * mu / math.sqrt(q_number(n, q))
    vec = StateVector(c)
    tail = 1.0 - vec.norm2()
    if tail > _TAIL_TOL:
        warnings.warn(
            f"coherent-state tail mass {tail:.3g} above {_TAIL_TOL:g}; "
            f"increase n_max", TruncationWarning, stacklevel=2)
    return vec


def coherent_function(label: CoherentLabel, p: CirclePoint) -> complex:
    """Closed form of the coherent state on the circle.

    F_mu(z; q) = e_q^(-1/2)((1-q)|mu|^2) M(z; q)
                 / [sqrt(2 pi) (w; q)_inf (w z; q)_inf],   w = sqrt(q(1-q)) mu.
    """
    q = label.q
    w = math.sqrt(q.q * (1.0 - q.q)) * label.mu
    if abs(w) >= 1.0 or abs(w * p.z) >= 1.0:
        raise DomainError("coherent closed form outside product convergence")
    norm = q_exponential((1.0 - q.q) * label.mu_abs**2, q).value ** (-0.5)
    pw = q_pochhammer_infinite(w, q).value
    pwz = q_pochhammer_infinite(w * p.z, q).value
    return complex(norm * weight_grid(p.phi, q)[0] / (math.sqrt(2.0 * math.pi) * pw * pwz))


def coherent_function_grid(label: CoherentLabel, phi) -> np.ndarray:
    """Closed-form coherent state over a grid of circle angles."""
    from .rsfunctions import _qpoch_grid
    from .qcalc import DEFAULT_POLICY
    q = label.q
    w = math.sqrt(q.q * (1.0 - q.q)) * label.mu
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    z = -q.q ** (-0.5) * np.exp(1j * phi)
    if abs(w) >= 1.0 or float(np.max(np.abs(w * z))) >= 1.0:
        raise DomainError("coherent closed form outside product convergence")
    norm = q_exponential((1.0 - q.q) * label.mu_abs**2, q).value ** (-0.5)
    pw = q_pochhammer_infinite(w, q).value
    pwz = _qpoch_grid(w * z, q.q, DEFAULT_POLICY)
    return norm * weight_grid(phi, q) / (math.sqrt(2.0 * math.pi) * pw * pwz)


def coherent_expansion(label: CoherentLabel, p: CirclePoint, n_terms: int) -> complex:
    """Truncated basis expansion of the coherent state at one circle point."""
    vec = coherent_coefficients(label, BasisTruncation(n_terms))
    table = rs_function_grid(n_terms - 1, p.phi, label.q)[:, 0]
    return complex(np.sum(vec.coeffs * table))


def coherent_overlap(nu: CoherentLabel, mu: CoherentLabel) -> complex:
    """Scalar product of two coherent states (nu side conjugated):

    e_q((1-q) mu nu*) / sqrt(e_q((1-q)|mu|^2) e_q((1-q)|nu|^2)).
    """
    if nu.q.q != mu.q.q:
        raise DomainError("overlap needs a common deformation parameter")
    q = mu.q
    x = (1.0 - q.q) * mu.mu * np.conj(nu.mu)
    num = q_exponential(complex(x), q).value
    den = math.sqrt(
        float(np.real(q_exponential((1.0 - q.q) * mu.mu_abs**2, q).value))
        * float(np.real(q_exponential((1.0 - q.q) * nu.mu_abs**2, q).value)))
    return complex(num / den)


def resolution_of_unity_check(n: int, q: QParameter,
                              policy: TruncationPolicy | None = None) -> float:
    """Relative residual of the lattice integral reproducing [n]_q!.

    Integrates |mu|^(2n) / e_q((1-q) q |mu|^2) over [0, 1/(1-q)) with the
    Jackson rule and compares against the q-factorial.
    """
    if n < 0 or n > 60:
        raise DomainError("resolution check supports 0 <= n <= 60")

    def integrand(t: float) -> float:
        return t**n / float(np.real(q_exponential((1.0 - q.q) * q.q * t, q).value))

    val = float(np.real(jackson_q_integral(integrand, q, policy=policy).value))
    target = q_factorial(n, q)
    return abs(val - target) / target


def _phase_coeff_grid(kind: str, gamma, n_max: int) -> np.ndarray:
    """Coefficient matrix c_n(gamma) with gamma along the last axis."""
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    n = np.arange(1, n_max + 1, dtype=float)[:, None]
    if kind == "cosine":
        return math.sqrt(2.0 / math.pi) * np.sin(n * gamma[None, :]) + 0j
    phases = np.array([1.0, 1j, -1.0, -1j])[np.arange(1, n_max + 1) % 4]
    return (1j * math.sqrt(2.0 / math.pi) * phases[:, None]
            * np.sin(n * (gamma[None, :] - 0.5 * math.pi)))


def phase_state_coefficients(label: PhaseLabel, trunc: BasisTruncation) -> StateVector:
    """Coefficients of the cosine or sine phase state.

    cosine: c_n = sqrt(2/pi) sin((n+1) gamma); identically zero at the
    interval endpoints. sine: c_n = i sqrt(2/pi) i^(n+1) sin((n+1)(gamma-pi/2)).
    """
    c = _phase_coeff_grid(label.kind, label.gamma, trunc.n_max)[:, 0]
    return StateVector(c)


def phase_completeness_check(kind: str, trunc: BasisTruncation, beta: float,
                             phi: float, q: QParameter,
                             panels: int = 4) -> float:
    """Residual of the gamma-integrated outer product against the truncated
    basis kernel sum_n Psi_n*(beta) Psi_n(phi).

    Reduces to the orthogonality of sin((n+1) gamma) over the kind's interval,
    so the truncated identity is exact up to quadrature error.
    """
    if kind not in ("cosine", "sine"):
        raise DomainError(f"unknown phase kind {kind!r}")
    lo, hi = (0.0, math.pi) if kind == "cosine" else (-0.5 * math.pi, 0.5 * math.pi)
    rule = gauss_legendre(lo, hi, n=64, panels=panels)
    nodes, wgt = rule.nodes_weights()
    coeffs = _phase_coeff_grid(kind, nodes, trunc.n_max)
    psi_beta = rs_function_grid(trunc.n_max - 1, beta, q)[:, 0]
    psi_phi = rs_function_grid(trunc.n_max - 1, phi, q)[:, 0]
    xb = np.conj(psi_beta) @ np.conj(coeffs)
    xp = psi_phi @ coeffs
    lhs = np.sum(wgt * xb * xp)
    rhs = np.sum(np.conj(psi_beta) * psi_phi)
    return float(abs(lhs - rhs))


def phase_orthogonality_kernel(kind: str, gamma1: float, gamma2: float,
                               trunc: BasisTruncation) -> float:
    """Truncated overlap of two phase states: the Dirichlet-type sum
    (2/pi) sum_{n<n_max} sin((n+1) g1) sin((n+1) g2) (shifted for the sine
    kind). Approaches delta(g1 - g2) only as an approximate identity."""
    if kind not in ("cosine", "sine"):
        raise DomainError(f"unknown phase kind {kind!r}")
    c1 = _phase_coeff_grid(kind, gamma1, trunc.n_max)[:, 0]
    c2 = _phase_coeff_grid(kind, gamma2, trunc.n_max)[:, 0]
    return float(np.real(np.sum(np.conj(c1) * c2)))


def phase_kernel_smear(kind: str, f, gamma: float, trunc: BasisTruncation,
                       panels: int = 8) -> float:
    """Smear a test function against the truncated phase kernel:
    integral over gamma' of D(gamma, gamma') f(gamma'). Reconstructs f(gamma)
    for f inside the truncated sine span."""
    lo, hi = (0.0, math.pi) if kind == "cosine" else (-0.5 * math.pi, 0.5 * math.pi)
    rule = gauss_legendre(lo, hi, n=64, panels=panels)
    nodes, wgt = rule.nodes_weights()
    cg = _phase_coeff_grid(kind, gamma, trunc.n_max)[:, 0]
    cn = _phase_coeff_grid(kind, nodes, trunc.n_max)
    kernel = np.real(np.conj(cg)[None, :] @ cn)[0]
    return float(np.sum(wgt * kernel * f(nodes)))

"""Jacobi theta evaluation, the circle measure, and its complex decomposition.

Conventions (fixed by the orthogonality measure, argument x and nome in (0,1)):

    theta3(x | nome) = 1 + 2 sum_{l>=1} nome^(l^2) cos(2 l x)
    theta1(x | nome) = 2 sum_{l>=0} (-1)^l nome^((l+1/2)^2) sin((2l+1) x)

so the measure orthogonalising the circle polynomials is
theta3(phi/2 | sqrt(q)). The decomposition factor

    E(phi; q) = theta3(0|sqrt(q))^(-3/2) [theta3^2(phi/4|sqrt(q))
                                          + i theta1^2(phi/4|sqrt(q))]

satisfies E * conj(E) = theta3(phi/2 | sqrt(q)); its global phase is fixed so
that E(0; q) > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import theta_sum
from .errors import DomainError, NonConvergence
from .qcalc import DEFAULT_POLICY, QParameter, SeriesValue, TruncationPolicy

__all__ = [
    "CirclePoint",
    "theta3",
    "theta1",
    "theta3_grid",
    "theta1_grid",
    "szego_measure",
    "measure_decomposition",
    "measure_decomposition_grid",
    "ramanujan_f",
]


@dataclass(frozen=True)
class CirclePoint:
    """A point on the orthogonality circle, canonical angle in [-pi, pi)."""

    phi: float
    q: QParameter
    z: complex = field(init=False)

    def __post_init__(self):
        wrapped = math.remainder(self.phi, 2.0 * math.pi)
        if wrapped == math.pi:  # keep the half-open convention at the seam
            wrapped = -math.pi
        object.__setattr__(self, "phi", wrapped)
        object.__setattr__(
            self, "z", -self.q.q ** (-0.5) * complex(math.cos(wrapped), math.sin(wrapped)))


def _series_length(nome: float, policy: TruncationPolicy) -> int:
    """Gaussian-decay cutoff: nome^(L^2) < abs_tol with two guard terms."""
    if not (0.0 < nome < 1.0):
        raise DomainError(f"nome must lie in (0, 1), got {nome}")
    if policy.abs_tol <= 0.0:
        terms = policy.max_terms
    else:
        terms = int(math.ceil(math.sqrt(math.log(policy.abs_tol) / math.log(nome)))) + 2
    if terms > policy.max_terms:
        raise NonConvergence(
            f"theta series needs {terms} terms, policy allows {policy.max_terms}")
    return terms


def _tail_bound(nome: float, terms: int) -> float:
    return 2.0 * nome ** ((terms + 1) ** 2) / (1.0 - nome)


def theta3_grid(x, nome: float, policy: TruncationPolicy | None = None) -> np.ndarray:
    policy = policy or DEFAULT_POLICY
    return theta_sum(x, nome, _series_length(nome, policy), 3)


def theta1_grid(x, nome: float, policy: TruncationPolicy | None = None) -> np.ndarray:
    policy = policy or DEFAULT_POLICY
    return theta_sum(x, nome, _series_length(nome, policy), 1)


def theta3(x: float, nome: float, policy: TruncationPolicy | None = None) -> SeriesValue:
    """theta3(x | nome) with a tail bound."""
    policy = policy or DEFAULT_POLICY
    terms = _series_length(nome, policy)
    return SeriesValue(float(theta_sum(x, nome, terms, 3)[0]), _tail_bound(nome, terms))


def theta1(x: float, nome: float, policy: TruncationPolicy | None = None) -> SeriesValue:
    """theta1(x | nome); odd in x, vanishes at x = 0."""
    policy = policy or DEFAULT_POLICY
    terms = _series_length(nome, policy)
    return SeriesValue(float(theta_sum(x, nome, terms, 1)[0]), _tail_bound(nome, terms))


def szego_measure(p: CirclePoint) -> float:
    """theta3(phi/2 | sqrt(q)): the strictly positive circle weight."""
    return float(theta3_grid(p.phi / 2.0, math.sqrt(p.q.q))[0])


def measure_decomposition_grid(phi, q: QParameter,
                               policy: TruncationPolicy | None = None) -> np.ndarray:
    """E(phi; q) on a grid of angles."""
    nome = math.sqrt(q.q)
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    f = theta3_grid(phi / 4.0, nome, policy)
    g = theta1_grid(phi / 4.0, nome, policy)
    norm = float(theta3_grid(0.0, nome, policy)[0]) ** (-1.5)
    return norm * (f * f + 1j * g * g)


def measure_decomposition(p: CirclePoint,
                          policy: TruncationPolicy | None = None) -> complex:
    """E(phi; q), the complex square root of the circle weight."""
    return complex(measure_decomposition_grid(p.phi, p.q, policy)[0])


def ramanujan_f(a: complex, b: complex,
                policy: TruncationPolicy | None = None) -> SeriesValue:
    """Two-sided theta sum f(a, b) = sum_l a^(l(l+1)/2) b^(l(l-1)/2), |ab| < 1.

    Defined for nonzero a, b; the all-zero corner is handled by the limit
    convention 0^0 = 1 (only the l = 0 and l = -1 terms survive).
    """
    policy = policy or DEFAULT_POLICY
    ab = abs(a * b)
    if ab >= 1.0:
        raise DomainError(f"ramanujan_f needs |ab| < 1, got {ab}")
    total = complex(1.0)  # l = 0 term: a^0 b^0
    last = 1.0
    for l in range(1, policy.max_terms):
        tp = a ** (l * (l + 1) // 2) * b ** (l * (l - 1) // 2)
        tm = a ** (l * (l - 1) // 2) * b ** (l * (l + 1) // 2)
        total += tp + tm
        last = abs(tp) + abs(tm)
        if last < policy.abs_tol:
            return SeriesValue(total, last / max(1.0 - ab, 1e-6))
    raise NonConvergence("ramanujan_f did not meet tolerance")

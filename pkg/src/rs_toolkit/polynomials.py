"""Circle polynomials, their companions, generating function, and the two
kernel-based integral representations.

H_n(z; q) = sum_k qbinom(n, k) z^k is evaluated by its three-term recurrence
by default (O(n), stable); the direct sum is kept as an oracle. G_n is the
companion family obtained by the formal q <-> 1/q swap applied term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ._backend import rs_poly_table as _rs_poly_table
from .errors import DomainError
from .numerics import QuadratureRule, integrate, log_gaussian, periodic_trapezoid
from .qcalc import (
    QParameter,
    SeriesValue,
    TruncationPolicy,
    q_binomial,
    q_pochhammer_finite,
    q_pochhammer_infinite,
)
from .theta import theta3_grid

__all__ = [
    "PolyEval",
    "MomentKernel",
    "rs_poly",
    "rs_poly_direct",
    "rs_poly_eval",
    "rs_poly_table",
    "rs_poly_normalized",
    "rs_poly_normalized_table",
    "normalization_coeffs",
    "sw_poly",
    "generating_function",
    "generating_product",
    "kernel_moment",
    "integral_representation_check",
    "szego_gram",
]


def rs_poly_table(n_top: int, z, q: QParameter | float) -> np.ndarray:
    """H_0..H_{n_top} over a grid of z values (rows indexed by degree)."""
    qv = q.q if isinstance(q, QParameter) else float(q)
    return _rs_poly_table(n_top, z, qv)


def rs_poly(n: int, z: complex, q: QParameter | float) -> complex:
    """H_n(z; q) by the three-term recurrence."""
    if n < 0:
        raise DomainError("rs_poly needs n >= 0")
    return complex(rs_poly_table(n, z, q)[n, 0])


def rs_poly_direct(n: int, z: complex, q: QParameter | float) -> complex:
    """H_n(z; q) by the defining finite sum; oracle for the recurrence."""
    if n < 0:
        raise DomainError("rs_poly_direct needs n >= 0")
    out = complex(0.0)
    zk = complex(1.0)
    for k in range(n + 1):
        out += q_binomial(n, k, q) * zk
        zk *= z
    return out


@dataclass(frozen=True)
class PolyEval:
    n: int
    z: complex
    value: complex
    method: Literal["direct_sum", "recurrence"]


def rs_poly_eval(n: int, z: complex, q: QParameter | float,
                 method: Literal["direct_sum", "recurrence", "auto"] = "auto") -> PolyEval:
    """Evaluate H_n recording the method; 'auto' switches to the recurrence
    above degree 16."""
    if method == "auto":
        method = "recurrence" if n > 16 else "direct_sum"
    value = rs_poly(n, z, q) if method == "recurrence" else rs_poly_direct(n, z, q)
    return PolyEval(n=n, z=z, value=value, method=method)


def normalization_coeffs(n_top: int, q: QParameter | float) -> np.ndarray:
    """[q^n / (2 pi (q; q)_n)]^(1/2) for n = 0..n_top."""
    qv = q.q if isinstance(q, QParameter) else float(q)
    out = np.empty(n_top + 1)
    out[0] = 1.0 / math.sqrt(2.0 * math.pi)
    for n in range(1, n_top + 1):
        out[n] = out[n - 1] * math.sqrt(qv / (1.0 - qv**n))
    return out


def rs_poly_normalized(n: int, z: complex, q: QParameter | float) -> complex:
    """R_n(z; q) = [q^n / (2 pi (q; q)_n)]^(1/2) H_n(z; q)."""
    return complex(normalization_coeffs(n, q)[n]) * rs_poly(n, z, q)


def rs_poly_normalized_table(n_top: int, z, q: QParameter | float) -> np.ndarray:
    """R_0..R_{n_top} over a z grid."""
    return normalization_coeffs(n_top, q)[:, None] * rs_poly_table(n_top, z, q)


def sw_poly(n: int, x: complex, q: QParameter | float) -> complex:
    """G_n(x; q) = sum_k qbinom(n, k) q^(k(k-n)) x^k."""
    if n < 0:
        raise DomainError("sw_poly needs n >= 0")
    qv = q.q if isinstance(q, QParameter) else float(q)
    out = complex(0.0)
    for k in range(n + 1):
        out += q_binomial(n, k, qv) * qv ** (k * (k - n)) * x**k
    return out


def generating_product(w: complex, z: complex, q: QParameter | float,
                       policy: TruncationPolicy | None = None) -> complex:
    """Closed form [(w; q)_inf (wz; q)_inf]^(-1), valid for |w|, |wz| < 1."""
    if abs(w) >= 1.0 or abs(w * z) >= 1.0:
        raise DomainError("generating function needs |w| < 1 and |wz| < 1")
    pw = q_pochhammer_infinite(w, q, policy).value
    pwz = q_pochhammer_infinite(w * z, q, policy).value
    return 1.0 / (pw * pwz)


def generating_function(w: complex, z: complex, q: QParameter | float,
                        n_terms: int = 60) -> SeriesValue:
    """Partial sum sum_{n<=N} H_n(z; q) w^n / (q; q)_n with a tail bound.

    The bound majorises the dropped terms by the positive series at |w|, |z|,
    using the observed geometric decay of the last majorant terms.
    """
    if abs(w) >= 1.0 or abs(w * z) >= 1.0:
        raise DomainError("generating function needs |w| < 1 and |wz| < 1")
    qv = q.q if isinstance(q, QParameter) else float(q)
    table = rs_poly_table(n_terms, np.array([z]), qv)[:, 0]
    majorant = rs_poly_table(n_terms, np.array([abs(z) + 0j]), qv)[:, 0].real
    total = complex(0.0)
    coeff = 1.0      # w^n / (q;q)_n, tracked incrementally
    mcoeff = 1.0
    qn = 1.0
    last_major = 0.0
    for n in range(n_terms + 1):
        total += table[n] * coeff
        last_major = majorant[n] * mcoeff
        if n < n_terms:
            qn *= qv
            coeff = coeff * w / (1.0 - qn)
            mcoeff = mcoeff * abs(w) / (1.0 - qn)
    # geometric extrapolation of the majorant tail
    ratio = max(abs(w), abs(w * z)) / (1.0 - qv ** (n_terms + 1))
    ratio = min(ratio, 0.999)
    return SeriesValue(total, last_major * ratio / (1.0 - ratio))


@dataclass(frozen=True)
class MomentKernel:
    """Log-normal shaped transformation kernel on (0, inf).

    kind "P": density m/sqrt(pi) w^(r-3/2) exp(-(r-1/2)^2/(4m^2) - m^2 ln^2 w)
    kind "Y": density m/sqrt(2 pi) w^(r/2-1) exp(-r^2/(8m^2) - (m^2/2) ln^2 w)

    with q = exp(-1/(2 m^2)). The k-th moments are q^(-k(k-1)/2 - rk) and
    q^(-k(k+r)) respectively.
    """

    kind: Literal["P", "Y"]
    r: float
    q: QParameter

    def __post_init__(self):
        if self.kind not in ("P", "Y"):
            raise DomainError(f"unknown kernel kind {self.kind}")
        if self.q.near_unity:
            raise DomainError("kernel quadrature degenerates for q this close to 1")

    def density(self, omega):
        omega = np.asarray(omega, dtype=float)
        m = self.q.m
        ln = np.log(omega)
        if self.kind == "P":
            return (m / math.sqrt(math.pi) * omega ** (self.r - 1.5)
                    * np.exp(-(self.r - 0.5) ** 2 / (4.0 * m * m) - m * m * ln * ln))
        return (m / math.sqrt(2.0 * math.pi) * omega ** (self.r / 2.0 - 1.0)
                * np.exp(-self.r**2 / (8.0 * m * m) - 0.5 * m * m * ln * ln))

    def exact_moment(self, k: int) -> float:
        qv = self.q.q
        if self.kind == "P":
            return qv ** (-0.5 * k * (k - 1) - self.r * k)
        return qv ** (-k * (k + self.r))

    def gaussian_sigma(self) -> float:
        """Width of exp(-x^2/sigma^2) after omega = exp(x/m^2)."""
        return self.q.m if self.kind == "P" else self.q.m * math.sqrt(2.0)

    def moment_center(self, k: float) -> float:
        """Peak location in x of the omega^k moment integrand."""
        if self.kind == "P":
            return 0.5 * (k + self.r - 0.5)
        return k + 0.5 * self.r

    def default_rule(self, k: float, n: int = 80) -> QuadratureRule:
        return log_gaussian(self.q.m, self.gaussian_sigma(), self.moment_center(k), n=n)


def kernel_moment(k: int, kernel: MomentKernel,
                  rule: QuadratureRule | None = None) -> float:
    """Numerically integrate omega^k against the kernel density."""
    if k < 0:
        raise DomainError("kernel_moment needs k >= 0")
    rule = rule or kernel.default_rule(k)
    val = integrate(lambda w: w**k * kernel.density(w), rule)
    return float(np.real(val.value))


def integral_representation_check(kind: str, n: int, q: QParameter, *,
                                  a: complex = 0.3, z: complex = 0.3,
                                  r: float = 1.0, s: int = 2, u: int = 1,
                                  nodes: int = 2048,
                                  quad_nodes: int = 80) -> float:
    """Residual |quadrature - closed form| for one integral representation.

    kind "pochhammer_e5": circle average of H_n(-q^(-1/2) a^r e^(i s phi); q)
        against theta3(u phi | q^(2u^2/s^2)) equals (a^r; q)_n; s/(2u) must be
        an integer.
    kind "kernelP_e6": (0, inf) integral of (-q^r z w; q)_n against the P
        kernel equals H_n(z; q).
    kind "kernelY_e10": same with the companion polynomial G_n(q^(n+r) z w; q)
        and the Y kernel.
    """
    if n < 0:
        raise DomainError("integral_representation_check needs n >= 0")
    qv = q.q
    if kind == "pochhammer_e5":
        if s % (2 * u) != 0:
            raise DomainError("representation requires s/(2u) to be an integer")
        nome = qv ** (2.0 * u * u / (s * s))
        grid = periodic_trapezoid(nodes)
        phi, wgt = grid.nodes_weights()
        theta = theta3_grid(u * phi, nome)
        hvals = rs_poly_table(n, -qv ** (-0.5) * a**r * np.exp(1j * s * phi), qv)[n]
        lhs = np.sum(wgt * theta * hvals) / (2.0 * math.pi)
        rhs = q_pochhammer_finite(a**r, q, n)
        return float(abs(lhs - rhs))
    if kind == "kernelP_e6":
        kernel = MomentKernel("P", r, q)
        rule = log_gaussian(q.m, kernel.gaussian_sigma(),
                            kernel.moment_center(0.5 * n), n=quad_nodes)

        def integrand(w):
            acc = np.ones_like(w, dtype=complex)
            for j in range(n):
                acc *= 1.0 + qv**r * z * w * qv**j
            return acc * kernel.density(w)

        lhs = integrate(integrand, rule).value
        rhs = rs_poly(n, z, q)
        return float(abs(lhs - rhs))
    if kind == "kernelY_e10":
        kernel = MomentKernel("Y", r, q)
        rule = log_gaussian(q.m, kernel.gaussian_sigma(),
                            kernel.moment_center(0.5 * n), n=quad_nodes)

        def integrand(w):
            acc = np.zeros_like(w, dtype=complex)
            for k in range(n + 1):
                acc += (q_binomial(n, k, q) * qv ** (k * (k - n))
                        * (qv ** (n + r) * z) ** k * w**k)
            return acc * kernel.density(w)

        lhs = integrate(integrand, rule).value
        rhs = rs_poly(n, z, q)
        return float(abs(lhs - rhs))
    raise DomainError(f"unknown representation kind {kind}")


def szego_gram(n_top: int, q: QParameter, nodes: int = 2048) -> np.ndarray:
    """Matrix of circle averages of H_m(conj z) H_n(z) against the measure.

    The exact value is diag((q; q)_n q^(-n)).
    """
    grid = periodic_trapezoid(nodes)
    phi, wgt = grid.nodes_weights()
    qv = q.q
    zplus = -qv ** (-0.5) * np.exp(1j * phi)
    hplus = rs_poly_table(n_top, zplus, qv)
    hminus = rs_poly_table(n_top, np.conj(zplus), qv)
    meas = theta3_grid(phi / 2.0, math.sqrt(qv)) * wgt / (2.0 * math.pi)
    return np.einsum("mk,nk,k->mn", hminus, hplus, meas)

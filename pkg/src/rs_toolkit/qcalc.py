"""q-arithmetic primitives and Jackson q-calculus.

Everything here is pure and reentrant. Deformation parameters live strictly
inside (0, 1); infinite series and products are truncated under an explicit
:class:`TruncationPolicy` and report an a-posteriori error bound through
:class:`SeriesValue`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from ._backend import qpoch_prod
from .errors import DomainError, NonConvergence, SingularPoint

__all__ = [
    "QParameter",
    "TruncationPolicy",
    "SeriesValue",
    "DEFAULT_POLICY",
    "q_pochhammer_finite",
    "q_pochhammer_infinite",
    "q_binomial",
    "q_number",
    "q_factorial",
    "q_exponential",
    "q_exponential_series",
    "jackson_q_derivative",
    "jackson_q_integral",
]

# q above this is accepted (asymptotic probes need it) but flagged through a
# widened error bound on series results.
_NEAR_UNITY = 1.0 - 1e-8


@dataclass(frozen=True)
class QParameter:
    """Deformation parameter q in (0, 1) with its width m, q = exp(-1/(2 m^2))."""

    q: float
    m: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise DomainError(f"q must lie strictly inside (0, 1), got {self.q}")
        object.__setattr__(self, "m", math.sqrt(-0.5 / math.log(self.q)))

    @classmethod
    def from_width(cls, m: float) -> "QParameter":
        if m <= 0.0:
            raise DomainError(f"width m must be positive, got {m}")
        return cls(math.exp(-0.5 / (m * m)))

    @property
    def near_unity(self) -> bool:
        return self.q > _NEAR_UNITY


@dataclass(frozen=True)
class TruncationPolicy:
    """Stop a series when the additive term magnitude drops below abs_tol,
    or fail with :class:`NonConvergence` after max_terms."""

    abs_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if self.abs_tol < 0.0 or self.max_terms < 1:
            raise DomainError("invalid truncation policy")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesValue:
    """A numeric result together with a truncation-error bound."""

    value: complex
    error: float

    def __complex__(self) -> complex:
        return complex(self.value)

    def __float__(self) -> float:
        return float(np.real(self.value))


QLike = Union[QParameter, float]


def _qval(q: QLike) -> float:
    if isinstance(q, QParameter):
        return q.q
    qp = QParameter(float(q))  # revalidates the open-interval constraint
    return qp.q


def _policy(policy: TruncationPolicy | None) -> TruncationPolicy:
    return DEFAULT_POLICY if policy is None else policy


def q_pochhammer_finite(a: complex, q: QLike, n: int) -> complex:
    """(a; q)_n = prod_{j=0}^{n-1} (1 - a q^j); the empty product is 1."""
    if n < 0:
        raise DomainError("q_pochhammer_finite needs n >= 0")
    qv = _qval(q)
    out = complex(1.0)
    qj = 1.0
    for _ in range(n):
        out *= 1.0 - a * qj
        qj *= qv
    return out


def _qpoch_terms(a_abs: float, qv: float, policy: TruncationPolicy) -> int:
    """Number of factors needed so the dropped factor deviations are < abs_tol."""
    if a_abs == 0.0 or a_abs < policy.abs_tol:
        return 0
    n = int(math.ceil(math.log(policy.abs_tol / a_abs) / math.log(qv))) + 1
    if n > policy.max_terms:
        raise NonConvergence(
            f"(a;q)_inf needs {n} factors, policy allows {policy.max_terms}")
    return max(n, 1)


def q_pochhammer_infinite(a: complex, q: QLike,
                          policy: TruncationPolicy | None = None) -> SeriesValue:
    """(a; q)_inf with a tail bound; exact zeros of factors are preserved."""
    policy = _policy(policy)
    qv = _qval(q)
    if not np.isfinite(abs(a)):
        raise DomainError("|a| must be finite")
    n = _qpoch_terms(abs(a), qv, policy)
    value = complex(qpoch_prod(np.array([a], dtype=complex), qv, n)[0])
    # dropped factors multiply the result by prod_{j>=n}(1 - a q^j)
    tail = abs(a) * qv**n / (1.0 - qv)
    err = abs(value) * min(1.0, 2.0 * tail)
    if qv > _NEAR_UNITY:
        err = max(err, abs(value) * (1.0 - qv))
    return SeriesValue(value, err)


def q_binomial(n: int, k: int, q: QLike) -> float:
    """Gaussian binomial coefficient; 0 outside 0 <= k <= n.

    Uses the product form prod_{j=1..k} (1 - q^(n-k+j)) / (1 - q^j), which is
    cancellation-free for q near 1.
    """
    if n < 0:
        raise DomainError("q_binomial needs n >= 0")
    if k < 0 or k > n:
        return 0.0
    qv = _qval(q)
    k = min(k, n - k)
    out = 1.0
    for j in range(1, k + 1):
        out *= -math.expm1((n - k + j) * math.log(qv))
        out /= -math.expm1(j * math.log(qv))
    return out


def q_number(n: int, q: QLike) -> float:
    """[n]_q = (1 - q^n) / (1 - q), evaluated cancellation-free."""
    if n < 0:
        raise DomainError("q_number needs n >= 0")
    if n == 0:
        return 0.0
    lq = math.log(_qval(q))
    return math.expm1(n * lq) / math.expm1(lq)


def q_factorial(n: int, q: QLike) -> float:
    """[n]_q! = prod_{j=1..n} [j]_q with [0]_q! = 1."""
    if n < 0:
        raise DomainError("q_factorial needs n >= 0")
    out = 1.0
    for j in range(1, n + 1):
        out *= q_number(j, q)
    return out


def q_exponential(x: complex, q: QLike,
                  policy: TruncationPolicy | None = None) -> SeriesValue:
    """e_q(x) = 1 / (x; q)_inf, absolutely convergent for |x| < 1."""
    if abs(x) >= 1.0:
        raise DomainError(f"e_q needs |x| < 1, got |x| = {abs(x)}")
    if x == 0:
        return SeriesValue(1.0 + 0.0j, 0.0)
    prod = q_pochhammer_infinite(x, q, policy)
    value = 1.0 / prod.value
    return SeriesValue(value, abs(value) * prod.error / abs(prod.value))


def q_exponential_series(x: complex, q: QLike,
                         policy: TruncationPolicy | None = None) -> SeriesValue:
    """e_q(x) as the Euler sum over x^n / (q; q)_n; cross-check route."""
    if abs(x) >= 1.0:
        raise DomainError(f"e_q needs |x| < 1, got |x| = {abs(x)}")
    policy = _policy(policy)
    qv = _qval(q)
    total = complex(0.0)
    term = complex(1.0)
    qn = 1.0
    for n in range(policy.max_terms):
        total += term
        if abs(term) < policy.abs_tol:
            return SeriesValue(total, abs(term) / (1.0 - abs(x)))
        qn *= qv
        term *= x / (1.0 - qn)
    raise NonConvergence("e_q series did not meet tolerance")


def jackson_q_derivative(f: Callable[[complex], complex], z: complex,
                         q: QLike) -> complex:
    """D_{q^2} f at z: [f(z) - f(q^2 z)] / [z (1 - q^2)]."""
    if z == 0:
        raise SingularPoint("the q-derivative is singular at z = 0")
    qv = _qval(q)
    return (f(z) - f(qv * qv * z)) / (z * (1.0 - qv * qv))


def jackson_q_integral(g: Callable[[float], complex], q: QLike,
                       upper: float | None = None,
                       policy: TruncationPolicy | None = None) -> SeriesValue:
    """Jackson integral (1-q) * upper * sum_{k>=0} q^k g(upper q^k).

    ``upper`` defaults to 1/(1-q), the natural q-deformed infinity.
    """
    policy = _policy(policy)
    qv = _qval(q)
    if upper is None:
        upper = 1.0 / (1.0 - qv)
    total = complex(0.0)
    scale = (1.0 - qv) * upper
    tk = upper
    wk = scale
    for _ in range(policy.max_terms):
        term = wk * g(tk)
        total += term
        if abs(term) < policy.abs_tol:
            return SeriesValue(total, abs(term) / (1.0 - qv))
        tk *= qv
        wk *= qv
    raise NonConvergence("Jackson q-integral did not meet tolerance")

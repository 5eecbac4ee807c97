"""Quadrature engines shared by all modules.

Three rule kinds cover every integral in the toolkit:

* ``periodic_trapezoid`` for 2*pi-periodic integrands on [-pi, pi); spectral
  accuracy for smooth integrands.
* ``gauss_legendre`` composite rules for finite intervals.
* ``log_gaussian`` for kernels on (0, inf) that are Gaussian in log(omega):
  the substitution omega = exp(x / m^2) turns them into Gaussian-weighted
  integrals over the line, handled with recentred Gauss-Hermite nodes.

Node tables are immutable; :func:`integrate` reports a node-doubling error
estimate alongside the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import QuadratureFailure
from .qcalc import SeriesValue

__all__ = [
    "QuadratureRule",
    "periodic_trapezoid",
    "gauss_legendre",
    "log_gaussian",
    "integrate",
]


@dataclass(frozen=True)
class QuadratureRule:
    kind: str
    n: int
    a: float = 0.0
    b: float = 0.0
    panels: int = 1
    m: float = 0.0        # log_gaussian: width parameter of the lattice map
    sigma: float = 0.0    # log_gaussian: Gaussian width in x
    center: float = 0.0   # log_gaussian: Gaussian centre in x

    def doubled(self) -> "QuadratureRule":
        return replace(self, n=2 * self.n)

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        return _nodes_weights(self)


def periodic_trapezoid(n: int = 2048) -> QuadratureRule:
    """Equispaced rule on [-pi, pi) for 2*pi-periodic integrands."""
    return QuadratureRule(kind="periodic_trapezoid", n=n, a=-math.pi, b=math.pi)


def gauss_legendre(a: float, b: float, n: int = 64, panels: int = 4) -> QuadratureRule:
    """Composite Gauss-Legendre rule with ``panels`` equal subintervals."""
    return QuadratureRule(kind="gauss_legendre", n=n, a=a, b=b, panels=panels)


def log_gaussian(m: float, sigma: float, center: float, n: int = 80) -> QuadratureRule:
    """Rule for integrals over (0, inf) of h(omega) ~ exp(-((x-center)/sigma)^2)
    under omega = exp(x / m^2)."""
    return QuadratureRule(kind="log_gaussian", n=n, m=m, sigma=sigma, center=center)


@lru_cache(maxsize=64)
def _herm(n: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.hermite.hermgauss(n)
    return t, w


@lru_cache(maxsize=64)
def _leg(n: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(n)
    return t, w


def _nodes_weights(rule: QuadratureRule) -> tuple[np.ndarray, np.ndarray]:
    if rule.kind == "periodic_trapezoid":
        h = 2.0 * math.pi / rule.n
        nodes = -math.pi + h * np.arange(rule.n)
        return nodes, np.full(rule.n, h)
    if rule.kind == "gauss_legendre":
        t, w = _leg(rule.n)
        edges = np.linspace(rule.a, rule.b, rule.panels + 1)
        nodes, weights = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (t + 1.0))
            weights.append(half * w)
        return np.concatenate(nodes), np.concatenate(weights)
    if rule.kind == "log_gaussian":
        t, w = _herm(rule.n)
        x = rule.center + rule.sigma * t
        omega = np.exp(x / (rule.m * rule.m))
        # sigma * w * exp(t^2) undone Gaussian, times the substitution Jacobian
        weights = rule.sigma * np.exp(np.log(w) + t * t) * omega / (rule.m * rule.m)
        return omega, weights
    raise QuadratureFailure(f"unknown rule kind {rule.kind}")


def _apply(f: Callable, rule: QuadratureRule) -> complex:
    nodes, weights = _nodes_weights(rule)
    vals = np.asarray(f(nodes))
    return complex(np.sum(weights * vals))


def integrate(f: Callable, rule: QuadratureRule,
              tol: float | None = None) -> SeriesValue:
    """Integrate a vectorised integrand, estimating error by node doubling.

    With ``tol`` given, the rule is refined (nodes doubled) up to three times;
    :class:`QuadratureFailure` is raised if the estimate still exceeds it.
    """
    coarse = _apply(f, rule)
    fine = _apply(f, rule.doubled())
    err = abs(fine - coarse)
    if tol is None:
        return SeriesValue(fine, err)
    refinements = 0
    current = rule.doubled()
    while err > tol:
        if refinements >= 3:
            raise QuadratureFailure(
                f"error estimate {err:.3g} above requested tolerance {tol:.3g}")
        coarse, current = fine, current.doubled()
        fine = _apply(f, current)
        err = abs(fine - coarse)
        refinements += 1
    return SeriesValue(fine, err)

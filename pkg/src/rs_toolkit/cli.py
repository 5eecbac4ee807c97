"""Command-line front end: identity verification, figure datasets, sweeps.

Subcommands
-----------
verify   run the identity suite (all checks or one via --only), emit a
         machine-readable report; exit status is nonzero iff any residual
         exceeds its tolerance.
figure   write one of the four reference datasets as CSV.
sweep    evaluate a named quantity over a (q, |mu|^2) grid.

Output files are deterministic: rows are sorted by their key columns, floats
are written with 17 significant digits, and grid cells are evaluated by pure
functions (RS_TOOLKIT_THREADS caps the worker pool).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import observables, operators, polynomials, rsfunctions, states
from .errors import ConfigError, RSToolkitError
from .numerics import periodic_trapezoid
from .qcalc import (
    QParameter,
    jackson_q_derivative,
    q_exponential,
    q_exponential_series,
    q_number,
    q_pochhammer_finite,
)
from .theta import CirclePoint, measure_decomposition_grid, theta3_grid

__all__ = ["main"]


# ---------------------------------------------------------------------------
# shared plumbing

def _workers() -> int:
    env = os.environ.get("RS_TOOLKIT_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(f"RS_TOOLKIT_THREADS={env!r} is not an integer") from exc
        if n < 1:
            raise ConfigError("RS_TOOLKIT_THREADS must be >= 1")
        return n
    return min(8, os.cpu_count() or 1)


def _pmap(fn: Callable, items: Sequence) -> list:
    n = _workers()
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _write_csv(path: str, schema: str, header: Sequence[str],
               rows: Iterable[Sequence]) -> None:
    lines = [f"# schema={schema} version=1", ",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_q_list(text: str) -> list[QParameter]:
    out = []
    for chunk in text.split(","):
        try:
            val = float(chunk)
        except ValueError as exc:
            raise ConfigError(f"bad q value {chunk!r}") from exc
        if not (0.0 < val < 1.0):
            raise ConfigError(f"q must lie in (0, 1), got {val}")
        out.append(QParameter(val))
    return out


def _parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must look like a:b:steps, got {text!r}")
    try:
        a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}") from exc
    if steps < 1:
        raise ConfigError("range needs at least one step")
    return np.linspace(a, b, steps)


def _safe_label(q: QParameter, mu2: float, theta: float) -> states.CoherentLabel:
    if (1.0 - q.q) * mu2 >= 1.0:
        raise ConfigError(
            f"(1-q)|mu|^2 = {(1.0 - q.q) * mu2:.6g} >= 1 for q={q.q}, |mu|^2={mu2}")
    return states.CoherentLabel(math.sqrt(mu2), theta, q)


# ---------------------------------------------------------------------------
# verification checks

@dataclass(frozen=True)
class Record:
    id: str
    eq: str
    params: dict
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def _rec(check_id: str, label: str, params: dict, residual: float, tol: float) -> Record:
    return Record(check_id, label, params, float(residual), tol)


def _check_recurrence(qs, tol):
    out = []
    rng = np.random.default_rng(7)
    for q in qs:
        zs = rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)
        res = max(abs(polynomials.rs_poly(n, z, q) - polynomials.rs_poly_direct(n, z, q))
                  / max(1.0, abs(polynomials.rs_poly_direct(n, z, q)))
                  for n in range(0, 33, 4) for z in zs)
        out.append(_rec("e3", "polynomial three-term recurrence vs direct sum",
                        {"q": q.q, "n_max": 32}, res, tol or 1e-11))
    return out


def _check_szego(qs, tol):
    out = []
    for q in qs:
        gram = polynomials.szego_gram(8, q)
        target = np.diag([float(np.real(q_pochhammer_finite(q.q, q, n))) / q.q**n
                          for n in range(9)])
        res = float(np.max(np.abs(gram - target)))
        out.append(_rec("e4", "circle orthogonality of the polynomial family",
                        {"q": q.q, "n_max": 8}, res, tol or 1e-8))
    return out


def _check_e5(qs, tol):
    out = []
    for q in qs:
        res = max(polynomials.integral_representation_check("pochhammer_e5", n, q, a=a)
                  for n in range(7) for a in (0.2, 0.5))
        out.append(_rec("e5", "circle-average representation of the finite product",
                        {"q": q.q, "n_max": 6}, res, tol or 1e-8))
    return out


def _check_e6_e10(qs, tol):
    out = []
    for q in qs:
        for kind, cid in (("kernelP_e6", "e6"), ("kernelY_e10", "e10")):
            res = max(polynomials.integral_representation_check(kind, n, q, z=z)
                      for n in range(7) for z in (0.3, 0.7 + 0.2j))
            out.append(_rec(cid, f"kernel integral representation ({kind.split('_')[0]})",
                            {"q": q.q, "n_max": 6}, res, tol or 1e-7))
    return out


def _check_moments(qs, tol):
    out = []
    for q in qs:
        for kind, cid in (("P", "e7"), ("Y", "e9")):
            kernel = polynomials.MomentKernel(kind, 1.0, q)
            res = max(abs(polynomials.kernel_moment(k, kernel) - kernel.exact_moment(k))
                      / kernel.exact_moment(k) for k in range(9))
            out.append(_rec(cid, f"moments of the {kind} kernel",
                            {"q": q.q, "k_max": 8, "r": 1.0}, res, tol or 1e-9))
    return out


def _check_orthonormality(qs, tol):
    out = []
    for q in qs:
        gram = rsfunctions.orthonormality_gram(8, q)
        res = float(np.max(np.abs(gram - np.eye(9))))
        out.append(_rec("e16", "basis-function orthonormality on the circle",
                        {"q": q.q, "n_max": 8}, res, tol or 1e-8))
    return out


def _check_kernel(qs, tol):
    out = []
    for q in qs:
        res_closed = abs(rsfunctions.bilinear_kernel(-0.9, 0.7, 0.5, q)
                         - rsfunctions.bilinear_kernel_series(-0.9, 0.7, 0.5, q))
        out.append(_rec("e18", "kernel closed form vs eigenfunction series",
                        {"q": q.q, "eps": 0.5}, res_closed, tol or 1e-10))
        res_rep = max(rsfunctions.kernel_reproducing_residual(n, 0.5, 0.7, q)
                      for n in range(7))
        out.append(_rec("e19", "kernel reproducing property",
                        {"q": q.q, "eps": 0.5, "n_max": 6}, res_rep, tol or 1e-8))
        res_semi = rsfunctions.kernel_semigroup_residual(0.6, 0.5, -0.4, 1.1, q)
        out.append(_rec("e20", "kernel semigroup property",
                        {"q": q.q, "eps": 0.6, "eps2": 0.5}, res_semi, tol or 1e-8))
    return out


def _check_qderiv_rules(qs, tol):
    out = []
    rng = np.random.default_rng(11)
    for q in qs:
        coeffs1 = rng.uniform(-1, 1, 5)
        coeffs2 = rng.uniform(-1, 1, 5)

        def f1(z, c=coeffs1):
            return sum(ck * z**k for k, ck in enumerate(c))

        def f2(z, c=coeffs2):
            return sum(ck * z**k for k, ck in enumerate(c))

        z0 = 0.7 + 0.3j
        qq = q.q**2
        dsum = jackson_q_derivative(lambda z: f1(z) + f2(z), z0, q)
        res_sum = abs(dsum - jackson_q_derivative(f1, z0, q)
                      - jackson_q_derivative(f2, z0, q))
        out.append(_rec("e22", "q-derivative sum rule", {"q": q.q}, res_sum,
                        tol or 1e-12))
        dprod = jackson_q_derivative(lambda z: f1(z) * f2(z), z0, q)
        l1 = jackson_q_derivative(f1, z0, q) * f2(z0) \
            + f1(qq * z0) * jackson_q_derivative(f2, z0, q)
        l2 = jackson_q_derivative(f1, z0, q) * f2(qq * z0) \
            + f1(z0) * jackson_q_derivative(f2, z0, q)
        res_leib = max(abs(dprod - l1), abs(dprod - l2))
        out.append(_rec("e23", "q-derivative product rule, both orderings",
                        {"q": q.q}, res_leib, tol or 1e-12))
    return out


def _check_qderiv_identities(qs, tol):
    out = []
    for q in qs:
        p = CirclePoint(1.0, q)
        # polynomial layer
        res24 = 0.0
        z = p.z
        for n in range(1, 9):
            lhs = (polynomials.rs_poly_normalized(n, z, q)
                   - polynomials.rs_poly_normalized(n, q.q**2 * z, q)) / (z * (1 - q.q**2))
            rhs = (q.q / (1 + q.q) * q_number(n, q) * polynomials.rs_poly_normalized(n, z, q)
                   + math.sqrt(q.q / (1 - q.q)) * (1 - q.q * z) / (1 + q.q)
                   * math.sqrt(q_number(n, q)) * polynomials.rs_poly_normalized(n - 1, z, q))
            res24 = max(res24, abs(lhs - rhs))
        out.append(_rec("e24", "q-derivative of the normalized polynomials",
                        {"q": q.q, "n_max": 8}, res24, tol or 1e-9))
        w0 = rsfunctions.weight(p)
        w2 = rsfunctions.weight_scaled_series(p, 2)
        dm = (w0.M - w2.M) / (z * (1 - q.q**2))
        rhs = (1 + q.q**1.5 * z) / (q.q**1.5 * z**2 * (1 - q.q**2)) * w0.M
        out.append(_rec("e25", "q-derivative of the weight function",
                        {"q": q.q}, abs(dm - rhs), tol or 1e-9))
        res_forms = max(max(rsfunctions.q_derivative_identities_check(n, p))
                        for n in range(0, 9))
        out.append(_rec("e26", "lowering/raising forms of the basis q-derivative",
                        {"q": q.q, "n_max": 8}, res_forms, tol or 1e-8))
        res_ladder = max(max(operators.qdiff_ladder_check(n, p)) for n in range(1, 9))
        out.append(_rec("e27", "ladder actions of the q-differential forms",
                        {"q": q.q, "n_max": 8}, res_ladder, tol or 1e-8))
        res_num = max(operators.qdiff_number_check(n, p) for n in range(1, 9))
        out.append(_rec("e28", "number form acting as [n]_q",
                        {"q": q.q, "n_max": 8}, res_num, tol or 1e-8))
    return out


def _check_algebra(qs, tol):
    out = []
    trunc = operators.BasisTruncation(64)
    for q in qs:
        res = operators.algebra_check(trunc, q)
        out.append(_rec("e29", "q-commutation relations",
                        {"q": q.q, "n_max": 64},
                        max(res["q_comm_B_Bdag"], res["q_comm_B_Nq"],
                            res["q_comm_Nq_Bdag"]), tol or 1e-12))
        out.append(_rec("e30", "standard commutation relations",
                        {"q": q.q, "n_max": 64},
                        max(res["comm_B_Bdag"], res["comm_Nq_B"],
                            res["comm_Nq_Bdag"]), tol or 1e-12))
    return out


def _check_coherent(qs, tol):
    out = []
    trunc = operators.BasisTruncation(220)
    for q in qs:
        mu2 = 0.5 / (1.0 - q.q)
        label = _safe_label(q, mu2, math.pi / 5)
        v = states.coherent_coefficients(label, trunc).coeffs
        b = operators.build_operator("B", trunc, q).matrix
        resid = b @ v - label.mu * v
        res31 = float(np.linalg.norm(resid[: trunc.n_max - 1])
                      / np.linalg.norm(v))
        out.append(_rec("e31", "coherent eigenvalue relation",
                        {"q": q.q, "mu2": mu2}, res31, tol or 1e-9))
        p = CirclePoint(0.5, q)
        res33 = abs(states.coherent_function(label, p)
                    - states.coherent_expansion(label, p, 160))
        out.append(_rec("e33", "coherent closed form vs basis expansion",
                        {"q": q.q, "mu2": mu2}, res33, tol or 1e-10))
        nu = _safe_label(q, 0.25 * mu2, 1.1)
        grid = periodic_trapezoid(2048)
        phi, wgt = grid.nodes_weights()
        fnu = states.coherent_function_grid(nu, phi)
        fmu = states.coherent_function_grid(label, phi)
        quad = np.sum(wgt * np.conj(fnu) * fmu)
        res34 = abs(quad - states.coherent_overlap(nu, label))
        out.append(_rec("e34", "overlap formula vs circle quadrature",
                        {"q": q.q}, res34, tol or 1e-9))
        res36 = max(states.resolution_of_unity_check(n, q) for n in range(0, 13, 3))
        out.append(_rec("e35/e36", "lattice-integral resolution of unity",
                        {"q": q.q, "n_max": 12}, res36, tol or 1e-10))
    return out


def _check_phase(qs, tol):
    out = []
    trunc = operators.BasisTruncation(64)
    for q in qs:
        c = operators.build_operator("C", trunc, q).matrix
        s = operators.build_operator("S", trunc, q).matrix
        res38 = res42 = 0.0
        for gamma in (0.4, 1.0, 2.2):
            v = states.phase_state_coefficients(
                states.PhaseLabel(gamma, "cosine"), trunc).coeffs
            res38 = max(res38, float(np.max(np.abs(
                (c @ v - math.cos(gamma) * v)[: trunc.n_max - 1]))))
        for gamma in (-0.9, 0.3, 1.2):
            v = states.phase_state_coefficients(
                states.PhaseLabel(gamma, "sine"), trunc).coeffs
            res42 = max(res42, float(np.max(np.abs(
                (s @ v - math.sin(gamma) * v)[: trunc.n_max - 1]))))
        out.append(_rec("e38/e39", "cosine eigenvalue relation",
                        {"q": q.q, "n_max": 64}, res38, tol or 1e-10))
        out.append(_rec("e42/e43", "sine eigenvalue relation",
                        {"q": q.q, "n_max": 64}, res42, tol or 1e-10))
        res41 = states.phase_completeness_check("cosine",
                                                operators.BasisTruncation(24),
                                                0.8, -0.5, q)
        res45 = states.phase_completeness_check("sine",
                                                operators.BasisTruncation(24),
                                                0.8, -0.5, q)
        out.append(_rec("e41", "cosine completeness at coefficient level",
                        {"q": q.q, "n_max": 24}, res41, tol or 1e-10))
        out.append(_rec("e45", "sine completeness at coefficient level",
                        {"q": q.q, "n_max": 24}, res45, tol or 1e-10))
    smear_c = states.phase_kernel_smear(
        "cosine", lambda g: np.sin(2 * g), 1.0, operators.BasisTruncation(200))
    out.append(_rec("e40", "cosine kernel approximate-identity smearing",
                    {"n_max": 200, "gamma": 1.0},
                    abs(smear_c - math.sin(2.0)), tol or 1e-3))
    smear_s = states.phase_kernel_smear(
        "sine", lambda g: np.sin(2 * g), 0.7, operators.BasisTruncation(200))
    out.append(_rec("e44", "sine kernel approximate-identity smearing",
                    {"n_max": 200, "gamma": 0.7},
                    abs(smear_s - math.sin(1.4)), tol or 1e-3))
    return out


def _check_moments_two_route(qs, tol):
    out = []
    trunc = operators.BasisTruncation(300)
    for q in qs:
        mu2 = 0.5 / (1.0 - q.q)
        label = _safe_label(q, mu2, math.pi / 3)
        a = observables.moments_closed_form(label)
        b = observables.moments_matrix_route(label, trunc)
        res = max(abs(getattr(a, f) - getattr(b, f)) for f in
                  ("meanC", "meanS", "meanC2", "meanS2", "meanCSplus",
                   "meanCSminus", "meanN", "meanN2", "meanNC", "meanNS"))
        out.append(_rec("e46", "closed-form vs matrix-route moments",
                        {"q": q.q, "mu2": mu2, "n_max": 300}, res, tol or 1e-8))
    return out


def _check_uncertainty(qs, tol):
    out = []
    for q in qs:
        mu2 = 0.5 / (1.0 - q.q)
        label = _safe_label(q, mu2, 0.9)
        ms = observables.moments_closed_form(label)
        u, bound = observables.uncertainty_CS(label)
        um, bm = observables.uncertainty_CS_from_moments(ms)
        res47 = max(abs(u - um), abs(bound - bm), max(0.0, bound - u))
        out.append(_rec("e47", "variance-product uncertainty and its bound",
                        {"q": q.q, "mu2": mu2}, res47, tol or 1e-10))
        v_n = ms.meanN2 - ms.meanN**2
        v_c = ms.meanC2 - ms.meanC**2
        v_s = ms.meanS2 - ms.meanS**2
        v_nc = ms.meanNC - ms.meanN * ms.meanC
        v_ns = ms.meanNS - ms.meanN * ms.meanS
        res48 = max(0.0, 0.25 * ms.meanS**2 - (v_n * v_c - v_nc**2))
        res49 = max(0.0, 0.25 * ms.meanC**2 - (v_n * v_s - v_ns**2))
        out.append(_rec("e48", "number-cosine uncertainty inequality",
                        {"q": q.q, "mu2": mu2}, res48, tol or 1e-12))
        out.append(_rec("e49", "number-sine uncertainty inequality",
                        {"q": q.q, "mu2": mu2}, res49, tol or 1e-12))
        usym = observables.uncertainty_symmetric(label)
        res50 = max(0.0, 0.25 - usym)
        out.append(_rec("e50", "symmetric uncertainty bound",
                        {"q": q.q, "mu2": mu2}, res50, tol or 1e-12))
    return out


def _check_measure(qs, tol):
    out = []
    for q in qs:
        phi = np.linspace(-math.pi, math.pi, 721)
        e_vals = measure_decomposition_grid(phi, q)
        target = theta3_grid(phi / 2.0, math.sqrt(q.q))
        res = float(np.max(np.abs(np.abs(e_vals) ** 2 - target)))
        out.append(_rec("e11/e12", "measure decomposition master identity",
                        {"q": q.q}, res, tol or 1e-10))
    return out


def _check_scaling(qs, tol):
    out = []
    for q in qs:
        p = CirclePoint(0.37, q)
        res = max(max(rsfunctions.scaling_relations_check(r, p).values())
                  for r in range(-3, 4))
        out.append(_rec("e14/e15", "lattice scaling of the weight constituents",
                        {"q": q.q, "r_max": 3}, res, tol or 1e-9))
    return out


def _check_qexp(qs, tol):
    out = []
    for q in qs:
        x = 0.75
        a = q_exponential(x, q).value
        b = q_exponential_series(x, q).value
        res = abs(a - b) / max(1.0, abs(a))
        out.append(_rec("e32", "q-exponential product form vs series form",
                        {"q": q.q, "x": x}, res, tol or 1e-12))
    return out


CHECKS: dict[str, Callable] = {}
for fn in (_check_recurrence, _check_szego, _check_e5, _check_e6_e10,
           _check_moments, _check_measure, _check_scaling, _check_orthonormality,
           _check_kernel, _check_qderiv_rules, _check_qderiv_identities,
           _check_algebra, _check_qexp, _check_coherent, _check_phase,
           _check_moments_two_route, _check_uncertainty):
    CHECKS[fn.__name__] = fn


def run_verify(q_list: list[QParameter] | None = None, only: str | None = None,
               tol: float | None = None) -> list[Record]:
    qs = q_list or [QParameter(v) for v in (0.3, 0.6, 0.9)]
    records: list[Record] = []
    for fn in CHECKS.values():
        records.extend(fn(qs, tol))
    if only is not None:
        records = [r for r in records if only in (r.id, *r.id.split("/"))]
        if not records:
            raise ConfigError(f"no check with id {only!r}")
    return records


# ---------------------------------------------------------------------------
# figure datasets

def _figure1_rows():
    q_grid = [0.02, 0.05] + [round(0.05 * k, 2) for k in range(2, 20)]
    phi = np.linspace(-math.pi, math.pi, 181)

    def cell(qv):
        e_vals = measure_decomposition_grid(phi, QParameter(qv))
        return [(p, qv, ev.real, ev.imag) for p, ev in zip(phi, e_vals)]

    rows = [r for block in _pmap(cell, q_grid) for r in block]
    rows.sort(key=lambda r: (r[1], r[0]))
    return "rs-fig1", ["phi", "q", "reE", "imE"], rows


def _figure2_rows():
    phi = np.linspace(-math.pi, math.pi, 721)

    def cell(qv):
        table = rsfunctions.rs_function_grid(4, phi, QParameter(qv))
        return [(p, qv, n, float(abs(table[n, i]) ** 2))
                for n in range(5) for i, p in enumerate(phi)]

    rows = [r for block in _pmap(cell, [0.5, 0.7, 0.9]) for r in block]
    rows.sort(key=lambda r: (r[1], r[2], r[0]))
    return "rs-fig2", ["phi", "q", "n", "psi2"], rows


_FIG3_QUANTITIES = ("meanC", "meanS", "meanC2", "meanS2", "meanC2pS2", "meanC2mS2")


def _figure3_rows():
    theta = math.pi / 3.0
    mu2_grid = [round(0.1 * k, 10) for k in range(51)]

    def cell(qv):
        q = QParameter(qv)
        block = []
        for mu2 in mu2_grid:
            try:
                label = states.CoherentLabel(math.sqrt(mu2), theta, q)
            except RSToolkitError:
                continue
            ms = observables.moments_closed_form(label)
            values = {
                "meanC": ms.meanC, "meanS": ms.meanS,
                "meanC2": ms.meanC2, "meanS2": ms.meanS2,
                "meanC2pS2": ms.meanC2 + ms.meanS2,
                "meanC2mS2": ms.meanC2 - ms.meanS2,
            }
            block.extend((mu2, qv, name, values[name]) for name in _FIG3_QUANTITIES)
        return block

    rows = [r for block in _pmap(cell, [0.8, 0.85, 0.9]) for r in block]
    rows.sort(key=lambda r: (r[1], r[2], r[0]))
    return "rs-fig3", ["mu2", "q", "quantity", "value"], rows


def _figure4_rows():
    mu2_grid = [round(0.1 * k, 10) for k in range(1, 41)]

    def cell(qv):
        q = QParameter(qv)
        block = []
        for mu2 in mu2_grid:
            try:
                label = states.CoherentLabel(math.sqrt(mu2), math.pi / 3.0, q)
            except RSToolkitError:
                continue
            block.append((mu2, qv, observables.uncertainty_symmetric(label), 0.25))
        return block

    rows = [r for block in _pmap(cell, [0.80, 0.85, 0.90, 0.95]) for r in block]
    rows.sort(key=lambda r: (r[1], r[0]))
    return "rs-fig4", ["mu2", "q", "usym", "bound"], rows


_FIGURES = {1: _figure1_rows, 2: _figure2_rows, 3: _figure3_rows, 4: _figure4_rows}


# ---------------------------------------------------------------------------
# sweeps

def _sweep_scalar(name: str):
    def meanfield(field):
        def fn(label):
            return getattr(observables.moments_closed_form(label), field)
        return fn

    table = {
        "meanC": meanfield("meanC"),
        "meanS": meanfield("meanS"),
        "meanC2": meanfield("meanC2"),
        "meanS2": meanfield("meanS2"),
        "meanN": meanfield("meanN"),
        "meanN2": meanfield("meanN2"),
        "u_cs": lambda label: observables.uncertainty_CS(label)[0],
        "u_cs_bound": lambda label: observables.uncertainty_CS(label)[1],
        "u_sym": lambda label: observables.uncertainty_symmetric(label),
    }
    return table.get(name)


def run_sweep(quantity: str, q_list: list[QParameter], mu2_grid: np.ndarray,
              theta: float, n_max: int):
    """Rows for one named quantity over the (q, mu2) grid."""
    if quantity == "excitation":
        header = ["q", "mu2", "theta", "n", "prob"]
        cells = [(q, mu2) for q in q_list for mu2 in mu2_grid]

        def cell(args):
            q, mu2 = args
            label = _safe_label(q, float(mu2), theta)
            vec = states.coherent_coefficients(label, operators.BasisTruncation(n_max))
            return [(q.q, float(mu2), theta, n, float(abs(vec.coeffs[n]) ** 2))
                    for n in range(n_max)]

        rows = [r for block in _pmap(cell, cells) for r in block]
        rows.sort(key=lambda r: (r[0], r[1], r[3]))
        return "rs-sweep-excitation", header, rows

    fn = _sweep_scalar(quantity)
    if fn is None:
        raise ConfigError(f"unknown sweep quantity {quantity!r}")
    header = ["q", "mu2", "theta", "quantity", "value"]
    cells = [(q, mu2) for q in q_list for mu2 in mu2_grid]

    def cell(args):
        q, mu2 = args
        return (q.q, float(mu2), theta, quantity,
                float(fn(_safe_label(q, float(mu2), theta))))

    rows = _pmap(cell, cells)
    rows.sort(key=lambda r: (r[0], r[1]))
    return "rs-sweep", header, rows


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rs-toolkit",
        description="Verification suite and dataset generator for the circle "
                    "q-special-function toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the identity checks")
    p_verify.add_argument("--only", help="restrict to one check id (e.g. e16)")
    p_verify.add_argument("--q", help="comma-separated deformation parameters")
    p_verify.add_argument("--tol", type=float, help="override every tolerance")
    p_verify.add_argument("--out", help="write the full report to this path")
    p_verify.add_argument("--format", choices=("csv", "json"), default="csv")

    p_fig = sub.add_parser("figure", help="emit a reference dataset")
    p_fig.add_argument("--id", type=int, required=True, help="figure id, 1-4")
    p_fig.add_argument("--out", required=True, help="output CSV path")

    p_sweep = sub.add_parser("sweep", help="evaluate a quantity over a grid")
    p_sweep.add_argument("--quantity", required=True)
    p_sweep.add_argument("--q", required=True, help="comma-separated q values")
    p_sweep.add_argument("--mu2", required=True, help="|mu|^2 grid as a:b:steps")
    p_sweep.add_argument("--theta", type=float, default=math.pi / 3.0)
    p_sweep.add_argument("--nmax", type=int, default=200)
    p_sweep.add_argument("--out", help="output path (stdout summary otherwise)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _emit_report(records: list[Record], out: str | None, fmt: str) -> None:
    if out is None:
        return
    if fmt == "json":
        payload = [{"id": r.id, "eq": r.eq, "params": r.params,
                    "residual": r.residual, "tol": r.tol, "pass": r.passed}
                   for r in records]
        with open(out, "w", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    rows = [(r.id, r.eq,
             ";".join(f"{k}={_fmt(v)}" for k, v in sorted(r.params.items())),
             r.residual, r.tol, r.passed) for r in records]
    _write_csv(out, "rs-verify", ["id", "eq", "params", "residual", "tol", "pass"], rows)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            qs = _parse_q_list(args.q) if args.q else None
            records = run_verify(qs, only=args.only, tol=args.tol)
            _emit_report(records, args.out, args.format)
            failed = [r for r in records if not r.passed]
            for r in records:
                status = "ok  " if r.passed else "FAIL"
                print(f"{status} {r.id:8s} residual={r.residual:.3e} "
                      f"tol={r.tol:.1e} {r.eq}")
            print(f"{len(records) - len(failed)}/{len(records)} checks passed")
            return 1 if failed else 0
        if args.command == "figure":
            if args.id not in _FIGURES:
                raise ConfigError(f"figure id must be 1..4, got {args.id}")
            schema, header, rows = _FIGURES[args.id]()
            _write_csv(args.out, schema, header, rows)
            print(f"wrote {len(rows)} rows to {args.out}")
            return 0
        if args.command == "sweep":
            qs = _parse_q_list(args.q)
            mu2 = _parse_range(args.mu2)
            schema, header, rows = run_sweep(args.quantity, qs, mu2,
                                             args.theta, args.nmax)
            if args.out:
                if args.format == "json":
                    payload = [dict(zip(header, row)) for row in rows]
                    with open(args.out, "w", newline="\n") as fh:
                        json.dump(payload, fh, indent=2, sort_keys=True, default=float)
                        fh.write("\n")
                else:
                    _write_csv(args.out, schema, header, rows)
            print(f"{len(rows)} rows ({schema})" + (f" -> {args.out}" if args.out else ""))
            return 0
    except RSToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())

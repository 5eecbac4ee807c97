"""Matrix realisations of the deformed ladder algebra on a truncated basis,
the pointwise q-differential ladder forms, and the oscillator spectrum.

Truncation note: the raising operator leaks out of the top of a finite basis,
so every algebra identity is asserted on the interior block n < n_max - 1
only. The one-step shift operators follow the convention that the lowering
shift annihilates the ground state, which is forced by the commutator mean
values downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularPoint
from .qcalc import QParameter, q_number
from .rsfunctions import rs_function, rs_function_lattice
from .theta import CirclePoint

__all__ = [
    "BasisTruncation",
    "OperatorMatrix",
    "OPERATOR_LABELS",
    "build_operator",
    "qdiff_lower",
    "qdiff_raise",
    "qdiff_ladder_check",
    "qdiff_number_check",
    "algebra_check",
    "energy_spectrum",
]

OPERATOR_LABELS = ("B", "Bdag", "Nq", "N", "Eminus", "Eplus", "C", "S")


@dataclass(frozen=True)
class BasisTruncation:
    """Finite basis of indices 0..n_max-1; interior means n < n_max - 1."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 2:
            raise DomainError("truncation needs n_max >= 2")


@dataclass(frozen=True)
class OperatorMatrix:
    label: str
    matrix: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return self.matrix.shape


def build_operator(label: str, trunc: BasisTruncation, q: QParameter) -> OperatorMatrix:
    """Matrix of one of the named operators on the truncated basis.

    B has sqrt([n]_q) on the superdiagonal, Bdag is its adjoint, Nq and N are
    diagonal with [n]_q and n, Eminus/Eplus are the bare one-step shifts, and
    C = (Eminus + Eplus)/2, S = (Eminus - Eplus)/(2i) are Hermitian by
    construction.
    """
    n = trunc.n_max
    if label not in OPERATOR_LABELS:
        raise DomainError(f"unknown operator label {label!r}")
    if label in ("C", "S"):
        eminus = build_operator("Eminus", trunc, q).matrix
        eplus = build_operator("Eplus", trunc, q).matrix
        mat = 0.5 * (eminus + eplus) if label == "C" else (eminus - eplus) / 2j
        return OperatorMatrix(label, mat)
    mat = np.zeros((n, n), dtype=complex)
    if label == "B":
        for k in range(1, n):
            mat[k - 1, k] = math.sqrt(q_number(k, q))
    elif label == "Bdag":
        for k in range(1, n):
            mat[k, k - 1] = math.sqrt(q_number(k, q))
    elif label == "Nq":
        mat[np.diag_indices(n)] = [q_number(k, q) for k in range(n)]
    elif label == "N":
        mat[np.diag_indices(n)] = np.arange(n)
    elif label == "Eminus":
        for k in range(1, n):
            mat[k - 1, k] = 1.0
    elif label == "Eplus":
        for k in range(1, n):
            mat[k, k - 1] = 1.0
    return OperatorMatrix(label, mat)


def _dpsi_at_lattice(n: int, p: CirclePoint, r: int) -> complex:
    """D_{q^2} Psi_n evaluated at the lattice point q^(2r) z."""
    qv = p.q.q
    w = qv ** (2 * r) * p.z
    return ((rs_function_lattice(n, p, r) - rs_function_lattice(n, p, r + 1))
            / (w * (1.0 - qv * qv)))


def _psi_pair(n: int, p: CirclePoint, r: int) -> tuple[complex, complex, complex]:
    w = p.q.q ** (2 * r) * p.z
    return rs_function_lattice(n, p, r), _dpsi_at_lattice(n, p, r), w


def qdiff_lower(n: int, p: CirclePoint, r: int = 0) -> complex:
    """Apply the q-differential lowering form for degree n to Psi_n at the
    lattice point q^(2r) z."""
    q = p.q
    qv = q.q
    fz, dfz, w = _psi_pair(n, p, r)
    if w == 0 or qv * w == 1.0:
        raise SingularPoint("lowering form singular at z = 0 or qz = 1")
    sq = math.sqrt(qv)
    num = fz * (1.0 - qv * w * (1.0 - sq - qv**n)) - qv**1.5 * w * w * (1.0 - qv * qv) * dfz
    return num / (math.sqrt(qv * (1.0 - qv)) * (1.0 - qv * w) * w)


def qdiff_raise(n: int, p: CirclePoint, r: int = 0, values=None) -> complex:
    """Apply the q-differential raising form for degree n at lattice depth r.

    ``values`` may supply (f(w), f(q^2 w)) for an arbitrary function in place
    of Psi_n; that is how compositions such as the number form are built.
    """
    q = p.q
    qv = q.q
    if values is None:
        fz, dfz, w = _psi_pair(n, p, r)
    else:
        fw, fq2w = values
        w = qv ** (2 * r) * p.z
        dfz = (fw - fq2w) / (w * (1.0 - qv * qv))
        fz = fw
    if w == 0 or qv * w == 1.0:
        raise SingularPoint("raising form singular at z = 0 or qz = 1")
    sq = math.sqrt(qv)
    num = fz * (1.0 - qv * (w + sq + qv**n)) + qv**1.5 * w * (1.0 - qv * qv) * dfz
    return math.sqrt(qv) * w * num / (math.sqrt(1.0 - qv) * (1.0 - qv * w))


def qdiff_ladder_check(n: int, p: CirclePoint) -> tuple[float, float]:
    """Residuals of the lowering and raising actions at one circle point."""
    low = qdiff_lower(n, p)
    target_low = math.sqrt(q_number(n, p.q)) * rs_function(n - 1, p) if n >= 1 else 0.0
    up = qdiff_raise(n, p)
    target_up = math.sqrt(q_number(n + 1, p.q)) * rs_function(n + 1, p)
    return float(abs(low - target_low)), float(abs(up - target_up))


def qdiff_number_check(n: int, p: CirclePoint) -> float:
    """Residual of the number form acting as [n]_q on Psi_n.

    The composition applies the lowering form for degree n, then the raising
    form at the lowered degree n - 1 (the index the claimed action requires).
    """
    g_z = qdiff_lower(n, p, r=0)
    g_q2z = qdiff_lower(n, p, r=1)
    nv = qdiff_raise(n - 1, p, r=0, values=(g_z, g_q2z))
    return float(abs(nv - q_number(n, p.q) * rs_function(n, p)))


def _interior(mat: np.ndarray) -> np.ndarray:
    return mat[: mat.shape[0] - 1, : mat.shape[1] - 1]


def algebra_check(trunc: BasisTruncation, q: QParameter) -> dict[str, float]:
    """Max-norm interior residuals of the six commutation relations.

    q-commutators [X, Y]_q = XY - qYX:
        [B, Bdag]_q = 1, [B, Nq]_q = B, [Nq, Bdag]_q = Bdag
    standard commutators:
        [B, Bdag] = 1 - (1-q) Nq
        [Nq, B] = -(1 - (1-q) Nq) B
        [Nq, Bdag] = Bdag (1 - (1-q) Nq)
    """
    qv = q.q
    b = build_operator("B", trunc, q).matrix
    bd = build_operator("Bdag", trunc, q).matrix
    nq = build_operator("Nq", trunc, q).matrix
    eye = np.eye(trunc.n_max)
    comp = eye - (1.0 - qv) * nq

    def qcomm(x, y):
        return x @ y - qv * y @ x

    def comm(x, y):
        return x @ y - y @ x

    def res(x, y):
        return float(np.max(np.abs(_interior(x) - _interior(y))))

    return {
        "q_comm_B_Bdag": res(qcomm(b, bd), eye),
        "q_comm_B_Nq": res(qcomm(b, nq), b),
        "q_comm_Nq_Bdag": res(qcomm(nq, bd), bd),
        "comm_B_Bdag": res(comm(b, bd), comp),
        "comm_Nq_B": res(comm(nq, b), -comp @ b),
        "comm_Nq_Bdag": res(comm(nq, bd), bd @ comp),
    }


def energy_spectrum(n: int, q: QParameter, e0: float = 1.0) -> tuple[float, float]:
    """Level energy E_n = (2 - (1+q) q^n) / (1-q) * E_0 and the gap
    Delta_n = (E_{n+1} - E_n) / E_0 = (1+q) q^n (strictly decreasing in n)."""
    if n < 0:
        raise DomainError("energy_spectrum needs n >= 0")
    qv = q.q
    e_n = (2.0 - (1.0 + qv) * qv**n) / (1.0 - qv) * e0
    delta_n = (1.0 + qv) * qv**n
    return e_n, delta_n

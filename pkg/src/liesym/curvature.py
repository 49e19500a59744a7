"""Levi-Civita connection, curvature and its covariant derivative in an
orthonormal frame of a left-invariant metric.

Sign convention (flipped relative to most textbooks)::

    R(x, y) = nabla_[x,y] - nabla_x nabla_y + nabla_y nabla_x

so for the round 3-sphere ``<R(e1, e2) e2, e1>`` is negative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import MetricLieAlgebra, StructureTensor
from .errors import NotOrthonormal
from .milnor import TOL_FRAME, milnor_frame

TOL_GEO = 1e-12
TOL_SYM = 1e-9


@dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    """``gamma[i, j, k]``: coefficient of ``e_k`` in ``nabla_{e_i} e_j``."""

    gamma: np.ndarray


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """``r[i, j, k, l] = <R(e_i, e_j) e_k, e_l>``."""

    r: np.ndarray

    def apply(self, i, j, k):
        """Coordinates of ``R(e_i, e_j) e_k``."""
        return self.r[i, j, k].copy()


@dataclass(frozen=True, eq=False)
class NablaR:
    """``dr[m, i, j, k, l] = <(nabla_{e_m} R)(e_i, e_j) e_k, e_l>``."""

    dr: np.ndarray

    def max_abs(self):
        return float(np.max(np.abs(self.dr)))


def _constants(st):
    if isinstance(st, MetricLieAlgebra):
        return st.st.c
    if isinstance(st, StructureTensor):
        return st.c
    return np.asarray(st, dtype=float)


def connection(frame_algebra, tol=TOL_FRAME) -> ConnectionCoefficients:
    """Koszul formula ``2<nabla_i e_j, e_k> = c_ijk - c_jki + c_kij``.

    Accepts a ``MetricLieAlgebra`` whose metric must be the identity, or bare
    orthonormal-frame constants.
    """
    if isinstance(frame_algebra, MetricLieAlgebra):
        dev = float(np.max(np.abs(frame_algebra.g.g - np.eye(3))))
        if dev > tol:
            raise NotOrthonormal(f"metric deviates from identity by {dev:.3e}")
    return ConnectionCoefficients(kernels.levi_civita(_constants(frame_algebra)))


def curvature(conn: ConnectionCoefficients, st) -> CurvatureTensor:
    return CurvatureTensor(kernels.riemann(_constants(st), conn.gamma))


def nabla_R(conn: ConnectionCoefficients, R: CurvatureTensor) -> NablaR:
    # frame fields are left-invariant, so only connection terms survive
    return NablaR(kernels.nabla_riemann(conn.gamma, R.r))


def frame_pipeline(st):
    conn = connection(st)
    R = curvature(conn, st)
    return conn, R, nabla_R(conn, R)


def is_locally_symmetric(mla: MetricLieAlgebra, tol=TOL_SYM):
    """``(nabla R == 0 within tol, max |nabla R|)`` evaluated in a Milnor frame."""
    frame = milnor_frame(mla)
    residual = float(kernels.nabla_riemann_maxabs(frame.st.c))
    return residual <= tol, residual


def nabla_R_residuals(c_batch):
    """Vectorised ``max |nabla R|`` for orthonormal-frame constants of shape (n, 3, 3, 3)."""
    return kernels.nabla_riemann_maxabs(c_batch)


# -- closed-form tables ------------------------------------------------------

def _from_pairs(entries):
    """Fill r from ``{(i, j, k): (l, value)}`` meaning R(e_i,e_j)e_k = value e_l,
    extended by the antisymmetry in (i, j)."""
    r = np.zeros((3, 3, 3, 3))
    for (i, j, k), (l, v) in entries.items():
        r[i, j, k, l] = v
        r[j, i, k, l] = -v
    return CurvatureTensor(r)


def closed_form_R_unimodular(a, b, c) -> CurvatureTensor:
    x = (2 * a * (a - b - c) + (a - b + c) * (a + b - c)) / 4
    y = (2 * b * (a - b + c) + (a - b - c) * (a + b - c)) / 4
    z = (2 * c * (a + b - c) + (a - b + c) * (a - b - c)) / 4
    return _from_pairs({
        (0, 1, 0): (1, -x), (0, 1, 1): (0, x),
        (0, 2, 0): (2, y), (0, 2, 2): (0, -y),
        (1, 2, 1): (2, z), (1, 2, 2): (1, -z),
    })


def closed_form_R_nonunimodular(a, b, c, d) -> CurvatureTensor:
    p = a**2 + 0.75 * b**2 - 0.25 * c**2 + 0.5 * b * c
    q = d**2 - 0.25 * b**2 + 0.75 * c**2 + 0.5 * b * c
    s = 0.25 * (b + c) ** 2 - a * d
    return _from_pairs({
        (0, 1, 0): (1, -p), (0, 1, 1): (0, p),
        (0, 2, 0): (2, -q), (0, 2, 2): (0, q),
        (1, 2, 1): (2, s), (1, 2, 2): (1, -s),
    })


def sectional(R: CurvatureTensor, i, j):
    """Sectional curvature of the plane (e_i, e_j), in the usual sign."""
    return -float(R.r[i, j, j, i])


# -- structural checks --------------------------------------------------------

def connection_defects(conn, st):
    """(metric-compatibility defect, torsion defect)."""
    g = conn.gamma
    c = _constants(st)
    compat = np.max(np.abs(g + np.swapaxes(g, -1, -2)))
    torsion = np.max(np.abs(g - np.swapaxes(g, -3, -2) - c))
    return float(compat), float(torsion)


def curvature_defects(R):
    """(ij antisymmetry, kl antisymmetry, pair symmetry, first Bianchi)."""
    r = R.r
    anti_ij = np.max(np.abs(r + np.swapaxes(r, -4, -3)))
    anti_kl = np.max(np.abs(r + np.swapaxes(r, -2, -1)))
    pair = np.max(np.abs(r - np.einsum("...ijkl->...klij", r)))
    bianchi = np.max(np.abs(r + np.einsum("...jkil->...ijkl", r) + np.einsum("...kijl->...ijkl", r)))
    return float(anti_ij), float(anti_kl), float(pair), float(bianchi)

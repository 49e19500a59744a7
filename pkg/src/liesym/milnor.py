"""Milnor orthonormal frames of 3-dimensional metric Lie algebras.

Unimodular algebras get a frame with

    [e1, e2] = a e3,   [e2, e3] = c e1,   [e3, e1] = b e2,

ordered so that ``a >= b >= c`` after the overall sign has been chosen to
minimise the number of negative constants. Non-unimodular algebras get

    [e1, e2] = a e2 + b e3,   [e1, e3] = c e2 + d e3,   [e2, e3] = 0,

with ``a + d > 0``, ``ac + bd = 0``, ``a >= d`` and ``b >= c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    TOL_ALG,
    MetricLieAlgebra,
    StructureTensor,
    transform_constants,
    unimodularity,
    validate,
)
from .errors import DivisionByZero, NotOrthonormal

TOL_FRAME = 1e-10

UNIMODULAR = "Unimodular"
NONUNIMODULAR = "NonUnimodular"


@dataclass(frozen=True, eq=False)
class MilnorFrame:
    P: np.ndarray
    kind: str
    constants: tuple
    st: StructureTensor  # structure constants expressed in the frame

    @property
    def unimodular(self):
        return self.kind == UNIMODULAR


@dataclass(frozen=True)
class AlgebraFamily:
    name: str
    D: Optional[float] = None

    def __str__(self):
        return f"GD({self.D:.12g})" if self.name == "GD" else self.name


def orthonormal_basis(g):
    """Columns form a g-orthonormal basis (inverse transpose of the Cholesky factor)."""
    L = np.linalg.cholesky(np.asarray(g, dtype=float))
    return np.linalg.inv(L).T


def sym2_eig(m):
    """Closed-form eigenvectors of a symmetric 2x2 matrix.

    Returns ``(rotation, eigenvalues)``; the first column of ``rotation``
    belongs to the larger eigenvalue.
    """
    p, q, r = m[0, 0], 0.5 * (m[0, 1] + m[1, 0]), m[1, 1]
    phi = 0.5 * np.arctan2(2.0 * q, p - r)
    cs, sn = np.cos(phi), np.sin(phi)
    rot = np.array([[cs, -sn], [sn, cs]])
    mid, rad = 0.5 * (p + r), np.hypot(0.5 * (p - r), q)
    return rot, np.array([mid + rad, mid - rad])


def _sign_normalise(v, eps=1e-12):
    for x in v:
        if abs(x) > eps:
            return v if x > 0 else -v
    return v


def _unimodular_frame(c, F, tol):
    cf = transform_constants(c, F)
    # [u, v] = L(u x v) in the orthonormal coordinates of F
    L = np.column_stack([cf[1, 2], cf[2, 0], cf[0, 1]])
    lam, V = np.linalg.eigh(0.5 * (L + L.T))
    V = np.column_stack([_sign_normalise(V[:, i]) for i in range(3)])

    scale = max(1.0, float(np.max(np.abs(lam))))
    zero = tol * scale
    npos = int(np.sum(lam > zero))
    nneg = int(np.sum(lam < -zero))
    sign = -1.0 if nneg > npos else 1.0
    vals = sign * lam

    # descending value; equal values (within tolerance) ordered by eigenvector coordinates
    order = sorted(range(3), key=lambda i: -vals[i])
    groups = [[order[0]]]
    for i in order[1:]:
        if vals[groups[-1][-1]] - vals[i] <= zero:
            groups[-1].append(i)
        else:
            groups.append([i])
    order = [i for grp in groups for i in sorted(grp, key=lambda i: tuple(V[:, i]), reverse=True)]
    # a <-> e3, b <-> e2, c <-> e1
    E = np.column_stack([V[:, order[2]], V[:, order[1]], V[:, order[0]]])
    if np.sign(np.linalg.det(E)) != sign:
        E[:, 0] = -E[:, 0]
    P = F @ E
    cm = transform_constants(c, P)
    consts = (cm[0, 1, 2], cm[2, 0, 1], cm[1, 2, 0])
    return P, cm, tuple(float(x) for x in consts)


def _complete(e1):
    """Deterministic orthonormal completion (e1, u1, u2), right-handed."""
    k = int(np.argmin(np.abs(e1)))
    t = np.zeros(3)
    t[k] = 1.0
    u1 = t - (t @ e1) * e1
    u1 /= np.linalg.norm(u1)
    return np.column_stack([e1, u1, np.cross(e1, u1)])


def _nonunimodular_frame(c, F, tol):
    cf = transform_constants(c, F)
    tau = np.einsum("ikk->i", cf)
    e1 = tau / np.linalg.norm(tau)  # tr ad_{e1} = |tau| > 0
    Q = _complete(e1)
    cq = transform_constants(cf, Q)
    A = np.array([[cq[0, 1, 1], cq[0, 2, 1]], [cq[0, 1, 2], cq[0, 2, 2]]])
    # eigenbasis of A^T A makes ad_{e1} e2 and ad_{e1} e3 orthogonal: ac + bd = 0
    rot, _ = sym2_eig(A.T @ A)
    E = Q.copy()
    E[:, 1:] = Q[:, 1:] @ rot

    cm = transform_constants(cf, E)
    a, b, c_, d = cm[0, 1, 1], cm[0, 1, 2], cm[0, 2, 1], cm[0, 2, 2]
    zero = tol * max(1.0, abs(a), abs(b), abs(c_), abs(d))
    if a < d - zero:
        E = E[:, [0, 2, 1]]
        a, b, c_, d = d, c_, b, a
    if b < c_ - zero:
        E[:, 1] = -E[:, 1]
    P = F @ E
    cm = transform_constants(c, P)
    consts = (cm[0, 1, 1], cm[0, 1, 2], cm[0, 2, 1], cm[0, 2, 2])
    return P, cm, tuple(float(x) for x in consts)


def milnor_frame(mla: MetricLieAlgebra, tol=TOL_ALG) -> MilnorFrame:
    """Orthonormal Milnor basis of ``mla`` (columns of ``P`` in input coordinates)."""
    validate(mla, tol)
    c = mla.st.c
    F = orthonormal_basis(mla.g.g)
    scale = max(1.0, float(np.max(np.abs(transform_constants(c, F)))))
    uni, _ = unimodularity(transform_constants(c, F), tol=tol * scale)
    if uni:
        P, cm, consts = _unimodular_frame(c, F, tol)
        kind = UNIMODULAR
    else:
        P, cm, consts = _nonunimodular_frame(c, F, tol)
        kind = NONUNIMODULAR
    return MilnorFrame(P=P, kind=kind, constants=consts, st=StructureTensor.from_full(cm))


def canonical_defect(frame: MilnorFrame):
    """Largest bracket component that the canonical form says must vanish."""
    c = frame.st.c
    mask = np.ones((3, 3, 3), dtype=bool)
    if frame.unimodular:
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            mask[i, j, k] = mask[j, i, k] = False
    else:
        for k in (1, 2):
            for j in (1, 2):
                mask[0, j, k] = mask[j, 0, k] = False
    return float(np.max(np.abs(c[mask]), initial=0.0))


def check_frame(frame: MilnorFrame, g, tol=TOL_FRAME):
    """Raise ``NotOrthonormal`` / ``AssertionError`` if the frame contract fails."""
    gram = frame.P.T @ np.asarray(g) @ frame.P
    dev = float(np.max(np.abs(gram - np.eye(3))))
    if dev > tol:
        raise NotOrthonormal(f"P^T g P deviates from identity by {dev:.3e}")
    scale = max(1.0, max(abs(x) for x in frame.constants))
    defect = canonical_defect(frame)
    if defect > tol * scale:
        raise AssertionError(f"non-canonical bracket component {defect:.3e}")
    if not frame.unimodular:
        a, b, c, d = frame.constants
        if not a + d > 0:
            raise AssertionError("a + d must be positive")
        if abs(a * c + b * d) > tol * scale**2:
            raise AssertionError(f"ac + bd = {a * c + b * d:.3e}")
        if a < d - tol * scale or b < c - tol * scale:
            raise AssertionError("normalisation a >= d, b >= c violated")
    return True


def milnor_D(a, b, c, d, tol=TOL_ALG):
    """Isomorphism invariant ``4 (ad - bc) / (a + d)^2`` of a non-unimodular algebra."""
    s = a + d
    if abs(s) <= tol:
        raise DivisionByZero(f"|a + d| = {abs(s):.3e} <= {tol:g}")
    return 4.0 * (a * d - b * c) / (s * s)


def identify_family(frame: MilnorFrame, tol=1e-9) -> AlgebraFamily:
    consts = np.asarray(frame.constants, dtype=float)
    zero = tol * max(1.0, float(np.max(np.abs(consts))))
    if frame.unimodular:
        npos = int(np.sum(consts > zero))
        nneg = int(np.sum(consts < -zero))
        nzero = 3 - npos - nneg
        if nzero == 3:
            return AlgebraFamily("Abelian")
        if (npos, nneg) == (2, 0):
            return AlgebraFamily("E0tilde2")
        if npos == 3:
            return AlgebraFamily("SU2")
        if npos >= nneg:
            # Heisenberg (+,0,0), E(1,1) (+,0,-), SL(2,R) (+,+,-)
            return AlgebraFamily("OtherUnimodular")
        return AlgebraFamily("Degenerate")
    a, b, c, d = consts
    if a + d <= zero:
        return AlgebraFamily("Degenerate")
    if abs(b) <= zero and abs(c) <= zero and abs(a - d) <= zero:
        return AlgebraFamily("GI")
    return AlgebraFamily("GD", float(milnor_D(a, b, c, d)))

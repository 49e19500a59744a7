"""Three-dimensional metric Lie algebras.

Structure constants follow ``[e_i, e_j] = sum_k c[i, j, k] e_k`` with 0-based
indices. Only the three upper pairs (0,1), (0,2), (1,2) are stored, so
antisymmetry holds by construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateMetric, NotALieAlgebra, SingularBasisChange

TOL_ALG = 1e-12
TOL_PD = 1e-12

PAIRS = ((0, 1), (0, 2), (1, 2))


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StructureTensor:
    """Brackets of the upper pairs: ``upper[p]`` is the coordinate vector of
    ``[e_i, e_j]`` for ``(i, j) = PAIRS[p]``."""

    upper: np.ndarray

    def __post_init__(self):
        up = _readonly(self.upper)
        if up.shape != (3, 3):
            raise ValueError(f"expected upper brackets of shape (3, 3), got {up.shape}")
        if not np.all(np.isfinite(up)):
            raise ValueError("structure constants must be finite")
        object.__setattr__(self, "upper", up)

    @classmethod
    def from_brackets(cls, brackets):
        """Build from ``{(i, j): vector}``; pairs may be given in either order."""
        up = np.zeros((3, 3))
        for (i, j), vec in brackets.items():
            if i == j:
                raise ValueError(f"bracket of e{i} with itself is always zero")
            sign = 1.0
            if i > j:
                i, j, sign = j, i, -1.0
            up[PAIRS.index((i, j))] += sign * np.asarray(vec, dtype=float)
        return cls(up)

    @classmethod
    def from_full(cls, c):
        c = np.asarray(c, dtype=float)
        return cls(np.array([c[i, j] for i, j in PAIRS]))

    @cached_property
    def c(self):
        full = np.zeros((3, 3, 3))
        for p, (i, j) in enumerate(PAIRS):
            full[i, j] = self.upper[p]
            full[j, i] = -self.upper[p]
        full.setflags(write=False)
        return full

    def __eq__(self, other):
        return isinstance(other, StructureTensor) and np.array_equal(self.upper, other.upper)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    g: np.ndarray
    tol: float = TOL_PD

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.shape != (3, 3):
            raise DegenerateMetric(f"metric must be 3x3, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise DegenerateMetric("metric has non-finite entries")
        if np.max(np.abs(g - g.T)) > self.tol * max(1.0, np.max(np.abs(g))):
            raise DegenerateMetric("metric is not symmetric")
        g = 0.5 * (g + g.T)
        minors = [np.linalg.det(g[:k, :k]) for k in (1, 2, 3)]
        if min(minors) <= self.tol:
            raise DegenerateMetric(f"metric is not positive definite (leading minors {minors})")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    def inner(self, u, v):
        return float(np.asarray(u) @ self.g @ np.asarray(v))


@dataclass(frozen=True)
class MetricLieAlgebra:
    st: StructureTensor
    g: MetricMatrix

    @classmethod
    def build(cls, st, g=None):
        if not isinstance(st, StructureTensor):
            st = StructureTensor.from_brackets(st) if isinstance(st, dict) else StructureTensor.from_full(st)
        if g is None:
            g = np.eye(3)
        if not isinstance(g, MetricMatrix):
            g = MetricMatrix(g)
        return cls(st, g)

    @property
    def c(self):
        return self.st.c

    @property
    def metric(self):
        return self.g.g


def bracket(st, u, v):
    if not isinstance(st, StructureTensor):
        st = StructureTensor.from_full(st)
    u, v = np.asarray(u, float), np.asarray(v, float)
    # pairwise minors keep [u, u] exactly zero
    minors = np.array([u[i] * v[j] - u[j] * v[i] for i, j in PAIRS])
    return minors @ st.upper


def jacobi_residual(st):
    c = st.c if isinstance(st, StructureTensor) else np.asarray(st)
    # J[i,j,k,m] = sum_l c_ij^l c_lk^m + cyclic(i,j,k)
    t = np.einsum("ijl,lkm->ijkm", c, c)
    jac = t + np.einsum("ijkm->jkim", t) + np.einsum("ijkm->kijm", t)
    return float(np.max(np.abs(jac)))


def unimodularity(st, tol=TOL_ALG):
    """Return ``(is_unimodular, traces)`` with ``traces[i] = tr ad_{e_i}``."""
    c = st.c if isinstance(st, StructureTensor) else np.asarray(st)
    traces = np.einsum("ikk->i", c)
    return bool(np.max(np.abs(traces)) <= tol), traces


def validate(mla, tol=TOL_ALG):
    res = jacobi_residual(mla.st)
    scale = max(1.0, float(np.max(np.abs(mla.st.upper))) ** 2)
    if res > tol * scale:
        raise NotALieAlgebra(f"Jacobi identity fails (residual {res:.3e})")
    return mla


def transform_constants(c, P, Pinv=None):
    """Constants of the basis ``e'_i = sum_a P[a, i] e_a``."""
    if Pinv is None:
        Pinv = np.linalg.inv(P)
    return np.einsum("ai,bj,abm,km->ijk", P, P, c, Pinv)


def change_basis(mla, P, tol=TOL_PD):
    """Re-express ``mla`` in the basis whose vectors are the columns of ``P``.

    The metric becomes ``P^T g P``.
    """
    P = np.asarray(P, dtype=float)
    if P.shape != (3, 3):
        raise SingularBasisChange(f"basis change must be 3x3, got {P.shape}")
    det = np.linalg.det(P)
    if not np.isfinite(det) or abs(det) <= tol:
        raise SingularBasisChange(f"|det P| = {abs(det):.3e} <= {tol:g}")
    c_new = transform_constants(mla.st.c, P)
    g_new = P.T @ mla.g.g @ P
    return MetricLieAlgebra(StructureTensor.from_full(c_new), MetricMatrix(0.5 * (g_new + g_new.T)))


def allclose(m1, m2, atol=1e-12):
    return bool(
        np.allclose(m1.st.upper, m2.st.upper, rtol=0, atol=atol)
        and np.allclose(m1.g.g, m2.g.g, rtol=0, atol=atol)
    )


# -- catalog --------------------------------------------------------------

def abelian():
    return StructureTensor(np.zeros((3, 3)))


def e0tilde2():
    """[X3,X1] = -X2, [X3,X2] = X1 (euclidean motions of the plane)."""
    return StructureTensor.from_brackets({(2, 0): (0, -1, 0), (2, 1): (1, 0, 0)})


def su2():
    """[X1,X2] = X3, [X3,X1] = X2, [X3,X2] = -X1."""
    return StructureTensor.from_brackets({(0, 1): (0, 0, 1), (2, 0): (0, 1, 0), (2, 1): (-1, 0, 0)})


def g_I():
    return StructureTensor.from_brackets({(2, 0): (1, 0, 0), (2, 1): (0, 1, 0)})


def g_D(D):
    return StructureTensor.from_brackets({(2, 0): (0, 1, 0), (2, 1): (-D, 2, 0)})


def unimodular_milnor(a, b, c):
    """Orthonormal frame with [e1,e2] = a e3, [e2,e3] = c e1, [e3,e1] = b e2."""
    return StructureTensor.from_brackets({(0, 1): (0, 0, a), (1, 2): (c, 0, 0), (2, 0): (0, b, 0)})


def nonunimodular_milnor(a, b, c, d):
    """Orthonormal frame with [e1,e2] = a e2 + b e3, [e1,e3] = c e2 + d e3."""
    return StructureTensor.from_brackets({(0, 1): (0, a, b), (0, 2): (0, c, d)})


CATALOG = {
    "R3": abelian,
    "E0tilde2": e0tilde2,
    "SU2": su2,
    "GI": g_I,
    "GD": g_D,
}


def named(group, D=None):
    try:
        ctor = CATALOG[group]
    except KeyError:
        raise ValueError(f"unknown group {group!r}; expected one of {sorted(CATALOG)}") from None
    if group == "GD":
        if D is None:
            raise ValueError("group GD needs a value for D")
        return ctor(float(D))
    return ctor()


# -- JSON records ----------------------------------------------------------

def from_record(rec):
    """Parse an algebra record.

    Either ``{"constants": [[i, j, k, value], ...], "metric": [[...], ...]}``
    with 1-based indices, or the catalog shortcut ``{"group": "GD", "D": 2}``.
    """
    if "group" in rec:
        st = named(rec["group"], rec.get("D"))
    elif "constants" in rec:
        up = np.zeros((3, 3))
        for entry in rec["constants"]:
            if len(entry) != 4:
                raise ValueError(f"constant entry must be [i, j, k, value], got {entry!r}")
            i, j, k, val = entry
            i, j, k = int(i) - 1, int(j) - 1, int(k) - 1
            if not all(0 <= n < 3 for n in (i, j, k)):
                raise ValueError(f"indices must lie in 1..3, got {entry!r}")
            if i == j:
                raise ValueError(f"[e{i+1}, e{j+1}] is identically zero: {entry!r}")
            sign = 1.0
            if i > j:
                i, j, sign = j, i, -1.0
            up[PAIRS.index((i, j)), k] += sign * float(val)
        st = StructureTensor(up)
    else:
        raise ValueError("algebra record needs either 'constants' or 'group'")
    return validate(MetricLieAlgebra.build(st, rec.get("metric")))


def load(path):
    with open(path) as fh:
        return from_record(json.load(fh))


def to_record(mla):
    constants = []
    for p, (i, j) in enumerate(PAIRS):
        for k in range(3):
            v = float(mla.st.upper[p, k])
            if v != 0.0:
                constants.append([i + 1, j + 1, k + 1, v])
    return {"constants": constants, "metric": mla.g.g.tolist()}

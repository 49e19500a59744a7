"""Geodesics of the left-invariant metric diag(1, 1, nu) on the universal cover
of the euclidean motion group E0(2).

Points of the cover are ``([x; y], s)`` with product

    ([x; y], s) . ([x'; y'], s') = ([x; y] + R(s) [x'; y'], s + s'),
    R(s) = [[cos s, sin s], [-sin s, cos s]].

Algebra vectors are written in the orthonormal frame ``(X1, X2, X3/sqrt(nu))``.
Throughout, ``kappa = 1 - 1/sqrt(nu)`` is the rate at which the translational
velocity turns relative to the rotation angle.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .errors import DomainExceeded, InvalidStep, ParamOutOfRange

TWO_PI = 2.0 * math.pi
TOL_WELLDEF = 1e-9


class AlgebraVector(NamedTuple):
    v1: float
    v2: float
    v3: float


class CoverPoint(NamedTuple):
    x: float
    y: float
    s: float


class _GroupPoint(NamedTuple):
    x: float
    y: float
    s: float


class GroupPoint(_GroupPoint):
    """Point of E0(2); the rotation angle lies in (-pi, pi]."""

    __slots__ = ()

    def __new__(cls, x, y, s):
        if not -math.pi < s <= math.pi:
            raise ValueError(f"angle {s!r} outside (-pi, pi]")
        return super().__new__(cls, float(x), float(y), float(s))


IDENTITY = CoverPoint(0.0, 0.0, 0.0)


def _check_nu(nu):
    if not (math.isfinite(nu) and nu > 0):
        raise ParamOutOfRange(f"nu must be finite and > 0, got {nu}")


def kappa(nu):
    _check_nu(nu)
    return 1.0 - 1.0 / math.sqrt(nu)


def rotation(s):
    cs, sn = math.cos(s), math.sin(s)
    return np.array([[cs, sn], [-sn, cs]])


# -- Euler-Arnold -----------------------------------------------------------------

def euler_arnold_rhs(nu, alpha) -> AlgebraVector:
    _check_nu(nu)
    a1, a2, a3 = alpha
    w = 1.0 / math.sqrt(nu)
    return AlgebraVector(-w * a2 * a3, w * a1 * a3, 0.0)


def euler_arnold_generic(c, alpha):
    """``alpha' = sum_k <alpha, [alpha, e_k]> e_k`` for orthonormal-frame constants ``c``."""
    alpha = np.asarray(alpha, dtype=float)
    return np.einsum("i,j,jki->k", alpha, alpha, np.asarray(c, dtype=float))


def e0_frame_constants(nu):
    """Structure constants of the frame ``(X1, X2, X3/sqrt(nu))``."""
    _check_nu(nu)
    w = 1.0 / math.sqrt(nu)
    c = np.zeros((3, 3, 3))
    c[2, 0, 1], c[0, 2, 1] = -w, w
    c[2, 1, 0], c[1, 2, 0] = w, -w
    return c


# -- integration ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeodesicPath:
    t: np.ndarray       # (n,)
    points: np.ndarray  # (n, 3) cover coordinates x, y, s
    alpha: np.ndarray   # (n, 3)

    @property
    def samples(self):
        return [
            (float(t), CoverPoint(*map(float, p)), AlgebraVector(*map(float, a)))
            for t, p, a in zip(self.t, self.points, self.alpha)
        ]

    def energy_drift(self):
        e = np.sum(self.alpha**2, axis=1)
        return float(np.max(np.abs(e - e[0])))


def _steps(t_end, step):
    if not (math.isfinite(step) and step > 0):
        raise InvalidStep(f"step must be finite and > 0, got {step}")
    if not (math.isfinite(t_end) and t_end >= 0):
        raise InvalidStep(f"t_end must be finite and >= 0, got {t_end}")
    n = max(1, math.ceil(t_end / step - 1e-9))
    return n, t_end / n


def integrate_batch(nus, vs, t_end, step, stride=1):
    """RK4 for several geodesics at once; returns ``(t, states)`` with states of
    shape ``(m, n, 6)`` holding ``(alpha, x, y, s)``."""
    nsteps, h = _steps(t_end, step)
    for nu in np.atleast_1d(nus):
        _check_nu(float(nu))
    states = kernels.rk4_e0(nus, vs, h, nsteps, stride)
    t = h * stride * np.arange(states.shape[1])
    return t, states


def integrate_geodesic(nu, v, t_end, step=1e-3, stride=1) -> GeodesicPath:
    """Fixed-step classical RK4 for the joint (alpha, gamma) system from the identity."""
    t, st = integrate_batch(nu, [tuple(v)], t_end, step, stride)
    return GeodesicPath(t=t, points=st[0, :, 3:], alpha=st[0, :, :3])


# -- closed forms -----------------------------------------------------------------

def _sc(theta):
    """``sin(theta)/theta`` and ``(1 - cos theta)/theta``, both smooth through 0."""
    S = np.sinc(theta / math.pi)
    C = np.sin(0.5 * theta) * np.sinc(theta / TWO_PI)
    return S, C


def closed_geodesic(nu, v, t):
    """Geodesic from the identity with initial velocity ``v``, evaluated at ``t``
    (scalar or array). Returns a ``CoverPoint`` for scalar ``t``, else an (n, 3) array."""
    k = kappa(nu)
    v1, v2, v3 = map(float, v)
    tt = np.asarray(t, dtype=float)
    S, C = _sc(k * v3 * tt)
    out = np.stack([tt * (v1 * S + v2 * C), tt * (-v1 * C + v2 * S), v3 * tt], axis=-1)
    if out.ndim == 1:
        return CoverPoint(*map(float, out))
    return out


def closed_alpha(nu, v, t):
    """Body velocity along the geodesic: the planar part turns at rate ``v3/sqrt(nu)``."""
    _check_nu(nu)
    v1, v2, v3 = map(float, v)
    ph = v3 * np.asarray(t, dtype=float) / math.sqrt(nu)
    cs, sn = np.cos(ph), np.sin(ph)
    return np.stack([v1 * cs - v2 * sn, v1 * sn + v2 * cs, np.full_like(ph, v3)], axis=-1)


def exp_e(nu, v) -> CoverPoint:
    k = kappa(nu)
    if abs(k * v[2]) >= TWO_PI:
        raise DomainExceeded(f"|kappa v3| = {abs(k * v[2]):.6g} >= 2 pi")
    return closed_geodesic(nu, v, 1.0)


def log_e(nu, p) -> AlgebraVector:
    k = kappa(nu)
    x, y, s = map(float, p)
    theta = k * s
    if abs(theta) >= TWO_PI:
        raise DomainExceeded(f"|kappa s| = {abs(theta):.6g} >= 2 pi")
    S, C = _sc(theta)
    n = S * S + C * C
    return AlgebraVector(float((S * x - C * y) / n), float((C * x + S * y) / n), s)


# -- group structure ------------------------------------------------------------------

def group_mul(p, q) -> CoverPoint:
    x, y, s = p
    u, w, r = q
    cs, sn = math.cos(s), math.sin(s)
    return CoverPoint(x + cs * u + sn * w, y - sn * u + cs * w, s + r)


def group_inv(p) -> CoverPoint:
    a, b, c = p
    cs, sn = math.cos(c), math.sin(c)
    # R(-c) [-a; -b]
    return CoverPoint(-(cs * a - sn * b), -(sn * a + cs * b), -c)


def project(p) -> GroupPoint:
    x, y, s = p
    r = math.pi - (math.pi - s) % TWO_PI
    if r <= -math.pi:  # rounding can land on the excluded endpoint
        r += TWO_PI
    return GroupPoint(x, y, r)


def lifts(q, k_range: Iterable[int]):
    x, y, s = q
    return [CoverPoint(x, y, s + TWO_PI * k) for k in k_range]


# -- geodesic symmetry ---------------------------------------------------------------

def symmetry_cover(nu, p) -> CoverPoint:
    """Geodesic symmetry at the identity, ``exp(-log p)``, extended to the whole cover."""
    x, y, s = p
    phi = kappa(nu) * s
    cs, sn = math.cos(phi), math.sin(phi)
    return CoverPoint(-x * cs + y * sn, -x * sn - y * cs, -s)


def symmetry_based(nu, base, p) -> CoverPoint:
    """Geodesic symmetry at ``base``: conjugate of the identity symmetry by left translation."""
    a, b, c = base
    x, y, s = p
    phi = kappa(nu) * (s - c)
    cs, sn = math.cos(phi), math.sin(phi)
    u, w = a - x, b - y
    # R(-phi) [u; w]
    return CoverPoint(a + cs * u - sn * w, b + sn * u + cs * w, 2.0 * c - s)


def _wrap(d):
    return math.remainder(d, TWO_PI)


def symmetry_welldefined(nu, q, k_range=range(-3, 4), tol=TOL_WELLDEF):
    """Does the identity symmetry descend to E0(2) at ``q``? Compares the
    projected images of every lift of ``q``."""
    images = [project(symmetry_cover(nu, p)) for p in lifts(q, k_range)]
    ref = images[0]
    consistent = all(
        abs(im.x - ref.x) <= tol and abs(im.y - ref.y) <= tol and abs(_wrap(im.s - ref.s)) <= tol
        for im in images[1:]
    )
    return consistent, images


def is_symmetric_space_E02(nu, tol=TOL_WELLDEF):
    _check_nu(nu)
    r = 1.0 / math.sqrt(nu)
    n = round(r)
    return n >= 1 and abs(r - n) <= tol


# -- metric pullback diagnostics ------------------------------------------------------

def _jacobian(f, p, h):
    p = np.asarray(p, dtype=float)
    J = np.empty((3, 3))
    for j in range(3):
        dp = np.zeros(3)
        dp[j] = h
        J[:, j] = (np.asarray(f(p + dp)) - np.asarray(f(p - dp))) / (2.0 * h)
    return J


def left_translation_differential(q, h=1e-5):
    """Finite-difference differential of ``L_q`` at the identity."""
    return _jacobian(lambda u: group_mul(q, u), np.zeros(3), h)


def left_invariant_metric(q, g_e=None, h=1e-5):
    """Metric at ``q`` obtained by transporting ``g_e`` with left translation."""
    g_e = np.eye(3) if g_e is None else np.asarray(g_e, dtype=float)
    Ainv = np.linalg.inv(left_translation_differential(q, h))
    return Ainv.T @ g_e @ Ainv


def symmetry_differential(nu, p, h=1e-5):
    return _jacobian(lambda u: symmetry_cover(nu, u), p, h)


def isometry_defect(nu, p, g_e=None, h=1e-5):
    """``max |J^T g(S p) J - g(p)|`` for the finite-difference Jacobian ``J`` of the
    identity symmetry at ``p``."""
    J = symmetry_differential(nu, p, h)
    img = symmetry_cover(nu, p)
    pulled = J.T @ left_invariant_metric(img, g_e, h) @ J
    return float(np.max(np.abs(pulled - left_invariant_metric(p, g_e, h))))


# -- export --------------------------------------------------------------------------

CSV_HEADER = ("t", "x", "y", "s", "alpha1", "alpha2", "alpha3")


def _fmt(x):
    return f"{x:.12f}"


def write_csv(fh, path: GeodesicPath, extra=None):
    """Write samples as CSV. ``extra`` maps additional column names to arrays."""
    extra = extra or {}
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER + tuple(extra))
    cols = [path.t, *path.points.T, *path.alpha.T, *(np.asarray(v) for v in extra.values())]
    for row in zip(*cols):
        w.writerow([_fmt(float(x)) for x in row])

"""Hot numeric kernels.

Each public function dispatches on :func:`liesym._accel.use_numba` between an
``@njit`` loop kernel (``*_nb``) and a vectorised numpy version (``*_np``).
All kernels work on a leading batch axis.

Curvature convention: ``R(x, y) = nabla_[x,y] - nabla_x nabla_y + nabla_y nabla_x``
(the opposite sign of the usual one), ``r[i,j,k,l] = <R(e_i, e_j) e_k, e_l>``.
"""
import numpy as np

from . import _accel
from ._accel import njit


# -- numpy path -------------------------------------------------------------

def levi_civita_np(c):
    return 0.5 * (c - np.einsum("...jki->...ijk", c) + np.einsum("...kij->...ijk", c))


def riemann_np(c, gamma):
    return (
        np.einsum("...ijm,...mkl->...ijkl", c, gamma)
        - np.einsum("...ipl,...jkp->...ijkl", gamma, gamma)
        + np.einsum("...jpl,...ikp->...ijkl", gamma, gamma)
    )


def nabla_riemann_np(gamma, r):
    return (
        np.einsum("...ijkp,...mpl->...mijkl", r, gamma)
        - np.einsum("...mip,...pjkl->...mijkl", gamma, r)
        - np.einsum("...mjp,...ipkl->...mijkl", gamma, r)
        - np.einsum("...mkp,...ijpl->...mijkl", gamma, r)
    )


# -- numba path -------------------------------------------------------------

@njit
def levi_civita_nb(c):
    n = c.shape[0]
    out = np.empty_like(c)
    for b in range(n):
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    out[b, i, j, k] = 0.5 * (c[b, i, j, k] - c[b, j, k, i] + c[b, k, i, j])
    return out


@njit
def riemann_nb(c, gamma):
    n = c.shape[0]
    out = np.zeros((n, 3, 3, 3, 3))
    for b in range(n):
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    for l in range(3):
                        acc = 0.0
                        for p in range(3):
                            acc += (c[b, i, j, p] * gamma[b, p, k, l]
                                    - gamma[b, i, p, l] * gamma[b, j, k, p]
                                    + gamma[b, j, p, l] * gamma[b, i, k, p])
                        out[b, i, j, k, l] = acc
    return out


@njit
def nabla_riemann_nb(gamma, r):
    n = gamma.shape[0]
    out = np.zeros((n, 3, 3, 3, 3, 3))
    for b in range(n):
        for m in range(3):
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        for l in range(3):
                            acc = 0.0
                            for p in range(3):
                                acc += (r[b, i, j, k, p] * gamma[b, m, p, l]
                                        - gamma[b, m, i, p] * r[b, p, j, k, l]
                                        - gamma[b, m, j, p] * r[b, i, p, k, l]
                                        - gamma[b, m, k, p] * r[b, i, j, p, l])
                            out[b, m, i, j, k, l] = acc
    return out


@njit
def nabla_riemann_maxabs_nb(c):
    """Fused pipeline: max |nabla R| per batch entry, without materialising dr."""
    n = c.shape[0]
    gamma = levi_civita_nb(c)
    r = riemann_nb(c, gamma)
    out = np.zeros(n)
    for b in range(n):
        best = 0.0
        for m in range(3):
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        for l in range(3):
                            acc = 0.0
                            for p in range(3):
                                acc += (r[b, i, j, k, p] * gamma[b, m, p, l]
                                        - gamma[b, m, i, p] * r[b, p, j, k, l]
                                        - gamma[b, m, j, p] * r[b, i, p, k, l]
                                        - gamma[b, m, k, p] * r[b, i, j, p, l])
                            if abs(acc) > best:
                                best = abs(acc)
        out[b] = best
    return out


# -- dispatch ----------------------------------------------------------------

def _batched(a, core_ndim):
    a = np.ascontiguousarray(a, dtype=float)
    lead = a.shape[: a.ndim - core_ndim]
    return a.reshape((-1,) + a.shape[a.ndim - core_ndim:]), lead


def levi_civita(c):
    """Connection coefficients ``gamma[i,j,k] = <nabla_{e_i} e_j, e_k>`` from
    orthonormal-frame structure constants (Koszul formula)."""
    flat, lead = _batched(c, 3)
    out = levi_civita_nb(flat) if _accel.use_numba() else levi_civita_np(flat)
    return out.reshape(lead + (3, 3, 3))


def riemann(c, gamma):
    cf, lead = _batched(c, 3)
    gf, _ = _batched(gamma, 3)
    out = riemann_nb(cf, gf) if _accel.use_numba() else riemann_np(cf, gf)
    return out.reshape(lead + (3,) * 4)


def nabla_riemann(gamma, r):
    gf, lead = _batched(gamma, 3)
    rf, _ = _batched(r, 4)
    out = nabla_riemann_nb(gf, rf) if _accel.use_numba() else nabla_riemann_np(gf, rf)
    return out.reshape(lead + (3,) * 5)


def nabla_riemann_maxabs(c):
    """max |nabla R| for a batch of orthonormal-frame structure tensors."""
    cf, lead = _batched(c, 3)
    if _accel.use_numba():
        out = nabla_riemann_maxabs_nb(cf)
    else:
        g = levi_civita_np(cf)
        dr = nabla_riemann_np(g, riemann_np(cf, g))
        out = np.abs(dr).reshape(len(cf), -1).max(axis=1)
    return out.reshape(lead)


# -- geodesic integration on the universal cover of E0(2) --------------------
#
# State y = (alpha1, alpha2, alpha3, x, y, s):
#   alpha' = (-alpha2 alpha3 / sqrt(nu), alpha1 alpha3 / sqrt(nu), 0)
#   (x, y)' = R(s) (alpha1, alpha2),  s' = alpha3,
#   R(s) = [[cos s, sin s], [-sin s, cos s]].

def _e0_rhs_np(w, y):
    a1, a2, a3, s = y[:, 0], y[:, 1], y[:, 2], y[:, 5]
    cs, sn = np.cos(s), np.sin(s)
    out = np.empty_like(y)
    out[:, 0] = -w * a2 * a3
    out[:, 1] = w * a1 * a3
    out[:, 2] = 0.0
    out[:, 3] = a1 * cs + a2 * sn
    out[:, 4] = -a1 * sn + a2 * cs
    out[:, 5] = a3
    return out


def rk4_e0_np(inv_sqrt_nu, y0, h, nsteps, stride):
    y = np.array(y0, dtype=float)
    w = np.asarray(inv_sqrt_nu, dtype=float)
    nout = nsteps // stride + 1
    traj = np.empty((y.shape[0], nout, 6))
    traj[:, 0] = y
    for n in range(1, nsteps + 1):
        k1 = _e0_rhs_np(w, y)
        k2 = _e0_rhs_np(w, y + 0.5 * h * k1)
        k3 = _e0_rhs_np(w, y + 0.5 * h * k2)
        k4 = _e0_rhs_np(w, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if n % stride == 0:
            traj[:, n // stride] = y
    return traj


@njit
def _e0_rhs_nb(w, y, out):
    cs = np.cos(y[5])
    sn = np.sin(y[5])
    out[0] = -w * y[1] * y[2]
    out[1] = w * y[0] * y[2]
    out[2] = 0.0
    out[3] = y[0] * cs + y[1] * sn
    out[4] = -y[0] * sn + y[1] * cs
    out[5] = y[2]


@njit
def rk4_e0_nb(inv_sqrt_nu, y0, h, nsteps, stride):
    nb = y0.shape[0]
    nout = nsteps // stride + 1
    traj = np.empty((nb, nout, 6))
    k1 = np.empty(6)
    k2 = np.empty(6)
    k3 = np.empty(6)
    k4 = np.empty(6)
    tmp = np.empty(6)
    y = np.empty(6)
    for b in range(nb):
        w = inv_sqrt_nu[b]
        for q in range(6):
            y[q] = y0[b, q]
            traj[b, 0, q] = y[q]
        for n in range(1, nsteps + 1):
            _e0_rhs_nb(w, y, k1)
            for q in range(6):
                tmp[q] = y[q] + 0.5 * h * k1[q]
            _e0_rhs_nb(w, tmp, k2)
            for q in range(6):
                tmp[q] = y[q] + 0.5 * h * k2[q]
            _e0_rhs_nb(w, tmp, k3)
            for q in range(6):
                tmp[q] = y[q] + h * k3[q]
            _e0_rhs_nb(w, tmp, k4)
            for q in range(6):
                y[q] = y[q] + (h / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q])
            if n % stride == 0:
                for q in range(6):
                    traj[b, n // stride, q] = y[q]
    return traj


def rk4_e0(nu, alpha0, h, nsteps, stride=1, start=None):
    """Integrate a batch of geodesics from the identity (or ``start`` points).

    ``nu`` has shape ``(n,)`` or is a scalar, ``alpha0`` shape ``(n, 3)``.
    Returns an array ``(n, nsteps // stride + 1, 6)`` of
    ``(alpha1, alpha2, alpha3, x, y, s)`` samples.
    """
    alpha0 = np.atleast_2d(np.asarray(alpha0, dtype=float))
    n = alpha0.shape[0]
    w = np.broadcast_to(1.0 / np.sqrt(np.asarray(nu, dtype=float)), (n,)).copy()
    y0 = np.zeros((n, 6))
    y0[:, :3] = alpha0
    if start is not None:
        y0[:, 3:] = np.atleast_2d(start)
    if _accel.use_numba():
        return rk4_e0_nb(w, y0, float(h), int(nsteps), int(stride))
    return rk4_e0_np(w, y0, float(h), int(nsteps), int(stride))

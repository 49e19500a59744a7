import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liesym import algebra as alg
from liesym.algebra import MetricLieAlgebra
from liesym.curvature import (
    closed_form_R_nonunimodular,
    closed_form_R_unimodular,
    connection,
    connection_defects,
    curvature,
    curvature_defects,
    frame_pipeline,
    is_locally_symmetric,
    nabla_R,
    sectional,
)
from liesym.errors import NotOrthonormal

from conftest import random_spd

coef = st.floats(-3, 3, allow_nan=False)


def test_abelian_connection_vanishes():
    conn = connection(alg.abelian())
    assert np.all(conn.gamma == 0)


def test_bi_invariant_connection_is_half_bracket():
    st_ = alg.unimodular_milnor(1, 1, 1)
    assert np.allclose(connection(st_).gamma, 0.5 * st_.c, atol=1e-15)


@pytest.mark.parametrize("nu", [0.5, 2.0])
def test_e0tilde2_frame_connection(nu):
    w = 1 / math.sqrt(nu)
    g = connection(alg.unimodular_milnor(0, -w, -w)).gamma
    # only nabla_{e3} e1 = -w e2 and nabla_{e3} e2 = w e1 survive
    expected = np.zeros((3, 3, 3))
    expected[2, 0, 1], expected[2, 1, 0] = -w, w
    assert np.allclose(g, expected, atol=1e-15)


def test_connection_needs_orthonormal_metric():
    with pytest.raises(NotOrthonormal):
        connection(MetricLieAlgebra.build(alg.su2(), 2 * np.eye(3)))


def test_round_sphere_sign_convention():
    _, R, dR = frame_pipeline(alg.unimodular_milnor(1, 1, 1))
    # bi-invariant metric: <R(x,y)y,x> = -|[x,y]|^2 / 4 in this convention
    assert R.r[0, 1, 1, 0] == pytest.approx(-0.25)
    assert sectional(R, 0, 1) == pytest.approx(0.25)
    assert dR.max_abs() == 0.0


def test_aaa_coefficient_is_quarter():
    a = 1.7
    _, R, _ = frame_pipeline(alg.unimodular_milnor(a, a, a))
    assert R.r[0, 1, 1, 0] == pytest.approx(-a * a / 4, rel=1e-14)
    assert not math.isclose(R.r[0, 1, 1, 0], -a * a / 2)
    assert np.allclose(R.apply(0, 2, 0), [0, 0, a * a / 4])


def test_not_symmetric_example():
    _, _, dR = frame_pipeline(alg.unimodular_milnor(1, 2, 3))
    assert dR.max_abs() > 0.1


@given(coef, coef, coef)
def test_unimodular_closed_form(a, b, c):
    _, R, _ = frame_pipeline(alg.unimodular_milnor(a, b, c))
    assert np.allclose(R.r, closed_form_R_unimodular(a, b, c).r, atol=1e-10, rtol=0)


@given(coef, coef, st.floats(-1.5, 1.5))
def test_nonunimodular_closed_form(a, d, s):
    b, c = s * a, -s * d
    _, R, _ = frame_pipeline(alg.nonunimodular_milnor(a, b, c, d))
    assert np.allclose(R.r, closed_form_R_nonunimodular(a, b, c, d).r, atol=1e-10, rtol=0)


@given(coef, coef, coef, coef)
def test_structural_identities(a, b, c, d):
    for st_ in (alg.unimodular_milnor(a, b, c), alg.nonunimodular_milnor(a, b, c, d)):
        conn = connection(st_)
        compat, torsion = connection_defects(conn, st_)
        assert compat <= 1e-12 and torsion <= 1e-12
        assert max(curvature_defects(curvature(conn, st_))) <= 1e-10


def test_nabla_R_batched_matches_single(rng):
    cs = np.stack([alg.unimodular_milnor(*rng.uniform(-2, 2, 3)).c for _ in range(5)])
    conn = connection(cs)
    R = curvature(conn, cs)
    dR = nabla_R(conn, R).dr
    for i in range(5):
        _, _, single = frame_pipeline(cs[i])
        assert np.allclose(dR[i], single.dr, atol=1e-14)


@pytest.mark.parametrize("st_,g,expected", [
    (alg.su2(), np.eye(3), True),
    (alg.su2(), np.diag([1.0, 0.5, 2.0]), False),
    (alg.e0tilde2(), np.diag([1.0, 1.0, 2.0]), True),
    (alg.e0tilde2(), np.diag([1.0, 0.5, 2.0]), False),
    (alg.g_D(0.0), np.eye(3), False),
])
def test_is_locally_symmetric_catalog(st_, g, expected):
    sym, res = is_locally_symmetric(MetricLieAlgebra.build(st_, g))
    assert sym is expected
    assert (res <= 1e-9) is expected


def test_every_gi_metric_is_symmetric(rng):
    for _ in range(10):
        assert is_locally_symmetric(MetricLieAlgebra.build(alg.g_I(), random_spd(rng)))[0]

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liesym import algebra as alg
from liesym.algebra import MetricLieAlgebra
from liesym.errors import DivisionByZero
from liesym.milnor import (
    MilnorFrame,
    check_frame,
    identify_family,
    milnor_D,
    milnor_frame,
    sym2_eig,
)

from conftest import random_spd


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 7.0])
def test_su2_round_metric(lam):
    f = milnor_frame(MetricLieAlgebra.build(alg.su2(), lam * np.eye(3)))
    # e_i = X_i / sqrt(lam) rescales every bracket by 1/sqrt(lam)
    assert np.allclose(f.constants, [1 / math.sqrt(lam)] * 3, atol=1e-12)
    check_frame(f, lam * np.eye(3))


@pytest.mark.parametrize("nu", [0.25, 1.0, 2.0])
def test_e0tilde2_constants(nu):
    f = milnor_frame(MetricLieAlgebra.build(alg.e0tilde2(), np.diag([1, 1, nu])))
    assert sorted(abs(x) for x in f.constants) == pytest.approx([0, 1 / math.sqrt(nu), 1 / math.sqrt(nu)])
    assert identify_family(f).name == "E0tilde2"


@pytest.mark.parametrize("nu", [0.5, 1.0, 4.0])
def test_gi_constants_scale_with_nu(nu):
    # e1 = X3/sqrt(nu) acts on span(X1, X2) as 1/sqrt(nu) times the identity
    f = milnor_frame(MetricLieAlgebra.build(alg.g_I(), np.diag([1, 1, nu])))
    w = 1 / math.sqrt(nu)
    assert np.allclose(f.constants, [w, 0, 0, w], atol=1e-12)
    assert identify_family(f).name == "GI"


def test_gd_normal_form_metric():
    g = np.array([[1.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 3.0]])
    f = milnor_frame(MetricLieAlgebra.build(alg.g_D(2.0), g))
    check_frame(f, g)
    a, b, c, d = f.constants
    assert a == pytest.approx(d) and b == pytest.approx(-c)
    assert str(identify_family(f)) == "GD(2)"


@pytest.mark.parametrize("consts,D", [((1, 2, -2, 1), 5.0), ((3, 0, 0, 0), 0.0), ((1, 0, 0, 1), 1.0)])
def test_milnor_D(consts, D):
    assert milnor_D(*consts) == pytest.approx(D, abs=1e-15)


def test_milnor_D_division_by_zero():
    with pytest.raises(DivisionByZero):
        milnor_D(1.0, 0.0, 0.0, -1.0)
    with pytest.raises(ZeroDivisionError):
        milnor_D(0.0, 1.0, 1.0, 0.0)


def _frame(consts):
    st_ = alg.unimodular_milnor(*consts) if len(consts) == 3 else alg.nonunimodular_milnor(*consts)
    return MilnorFrame(np.eye(3), "Unimodular" if len(consts) == 3 else "NonUnimodular",
                       tuple(consts), st_)


@pytest.mark.parametrize("consts,name", [
    ((0, 0, 0), "Abelian"),
    ((1, 1, 1), "SU2"),
    ((1, 1, 0), "E0tilde2"),
    ((1, 0, 0), "OtherUnimodular"),
    ((1, 0, -1), "OtherUnimodular"),
    ((1, 1, -1), "OtherUnimodular"),
    ((1, 0, 0, 1), "GI"),
    ((1, 2, -2, 1), "GD"),
])
def test_identify_family(consts, name):
    fam = identify_family(_frame(consts))
    assert fam.name == name
    if name == "GD":
        assert fam.D == pytest.approx(5.0)


def test_sym2_eig_diagonalises():
    m = np.array([[2.0, 0.7], [0.7, -1.0]])
    rot, vals = sym2_eig(m)
    assert np.allclose(rot.T @ m @ rot, np.diag(vals), atol=1e-14)
    assert vals[0] >= vals[1]


CATALOG = [alg.abelian(), alg.e0tilde2(), alg.su2(), alg.g_I(), alg.g_D(0.0), alg.g_D(2.5),
           alg.g_D(-1.0), alg.g_D(0.5),
           alg.StructureTensor.from_brackets({(0, 1): (0, 0, 1)}),  # Heisenberg
           alg.StructureTensor.from_brackets({(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (2, 0): (0, -1, 0)})]


@pytest.mark.parametrize("idx", range(len(CATALOG)))
def test_frame_contract_random_metrics(idx, rng):
    for _ in range(40):
        g = random_spd(rng)
        f = milnor_frame(MetricLieAlgebra.build(CATALOG[idx], g))
        check_frame(f, g)
        if f.unimodular:
            a, b, c = f.constants
            assert a >= b - 1e-10 and b >= c - 1e-10
            assert sum(x < -1e-9 for x in f.constants) <= 1


@given(st.floats(1.05, 5.0), st.integers(0, 2**32 - 1))
def test_D_invariant_under_basis_change(D0, seed):
    rng = np.random.default_rng(seed)
    m = MetricLieAlgebra.build(alg.g_D(D0), random_spd(rng))
    P = rng.normal(size=(3, 3))
    if abs(np.linalg.det(P)) < 0.1:
        P = P + 2 * np.eye(3)
    d1 = milnor_D(*milnor_frame(m).constants)
    d2 = milnor_D(*milnor_frame(alg.change_basis(m, P)).constants)
    assert d1 == pytest.approx(D0, rel=1e-8)
    assert d2 == pytest.approx(D0, rel=1e-8)


def test_frame_is_deterministic():
    m = MetricLieAlgebra.build(alg.su2(), np.eye(3))
    assert np.array_equal(milnor_frame(m).P, milnor_frame(m).P)

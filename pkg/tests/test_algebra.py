import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liesym import algebra as alg
from liesym.algebra import MetricLieAlgebra, MetricMatrix, StructureTensor
from liesym.errors import DegenerateMetric, NotALieAlgebra, SingularBasisChange

from conftest import random_spd

finite = st.floats(-5, 5, allow_nan=False)
vec3 = st.tuples(finite, finite, finite)


def test_from_brackets_orders_pairs():
    st1 = StructureTensor.from_brackets({(2, 0): (0, 1, 0)})
    st2 = StructureTensor.from_brackets({(0, 2): (0, -1, 0)})
    assert st1 == st2
    assert st1.c[2, 0, 1] == 1.0 and st1.c[0, 2, 1] == -1.0


def test_self_bracket_rejected():
    with pytest.raises(ValueError):
        StructureTensor.from_brackets({(1, 1): (1, 0, 0)})


def test_structure_tensor_is_immutable():
    st_ = alg.su2()
    with pytest.raises(ValueError):
        st_.upper[0, 0] = 3.0
    with pytest.raises(ValueError):
        st_.c[0, 1, 2] = 3.0


@given(vec3, vec3)
def test_bracket_antisymmetric(u, v):
    st_ = alg.g_D(2.5)
    assert np.allclose(alg.bracket(st_, u, v), -alg.bracket(st_, v, u), atol=1e-12)
    assert np.all(alg.bracket(st_, u, u) == 0.0)


@pytest.mark.parametrize("name", ["R3", "E0tilde2", "SU2", "GI"])
def test_catalog_satisfies_jacobi(name):
    assert alg.jacobi_residual(alg.named(name)) == 0.0


@given(st.floats(-4, 4, allow_nan=False))
def test_gd_satisfies_jacobi(D):
    assert alg.jacobi_residual(alg.g_D(D)) <= 1e-12


def test_jacobi_failure_detected():
    # [e1,[e2,e3]] + [e2,[e3,e1]] + [e3,[e1,e2]] = [e1,e2] = e3
    bad = StructureTensor.from_brackets({(0, 1): (0, 0, 1), (1, 2): (0, 1, 0)})
    assert alg.jacobi_residual(bad) > 0.1
    with pytest.raises(NotALieAlgebra):
        alg.validate(MetricLieAlgebra.build(bad))


@pytest.mark.parametrize("name,expected", [
    ("R3", True), ("E0tilde2", True), ("SU2", True), ("GI", False),
])
def test_unimodularity(name, expected):
    uni, traces = alg.unimodularity(alg.named(name))
    assert uni is expected
    if name == "GI":
        # ad_{X3} is the identity on span(X1, X2)
        assert np.allclose(traces, [0, 0, 2])


def test_gd_traces():
    _, traces = alg.unimodularity(alg.g_D(3.0))
    assert np.allclose(traces, [0, 0, 2])


@pytest.mark.parametrize("g", [
    np.diag([1.0, -1.0, 1.0]),
    np.diag([1.0, 0.0, 1.0]),
    [[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    np.full((3, 3), np.nan),
    np.eye(2),
])
def test_bad_metrics(g):
    with pytest.raises(DegenerateMetric):
        MetricMatrix(g)


def test_change_basis_singular():
    m = MetricLieAlgebra.build(alg.su2())
    with pytest.raises(SingularBasisChange):
        alg.change_basis(m, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_change_basis_composes(rng):
    m = MetricLieAlgebra.build(alg.g_D(2.0), random_spd(rng))
    P, Q = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
    lhs = alg.change_basis(alg.change_basis(m, P), Q)
    rhs = alg.change_basis(m, P @ Q)
    assert alg.allclose(lhs, rhs, atol=1e-9)


def test_change_basis_preserves_brackets(rng):
    m = MetricLieAlgebra.build(alg.su2())
    P = rng.normal(size=(3, 3))
    m2 = alg.change_basis(m, P)
    # [P e_i, P e_j] computed either way
    for i in range(3):
        for j in range(3):
            lhs = P @ alg.bracket(m2.st, np.eye(3)[i], np.eye(3)[j])
            rhs = alg.bracket(m.st, P[:, i], P[:, j])
            assert np.allclose(lhs, rhs, atol=1e-12)


def test_record_round_trip(tmp_path):
    m = MetricLieAlgebra.build(alg.g_D(2.0), [[1, 1, 0], [1, 2, 0], [0, 0, 3]])
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(alg.to_record(m)))
    assert alg.allclose(alg.load(path), m)


def test_record_one_based_and_catalog():
    rec = {"constants": [[3, 1, 2, -1.0], [3, 2, 1, 1.0]]}
    assert alg.from_record(rec).st == alg.e0tilde2()
    assert alg.from_record({"group": "GD", "D": 2}).st == alg.g_D(2.0)


@pytest.mark.parametrize("rec", [
    {"constants": [[1, 1, 2, 1.0]]},
    {"constants": [[0, 1, 2, 1.0]]},
    {"constants": [[1, 2, 3]]},
    {"metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
    {"group": "GD"},
    {"group": "nope"},
])
def test_bad_records(rec):
    with pytest.raises(ValueError):
        alg.from_record(rec)

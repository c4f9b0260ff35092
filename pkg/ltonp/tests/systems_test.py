import numpy as np
import pytest

from ltonp.errors import DimensionMismatch, ParameterNotContractive
from ltonp.systems import RationalSystem, SchurParameter


def geometric():
    """lambda / (1 - 0.5 lambda)"""
    return RationalSystem(alpha=[[0.5]], beta=[[1.0]], gamma=[[1.0]], delta=[[0.0]])


def test_constant_system():
    G = RationalSystem.constant([[1.0, 2.0]])
    assert G.dims == (0, 2, 1)
    assert np.allclose(G.evaluate(0.9j), [[1.0, 2.0]])
    assert G.spectral_radius_alpha == 0.0


def test_evaluate_and_taylor():
    G = geometric()
    assert G.evaluate(0.4)[0, 0] == pytest.approx(0.5)
    assert np.allclose(G.taylor(4)[:, 0, 0], [0.0, 1.0, 0.5, 0.25])
    values = G.evaluate_many([0.0, 0.4])
    assert values.shape == (2, 1, 1)


def test_cascade_multiplies_transfer_functions():
    G1 = geometric()
    G2 = RationalSystem(alpha=[[-0.3]], beta=[[2.0]], gamma=[[0.5]], delta=[[1.0]])
    product = G1.cascade(G2)
    assert product.state_dim == 2
    for lam in (0.2, -0.7j, 0.5 + 0.5j):
        assert np.allclose(product.evaluate(lam), G1.evaluate(lam) @ G2.evaluate(lam))


def test_cascade_checks_dimensions():
    with pytest.raises(DimensionMismatch):
        geometric().cascade(RationalSystem.constant(np.ones((2, 2))))


def test_right_quotient(rng):
    alpha = 0.3 * rng.standard_normal((3, 3))
    N = RationalSystem(alpha=alpha, beta=rng.standard_normal((3, 2)),
                       gamma=rng.standard_normal((4, 3)),
                       delta=np.vstack([rng.standard_normal((2, 2)), 10.0 * np.eye(2)]))
    F = N.right_quotient(2)
    for lam in (0.1, 0.3j, -0.25):
        value = N.evaluate(lam)
        assert np.allclose(F.evaluate(lam), value[:2] @ np.linalg.inv(value[2:]))


def test_system_matrix_and_contractivity():
    unit = RationalSystem(alpha=[[0.0]], beta=[[1.0]], gamma=[[1.0]], delta=[[0.0]])
    assert np.allclose(unit.system_matrix(), [[0.0, 1.0], [1.0, 0.0]])
    assert unit.contractive_system_matrix
    assert not geometric().cascade(RationalSystem.constant([[3.0]])).contractive_system_matrix


def test_schur_parameters():
    X = SchurParameter.constant([[0.3, 0.4]])
    assert X.kind == "constant" and X.shape == (1, 2)
    assert np.allclose(X.evaluate(0.5), [[0.3, 0.4]])
    with pytest.raises(ParameterNotContractive):
        SchurParameter.constant([[1.5]])
    shift = SchurParameter.dynamic(RationalSystem(alpha=[[0.0]], beta=[[1.0]], gamma=[[1.0]], delta=[[0.0]]))
    assert shift.evaluate(0.25)[0, 0] == pytest.approx(0.25)
    with pytest.raises(ParameterNotContractive):
        SchurParameter.dynamic(geometric().cascade(RationalSystem.constant([[3.0]])))
    assert np.allclose(SchurParameter.zero(2, 1).evaluate(0.1), np.zeros((2, 1)))

import numpy as np
import pytest

from ptentangle.errors import InvalidDimensionError, PreconditionError, ValidationError
from ptentangle.matrixcore import (
    I2, SX, SZ,
    general_eigenvalues_4x4,
    hermitian_eigenvalues,
    mat_exp_2x2_hermitian,
    partial_trace,
    tensor_product,
)
from ptentangle.metrics import spin_flip

from conftest import random_unitary

BELL = np.zeros((4, 4), complex)
BELL[0, 0] = BELL[0, 3] = BELL[3, 0] = BELL[3, 3] = 0.5


def test_tensor_identity_and_structure():
    np.testing.assert_array_equal(tensor_product(I2, I2), np.eye(4))
    xi = tensor_product(SX, I2)
    np.testing.assert_array_equal(xi[:2, 2:], I2)
    np.testing.assert_array_equal(xi[2:, :2], I2)
    np.testing.assert_array_equal(xi[:2, :2], 0)
    np.testing.assert_array_equal(tensor_product(SZ, SZ), np.diag([1, -1, -1, 1]))


def test_tensor_rejects_bad_dims():
    with pytest.raises(InvalidDimensionError):
        tensor_product(np.eye(3), I2)
    with pytest.raises(ValidationError):
        tensor_product([[np.nan, 0], [0, 1]], I2)


def test_tensor_bilinear(rng):
    for _ in range(20):
        a, a2, b = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
        np.testing.assert_allclose(tensor_product(a + a2, b),
                                   tensor_product(a, b) + tensor_product(a2, b), atol=1e-12)


def test_partial_trace_examples():
    np.testing.assert_allclose(partial_trace(BELL, 1), I2 / 2, atol=1e-15)
    prod = np.kron(np.diag([1, 0]), np.diag([0, 1]))
    np.testing.assert_allclose(partial_trace(prod, 1), np.diag([0, 1]))
    np.testing.assert_allclose(partial_trace(prod, 2), np.diag([1, 0]))
    np.testing.assert_allclose(partial_trace(2 * BELL, 1), I2, atol=1e-15)
    with pytest.raises(ValueError):
        partial_trace(BELL, 3)


def test_partial_trace_of_product(rng):
    for _ in range(20):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        ab = tensor_product(a, b)
        np.testing.assert_allclose(partial_trace(ab, 1), np.trace(a) * b, atol=1e-12)
        np.testing.assert_allclose(partial_trace(ab, 2), np.trace(b) * a, atol=1e-12)
        assert abs(np.trace(partial_trace(ab, 1)) - np.trace(ab)) < 1e-12


def test_hermitian_eigenvalues_examples():
    np.testing.assert_allclose(hermitian_eigenvalues(SZ), [1, -1])
    np.testing.assert_allclose(hermitian_eigenvalues(I2 / 2), [0.5, 0.5])
    m = np.diag([0.1009, 0, 0.3991, 0.5]).astype(complex)
    m[0, 3] = m[3, 0] = 0.2247
    # {|00>,|11>} block: [[0.1009, 0.2247], [0.2247, 0.5]] by quadratic formula
    mean, half = (0.1009 + 0.5) / 2, np.hypot((0.5 - 0.1009) / 2, 0.2247)
    expected = sorted([mean + half, 0.3991, mean - half, 0.0], reverse=True)
    ev = hermitian_eigenvalues(m)
    np.testing.assert_allclose(ev, expected, atol=1e-12)
    # the exact damped block is singular; 4-decimal rounding leaves -6.7e-5
    assert abs(ev[0] - 0.600967) < 1e-6 and abs(ev[3] + 6.67e-5) < 1e-7
    assert abs(ev.sum() - np.trace(m).real) < 1e-9


def test_hermitian_eigenvalues_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        hermitian_eigenvalues([[0, 1], [0, 0]])


def test_hermitian_eigenvalues_recover_spectrum(rng):
    for _ in range(50):
        u = random_unitary(rng, 4)
        d = np.sort(rng.normal(size=4))[::-1]
        np.testing.assert_allclose(hermitian_eigenvalues(u @ np.diag(d) @ u.conj().T), d, atol=1e-8)


def test_general_eigenvalues_examples():
    np.testing.assert_allclose(general_eigenvalues_4x4(np.eye(4)), [1, 1, 1, 1])
    np.testing.assert_allclose(general_eigenvalues_4x4(np.diag([1, 3, 4, 2])), [4, 3, 2, 1])
    prod = BELL @ spin_flip(BELL)
    # direct multiplication: for Phi+ the spin-flipped state equals rho
    np.testing.assert_allclose(spin_flip(BELL), BELL, atol=1e-15)
    np.testing.assert_allclose(general_eigenvalues_4x4(prod), [1, 0, 0, 0], atol=1e-12)


def test_general_eigenvalues_determinant_and_hermitian_agreement(rng):
    for _ in range(50):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        ev = general_eigenvalues_4x4(m)
        det = np.linalg.det(m)
        assert abs(np.prod(ev) - det) <= 1e-8 * max(1.0, abs(det))
        h = m + m.conj().T
        np.testing.assert_allclose(general_eigenvalues_4x4(h).real, hermitian_eigenvalues(h), atol=1e-8)


def test_mat_exp_examples(rng):
    g, t = 0.7, 1.3
    np.testing.assert_allclose(mat_exp_2x2_hermitian(g * SX, t),
                               np.cos(g * t) * I2 - 1j * np.sin(g * t) * SX, atol=1e-12)
    h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = h + h.conj().T
    np.testing.assert_allclose(mat_exp_2x2_hermitian(h, 0.0), I2, atol=1e-12)
    np.testing.assert_allclose(mat_exp_2x2_hermitian(SZ, np.pi), -I2, atol=1e-12)
    u = mat_exp_2x2_hermitian(h, 2.1)
    np.testing.assert_allclose(u @ u.conj().T, I2, atol=1e-10)
    with pytest.raises(PreconditionError):
        mat_exp_2x2_hermitian([[1j, 0], [0, 0]], 1.0)

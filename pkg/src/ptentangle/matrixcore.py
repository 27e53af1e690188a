"""Dense complex linear algebra for single- and two-qubit operators.

Basis order is |00>, |01>, |10>, |11> with qubit-1 the left (slow) tensor
factor.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidDimensionError, NumericalFailureError, PreconditionError, ValidationError

HERMITIAN_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

for _m in (I2, SX, SY, SZ):
    _m.setflags(write=False)


def as_matrix(m, dims=(2, 3, 4)) -> np.ndarray:
    """Return `m` as a finite square complex128 array with size in `dims`."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise InvalidDimensionError(f"expected square matrix of size {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def hermiticity_defect(m) -> float:
    """Largest entry of |m - m^dagger|."""
    a = np.asarray(m)
    return float(np.max(np.abs(a - a.conj().T)))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators; `a` acts on qubit-1."""
    return np.kron(as_matrix(a, (2,)), as_matrix(b, (2,)))


def partial_trace(rho, which: int) -> np.ndarray:
    """Trace out qubit `which` (1 or 2) of a 4x4 operator.

    Returns the 2x2 reduced operator on the remaining qubit. The input need
    not be normalized; the trace is carried over unchanged.
    """
    r = as_matrix(rho, (4,)).reshape(2, 2, 2, 2)
    if which == 1:
        return np.einsum("ijik->jk", r)
    if which == 2:
        return np.einsum("ijkj->ik", r)
    raise ValueError(f"qubit index must be 1 or 2, got {which!r}")


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order.

    Raises
    ------
    PreconditionError
        If the matrix deviates from Hermitian by more than 1e-9 in any entry.
    """
    a = as_matrix(m)
    defect = hermiticity_defect(a)
    if defect > HERMITIAN_TOL:
        raise PreconditionError(f"matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})")
    a = 0.5 * (a + a.conj().T)
    return np.linalg.eigvalsh(a)[::-1]


def general_eigenvalues_4x4(m) -> np.ndarray:
    """Eigenvalues of a general complex 4x4 matrix.

    Sorted by descending real part, ties broken by descending imaginary
    part.
    """
    a = as_matrix(m, (4,))
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigenvalue iteration did not converge: {exc}") from exc
    order = np.lexsort((-ev.imag, -ev.real))
    return ev[order]


def mat_exp_2x2_hermitian(h, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian 2x2 `h` by spectral decomposition."""
    a = as_matrix(h, (2,))
    defect = hermiticity_defect(a)
    if defect > HERMITIAN_TOL:
        raise PreconditionError(f"matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})")
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def local_conjugate(rho, u) -> np.ndarray:
    """(u x I) rho (u x I)^dagger for a 2x2 operator `u` on qubit-1."""
    big = np.kron(as_matrix(u, (2,)), I2)
    return big @ as_matrix(rho, (4,)) @ big.conj().T

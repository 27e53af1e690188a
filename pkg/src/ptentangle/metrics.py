"""Entanglement and nonlocality measures for two-qubit states.

Qubit-1 plays Alice (measured first, outcome conditioned on), qubit-2 plays
Bob. All functions except `concurrence` (with ``auto_normalize``) expect a
unit-trace state; renormalize raw non-Hermitian trajectories first so that
averages follow tr(A rho)/tr(rho).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import check_density, renormalize
from .errors import NumericalFailureError, ValidationError
from .matrixcore import I2, PAULIS, SY, general_eigenvalues_4x4, hermitian_eigenvalues

IMAG_CLAMP = 1e-8
NEG_CLAMP = 1e-8
RANK_CUTOFF = 1e-13
ZERO_PROB = 1e-15

AXES = {"x": 0, "y": 1, "z": 2}
STEERING_AXES = {2: ("x", "z"), 3: ("x", "y", "z")}

_YY = np.kron(SY, SY)


def _state(rho, auto_normalize: bool = False) -> np.ndarray:
    r = check_density(rho, unit_trace=not auto_normalize)
    return renormalize(r) if auto_normalize else r


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    return _YY @ np.conj(rho) @ _YY


def wootters_eigenvalues(rho) -> np.ndarray:
    """Eigenvalues of rho * spin_flip(rho), clamped to the non-negative reals.

    Imaginary parts below 1e-8 and negative values above -1e-8 are
    treated as round-off; anything larger raises NumericalFailureError.
    """
    ev = general_eigenvalues_4x4(rho @ spin_flip(rho))
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.max(np.abs(ev.imag)) >= IMAG_CLAMP * scale:
        raise NumericalFailureError(f"spin-flip eigenvalue has imaginary part {np.max(np.abs(ev.imag)):.3e}")
    lam = ev.real
    if lam.min() <= -NEG_CLAMP * scale:
        raise NumericalFailureError(f"spin-flip eigenvalue is negative: {lam.min():.3e}")
    return np.sort(np.clip(lam, 0.0, None))[::-1]


def _wootters_roots(rho) -> np.ndarray:
    # sqrt(lambda_i) as singular values of W^T Y W with rho = W W^+; avoids
    # the sqrt(round-off) bias of taking roots of tiny eigenvalues
    p, v = np.linalg.eigh(rho)
    keep = p > RANK_CUTOFF * max(p.max(), RANK_CUTOFF)
    w = v[:, keep] * np.sqrt(p[keep])
    sv = np.linalg.svd(w.T @ _YY @ w, compute_uv=False)
    return np.concatenate([sv, np.zeros(4 - sv.size)])


def concurrence(rho, auto_normalize: bool = False) -> float:
    """Wootters concurrence max(0, r1 - r2 - r3 - r4), r_i = sqrt(lambda_i).

    Parameters
    ----------
    rho : array_like
        4x4 density matrix.
    auto_normalize : bool
        Divide by the trace first. Without it a trace != 1 is an error.
    """
    r = _state(rho, auto_normalize)
    wootters_eigenvalues(r)
    roots = _wootters_roots(r)
    return float(max(0.0, roots[0] - roots[1:].sum()))


def concurrence_pure_oracle(psi) -> float:
    """2 |a00 a11 - a01 a10| for a normalized pure state."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != 4:
        raise ValidationError(f"expected 4 amplitudes, got {psi.size}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError(f"state vector not normalized: norm = {norm:.12g}")
    return float(2 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def correlation_tensor(rho) -> np.ndarray:
    """t_ij = tr(rho sigma_i x sigma_j), i, j over x, y, z."""
    r = _state(rho)
    t = np.empty((3, 3))
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            v = np.trace(r @ np.kron(si, sj))
            if abs(v.imag) > 1e-10:
                raise NumericalFailureError(f"correlation t[{i}][{j}] has imaginary part {v.imag:.3e}")
            t[i, j] = v.real
    return t


def bell_max(rho) -> float:
    """Maximal CHSH expectation 2 sqrt(u1 + u2) from the correlation tensor.

    u1, u2 are the two largest eigenvalues of T^T T. Values above 2 violate
    the CHSH inequality.
    """
    t = correlation_tensor(rho)
    m = t.T @ t
    u = hermitian_eigenvalues(0.5 * (m + m.T))
    return float(2 * np.sqrt(max(u[0] + u[1], 0.0)))


@dataclass(frozen=True)
class SteeringBreakdown:
    """Per-axis ingredients of the steering parameter.

    ``prob[k]`` is (P(A=+1), P(A=-1)) and ``cond[k]`` the matching
    conditional expectations of Bob's Pauli on axis ``axes[k]``.
    """

    axes: tuple[str, ...]
    prob: tuple[tuple[float, float], ...]
    cond: tuple[tuple[float, float], ...]
    terms: tuple[float, ...]

    @property
    def value(self) -> float:
        return float(sum(self.terms))


def steering_breakdown(rho, n: int = 3, axes=None) -> SteeringBreakdown:
    """Evaluate S_N = sum_i sum_a P(A_i=a) <B_i>_{A_i=a}^2.

    Alice projects qubit-1 with (I + a sigma_i)/2 and Bob measures the same
    Pauli on qubit-2. `axes` overrides the default axis subset for `n`
    (x, z for n=2; x, y, z for n=3). A zero-probability branch contributes 0.
    """
    r = _state(rho)
    if axes is None:
        if n not in STEERING_AXES:
            raise ValidationError(f"n must be 2 or 3, got {n}")
        axes = STEERING_AXES[n]
    axes = tuple(axes)
    probs, conds, terms = [], [], []
    for name in axes:
        sig = PAULIS[AXES[name]]
        pa, ca, term = [], [], 0.0
        for a in (1, -1):
            proj = 0.5 * (I2 + a * sig)
            p = float(np.trace(np.kron(proj, I2) @ r).real)
            if p > ZERO_PROB:
                c = float(np.trace(np.kron(proj, sig) @ r).real) / p
                term += p * c * c
            else:
                c = 0.0
            pa.append(p)
            ca.append(c)
        probs.append(tuple(pa))
        conds.append(tuple(ca))
        terms.append(term)
    return SteeringBreakdown(axes=axes, prob=tuple(probs), cond=tuple(conds), terms=tuple(terms))


def steering_parameter(rho, n: int = 3, axes=None) -> float:
    """S_N; values above 1 violate the steering inequality."""
    return steering_breakdown(rho, n, axes).value


def purity(rho) -> float:
    r = _state(rho)
    return float(np.sum(np.abs(r) ** 2))

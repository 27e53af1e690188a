"""Hamiltonians and two-qubit evolution.

Qubit-1 carries the local operation (Rabi drive, PT-symmetric or
symmetry-broken non-Hermitian Hamiltonian, or amplitude damping); qubit-2 is
idle. Units: hbar = 1. For the PT and non-PT Hamiltonians the natural time is
t' = delta_e * t with delta_e = s cos(alpha).

Non-Hermitian evolution does not preserve the trace. States are evolved raw
(linear equation) and divided by their trace only when observed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels
from .errors import NormalizationError, TraceCollapseError, ValidationError
from .matrixcore import (
    HERMITIAN_TOL,
    I2,
    SX,
    SZ,
    as_matrix,
    hermiticity_defect,
    local_conjugate,
)

ALPHA_MARGIN = 1e-6
PSD_TOL = 1e-9
MIN_TRACE = 1e-12
DEFAULT_DT = 1e-3

# qubit-1 lowering operator; |0> is the excited level so that amplitude
# damping of Phi+ reproduces the cut-off states with weight on |10>
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T


@dataclass(frozen=True)
class PTParams:
    """Scale `s` and non-Hermiticity `alpha` of the PT-symmetric Hamiltonian."""

    s: float = 1.0
    alpha: float = math.pi / 4

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise ValidationError(f"s must be positive, got {self.s}")
        if not math.isfinite(self.alpha) or abs(self.alpha) > math.pi / 2 - ALPHA_MARGIN:
            raise ValidationError(
                f"|alpha| must be <= pi/2 - {ALPHA_MARGIN:g} (unbroken PT phase), got {self.alpha}"
            )

    @property
    def delta_e(self) -> float:
        return self.s * math.cos(self.alpha)


@dataclass(frozen=True)
class Rabi:
    g: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.g):
            raise ValidationError(f"g must be finite, got {self.g}")


@dataclass(frozen=True)
class PT:
    params: PTParams = PTParams()


@dataclass(frozen=True)
class NonPT:
    params: PTParams = PTParams()
    epsilon: float = 0.01

    def __post_init__(self):
        if not math.isfinite(self.epsilon):
            raise ValidationError(f"epsilon must be finite, got {self.epsilon}")


@dataclass(frozen=True)
class AmplitudeDamping:
    gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValidationError(f"gamma must be positive, got {self.gamma}")


EvolutionSpec = Union[Rabi, PT, NonPT, AmplitudeDamping]


def time_unit(spec: EvolutionSpec) -> float:
    """Absolute time corresponding to one unit of the spec's natural time."""
    if isinstance(spec, (PT, NonPT)):
        return 1.0 / spec.params.delta_e
    return 1.0


@dataclass(frozen=True)
class SplitHamiltonian:
    h_plus: np.ndarray
    h_minus: np.ndarray


# -- states -----------------------------------------------------------------

def check_density(rho, *, unit_trace: bool = False) -> np.ndarray:
    """Validate a two-qubit density matrix and return it as an array.

    The trace may differ from 1 unless `unit_trace` is set; it must exceed
    1e-12. Errors name the violated invariant and the measured value.
    """
    r = as_matrix(rho, (4,))
    defect = hermiticity_defect(r)
    if defect > HERMITIAN_TOL:
        raise ValidationError(f"density matrix not Hermitian: max |rho - rho^dagger| = {defect:.3e}")
    tr = float(np.trace(r).real)
    if tr <= MIN_TRACE:
        raise ValidationError(f"density matrix trace must exceed {MIN_TRACE:g}, got {tr:.6g}")
    lam_min = float(np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0])
    if lam_min < -PSD_TOL * max(tr, 1.0):
        raise ValidationError(f"density matrix not positive semidefinite: min eigenvalue {lam_min:.3e}")
    if unit_trace and abs(tr - 1.0) > 1e-9:
        raise NormalizationError(f"density matrix trace must be 1, got {tr:.12g}")
    return r


def bell_phi_plus() -> np.ndarray:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[0, 3] = rho[3, 0] = rho[3, 3] = 0.5
    return rho


def damped_state(t_c: float, gamma: float = 1.0) -> np.ndarray:
    """Phi+ after qubit-1 amplitude damping at rate `gamma` for time `t_c`."""
    if t_c < 0 or gamma <= 0:
        raise ValidationError(f"need t_c >= 0 and gamma > 0, got t_c={t_c}, gamma={gamma}")
    p = math.exp(-gamma * t_c)
    c = math.exp(-gamma * t_c / 2)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = p / 2
    rho[0, 3] = rho[3, 0] = c / 2
    rho[2, 2] = (1 - p) / 2
    rho[3, 3] = 0.5
    return rho


def renormalize(rho) -> np.ndarray:
    r = as_matrix(rho, (4,))
    tr = np.trace(r).real
    if not tr > MIN_TRACE:
        raise TraceCollapseError(f"cannot renormalize: trace {tr:.3e} <= {MIN_TRACE:g}")
    return r / tr


# -- Hamiltonians -----------------------------------------------------------

def rabi_hamiltonian(g: float) -> np.ndarray:
    """g (sigma_+ + sigma_-) = g sigma_x."""
    return g * SX


def pt_hamiltonian(p: PTParams) -> np.ndarray:
    sa = math.sin(p.alpha)
    return p.s * np.array([[1j * sa, 1], [1, -1j * sa]], dtype=complex)


def nonpt_hamiltonian(p: PTParams, epsilon: float) -> np.ndarray:
    """PT Hamiltonian plus epsilon sigma_z, which breaks the symmetry."""
    return pt_hamiltonian(p) + epsilon * SZ


def split_hermitian(h) -> SplitHamiltonian:
    h = as_matrix(h)
    hd = h.conj().T
    return SplitHamiltonian(h_plus=0.5 * (h + hd), h_minus=0.5 * (h - hd))


def local_hamiltonian(spec: EvolutionSpec) -> np.ndarray:
    """The 2x2 Hamiltonian acting on qubit-1 (zero for pure damping)."""
    if isinstance(spec, Rabi):
        return rabi_hamiltonian(spec.g)
    if isinstance(spec, PT):
        return pt_hamiltonian(spec.params)
    if isinstance(spec, NonPT):
        return nonpt_hamiltonian(spec.params, spec.epsilon)
    if isinstance(spec, AmplitudeDamping):
        return np.zeros((2, 2), dtype=complex)
    raise TypeError(f"unknown evolution spec {spec!r}")


# -- propagators ------------------------------------------------------------

def pt_propagator(p: PTParams, t_prime: float) -> np.ndarray:
    """exp(-i H_PT t) in closed form, as a function of t' = delta_e t."""
    a = p.alpha
    st = math.sin(t_prime)
    return np.array(
        [[math.cos(t_prime - a), -1j * st], [-1j * st, math.cos(t_prime + a)]], dtype=complex
    ) / math.cos(a)


def traceless_propagator(h, t: float) -> np.ndarray:
    """exp(-i h t) for any traceless 2x2 `h` (complex spectrum allowed).

    Uses h^2 = lam^2 I, so exp(-i h t) = cos(lam t) I - i sin(lam t)/lam h.
    Near the exceptional point (lam -> 0) the series of sin(x)/x is used.
    """
    h = as_matrix(h, (2,))
    lam = np.sqrt(complex(h[0, 0] * h[0, 0] + h[0, 1] * h[1, 0]))
    x = lam * t
    if abs(x) < 1e-4:
        sinc_t = t * (1 - x * x / 6 + x ** 4 / 120)
    else:
        sinc_t = np.sin(x) / lam
    return np.cos(x) * I2 - 1j * sinc_t * h


def nonpt_propagator(p: PTParams, epsilon: float, t_prime: float) -> np.ndarray:
    """exp(-i H_1 t) at t = t'/delta_e, delta_e taken from the epsilon = 0 Hamiltonian."""
    return traceless_propagator(nonpt_hamiltonian(p, epsilon), t_prime / p.delta_e)


def evolve_closed_form(rho0, p: PTParams, t_prime: float, *, raw: bool = False) -> np.ndarray:
    """(U x I) rho0 (U x I)^dagger with the closed-form PT propagator.

    Returns the trace-normalized state unless `raw` is set.
    """
    rho0 = check_density(rho0, unit_trace=True)
    out = local_conjugate(rho0, pt_propagator(p, t_prime))
    return out if raw else renormalize(out)


def evolve_exact(rho0, spec: EvolutionSpec, t: float) -> np.ndarray:
    """Raw state at absolute time `t` for Hamiltonian specs, without integration."""
    if isinstance(spec, PT):
        u = pt_propagator(spec.params, spec.params.delta_e * t)
    elif isinstance(spec, NonPT):
        u = traceless_propagator(nonpt_hamiltonian(spec.params, spec.epsilon), t)
    elif isinstance(spec, Rabi):
        u = traceless_propagator(rabi_hamiltonian(spec.g), t)
    else:
        raise TypeError("amplitude damping has no unitary-like propagator; use integrate")
    return local_conjugate(as_matrix(rho0, (4,)), u)


# -- master equations ------------------------------------------------------

def master_rhs(rho, spec: EvolutionSpec) -> np.ndarray:
    """Time derivative of the (raw) state.

    Hamiltonian specs: -i[H+, rho] - i{H-, rho} with H = H_local x I.
    Damping: gamma/2 (2 s- rho s+ - s+ s- rho - rho s+ s-) on qubit-1.
    """
    rho = as_matrix(rho, (4,))
    if isinstance(spec, AmplitudeDamping):
        sm = np.kron(SIGMA_MINUS, I2)
        sp = sm.conj().T
        spsm = sp @ sm
        return 0.5 * spec.gamma * (2 * sm @ rho @ sp - spsm @ rho - rho @ spsm)
    split = split_hermitian(np.kron(local_hamiltonian(spec), I2))
    hp, hm = split.h_plus, split.h_minus
    return -1j * (hp @ rho - rho @ hp) - 1j * (hm @ rho + rho @ hm)


def generator(spec: EvolutionSpec) -> tuple[np.ndarray, np.ndarray]:
    """(A, jumps) such that drho/dt = A rho + rho A^+ + sum_k L_k rho L_k^+."""
    if isinstance(spec, AmplitudeDamping):
        sm = math.sqrt(spec.gamma) * np.kron(SIGMA_MINUS, I2)
        a = -0.5 * (sm.conj().T @ sm)
        return a, sm[None]
    h = np.kron(local_hamiltonian(spec), I2)
    return -1j * h, np.zeros((0, 4, 4), dtype=complex)


def _plan_steps(interval: float, dt: float) -> tuple[int, float]:
    n = max(1, math.ceil(interval / dt - 1e-9))
    return n, interval / n


def integrate_samples(rho0, spec: EvolutionSpec, t_end: float, n_samples: int,
                      dt: float = DEFAULT_DT, *, backend: str | None = None) -> np.ndarray:
    """Raw states on the uniform grid ``linspace(0, t_end, n_samples)``.

    Fixed-step RK4; the step is shrunk so that every grid point is hit
    exactly. Times and `dt` are absolute.
    """
    if dt <= 0 or not math.isfinite(dt):
        raise ValidationError(f"dt must be positive, got {dt}")
    if t_end < 0 or not math.isfinite(t_end):
        raise ValidationError(f"t_end must be >= 0, got {t_end}")
    if n_samples < 2:
        raise ValidationError(f"n_samples must be >= 2, got {n_samples}")
    rho0 = check_density(rho0)
    if t_end == 0:
        return np.repeat(rho0[None], n_samples, axis=0)
    steps, h = _plan_steps(t_end / (n_samples - 1), dt)
    a, jumps = generator(spec)
    return kernels.rk4_trajectory(rho0, a, jumps, h, steps, n_samples, backend=backend)


def integrate(rho0, spec: EvolutionSpec, t_end: float, dt: float = DEFAULT_DT, *,
              backend: str | None = None) -> np.ndarray:
    """Raw (un-normalized) state after absolute time `t_end`."""
    return integrate_samples(rho0, spec, t_end, 2, dt, backend=backend)[-1]

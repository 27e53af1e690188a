import math

import numpy as np
import pytest

from ptentangle import dynamics as dyn
from ptentangle.dynamics import AmplitudeDamping, NonPT, PT, PTParams, Rabi
from ptentangle.errors import TraceCollapseError, ValidationError
from ptentangle.matrixcore import I2, SX, SZ, partial_trace
from ptentangle.metrics import concurrence

from conftest import random_density, random_pure

P45 = PTParams(1.0, math.pi / 4)
BELL = dyn.bell_phi_plus()
IS = {  # cut-off states as printed, 4 decimals
    0.5: [[0.3033, 0, 0, 0.3894], [0, 0, 0, 0], [0, 0, 0.1967, 0], [0.3894, 0, 0, 0.5]],
    1.0: [[0.1839, 0, 0, 0.3033], [0, 0, 0, 0], [0, 0, 0.3161, 0], [0.3033, 0, 0, 0.5]],
    1.6: [[0.1009, 0, 0, 0.2247], [0, 0, 0, 0], [0, 0, 0.3991, 0], [0.2247, 0, 0, 0.5]],
}


def test_ptparams_guard():
    assert P45.delta_e == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValidationError):
        PTParams(1.0, 1.6)
    with pytest.raises(ValidationError):
        PTParams(1.0, math.pi / 2 - 1e-7)
    with pytest.raises(ValidationError):
        PTParams(0.0, 0.1)
    with pytest.raises(ValidationError):
        AmplitudeDamping(0.0)
    PTParams(1.0, -(math.pi / 2 - 2e-6))


def test_hamiltonians():
    np.testing.assert_array_equal(dyn.rabi_hamiltonian(1), SX)
    np.testing.assert_array_equal(dyn.rabi_hamiltonian(0), 0)
    np.testing.assert_array_equal(dyn.rabi_hamiltonian(0.5), 0.5 * SX)
    np.testing.assert_allclose(dyn.pt_hamiltonian(PTParams(1, 0)), SX)
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(dyn.pt_hamiltonian(P45), [[1j * r, 1], [1, -1j * r]])
    ev = np.sort(np.linalg.eigvals(dyn.pt_hamiltonian(P45)).real)
    np.testing.assert_allclose(ev, [-r, r], atol=1e-12)
    np.testing.assert_allclose(dyn.nonpt_hamiltonian(P45, 0.0), dyn.pt_hamiltonian(P45))
    np.testing.assert_allclose(dyn.nonpt_hamiltonian(P45, 0.01),
                               [[0.01 + 1j * r, 1], [1, -0.01 - 1j * r]], atol=1e-15)


def test_nonpt_spectrum_is_complex():
    ev = np.linalg.eigvals(dyn.nonpt_hamiltonian(P45, 0.01))
    lam = np.sqrt(1 + (0.01 + 1j * math.sin(math.pi / 4)) ** 2)
    np.testing.assert_allclose(sorted(ev, key=lambda z: z.real), [-lam, lam], atol=1e-12)
    assert abs(lam.imag) > 1e-3


def test_split_hermitian():
    big = np.kron(dyn.pt_hamiltonian(P45), I2)
    sp = dyn.split_hermitian(big)
    np.testing.assert_allclose(sp.h_plus, np.kron(SX, I2), atol=1e-15)
    np.testing.assert_allclose(sp.h_minus, 1j / math.sqrt(2) * np.kron(SZ, I2), atol=1e-15)
    np.testing.assert_allclose(sp.h_plus + sp.h_minus, big, atol=1e-12)
    np.testing.assert_allclose(dyn.split_hermitian(SZ).h_minus, 0)
    np.testing.assert_allclose(dyn.split_hermitian(1j * SZ).h_plus, 0)


def test_propagator_examples():
    for a in (0.0, 0.3, math.pi / 4, 1.2):
        p = PTParams(1.0, a)
        np.testing.assert_allclose(dyn.pt_propagator(p, 0.0), I2, atol=1e-15)
        np.testing.assert_allclose(dyn.pt_propagator(p, math.pi), -I2, atol=1e-12)
    r2 = math.sqrt(2)
    np.testing.assert_allclose(dyn.pt_propagator(P45, math.pi / 2),
                               [[1, -1j * r2], [-1j * r2, -1]], atol=1e-12)


def test_propagator_matches_matrix_exponential():
    from scipy.linalg import expm
    for a, s, tp in [(0.3, 1.0, 0.7), (math.pi / 4, 2.0, 2.5), (1.3, 0.5, 4.0)]:
        p = PTParams(s, a)
        ref = expm(-1j * dyn.pt_hamiltonian(p) * tp / p.delta_e)
        np.testing.assert_allclose(dyn.pt_propagator(p, tp), ref, atol=1e-10)
        np.testing.assert_allclose(dyn.traceless_propagator(dyn.pt_hamiltonian(p), tp / p.delta_e),
                                   ref, atol=1e-10)
    h = dyn.nonpt_hamiltonian(P45, 0.01)
    np.testing.assert_allclose(dyn.traceless_propagator(h, 3.0), expm(-3j * h), atol=1e-10)
    # exactly at the exceptional point: h = [[i, 1], [1, -i]], h^2 = 0
    h_ep = np.array([[1j, 1], [1, -1j]])
    np.testing.assert_allclose(dyn.traceless_propagator(h_ep, 2.0), I2 - 2j * h_ep, atol=1e-12)


def test_propagator_det_and_periodicity():
    for a in np.linspace(-1.5, 1.5, 13):
        p = PTParams(1.0, a)
        for tp in np.linspace(0, 2 * math.pi, 17):
            u = dyn.pt_propagator(p, tp)
            assert abs(np.linalg.det(u) - 1) < 1e-10
            np.testing.assert_allclose(dyn.pt_propagator(p, tp + math.pi), -u, atol=1e-10)


def raw_trace_oracle(alpha, tp):
    return (1 - math.sin(alpha) ** 2 * math.cos(2 * tp)) / math.cos(alpha) ** 2


def test_closed_form_bell():
    np.testing.assert_allclose(dyn.evolve_closed_form(BELL, P45, math.pi), BELL, atol=1e-12)
    raw = dyn.evolve_closed_form(BELL, P45, math.pi / 2, raw=True)
    assert np.trace(raw).real == pytest.approx(3.0, abs=1e-12)
    for a in (0.2, 0.9):
        for tp in (0.4, 1.7, 2.9):
            raw = dyn.evolve_closed_form(BELL, PTParams(1, a), tp, raw=True)
            assert np.trace(raw).real == pytest.approx(raw_trace_oracle(a, tp), abs=1e-12)


@pytest.mark.parametrize("alpha", [0.1, math.pi / 4, 1.0])
def test_reduced_state_changes(alpha):
    p = PTParams(1.0, alpha)
    rb0 = partial_trace(dyn.evolve_closed_form(BELL, p, 0.0), 1)
    np.testing.assert_allclose(rb0, I2 / 2, atol=1e-15)
    rb = partial_trace(dyn.evolve_closed_form(BELL, p, math.pi / 2), 1)
    off = math.sin(alpha) / (1 + math.sin(alpha) ** 2)
    np.testing.assert_allclose(rb, [[0.5, 1j * off], [-1j * off, 0.5]], atol=1e-9)
    assert abs(np.max(np.abs(rb - rb0)) - off) < 1e-9


def test_closed_form_preserves_state_properties(rng):
    for _ in range(30):
        p = PTParams(rng.uniform(0.2, 3), rng.uniform(-1.4, 1.4))
        psi = random_pure(rng)
        rho0 = np.outer(psi, psi.conj())
        out = dyn.evolve_closed_form(rho0, p, rng.uniform(0, 7))
        dyn.check_density(out, unit_trace=True)
        assert np.trace(out @ out).real == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.eigvalsh(out)[0] > -1e-9


def test_hermitian_limit_equals_rabi(rng):
    s = 1.7
    p = PTParams(s, 0.0)
    rho0 = random_density(rng)
    for tp in (0.3, 1.1, 2.6):
        rabi = dyn.evolve_exact(rho0, Rabi(s), tp / p.delta_e)
        np.testing.assert_allclose(dyn.evolve_closed_form(rho0, p, tp), rabi, atol=1e-9)


def test_renormalize():
    np.testing.assert_array_equal(dyn.renormalize(BELL), BELL)
    np.testing.assert_allclose(dyn.renormalize(2 * BELL), BELL)
    raw = dyn.evolve_closed_form(BELL, P45, math.pi / 2, raw=True)
    assert np.trace(dyn.renormalize(raw)).real == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(TraceCollapseError):
        dyn.renormalize(np.zeros((4, 4)))


def test_master_rhs_examples():
    d = dyn.master_rhs(BELL, Rabi(1.3))
    assert abs(np.trace(d)) < 1e-12
    d = dyn.master_rhs(BELL, PT(P45))
    assert abs(np.trace(d)) < 1e-12
    # damping on qubit-1 takes |0> -> |1| (convention fixed by the cut-off states)
    p00 = np.zeros((4, 4), complex)
    p00[0, 0] = 1
    expected = np.zeros((4, 4), complex)
    expected[2, 2], expected[0, 0] = 2.0, -2.0
    np.testing.assert_allclose(dyn.master_rhs(p00, AmplitudeDamping(2.0)), expected)
    p11 = np.zeros((4, 4), complex)
    p11[3, 3] = 1
    np.testing.assert_allclose(dyn.master_rhs(p11, AmplitudeDamping(2.0)), 0)


def test_master_rhs_trace_identity(rng):
    for spec in (PT(P45), NonPT(P45, 0.3), PT(PTParams(2.0, -0.8))):
        hm = dyn.split_hermitian(np.kron(dyn.local_hamiltonian(spec), I2)).h_minus
        for _ in range(10):
            rho = random_density(rng)
            d = dyn.master_rhs(rho, spec)
            np.testing.assert_allclose(np.trace(d), (2 / 1j) * np.trace(rho @ hm), atol=1e-12)
    for spec in (Rabi(0.7), AmplitudeDamping(1.5)):
        assert abs(np.trace(dyn.master_rhs(random_density(rng), spec))) < 1e-12


def test_generator_matches_master_rhs(rng):
    for spec in (Rabi(0.7), PT(P45), NonPT(P45, 0.05), AmplitudeDamping(1.3)):
        a, jumps = dyn.generator(spec)
        rho = random_density(rng)
        via_gen = a @ rho + rho @ a.conj().T + sum(l @ rho @ l.conj().T for l in jumps)
        np.testing.assert_allclose(via_gen, dyn.master_rhs(rho, spec), atol=1e-13)


def test_damped_state():
    np.testing.assert_allclose(dyn.damped_state(0.0), BELL, atol=1e-15)
    for tc, printed in IS.items():
        np.testing.assert_allclose(dyn.damped_state(tc, 1.0).real, printed, atol=5e-5)
    assert concurrence(dyn.damped_state(1.0)) == pytest.approx(math.exp(-0.5), abs=1e-12)
    with pytest.raises(ValidationError):
        dyn.damped_state(-1.0)


def test_integrate_trivial_and_damping():
    np.testing.assert_array_equal(dyn.integrate(BELL, PT(P45), 0.0), BELL)
    out = dyn.integrate(BELL, AmplitudeDamping(1.0), 1.0)
    np.testing.assert_allclose(out.real, IS[1.0], atol=1e-4)
    np.testing.assert_allclose(out, dyn.damped_state(1.0), atol=1e-10)


def test_integrate_pt_matches_closed_form():
    t = (math.pi / 2) / P45.delta_e
    out = dyn.renormalize(dyn.integrate(BELL, PT(P45), t, 1e-4 / P45.delta_e))
    np.testing.assert_allclose(out, dyn.evolve_closed_form(BELL, P45, math.pi / 2), atol=1e-7)


def test_integrate_preserves_trace_for_trace_preserving_specs(rng):
    rho0 = random_density(rng)
    for spec in (Rabi(1.1), AmplitudeDamping(0.8)):
        traj = dyn.integrate_samples(rho0, spec, 10.0, 51)
        np.testing.assert_allclose(np.trace(traj, axis1=1, axis2=2).real, 1.0, atol=1e-8)


def test_integrate_pt_raw_trace_derivative():
    spec = PT(P45)
    hm = dyn.split_hermitian(np.kron(dyn.pt_hamiltonian(P45), I2)).h_minus
    rho0 = dyn.damped_state(1.0)
    h = 1e-3
    traj = dyn.integrate_samples(rho0, spec, 4.0, 4001, 1e-4)
    tr = np.trace(traj, axis1=1, axis2=2).real
    numeric = (tr[2:] - tr[:-2]) / (2 * h)
    analytic = np.array([((2 / 1j) * np.trace(r @ hm)).real for r in traj[1:-1]])
    assert np.max(np.abs(numeric - analytic)) < 1e-5


def test_rabi_keeps_local_spectra(rng):
    rho0 = dyn.damped_state(0.7)
    traj = dyn.integrate_samples(rho0, Rabi(0.9), 5.0, 11)
    spec_a0 = np.linalg.eigvalsh(partial_trace(rho0, 2))
    for r in traj:
        np.testing.assert_allclose(np.linalg.eigvalsh(partial_trace(r, 2)), spec_a0, atol=1e-9)
        np.testing.assert_allclose(partial_trace(r, 1), partial_trace(rho0, 1), atol=1e-9)
        assert concurrence(r) == pytest.approx(concurrence(rho0), abs=1e-9)


def test_integrate_errors():
    with pytest.raises(ValidationError):
        dyn.integrate(BELL, PT(P45), 1.0, dt=0.0)
    with pytest.raises(ValidationError):
        dyn.integrate(BELL, PT(P45), -1.0)
    with pytest.raises(ValidationError):
        dyn.integrate(np.diag([1, 0, 0, -0.5]), Rabi(1), 1.0)


def test_check_density_messages():
    with pytest.raises(ValidationError, match="Hermitian"):
        dyn.check_density(np.triu(np.ones((4, 4))))
    with pytest.raises(ValidationError, match="positive semidefinite"):
        dyn.check_density(np.diag([1.0, 0.5, 0, -0.1]))
    with pytest.raises(ValidationError, match="trace"):
        dyn.check_density(2 * BELL, unit_trace=True)

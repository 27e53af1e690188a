"""Pure-numpy RK4 kernel; same contract as the compiled ``_rk4`` module."""
import numpy as np


def rk4_trajectory(rho0, a, jumps, dt, steps_per_record, out, min_trace):
    with np.errstate(over="ignore", invalid="ignore"):
        return _run(rho0, a, jumps, dt, steps_per_record, out, min_trace)


def _run(rho0, a, jumps, dt, steps_per_record, out, min_trace):
    ad = a.conj().T
    jd = jumps.conj().transpose(0, 2, 1)
    has_jumps = jumps.shape[0] > 0

    def rhs(r):
        d = a @ r + r @ ad
        if has_jumps:
            d += (jumps @ r @ jd).sum(axis=0)
        return d

    h = 0.5 * dt
    rho = np.array(rho0, dtype=complex)
    out[0] = rho
    step = 0
    for rec in range(1, out.shape[0]):
        for _ in range(steps_per_record):
            k1 = rhs(rho)
            k2 = rhs(rho + h * k1)
            k3 = rhs(rho + h * k2)
            k4 = rhs(rho + dt * k3)
            rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            step += 1
            tr = rho[0, 0].real + rho[1, 1].real + rho[2, 2].real + rho[3, 3].real
            if not np.isfinite(tr):
                return 2, step
            if tr < min_trace:
                return 1, step
        if not np.all(np.isfinite(rho)):
            return 2, step
        out[rec] = rho
    return 0, step

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 for 4x4 density-matrix generators.

The generator is drho/dt = A rho + rho A^dagger + sum_k L_k rho L_k^dagger.
"""
from libc.math cimport isfinite

cdef int N = 4


cdef inline void _rhs(double complex* rho, double complex* a, double complex* jumps,
                      int n_jumps, double complex* tmp, double complex* out) noexcept nogil:
    cdef int i, j, k, q
    cdef double complex acc
    cdef double complex* L
    for i in range(N):
        for j in range(N):
            acc = 0
            for k in range(N):
                # A rho + rho A^dagger
                acc = acc + a[i * N + k] * rho[k * N + j] + rho[i * N + k] * a[j * N + k].conjugate()
            out[i * N + j] = acc
    for q in range(n_jumps):
        L = jumps + q * N * N
        for i in range(N):
            for j in range(N):
                acc = 0
                for k in range(N):
                    acc = acc + L[i * N + k] * rho[k * N + j]
                tmp[i * N + j] = acc
        for i in range(N):
            for j in range(N):
                acc = 0
                for k in range(N):
                    acc = acc + tmp[i * N + k] * L[j * N + k].conjugate()
                out[i * N + j] = out[i * N + j] + acc


def rk4_trajectory(double complex[:, ::1] rho0, double complex[:, ::1] a,
                   double complex[:, :, ::1] jumps, double dt,
                   long steps_per_record, double complex[:, :, ::1] out,
                   double min_trace):
    """Fill `out[r]` with the state after r * steps_per_record steps.

    Returns ``(status, step)``: status 0 on success, 1 if the real trace fell
    below `min_trace`, 2 if a non-finite value appeared; `step` is the global
    step index of the failure.
    """
    cdef int n_jumps = jumps.shape[0]
    cdef long n_records = out.shape[0]
    cdef double complex rho[16]
    cdef double complex stage[16]
    cdef double complex k1[16]
    cdef double complex k2[16]
    cdef double complex k3[16]
    cdef double complex k4[16]
    cdef double complex tmp[16]
    cdef double complex* ap = &a[0, 0]
    cdef double complex* jp = NULL
    cdef double h = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef double tr
    cdef long r, s, step = 0
    cdef int i, status = 0
    if n_jumps > 0:
        jp = &jumps[0, 0, 0]
    with nogil:
        for i in range(16):
            rho[i] = rho0[i // 4, i % 4]
            out[0, i // 4, i % 4] = rho[i]
        for r in range(1, n_records):
            for s in range(steps_per_record):
                _rhs(rho, ap, jp, n_jumps, tmp, k1)
                for i in range(16):
                    stage[i] = rho[i] + h * k1[i]
                _rhs(stage, ap, jp, n_jumps, tmp, k2)
                for i in range(16):
                    stage[i] = rho[i] + h * k2[i]
                _rhs(stage, ap, jp, n_jumps, tmp, k3)
                for i in range(16):
                    stage[i] = rho[i] + dt * k3[i]
                _rhs(stage, ap, jp, n_jumps, tmp, k4)
                for i in range(16):
                    rho[i] = rho[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                step += 1
                tr = rho[0].real + rho[5].real + rho[10].real + rho[15].real
                if not isfinite(tr):
                    status = 2
                    break
                if tr < min_trace:
                    status = 1
                    break
            if status != 0:
                break
            for i in range(16):
                if not (isfinite(rho[i].real) and isfinite(rho[i].imag)):
                    status = 2
                out[r, i // 4, i % 4] = rho[i]
            if status != 0:
                break
    return status, step

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 stepper; arithmetic matches _stepper_py order for order."""

import numpy as np

cimport cython

BACKEND_NAME = "cython"

ctypedef double complex cplx


cdef void _rhs(cplx[::1] y, cplx[::1] out, double inv_h2, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t j
    cdef cplx lap, mir
    cdef cplx I = 1j
    out[0] = 0
    out[n - 1] = 0
    for j in range(1, n - 1):
        lap = (y[j - 1] - 2.0 * y[j] + y[j + 1]) * inv_h2
        mir = y[n - 1 - j].conjugate()
        out[j] = I * lap + 2j * y[j] * y[j] * mir


def rk4_run(q, double h, double dt, long n_steps, long check_every=25,
            double blow_threshold=0.0):
    """Advance q by n_steps of classical RK4 with pinned boundary values."""
    qa = np.array(q, dtype=complex)
    cdef cplx[::1] qv = qa
    cdef Py_ssize_t n = qv.shape[0]
    k1a = np.empty(n, dtype=complex)
    k2a = np.empty(n, dtype=complex)
    k3a = np.empty(n, dtype=complex)
    k4a = np.empty(n, dtype=complex)
    tmpa = np.empty(n, dtype=complex)
    cdef cplx[::1] k1 = k1a
    cdef cplx[::1] k2 = k2a
    cdef cplx[::1] k3 = k3a
    cdef cplx[::1] k4 = k4a
    cdef cplx[::1] tmp = tmpa
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef long step
    cdef Py_ssize_t j
    cdef double sup, mag
    cdef bint blew = False
    cdef bint bad = False
    with nogil:
        for step in range(n_steps):
            _rhs(qv, k1, inv_h2, n)
            for j in range(n):
                tmp[j] = qv[j] + half * k1[j]
            _rhs(tmp, k2, inv_h2, n)
            for j in range(n):
                tmp[j] = qv[j] + half * k2[j]
            _rhs(tmp, k3, inv_h2, n)
            for j in range(n):
                tmp[j] = qv[j] + dt * k3[j]
            _rhs(tmp, k4, inv_h2, n)
            for j in range(n):
                qv[j] = qv[j] + sixth * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j])
            if blow_threshold > 0.0 and (step + 1) % check_every == 0:
                sup = 0.0
                bad = False
                for j in range(n):
                    mag = qv[j].real * qv[j].real + qv[j].imag * qv[j].imag
                    if mag != mag:  # NaN
                        bad = True
                        break
                    if mag > sup:
                        sup = mag
                if bad or sup > blow_threshold * blow_threshold:
                    blew = True
                    break
    if blew:
        return qa, step + 1, True
    return qa, n_steps, False

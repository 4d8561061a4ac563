"""Pure-numpy RK4 stepper for the nonlocal Schrodinger evolution.

Reference implementation of the kernel interface; the compiled extension
(_stepper) performs the same arithmetic in the same order, so the two
backends agree to rounding.
"""

import numpy as np

BACKEND_NAME = "python"


def _rhs(y, inv_h2):
    out = np.zeros_like(y)
    lap = (y[:-2] - 2.0 * y[1:-1] + y[2:]) * inv_h2
    m = np.conj(y[::-1])
    out[1:-1] = 1j * lap + 2j * y[1:-1] * y[1:-1] * m[1:-1]
    return out


def rk4_run(q, h, dt, n_steps, check_every=25, blow_threshold=0.0):
    """Advance q by n_steps of classical RK4 with pinned boundary values.

    Returns (q, steps_done, blew_up).  If blow_threshold > 0 the sup norm
    is checked every check_every steps and stepping stops early once it is
    exceeded or a non-finite value appears.
    """
    q = np.array(q, dtype=complex)
    inv_h2 = 1.0 / (h * h)
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(n_steps):
        k1 = _rhs(q, inv_h2)
        k2 = _rhs(q + half * k1, inv_h2)
        k3 = _rhs(q + half * k2, inv_h2)
        k4 = _rhs(q + dt * k3, inv_h2)
        q += sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if blow_threshold > 0.0 and (step + 1) % check_every == 0:
            sup = float(np.max(np.abs(q)))
            if not np.isfinite(sup) or sup > blow_threshold:
                return q, step + 1, True
    return q, n_steps, False

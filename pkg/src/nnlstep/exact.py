"""Closed-form reference objects: the one-soliton family, the pure-step
scattering matrix, and a discrete residual for checking candidate fields
against the evolution equation

    i q_t + q_xx + 2 q(x,t)^2 conj(q(-x,t)) = 0.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, SingularityError


@dataclass(frozen=True)
class SolitonParams:
    amplitude: float
    phi1: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise InputError("amplitude must be positive")


def one_soliton(params, x, t):
    """q(x,t) = A / (1 - exp(-A x - i A^2 t + i phi1)).

    Step-like: -> 0 as x -> -inf and -> A as x -> +inf.  Singular on the
    curve x = 0, t = (phi1 + 2 pi n)/A^2; evaluation within ~1e-12 of a
    pole raises SingularityError.
    """
    A = params.amplitude
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    den = 1.0 - np.exp(-A * x - 1j * A * A * t + 1j * params.phi1)
    if np.any(np.abs(den) < 1e-12):
        raise SingularityError("one_soliton evaluated at a solution pole")
    return A / den


def singularity_times(params, n_min=0, n_max=3):
    """Times t_n = (phi1 + 2 pi n)/A^2 at which q(0, t) blows up."""
    A2 = params.amplitude ** 2
    return [(params.phi1 + 2.0 * math.pi * n) / A2 for n in range(n_min, n_max + 1)]


def pure_step_S(amplitude, k):
    """Exact scattering matrix of the step of height A:

    [[1 + A^2/4k^2, -A/2ik], [A/2ik, 1]].
    """
    if not amplitude > 0:
        raise InputError("amplitude must be positive")
    k = complex(k)
    if k == 0:
        raise InputError("scattering matrix undefined at k = 0")
    c = amplitude / (2j * k)
    return np.array([[1.0 + 0.25 * amplitude ** 2 / k ** 2, -c], [c, 1.0]])


def pde_residual(q_prev, q_mid, q_next, h, dt):
    """Max-norm of the centered discretization of the evolution equation.

    The three fields are snapshots at t - dt, t, t + dt on a common uniform
    grid (odd point count, symmetric about x = 0).  Returns
    max_j | i (q_next - q_prev)/(2 dt) + D2 q_mid + 2 q_mid^2 conj(q_mid(-x)) |
    over interior nodes; second-order small for true solutions.
    """
    q_prev = np.asarray(q_prev, dtype=complex)
    q_mid = np.asarray(q_mid, dtype=complex)
    q_next = np.asarray(q_next, dtype=complex)
    if not (q_prev.shape == q_mid.shape == q_next.shape) or q_mid.ndim != 1:
        raise InputError("pde_residual expects three equal-length 1-d fields")
    if q_mid.size % 2 == 0:
        raise InputError("grid must have an odd number of points (x = 0 a node)")
    if not (h > 0 and dt > 0):
        raise InputError("h and dt must be positive")
    dq_dt = (q_next[1:-1] - q_prev[1:-1]) / (2.0 * dt)
    lap = (q_mid[:-2] - 2.0 * q_mid[1:-1] + q_mid[2:]) / (h * h)
    mirror = np.conj(q_mid[::-1])
    nonlin = 2.0 * q_mid[1:-1] ** 2 * mirror[1:-1]
    return float(np.max(np.abs(1j * dq_dt + lap + nonlin)))

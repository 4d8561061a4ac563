"""Closed-form reference solutions and the discrete residual check."""

import math

import numpy as np
import pytest

from nnlstep import exact
from nnlstep.errors import InputError, SingularityError


def test_one_soliton_spot_values():
    p = exact.SolitonParams(1.0, math.pi)
    assert exact.one_soliton(p, 0.0, 0.0) == pytest.approx(0.5)
    # at t = pi/2 the denominator is 1 - e^{i pi/2} = 1 - i
    v = complex(exact.one_soliton(p, 0.0, math.pi / 2.0))
    assert abs(v - (0.5 + 0.5j)) < 1e-14


def test_one_soliton_step_limits():
    p = exact.SolitonParams(1.3, 2.0)
    assert abs(exact.one_soliton(p, 40.0, 0.7) - 1.3) < 1e-12
    assert abs(exact.one_soliton(p, -40.0, 0.7)) < 1e-12


def test_one_soliton_pole_raises():
    p = exact.SolitonParams(1.0, math.pi)
    with pytest.raises(SingularityError):
        exact.one_soliton(p, 0.0, math.pi)


def test_singularity_times():
    p = exact.SolitonParams(1.0, math.pi)
    ref = [math.pi, 3 * math.pi, 5 * math.pi, 7 * math.pi]
    assert np.allclose(exact.singularity_times(p), ref, atol=1e-14)
    # amplitude rescales the period by 1/A^2
    p2 = exact.SolitonParams(2.0, 0.4)
    assert exact.singularity_times(p2, 0, 0)[0] == pytest.approx(0.1)


def test_one_soliton_solves_equation_to_second_order():
    # residual of the exact solution is pure discretization error, O(h^2)
    p = exact.SolitonParams(1.0, math.pi)
    t = 0.8
    errs = []
    for h in (0.02, 0.01):
        dt = 0.05 * h * h
        x = np.arange(-10.0, 10.0 + h / 2, h)
        assert x.size % 2 == 1
        r = exact.pde_residual(exact.one_soliton(p, x, t - dt),
                               exact.one_soliton(p, x, t),
                               exact.one_soliton(p, x, t + dt), h, dt)
        errs.append(r)
    ratio = errs[0] / errs[1]
    assert 3.0 < ratio < 5.0


def test_residual_of_constant_plateau():
    # i 0 + 0 + 2 A^2 * A: the residual of q = A is exactly 2 A^3
    for A in (1.0, 1.7):
        q = np.full(41, A, dtype=complex)
        r = exact.pde_residual(q, q, q, 0.1, 0.01)
        assert r == 2.0 * A ** 3


def test_residual_input_validation():
    q = np.zeros(11, dtype=complex)
    with pytest.raises(InputError):
        exact.pde_residual(q, q[:-1], q, 0.1, 0.01)
    with pytest.raises(InputError):
        exact.pde_residual(q[:-1], q[:-1], q[:-1], 0.1, 0.01)  # even count
    with pytest.raises(InputError):
        exact.pde_residual(q, q, q, -0.1, 0.01)


def test_pure_step_S_special_structure():
    A, k = 1.0, 0.8
    S = exact.pure_step_S(A, k)
    assert abs(S[0, 0] - (1.0 + 0.25 / k ** 2)) < 1e-15
    assert abs(S[1, 1] - 1.0) < 1e-15
    assert abs(S[1, 0] - A / (2j * k)) < 1e-15
    # unimodular: a1 a2 + b * conj(b at -k) = 1
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    assert abs(det - 1.0) < 1e-15


def test_pure_step_S_rejects_origin():
    with pytest.raises(InputError):
        exact.pure_step_S(1.0, 0.0)
    with pytest.raises(InputError):
        exact.pure_step_S(0.0, 1.0)

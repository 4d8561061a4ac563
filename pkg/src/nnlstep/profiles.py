"""Step-like initial profiles q0(x): zero far left, a positive constant far right.

A profile carries uniform samples on [-N, N] with q0(-N) = 0 and
q0(N) = amplitude held exactly, plus (for the built-ins) an exact
evaluator so integrators can sample between grid points without
interpolation error.
"""

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, SingularityError


@dataclass
class InitialProfile:
    amplitude: float
    support_radius: float
    grid_step: float
    samples: np.ndarray
    func: object = None  # optional exact evaluator, vectorized over x
    name: str = "custom"
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.amplitude > 0:
            raise InputError("amplitude must be positive")
        if not self.support_radius > 0:
            raise InputError("support_radius must be positive")
        if not self.grid_step > 0:
            raise InputError("grid_step must be positive")
        self.samples = np.asarray(self.samples, dtype=complex)
        n_expected = int(round(2.0 * self.support_radius / self.grid_step)) + 1
        if self.samples.ndim != 1 or self.samples.size != n_expected:
            raise InputError(
                f"samples: expected {n_expected} uniform samples on "
                f"[-N, N], got {self.samples.size}"
            )
        if self.samples[0] != 0:
            raise InputError("samples: q0(-N) must be exactly 0")
        if self.samples[-1] != self.amplitude:
            raise InputError("samples: q0(N) must equal the amplitude exactly")

    @property
    def x_grid(self):
        return -self.support_radius + self.grid_step * np.arange(self.samples.size)

    def evaluate(self, x):
        """q0 at arbitrary points; constant extension outside [-N, N]."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        if self.func is not None:
            out = np.asarray(self.func(x), dtype=complex)
        else:
            if self._spline is None:
                from scipy.interpolate import CubicSpline
                self._spline = CubicSpline(self.x_grid, self.samples)
            out = np.asarray(self._spline(x), dtype=complex)
        out = np.where(x <= -self.support_radius, 0.0 + 0.0j, out)
        out = np.where(x >= self.support_radius, complex(self.amplitude), out)
        return out[0] if scalar else out

    def refined(self):
        """Same profile sampled at half the grid step."""
        h = self.grid_step / 2.0
        n = int(round(2.0 * self.support_radius / h)) + 1
        x = -self.support_radius + h * np.arange(n)
        q = self.evaluate(x)
        q[0] = 0.0
        q[-1] = self.amplitude
        return InitialProfile(self.amplitude, self.support_radius, h, q,
                              func=self.func, name=self.name)


def _sample(func, amplitude, support_radius, grid_step):
    n = int(round(2.0 * support_radius / grid_step)) + 1
    x = -support_radius + grid_step * np.arange(n)
    q = np.asarray(func(x), dtype=complex)
    q[0] = 0.0
    q[-1] = amplitude
    return q


def pure_step(amplitude=1.0):
    """The exact step: 0 for x < 0, amplitude for x >= 0."""
    A = float(amplitude)
    if not A > 0:
        raise InputError("amplitude must be positive")

    def f(x):
        return np.where(np.asarray(x, dtype=float) >= 0.0, A + 0.0j, 0.0 + 0.0j)

    return InitialProfile(A, 1.0, 0.01, _sample(f, A, 1.0, 0.01),
                          func=f, name="pure_step")


def smoothed_step(amplitude=1.0, width=None):
    """Tanh ramp A (1 + tanh(x/w)) / 2 truncated where it is flat to rounding."""
    A = float(amplitude)
    if not A > 0:
        raise InputError("amplitude must be positive")
    w = 0.5 / A if width is None else float(width)
    if not w > 0:
        raise InputError("width must be positive")
    N = 20.0 * w
    h = w / 40.0

    def f(x):
        return 0.5 * A * (1.0 + np.tanh(np.asarray(x, dtype=float) / w)) + 0.0j

    return InitialProfile(A, N, h, _sample(f, A, N, h), func=f, name="smoothed_step")


def soliton(amplitude=1.0, phi1=math.pi):
    """Exact one-soliton profile at t = 0: A / (1 - exp(-A x + i phi1)).

    phi1 near 0 (mod 2 pi) puts a pole at x = 0, which cannot be sampled.
    """
    A = float(amplitude)
    if not A > 0:
        raise InputError("amplitude must be positive")
    phase = cmath.exp(1j * float(phi1))
    if abs(1.0 - phase) < 1e-8:
        raise SingularityError(
            "soliton profile is singular at x=0 for phi1 = 0 (mod 2 pi)"
        )
    N = 36.0 / A
    h = 0.02 / A

    def f(x):
        return A / (1.0 - np.exp(-A * np.asarray(x, dtype=float)) * phase)

    return InitialProfile(A, N, h, _sample(f, A, N, h), func=f, name="soliton")


_BUILTINS = {
    "pure_step": pure_step,
    "smoothed_step": smoothed_step,
    "soliton": soliton,
}


def from_file(path):
    """Load a profile from JSON: amplitude, support_radius, grid_step, samples.

    Samples are [re, im] pairs on the uniform grid over [-N, N].
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read profile file {path}: {exc}") from exc
    for key in ("amplitude", "support_radius", "grid_step", "samples"):
        if key not in raw:
            raise InputError(f"profile file {path}: missing field '{key}'")
    try:
        pairs = np.asarray(raw["samples"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"profile file {path}: samples must be [re, im] pairs") from exc
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise InputError(f"profile file {path}: samples must be [re, im] pairs")
    q = pairs[:, 0] + 1j * pairs[:, 1]
    name = raw.get("name", "file")
    try:
        return InitialProfile(raw["amplitude"], raw["support_radius"],
                              raw["grid_step"], q, name=name)
    except InputError as exc:
        raise InputError(f"profile file {path}: {exc}") from exc


def to_file(profile, path):
    data = {
        "name": profile.name,
        "amplitude": profile.amplitude,
        "support_radius": profile.support_radius,
        "grid_step": profile.grid_step,
        "samples": [[float(v.real), float(v.imag)] for v in profile.samples],
    }
    with open(path, "w") as fh:
        json.dump(data, fh)


def resolve(name_or_path, amplitude=1.0, **kwargs):
    """Builtin profile by name, or a JSON profile by path."""
    if name_or_path in _BUILTINS:
        return _BUILTINS[name_or_path](amplitude, **kwargs)
    return from_file(name_or_path)

"""Direct evolution of i q_t + q_xx + 2 q^2(x,t) conj(q(-x,t)) = 0.

Method of lines on a symmetric grid [-L, L] with an odd number of points
(so x = 0 is a node and the mirrored point of every node is a node),
centered second differences, classical RK4 in time, and Dirichlet pinning
q(-L) = 0, q(L) = A.  The pinning is what injects the step-like boundary
behaviour; it is valid while the "light cone" spreading from the data has
not reached the edges, hence the trusted window |x| <= L - margin sqrt(t).

Time stepping runs in a compiled kernel when the extension built from
_stepper.pyx is importable, else in the numpy fallback.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _stepper_py
from .errors import InputError

try:  # compiled kernel is optional
    from . import _stepper as _stepper_c
except ImportError:  # pragma: no cover - depends on the build
    _stepper_c = None

DEFAULT_BACKEND = "cython" if _stepper_c is not None else "python"


def available_backends():
    return ("python",) if _stepper_c is None else ("python", "cython")


def _kernel(backend):
    if backend is None:
        backend = DEFAULT_BACKEND
    if backend == "python":
        return _stepper_py
    if backend == "cython":
        if _stepper_c is None:
            raise InputError("compiled stepper backend is not available")
        return _stepper_c
    raise InputError(f"unknown stepper backend '{backend}'")


@dataclass
class FieldState:
    """A field snapshot on the uniform symmetric grid."""

    L: float
    q: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=complex)
        if self.q.ndim != 1 or self.q.size < 3:
            raise InputError("field must be a 1-d array with >= 3 points")
        if self.q.size % 2 == 0:
            raise InputError("grid must have an odd number of points")
        if not self.L > 0:
            raise InputError("half-width L must be positive")

    @property
    def n_points(self):
        return self.q.size

    @property
    def h(self):
        return 2.0 * self.L / (self.q.size - 1)

    @property
    def x_grid(self):
        return np.linspace(-self.L, self.L, self.q.size)


@dataclass
class EvolveConfig:
    dt: float
    snapshot_times: tuple = ()
    steps: int = None
    c_cfl: float = 0.2
    validity_margin: float = 4.0
    blow_factor: float = 1e6
    check_every: int = 25
    backend: str = None

    def __post_init__(self):
        if not self.dt > 0:
            raise InputError("dt must be positive")
        if not self.c_cfl > 0:
            raise InputError("c_cfl must be positive")
        if self.validity_margin < 0:
            raise InputError("validity_margin must be >= 0")


@dataclass
class EvolveResult:
    snapshots: list
    backend: str
    validity_margin: float
    blowup: dict = None

    def trusted_halfwidth(self, t):
        L = self.snapshots[0].L if self.snapshots else 0.0
        return L - self.validity_margin * np.sqrt(max(t, 0.0))


def mirror(q):
    """The field conj(q(-x)) on the symmetric grid."""
    return np.conj(np.asarray(q, dtype=complex)[::-1])


def rhs(state):
    """Right-hand side i q_xx + 2 i q^2 conj(q(-x)) with pinned endpoints."""
    return _stepper_py._rhs(state.q, 1.0 / state.h ** 2)


def initial_state(profile, L, n_points, smooth_width=None):
    """Sample a profile onto the PDE grid.

    The discontinuous pure step cannot be fed to a finite-difference
    scheme directly; it is replaced by a tanh ramp of width smooth_width
    (default 0.5/A).  Smooth profiles are sampled as they are.
    """
    A = profile.amplitude
    if L < profile.support_radius:
        raise InputError("PDE domain must contain the profile support")
    if n_points % 2 == 0 or n_points < 3:
        raise InputError("n_points must be odd and >= 3")
    x = np.linspace(-L, L, n_points)
    if smooth_width is None and profile.name == "pure_step":
        smooth_width = 0.5 / A
    if smooth_width is not None:
        if not smooth_width > 0:
            raise InputError("smooth_width must be positive")
        q = 0.5 * A * (1.0 + np.tanh(x / smooth_width)) + 0.0j
    else:
        q = profile.evaluate(x)
    q[0] = 0.0
    q[-1] = A
    return FieldState(L=L, q=q, t=0.0)


def evolve(state, config):
    """March the field through the requested snapshot times.

    Returns an EvolveResult whose snapshots correspond to the requested
    times rounded to whole steps (plus the final time when `steps` is
    given).  Blow-up (sup-norm beyond blow_factor * A or non-finite
    values) stops the run early and is reported on the result, not raised.
    """
    dt = config.dt
    h = state.h
    if dt > config.c_cfl * h * h:
        raise InputError(
            f"dt = {dt:g} violates the parabolic step bound "
            f"c_cfl h^2 = {config.c_cfl * h * h:g}"
        )
    targets = sorted(set(float(t) for t in config.snapshot_times))
    if any(t < state.t for t in targets):
        raise InputError("snapshot times must not precede the initial time")
    idx = sorted(set(int(round((t - state.t) / dt)) for t in targets))
    if config.steps is not None:
        if config.steps < 0:
            raise InputError("steps must be >= 0")
        idx = sorted(set(i for i in idx if i <= config.steps) | {config.steps})
    if not idx:
        raise InputError("nothing to do: no snapshot times and no step count")

    amp = abs(state.q[-1])
    if amp == 0.0:
        amp = float(np.max(np.abs(state.q)))
    threshold = config.blow_factor * max(amp, 1e-12)
    kern = _kernel(config.backend)

    snapshots = []
    blowup = None
    q = np.array(state.q, dtype=complex)
    done = 0
    if idx and idx[0] == 0:
        snapshots.append(FieldState(L=state.L, q=q.copy(), t=state.t))
        idx = idx[1:]
    for target in idx:
        n_run = target - done
        q, ran, blew = kern.rk4_run(q, h, dt, n_run,
                                    check_every=config.check_every,
                                    blow_threshold=threshold)
        done += ran
        if blew:
            blowup = {
                "time": state.t + done * dt,
                "step": done,
                "sup": float(np.max(np.abs(q[np.isfinite(q)])))
                if np.any(np.isfinite(q)) else float("inf"),
            }
            break
        snapshots.append(FieldState(L=state.L, q=np.array(q), t=state.t + done * dt))
    return EvolveResult(snapshots=snapshots, backend=kern.BACKEND_NAME,
                        validity_margin=config.validity_margin, blowup=blowup)


def ray_sample(result, xi, times=None):
    """Sample snapshots along the ray x = 4 xi t by linear interpolation.

    Returns (samples, truncated): samples is a list of
    (t, x, value, trusted) tuples, one per usable snapshot; truncated is
    True when at least one requested point left the trusted window
    |x| <= L - margin sqrt(t).
    """
    snaps = result.snapshots
    if not snaps:
        return [], True
    if times is not None:
        wanted = []
        for t in times:
            best = min(snaps, key=lambda s: abs(s.t - t))
            wanted.append(best)
    else:
        wanted = list(snaps)
    samples = []
    truncated = False
    for snap in wanted:
        x = 4.0 * xi * snap.t
        if abs(x) > snap.L:
            truncated = True
            continue
        window = snap.L - result.validity_margin * np.sqrt(max(snap.t, 0.0))
        trusted = abs(x) <= window
        if not trusted:
            truncated = True
        grid = snap.x_grid
        val = complex(np.interp(x, grid, snap.q.real),
                      np.interp(x, grid, snap.q.imag))
        samples.append((snap.t, x, val, trusted))
    return samples, truncated

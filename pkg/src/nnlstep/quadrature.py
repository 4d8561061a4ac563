"""Panel Gauss-Legendre quadrature for Cauchy-type integrals on rays.

Everything here integrates a smooth, 1/z^2-decaying density against a
Cauchy kernel over the real line or a half-line (-inf, endpoint].  The
difficult points are

  * a principal-value pole on the contour (pv_cauchy),
  * an evaluation point close to (but off) the contour (cauchy_halfline),
  * a logarithmic endpoint singularity (stieltjes_log_integral).

Infinite tails are mapped to a finite interval with zeta -> -1/u, so the
only tail error is a quadrature error, which is estimated by refinement
and checked against a tolerance.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, QuadratureError

_TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout used by all singular integrals.

    truncation_radius: where the explicit panels stop and the mapped
        tail takes over.
    panel_count: geometric panels per graded run.
    grading_ratio: successive panel width ratio (toward a singular point).
    nodes_per_panel: Gauss-Legendre nodes per panel.
    tail_tol: refinement tolerance for the mapped tail pieces.
    """

    truncation_radius: float = 200.0
    panel_count: int = 12
    grading_ratio: float = 0.5
    nodes_per_panel: int = 16
    tail_tol: float = 1e-10

    def __post_init__(self):
        if not self.truncation_radius > 0:
            raise InputError("truncation_radius must be positive")
        if self.panel_count < 1:
            raise InputError("panel_count must be >= 1")
        if not 0.0 < self.grading_ratio < 1.0:
            raise InputError("grading_ratio must lie in (0, 1)")
        if self.nodes_per_panel < 2:
            raise InputError("nodes_per_panel must be >= 2")
        if not self.tail_tol >= 0.0:
            raise InputError("tail_tol must be >= 0")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=64)
def _gauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_nodes(edges, n):
    """Gauss nodes/weights for the panels delimited by `edges` (ascending)."""
    x, w = _gauss(n)
    a = edges[:-1]
    b = edges[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    wts = half[:, None] * w[None, :]
    return nodes.ravel(), wts.ravel()


def _graded_edges(a, b, ratio, count, toward):
    """Panel edges on [a, b], widths shrinking geometrically toward one end."""
    if b <= a:
        raise ValueError("empty panel interval")
    f = ratio ** np.arange(count)  # 1, r, r^2, ...
    if toward == "b":
        edges = np.concatenate([b - (b - a) * f, [b]])
    elif toward == "a":
        edges = np.concatenate([[a], a + (b - a) * f[::-1]])
    else:
        raise ValueError("toward must be 'a' or 'b'")
    return edges


def _integrate(f, edges, n):
    nodes, wts = _panel_nodes(np.asarray(edges, dtype=float), n)
    vals = np.asarray(f(nodes))
    return np.sum(vals * wts)


def _depth_for(width, scale, spec, extra=2, cap=60):
    """Number of geometric panels needed to grade `width` down to `scale`."""
    if width <= scale:
        return spec.panel_count
    need = int(np.ceil(np.log(width / scale) / np.log(1.0 / spec.grading_ratio)))
    return min(cap, max(spec.panel_count, need + extra))


def _tail_cauchy(g, radius, k, spec, side):
    """Mapped tail  int g(z)/(z-k) dz  over (-inf,-R] (side=-1) or [R,inf)."""
    if side < 0:
        def fu(u):
            return -g(-1.0 / u) / (u * (1.0 + k * u))
    else:
        def fu(u):
            return g(1.0 / u) / (u * (1.0 - k * u))

    top = 1.0 / radius

    def run(count):
        edges = _graded_edges(0.0, top, spec.grading_ratio, count, toward="a")
        return _integrate(fu, edges, spec.nodes_per_panel)

    coarse = run(spec.panel_count)
    fine = run(spec.panel_count + 3)
    if abs(fine - coarse) > spec.tail_tol:
        raise QuadratureError(
            "tail integral did not converge: refinement estimate "
            f"{abs(fine - coarse):.3e} exceeds tail_tol {spec.tail_tol:.3e}"
        )
    return fine


def _cauchy_finite(g, a, b, k, spec):
    """int_a^b g(z)/(z-k) dz for k off [a, b], possibly very close to it.

    Uses singularity subtraction about the contour point nearest to k and
    panels graded down to that distance, so the accuracy is uniform in the
    offset of k from the contour.
    """
    if a >= b:
        return 0.0 + 0.0j
    k = complex(k)
    k0 = min(max(k.real, a), b)
    dist = abs(k - k0)
    if dist == 0.0:
        raise QuadratureError("evaluation point lies on the integration contour")
    width = b - a
    if dist >= width:
        # comfortably far away: plain panels
        edges = np.linspace(a, b, spec.panel_count + 1)
        return _integrate(lambda z: g(z) / (z - k), edges, spec.nodes_per_panel)
    if dist < 1e-9 * width:
        raise QuadratureError(
            f"evaluation point within {dist:.3e} of the contour; too close to resolve"
        )
    try:
        with np.errstate(all="ignore"):
            gk = complex(np.asarray(g(np.array([k0]))).ravel()[0])
    except (InputError, ZeroDivisionError, FloatingPointError):
        gk = None
    if gk is not None and not np.isfinite([gk.real, gk.imag]).all():
        gk = None
    if gk is None:
        # g cannot be sampled exactly at the nearest contour point (it has
        # an integrable singularity there); since k keeps a distance `dist`
        # from the contour, graded panels alone still resolve the kernel.
        gk = 0.0 + 0.0j
        base = 0.0 + 0.0j
    else:
        # exact Cauchy integral of the subtracted constant; the segment never
        # crosses the principal branch cut of log(z - k) for k off [a, b]
        base = gk * (np.log(b - k) - np.log(a - k))

    def freg(z):
        return (np.asarray(g(z)) - gk) / (z - k)

    scale = max(dist, 1e-9 * width)
    total = base
    if k0 > a:
        depth = _depth_for(k0 - a, scale, spec)
        total += _integrate(freg, _graded_edges(a, k0, spec.grading_ratio, depth, "b"),
                            spec.nodes_per_panel)
    if k0 < b:
        depth = _depth_for(b - k0, scale, spec)
        total += _integrate(freg, _graded_edges(k0, b, spec.grading_ratio, depth, "a"),
                            spec.nodes_per_panel)
    return total


def pv_cauchy(f, pole, spec=DEFAULT_SPEC):
    """Principal value of int_R f(z)/(z - pole) dz for a real pole.

    f must be continuous at the pole and decay like 1/z^2.  The excised
    window around the pole is folded into the odd part
    (f(p+s) - f(p-s))/s, which is smooth.
    """
    pole = float(pole)
    radius = max(spec.truncation_radius, abs(pole) + 2.0)
    w = min(1.0, 0.5 * (radius - abs(pole)))

    def odd_part(s):
        return (np.asarray(f(pole + s)) - np.asarray(f(pole - s))) / s

    depth = _depth_for(w, 1e-7 * w, spec)
    inner = _integrate(odd_part, _graded_edges(0.0, w, spec.grading_ratio, depth, "a"),
                       spec.nodes_per_panel)
    left = _cauchy_finite(f, -radius, pole - w, pole, spec)
    right = _cauchy_finite(f, pole + w, radius, pole, spec)
    tails = (_tail_cauchy(f, radius, pole, spec, -1)
             + _tail_cauchy(f, radius, pole, spec, +1))
    return inner + left + right + tails


def cauchy_halfline(g, endpoint, eval_k, spec=DEFAULT_SPEC):
    """(1/2pi i) int_{-inf}^{endpoint} g(z)/(z - eval_k) dz.

    eval_k must not lie on the contour; arbitrarily small offsets from it
    are allowed (this is how the jump across the contour is probed).
    """
    endpoint = float(endpoint)
    k = complex(eval_k)
    if k.imag == 0.0 and k.real <= endpoint:
        raise QuadratureError("eval_k lies on the integration cut")
    radius = max(spec.truncation_radius, 2.0 * abs(endpoint) + 2.0)
    core = _cauchy_finite(g, -radius, endpoint, k, spec)
    tail = _tail_cauchy(g, radius, k, spec, -1)
    return (core + tail) / _TWO_PI_I


def cauchy_line(f, eval_k, spec=DEFAULT_SPEC):
    """(1/2pi i) int_R f(z)/(z - eval_k) dz for eval_k off the real axis.

    For real eval_k the boundary value from the upper half plane is
    returned: (1/2pi i) PV + f(eval_k)/2.
    """
    k = complex(eval_k)
    if k.imag == 0.0:
        fk = complex(np.asarray(f(np.array([k.real]))).ravel()[0])
        return pv_cauchy(f, k.real, spec) / _TWO_PI_I + 0.5 * fk
    radius = max(spec.truncation_radius, 2.0 * abs(k.real) + 2.0)
    core = _cauchy_finite(f, -radius, radius, k, spec)
    tails = (_tail_cauchy(f, radius, k, spec, -1)
             + _tail_cauchy(f, radius, k, spec, +1))
    return (core + tails) / _TWO_PI_I


def stieltjes_log_integral(g, endpoint, eval_k, spec=DEFAULT_SPEC):
    """-(1/2pi i) int_{-inf}^{endpoint} log(eval_k - z) dg(z).

    g is a smooth density vanishing at -inf.  For eval_k == endpoint the
    logarithm is singular exactly at the endpoint of integration; that
    case is handled directly with panels graded into the singularity and
    a finite-difference derivative of g.  Otherwise integration by parts
    reduces the value to a Cauchy transform plus a boundary term.
    """
    endpoint = float(endpoint)
    k = complex(eval_k)
    if k != complex(endpoint):
        if k.imag == 0.0 and k.real < endpoint:
            raise QuadratureError("eval_k lies on the integration cut")
        ge = complex(np.asarray(g(np.array([endpoint]))).ravel()[0])
        boundary = -np.log(k - endpoint) * ge / _TWO_PI_I
        return boundary + cauchy_halfline(g, endpoint, k, spec)

    # eval_k at the endpoint: integrate log(E - z) g'(z) directly
    E = endpoint
    radius = max(spec.truncation_radius, 2.0 * abs(E) + 2.0)

    def gprime(z):
        step = 1e-6 * np.maximum(1.0, np.abs(z))
        return (np.asarray(g(z + step)) - np.asarray(g(z - step))) / (2.0 * step)

    def core_f(z):
        return np.log(E - z) * gprime(z)

    width = radius + E
    if width <= 0:
        raise InputError("truncation radius does not cover the endpoint")
    depth = _depth_for(width, 1e-13 * width, spec, extra=4)
    core = _integrate(core_f, _graded_edges(-radius, E, spec.grading_ratio, depth, "b"),
                      spec.nodes_per_panel)
    g_at_R = complex(np.asarray(g(np.array([-radius]))).ravel()[0])
    tail = (np.log(E + radius) * g_at_R
            - _tail_cauchy(g, radius, E, spec, -1))
    return -(core + tail) / _TWO_PI_I


def unwrap_arg(values):
    """Continuous argument along a sampled curve of nonzero complex values.

    The first entry is the principal argument of the first sample; each
    successive difference is the principal-branch difference.  A jump of
    essentially pi between neighbours means the sampling is too coarse to
    track the branch and raises QuadratureError.
    """
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise InputError("unwrap_arg expects a nonempty 1-d array")
    if np.any(v == 0):
        raise QuadratureError("zero value on the curve; argument undefined")
    out = np.unwrap(np.angle(v))
    if out.size > 1:
        d = np.abs(np.diff(out))
        if np.any(d >= np.pi * (1.0 - 1e-9)):
            raise QuadratureError(
                "argument jump of ~pi between adjacent samples; grid too coarse"
            )
    return out

"""Long-time evaluation of the field along rays x = 4 xi t.

Everything is driven by the reflection data through

    g(z)  = log(1 + r1(z) r2(z)) = -log(a1(z) a2(z)),
    nu    = -(1/2 pi) g(-xi)            (continuous branch),
    delta(xi, k) = exp Cauchy transform of g over (-inf, -xi],
    chi(xi, k)   = Stieltjes log integral of g (regularized phase),

with x < 0 decaying like t^{-1/2} and x > 0 approaching the modulated
constant A delta(xi, 0)^2, corrected by one or two oscillatory t^{-1/2}
terms whose amplitudes come from a parabolic-cylinder (Gamma function)
local model.  The branch of g must wind by less than pi along the
contour; that is checked, not assumed.

Sub-exponential error tags: "t^-1", "t^-1 ln t", "t^-1+2|Im nu|".
"""

import threading
from dataclasses import dataclass

import numpy as np

from .errors import InputError, SingularityError, ValidationError
from .quadrature import (DEFAULT_SPEC, cauchy_halfline, stieltjes_log_integral,
                         unwrap_arg)
from .scattering import case_epsilon, one_plus_r1r2, reflection_coeffs
from .special import complex_gamma

_LN2 = np.log(2.0)
_SQRT_PI = np.sqrt(np.pi)
_SCAN_NODES = 1500
_ZERO_TOL = 1e-13

_CACHE_LOCK = threading.Lock()
_PHASE_CACHE = {}


@dataclass(frozen=True)
class PhaseData:
    """Quadrature products for one ray parameter xi > 0."""

    xi: float
    nu: complex
    winding: float           # total change of arg(1 + r1 r2) up to -xi
    chi_at_stationary: complex   # chi(xi, -xi)
    delta_at_0: complex
    delta_at_ik1: complex
    c0: complex              # A delta(xi,0)^2 / 2i
    branch_ok: bool


def _g_factory(sd):
    def g(z):
        return np.log(one_plus_r1r2(sd, np.asarray(z, dtype=float)))
    return g


def reset_phase_cache():
    with _CACHE_LOCK:
        _PHASE_CACHE.clear()


def _winding(sd, xi, spec):
    """Continuous argument of 1 + r1 r2 along (-inf, -xi]."""
    radius = max(spec.truncation_radius, 2.0 * xi + 2.0)
    nodes = -np.geomspace(radius, xi, _SCAN_NODES)
    vals = one_plus_r1r2(sd, nodes)
    phases = unwrap_arg(vals)
    return phases, vals


def phase_data(sd, xi, quad_spec=None):
    """All xi-dependent quadrature values, cached per (data, xi, spec)."""
    if not xi > 0:
        raise InputError("phase data is defined for xi > 0")
    spec = quad_spec or sd.quad_spec or DEFAULT_SPEC
    key = (sd.fingerprint, float(xi), spec)
    with _CACHE_LOCK:
        hit = _PHASE_CACHE.get(key)
    if hit is not None:
        return hit
    g = _g_factory(sd)
    phases, vals = _winding(sd, xi, spec)
    winding = float(phases[-1])
    branch_ok = bool(np.max(np.abs(phases)) < np.pi)
    nu = -(np.log(np.abs(vals[-1])) + 1j * winding) / (2.0 * np.pi)
    chi_st = stieltjes_log_integral(g, -xi, -xi, spec)
    delta0 = np.exp(cauchy_halfline(g, -xi, 0.0, spec))
    delta1 = np.exp(cauchy_halfline(g, -xi, 1j * sd.k1, spec))
    data = PhaseData(
        xi=float(xi), nu=complex(nu), winding=winding,
        chi_at_stationary=complex(chi_st), delta_at_0=complex(delta0),
        delta_at_ik1=complex(delta1),
        c0=sd.amplitude * complex(delta0) ** 2 / 2j,
        branch_ok=branch_ok,
    )
    with _CACHE_LOCK:
        _PHASE_CACHE[key] = data  # concurrent duplicates: last write wins
    return data


def nu_of_xi(sd, xi, quad_spec=None):
    """Exponent nu at the stationary point -xi (xi > 0); Im nu in (-1/2, 1/2)
    when the winding assumption holds."""
    return phase_data(sd, xi, quad_spec).nu


def delta_at(sd, xi, eval_k, quad_spec=None):
    """The partial-transmission factor delta(xi, k) off the cut (-inf, -xi]."""
    spec = quad_spec or sd.quad_spec or DEFAULT_SPEC
    g = _g_factory(sd)
    return np.exp(cauchy_halfline(g, -float(xi), eval_k, spec))


def modulated_constant(sd, xi, quad_spec=None):
    """A delta(xi, 0)^2: the plateau value on the ray x = 4 xi t > 0."""
    return sd.amplitude * phase_data(sd, xi, quad_spec).delta_at_0 ** 2


def _gamma_div(numer, nu_arg, context):
    """numer / Gamma(nu_arg) with the pole called out explicitly."""
    if nu_arg == 0:
        raise ValidationError(
            f"{context}: Gamma pole at nu = 0 with nonzero reflection data"
        )
    return numer / complex_gamma(nu_arg)


def alpha_coeffs(sd, xi, phase=None, quad_spec=None):
    """Oscillatory-term amplitudes (alpha1, alpha2, alpha3) for ray parameter
    xi > 0: alpha1 feeds the ray x = -4 xi t, alpha2/alpha3 the ray +4 xi t.

    Which branch of each table applies is decided by exact vanishing of the
    reflection coefficients at the relevant signed stationary points.
    """
    if not xi > 0:
        raise InputError("alpha coefficients are defined for xi > 0")
    if phase is None:
        phase = phase_data(sd, xi, quad_spec)
    r1_pos, r2_pos = reflection_coeffs(sd, xi)
    r1_neg, r2_neg = reflection_coeffs(sd, -xi)
    nu = phase.nu
    chi_st = phase.chi_at_stationary
    nub = np.conj(nu)
    chib = np.conj(chi_st)

    def is_zero(v):
        return abs(v) < _ZERO_TOL

    # alpha1: table argument -xi, conditions at +xi, values conjugated
    if is_zero(r2_pos):
        alpha1 = 0.0j
    elif is_zero(r1_pos):
        alpha1 = np.conj(r1_neg) * np.exp(0.75j * np.pi) / (2.0 * _SQRT_PI)
    else:
        alpha1 = _gamma_div(
            _SQRT_PI * np.exp(-0.5 * np.pi * nub + 0.25j * np.pi
                              - 2.0 * chib - 3j * nub * _LN2)
            / np.conj(r2_neg),
            -1j * nub, "alpha1")

    # alpha2: conditions at -xi
    if is_zero(r1_neg):
        alpha2 = 0.0j
    elif is_zero(r2_neg):
        alpha2 = (phase.c0 ** 2 * r1_neg * np.exp(0.25j * np.pi)
                  / (2.0 * _SQRT_PI * xi ** 2))
    else:
        alpha2 = _gamma_div(
            phase.c0 ** 2 * _SQRT_PI
            * np.exp(-0.5 * np.pi * nu + 0.75j * np.pi
                     - 2.0 * chi_st + 3j * nu * _LN2)
            / (xi ** 2 * r2_neg),
            1j * nu, "alpha2")

    # alpha3: conditions at -xi
    if is_zero(r1_neg) and is_zero(r2_neg):
        alpha3 = 0.0j
    elif is_zero(r1_neg):
        alpha3 = r2_neg * np.exp(0.75j * np.pi) / (2.0 * _SQRT_PI)
    elif is_zero(r2_neg):
        alpha3 = 0.0j
    else:
        alpha3 = _gamma_div(
            _SQRT_PI * np.exp(-0.5 * np.pi * nu + 0.25j * np.pi
                              + 2.0 * chi_st - 3j * nu * _LN2)
            / r1_neg,
            -1j * nu, "alpha3")
    return complex(alpha1), complex(alpha2), complex(alpha3)


def _right_regime(im_nu):
    if im_nu <= -1.0 / 6.0:
        return "RightA"
    if im_nu < 1.0 / 6.0:
        return "RightB"
    return "RightC"


def _tag_r1(im_nu):
    if im_nu > 0:
        return "t^-1"
    if im_nu == 0:
        return "t^-1 ln t"
    return "t^-1+2|Im nu|"


def _tag_r2(im_nu):
    if im_nu > 0:
        return "t^-1+2|Im nu|"
    if im_nu == 0:
        return "t^-1 ln t"
    return "t^-1"


def _tag_r3(im_nu):
    return "t^-1 ln t" if im_nu == 0 else "t^-1+2|Im nu|"


@dataclass
class AsymptoticResult:
    value: complex
    regime: str
    error_order: str
    # each term is (amplitude, t_power, osc_rate, log_rate) representing
    # amplitude * t^t_power * exp(i (osc_rate t + log_rate ln t))
    t_power_terms: list

    def eval_terms(self, t):
        total = 0.0j
        for amp, power, osc, logr in self.t_power_terms:
            total += amp * t ** power * np.exp(1j * (osc * t + logr * np.log(t)))
        return total


def q_asymptotic(sd, x, t, quad_spec=None):
    """Leading long-time terms of q(x, t) on the ray xi = x/4t != 0."""
    if not t > 0:
        raise InputError("q_asymptotic needs t > 0")
    xi = x / (4.0 * t)
    if xi == 0.0:
        raise InputError("the ray x = 0 (transition zone) is not covered")
    s = abs(xi)
    phase = phase_data(sd, s, quad_spec)
    if not phase.branch_ok:
        raise ValidationError(
            "argument of 1 + r1 r2 winds by >= pi; asymptotic formulas do not apply"
        )
    nu = phase.nu
    imn = nu.imag
    if abs(imn) >= 0.5:
        raise ValidationError(f"|Im nu| = {abs(imn):.4f} >= 1/2; formulas do not apply")
    a1c, a2c, a3c = alpha_coeffs(sd, s, phase, quad_spec)
    s2 = s * s
    if xi < 0:
        terms = [(a1c, -0.5 - imn, 4.0 * s2, -nu.real)]
        regime = "LeftDecay"
        tag = _tag_r1(imn)
    else:
        const = sd.amplitude * phase.delta_at_0 ** 2
        term2 = (a2c, -0.5 - imn, -4.0 * s2, nu.real)
        term3 = (a3c, -0.5 + imn, 4.0 * s2, -nu.real)
        regime = _right_regime(imn)
        if regime == "RightA":
            terms = [(const, 0.0, 0.0, 0.0), term2]
            tag = _tag_r1(imn)
        elif regime == "RightB":
            terms = [(const, 0.0, 0.0, 0.0), term3, term2]
            tag = _tag_r3(imn)
        else:
            terms = [(const, 0.0, 0.0, 0.0), term3]
            tag = _tag_r2(imn)
    result = AsymptoticResult(value=0.0j, regime=regime, error_order=tag,
                              t_power_terms=terms)
    result.value = complex(result.eval_terms(t))
    return result


def c_constants(sd, phase, x, t):
    """The two residue-model constants on a ray: c0 from the plateau and the
    exponentially decaying c1 driven by the a1 zero at i k1."""
    c0 = phase.c0
    k1 = sd.k1
    c1 = (sd.gamma1 * np.exp(-2.0 * k1 * x - 4j * k1 ** 2 * t)
          / (sd.da1_at_ik1 * phase.delta_at_ik1 ** 2))
    return c0, c1


_SOL_CACHE = {}


def _soliton_region_factors(sd, quad_spec):
    key = (sd.fingerprint, quad_spec)
    with _CACHE_LOCK:
        hit = _SOL_CACHE.get(key)
    if hit is not None:
        return hit
    g = _g_factory(sd)
    chi_hat = stieltjes_log_integral(g, 0.0, 0.0, quad_spec)
    delta1 = np.exp(cauchy_halfline(g, 0.0, 1j * sd.k1, quad_spec))
    with _CACHE_LOCK:
        _SOL_CACHE[key] = (chi_hat, delta1)
    return chi_hat, delta1


def q_soliton_region(sd, x0, t, quad_spec=None):
    """Leading behaviour at fixed x0 as t grows: a one-soliton profile built
    from (k1, gamma1, da1) and dressed by delta(0, ik1) and the chi-hat
    phase.  Requires reflectionless-at-origin data (b(0) = 0, non-generic
    case).  Near the soliton's pole times the denominator degenerates and
    SingularityError is raised.
    """
    if sd.case_tag != "CaseII":
        raise ValidationError("soliton-region formula needs the non-generic case")
    b0 = sd.b_at_0
    if b0 == b0 and abs(b0) > case_epsilon(sd.amplitude):
        raise ValidationError(
            f"soliton-region formula needs b(0) = 0; have |b(0)| = {abs(b0):.3e}"
        )
    spec = quad_spec or sd.quad_spec or DEFAULT_SPEC
    chi_hat, delta1 = _soliton_region_factors(sd, spec)
    A = sd.amplitude
    k1 = sd.k1
    core = 2j * k1 ** 2 * sd.da1_at_ik1 * delta1 ** 2
    tail = A * sd.gamma1 * np.exp(-2.0 * k1 * x0 - 4j * k1 ** 2 * t + 2.0 * chi_hat)
    num = A * core * np.exp(2.0 * chi_hat)
    den = core - tail
    if abs(den) < 1e-12 * (abs(core) + abs(tail)):
        raise SingularityError(
            f"soliton-region denominator vanishes near (x0, t) = ({x0:g}, {t:g})"
        )
    return complex(num / den)

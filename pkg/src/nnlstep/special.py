"""Scalar special functions: complex gamma and the real dilogarithm.

Both are needed in closed-form reference values and in the stationary-phase
amplitude coefficients, where the argument of gamma is a small purely
imaginary number.  A Lanczos approximation is accurate to ~1e-13 relative
over the region we use (|z| <= 20), which is plenty.
"""

import math
import cmath

from .errors import InputError

# Lanczos coefficients, g = 7, 9 terms (double precision set).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_PI = math.pi


def complex_gamma(z):
    """Gamma function for complex argument.

    Raises InputError at the poles (z a non-positive integer).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise InputError(f"gamma pole at z={z.real:g}")
    if z.real < 0.5:
        # reflection through  Gamma(z) Gamma(1-z) = pi / sin(pi z)
        s = cmath.sin(_PI * z)
        if s == 0:
            raise InputError(f"gamma pole at z={z}")
        return _PI / (s * complex_gamma(1.0 - z))
    z = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        x += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * _PI) * t ** (z + 0.5) * cmath.exp(-t) * x


def dilog(x):
    """Real dilogarithm Li2(x) = sum x^n / n^2 for real x <= 1.

    Evaluated by series on [-1/2, 1/2] and standard functional equations
    elsewhere; raises InputError for x > 1 where Li2 is complex.
    """
    x = float(x)
    if x > 1.0:
        raise InputError("dilog argument must be <= 1")
    if x == 1.0:
        return _PI * _PI / 6.0
    if x == -1.0:
        return -_PI * _PI / 12.0
    if x < -1.0:
        # inversion: Li2(x) = -pi^2/6 - ln^2(-x)/2 - Li2(1/x)
        lx = math.log(-x)
        return -_PI * _PI / 6.0 - 0.5 * lx * lx - dilog(1.0 / x)
    if x > 0.5:
        # reflection: Li2(x) + Li2(1-x) = pi^2/6 - ln(x) ln(1-x)
        return _PI * _PI / 6.0 - math.log(x) * math.log1p(-x) - dilog(1.0 - x)
    if x < -0.5:
        # Landen: Li2(x) = -Li2(x/(x-1)) - ln^2(1-x)/2
        l1 = math.log1p(-x)
        return -dilog(x / (x - 1.0)) - 0.5 * l1 * l1
    # series region
    total = 0.0
    term = x
    n = 1
    while abs(term) > 1e-18 * max(1.0, abs(total)):
        total += term / (n * n)
        n += 1
        term *= x
        if n > 400:  # pragma: no cover - cannot happen for |x| <= 1/2
            break
    return total

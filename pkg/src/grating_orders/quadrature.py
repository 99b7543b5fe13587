"""Sine-integral kernels and adaptive quadrature.

The closed forms built on Si(x) are the production path for every envelope
integral in the package. ``adaptive_integrate`` is a deliberately independent
second route (plain adaptive Simpson) kept alongside so that each path checks
the other; the test suite compares them everywhere it matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .diffraction import grating_factor, grating_intensity, order_alpha

__all__ = [
    "Interval",
    "QuadratureResult",
    "QuadratureError",
    "si",
    "sinc_sq_integral",
    "adaptive_integrate",
    "grating_factor_subinterval_integral",
]

_SI_SERIES_CUTOFF = 16.0
_CF_TOL = 1e-16
_CF_MAX_ITER = 300


@dataclass(frozen=True)
class Interval:
    """Closed integration interval [lo, hi] in alpha-space, lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite: [{self.lo!r}, {self.hi!r}]")
        if self.lo > self.hi:
            raise ValueError(f"interval requires lo <= hi, got [{self.lo!r}, {self.hi!r}]")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self) -> None:
        if self.abs_error_estimate < 0:
            raise ValueError("abs_error_estimate must be >= 0")


class QuadratureError(RuntimeError):
    """Adaptive subdivision hit its depth bound before meeting tolerance.

    Carries the best available estimate in ``partial``.
    """

    def __init__(self, message: str, partial: QuadratureResult):
        super().__init__(message)
        self.partial = partial


def _si_power_series(x: float) -> float:
    # Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1) (2k+1)!).  The terms alternate
    # with large intermediate magnitude near the cutoff, so they are collected
    # and compensated-summed rather than accumulated naively.
    term_sin = x  # (-1)^k x^(2k+1) / (2k+1)!
    terms = [x]
    for k in range(1, 120):
        term_sin *= -x * x / ((2 * k) * (2 * k + 1))
        term = term_sin / (2 * k + 1)
        terms.append(term)
        if abs(term) < 1e-20:
            return math.fsum(terms)
    raise ArithmeticError(f"sine-integral series did not converge for x={x!r}")


def _si_continued_fraction(x: float) -> float:
    # Lentz evaluation of the continued fraction for the auxiliary functions
    # f and g in Si(x) = pi/2 - f(x) cos x - g(x) sin x. The truncated
    # asymptotic series for f and g bottoms out near 1e-7 for x around the
    # series cutoff, so the convergent continued fraction is used instead.
    b = complex(1.0, x)
    c = complex(1e300, 0.0)
    d = 1.0 / b
    h = d
    for i in range(2, _CF_MAX_ITER):
        a = -((i - 1) ** 2)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _CF_TOL:
            h *= complex(math.cos(x), -math.sin(x))
            return math.pi / 2.0 + h.imag
    raise ArithmeticError(f"sine-integral continued fraction did not converge for x={x!r}")


def si(x: float) -> float:
    """Sine integral Si(x) = integral of sin(t)/t from 0 to x.

    Odd in x, tending to +-pi/2 as x -> +-inf. Power series up to |x| = 16,
    continued-fraction auxiliary functions beyond; both branches agree with
    the adaptive-quadrature route to better than 1e-10 at the switchover.
    """
    if not math.isfinite(x):
        raise ValueError(f"si requires finite x, got {x!r}")
    if x < 0.0:
        return -si(-x)
    if x == 0.0:
        return 0.0
    if x <= _SI_SERIES_CUTOFF:
        return _si_power_series(x)
    return _si_continued_fraction(x)


def _sinc_sq_primitive(x: float) -> float:
    # d/dx [Si(2x) - sin^2(x)/x] = sinc^2(x); the primitive vanishes at 0.
    if x == 0.0:
        return 0.0
    s = math.sin(x)
    return si(2.0 * x) - s * s / x


def sinc_sq_integral(iv: Interval) -> float:
    """Integral of sinc^2(alpha) over [lo, hi] via the Si closed form."""
    return _sinc_sq_primitive(iv.hi) - _sinc_sq_primitive(iv.lo)


def adaptive_integrate(
    f: Callable[[float], float],
    iv: Interval,
    tol: float = 1e-10,
    *,
    max_depth: int = 50,
    initial_panels: int = 8,
) -> QuadratureResult:
    """Adaptive Simpson quadrature with Richardson extrapolation.

    The interval is pre-split into ``initial_panels`` equal panels (defeating
    the classic failure mode where a symmetric oscillatory integrand fools the
    first Simpson estimate), then each panel is subdivided until its local
    error estimate meets its share of ``tol``. Deterministic for fixed inputs.

    Raises QuadratureError, carrying the partial estimate, if any panel hits
    ``max_depth`` before meeting tolerance.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if initial_panels < 1:
        raise ValueError(f"initial_panels must be >= 1, got {initial_panels!r}")
    if iv.lo == iv.hi:
        return QuadratureResult(0.0, 0.0, 0)

    evaluations = 0

    def feval(x: float) -> float:
        nonlocal evaluations
        evaluations += 1
        y = f(x)
        if not math.isfinite(y):
            raise ValueError(f"integrand returned non-finite value {y!r} at x={x!r}")
        return y

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 6.0 * (fa + 4.0 * fm + fb)

    exhausted = False

    def recurse(a, b, fa, fm, fb, whole, local_tol, depth):
        nonlocal exhausted
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = feval(lm)
        frm = feval(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        err = (left + right - whole) / 15.0
        if abs(err) <= local_tol or depth >= max_depth:
            if abs(err) > local_tol:
                exhausted = True
            return left + right + err, abs(err)
        lv, le = recurse(a, m, fa, flm, fm, left, local_tol / 2.0, depth + 1)
        rv, re = recurse(m, b, fm, frm, fb, right, local_tol / 2.0, depth + 1)
        return lv + rv, le + re

    width = iv.hi - iv.lo
    panel_tol = tol / initial_panels
    values = []
    errors = []
    for k in range(initial_panels):
        a = iv.lo + width * k / initial_panels
        b = iv.lo + width * (k + 1) / initial_panels
        fa, fm, fb = feval(a), feval(0.5 * (a + b)), feval(b)
        whole = simpson(fa, fm, fb, b - a)
        v, e = recurse(a, b, fa, fm, fb, whole, panel_tol, 0)
        values.append(v)
        errors.append(e)

    result = QuadratureResult(math.fsum(values), math.fsum(errors), evaluations)
    if exhausted:
        raise QuadratureError(
            f"subdivision depth {max_depth} exhausted before reaching tol={tol!r}", result
        )
    return result


def grating_factor_subinterval_integral(
    j: int,
    sigma: float,
    n_slits: int,
    *,
    frozen_envelope: bool = False,
    tol: float = 1e-9,
) -> float:
    """Numerical integral of the grating intensity over one order subinterval.

    The subinterval is [alpha_j - pi sigma/2, alpha_j + pi sigma/2], the strip
    that the j-th principal maximum fully samples. With ``frozen_envelope`` the
    sinc^2 factor is replaced by 1, in which case the integral equals
    N pi sigma exactly (the interference factor integrates to N pi over any
    period of its argument); with the envelope on it approximates
    N pi sigma sinc^2(alpha_j), the Riemann-strip output probability.
    """
    aj = float(order_alpha(j, sigma))
    half = math.pi * sigma / 2.0
    if frozen_envelope:
        f = lambda a: grating_factor(a, sigma, n_slits)
    else:
        f = lambda a: grating_intensity(a, sigma, n_slits)
    panels = max(16, min(2 * n_slits, 512))
    return adaptive_integrate(
        f, Interval(aj - half, aj + half), tol, initial_panels=panels
    ).value

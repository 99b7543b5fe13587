"""Slit and grating geometry in alpha-space, with pointwise intensity functions.

Everything downstream works in the dimensionless coordinate
alpha = (pi w / lambda) sin(theta), where w is the slit width and theta the
azimuthal angle from the grating normal. Angles enter in degrees only at the
API boundary; lengths are nanometres throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "AlphaPoint",
    "GratingSpec",
    "alpha_from_theta",
    "truncation_alpha",
    "order_alpha",
    "equivalent_order",
    "sinc_sq",
    "sinc_sq_at_order",
    "grating_factor",
    "grating_intensity",
]

# Half-width of the series window around removable singularities, in the
# coordinate of each singular factor (alpha for the envelope, beta = alpha/sigma
# for the grating factor). Grid sampling may land arbitrarily close to a
# singularity, so a window, not an exact-equality special case.
_SERIES_WINDOW = 1e-6

# Typical irradiated-slit count at desk scale; roughly two orders of magnitude
# above the illustrative N = 4 used for envelope-plus-peaks plots.
DEFAULT_SLIT_COUNT = 257


@dataclass(frozen=True)
class AlphaPoint:
    """A single alpha-space coordinate. Must be a finite real."""

    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")

    def __float__(self) -> float:
        return float(self.alpha)


def as_alpha(value: AlphaPoint | float) -> float:
    """Coerce an AlphaPoint or bare number to a validated float coordinate."""
    x = float(value)
    if not math.isfinite(x):
        raise ValueError(f"alpha must be finite, got {value!r}")
    return x


@dataclass(frozen=True)
class GratingSpec:
    """Physical description of an irradiated transmission grating.

    Lengths in nanometres. The duty cycle sigma = w/p is stored redundantly
    with the period and must agree with it; sigma = 0.5 is a Ronchi ruling.
    Slits narrower than the wavelength are rejected outright: the scalar
    sinc^2 envelope model is not valid there.
    """

    slit_width_w: float
    period_p: float
    duty_sigma: float
    wavelength_lambda: float
    slit_count_N: int

    def __post_init__(self) -> None:
        for name in ("slit_width_w", "period_p", "wavelength_lambda"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite length, got {v!r}")
        if not 0.0 < self.duty_sigma < 1.0:
            raise ValueError(f"duty_sigma must lie in (0, 1), got {self.duty_sigma!r}")
        implied = self.slit_width_w / self.duty_sigma
        if abs(self.period_p - implied) > 1e-12 * implied:
            raise ValueError(
                f"period_p={self.period_p!r} inconsistent with w/sigma={implied!r}"
            )
        if self.slit_width_w < self.wavelength_lambda:
            raise ValueError(
                "sub-wavelength slit rejected: "
                f"w={self.slit_width_w!r} nm < lambda={self.wavelength_lambda!r} nm"
            )
        if not (isinstance(self.slit_count_N, int) and self.slit_count_N >= 1):
            raise ValueError(f"slit_count_N must be an integer >= 1, got {self.slit_count_N!r}")

    @classmethod
    def from_sigma(
        cls,
        slit_width_w: float,
        duty_sigma: float,
        wavelength_lambda: float,
        slit_count_n: int = DEFAULT_SLIT_COUNT,
    ) -> "GratingSpec":
        if not 0.0 < duty_sigma < 1.0:
            raise ValueError(f"duty_sigma must lie in (0, 1), got {duty_sigma!r}")
        return cls(
            slit_width_w=slit_width_w,
            period_p=slit_width_w / duty_sigma,
            duty_sigma=duty_sigma,
            wavelength_lambda=wavelength_lambda,
            slit_count_N=slit_count_n,
        )

    @classmethod
    def ronchi(
        cls,
        slit_width_w: float,
        wavelength_lambda: float,
        slit_count_n: int = DEFAULT_SLIT_COUNT,
    ) -> "GratingSpec":
        """Square-wave ruling with equal slit and band widths (sigma = 0.5)."""
        return cls.from_sigma(slit_width_w, 0.5, wavelength_lambda, slit_count_n)

    @classmethod
    def from_truncation(
        cls,
        alpha_t: AlphaPoint | float,
        wavelength_lambda: float,
        duty_sigma: float = 0.5,
        slit_count_n: int = DEFAULT_SLIT_COUNT,
    ) -> "GratingSpec":
        """Build the grating whose envelope truncates at the given alpha_t."""
        at = as_alpha(alpha_t)
        if at <= 0:
            raise ValueError(f"alpha_t must be positive, got {at!r}")
        return cls.from_sigma(
            wavelength_lambda * at / math.pi, duty_sigma, wavelength_lambda, slit_count_n
        )


def alpha_from_theta(spec: GratingSpec, theta_deg: float) -> AlphaPoint:
    """Map an azimuthal angle in degrees to its alpha-space coordinate.

    Odd in theta; restricted to the physical half-space -90 <= theta <= 90.
    """
    if not -90.0 <= theta_deg <= 90.0:
        raise ValueError(f"theta must lie in [-90, 90] degrees, got {theta_deg!r}")
    scale = math.pi * spec.slit_width_w / spec.wavelength_lambda
    return AlphaPoint(scale * math.sin(math.radians(theta_deg)))


def truncation_alpha(spec: GratingSpec) -> AlphaPoint:
    """Envelope truncation alpha_t = pi w / lambda, i.e. alpha at grazing angle."""
    return AlphaPoint(math.pi * spec.slit_width_w / spec.wavelength_lambda)


def order_alpha(j: int, sigma: float) -> AlphaPoint:
    """Position alpha_j = j pi sigma of the j-th principal interference order."""
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    return AlphaPoint(j * math.pi * sigma)


def equivalent_order(spec: GratingSpec) -> float:
    """Continuum order index of the truncation point, alpha_t / (pi sigma).

    For a Ronchi ruling this is 2 w / lambda: a non-integer "order number"
    that places the envelope edge relative to the integer orders.
    """
    return spec.slit_width_w / (spec.wavelength_lambda * spec.duty_sigma)


def sinc_sq(alpha: AlphaPoint | float) -> float:
    """Single-slit intensity envelope (sin(alpha)/alpha)^2, in [0, 1].

    The removable singularity at alpha = 0 is evaluated by series inside a
    +-1e-6 window.
    """
    a = as_alpha(alpha)
    if abs(a) < _SERIES_WINDOW:
        a2 = a * a
        return 1.0 - a2 / 3.0 + 2.0 * a2 * a2 / 45.0
    s = math.sin(a) / a
    return s * s


def sinc_sq_at_order(j: int, sigma: float) -> float:
    """Envelope value at the j-th order position, sinc^2(j pi sigma).

    Evaluates sin(pi t) with t = j sigma reduced modulo 1 before multiplying
    by pi, so order positions that are exact envelope nulls (integer t, e.g.
    even orders of a Ronchi ruling) come out as exactly 0.0 instead of
    inheriting the rounding of pi.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    t = j * sigma
    if t == 0.0:
        return 1.0
    r = t - round(t)
    s = math.sin(math.pi * r)
    return (s / (math.pi * t)) ** 2


def grating_factor(alpha: AlphaPoint | float, sigma: float, n_slits: int) -> float:
    """N-slit interference factor (sin(N alpha/sigma) / sin(alpha/sigma))^2.

    Principal maxima sit at alpha = j pi sigma where both sines vanish; the
    removable singularity there evaluates to N^2. The argument is reduced
    modulo pi before evaluation so the factor stays accurate arbitrarily far
    from the origin.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    if not (isinstance(n_slits, int) and n_slits >= 1):
        raise ValueError(f"n_slits must be an integer >= 1, got {n_slits!r}")
    beta = as_alpha(alpha) / sigma
    n = n_slits
    # sin(N beta)/sin(beta) is invariant (up to sign) under beta -> beta - k pi
    # for integer N and k, and the square kills the sign.
    u = beta - round(beta / math.pi) * math.pi
    window = min(_SERIES_WINDOW / sigma, 1e-3 / n)
    if abs(u) < window:
        u2 = u * u
        return n * n * (1.0 - (n * n - 1.0) * u2 / 3.0)
    r = math.sin(n * u) / math.sin(u)
    return r * r


def grating_intensity(alpha: AlphaPoint | float, sigma: float, n_slits: int) -> float:
    """Resultant intensity of the N-slit grating: envelope times grating factor."""
    return sinc_sq(alpha) * grating_factor(alpha, sigma, n_slits)

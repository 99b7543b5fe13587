"""Output and resultant probability accounting for grating diffraction orders.

The resultant probability of an N-slit grating is a Riemann-style sum of
strips pi*sigma*N*sinc^2(alpha_j) over the propagating orders; the output
probability is the corresponding envelope integral N * int sinc^2 over
[-alpha_t, alpha_t]. Their ratio (N cancels) is the normalized resultant
probability: identically close to 1 under dense sampling (sigma -> 0), but
stepping discontinuously at order thresholds under sparse sampling
(sigma = 0.5), where the reciprocal is the occupation value of the orders.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .diffraction import (
    GratingSpec,
    AlphaPoint,
    as_alpha,
    order_alpha,
    sinc_sq_at_order,
    truncation_alpha,
)
from .quadrature import Interval, sinc_sq_integral

__all__ = [
    "InclusionRule",
    "DEFAULT_RULE",
    "CurveKind",
    "ProbabilityCurve",
    "OrderRow",
    "OrderTable",
    "propagating_orders",
    "output_probability",
    "resultant_sum",
    "normalized_resultant_probability",
    "order_probability",
    "occupation_value",
    "omega_from_delta_p",
    "zero_order_share",
    "zero_order_energy",
    "order_table",
    "curve",
]

# Displacement used to render the two one-sided limits of a threshold
# discontinuity; physical beams only approximate a true mathematical
# discontinuity, so a pair of nearby samples is the honest representation.
EDGE_OFFSET = 1e-6


@dataclass(frozen=True)
class InclusionRule:
    """Which orders count as propagating at truncation alpha_t.

    ``inclusive`` admits |alpha_j| <= alpha_t + eps_tie (the default, with a
    1e-9 tie tolerance so an order sitting exactly at truncation is counted);
    ``strict_below`` admits |alpha_j| < alpha_t only.
    """

    mode: str = "inclusive"
    eps_tie: float = 1e-9

    def __post_init__(self) -> None:
        if self.mode not in ("inclusive", "strict_below"):
            raise ValueError(f"mode must be 'inclusive' or 'strict_below', got {self.mode!r}")
        if self.eps_tie < 0:
            raise ValueError(f"eps_tie must be >= 0, got {self.eps_tie!r}")


DEFAULT_RULE = InclusionRule()


class CurveKind(str, enum.Enum):
    RESULTANT_PROBABILITY = "resultant_probability"
    OCCUPATION = "occupation"
    ZERO_ORDER_SHARE = "zero_order_share"
    ZERO_ORDER_ENERGY = "zero_order_energy"


@dataclass(frozen=True)
class ProbabilityCurve:
    """A sampled scalar function of alpha_t (the universal figure-data carrier)."""

    abscissa: np.ndarray
    ordinate: np.ndarray
    kind: CurveKind

    def __post_init__(self) -> None:
        a = np.asarray(self.abscissa, dtype=float)
        o = np.asarray(self.ordinate, dtype=float)
        if a.shape != o.shape or a.ndim != 1 or a.size < 1:
            raise ValueError("abscissa and ordinate must be equal-length 1-D arrays")
        if not np.all(np.diff(a) > 0):
            raise ValueError("abscissa must be strictly increasing")
        if not (np.all(np.isfinite(o)) and np.all(o > 0)):
            raise ValueError("ordinate values must be finite and positive")
        object.__setattr__(self, "abscissa", a)
        object.__setattr__(self, "ordinate", o)


def propagating_orders(
    alpha_t: AlphaPoint | float, sigma: float, rule: InclusionRule = DEFAULT_RULE
) -> list[int]:
    """Symmetric set {-n, ..., n} of orders admitted below truncation."""
    at = as_alpha(alpha_t)
    if at <= 0:
        raise ValueError(f"alpha_t must be positive, got {at!r}")
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    h = math.pi * sigma
    if rule.mode == "inclusive":
        bound = at + rule.eps_tie
        n = int(bound / h)
        while (n + 1) * h <= bound:
            n += 1
        while n > 0 and n * h > bound:
            n -= 1
    else:
        n = int(at / h)
        while (n + 1) * h < at:
            n += 1
        while n > 0 and n * h >= at:
            n -= 1
    return list(range(-n, n + 1))


def _envelope_sum(alpha_t: float, sigma: float, rule: InclusionRule) -> float:
    n = propagating_orders(alpha_t, sigma, rule)[-1]
    return 1.0 + 2.0 * math.fsum(sinc_sq_at_order(j, sigma) for j in range(1, n + 1))


def output_probability(alpha_t: AlphaPoint | float, n_slits: int) -> float:
    """Collective pre-interference output probability N * int sinc^2 over +-alpha_t."""
    at = as_alpha(alpha_t)
    if at <= 0:
        raise ValueError(f"alpha_t must be positive, got {at!r}")
    if n_slits < 1:
        raise ValueError(f"n_slits must be >= 1, got {n_slits!r}")
    return n_slits * sinc_sq_integral(Interval(-at, at))


def resultant_sum(
    alpha_t: AlphaPoint | float,
    sigma: float,
    n_slits: int,
    rule: InclusionRule = DEFAULT_RULE,
) -> float:
    """Total resultant probability: strip sum pi sigma N sinc^2(alpha_j) over orders."""
    if n_slits < 1:
        raise ValueError(f"n_slits must be >= 1, got {n_slits!r}")
    at = as_alpha(alpha_t)
    return math.pi * sigma * n_slits * _envelope_sum(at, sigma, rule)


def normalized_resultant_probability(
    alpha_t: AlphaPoint | float, sigma: float, rule: InclusionRule = DEFAULT_RULE
) -> float:
    """Resultant probability normalized by output probability (N cancels).

    Requires alpha_t >= pi sigma, i.e. at least the 0th order propagating with
    a full strip of margin; below that the strip sum is not a meaningful
    Riemann approximation of the envelope integral.
    """
    at = as_alpha(alpha_t)
    if at < math.pi * sigma:
        raise ValueError(
            f"alpha_t={at!r} below pi*sigma={math.pi * sigma!r}; "
            "normalized resultant probability is defined for alpha_t >= pi*sigma"
        )
    strip_sum = math.pi * sigma * _envelope_sum(at, sigma, rule)
    return strip_sum / sinc_sq_integral(Interval(-at, at))


def order_probability(
    j: int,
    alpha_t: AlphaPoint | float,
    sigma: float,
    rule: InclusionRule = DEFAULT_RULE,
) -> float:
    """Normalized resultant probability carried by the single order j."""
    at = as_alpha(alpha_t)
    orders = propagating_orders(at, sigma, rule)
    if j not in orders:
        raise ValueError(f"order j={j} is not propagating at alpha_t={at!r} (|j| <= {orders[-1]})")
    return math.pi * sigma * sinc_sq_at_order(j, sigma) / sinc_sq_integral(Interval(-at, at))


def occupation_value(
    alpha_t: AlphaPoint | float, sigma: float, rule: InclusionRule = DEFAULT_RULE
) -> float:
    """Energy-to-probability ratio of the propagating orders.

    With output energy conserved onto the resultants, this is the exact
    reciprocal of the normalized resultant probability: above 1 the orders are
    enriched, below 1 depleted, 1 is ordinary.
    """
    return 1.0 / normalized_resultant_probability(alpha_t, sigma, rule)


def omega_from_delta_p(delta_p: float, p_o: float, sign: str) -> float:
    """Occupation value implied by a probability excursion delta_p on base p_o.

    ``sign='created'`` means the resultant gained probability (occupation
    drops below 1); ``'annihilated'`` means it lost probability (occupation
    rises above 1).
    """
    if not p_o > 0:
        raise ValueError(f"p_o must be positive, got {p_o!r}")
    if delta_p < 0:
        raise ValueError(f"delta_p must be >= 0, got {delta_p!r}")
    if sign == "created":
        return 1.0 / (1.0 + delta_p / p_o)
    if sign == "annihilated":
        if delta_p >= p_o:
            raise ValueError(f"annihilated delta_p={delta_p!r} must be < p_o={p_o!r}")
        return 1.0 / (1.0 - delta_p / p_o)
    raise ValueError(f"sign must be 'created' or 'annihilated', got {sign!r}")


def zero_order_share(
    alpha_t: AlphaPoint | float, sigma: float, rule: InclusionRule = DEFAULT_RULE
) -> float:
    """Fraction of the total resultant probability carried by the 0th order.

    Piecewise constant in alpha_t: the strip factors cancel, leaving
    1 / sum_j sinc^2(alpha_j), which changes only when the propagating set
    changes, and only at orders that are not envelope nulls.
    """
    at = as_alpha(alpha_t)
    return 1.0 / _envelope_sum(at, sigma, rule)


def zero_order_energy(
    alpha_t: AlphaPoint | float,
    sigma: float,
    e_o: float = 1.0,
    rule: InclusionRule = DEFAULT_RULE,
) -> float:
    """Energy equilibrated onto the 0th order out of total output energy e_o.

    Energy distributes across the propagating orders in proportion to their
    probabilities, so the 0th-order energy is e_o times its probability share;
    the step-downs as orders reach threshold are the anomaly edges.
    """
    if not e_o > 0:
        raise ValueError(f"e_o must be positive, got {e_o!r}")
    return e_o * zero_order_share(alpha_t, sigma, rule)


@dataclass(frozen=True)
class OrderRow:
    j: int
    p_rj: float
    energy_share: float
    omega_j: float


@dataclass(frozen=True)
class OrderTable:
    """Per-order probability, energy share and occupation for one grating."""

    grating: GratingSpec
    rows: tuple[OrderRow, ...]
    p_r: float
    e_r: float
    omega: float


def order_table(spec: GratingSpec, rule: InclusionRule = DEFAULT_RULE) -> OrderTable:
    """Tabulate every propagating order of the grating.

    Rows are symmetric in +-j; orders at envelope nulls are listed with zero
    probability rather than omitted. Energy shares are probability shares
    (energy equilibrates in proportion to probability), so each row's
    energy-to-probability ratio is the table occupation; null rows carry that
    common value by convention. Defined for any duty cycle, although sigma
    away from 0.5 steps outside the square-wave-ruling setting the table is
    normally read in.
    """
    at = float(truncation_alpha(spec))
    sigma = spec.duty_sigma
    orders = propagating_orders(at, sigma, rule)
    denom = sinc_sq_integral(Interval(-at, at))
    p_by_j = {j: math.pi * sigma * sinc_sq_at_order(j, sigma) / denom for j in orders}
    p_r = math.fsum(p_by_j.values())
    omega = 1.0 / p_r
    rows = []
    for j in orders:
        p = p_by_j[j]
        share = p / p_r
        rows.append(OrderRow(j=j, p_rj=p, energy_share=share, omega_j=share / p if p > 0 else omega))
    e_r = math.fsum(r.energy_share for r in rows)
    return OrderTable(grating=spec, rows=tuple(rows), p_r=p_r, e_r=e_r, omega=omega)


_CURVE_FUNCS = {
    CurveKind.RESULTANT_PROBABILITY: normalized_resultant_probability,
    CurveKind.OCCUPATION: occupation_value,
    CurveKind.ZERO_ORDER_SHARE: zero_order_share,
}


def curve(
    kind: CurveKind | str,
    sigma: float,
    alpha_range: tuple[float, float],
    samples: int,
    rule: InclusionRule = DEFAULT_RULE,
    *,
    e_o: float = 1.0,
) -> ProbabilityCurve:
    """Sample one of the alpha_t-dependent scalars on a dense grid.

    A pair of samples at alpha_j -+ 1e-6 is inserted around every order
    position inside the range so threshold discontinuities are resolved as
    two-sided limits instead of being aliased by the background grid.
    """
    kind = CurveKind(kind)
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    lo, hi = float(alpha_range[0]), float(alpha_range[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"alpha_range must be finite with lo < hi, got ({lo!r}, {hi!r})")
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples!r}")
    if lo <= 0:
        raise ValueError(f"alpha_range must be positive, got lo={lo!r}")
    if kind in (CurveKind.RESULTANT_PROBABILITY, CurveKind.OCCUPATION) and lo < math.pi * sigma:
        raise ValueError(
            f"{kind.value} curves require alpha_range within [pi*sigma, inf); "
            f"got lo={lo!r} < {math.pi * sigma!r}"
        )

    grid = np.linspace(lo, hi, samples)
    extras = []
    j = 1
    while True:
        aj = float(order_alpha(j, sigma))
        if aj >= hi:
            break
        if aj > lo:
            if aj - EDGE_OFFSET > lo:
                extras.append(aj - EDGE_OFFSET)
            if aj + EDGE_OFFSET < hi:
                extras.append(aj + EDGE_OFFSET)
        j += 1
    pts = np.unique(np.concatenate([grid, np.asarray(extras, dtype=float)]))

    if kind is CurveKind.ZERO_ORDER_ENERGY:
        f = lambda at: zero_order_energy(at, sigma, e_o, rule)
    else:
        base = _CURVE_FUNCS[kind]
        f = lambda at: base(at, sigma, rule)
    values = np.array([f(at) for at in pts])
    return ProbabilityCurve(abscissa=pts, ordinate=values, kind=kind)

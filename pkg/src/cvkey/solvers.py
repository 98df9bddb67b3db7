"""Critical-point solvers on the key-rate bounds, plus closed-form constants.

All roots are found by bisection: the objectives are cheap and smooth but
their curvature is not characterized, so robustness wins over speed.  Losses
are reported as ``-10 log10(T)`` dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .bounds import key_rate
from .errors import BracketError, NoPositiveRegionError, NumericalError
from .protocol import ChannelParams, ProtocolParams

# |key rate| at a returned critical point must certify below this, in nats.
RESIDUAL_CERT = 1e-7

# Steep crossings need a tighter bracket than the headline 1e-9 before the
# midpoint residual certifies; refinement stops well above ulp spacing.
_REFINE_TOL = 1e-13

_T_FLOOR = 1e-6
_T_CEIL = 1.0 - 1e-9
# Keep eps * T / (1 - T) <= 1e7 along the transmission search so the cloner
# covariance stays well-scaled.
_T_ENVELOPE = 1e7

_EPS_CAPS = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)

_R_A_LO = 0.01
_R_A_HI = 10.0
_R_A_TOL = 1e-4
_INVPHI = 0.5 * (math.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class RootBracket:
    """Bisection bracket: endpoints with opposite objective signs."""

    lo: float
    hi: float
    tol: float
    max_iter: int = 100

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo!r}, {self.hi!r}]")
        if not self.tol > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class CriticalPoint:
    """Zero crossing of a key rate: parameter value, |rate| residual, dB losses if applicable."""

    value: float
    residual: float
    in_db: float | None = None


@dataclass(frozen=True)
class OptimalModulation:
    """Result of maximizing tolerable losses over the modulation."""

    modulation: float
    losses_db: float
    at_boundary: bool


@dataclass(frozen=True)
class AnalyticConstants:
    """Closed-form critical values in the high-modulation limit."""

    t_c_general_w: float
    t_c_collective_direct: float
    eps_c_direct_coherent: float
    eps_c_reverse_coherent: float
    eps_c_squeezed: float


def find_root(objective: Callable[[float], float], bracket: RootBracket) -> float:
    """Bisection root of ``objective`` on the bracket; returns the midpoint.

    Raises ``BracketError`` when the endpoint values have the same sign and
    ``NumericalError`` when the iteration cap is reached before |hi - lo|
    shrinks below the tolerance.
    """
    lo, hi = bracket.lo, bracket.hi
    f_lo = objective(lo)
    f_hi = objective(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}"
        )
    for _ in range(bracket.max_iter):
        if hi - lo <= bracket.tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        f_mid = objective(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise NumericalError(f"bisection did not converge in {bracket.max_iter} iterations")


def _rate_at(
    kind: str, direction: str | None, p: ProtocolParams
) -> Callable[[float, float], float]:
    def rate(t: float, eps: float) -> float:
        return key_rate(kind, p, ChannelParams(transmission=t, excess_noise=eps), direction).key_rate

    return rate


def _certified_root(
    objective: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Bisection root whose residual certifies below ``RESIDUAL_CERT``.

    A first pass runs at the requested tolerance; where the crossing is steep
    the midpoint residual can exceed the certificate, so a second pass
    tightens the bracket toward machine resolution before giving up.
    """
    root = find_root(objective, RootBracket(lo=lo, hi=hi, tol=tol))
    residual = abs(objective(root))
    if residual > RESIDUAL_CERT:
        root = find_root(objective, RootBracket(lo=lo, hi=hi, tol=_REFINE_TOL))
        residual = abs(objective(root))
    if residual > RESIDUAL_CERT:
        raise NumericalError(
            f"critical point at {root!r} fails certification: |rate| = {residual!r}"
        )
    return root, residual


def critical_transmission(
    kind: str,
    p: ProtocolParams,
    excess_noise: float = 0.0,
    direction: str | None = None,
) -> CriticalPoint:
    """Transmission at which the selected key rate crosses zero, with dB losses.

    Requires a positive rate at the high-transmission end of the search
    domain (``NoPositiveRegionError`` otherwise).  If the rate is positive on
    the whole domain there is no crossing and ``BracketError`` propagates.
    """
    rate = _rate_at(kind, direction, p)
    hi = min(_T_CEIL, _T_ENVELOPE / (_T_ENVELOPE + excess_noise))

    def objective(t: float) -> float:
        return rate(t, excess_noise)

    if objective(hi) <= 0.0:
        raise NoPositiveRegionError(
            f"key rate is not positive at T = {hi!r} for bound {kind!r}"
        )
    root, residual = _certified_root(objective, _T_FLOOR, hi, tol=1e-9)
    return CriticalPoint(value=root, residual=residual, in_db=-10.0 * math.log10(root))


def critical_noise(
    kind: str,
    p: ProtocolParams,
    transmission: float,
    direction: str | None = None,
) -> CriticalPoint:
    """Excess noise at which the selected key rate crosses zero.

    Requires a positive rate at zero excess noise (``NoPositiveRegionError``
    otherwise).  The upper bracket grows geometrically up to 64 shot-noise
    units; ``BracketError`` if no crossing exists below that.
    """
    rate = _rate_at(kind, direction, p)

    def objective(eps: float) -> float:
        return rate(transmission, eps)

    if objective(0.0) <= 0.0:
        raise NoPositiveRegionError(
            f"key rate is not positive at eps = 0, T = {transmission!r} for bound {kind!r}"
        )
    hi = None
    for cap in _EPS_CAPS:
        if objective(cap) <= 0.0:
            hi = cap
            break
    if hi is None:
        raise BracketError(f"key rate stays positive up to eps = {_EPS_CAPS[-1]}")
    root, residual = _certified_root(objective, 0.0, hi, tol=1e-9)
    return CriticalPoint(value=root, residual=residual)


def optimal_modulation(
    kind: str,
    p_template: ProtocolParams,
    excess_noise: float = 0.0,
    direction: str | None = None,
) -> OptimalModulation:
    """Modulation maximizing the tolerable losses (dB) for the given bound.

    Golden-section search on modulation in [0.01, 10] to 1e-4; comparisons
    keep the left interval on ties, so plateaus resolve to the smallest
    modulation.  An interior optimum is only expected for the ``general``
    bound.  When the search lands within 1e-2 of an endpoint the result is
    flagged ``at_boundary``; the margin is far above the search's wander
    scale on a flat objective (the tolerable losses are computed through a
    bisected frontier, so they carry ~1e-9 dB noise and the last search steps
    near a monotone edge are tie-breaks) and far below any genuine interior
    optimum of these rate functions.
    """

    def losses_db(r: float) -> float:
        pt = replace(p_template, modulation=r)
        point = critical_transmission(kind, pt, excess_noise, direction=direction)
        return point.in_db

    a, b = _R_A_LO, _R_A_HI
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    f_c, f_d = losses_db(c), losses_db(d)
    while b - a > _R_A_TOL:
        if f_c >= f_d:
            b, d, f_d = d, c, f_c
            c = b - _INVPHI * (b - a)
            f_c = losses_db(c)
        else:
            a, c, f_c = c, d, f_d
            d = a + _INVPHI * (b - a)
            f_d = losses_db(d)
    best = 0.5 * (a + b)
    margin = 100.0 * _R_A_TOL
    at_boundary = (best - _R_A_LO) <= margin or (_R_A_HI - best) <= margin
    return OptimalModulation(modulation=best, losses_db=losses_db(best), at_boundary=at_boundary)


def direct_frontier_residual(t: float, t_a: float) -> float:
    """High-modulation direct-reconciliation frontier equation, as LHS - RHS.

    T_c solves  T(1-T)(1-T + T_A(2T-1)) / (T_A + T - 2 T_A T)  =  (1-T)^2;
    T = 1/2 is a solution for every T_A.
    """
    lhs = t * (1.0 - t) * (1.0 - t + t_a * (2.0 * t - 1.0)) / (t_a + t - 2.0 * t_a * t)
    return lhs - (1.0 - t) ** 2


def direct_noise_frontier_residual(eps: float) -> float:
    """High-modulation coherent/direct noise frontier: zero where the rate vanishes.

    eps_c solves  (1/(1+eps)) ((sqrt(1+eps)+1)/(sqrt(1+eps)-1))^sqrt(1+eps) = e^2.
    """
    s = math.sqrt(1.0 + eps)
    return ((s + 1.0) / (s - 1.0)) ** s / (1.0 + eps) - math.e ** 2


def analytic_constants() -> AnalyticConstants:
    """Closed-form high-modulation critical values.

    The direct-reconciliation coherent noise threshold has no elementary
    closed form; it is the bisected root of its defining equation on
    [0.5, 1.5].  Substituting T = 1/2 into the direct frontier equation gives
    1/4 on both sides for every T_A, so the collective/direct critical
    transmission is exactly 1/2.
    """
    e2 = math.e ** 2
    eps_direct = find_root(
        direct_noise_frontier_residual, RootBracket(lo=0.5, hi=1.5, tol=1e-12, max_iter=200)
    )
    return AnalyticConstants(
        t_c_general_w=e2 / (e2 + 4.0),
        t_c_collective_direct=0.5,
        eps_c_direct_coherent=eps_direct,
        eps_c_reverse_coherent=0.5 * (math.sqrt(1.0 + 16.0 / e2) - 1.0),
        eps_c_squeezed=2.0 / math.e,
    )

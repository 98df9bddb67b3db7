"""Entanglement-based model of the Alice-Bob-Eve system.

Alice prepares a two-mode squeezed state of parameter ``modulation``, splits
her half on a beam splitter of transmittivity ``alice_transmittivity`` and
sends the other half through a channel of transmission T and excess noise
epsilon (referred to the channel input, so Bob's variance is
``T (V + eps) + 1 - T``).  Eve replaces the channel with an entangling cloner:
a beam splitter that couples the signal to half of her own two-mode squeezed
state, tuned so the channel statistics are reproduced exactly.

The resulting five-mode state is pure.  Mode roles are fixed:

    0  Alice key mode (first output of her beam splitter)
    1  Alice ancilla mode (second output; vacuum input)
    2  Bob's mode
    3  Eve's kept cloner output
    4  Eve's second two-mode-squeezed half
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleClonerError
from .gaussian import GaussianState, apply, beam_splitter, entropy_g, partial_trace

ALICE_KEY_MODE = 0
ALICE_ANCILLA_MODE = 1
BOB_MODE = 2
EVE_CLONER_MODE = 3
EVE_ANCILLA_MODE = 4
N_MODES = 5

COHERENT = "coherent"
SQUEEZED = "squeezed"
_DEFAULT_ALICE_T = {COHERENT: 0.5, SQUEEZED: 1.0}

# Largest allowed cosh(r_E) - 1; beyond this the cloner covariance is too
# ill-scaled for reliable double-precision conditioning.
_CLONER_NOISE_CAP = 1e8


@dataclass(frozen=True)
class ChannelParams:
    """Gaussian channel: transmission T in (0, 1] and input-referred excess noise."""

    transmission: float
    excess_noise: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.transmission <= 1.0:
            raise ValueError(f"transmission must lie in (0, 1], got {self.transmission!r}")
        if not self.excess_noise >= 0.0 or not math.isfinite(self.excess_noise):
            raise ValueError(f"excess noise must be finite and >= 0, got {self.excess_noise!r}")

    @property
    def reflectivity(self) -> float:
        """R = 1 - T."""
        return 1.0 - self.transmission


@dataclass(frozen=True)
class ProtocolParams:
    """Alice's source: modulation r_A, her beam-splitter transmittivity, state kind.

    The kind fixes the default ``alice_transmittivity`` (1/2 for coherent
    states, 1 for squeezed states); an explicit value overrides it.
    """

    modulation: float
    kind: str = COHERENT
    alice_transmittivity: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _DEFAULT_ALICE_T:
            raise ValueError(f"kind must be '{COHERENT}' or '{SQUEEZED}', got {self.kind!r}")
        if not self.modulation >= 0.0 or not math.isfinite(self.modulation):
            raise ValueError(f"modulation must be finite and >= 0, got {self.modulation!r}")
        t_a = self.alice_transmittivity
        if t_a is None:
            t_a = _DEFAULT_ALICE_T[self.kind]
        if not 0.0 < t_a <= 1.0:
            raise ValueError(f"alice_transmittivity must lie in (0, 1], got {t_a!r}")
        object.__setattr__(self, "alice_transmittivity", float(t_a))

    @property
    def alice_reflectivity(self) -> float:
        """R_A = 1 - T_A."""
        return 1.0 - self.alice_transmittivity


@dataclass(frozen=True)
class EntanglingCloner:
    """Eve's attack: squeezing r_E and the signal transmission T of her beam splitter.

    The beam splitter reflects the fraction 1 - T of the signal into Eve's kept
    mode, so Bob's output carries amplitude sqrt(T) of the signal.
    """

    eve_squeezing: float
    signal_transmission: float

    def __post_init__(self) -> None:
        if self.eve_squeezing < 0.0:
            raise ValueError("eve_squeezing must be non-negative")
        if not 0.0 < self.signal_transmission <= 1.0:
            raise ValueError("signal_transmission must lie in (0, 1]")

    @property
    def reflected_fraction(self) -> float:
        """Fraction of the signal diverted to Eve (1 - T)."""
        return 1.0 - self.signal_transmission


@dataclass(frozen=True)
class BivariateCov:
    """Per-quadrature classical covariance of Alice's and Bob's matched data."""

    v_a: float
    v_b: float
    c: float

    def __post_init__(self) -> None:
        if self.v_a <= 0.0 or self.v_b <= 0.0:
            raise ValueError("variances must be positive")

    @property
    def det(self) -> float:
        return self.v_a * self.v_b - self.c * self.c


def cloner_from_channel(ch: ChannelParams) -> EntanglingCloner:
    """Cloner parameters reproducing the channel: (1-T) cosh(r_E) = 1 - T + eps T.

    T = 1 with zero excess noise is the identity channel (r_E = 0); T = 1 with
    excess noise has no solution and raises ``InfeasibleClonerError``.
    """
    t, eps = ch.transmission, ch.excess_noise
    if t == 1.0:
        if eps > 0.0:
            raise InfeasibleClonerError(
                "a lossless channel with excess noise cannot be produced by an entangling cloner"
            )
        return EntanglingCloner(eve_squeezing=0.0, signal_transmission=1.0)
    ratio = eps * t / (1.0 - t)
    if ratio > _CLONER_NOISE_CAP:
        raise ValueError(
            f"channel (T={t!r}, eps={eps!r}) needs cosh(r_E) = 1 + {ratio:.3g}, "
            "too ill-scaled for double precision"
        )
    return EntanglingCloner(eve_squeezing=math.acosh(1.0 + ratio), signal_transmission=t)


def _embed_tmsv(cov: np.ndarray, mode_i: int, mode_j: int, r: float, n: int) -> None:
    """Write a two-mode squeezed pair into modes (i, j) of an xx|pp covariance."""
    c, s = math.cosh(r), math.sinh(r)
    cov[mode_i, mode_i] = cov[mode_j, mode_j] = c
    cov[mode_i, mode_j] = cov[mode_j, mode_i] = s
    cov[n + mode_i, n + mode_i] = cov[n + mode_j, n + mode_j] = c
    cov[n + mode_i, n + mode_j] = cov[n + mode_j, n + mode_i] = -s


def build_global_state(p: ProtocolParams, ch: ChannelParams) -> GaussianState:
    """The exact five-mode pure state shared by Alice, Bob and Eve.

    Construction: a two-mode squeezed pair of parameter r_A on modes (0, 2) and
    one of parameter r_E on modes (3, 4); vacuum on mode 1; Alice's beam
    splitter on (0, 1); the cloner beam splitter on (2, 3), with Bob's output
    carrying sqrt(T) of the signal.
    """
    cloner = cloner_from_channel(ch)
    cov = np.eye(2 * N_MODES)
    _embed_tmsv(cov, ALICE_KEY_MODE, BOB_MODE, p.modulation, N_MODES)
    _embed_tmsv(cov, EVE_CLONER_MODE, EVE_ANCILLA_MODE, cloner.eve_squeezing, N_MODES)
    state = GaussianState(cov)
    state = apply(
        beam_splitter(p.alice_transmittivity, ALICE_KEY_MODE, ALICE_ANCILLA_MODE, N_MODES), state
    )
    state = apply(
        beam_splitter(ch.transmission, BOB_MODE, EVE_CLONER_MODE, N_MODES), state
    )
    return state


def alice_bob_quadrature_cov(p: ProtocolParams, ch: ChannelParams) -> BivariateCov:
    """Closed-form per-quadrature covariance of Alice's and Bob's matched data.

    v_a = T_A cosh r_A + R_A, c = sqrt(T_A T) sinh r_A,
    v_b = T cosh r_A + R cosh r_E.  Matches the (x_0, x_2) sub-block of the
    global model; the (p_0, p_2) block is identical up to the sign of c.
    """
    cloner = cloner_from_channel(ch)
    cosh_ra = math.cosh(p.modulation)
    v_a = p.alice_transmittivity * cosh_ra + p.alice_reflectivity
    c = math.sqrt(p.alice_transmittivity * ch.transmission) * math.sinh(p.modulation)
    v_b = ch.transmission * cosh_ra + ch.reflectivity * math.cosh(cloner.eve_squeezing)
    return BivariateCov(v_a=v_a, v_b=v_b, c=c)


def eve_reduced_state(p: ProtocolParams, ch: ChannelParams) -> GaussianState:
    """Eve's two-mode reduction (kept cloner output plus her second half)."""
    return partial_trace(build_global_state(p, ch), (EVE_CLONER_MODE, EVE_ANCILLA_MODE))


def eve_marginal_entropy(p: ProtocolParams, ch: ChannelParams) -> float:
    """Entropy (nats) of the product of Eve's single-mode marginals.

    The marginal variances are T cosh r_E + R cosh r_A and cosh r_E.  Dropping
    the mode-mode correlation sqrt(T) sinh r_E makes this an upper bound on the
    exact joint entropy of :func:`eve_reduced_state`; the two agree when the
    excess noise is zero (r_E = 0).
    """
    cloner = cloner_from_channel(ch)
    cosh_re = math.cosh(cloner.eve_squeezing)
    nu_kept = ch.transmission * cosh_re + ch.reflectivity * math.cosh(p.modulation)
    return entropy_g(nu_kept) + entropy_g(cosh_re)


def pm_modulation_variance(p: ProtocolParams) -> float:
    """Modulation variance of the equivalent prepare-and-measure scheme.

    Coherent states: (cosh r_A - 1)/2.  Squeezed states: sinh^2 r_A / (2 cosh r_A).
    Only meaningful at the kind's default ``alice_transmittivity``; informational,
    not used by the bound computations.
    """
    if p.alice_transmittivity != _DEFAULT_ALICE_T[p.kind]:
        raise ValueError(
            f"prepare-and-measure equivalence needs alice_transmittivity "
            f"{_DEFAULT_ALICE_T[p.kind]} for kind {p.kind!r}, got {p.alice_transmittivity!r}"
        )
    if p.kind == COHERENT:
        return 0.5 * (math.cosh(p.modulation) - 1.0)
    return math.sinh(p.modulation) ** 2 / (2.0 * math.cosh(p.modulation))

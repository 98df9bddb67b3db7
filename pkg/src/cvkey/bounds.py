"""Mutual information and secret-key-rate bounds.

Three bounds are computed, all in nats per matched channel use (sifting
prefactors are not applied; zero crossings do not depend on them):

* ``general``:     K = I_AB - S(rho_E), valid against arbitrary attacks.
* ``general_w``:   same, but Alice and Bob publish the second measured
                   quadrature (coherent-state protocol only), which conditions
                   Eve's entropy and can only lower it.
* ``collective``:  K = I_AB - chi, with chi the Holevo quantity of Eve's
                   ensemble conditioned on the key variable; the key variable
                   is Alice's (direct reconciliation) or Bob's (reverse).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .gaussian import (
    QuadratureSelector,
    condition_on_quadrature,
    partial_trace,
    von_neumann_entropy,
)
from .protocol import (
    ALICE_KEY_MODE,
    ALICE_ANCILLA_MODE,
    BOB_MODE,
    COHERENT,
    EVE_ANCILLA_MODE,
    EVE_CLONER_MODE,
    BivariateCov,
    ChannelParams,
    ProtocolParams,
    alice_bob_quadrature_cov,
    build_global_state,
    eve_reduced_state,
)

GENERAL = "general"
GENERAL_W = "general_w"
COLLECTIVE = "collective"
BOUND_KINDS = (GENERAL, GENERAL_W, COLLECTIVE)

DIRECT = "direct"
REVERSE = "reverse"
DIRECTIONS = (DIRECT, REVERSE)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class KeyRateReport:
    """One evaluated bound: I_AB, Eve's term, their difference, and the inputs."""

    i_ab: float
    eve_term: float
    key_rate: float
    base: str
    bound: str
    protocol: ProtocolParams
    channel: ChannelParams
    direction: str | None = None

    def in_bits(self) -> "KeyRateReport":
        """Same report with all three quantities divided by ln 2."""
        if self.base == "bits":
            return self
        return replace(
            self,
            i_ab=self.i_ab / LN2,
            eve_term=self.eve_term / LN2,
            key_rate=self.key_rate / LN2,
            base="bits",
        )


def mutual_information(cov: BivariateCov) -> float:
    """Mutual information of a zero-mean bivariate Gaussian, in nats.

    I = (1/2) ln( v_a v_b / (v_a v_b - c^2) ).
    """
    det = cov.det
    if det <= 0.0:
        raise ValueError(f"covariance determinant must be positive, got {det!r}")
    return 0.5 * math.log(cov.v_a * cov.v_b / det)


def _eve_entropy(p: ProtocolParams, ch: ChannelParams) -> float:
    return von_neumann_entropy(eve_reduced_state(p, ch))


def _eve_entropy_given_homodyne(p: ProtocolParams, ch: ChannelParams, mode: int, quadrature: str) -> float:
    """Eve's entropy after one quadrature of an Alice/Bob mode is measured.

    The measured mode is removed by the conditioning, so Eve's modes shift
    down by one (the measured mode index is always below Eve's).
    """
    state = build_global_state(p, ch)
    conditioned = condition_on_quadrature(state, QuadratureSelector(mode, quadrature))
    eve = partial_trace(conditioned, (EVE_CLONER_MODE - 1, EVE_ANCILLA_MODE - 1))
    return von_neumann_entropy(eve)


def key_rate_general(p: ProtocolParams, ch: ChannelParams) -> KeyRateReport:
    """Attack-independent bound K = I_AB - S(rho_AB).

    S(rho_AB) equals S(rho_E) because the global state is pure; Eve's two-mode
    reduction gives the smaller eigenproblem.
    """
    i_ab = mutual_information(alice_bob_quadrature_cov(p, ch))
    eve_term = _eve_entropy(p, ch)
    return KeyRateReport(
        i_ab=i_ab,
        eve_term=eve_term,
        key_rate=i_ab - eve_term,
        base="nats",
        bound=GENERAL,
        protocol=p,
        channel=ch,
    )


def key_rate_general_w(p: ProtocolParams, ch: ChannelParams) -> KeyRateReport:
    """General bound with the second measured quadrature made public.

    Alice's ancilla-mode P quadrature (the quadrature she measures but does
    not key on) is disclosed, so Eve's term becomes the conditional entropy
    S(rho_E | W).  The mutual information is unchanged.  Requires the
    coherent-state protocol: the squeezed protocol has no second measured
    quadrature.
    """
    if p.kind != COHERENT:
        raise ValueError("general_w requires the coherent-state protocol")
    i_ab = mutual_information(alice_bob_quadrature_cov(p, ch))
    eve_term = _eve_entropy_given_homodyne(p, ch, ALICE_ANCILLA_MODE, "P")
    return KeyRateReport(
        i_ab=i_ab,
        eve_term=eve_term,
        key_rate=i_ab - eve_term,
        base="nats",
        bound=GENERAL_W,
        protocol=p,
        channel=ch,
    )


def holevo(p: ProtocolParams, ch: ChannelParams, direction: str) -> float:
    """Holevo quantity of Eve's ensemble labelled by the key variable, in nats.

    chi = S(rho_E) - S(rho_E | m), where m is the homodyne outcome of the key
    quadrature: Alice's key-mode X for direct reconciliation, Bob's X for
    reverse.  The conditional covariance is outcome-independent, so the
    average over outcomes collapses to a single conditional entropy.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    mode = ALICE_KEY_MODE if direction == DIRECT else BOB_MODE
    chi = _eve_entropy(p, ch) - _eve_entropy_given_homodyne(p, ch, mode, "X")
    return max(0.0, chi)


def key_rate_collective(p: ProtocolParams, ch: ChannelParams, direction: str) -> KeyRateReport:
    """Collective-attack bound K = I_AB - chi for the given reconciliation direction."""
    i_ab = mutual_information(alice_bob_quadrature_cov(p, ch))
    eve_term = holevo(p, ch, direction)
    return KeyRateReport(
        i_ab=i_ab,
        eve_term=eve_term,
        key_rate=i_ab - eve_term,
        base="nats",
        bound=COLLECTIVE,
        protocol=p,
        channel=ch,
        direction=direction,
    )


def key_rate(kind: str, p: ProtocolParams, ch: ChannelParams, direction: str | None = None) -> KeyRateReport:
    """Dispatch to the requested bound; direction is required iff kind is collective."""
    if kind not in BOUND_KINDS:
        raise ValueError(f"bound must be one of {BOUND_KINDS}, got {kind!r}")
    if kind == COLLECTIVE:
        if direction is None:
            raise ValueError("collective bound needs a reconciliation direction")
        return key_rate_collective(p, ch, direction)
    if direction is not None:
        raise ValueError(f"direction is only meaningful for the collective bound, got {direction!r}")
    if kind == GENERAL:
        return key_rate_general(p, ch)
    return key_rate_general_w(p, ch)

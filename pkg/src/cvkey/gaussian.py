"""Exact algebra of zero-mean Gaussian states on a few optical modes.

Conventions used throughout the package:

* Shot-noise units: the vacuum quadrature variance equals 1.
* Covariance matrices use the xx|pp block layout, i.e. the quadrature
  vector is (x_1, ..., x_N, p_1, ..., p_N).  The symplectic form is then
  ``Omega = [[0, I], [-I, 0]]``.
* All states are zero-mean; displacement vectors are never tracked.

Entropies are returned in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
PAIRING_RTOL = 1e-8
PINV_RCOND = 1e-12


def symplectic_form(n_modes: int) -> np.ndarray:
    """Canonical symplectic form for ``n_modes`` modes in xx|pp layout."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def _freeze(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean N-mode Gaussian state, held as its 2N x 2N covariance matrix."""

    cov: np.ndarray

    def __post_init__(self) -> None:
        cov = np.asarray(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 != 0 or cov.shape[0] == 0:
            raise ValueError(f"covariance must be square with even size, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)):
            raise ValueError("covariance contains non-finite entries")
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise ValueError("covariance is not symmetric")
        object.__setattr__(self, "cov", _freeze(0.5 * (cov + cov.T)))

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Linear quadrature map S with S Omega S^T = Omega (xx|pp layout)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2 != 0:
            raise ValueError(f"transform must be square with even size, got shape {mat.shape}")
        omega = symplectic_form(mat.shape[0] // 2)
        if np.max(np.abs(mat @ omega @ mat.T - omega)) > SYMPLECTIC_TOL:
            raise ValueError("matrix does not preserve the symplectic form")
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class QuadratureSelector:
    """One measured quadrature: mode index plus 'X' or 'P'."""

    mode: int
    quadrature: str

    def __post_init__(self) -> None:
        if self.quadrature not in ("X", "P"):
            raise ValueError(f"quadrature must be 'X' or 'P', got {self.quadrature!r}")
        if self.mode < 0:
            raise ValueError("mode index must be non-negative")


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues of a state, in descending order."""

    values: tuple[float, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


def vacuum_state(n_modes: int) -> GaussianState:
    """N-mode vacuum: identity covariance."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    return GaussianState(np.eye(2 * n_modes))


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with local quadrature variance cosh(r).

    X block is [[cosh r, sinh r], [sinh r, cosh r]]; the P block carries the
    opposite correlation sign.  r = 0 gives the two-mode vacuum.
    """
    if r < 0:
        raise ValueError("squeezing parameter must be non-negative")
    c, s = math.cosh(r), math.sinh(r)
    x_block = np.array([[c, s], [s, c]])
    p_block = np.array([[c, -s], [-s, c]])
    zero = np.zeros((2, 2))
    return GaussianState(np.block([[x_block, zero], [zero, p_block]]))


def beam_splitter(transmittivity: float, mode_a: int, mode_b: int, n_modes: int) -> SymplecticTransform:
    """Beam splitter between two modes, identical on the X and P blocks.

    Output a receives sqrt(T) of input a plus sqrt(1-T) of input b; output b
    receives -sqrt(1-T) of input a plus sqrt(T) of input b.  The reflected-path
    minus sign is a fixed convention; covariances of the states built here do
    not depend on it.
    """
    if not 0.0 <= transmittivity <= 1.0:
        raise ValueError(f"transmittivity must lie in [0, 1], got {transmittivity}")
    if mode_a == mode_b:
        raise ValueError("beam splitter needs two distinct modes")
    if not (0 <= mode_a < n_modes and 0 <= mode_b < n_modes):
        raise ValueError("mode index out of range")
    t = math.sqrt(transmittivity)
    rho = math.sqrt(1.0 - transmittivity)
    block = np.eye(n_modes)
    block[mode_a, mode_a] = t
    block[mode_b, mode_b] = t
    block[mode_a, mode_b] = rho
    block[mode_b, mode_a] = -rho
    zero = np.zeros((n_modes, n_modes))
    return SymplecticTransform(np.block([[block, zero], [zero, block]]))


def apply(transform: SymplecticTransform, state: GaussianState) -> GaussianState:
    """Covariance congruence S cov S^T, re-symmetrized against round-off."""
    if transform.n_modes != state.n_modes:
        raise ValueError(
            f"transform acts on {transform.n_modes} modes but state has {state.n_modes}"
        )
    cov = transform.matrix @ state.cov @ transform.matrix.T
    return GaussianState(0.5 * (cov + cov.T))


def partial_trace(state: GaussianState, keep: tuple[int, ...] | list[int]) -> GaussianState:
    """Reduced state on the given modes, re-indexed in ``keep`` order."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep set must be non-empty")
    if len(set(keep)) != len(keep):
        raise ValueError("keep indices must be distinct")
    n = state.n_modes
    if any(not 0 <= k < n for k in keep):
        raise ValueError("keep index out of range")
    idx = keep + [n + k for k in keep]
    return GaussianState(state.cov[np.ix_(idx, idx)])


def condition_on_quadrature(state: GaussianState, sel: QuadratureSelector) -> GaussianState:
    """State of the remaining modes after a homodyne detection of one quadrature.

    The update is the Schur complement of the measured quadrature: with the
    covariance partitioned into the kept modes A and the measured mode B,

        cov_A' = cov_A - C (Pi cov_B Pi)^+ C^T,

    where Pi projects onto the measured quadrature and + is the Moore-Penrose
    pseudoinverse (singular values below ``PINV_RCOND`` of the largest are
    dropped).  The conditional covariance does not depend on the measurement
    outcome, so no outcome is taken or returned.  The measured mode is removed;
    modes after it shift down by one.
    """
    n = state.n_modes
    if not 0 <= sel.mode < n:
        raise ValueError(f"mode {sel.mode} out of range for {n}-mode state")
    if n == 1:
        raise ValueError("conditioning would leave an empty state")
    rest = [i for i in range(n) if i != sel.mode]
    idx_a = rest + [n + i for i in rest]
    idx_b = [sel.mode, n + sel.mode]
    cov_a = state.cov[np.ix_(idx_a, idx_a)]
    cross = state.cov[np.ix_(idx_a, idx_b)]
    cov_b = state.cov[np.ix_(idx_b, idx_b)]
    pi = np.diag([1.0, 0.0]) if sel.quadrature == "X" else np.diag([0.0, 1.0])
    reduced = cross @ np.linalg.pinv(pi @ cov_b @ pi, rcond=PINV_RCOND) @ cross.T
    cov = cov_a - reduced
    return GaussianState(0.5 * (cov + cov.T))


def symplectic_eigenvalues(state: GaussianState) -> SymplecticSpectrum:
    """Symplectic spectrum: positive square roots of the eigenvalues of -(Omega cov)^2.

    Each eigenvalue of -(Omega cov)^2 occurs twice; the sorted values are
    matched into pairs within ``PAIRING_RTOL`` relative and one representative
    (the pair mean) is kept per mode.  Raises ``NumericalError`` if pairing
    fails.  No physicality gate here: for physical states built at very large
    squeezing, plain double-precision construction already perturbs the
    spectrum at the ``norm(cov) * 1e-10`` scale, so callers that need nu >= 1
    must enforce it at their own tolerance.
    """
    omega_cov = symplectic_form(state.n_modes) @ state.cov
    eigs = np.linalg.eigvals(-(omega_cov @ omega_cov))
    squared = np.sort(np.real(eigs))[::-1]
    values = np.sqrt(np.maximum(squared, 0.0))
    spectrum = []
    for k in range(state.n_modes):
        a, b = values[2 * k], values[2 * k + 1]
        if abs(a - b) > PAIRING_RTOL * max(abs(a), abs(b), 1.0):
            raise NumericalError(
                f"symplectic eigenvalue pairing failed: {a!r} vs {b!r}"
            )
        spectrum.append(0.5 * (a + b))
    return SymplecticSpectrum(tuple(spectrum))


def entropy_g(nu: float) -> float:
    """Entropy contribution of one symplectic eigenvalue, in nats.

    g(nu) = ((nu+1)/2) ln((nu+1)/2) - ((nu-1)/2) ln((nu-1)/2), with g(1) = 0
    by continuity.  Values within ``PHYSICALITY_TOL`` below 1 are clamped to 1.
    """
    if nu < 1.0 - PHYSICALITY_TOL:
        raise ValueError(f"symplectic eigenvalue must be >= 1, got {nu!r}")
    if nu - 1.0 < 1e-12:
        return 0.0
    up = 0.5 * (nu + 1.0)
    dn = 0.5 * (nu - 1.0)
    return up * math.log(up) - dn * math.log(dn)


def von_neumann_entropy(state: GaussianState) -> float:
    """Total entropy in nats: sum of g over the symplectic spectrum."""
    return sum(entropy_g(nu) for nu in symplectic_eigenvalues(state))

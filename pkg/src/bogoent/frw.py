"""Pair creation of a charged scalar field in a smoothly expanding universe.

The conformally flat background interpolates between asymptotically flat
in and out regions with a tanh profile of rapidity rho and amplitude
epsilon, so the conformal scale factor satisfies C(-inf) = 1 and
C(+inf) = 1 + 2 epsilon. The field transformation couples only modes of
opposite momenta (k, -k), which makes the continuous spectrum effectively
discrete: the out-vacuum restricted to a pair is a two-mode squeezed state
whose squeezing is set by the single Bogoliubov coefficient magnitude
|beta_k|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .gaussian import EntanglementReport, GaussianState



@dataclass(frozen=True)
class FRWConfig:
    """Expansion profile and mode parameters, in natural units."""

    epsilon: float
    rho: float
    mass: float
    k: float

    def __post_init__(self) -> None:
        # epsilon = 0 is the regular no-expansion limit (no particle creation).
        if self.epsilon < 0.0:
            raise ValueError("expansion amplitude epsilon must be >= 0")
        if self.rho <= 0.0:
            raise ValueError("expansion rapidity rho must be > 0")
        if self.mass < 0.0:
            raise ValueError("mass must be >= 0")
        if self.k <= 0.0:
            raise ValueError("mode momentum k must be > 0")

    @property
    def omega_in(self) -> float:
        return float(np.hypot(self.k, self.mass))

    @property
    def omega_out(self) -> float:
        return float(np.sqrt(self.k**2 + self.mass**2 * (1.0 + 2.0 * self.epsilon)))


class PairCoefficients(NamedTuple):
    """Squared Bogoliubov coefficient magnitudes of one momentum pair."""

    alpha_sq: float
    beta_sq: float


def _log_sinh_tail(x: float) -> float:
    """log(sinh x) - x + log 2 = log(1 - exp(-2x)), accurate for all x > 0."""
    return float(np.log(-np.expm1(-2.0 * x)))


def frw_coefficients(config: FRWConfig) -> PairCoefficients:
    """Coefficient magnitudes of the tanh expansion profile.

    With omega_pm = (omega_out +- omega_in)/2,

        |alpha_k|^2 = sinh^2(pi omega_+ / rho) / (sinh(pi omega_in / rho)
                                                  sinh(pi omega_out / rho))
        |beta_k|^2  = sinh^2(pi omega_- / rho) / (same denominator)

    evaluated entirely in the log domain through sinh x = e^x (1 - e^-2x)/2,
    so large omega / rho never overflows. The linear parts of the exponents
    cancel algebraically (2 omega_+ = omega_in + omega_out exactly), which
    keeps the hyperbolic identity |alpha|^2 - |beta|^2 = 1 at machine
    precision even for extreme arguments. Massless or unexpanded
    configurations give |beta|^2 = 0 (no particle creation).
    """
    w_in, w_out = config.omega_in, config.omega_out
    w_plus = 0.5 * (w_out + w_in)
    w_minus = 0.5 * (w_out - w_in)
    c = np.pi / config.rho
    tail_den = _log_sinh_tail(c * w_in) + _log_sinh_tail(c * w_out)
    alpha_sq = float(np.exp(2.0 * _log_sinh_tail(c * w_plus) - tail_den))
    if w_minus == 0.0:
        return PairCoefficients(alpha_sq, 0.0)
    beta_sq = float(np.exp(
        -2.0 * c * w_in + 2.0 * _log_sinh_tail(c * w_minus) - tail_den
    ))
    return PairCoefficients(alpha_sq, beta_sq)


def frw_pair_state(config: FRWConfig) -> GaussianState:
    """Out-region state of the pair (k, -k): two-mode squeezed vacuum.

    The squeezing parameter is r = arsinh|beta_k|, giving covariance
    [[cosh 2r 1, sinh 2r Z], [sinh 2r Z, cosh 2r 1]] with Z = diag(1, -1).
    Mode labels 1 and 2 stand for +k and -k.
    """
    beta = np.sqrt(frw_coefficients(config).beta_sq)
    r = np.arcsinh(beta)
    c2, s2 = np.cosh(2.0 * r), np.sinh(2.0 * r)
    z = np.diag([1.0, -1.0])
    cov = np.block([[c2 * np.eye(2), s2 * z], [s2 * z, c2 * np.eye(2)]])
    return GaussianState((1, 2), cov)


def frw_negativity(config: FRWConfig) -> EntanglementReport:
    """Pair entanglement in closed form: nu_minus = (|alpha| - |beta|)^2.

    Equals exp(-2r) for the two-mode squeezed pair state, so the full
    covariance pipeline applied to :func:`frw_pair_state` must reproduce it.
    """
    coeff = frw_coefficients(config)
    a, b = np.sqrt(coeff.alpha_sq), np.sqrt(coeff.beta_sq)
    nu_minus = float((a - b) ** 2)
    neg = max(0.0, (1.0 - nu_minus) / (2.0 * nu_minus))
    return EntanglementReport(
        nu_minus=nu_minus,
        negativity=neg,
        log_negativity=float(max(0.0, -np.log(nu_minus))),
        det_cov=1.0,
    )

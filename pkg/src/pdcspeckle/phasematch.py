"""Closed-form coherence-area predictions from pump and crystal parameters.

Two widths shape the far-field coherence area of the twin beams: the Fourier
transform of the Gaussian pump (HWHM ``sqrt(2 ln 2) / w_p`` in the momentum
sum q1+q2) and the sinc phase-matching kernel along the radial detuning.  Both
widths are quoted as HWHM of the squared (intensity-level) factor.  The
narrower of the two sets the coherence radius.

Longitudinal detuning is parameterized, not derived from dispersion data: the
linear and quadratic coefficients are fixed so that the sinc^2 HWHM reproduces
the closed forms in :func:`sinc_hwhm` in each regime by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import COLLINEAR, NONCOLLINEAR, CrystalConfig, DetectorConfig, PumpConfig
from .errors import RegimeError

SQRT_2LN2 = math.sqrt(2.0 * math.log(2.0))

# Intensity autocorrelation HWHM of a Gaussian-envelope speckle field exceeds
# the pair-coincidence HWHM by exactly sqrt(2) (|FT[g^2]|^2 vs |F|^2 widths).
AUTOCORR_FACTOR = math.sqrt(2.0)


def _sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    return np.sinc(np.asarray(x) / np.pi)


def gaussian_hwhm(pump: PumpConfig) -> float:
    """HWHM (rad/m) of the pump-envelope factor of the pair intensity."""
    if pump.waist <= 0:
        raise RegimeError("pump.waist: must be positive")
    return SQRT_2LN2 / pump.waist


def sinc_hwhm(crystal: CrystalConfig, regime: str | None = None) -> float:
    """HWHM (rad/m) of the sinc^2 phase-matching factor.

    Noncollinear (linear detuning dominates): ``pf / (l tan theta_0)``.
    Collinear (quadratic detuning): ``pf * sqrt(2 pi / (lambda l))``.
    ``pf`` is the printed prefactor (2.78 by default, overridable).
    """
    regime = regime or crystal.regime
    pf = crystal.sinc_prefactor
    if regime == NONCOLLINEAR:
        if crystal.emission_angle <= 0:
            raise RegimeError(
                "crystal.emission_angle: noncollinear regime requires theta_0 > 0")
        return pf / (crystal.length * math.tan(crystal.emission_angle))
    if regime == COLLINEAR:
        return pf * math.sqrt(2.0 * math.pi
                              / (crystal.degenerate_wavelength * crystal.length))
    raise RegimeError(f"crystal.regime: unknown regime {regime!r}")


def matching_ring_q(crystal: CrystalConfig) -> float:
    """|q| of the exact phase-matching ring: 2 pi tan(theta_0) / lambda."""
    return 2.0 * math.pi * math.tan(crystal.emission_angle) / crystal.degenerate_wavelength


def dispersion_coefficients(crystal: CrystalConfig) -> tuple[float, float]:
    """Default (c1, c2) of the radial detuning expansion.

    Chosen so sinc^2(dk l / 2) reaches half maximum (argument pf/2) exactly at
    the widths returned by :func:`sinc_hwhm`:

    * c1 = tan(theta_0) matches the noncollinear width pf/(l tan theta_0);
    * c2 = lambda/(2 pi pf) matches the collinear width pf sqrt(2 pi/(lambda l)).
    """
    c1 = math.tan(crystal.emission_angle)
    c2 = crystal.degenerate_wavelength / (2.0 * math.pi * crystal.sinc_prefactor)
    return c1, c2


def delta_k(q1, q2, omega_detuning, crystal: CrystalConfig,
            c1: float | None = None, c2: float | None = None,
            c_omega: float = 0.0):
    """Longitudinal wave detuning expanded around the matching ring.

    ``dk = c1 (|q| - q0) + c2 (|q| - q0)^2 + c_omega * Omega`` with q the
    symmetric combination (q1 - q2)/2 and q0 the matching-ring radius.
    q1, q2 broadcast as (..., 2) arrays of transverse wavevectors (rad/m).
    The default c_omega = 0 keeps the pipeline at frequency degeneracy.
    """
    if c1 is None or c2 is None:
        d1, d2 = dispersion_coefficients(crystal)
        c1 = d1 if c1 is None else c1
        c2 = d2 if c2 is None else c2
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    q_sym = 0.5 * (q1 - q2)
    r = np.sqrt(np.sum(q_sym * q_sym, axis=-1)) - matching_ring_q(crystal)
    return c1 * r + c2 * r * r + c_omega * np.asarray(omega_detuning)


def pair_amplitude(q1, q2, omega_detuning, pump: PumpConfig,
                   crystal: CrystalConfig, gain: float = 1.0,
                   c1: float | None = None, c2: float | None = None,
                   c_omega: float = 0.0):
    """Two-photon amplitude: gain * sinc(dk l / 2) * exp(-|q1+q2|^2 w_p^2 / 4).

    Maximal (= gain) at q1 = -q2 on the matching ring; |result| <= gain.
    """
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    dk = delta_k(q1, q2, omega_detuning, crystal, c1=c1, c2=c2, c_omega=c_omega)
    qsum = q1 + q2
    gauss = np.exp(-np.sum(qsum * qsum, axis=-1) * pump.waist ** 2 / 4.0)
    return gain * _sinc(dk * crystal.length / 2.0) * gauss


@dataclass(frozen=True)
class CoherencePrediction:
    """Predicted low-gain coherence widths for one setup."""

    delta_q_gauss: float        # pump factor HWHM, rad/m
    delta_q_sinc: float         # phase-matching factor HWHM, rad/m
    regime: str
    width_ratio: float          # delta_q_gauss / delta_q_sinc
    coherence_radius_q: float   # min of the two widths, rad/m
    coherence_radius_pixels: float
    autocorr_radius_pixels: float  # implied intensity-autocorrelation HWHM


def q_to_detector_scale(detector: DetectorConfig, wavelength: float) -> float:
    """Far-field mapping x = (lambda f / 2 pi) q: meters per (rad/m)."""
    return wavelength * detector.focal_length / (2.0 * math.pi)


def predict_coherence(pump: PumpConfig, crystal: CrystalConfig,
                      detector: DetectorConfig) -> CoherencePrediction:
    """Coherence radius from the narrower of the pump and sinc factors.

    The pixel radius uses the f-f mapping at the degenerate wavelength; it is
    invariant under simultaneous scaling of focal length and pixel pitch.
    """
    dq_gauss = gaussian_hwhm(pump)
    dq_sinc = sinc_hwhm(crystal)
    radius_q = min(dq_gauss, dq_sinc)
    scale = q_to_detector_scale(detector, crystal.degenerate_wavelength)
    radius_px = scale * radius_q / detector.pixel_pitch
    return CoherencePrediction(
        delta_q_gauss=dq_gauss,
        delta_q_sinc=dq_sinc,
        regime=crystal.regime,
        width_ratio=dq_gauss / dq_sinc,
        coherence_radius_q=radius_q,
        coherence_radius_pixels=radius_px,
        autocorr_radius_pixels=AUTOCORR_FACTOR * radius_px,
    )

"""
Output field of a nondegenerate parametric oscillator below threshold.

The oscillator has two intracavity modes coupled at nonlinear rate alpha,
an output-coupling rate zeta_b, and a spurious loss rate kappa_0.  Below
threshold (alpha < zeta_b + kappa_0) its output is a stationary two-mode
squeezed field with exponential memory.  Over the output operator vector
r = (r_I, r_II, r_I+, r_II+) the two-time correlations read

    C_out(tau) = delta(tau) * Y
               + (alpha*zeta_b/2) * sum_i exp(-abar_i |tau|) * W_i / abar_i,

with decay rates abar_(+/-) = zeta_b + kappa_0 +/- alpha, and the spectral
density follows by Fourier transform as a pair of Lorentzians,

    C_out(omega) = Y + sum_i alpha*zeta_b * W_i / (abar_i^2 + omega^2).

Collective quadratures (r_I -/+ r_II)/sqrt(2) diagonalize the field: their
noise spectra are the squeezing and anti-squeezing spectra

    S(omega) = 1 - 4*alpha*zeta_b / (abar_+^2 + omega^2),
    T(omega) = 1 + 4*alpha*zeta_b / (abar_-^2 + omega^2),

and S(omega) is also the smallest partially transposed symplectic eigenvalue
of C_out(omega), so the entanglement carried by the (omega, -omega) output
pair is max{0, -ln S(omega)}.  S*T = 1 exactly when kappa_0 = 0 (pure
squeezing); spurious loss makes the product exceed 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedInputError, ThresholdError

#: Relative margin below threshold required of every parameter set.
THRESHOLD_MARGIN = 1e-9

#: Commutator part of the output correlations: <r r+> entries only.
Y_MATRIX = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
    ],
    dtype=float,
)

#: Squeezing pattern decaying at rate abar_plus.
W_PLUS = np.array(
    [
        [0, 1, -1, 0],
        [1, 0, 0, -1],
        [-1, 0, 0, 1],
        [0, -1, 1, 0],
    ],
    dtype=float,
)

#: Anti-squeezing pattern decaying at rate abar_minus.
W_MINUS = np.array(
    [
        [0, 1, 1, 0],
        [1, 0, 0, 1],
        [1, 0, 0, 1],
        [0, 1, 1, 0],
    ],
    dtype=float,
)

#: Coefficients of the squeezed collective quadrature (X_I - X_II)/sqrt(2)
#: on (r_I, r_II, r_I+, r_II+).
U_SQUEEZED = np.array([1.0, -1.0, 1.0, -1.0], dtype=complex)

#: Coefficients of the anti-squeezed collective quadrature (P_I - P_II)/sqrt(2).
V_ANTISQUEEZED = 1j * np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class PoParams:
    """
    Parametric-oscillator parameters: nonlinear coupling ``alpha``, output
    coupling ``zeta_b``, spurious loss ``kappa_0``.  Construction enforces
    nonnegative rates and strictly below-threshold operation.
    """

    alpha: float
    zeta_b: float
    kappa_0: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha", "zeta_b", "kappa_0"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise MalformedInputError(f"{name} must be finite, got {value!r}")
            if value < 0.0:
                raise MalformedInputError(f"{name} must be nonnegative, got {value!r}")
        if self.zeta_b + self.kappa_0 <= 0.0:
            raise MalformedInputError("zeta_b + kappa_0 must be positive")
        total = self.zeta_b + self.kappa_0
        if total - self.alpha < THRESHOLD_MARGIN * total:
            raise ThresholdError(
                f"oscillator at or above threshold: alpha_bar_minus = "
                f"{total - self.alpha:.6g} violates alpha < zeta_b + kappa_0 = {total:.6g} "
                f"(margin {THRESHOLD_MARGIN:g})"
            )


def decay_rates(p: PoParams) -> tuple[float, float]:
    """Memory decay rates (abar_plus, abar_minus) = zeta_b + kappa_0 +/- alpha."""
    total = p.zeta_b + p.kappa_0
    return total + p.alpha, total - p.alpha


def output_corr_tau(p: PoParams, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Stationary output correlations at lag ``tau``, split into the
    delta-function weight (always Y) and the smooth exponential part.
    """
    a_plus, a_minus = decay_rates(p)
    pref = 0.5 * p.alpha * p.zeta_b
    smooth = pref * (
        np.exp(-a_plus * abs(tau)) / a_plus * W_PLUS
        + np.exp(-a_minus * abs(tau)) / a_minus * W_MINUS
    )
    return Y_MATRIX.copy(), smooth


def spectral_density(p: PoParams, omega: float) -> np.ndarray:
    """
    Spectral density of the output field at frequency ``omega``: a 4x4 real
    matrix, valid as the second-moment matrix of the (omega, -omega) output
    mode pair.
    """
    a_plus, a_minus = decay_rates(p)
    c_plus = p.alpha * p.zeta_b / (a_plus**2 + omega**2)
    c_minus = p.alpha * p.zeta_b / (a_minus**2 + omega**2)
    return Y_MATRIX + c_plus * W_PLUS + c_minus * W_MINUS


def _spectrum(omega, value_of):
    grid = np.asarray(omega, dtype=float)
    out = value_of(grid)
    if grid.ndim == 0:
        return float(out)
    return out


def squeezing_spectrum(p: PoParams, omega) -> float | np.ndarray:
    """Noise spectrum S(omega) of the squeezed collective quadrature."""
    a_plus, _ = decay_rates(p)
    return _spectrum(omega, lambda w: 1.0 - 4.0 * p.alpha * p.zeta_b / (a_plus**2 + w**2))


def antisqueezing_spectrum(p: PoParams, omega) -> float | np.ndarray:
    """Noise spectrum T(omega) of the anti-squeezed collective quadrature."""
    _, a_minus = decay_rates(p)
    return _spectrum(omega, lambda w: 1.0 + 4.0 * p.alpha * p.zeta_b / (a_minus**2 + w**2))


def collective_quadrature_noise(p: PoParams, omega: float, coeffs: np.ndarray) -> float:
    """
    Noise spectral density 0.5 * c^T C_out(omega) c of the collective
    quadrature with (unnormalized) coefficient vector ``coeffs`` on
    (r_I, r_II, r_I+, r_II+); the 0.5 carries the 1/sqrt(2) normalization
    of the quadrature itself.  Reproduces S and T for ``U_SQUEEZED`` and
    ``V_ANTISQUEEZED``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (4,):
        raise MalformedInputError(f"expected 4 quadrature coefficients, got shape {coeffs.shape}")
    value = 0.5 * coeffs @ spectral_density(p, omega) @ coeffs
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise MalformedInputError(
            f"quadrature coefficients give a complex noise value {value:.6g}"
        )
    return float(value.real)


def reservoir_en(p: PoParams, omega) -> float | np.ndarray:
    """
    Logarithmic negativity max{0, -ln S(omega)} of the (omega, -omega)
    output pair.
    """
    def value_of(w):
        s = 1.0 - 4.0 * p.alpha * p.zeta_b / ((p.zeta_b + p.kappa_0 + p.alpha) ** 2 + w**2)
        return np.maximum(0.0, -np.log(s))

    return _spectrum(omega, value_of)


def default_omega_grid(p: PoParams, n_points: int = 801) -> np.ndarray:
    """Uniform grid over [-2*abar_plus, 2*abar_plus], wide enough for both Lorentzians."""
    if n_points < 2:
        raise MalformedInputError(f"n_points must be at least 2, got {n_points}")
    a_plus, _ = decay_rates(p)
    return np.linspace(-2.0 * a_plus, 2.0 * a_plus, n_points)


@dataclass(frozen=True)
class SpectralCurve:
    """One scalar spectrum sampled on a strictly increasing frequency grid."""

    omega: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        omega = np.asarray(self.omega, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if omega.ndim != 1 or omega.shape != values.shape:
            raise MalformedInputError(
                f"grid and values must be 1-d and congruent, got {omega.shape} vs {values.shape}"
            )
        if omega.size >= 2 and not np.all(np.diff(omega) > 0):
            raise MalformedInputError("frequency grid must be strictly increasing")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(values))):
            raise MalformedInputError("spectral curve contains non-finite entries")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

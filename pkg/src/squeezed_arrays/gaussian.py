"""
Two-mode Gaussian entanglement primitives.

A state of two bosonic modes is carried around as the 4x4 second-moment
matrix C[j, k] = <v_j v_k> over the operator vector v = (a1, a2, a1+, a2+),
where + marks the creation operator.  Entanglement between the modes is
quantified by the logarithmic negativity

    E_N = max{0, -ln nu_minus},

with nu_minus the smallest symplectic eigenvalue of the quadrature
covariance of the partially transposed state.  The quadrature map used here
flips the sign of the second mode's momentum row, so a single congruence
performs both the change to quadratures and the partial transposition.
Vacuum variance is 1 in this convention (vacuum covariance = identity).
"""

from __future__ import annotations

import numpy as np

from .errors import MalformedInputError, NumericalError

#: Imaginary residue above which a covariance is rejected as malformed.
IMAG_TOL = 1e-9

# Rows build (X1, P1, X2, P2) from (a1, a2, a1+, a2+).  P2 = i(a2+ - a2)
# carries the opposite sign to P1 = i(a1 - a1+): this momentum flip is the
# partial transposition of mode 2.
QUAD_TRANSFORM = np.array(
    [
        [1, 0, 1, 0],
        [1j, 0, -1j, 0],
        [0, 1, 0, 1],
        [0, -1j, 0, 1j],
    ],
    dtype=complex,
)

# Undoes the momentum flip, recovering the covariance of the state itself.
_P2_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])

#: Symplectic form in (X1, P1, X2, P2) order.
OMEGA_TWO_MODE = np.array(
    [
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, -1, 0],
    ],
    dtype=float,
)


def vacuum_two_mode() -> np.ndarray:
    """Second-moment matrix of the two-mode vacuum: only <a a+> = 1 entries."""
    c = np.zeros((4, 4), dtype=complex)
    c[0, 2] = 1.0
    c[1, 3] = 1.0
    return c


def _as_two_mode(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.shape != (4, 4):
        raise MalformedInputError(f"expected a 4x4 second-moment matrix, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise MalformedInputError("second-moment matrix contains non-finite entries")
    return c


def check_two_mode(c: np.ndarray, atol: float = 1e-8) -> None:
    """
    Validate the operator-ordering structure of a two-mode second-moment
    matrix: the commutator identities <a a+> - <a+ a> = 1 on both modes and
    the conjugation symmetry C[i, j]* = C[j', i'] with primed indices in the
    opposite half of the vector.
    """
    c = _as_two_mode(c)
    for mode in (0, 1):
        comm = c[mode, mode + 2] - c[mode + 2, mode]
        if abs(comm - 1.0) > atol:
            raise MalformedInputError(
                f"commutator identity violated on mode {mode + 1}: "
                f"C[{mode},{mode + 2}] - C[{mode + 2},{mode}] = {comm:.6g}, expected 1"
            )
    swapped = (np.arange(4) + 2) % 4
    defect = np.max(np.abs(np.conj(c) - c[np.ix_(swapped, swapped)].T))
    if defect > atol:
        raise MalformedInputError(f"conjugation symmetry violated: max defect {defect:.3e}")


def quadrature_covariance(c: np.ndarray) -> np.ndarray:
    """
    Quadrature covariance 0.5 * T (C + C^T) T^T of the partially transposed
    state, in (X1, P1, X2, P2) order.

    The result is real symmetric; an imaginary residue above ``IMAG_TOL``
    signals an input that violates conjugation symmetry and raises
    :class:`MalformedInputError`.  Vacuum input maps to the identity.
    """
    c = _as_two_mode(c)
    sym = 0.5 * (c + c.T)
    sigma = QUAD_TRANSFORM @ sym @ QUAD_TRANSFORM.T
    residue = float(np.max(np.abs(sigma.imag)))
    if residue > IMAG_TOL:
        raise MalformedInputError(
            f"quadrature covariance has imaginary residue {residue:.3e} "
            f"(tolerance {IMAG_TOL:g}); input is not a valid second-moment matrix"
        )
    sigma = sigma.real
    return 0.5 * (sigma + sigma.T)


def physical_covariance(c: np.ndarray) -> np.ndarray:
    """Quadrature covariance of the state itself (momentum flip undone)."""
    return _P2_FLIP @ quadrature_covariance(c) @ _P2_FLIP


def symplectic_eigs(sigma: np.ndarray) -> tuple[float, float]:
    """
    The two symplectic eigenvalues of a 4x4 quadrature covariance, ascending.

    Computed as the moduli of the eigenvalues of i*Omega*sigma, which come in
    equal pairs; each returned value averages its pair.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise MalformedInputError(f"expected a 4x4 covariance, got shape {sigma.shape}")
    scale = max(1.0, float(np.max(np.abs(sigma))))
    if np.max(np.abs(sigma - sigma.T)) > 1e-9 * scale:
        raise MalformedInputError("covariance matrix is not symmetric")
    eigs = np.linalg.eigvals(1j * OMEGA_TWO_MODE @ sigma)
    if not np.all(np.isfinite(eigs)):
        raise NumericalError("symplectic eigenvalue computation produced non-finite values")
    mods = np.sort(np.abs(eigs))
    return float(0.5 * (mods[0] + mods[1])), float(0.5 * (mods[2] + mods[3]))


def log_negativity(c: np.ndarray) -> float:
    """
    Logarithmic negativity of a two-mode second-moment matrix, natural log.

    Zero when the smallest partially transposed symplectic eigenvalue is at
    or above 1 (separable by the positive-partial-transpose test).
    """
    nu_minus, _ = symplectic_eigs(quadrature_covariance(c))
    if nu_minus <= 0.0:
        raise NumericalError(
            f"smallest symplectic eigenvalue {nu_minus:.3e} is not positive; "
            "covariance is degenerate"
        )
    return max(0.0, -float(np.log(nu_minus)))


def normalized_en(e: float) -> float:
    """Compress a log-negativity to [0, 1) via e / (e + 1)."""
    if not np.isfinite(e):
        raise MalformedInputError(f"log-negativity must be finite, got {e!r}")
    if e < 0.0:
        raise MalformedInputError(f"log-negativity must be nonnegative, got {e!r}")
    return float(e / (e + 1.0))


def physicality_defect(c: np.ndarray) -> float:
    """
    Smallest eigenvalue of sigma + i*Omega for the physical (unflipped)
    covariance.  Nonnegative up to tolerance for every bona fide Gaussian
    state; entangled states stay nonnegative here even though their
    partially transposed covariance does not.
    """
    sigma = physical_covariance(c)
    eigs = np.linalg.eigvalsh(sigma + 1j * OMEGA_TWO_MODE)
    return float(np.min(eigs))

"""
Matrix constructions for two identical chains of linearly coupled cavities,
each driven at its first site by one output mode of a parametric oscillator.

Every 4N x 4N matrix in this module is ordered as

    (a_I,1 .. a_I,N, a_II,1 .. a_II,N, a_I,1+ .. a_I,N+, a_II,1+ .. a_II,N+),

annihilation operators of both arrays first, then their creation partners.
The cascade coupling is non-reciprocal: the oscillator output drives the
first cavities at rate zeta_a but the arrays never act back.  Eliminating
the oscillator exactly leaves a time-local equation for the array second
moments with a time-dependent source N(t) that starts from the white-noise
value and settles exponentially (rates abar_+/-) to its asymptote N0 as the
array correlates with the finite-memory squeezed input.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import MalformedInputError, NumericalError
from .reservoir import PoParams, W_MINUS, W_PLUS, Y_MATRIX, decay_rates

#: Relative residual above which a resolvent solve is rejected.
RESOLVENT_RTOL = 1e-8


@dataclass(frozen=True)
class SystemParams:
    """
    Two symmetric N-cavity arrays and their squeezed source.

    ``eta`` holds the N-1 nearest-neighbor hopping rates, ``kappa`` the N
    per-cavity loss rates, ``zeta_a`` the coupling of each first cavity to
    its oscillator output mode, ``po`` the oscillator parameters.
    """

    n_cavities: int
    eta: tuple[float, ...]
    kappa: tuple[float, ...]
    zeta_a: float
    po: PoParams

    def __post_init__(self) -> None:
        n = self.n_cavities
        if not isinstance(n, int) or n < 1:
            raise MalformedInputError(f"n_cavities must be a positive integer, got {n!r}")
        object.__setattr__(self, "eta", tuple(float(x) for x in self.eta))
        object.__setattr__(self, "kappa", tuple(float(x) for x in self.kappa))
        if len(self.eta) != n - 1:
            raise MalformedInputError(
                f"expected {n - 1} hopping rates for {n} cavities, got {len(self.eta)}"
            )
        if len(self.kappa) != n:
            raise MalformedInputError(
                f"expected {n} loss rates for {n} cavities, got {len(self.kappa)}"
            )
        for name, values in (("eta", self.eta), ("kappa", self.kappa)):
            for x in values:
                if not np.isfinite(x) or x < 0.0:
                    raise MalformedInputError(f"{name} entries must be nonnegative, got {x!r}")
        if not np.isfinite(self.zeta_a) or self.zeta_a < 0.0:
            raise MalformedInputError(f"zeta_a must be nonnegative, got {self.zeta_a!r}")

    @classmethod
    def uniform(
        cls,
        n_cavities: int,
        eta: float,
        kappa: float,
        zeta_a: float,
        po: PoParams,
    ) -> "SystemParams":
        """Broadcast scalar hopping and loss rates over the whole chain."""
        return cls(
            n_cavities=n_cavities,
            eta=(float(eta),) * (n_cavities - 1),
            kappa=(float(kappa),) * n_cavities,
            zeta_a=float(zeta_a),
            po=po,
        )

    @property
    def dim(self) -> int:
        """Size 4N of the array operator vector."""
        return 4 * self.n_cavities


def ann_index(n_cavities: int, array: int, site: int) -> int:
    """Flat index of a_{array,site} (array in {0, 1}, site 1-based)."""
    if array not in (0, 1):
        raise MalformedInputError(f"array must be 0 or 1, got {array!r}")
    if not 1 <= site <= n_cavities:
        raise MalformedInputError(f"site must lie in 1..{n_cavities}, got {site!r}")
    return array * n_cavities + (site - 1)


def cre_index(n_cavities: int, array: int, site: int) -> int:
    """Flat index of a_{array,site}+ (array in {0, 1}, site 1-based)."""
    return 2 * n_cavities + ann_index(n_cavities, array, site)


def hopping_matrix(p: SystemParams) -> np.ndarray:
    """Real symmetric tridiagonal single-array hopping Hamiltonian (N x N)."""
    n = p.n_cavities
    h = np.zeros((n, n), dtype=float)
    for j, eta in enumerate(p.eta):
        h[j, j + 1] = eta
        h[j + 1, j] = eta
    return h


def _single_array_block(p: SystemParams) -> np.ndarray:
    """Annihilation-sector drift block of one array: -i*H minus local decay."""
    decay = np.array((p.zeta_a + p.kappa[0],) + p.kappa[1:], dtype=float)
    return -1j * hopping_matrix(p).astype(complex) - np.diag(decay)


def build_drift(p: SystemParams) -> np.ndarray:
    """
    Drift matrix of the arrays alone (4N x 4N, complex).  Creation sectors
    are the complex conjugates of the annihilation sectors; the only
    inter-array couplings enter later through the noise source.
    """
    n = p.n_cavities
    block = _single_array_block(p)
    m = np.zeros((4 * n, 4 * n), dtype=complex)
    m[0:n, 0:n] = block
    m[n : 2 * n, n : 2 * n] = block
    m[2 * n : 3 * n, 2 * n : 3 * n] = block.conj()
    m[3 * n : 4 * n, 3 * n : 4 * n] = block.conj()
    return m


def build_injection(p: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Local-loss diffusion Q (4N x 4N) and the injection embedding Z (4N x 4)
    that places the 4 oscillator output operators onto the first cavities.
    Z^T Z is the 4x4 identity.
    """
    n = p.n_cavities
    q = np.zeros((4 * n, 4 * n), dtype=float)
    for array in (0, 1):
        for site in range(1, n + 1):
            q[ann_index(n, array, site), cre_index(n, array, site)] = 2.0 * p.kappa[site - 1]
    z = np.zeros((4 * n, 4), dtype=float)
    z[ann_index(n, 0, 1), 0] = 1.0
    z[ann_index(n, 1, 1), 1] = 1.0
    z[cre_index(n, 0, 1), 2] = 1.0
    z[cre_index(n, 1, 1), 3] = 1.0
    return q, z


def _solve_resolvent(m: np.ndarray, shift: float, rhs: np.ndarray) -> np.ndarray:
    """Solve (m - shift*I) x = rhs with a dense solve and a residual guard."""
    a = m - shift * np.eye(m.shape[0])
    try:
        x = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"resolvent at shift {shift:.6g} is singular: {exc}") from exc
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    residual = float(np.max(np.abs(a @ x - rhs))) / scale
    if residual > RESOLVENT_RTOL:
        raise NumericalError(
            f"resolvent solve at shift {shift:.6g} exceeded its residual budget: "
            f"relative residual {residual:.3e} > {RESOLVENT_RTOL:g}"
        )
    return x


@dataclass(frozen=True)
class _SourceParts:
    """Precomputed ingredients of the time-dependent noise source."""

    base: np.ndarray  # Q + 2*zeta_a * Z Y Z^T, the white-noise (t=0) source
    coefficient: float  # alpha * zeta_b * zeta_a
    rates: tuple[float, float]  # (abar_plus, abar_minus)
    resolvents: tuple[np.ndarray, np.ndarray]  # (M - abar_i)^{-1} Z W_i Z^T


def _source_parts(p: SystemParams, m: np.ndarray | None = None) -> _SourceParts:
    if m is None:
        m = build_drift(p)
    q, z = build_injection(p)
    base = q + 2.0 * p.zeta_a * z @ Y_MATRIX @ z.T
    rates = decay_rates(p.po)
    resolvents = tuple(
        _solve_resolvent(m, abar, z @ w @ z.T)
        for abar, w in zip(rates, (W_PLUS, W_MINUS))
    )
    coefficient = p.po.alpha * p.po.zeta_b * p.zeta_a
    return _SourceParts(base=base, coefficient=coefficient, rates=rates, resolvents=resolvents)


def _source_from_propagators(
    parts: _SourceParts, propagators: tuple[np.ndarray, np.ndarray]
) -> np.ndarray:
    """Assemble N(t) given e^{(M - abar_i) t} for both memory rates."""
    n_t = parts.base.astype(complex)
    for abar, x, e in zip(parts.rates, parts.resolvents, propagators):
        bracket = (np.eye(e.shape[0]) - e) @ x
        n_t = n_t - (parts.coefficient / abar) * (bracket + bracket.T)
    return n_t


def source_n0(p: SystemParams) -> np.ndarray:
    """Asymptotic noise source N0 of the reduced array equation."""
    m = build_drift(p)
    parts = _source_parts(p, m)
    n0 = parts.base.astype(complex)
    for abar, x in zip(parts.rates, parts.resolvents):
        n0 = n0 - (parts.coefficient / abar) * (x + x.T)
    return n0


def source_nt(p: SystemParams, t: float) -> np.ndarray:
    """
    Noise source N(t) of the reduced array equation at elapsed time ``t``
    since the initially uncorrelated oscillator was connected.  N(0) is the
    white-noise source exactly; N(t) -> N0 at the memory rates.
    """
    if t < 0.0:
        raise MalformedInputError(f"time must be nonnegative, got {t!r}")
    m = build_drift(p)
    parts = _source_parts(p, m)
    eye = np.eye(m.shape[0])
    propagators = tuple(
        scipy.linalg.expm((m - abar * eye) * t) for abar in parts.rates
    )
    return _source_from_propagators(parts, propagators)


def kossakowski(p: SystemParams, t: float | None = None) -> np.ndarray:
    """
    Kossakowski matrix K(t) = 0.5 * J N(t) J of the equivalent time-local
    master equation, with J the skew embedding of the identity between the
    annihilation and creation halves.  ``t=None`` gives the asymptote.
    """
    n2 = 2 * p.n_cavities
    j = np.zeros((2 * n2, 2 * n2))
    j[:n2, n2:] = np.eye(n2)
    j[n2:, :n2] = -np.eye(n2)
    source = source_n0(p) if t is None else source_nt(p, t)
    return 0.5 * j @ source @ j


@dataclass(frozen=True)
class NormalModes:
    """
    Delocalized single-array modes.  ``frequencies`` are the imaginary parts
    of the single-array drift-block eigenvalues (ascending), the mode
    frequencies shifted by dissipation.  ``transform`` holds one mode per
    column over cavity sites; ``mode_frequencies`` gives each column's
    frequency, ascending, matching ``frequencies`` up to dissipative shifts.
    """

    frequencies: np.ndarray
    transform: np.ndarray
    mode_frequencies: np.ndarray


def normal_modes(p: SystemParams, basis: str = "hamiltonian") -> NormalModes:
    """
    Normal modes of one array.

    ``basis="hamiltonian"`` diagonalizes the hopping Hamiltonian alone
    (orthogonal transform, exact +/- frequency pairs for a chain);
    ``basis="dissipative"`` orthonormalizes the eigenvectors of the full
    lossy drift block in ascending-frequency order, which matters only when
    losses are strong enough to mix the hopping modes.
    """
    block = _single_array_block(p)
    frequencies = np.sort(np.linalg.eigvals(block).imag)
    if basis == "hamiltonian":
        mode_freqs, transform = np.linalg.eigh(hopping_matrix(p))
        return NormalModes(
            frequencies=frequencies,
            transform=transform,
            mode_frequencies=mode_freqs,
        )
    if basis == "dissipative":
        eigvals, eigvecs = np.linalg.eig(block)
        order = np.argsort(eigvals.imag)
        # Gram-Schmidt via QR: columns stay aligned with the sorted modes as
        # long as dissipation leaves them close to orthogonal.
        transform, _ = np.linalg.qr(eigvecs[:, order])
        return NormalModes(
            frequencies=frequencies,
            transform=transform,
            mode_frequencies=eigvals.imag[order],
        )
    raise MalformedInputError(f"unknown normal-mode basis {basis!r}")


@dataclass(frozen=True)
class BroadbandMoments:
    """White-noise-limit reservoir moments seen by the first cavities."""

    nbar: float
    mbar: float
    n_thermal: float
    squeeze_param: float


def broadband_moments(po: PoParams) -> BroadbandMoments:
    """
    Effective two-mode squeezed thermal moments in the broadband limit:
    occupation nbar, cross correlation mbar, and their thermal/squeezing
    decomposition nbar_T and s0 with tanh(s0) = (nbar - nbar_T)/mbar.
    """
    a_plus, a_minus = decay_rates(po)
    nbar = po.alpha * po.zeta_b * (1.0 / a_minus**2 - 1.0 / a_plus**2)
    mbar = po.alpha * po.zeta_b * (1.0 / a_minus**2 + 1.0 / a_plus**2)
    disc = (2.0 * nbar + 1.0) ** 2 - 4.0 * mbar**2
    if disc < -1e-12 * max(1.0, (2.0 * nbar + 1.0) ** 2):
        raise NumericalError(
            f"broadband moments inconsistent: (2n+1)^2 - 4m^2 = {disc:.3e} < 0"
        )
    n_thermal = 0.5 * (np.sqrt(max(disc, 0.0)) - 1.0)
    if mbar > 0.0:
        squeeze_param = float(np.arctanh((nbar - n_thermal) / mbar))
    else:
        squeeze_param = 0.0
    return BroadbandMoments(
        nbar=float(nbar),
        mbar=float(mbar),
        n_thermal=float(n_thermal),
        squeeze_param=squeeze_param,
    )


def broadband_pair_en(po: PoParams) -> float:
    """
    Logarithmic negativity -ln(1 - 4*alpha*zeta_b/abar_plus^2) shared by
    every same-index cavity pair in the broadband limit; coincides with the
    zero-frequency entanglement of the reservoir itself.
    """
    a_plus, _ = decay_rates(po)
    value = 1.0 - 4.0 * po.alpha * po.zeta_b / a_plus**2
    if value <= 0.0:
        raise NumericalError(
            f"broadband pair entanglement undefined: 1 - 4*alpha*zeta_b/abar_plus^2 = {value:.3e}"
        )
    return float(-np.log(value))


def broadband_margin(p: SystemParams) -> float:
    """
    Diagnostic ratio abar_minus / max(zeta_a, kappa_j, eta_j) comparing the
    reservoir memory rate to the fastest array rate; large values mean the
    white-noise treatment of the arrays is accurate.
    """
    _, a_minus = decay_rates(p.po)
    fastest = max((p.zeta_a, *p.kappa, *p.eta))
    if fastest <= 0.0:
        return float("inf")
    return float(a_minus / fastest)


def apply_param(p: SystemParams, name: str, value: float) -> SystemParams:
    """
    Return a copy of ``p`` with one named rate replaced.  Recognized names:
    zeta_a, alpha, zeta_b, kappa_0, eta (uniform), kappa (uniform), and
    kappa_N (last cavity only).
    """
    value = float(value)
    if name == "zeta_a":
        return replace(p, zeta_a=value)
    if name in ("alpha", "zeta_b", "kappa_0"):
        return replace(p, po=replace(p.po, **{name: value}))
    if name == "eta":
        return replace(p, eta=(value,) * (p.n_cavities - 1))
    if name == "kappa":
        return replace(p, kappa=(value,) * p.n_cavities)
    if name == "kappa_N":
        return replace(p, kappa=p.kappa[:-1] + (value,))
    raise MalformedInputError(f"unknown parameter name {name!r}")


def get_param(p: SystemParams, name: str) -> float:
    """Read a named rate back; uniform names require a uniform chain."""
    if name == "zeta_a":
        return p.zeta_a
    if name in ("alpha", "zeta_b", "kappa_0"):
        return getattr(p.po, name)
    if name == "eta":
        if not p.eta:
            raise MalformedInputError("eta is undefined for a single-cavity chain")
        if len(set(p.eta)) != 1:
            raise MalformedInputError("eta is not uniform; cannot read a single value")
        return p.eta[0]
    if name == "kappa":
        if len(set(p.kappa)) != 1:
            raise MalformedInputError("kappa is not uniform; cannot read a single value")
        return p.kappa[0]
    if name == "kappa_N":
        return p.kappa[-1]
    raise MalformedInputError(f"unknown parameter name {name!r}")

"""Phase-space algebra for one- and two-mode Gaussian states.

Quadratures are ordered (x_A, p_A, x_B, p_B) and the vacuum covariance is
normalized to the identity.  Entropies are in bits; squeezing parameters are
natural-log quantities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, UnphysicalStateError

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-12
PHYSICALITY_TOL = 1e-9

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes in interleaved (x, p) ordering."""
    return np.kron(np.eye(n_modes), _OMEGA_1)


OMEGA_2 = omega(2)


def _as_square(m, size=None) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ContractViolationError(f"expected an even square matrix, got shape {m.shape}")
    if size is not None and m.shape[0] != size:
        raise ContractViolationError(f"expected a {size}x{size} matrix, got shape {m.shape}")
    return m


def _check_symmetric(cov: np.ndarray) -> None:
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
        raise ContractViolationError("covariance matrix is not symmetric within 1e-12")


def symplectic_eigenvalues(cov) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, sorted descending.

    The values are the moduli of the positive-imaginary-part eigenvalues of
    Omega @ cov, one per mode.  Physical states have all values >= 1.
    """
    cov = _as_square(cov)
    _check_symmetric(cov)
    n = cov.shape[0] // 2
    ev = np.linalg.eigvals(omega(n) @ cov)
    # eigenvalues come in +/- i*nu pairs; keep one modulus per pair
    nus = np.sort(np.abs(ev))[::2]
    return nus[::-1].copy()


def is_physical(cov) -> bool:
    """True iff every symplectic eigenvalue is >= 1 - 1e-9."""
    return bool(symplectic_eigenvalues(cov).min() >= 1.0 - PHYSICALITY_TOL)


def entropy_fn(x: float) -> float:
    """Entropy contribution s(x) of one symplectic eigenvalue, in bits.

    s(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), with s(1) = 0
    as the limit value.  Inputs within 1e-9 below 1 are clamped to 1.
    """
    if x < 1.0 - PHYSICALITY_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {x} below the vacuum limit")
    if x <= 1.0:
        return 0.0
    xp = (x + 1.0) / 2.0
    xm = (x - 1.0) / 2.0
    return float(xp * np.log2(xp) - xm * np.log2(xm))


def von_neumann_entropy(cov) -> float:
    """Entropy of a Gaussian state (1 or 2 modes) in bits: sum of s over the spectrum."""
    return float(sum(entropy_fn(v) for v in symplectic_eigenvalues(cov)))


def reduce_mode(cov, mode: str) -> np.ndarray:
    """Marginal 2x2 covariance block of mode ``"A"`` or ``"B"``."""
    cov = _as_square(cov, 4)
    if mode == "A":
        return cov[:2, :2].copy()
    if mode == "B":
        return cov[2:, 2:].copy()
    raise ContractViolationError(f"mode must be 'A' or 'B', got {mode!r}")


@dataclass(frozen=True)
class TwoModeState:
    """Displacement 4-vector and 4x4 covariance matrix of a two-mode Gaussian state.

    The stored displacement follows the sqrt(2)*alpha convention of the
    encoding map, so the mean photon number of a mode is
    (tr(block)/2 - 1)/2 + |d_mode|^2 / 2.
    """

    d: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        if d.shape != (4,):
            raise ContractViolationError(f"displacement must have length 4, got {d.shape}")
        cov = _as_square(self.cov, 4)
        _check_symmetric(cov)
        if symplectic_eigenvalues(cov).min() < 1.0 - PHYSICALITY_TOL:
            raise UnphysicalStateError("covariance matrix violates the uncertainty relation")
        d.setflags(write=False)
        cov = cov.copy()
        cov.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def vacuum(cls) -> "TwoModeState":
        return cls(np.zeros(4), np.eye(4))


@dataclass(frozen=True)
class SymplecticMatrix:
    """A 4x4 real matrix S with S Omega S^T = Omega."""

    m: np.ndarray

    def __post_init__(self):
        m = _as_square(self.m, 4)
        if np.max(np.abs(m @ OMEGA_2 @ m.T - OMEGA_2)) > SYMPLECTIC_TOL:
            raise ContractViolationError("matrix does not preserve the symplectic form")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


def apply_symplectic(state: TwoModeState, s: SymplecticMatrix) -> TwoModeState:
    """Transform a state by a symplectic matrix: d -> S d, cov -> S cov S^T."""
    m = s.m
    return TwoModeState(m @ state.d, m @ state.cov @ m.T)


def beam_splitter(tau: float) -> SymplecticMatrix:
    """Two-mode beam-splitter symplectic with transmission coefficient tau in [0, 1]."""
    if not 0.0 <= tau <= 1.0:
        raise ContractViolationError(f"transmission coefficient must lie in [0, 1], got {tau}")
    t = np.sqrt(tau)
    u = np.sqrt(1.0 - tau)
    i2 = np.eye(2)
    return SymplecticMatrix(np.block([[t * i2, u * i2], [u * i2, -t * i2]]))


def single_mode_squeezer(degree: float, angle: float = 0.0) -> np.ndarray:
    """2x2 squeezing symplectic; angle 0 squeezes x, angle pi squeezes p."""
    rot = np.array([[np.cos(angle), np.sin(angle)], [np.sin(angle), -np.cos(angle)]])
    return np.cosh(degree) * np.eye(2) - np.sinh(degree) * rot


def two_mode_squeezer(r: float) -> SymplecticMatrix:
    """4x4 two-mode squeezing symplectic; acting on vacuum it yields the standard TMSV."""
    sz = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    return SymplecticMatrix(
        np.block([[np.cosh(r) * i2, np.sinh(r) * sz], [np.sinh(r) * sz, np.cosh(r) * i2]])
    )


def phase_rotation(phi: float) -> np.ndarray:
    """2x2 phase-space rotation, symplectic for any angle."""
    return np.array([[np.cos(phi), np.sin(phi)], [-np.sin(phi), np.cos(phi)]])


def mean_photon(state: TwoModeState, mode: str) -> float:
    """Mean photon number of one mode: (tr(block)/2 - 1)/2 + |d_mode|^2 / 2."""
    block = reduce_mode(state.cov, mode)
    sl = slice(0, 2) if mode == "A" else slice(2, 4)
    dm = state.d[sl]
    return float((np.trace(block) / 2.0 - 1.0) / 2.0 + dm @ dm / 2.0)


def conditional_entropy(state: TwoModeState) -> float:
    """S(A|B) = S(rho_AB) - S(rho_B) in bits; negative for strong correlations."""
    return von_neumann_entropy(state.cov) - von_neumann_entropy(reduce_mode(state.cov, "B"))

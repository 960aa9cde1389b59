"""Holevo quantity and entanglement of pure two-mode Gaussian states.

For a pure state the Holevo quantity of Gaussian displacement modulation is
the entropy of the modulation-averaged state, whose covariance is the input
covariance with the sender block inflated by 4 sigma^2.  Entanglement is the
entropy of the reduced sender mode.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import _kernels
from . import phase_space as ps
from .errors import ContractViolationError
from .families import haar_quaternion, random_pure

PURITY_TOL = 1e-6


def _require_pure(state: ps.TwoModeState) -> None:
    if ps.symplectic_eigenvalues(state.cov).max() > 1.0 + PURITY_TOL:
        raise ContractViolationError("state is not pure: symplectic spectrum exceeds 1")


def holevo_pure(state: ps.TwoModeState, sigma: float) -> float:
    """Holevo quantity in bits of Gaussian modulation with width sigma on a pure state."""
    if sigma < 0:
        raise ContractViolationError(f"modulation width must be >= 0, got {sigma}")
    _require_pure(state)
    averaged = state.cov.copy()
    averaged[0, 0] += 4.0 * sigma * sigma
    averaged[1, 1] += 4.0 * sigma * sigma
    return ps.von_neumann_entropy(averaged)


def entanglement_pure(state: ps.TwoModeState) -> float:
    """Entanglement entropy in bits: s(nu) of the reduced sender block."""
    _require_pure(state)
    nu = float(np.sqrt(max(np.linalg.det(ps.reduce_mode(state.cov, "A")), 1.0)))
    return ps.entropy_fn(nu)


@dataclass(frozen=True)
class PureStateSample:
    seed: int
    nbar_sender: float
    entanglement_bits: float
    holevo_bits: float
    state: Optional[ps.TwoModeState] = None


@dataclass(frozen=True)
class ScatterResult:
    nbar: float
    sigma: float
    samples: List[PureStateSample]
    rank_correlation: float
    lsq_slope: float

    def sorted_by_entanglement(self) -> List[PureStateSample]:
        return sorted(self.samples, key=lambda s: s.entanglement_bits)


def rank_correlation(x, y) -> float:
    """Spearman rank correlation; 1.0 for a strictly monotone relation."""
    rx = np.argsort(np.argsort(np.asarray(x))).astype(float)
    ry = np.argsort(np.argsort(np.asarray(y))).astype(float)
    return float(np.corrcoef(rx, ry)[0, 1])


def scatter_arrays(nbar: float, n_samples: int, seed: int, sigma: float = 1.0):
    """Fast path: per-sample (seeds, sender_photons, entanglement, holevo) arrays.

    Sample i uses seed + i, so partitions of the index range are independent
    and results do not depend on n_samples beyond truncation.
    """
    if n_samples < 1:
        raise ContractViolationError(f"need at least one sample, got {n_samples}")
    seeds = np.arange(seed, seed + n_samples, dtype=np.int64)
    quats = np.empty((n_samples, 4))
    for i in range(n_samples):
        quats[i] = haar_quaternion(int(seeds[i]))
    photons, ent, hol = _kernels.scatter_pairs(quats, nbar, sigma)
    return seeds, photons, ent, hol


def scatter_study(nbar: float, n_samples: int, seed: int, sigma: float = 1.0,
                  keep_states: bool = True) -> ScatterResult:
    """Seeded study of Holevo quantity vs entanglement at fixed energy parameter.

    Reports the Spearman rank correlation (sorted-pairs monotonicity statistic)
    and the least-squares slope of holevo against entanglement.  Pass
    keep_states=False to skip materializing the states for very large batches;
    ``scatter_arrays`` is the bulk path used by the CLI.
    """
    if n_samples < 2:
        raise ContractViolationError(f"need at least two samples, got {n_samples}")
    seeds, photons, ent, hol = scatter_arrays(nbar, n_samples, seed, sigma)
    samples = [
        PureStateSample(
            seed=int(seeds[i]),
            nbar_sender=float(photons[i]),
            entanglement_bits=float(ent[i]),
            holevo_bits=float(hol[i]),
            state=random_pure(nbar, int(seeds[i])) if keep_states else None,
        )
        for i in range(n_samples)
    ]
    slope = float(np.polyfit(ent, hol, 1)[0])
    return ScatterResult(nbar, sigma, samples, rank_correlation(ent, hol), slope)

"""Constructors and closed-form results for the studied two-mode state families.

Families: the two-mode squeezed vacuum (TMSV), beam-splitter states of two
oppositely squeezed modes (kappa class), the equal-capacity pure class, the
squeeze-decomposition family, and seeded Haar-random pure states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import phase_space as ps
from .errors import ContractViolationError, InfeasibleEnergyError
from .optim import Bracket, maximize_alternating, maximize_scalar
from .protocol import (
    ADAPTIVE,
    CapacityResult,
    NoiseScenario,
    r_budget_max,
    standard_form_cov,
)

_XXPP_TO_INTERLEAVED = np.ix_([0, 2, 1, 3], [0, 2, 1, 3])


@dataclass(frozen=True)
class StandardForm:
    """Block entries of a standard-form covariance: A = a*I2, B = diag(b1, b2), C = c*I2."""

    a: float
    b1: float
    b2: float
    c: float

    def __post_init__(self):
        if not ps.is_physical(self.cov()):
            raise ContractViolationError("standard-form entries violate the uncertainty relation")

    def cov(self) -> np.ndarray:
        return standard_form_cov((self.a, self.b1, self.b2, self.c))

    def __iter__(self):
        return iter((self.a, self.b1, self.b2, self.c))


def tmsv(r: float) -> StandardForm:
    """Two-mode squeezed vacuum: a = c = cosh 2r, b1 = -b2 = sinh 2r."""
    if r < 0:
        raise ContractViolationError(f"squeezing must be >= 0, got {r}")
    return StandardForm(math.cosh(2 * r), math.sinh(2 * r), -math.sinh(2 * r), math.cosh(2 * r))


# ---------------------------------------------------------------------------
# kappa class: two oppositely squeezed modes on a beam splitter of
# transmissivity kappa; kappa = 1/2 recovers the TMSV.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KappaState:
    r: float
    kappa: float

    def __post_init__(self):
        if self.r < 0:
            raise ContractViolationError(f"squeezing must be >= 0, got {self.r}")
        if not 0.0 <= self.kappa <= 0.5:
            raise ContractViolationError(f"kappa must lie in [0, 0.5], got {self.kappa}")

    def state(self) -> ps.TwoModeState:
        return kappa_state(self.r, self.kappa)


def kappa_blocks(r: float, kappa: float):
    """Diagonal block entries ((a1,a2), (b1,b2), (c1,c2)) of the kappa-class covariance."""
    a1 = math.exp(-2 * r) * (1 + (-1 + math.exp(4 * r)) * kappa)
    a2 = math.exp(2 * r) - 2 * kappa * math.sinh(2 * r)
    b = 2 * math.sqrt(kappa * (1 - kappa)) * math.sinh(2 * r)
    return (a1, a2), (b, -b), (a2, a1)


def kappa_state(r: float, kappa: float) -> ps.TwoModeState:
    """Covariance of the kappa-class state, zero displacement.

    Reconstructible by mixing a p-squeezed and an x-squeezed vacuum on a
    beam splitter of transmissivity kappa.
    """
    KappaState(r, kappa)  # validate parameters
    (a1, a2), (b1, b2), (c1, c2) = kappa_blocks(r, kappa)
    cov = np.diag([a1, a2, c1, c2])
    cov[0, 2] = cov[2, 0] = b1
    cov[1, 3] = cov[3, 1] = b2
    return ps.TwoModeState(np.zeros(4), cov)


def kappa_mutual_information(r: float, kappa: float, scenario: NoiseScenario,
                             nbar: float) -> float:
    """Decoded mutual information of the kappa class with the photon budget substituted."""
    sc = scenario
    num = (2 * nbar - (-1 + sc.x3 ** 2 * sc.y1 + sc.y3) * sc.tau
           - sc.x1 ** 2 * sc.x3 ** 2 * sc.tau * math.cosh(2 * r))
    if num < -1e-9:
        raise InfeasibleEnergyError(f"state energy alone exceeds the budget (numerator {num})")
    num = max(num, 0.0)
    e2r, em2r = math.exp(2 * r), math.exp(-2 * r)
    root = math.sqrt((1 - kappa) * kappa)
    sh = math.sinh(2 * r)
    den1 = 2 + sc.tau * (-2 + sc.y2 + sc.y3 + sc.x2 ** 2 * (e2r - 2 * kappa * sh)
                         + sc.x3 * (em2r * (1 + (-1 + math.exp(4 * r)) * kappa) * sc.x1 ** 2 * sc.x3
                                    + sc.x3 * sc.y1 - 4 * root * sc.x1 * sc.x2 * sh))
    den2 = 2 + sc.tau * (-2 + em2r * (1 + (-1 + math.exp(4 * r)) * kappa) * sc.x2 ** 2
                         + sc.y2 + sc.y3
                         + sc.x3 * (sc.x3 * sc.y1 - 4 * root * sc.x1 * sc.x2 * sh
                                    + sc.x1 ** 2 * sc.x3 * (e2r - 2 * kappa * sh)))
    return 0.5 * math.log2(1 + num / den1) + 0.5 * math.log2(1 + num / den2)


def kappa_capacity(kappa: float, scenario: NoiseScenario, nbar: float) -> CapacityResult:
    """Adaptive capacity of the kappa class: numerical maximization over squeezing."""
    r_cap = math.asinh(math.sqrt(2 * nbar)) + 1.0
    r_hi = r_budget_max(scenario, nbar, r_cap)
    if r_hi is None:
        return CapacityResult(math.nan, math.nan, math.nan, ADAPTIVE, False)

    def objective(r):
        try:
            return kappa_mutual_information(r, kappa, scenario, nbar)
        except InfeasibleEnergyError:
            return -math.inf

    if r_hi == 0.0:
        r_opt, bits = 0.0, objective(0.0)
    else:
        r_opt, bits = maximize_scalar(objective, Bracket(0.0, r_hi, 1e-8))
    sigma = _kappa_sigma(r_opt, scenario, nbar)
    return CapacityResult(bits, r_opt, sigma, ADAPTIVE, True)


def _kappa_sigma(r, scenario, nbar):
    if scenario.x3 == 0.0:
        return 0.0
    num = (2 * nbar - (-1 + scenario.x3 ** 2 * scenario.y1 + scenario.y3) * scenario.tau
           - scenario.x1 ** 2 * scenario.x3 ** 2 * scenario.tau * math.cosh(2 * r))
    return math.sqrt(max(num, 0.0) / (4 * scenario.x3 ** 2 * scenario.tau))


# ---------------------------------------------------------------------------
# pure class with blocks a*I2 and sqrt(a^2-1)*sigma_z: same capacity as the
# TMSV at equal sender energy.
# ---------------------------------------------------------------------------

def pure_class_state(a: float) -> ps.TwoModeState:
    if a < 1:
        raise ContractViolationError(f"state parameter must be >= 1, got {a}")
    off = math.sqrt(a * a - 1.0)
    cov = a * np.eye(4)
    cov[0, 2] = cov[2, 0] = off
    cov[1, 3] = cov[3, 1] = -off
    return ps.TwoModeState(np.zeros(4), cov)


def pure_class_mutual_information(a: float, nbar: float) -> float:
    """Noiseless decoded information of the pure class with the budget substituted."""
    sigma_sq = (2 * nbar + 1 - a) / 4.0
    if sigma_sq < 0:
        raise InfeasibleEnergyError(f"state parameter a={a} exceeds the photon budget {nbar}")
    return math.log2(1 + 2 * sigma_sq * (a + math.sqrt(a * a - 1.0)))


def pure_class_capacity(nbar: float):
    """Optimal state parameter and capacity of the pure class.

    a_opt = ((1+2n)^2 + 1)/(2(1+2n)) maximizes the budgeted information and
    attains log2(1 + n + n^2), the TMSV value at equal energy.
    """
    if nbar <= 0:
        raise ContractViolationError(f"photon budget must be positive, got {nbar}")
    w = 1.0 + 2.0 * nbar
    a_opt = (w * w + 1.0) / (2.0 * w)
    return a_opt, math.log2(1.0 + nbar + nbar * nbar)


# ---------------------------------------------------------------------------
# squeeze decomposition: per-mode squeezers followed by a two-mode squeezer
# acting on vacuum.  Pure by construction.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompState:
    r: float
    s1_deg: float
    s2_deg: float
    theta1: float = 0.0
    theta2: float = math.pi

    def __post_init__(self):
        if self.s1_deg < 0 or self.s2_deg < 0:
            raise ContractViolationError("squeezing degrees must be >= 0")

    def state(self) -> ps.TwoModeState:
        return decomp_state(self.r, self.s1_deg, self.s2_deg, self.theta1, self.theta2)


def decomp_state(r: float, s1_deg: float, s2_deg: float,
                 theta1: float = 0.0, theta2: float = math.pi) -> ps.TwoModeState:
    DecompState(r, s1_deg, s2_deg, theta1, theta2)  # validate
    s1 = ps.single_mode_squeezer(s1_deg, theta1)
    s2 = ps.single_mode_squeezer(s2_deg, theta2)
    local = np.zeros((4, 4))
    local[:2, :2] = s1
    local[2:, 2:] = s2
    full = ps.two_mode_squeezer(r).m @ local
    return ps.TwoModeState(np.zeros(4), full @ full.T)


def decomp_mutual_information(r: float, s2_deg: float, nbar: float) -> float:
    """Budgeted noiseless information of the decomposition family with s1 = 0.

    Uses zeta = (cosh^2 r + sinh^2 r cosh 2s2 - 2n - 1)(tanh s2 - 1)/2, which
    reproduces the TMSV value log2(1 + n + n^2) in the s2 -> 0 limit.
    """
    mean_a = math.cosh(r) ** 2 + math.sinh(r) ** 2 * math.cosh(2 * s2_deg)
    zeta = (mean_a - 2 * nbar - 1) * (math.tanh(s2_deg) - 1) / 2.0
    if zeta < -1e-9:
        raise InfeasibleEnergyError(f"state energy alone exceeds the budget (zeta {zeta})")
    zeta = max(zeta, 0.0)
    return 0.5 * math.log2((1 + math.exp(2 * r) * zeta)
                           * (1 + math.exp(2 * (r + s2_deg)) * zeta))


def decomp_optimum(nbar: float):
    """Alternating 2-D maximization over (r, s2); returns ((r_opt, s2_opt), bits)."""

    def objective(r, s2):
        try:
            return decomp_mutual_information(r, s2, nbar)
        except InfeasibleEnergyError:
            return -math.inf

    r_cap = math.asinh(math.sqrt(2 * nbar)) + 1.0
    return maximize_alternating(objective, Bracket(0.0, r_cap, 1e-10),
                                Bracket(0.0, 2.0, 1e-10), coord_tol=1e-6)


def decomp_stationarity_residuals(r: float, s2_deg: float, nbar: float):
    """Residuals of the two printed stationarity conditions; both vanish at the optimum."""
    res1 = math.cosh(2 * s2_deg) * (math.exp(2 * r) - 1.0) + math.exp(2 * r) - 4.0 * nbar - 1.0
    res2 = (math.sinh(r) ** 2 * math.sinh(2 * s2_deg)
            * (4.0 * math.sinh(2 * r) - 3.0 * math.cosh(2 * r) - 1.0)
            - 4.0 * nbar ** 2 * math.tanh(s2_deg) / math.cosh(s2_deg) ** 2)
    return res1, res2


# ---------------------------------------------------------------------------
# Haar-random pure two-mode states at fixed energy parameter.
# ---------------------------------------------------------------------------

def haar_quaternion(seed: int) -> np.ndarray:
    """Unit quaternion drawn uniformly from S^3 (Haar measure on SU(2)); PCG64 seeded."""
    q = np.random.default_rng(seed).standard_normal(4)
    return q / np.linalg.norm(q)


def orthogonal_symplectic(quaternion) -> np.ndarray:
    """4x4 orthogonal symplectic matrix [[Re U, Im U], [-Im U, Re U]] in xx|pp ordering.

    U is the SU(2) member [[q0 + i q1, -q2 + i q3], [q2 + i q3, q0 - i q1]].
    """
    q0, q1, q2, q3 = quaternion
    re_u = np.array([[q0, -q2], [q2, q0]])
    im_u = np.array([[q1, q3], [q3, -q1]])
    return np.block([[re_u, im_u], [-im_u, re_u]])


def random_pure(nbar: float, rng_seed: int) -> ps.TwoModeState:
    """Seeded random pure two-mode state: O (D + D^{-1}) O^T with D = (nbar/2) I2.

    The scale matrix lives in xx|pp block ordering and is conjugated by a
    Haar-random orthogonal symplectic before conversion to interleaved
    ordering.  Deterministic for a given seed.
    """
    if nbar <= 0:
        raise ContractViolationError(f"energy parameter must be positive, got {nbar}")
    half = nbar / 2.0
    gamma = np.diag([half, half, 1.0 / half, 1.0 / half])
    o = orthogonal_symplectic(haar_quaternion(rng_seed))
    cov = (o @ gamma @ o.T)[_XXPP_TO_INTERLEAVED]
    return ps.TwoModeState(np.zeros(4), cov)

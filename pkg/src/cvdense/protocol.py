"""End-to-end noisy dense-coding pipeline and capacity quantities.

The shared two-mode state (standard-form blocks a*I2, diag(b1, b2), c*I2) is
distributed through per-mode Gaussian maps (x1, y1) and (x2, y2), displaced by
the Gaussian-modulated message, sent through a third map (x3, y3), and finally
each mode is mixed with vacuum at a transmissivity-tau splitter to model
imperfect double-homodyne decoding.  Capacities maximize the decoded mutual
information over the encoding width (and squeezing) subject to a mean photon
budget at the sender's mode, measured on the delivered state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels as ch
from . import phase_space as ps
from .errors import (
    ContractViolationError,
    DegenerateEncodingError,
    InfeasibleEnergyError,
    ThresholdNotFoundError,
    UnphysicalScenarioError,
)
from .optim import Bracket, find_root_bisect, maximize_scalar

ADAPTIVE = "adaptive"
NON_ADAPTIVE = "non_adaptive"
SCHEMES = (ADAPTIVE, NON_ADAPTIVE)

#: capacity from the printed optimal-squeezing formula must agree with direct
#: numerical maximization to this many bits, else the numerical result wins
CLOSED_FORM_TOL = 1e-6

THRESHOLD_BRACKET = (1e-3, 1e3)
THRESHOLD_TOL = 1e-6


@dataclass(frozen=True)
class NoiseScenario:
    """The six channel scalars (x1, y1, x2, y2, x3, y3) plus detector efficiency tau.

    Stages 1 and 2 act on modes A and B during distribution, stage 3 acts on
    the encoded mode A; every (x, y) pair must be a CP map and 0 < tau <= 1.
    """

    x1: float
    y1: float
    x2: float
    y2: float
    x3: float
    y3: float
    tau: float = 1.0

    def __post_init__(self):
        for i, (x, y) in enumerate(self.pairs(), start=1):
            ch.GaussianChannel(x, y)  # raises if not CP
        if not 0.0 < self.tau <= 1.0:
            raise ContractViolationError(f"detector efficiency must lie in (0, 1], got {self.tau}")

    def pairs(self):
        return ((self.x1, self.y1), (self.x2, self.y2), (self.x3, self.y3))

    @classmethod
    def noiseless(cls, tau: float = 1.0) -> "NoiseScenario":
        return cls(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, tau)

    @classmethod
    def from_channels(cls, dist_a: ch.GaussianChannel, dist_b: ch.GaussianChannel,
                      post: ch.GaussianChannel, tau: float = 1.0) -> "NoiseScenario":
        return cls(dist_a.x, dist_a.y, dist_b.x, dist_b.y, post.x, post.y, tau)


@dataclass(frozen=True)
class EncodingDistribution:
    """Zero-mean isotropic Gaussian over the displacement amplitude, std sigma >= 0."""

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ContractViolationError(f"encoding width must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    r_opt: float
    sigma_opt: float
    scheme: str
    feasible: bool
    closed_form_mismatch: bool = False

    def __post_init__(self):
        if not self.feasible and not math.isnan(self.capacity_bits):
            raise ContractViolationError("infeasible results must carry NaN capacity")


def _unpack_form(std_form):
    """Accept an (a, b1, b2, c) tuple or any object with those attributes."""
    if hasattr(std_form, "a"):
        return std_form.a, std_form.b1, std_form.b2, std_form.c
    a, b1, b2, c = std_form
    return a, b1, b2, c


def _tmsv_form(r: float):
    c2r, s2r = math.cosh(2 * r), math.sinh(2 * r)
    return c2r, s2r, -s2r, c2r


def standard_form_cov(std_form) -> np.ndarray:
    a, b1, b2, c = _unpack_form(std_form)
    m = np.diag([a, a, c, c])
    m[0, 2] = m[2, 0] = b1
    m[1, 3] = m[3, 1] = b2
    return m


def pipeline_state(std_form, scenario: NoiseScenario, alpha=(0.0, 0.0)) -> ps.TwoModeState:
    """Delivered two-mode state for one encoded message alpha = (alpha_x, alpha_p).

    Composition: distribution maps on A and B, displacement encoding on A,
    stage-3 map on A, then vacuum mixing of both modes at transmissivity tau.
    """
    state = ps.TwoModeState(np.zeros(4), standard_form_cov(std_form))
    state = ch.apply_to_mode(state, ch.GaussianChannel(scenario.x1, scenario.y1), "A")
    state = ch.apply_to_mode(state, ch.GaussianChannel(scenario.x2, scenario.y2), "B")
    ax, ap = alpha
    d = state.d + np.array([math.sqrt(2) * ax, math.sqrt(2) * ap, 0.0, 0.0])
    state = ps.TwoModeState(d, state.cov)
    state = ch.apply_to_mode(state, ch.GaussianChannel(scenario.x3, scenario.y3), "A")
    mixer = ch.GaussianChannel(math.sqrt(scenario.tau), 1.0 - scenario.tau)
    state = ch.apply_to_mode(state, mixer, "A")
    return ch.apply_to_mode(state, mixer, "B")


def noise_G_blocks(a_pair, b_pair, c_pair, scenario: NoiseScenario):
    """Measurement-noise denominators for general diagonal blocks diag(a1,a2), diag(b1,b2), diag(c1,c2)."""
    x1, y1, x2, y2, x3, y3, tau = (scenario.x1, scenario.y1, scenario.x2, scenario.y2,
                                   scenario.x3, scenario.y3, scenario.tau)
    out = []
    for i, (ai, bi, ci) in enumerate(zip(a_pair, b_pair, c_pair), start=1):
        g = 2.0 + (-2.0 + ci * x2 * x2
                   + x3 * ((-1.0) ** i * 2.0 * bi * x1 * x2 + ai * x1 * x1 * x3 + x3 * y1)
                   + y2 + y3) * tau
        if g <= 0.0:
            raise UnphysicalScenarioError(f"non-positive measurement variance G{i} = {g}")
        out.append(g)
    return tuple(out)


def noise_G(std_form, scenario: NoiseScenario):
    """The two homodyne-variance denominators (G1, G2) for a standard-form state."""
    a, b1, b2, c = _unpack_form(std_form)
    return noise_G_blocks((a, a), (b1, b2), (c, c), scenario)


def mutual_information_blocks(a_pair, b_pair, c_pair, scenario: NoiseScenario,
                              enc: EncodingDistribution) -> float:
    signal = 4.0 * scenario.x3 ** 2 * enc.sigma ** 2 * scenario.tau
    gs = noise_G_blocks(a_pair, b_pair, c_pair, scenario)
    return float(sum(0.5 * math.log2(1.0 + signal / g) for g in gs))


def mutual_information(std_form, scenario: NoiseScenario, enc: EncodingDistribution) -> float:
    """Decoded mutual information in bits: (1/2) sum_i log2(1 + 4 x3^2 sigma^2 tau / G_i)."""
    a, b1, b2, c = _unpack_form(std_form)
    return mutual_information_blocks((a, a), (b1, b2), (c, c), scenario, enc)


def mi_gaussian_oracle(std_form, scenario: NoiseScenario, enc: EncodingDistribution) -> float:
    """Mutual information from the explicit 4-variable Gaussian joint over (alpha, beta).

    Builds the joint covariance of the message and the double-homodyne outcome
    (mean of beta linear in alpha, conditional variances G_i / 2) and returns
    (1/2) log2(det S_alpha det S_beta / det S_joint).  Independent evaluation
    route used to validate ``mutual_information``.
    """
    if enc.sigma == 0.0:
        return 0.0
    g1, g2 = noise_G(std_form, scenario)
    s2 = enc.sigma ** 2
    k = math.sqrt(2.0 * scenario.tau) * scenario.x3
    joint = np.zeros((4, 4))
    joint[0, 0] = joint[1, 1] = s2
    joint[2, 2] = k * k * s2 + g2 / 2.0   # beta_x channel
    joint[3, 3] = k * k * s2 + g1 / 2.0   # beta_p channel
    joint[0, 2] = joint[2, 0] = k * s2
    joint[1, 3] = joint[3, 1] = k * s2
    det_a = float(np.linalg.det(joint[:2, :2]))
    det_b = float(np.linalg.det(joint[2:, 2:]))
    det_j = float(np.linalg.det(joint))
    if det_j <= 0.0 or det_a <= 0.0 or det_b <= 0.0:
        raise DegenerateEncodingError("singular joint covariance in the Gaussian oracle")
    return 0.5 * math.log2(det_a * det_b / det_j)


def sender_energy(std_form, scenario: NoiseScenario, enc: EncodingDistribution) -> float:
    """Mean photon number at the sender's mode of the delivered ensemble.

    Measured after all noise stages: tau*(-1 + y3 + x3^2 (a x1^2 + y1 + 4 sigma^2))/2.
    """
    a, _, _, _ = _unpack_form(std_form)
    sc = scenario
    val = (-1.0 + sc.y3 + sc.x3 ** 2 * (a * sc.x1 ** 2 + sc.y1 + 4.0 * enc.sigma ** 2)) * sc.tau / 2.0
    if val < -1e-12:
        raise InfeasibleEnergyError(f"negative sender energy {val}; scenario violates CP assumptions")
    return max(val, 0.0)


def sender_energy_at_encoding(std_form, scenario: NoiseScenario, enc: EncodingDistribution) -> float:
    """Physical sender energy right after encoding, before the stage-3 map and detector.

    Comparison quantity only; every budget in this module uses ``sender_energy``.
    """
    a, _, _, _ = _unpack_form(std_form)
    return (a * scenario.x1 ** 2 + scenario.y1 - 1.0) / 2.0 + 2.0 * enc.sigma ** 2


def sigma_adaptive(std_form, scenario: NoiseScenario, nbar: float) -> float:
    """Encoding width that exactly meets the photon budget under known noise."""
    if scenario.x3 == 0.0:
        raise DegenerateEncodingError("stage-3 map destroys the signal (x3 = 0)")
    a, _, _, _ = _unpack_form(std_form)
    rad = 2.0 * nbar + (1.0 - scenario.x3 ** 2 * (a * scenario.x1 ** 2 + scenario.y1) - scenario.y3) * scenario.tau
    if rad < -1e-9:
        raise InfeasibleEnergyError(
            f"state energy alone exceeds the photon budget (radicand {rad})")
    return math.sqrt(max(rad, 0.0)) / (2.0 * abs(scenario.x3) * math.sqrt(scenario.tau))


def classical_capacity(nbar: float) -> float:
    """Best coherent-state benchmark: (n+1) log2(n+1) - n log2 n, 0 at n = 0."""
    if nbar < 0:
        raise ContractViolationError(f"photon number must be >= 0, got {nbar}")
    if nbar == 0.0:
        return 0.0
    return float((nbar + 1.0) * math.log2(nbar + 1.0) - nbar * math.log2(nbar))


def noiseless_capacity(nbar: float) -> float:
    """Capacity of the ideal protocol at sender energy nbar: log2(1 + n + n^2)."""
    return math.log2(1.0 + nbar + nbar * nbar)


def r_opt_non_adaptive(nbar: float) -> float:
    return 0.5 * math.log(1.0 + 2.0 * nbar)


def r_opt_adaptive(scenario: NoiseScenario, nbar: float):
    """Budget-constrained optimal squeezing from the printed closed form (natural log).

    Evaluated through the algebraically equivalent cancellation-free rewrite
    arg = D+ / (2q + sqrt(4q^2 + D+ D-)), which stays finite in the noiseless
    limit where the printed expression degenerates to 0/0.  Returns None when
    the expression leaves its domain; callers fall back to direct maximization.
    """
    x1, y1, x2, y2, x3, y3, tau = (scenario.x1, scenario.y1, scenario.x2, scenario.y2,
                                   scenario.x3, scenario.y3, scenario.tau)
    p = -1.0 + x3 * x3 * y1 + y3
    w = x1 * x1 * x3 * x3 * (2.0 + (-1.0 + y2) * tau)
    d_minus = 2.0 * nbar * (x2 - x1 * x3) ** 2 - x2 * x2 * p * tau + 2.0 * x1 * x2 * x3 * p * tau + w
    d_plus = 2.0 * nbar * (x2 + x1 * x3) ** 2 - x2 * x2 * p * tau - 2.0 * x1 * x2 * x3 * p * tau + w
    q = x1 ** 3 * x2 * x3 ** 3 * tau
    disc = 4.0 * q * q + d_plus * d_minus
    if d_plus <= 0.0 or disc < 0.0:
        return None
    denom = 2.0 * q + math.sqrt(disc)
    if denom <= 0.0:
        return None
    return 0.5 * math.log(d_plus / denom)


def _adaptive_mi_at_r(r: float, scenario: NoiseScenario, nbar: float) -> float:
    form = _tmsv_form(r)
    try:
        sigma = sigma_adaptive(form, scenario, nbar)
    except InfeasibleEnergyError:
        return -math.inf
    return mutual_information(form, scenario, EncodingDistribution(sigma))


def r_budget_max(scenario: NoiseScenario, nbar: float, r_cap: float):
    """Largest squeezing whose bare state still fits the photon budget, capped at r_cap.

    Valid for any family whose sender block has mean diagonal cosh 2r (TMSV,
    kappa class).  None means even the unsqueezed state exceeds the budget.
    """
    k = scenario.x1 ** 2 * scenario.x3 ** 2
    base = 2.0 * nbar + (1.0 - scenario.x3 ** 2 * scenario.y1 - scenario.y3) * scenario.tau
    if k * scenario.tau == 0.0:
        return r_cap if base >= 0.0 else None
    arg = base / (k * scenario.tau)
    if arg < 1.0:
        return None
    return min(r_cap, 0.5 * math.acosh(arg))


def capacity(scenario: NoiseScenario, nbar: float, scheme: str = ADAPTIVE) -> CapacityResult:
    """Dense-coding capacity of the TMSV family under a sender photon budget.

    Adaptive: squeezing from the closed form (cross-validated against bounded
    golden-section maximization; on disagreement beyond 1e-6 bits the numerical
    optimum wins and ``closed_form_mismatch`` is set) and encoding width that
    saturates the budget under the true noise.  Non-adaptive: squeezing and
    width fixed at their noiseless-optimal values, evaluated under the noise.
    """
    if nbar <= 0:
        raise ContractViolationError(f"photon budget must be positive, got {nbar}")
    if scheme not in SCHEMES:
        raise ContractViolationError(f"scheme must be one of {SCHEMES}, got {scheme!r}")

    if scheme == NON_ADAPTIVE:
        r0 = r_opt_non_adaptive(nbar)
        sigma = math.sqrt((nbar - math.sinh(r0) ** 2) / 2.0)
        bits = mutual_information(_tmsv_form(r0), scenario, EncodingDistribution(sigma))
        return CapacityResult(bits, r0, sigma, scheme, True)

    if scenario.x3 == 0.0:
        # nothing encoded survives the stage-3 map; zero capacity at any width
        return CapacityResult(0.0, 0.0, 0.0, scheme, True)

    r_cap = math.asinh(math.sqrt(2.0 * nbar)) + 1.0
    r_hi = r_budget_max(scenario, nbar, r_cap)
    if r_hi is None:
        return CapacityResult(math.nan, math.nan, math.nan, scheme, False)

    objective = lambda r: _adaptive_mi_at_r(r, scenario, nbar)
    if r_hi == 0.0:
        r_num, v_num = 0.0, objective(0.0)
    else:
        r_num, v_num = maximize_scalar(objective, Bracket(0.0, r_hi, 1e-8))

    r_closed = r_opt_adaptive(scenario, nbar)
    if r_closed is not None:
        r_closed = min(max(r_closed, 0.0), r_hi)
        v_closed = objective(r_closed)
        if abs(v_closed - v_num) <= CLOSED_FORM_TOL:
            sigma = sigma_adaptive(_tmsv_form(r_closed), scenario, nbar)
            return CapacityResult(v_closed, r_closed, sigma, scheme, True)
    sigma = sigma_adaptive(_tmsv_form(r_num), scenario, nbar)
    return CapacityResult(v_num, r_num, sigma, scheme, True, closed_form_mismatch=True)


def quantum_advantage(scenario: NoiseScenario, nbar: float, scheme: str = ADAPTIVE) -> float:
    """Capacity minus the coherent-state benchmark; NaN when infeasible."""
    result = capacity(scenario, nbar, scheme)
    if not result.feasible:
        return math.nan
    return result.capacity_bits - classical_capacity(nbar)


def _min_feasible_nbar(scenario: NoiseScenario) -> float:
    base = (1.0 - scenario.x3 ** 2 * (scenario.x1 ** 2 + scenario.y1) - scenario.y3) * scenario.tau
    return max(0.0, -base / 2.0)


def threshold_energy(scenario: NoiseScenario, scheme: str = ADAPTIVE,
                     bracket=THRESHOLD_BRACKET, tol: float = THRESHOLD_TOL) -> float:
    """Sender energy where the quantum advantage changes sign, by bisection."""
    lo = max(bracket[0], _min_feasible_nbar(scenario) + 1e-9)
    hi = bracket[1]
    f = lambda n: quantum_advantage(scenario, n, scheme)
    flo, fhi = f(lo), f(hi)
    if math.isnan(flo) or math.isnan(fhi) or (flo > 0) == (fhi > 0):
        raise ThresholdNotFoundError(
            f"no advantage threshold for {scheme} scheme in [{lo}, {hi}]")
    return find_root_bisect(f, Bracket(lo, hi, tol))


def neg_conditional_entropy(scenario: NoiseScenario, nbar: float) -> float:
    """-S(A|B) of the delivered (pre-measurement) state at the adaptive optimal squeezing."""
    result = capacity(scenario, nbar, ADAPTIVE)
    if not result.feasible:
        raise InfeasibleEnergyError(f"budget {nbar} infeasible for this scenario")
    state = pipeline_state(_tmsv_form(result.r_opt), scenario)
    return -ps.conditional_entropy(state)


def neg_cond_entropy_tmsv_closed(nbar: float) -> float:
    """Noiseless -S(A|B) at the budget-optimal squeezing, closed form.

    Equals s(nu) with nu = (1 + 2n + 2n^2)/(1 + 2n); used as the independent
    check of the general symplectic-entropy path.
    """
    n = nbar
    num = ((1 + n) ** 2 * math.log2((1 + n) ** 2)
           - (n ** 2 * math.log2(n ** 2) if n > 0 else 0.0)
           - (1 + 2 * n) * math.log2(1 + 2 * n))
    return num / (1 + 2 * n)


def delta_Sc(scenario: NoiseScenario, nbar: float) -> float:
    """Conditional-entropy headroom: -S(A|B) at nbar minus its value at the advantage threshold.

    The threshold energy is recomputed for the given scenario; positive values
    accompany positive adaptive quantum advantage.
    """
    n_th = threshold_energy(scenario, ADAPTIVE)
    return neg_conditional_entropy(scenario, nbar) - neg_conditional_entropy(scenario, n_th)

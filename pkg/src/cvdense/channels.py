"""Single-mode deterministic Gaussian CP maps (X, Y) = (x*I2, y*I2).

A map is completely positive in vacuum-normalized units iff y >= |x^2 - 1|.
Channels act on one mode of a two-mode state as cov_block -> x^2 block + y*I
with the cross block scaled by x.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChannelConstructionError
from .phase_space import TwoModeState

CP_TOL = 1e-9

#: Y-prefactor conventions for the environmental (thermalizing) channel.
#: "eq29" uses (nbar + 1/2)(1 - e^{-gamma t}); "secIV" uses (nbar + 1)(...).
#: The published threshold times are reproduced by "eq29", which is the default.
ENV_CONVENTIONS = ("eq29", "secIV")


@dataclass(frozen=True)
class GaussianChannel:
    x: float
    y: float
    kind: str = "custom"

    def __post_init__(self):
        if self.y < 0:
            raise ChannelConstructionError(f"added noise must be non-negative, got y={self.y}")
        if not is_cp(self):
            raise ChannelConstructionError(
                f"map (x={self.x}, y={self.y}) is not completely positive: "
                f"requires y >= |x^2 - 1| = {abs(self.x**2 - 1)}"
            )


def is_cp(ch: GaussianChannel) -> bool:
    """Complete positivity of a scalar-isotropic map: y >= |x^2 - 1| - 1e-9."""
    return ch.y >= abs(ch.x * ch.x - 1.0) - CP_TOL


def identity_channel() -> GaussianChannel:
    return GaussianChannel(1.0, 0.0, "identity")


def amplifier_channel(s: float, n_th: float = 1.0) -> GaussianChannel:
    """Amplifier of gain parameter s >= 0 against a thermal environment n_th >= 1.

    (x, y) = (cosh s, n_th sinh^2 s); n_th = 1 is the quantum-limited amplifier.
    """
    if s < 0:
        raise ChannelConstructionError(f"gain parameter must be >= 0, got {s}")
    if n_th < 1:
        raise ChannelConstructionError(f"thermal parameter must be >= 1, got {n_th}")
    return GaussianChannel(np.cosh(s), n_th * np.sinh(s) ** 2, "amplifier")


def attenuator_channel(theta: float, n_th: float = 1.0) -> GaussianChannel:
    """Attenuator of angle theta mixing with a thermal environment n_th >= 1.

    (x, y) = (cos theta, n_th sin^2 theta); n_th = 1 is the pure-loss channel.
    """
    if n_th < 1:
        raise ChannelConstructionError(f"thermal parameter must be >= 1, got {n_th}")
    return GaussianChannel(np.cos(theta), n_th * np.sin(theta) ** 2, "attenuator")


def environmental_channel(gamma: float, t: float, nbar: float,
                          convention: str = "eq29") -> GaussianChannel:
    """Thermalizing channel from coupling gamma, interaction time t, environment photons nbar.

    x = exp(-gamma t / 2); y = (nbar + 1/2)(1 - e^{-gamma t}) under "eq29" or
    (nbar + 1)(1 - e^{-gamma t}) under "secIV".  Under "eq29" the map is CP
    only for nbar >= 1/2.
    """
    if gamma < 0 or t < 0 or nbar < 0:
        raise ChannelConstructionError("gamma, t and nbar must all be non-negative")
    if convention not in ENV_CONVENTIONS:
        raise ChannelConstructionError(
            f"unknown environmental convention {convention!r}; pick one of {ENV_CONVENTIONS}"
        )
    decay = np.exp(-gamma * t)
    prefactor = nbar + 0.5 if convention == "eq29" else nbar + 1.0
    return GaussianChannel(np.sqrt(decay), prefactor * (1.0 - decay), "environmental")


def make_channel(kind: str, **params) -> GaussianChannel:
    """Construct a channel by kind name: identity | amplifier | attenuator | environmental."""
    builders = {
        "identity": identity_channel,
        "amplifier": amplifier_channel,
        "attenuator": attenuator_channel,
        "environmental": environmental_channel,
    }
    if kind not in builders:
        raise ChannelConstructionError(f"unknown channel kind {kind!r}; pick one of {sorted(builders)}")
    return builders[kind](**params)


def apply_to_mode(state: TwoModeState, ch: GaussianChannel, mode: str) -> TwoModeState:
    """Apply a single-mode map to mode "A" or "B" of a two-mode state."""
    if mode not in ("A", "B"):
        raise ChannelConstructionError(f"mode must be 'A' or 'B', got {mode!r}")
    x, y = ch.x, ch.y
    d = state.d.copy()
    cov = state.cov.copy()
    sl = slice(0, 2) if mode == "A" else slice(2, 4)
    other = slice(2, 4) if mode == "A" else slice(0, 2)
    d[sl] *= x
    cov[sl, sl] = x * x * cov[sl, sl] + y * np.eye(2)
    cov[sl, other] = x * cov[sl, other]
    cov[other, sl] = cov[sl, other].T
    return TwoModeState(d, cov)

"""Dense coding with two-mode Gaussian states under realistic noise.

Simulates the continuous-variable dense-coding protocol when the shared
state, the encoded mode and the double-homodyne decoder are all imperfect,
and computes capacities, quantum advantage, conditional-entropy resources
and threshold noise strengths.
"""
from ._backend import available_backends, get_backend, set_backend
from .channels import (
    GaussianChannel,
    amplifier_channel,
    apply_to_mode,
    attenuator_channel,
    environmental_channel,
    identity_channel,
    is_cp,
    make_channel,
)
from .families import (
    DecompState,
    KappaState,
    StandardForm,
    decomp_mutual_information,
    decomp_optimum,
    decomp_state,
    kappa_capacity,
    kappa_mutual_information,
    kappa_state,
    pure_class_capacity,
    pure_class_state,
    random_pure,
    tmsv,
)
from .holevo import (
    PureStateSample,
    ScatterResult,
    entanglement_pure,
    holevo_pure,
    scatter_study,
)
from .phase_space import (
    SymplecticMatrix,
    TwoModeState,
    apply_symplectic,
    beam_splitter,
    conditional_entropy,
    entropy_fn,
    is_physical,
    mean_photon,
    reduce_mode,
    symplectic_eigenvalues,
    von_neumann_entropy,
)
from .protocol import (
    ADAPTIVE,
    NON_ADAPTIVE,
    CapacityResult,
    EncodingDistribution,
    NoiseScenario,
    capacity,
    classical_capacity,
    delta_Sc,
    mi_gaussian_oracle,
    mutual_information,
    noise_G,
    noiseless_capacity,
    pipeline_state,
    quantum_advantage,
    sender_energy,
    sigma_adaptive,
    threshold_energy,
)

__version__ = "0.1.0"

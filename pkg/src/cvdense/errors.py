"""Exception types shared across the package."""


class CVDenseError(Exception):
    """Base class for all cvdense errors."""


class ContractViolationError(CVDenseError, ValueError):
    """An input breaks a documented precondition (asymmetric matrix, non-symplectic transform, ...)."""


class UnphysicalStateError(CVDenseError, ValueError):
    """A covariance matrix or symplectic eigenvalue below the vacuum limit."""


class ChannelConstructionError(CVDenseError, ValueError):
    """Channel parameters outside their domain or violating complete positivity."""


class UnphysicalScenarioError(CVDenseError, ValueError):
    """A noise scenario produced a non-positive measurement variance."""


class InfeasibleEnergyError(CVDenseError, ValueError):
    """The photon budget cannot be met (negative encoding-power radicand)."""


class DegenerateEncodingError(CVDenseError, ValueError):
    """Encoding parameter cannot be recovered (full loss after encoding, singular joint covariance)."""


class BracketError(CVDenseError, ValueError):
    """Root bracketing failed: no sign change on the given interval."""


class ThresholdNotFoundError(CVDenseError, ValueError):
    """No advantage threshold exists inside the search bracket."""

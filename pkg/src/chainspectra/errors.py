"""Exception types shared across the package."""


class ChainSpectraError(Exception):
    """Base class for all package-specific errors."""


class DegenerateTransfer(ChainSpectraError):
    """Transfer eigenvalue is +-1; the v1/v2 basis does not exist."""


class InvalidA(ChainSpectraError):
    """Generalized cell vectors requested for a not in {+1, -1}."""


class ConvergenceFailure(ChainSpectraError):
    """Eigensolver iteration failed to converge."""


class IllConditionedBasis(ChainSpectraError):
    """Mode decomposition attempted too close to a band edge."""


class NoEdgeState(ChainSpectraError):
    """No decaying root exists for the requested boundary parameters."""


class GapClosed(ChainSpectraError):
    """k1 = k2: the band gap is closed, the Zak phase is undefined."""


class DegenerateDenominator(ChainSpectraError):
    """A closed-form ratio hit a vanishing denominator."""


class NoMatch(ChainSpectraError):
    """No admissible boundary stiffness exists for the requested branch."""


class PatternUndetermined(ChainSpectraError):
    """Boundary stiffness sits in an ambiguity tube; no in-band pattern applies."""


class StepUnderflow(ChainSpectraError):
    """Continuation step fell below the minimum step size."""


class ResonanceEncountered(ChainSpectraError):
    """A linear frequency hit an integer multiple of the branch frequency."""


class SingularFactor(ChainSpectraError):
    """The left factor of the two-layer transfer product is singular."""


class SizeCapExceeded(ChainSpectraError):
    """Requested 2D lattice exceeds the configured size cap."""

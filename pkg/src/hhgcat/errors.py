"""Typed exceptions raised across the library.

Every failure mode a caller may want to branch on gets its own class; the
CLI maps any :class:`HHGCatError` to exit code 3 (numerical/domain failure)
and reserves exit code 2 for configuration problems.
"""


class HHGCatError(Exception):
    """Base class for all hhgcat-specific failures."""


class CutoffTooSmall(HHGCatError):
    """Photon-number cutoff cannot represent the requested state faithfully."""


class DimensionMismatch(HHGCatError):
    """Operands live in Fock spaces of different dimension or mode count."""


class GridTooCoarse(HHGCatError):
    """Time grid does not resolve the fastest relevant oscillation."""


class NonFiniteState(HHGCatError):
    """Integrator produced NaN/Inf amplitudes."""


class ParameterOutOfRange(HHGCatError):
    """Physical parameters outside the regime the method can handle."""


class ParseError(HHGCatError):
    """Malformed input file."""


class NonUniformGrid(HHGCatError):
    """Time column of an ingested file is not uniformly spaced."""


class NonFiniteValue(HHGCatError):
    """Ingested file contains NaN/Inf entries."""


class ModeCountMismatch(HHGCatError):
    """Number of mode labels does not match the number of displacement amplitudes."""


class DegenerateSuperposition(HHGCatError):
    """Conditioning annihilated the state (projector variant with zero fundamental shift)."""


class UnsupportedVariant(HHGCatError):
    """Operation not defined for this field-state variant."""


class MultiModeUnsupported(HHGCatError):
    """Phase-space evaluation is single-mode only."""


class GridTooSmall(HHGCatError):
    """Phase-space grid does not cover the state's support."""


class OutOfGridRange(HHGCatError):
    """Requested time lies outside the sampled signal."""


class MissingTransitionDipoles(HHGCatError):
    """Operation needs the transition-dipole matrix series, which is absent."""


class WindowTooShort(HHGCatError):
    """Correlation window too short for a meaningful spectral estimate."""


class DivisionByZeroIntensity(HHGCatError):
    """Normalized correlation undefined because the mode intensity vanishes."""


class BasisTooSmall(HHGCatError):
    """Atomic basis has fewer than two states."""


class StepTooLarge(HHGCatError):
    """Propagation step or coupling violates the order-control estimate."""


class InvalidCovariance(HHGCatError):
    """Covariance matrix is asymmetric or violates the uncertainty relation."""

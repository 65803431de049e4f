"""Exception types shared across the package."""


class NhchainError(Exception):
    """Base class for all package-specific errors."""


class BinormVanishing(NhchainError):
    """Left/right eigenvector overlap below the floor: momentum too near an EP."""


class DegenerateMatrix(NhchainError):
    """Bloch matrix is scalar; eigenvector directions are arbitrary."""


class NonComparable(NhchainError):
    """Window inequality requested on quantities that are not real."""


class NoConvergence(NhchainError):
    """QR iteration exhausted its sweep budget."""


class LogOfZero(NhchainError):
    """Branch logarithm evaluated at zero."""


class DegenerateAbscissae(NhchainError):
    """Least-squares fit with all abscissae equal (or too few points)."""


class ModeAlreadyOccupied(NhchainError):
    """Quasiparticle insertion at an occupied mode."""


class ModeNotOccupied(NhchainError):
    """Mode removal at an unoccupied mode."""


class IndexUnstable(NhchainError):
    """Block-determinant sign did not stabilize along the twist sequence."""


class ComplexSpectrum(NhchainError):
    """Conformal tower requested for a grid with complex energies."""


class UnknownFamily(NhchainError):
    """Parameters do not belong to a recognized EP-tuned family."""


class GroundDegenerate(NhchainError):
    """Two candidate ground energies coincide in both real and imaginary part."""

    def __init__(self, message, energies=()):
        super().__init__(message)
        self.energies = tuple(energies)


class SizeBudgetExceeded(NhchainError):
    """Dense many-body construction beyond the supported size."""


class ConfigInvalid(NhchainError):
    """Run configuration failed validation."""


class IoFailure(NhchainError):
    """Output path could not be written."""

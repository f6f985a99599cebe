"""Exception types shared across the package."""


class CutCellDGError(Exception):
    """Base class for all solver errors."""


class AdmissibilityError(CutCellDGError):
    """A state violates physical admissibility (e.g. rho <= 0 or p <= 0)."""


class HyperbolicityError(CutCellDGError):
    """A coefficient matrix has a complex or defective spectrum."""


class MeshError(CutCellDGError):
    """Invalid mesh construction parameters."""


class DegenerateSpeedError(CutCellDGError):
    """Maximum wave speed is zero; the CFL time step is undefined."""


class UnsupportedOperationError(CutCellDGError):
    """Operation requested for an equation it does not apply to."""

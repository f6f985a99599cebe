"""Cut-cell discontinuous Galerkin solver for 1D hyperbolic systems.

Modal DG on meshes containing arbitrarily small cut cells, with a
penalty-type stabilization that restores the usual background-mesh CFL
condition, SSP Runge-Kutta marching, TVDM limiting, and a small experiment
harness (convergence studies, shock tubes, operator spectra).
"""

from .basis import DGState, Quadrature, project
from .equations import (advection, burgers, euler, linear_system,
                        make_equation, manufactured_burgers,
                        manufactured_euler, manufactured_linear_system)
from .errors import (AdmissibilityError, CutCellDGError, DegenerateSpeedError,
                     HyperbolicityError, MeshError, UnsupportedOperationError)
from .limiter import LimiterConfig, make_limiter
from .marching import advance, get_integrator, timestep_length
from .mesh import (CutCellMesh, banded_mesh, model_mesh, sod_mesh,
                   uniform_mesh)
from .riemann import (GodunovBurgers, LinearSystemExact, RoeEuler,
                      UpwindAdvection, make_flux)
from .spatial import SpatialOperator
from .spectral import operator_spectrum, spectral_abscissa

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "CutCellDGError", "CutCellMesh", "DGState",
    "DegenerateSpeedError", "GodunovBurgers", "HyperbolicityError",
    "LimiterConfig", "LinearSystemExact", "MeshError", "Quadrature",
    "RoeEuler", "SpatialOperator", "UnsupportedOperationError",
    "UpwindAdvection", "advance", "advection", "banded_mesh", "burgers",
    "euler", "get_integrator", "linear_system", "make_equation", "make_flux",
    "make_limiter", "manufactured_burgers", "manufactured_euler",
    "manufactured_linear_system", "model_mesh", "operator_spectrum",
    "project", "sod_mesh", "spectral_abscissa", "timestep_length",
    "uniform_mesh",
]

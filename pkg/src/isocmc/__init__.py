"""Discrete isothermic constant mean curvature surfaces in isotropic 3-space."""

from .errors import (
    ClosureError,
    ConfigError,
    ConsistencyError,
    DegenerateError,
    IsoCMCError,
    NotIsotropicError,
)
from .gauss import (
    CurvatureField,
    LightconeNet,
    beta_check,
    circularity_residuals,
    gauss_closed_form,
    gauss_nu,
    mean_curvature,
    propagate_gauss,
)
from .grid import EdgeLabels, GridDomain, integrate_increments, quad_closure
from .holomorphic import (
    HolomorphicGrid,
    christoffel_dual,
    cross_ratio,
    discrete_exponential,
    identity_scaling,
    verify_holomorphic,
)
from .meshio import curvature_table, export_obj, read_obj
from .minkowski import P, PTILDE, IsoSphere, embed_iso, extract_iso, mink_form, wedge
from .surfaces import ExampleSpec, closed_form, gauss_map, generate, parallel_surface, weierstrass_data
from .weierstrass import IsoOneForm, SurfaceNet, cmc_oneform, integrate_oneform, zmc_oneform

__version__ = "0.1.0"

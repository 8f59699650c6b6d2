"""Curvature engine for sphere bundles of Euclidean vector bundles with the Sasaki metric."""
from .algebra import EXACT, FLOAT, AtiyahFrame, FiberPair, inner_k, wedge
from .atiyah import AtiyahSpec, supra_curvature, supra_vanishes
from .base_geometry import (ComplexProjective, Generic, Product, SpaceForm, Surface2D, SymmetricSpace,
                            Unimodular3, curvature_jet, nabla_R, riemann)
from .sphere_bundle import (AtiyahBundle, GenericBundle, PlaneSpec, SphereBundleModel, TangentBundle,
                            constant_scalar_check, einstein_check, normalize_plane, positivity_bounds, ricci,
                            scalar, sectional, xi_form)
from .unimodular3 import MilnorConstants, curvature_constants, positive_scalar_verdict

__version__ = "0.1.0"

"""Numerical Weyl quantisation on kappa-Minkowski space.

Submodules:

* :mod:`~kappa_weyl.grid` - uniform grids, states and Fourier transforms;
* :mod:`~kappa_weyl.radial_group` - the radial group and its Weyl operators;
* :mod:`~kappa_weyl.symbols` and :mod:`~kappa_weyl.symbol_algebra` - momentum
  symbols, star product, group convolution, involutions and projections;
* :mod:`~kappa_weyl.quantization` - integral kernels of quantised symbols;
* :mod:`~kappa_weyl.functionals` - trace and Hilbert-Schmidt functionals;
* :mod:`~kappa_weyl.uncertainty` - uncertainty relations and physical scales.
"""
from .errors import KappaWeylError
from .functionals import TRACE_CONSTANT, hs_norm, trace_symbol
from .grid import DEFAULT_GRID, GridSpec, StateVector, make_state
from .quantization import C0, KernelMatrix, kernel_ccr, kernel_kappa, kernel_pi
from .radial_group import GroupElement, compose, inverse, weyl_act
from .symbol_algebra import convolve_group, star_momentum
from .symbols import DEFAULT_LATTICE, GaussianMixture, MomentumLattice, SampledSymbol

__version__ = "0.1.0"

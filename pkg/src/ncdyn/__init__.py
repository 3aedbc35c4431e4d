"""ncdyn: a desk-scale numerical workbench for noncommutative dynamics.

Finite-dimensional, fully computable versions of the core objects of
quantum dynamical semigroups: eigenvalue-list calculus and interaction
bounds, CP semigroups with prescribed stationary spectra, moment
polynomials with independent dilation oracles, the free-product section
algebra of time words, product-system index and gauge-group arithmetic,
and the off-white-noise Gaussian toolkit.
"""

from . import (  # noqa: F401
    cpdyn,
    dilation,
    eigenlists,
    errors,
    freeprod,
    moments,
    offwhite,
    opalg,
    prodsys,
)

__version__ = "0.1.0"

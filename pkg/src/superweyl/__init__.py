"""Magnetic Weyl calculus and its super-operator extension on phase-space lattices.

The package realizes the calculus on a truncated, discretized phase space
and verifies its defining algebraic identities (composition laws, gauge
covariance, product/dequantization consistency, trace and duality
identities, semiclassical expansion order, flux-gradient estimates) by
cross-checking independent computation routes.

Layout: :mod:`superweyl.grid` holds the lattices and symplectic transforms;
:mod:`superweyl.magnetics` the fields, potentials and flux phases;
:mod:`superweyl.weyl` the operator-level calculus; :mod:`superweyl.products`
the symbol product and expansion diagnostics; :mod:`superweyl.supercalc` the
operator-on-operator calculus; :mod:`superweyl.harness` the configuration-
driven verification suites behind the ``superweyl`` command line.
"""

from .grid import (
    DoubledPoint,
    DoubledSymbol,
    GridSpec,
    PhasePoint,
    PhaseSymbol,
    doubled_symplectic_form,
    japanese_bracket,
    make_grid,
    peetre_bound,
    reflect_right,
    sfourier,
    sfourier_doubled,
    symplectic_form,
    transpose_doubled,
)
from .magnetics import (
    GaugeFunction,
    MagneticField,
    VectorPotential,
    circulation,
    cocycle,
    exterior_derivative,
    flux_gradient_coefficients,
    gauge_shift,
    quadrangle_flux,
    scaled_triangle_flux,
    triangle_flux,
)
from .weyl import (
    OperatorMatrix,
    StateVector,
    conjugate_by_gauge,
    conjugate_by_unitary,
    momentum_op,
    position_op,
    quantize,
    weyl_system,
    wigner,
)
from .products import magnetic_poisson, moyal_product, semiclassical_defect
from .supercalc import (
    LiouvilleSpec,
    SuperOperatorMap,
    integral_apply,
    kernel_compose,
    kernel_map,
    liouville_symbol,
    semi_super_product,
    super_product,
    super_quantize,
    super_weyl_system,
    super_wigner,
)
from .seminorms import hoermander_seminorm, super_seminorm
from .harness import Report, SuiteConfig, emit_report, run_suite

__version__ = "0.1.0"

"""Multipole and local expansion machinery for the 3-D Laplace Green's
function in layered media, with empirical certification of the
exponential truncation-error bounds."""

from .medium import (
    LayeredMedium,
    LayerPoint,
    component_exists,
    homogeneous_medium,
    polarization_source,
    reflect,
    tau_map,
)
from .densities import (
    ReactionDensity,
    ReactionDensitySet,
    density_bound,
    interface_matrices,
    reaction_densities,
)
from .harmonics import (
    constants,
    legendre_p,
    normalized_legendre,
    sph_harm,
    sph_harm_table,
)
from .sommerfeld import (
    RadialIntegralSpec,
    bessel_j,
    cagniard_identity_check,
    eval_me_basis,
    eval_reaction_green,
    eval_reaction_le_coeff,
    eval_reaction_m2l_entry,
    radial_integral,
    sqrt_branch,
)
from .expansions import (
    Box,
    ChargeSystem,
    HarmonicExpansion,
    direct_potential,
    eval_expansion,
    eval_reaction_me,
    le_from_charges,
    l2l,
    m2l_free,
    m2l_reaction,
    m2m,
    me_from_charges,
    reaction_le_from_charges,
    reaction_me_from_charges,
)
from .lab import (
    ConvergenceReport,
    ExperimentConfig,
    fibonacci_sphere,
    generate_charges,
    run_experiment,
    run_property_suite,
)

__version__ = "0.1.0"

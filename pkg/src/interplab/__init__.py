"""interplab: a numerical laboratory for Lagrange interpolation constants,
logarithmic-potential diagnostics, and Bernstein-type inequalities."""

__version__ = "0.1.0"

from .nodes import (  # noqa: F401
    LogComplex,
    NodeSet,
    NodeSetError,
    SignedLog,
    chebyshev_nodes,
    equispaced_nodes,
    eval_node_poly,
    nearest_node_distance,
    node_poly_deriv_at,
    perturbed_nodes,
    random_nodes,
    read_nodeset,
    write_nodeset,
)
from .lagrange import (  # noqa: F401
    LebesgueReport,
    basis_eval,
    interpolate,
    lebesgue_function,
    lebesgue_integral,
    lebesgue_sup,
)
from .potential import (  # noqa: F401
    AmplitudeProfile,
    DensityProfile,
    amplitude_profile,
    arcsine_density,
    density_estimate,
    density_profile,
    log_potential,
    poisson_kernel,
    potential_level,
)
from .trig import (  # noqa: F401
    TrigPoly,
    TrigRoots,
    fejer_square_wave,
    find_real_roots,
    l1_norm,
    recip_deriv_sum,
    sinusoid,
    trig_from_roots,
    trig_lebesgue_quantities,
)
from .bernstein import (  # noqa: F401
    BernsteinReport,
    HoloSampler,
    Rect,
    global_bernstein_report,
    local_bernstein_report,
    unit_rescaled_poly,
    zero_count_disk,
)
from .complexint import (  # noqa: F401
    HarmonicMassReport,
    RationalFn,
    ResidueCheckResult,
    contour_integral_rect,
    harmonic_side_mass,
    poisson_dominance_check,
    residue_check,
    weighted_residue_check,
    wirtinger,
)
from .optimize import (  # noqa: F401
    OptimizationResult,
    lower_bound_certificate,
    optimize_nodes,
)

"""Kernels and near-invariance defects of finite-rank Toeplitz perturbations.

Truncated Hardy-space machinery for operators R = T_g + sum_i v_i <., u_i>:
numerical kernels, backward-shift defect spaces with their predicted
bounds and witnesses, and slot-coefficient kernel representations, plus a
scenario runner and a frozen verification catalogue behind the CLI.
"""

from .blaschke import BlaschkeProduct, blaschke_expand
from .catalogue import RowResult, catalogue_ids, run_catalogue
from .cgp import (
    CgpFrame,
    RepresentationReport,
    build_cgp_frame,
    cgp_decompose,
    k_membership,
    verify_corollary,
)
from .defects import (
    WitnessEntry,
    WitnessReport,
    defect_witness,
    lambda_set,
    model_space,
    theorem_defect_bound,
    theorem_defect_space,
    verify_defect_theorem,
)
from .errors import (
    BoundaryAmbiguityError,
    ConditioningError,
    DegenerateBranchError,
    HeadroomError,
    HypothesisViolationError,
    InputError,
    NotInvertibleError,
    TruncationMismatchError,
)
from .operators import (
    ConjInnerSymbol,
    InnerSymbol,
    InvertibleProductSymbol,
    OperatorMatrix,
    PerturbationSpec,
    TrigPolySymbol,
    ZeroSymbol,
    apply,
    perturbed_matrix,
    symbol_fourier,
    symbol_from_json,
    toeplitz_matrix,
    toeplitz_product_residual,
)
from .runner import (
    CheckOutcome,
    Scenario,
    ScenarioReport,
    SuiteReport,
    Tolerances,
    run_scenario,
    run_suite,
    scenarios_from_json,
)
from .series import (
    AnalyticSeries,
    LaurentSeries,
    backshift,
    conj_on_circle,
    embed,
    inner_product,
    multiply,
    multiply_analytic,
    reproducing_kernel,
    riesz_project,
    taylor_invert,
)
from .subspaces import (
    DefectReport,
    Subspace,
    contains,
    kernel_subspace,
    minimal_defect,
    principal_angles,
    span,
    vanish_at_zero,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSeries",
    "BlaschkeProduct",
    "BoundaryAmbiguityError",
    "CgpFrame",
    "CheckOutcome",
    "ConditioningError",
    "ConjInnerSymbol",
    "DefectReport",
    "DegenerateBranchError",
    "HeadroomError",
    "HypothesisViolationError",
    "InnerSymbol",
    "InputError",
    "InvertibleProductSymbol",
    "LaurentSeries",
    "NotInvertibleError",
    "OperatorMatrix",
    "PerturbationSpec",
    "RepresentationReport",
    "RowResult",
    "Scenario",
    "ScenarioReport",
    "Subspace",
    "SuiteReport",
    "Tolerances",
    "TrigPolySymbol",
    "TruncationMismatchError",
    "WitnessEntry",
    "WitnessReport",
    "ZeroSymbol",
    "apply",
    "backshift",
    "blaschke_expand",
    "build_cgp_frame",
    "catalogue_ids",
    "cgp_decompose",
    "conj_on_circle",
    "contains",
    "defect_witness",
    "embed",
    "inner_product",
    "k_membership",
    "kernel_subspace",
    "lambda_set",
    "minimal_defect",
    "model_space",
    "multiply",
    "multiply_analytic",
    "perturbed_matrix",
    "principal_angles",
    "reproducing_kernel",
    "riesz_project",
    "run_catalogue",
    "run_scenario",
    "run_suite",
    "scenarios_from_json",
    "span",
    "symbol_fourier",
    "symbol_from_json",
    "taylor_invert",
    "theorem_defect_bound",
    "theorem_defect_space",
    "toeplitz_matrix",
    "toeplitz_product_residual",
    "vanish_at_zero",
    "verify_corollary",
    "verify_defect_theorem",
]

"""Near backward-shift invariance: predicted defect spaces and witnesses."""

import numpy as np
import pytest

from conftest import disk_invertible_poly, random_blaschke, seeded_perturbation
from neartoep.blaschke import BlaschkeProduct, blaschke_expand
from neartoep.defects import (
    defect_witness,
    lambda_set,
    model_space,
    theorem_defect_bound,
    theorem_defect_space,
    verify_defect_theorem,
)
from neartoep.errors import HypothesisViolationError, InputError
from neartoep.operators import (
    ConjInnerSymbol,
    InnerSymbol,
    InvertibleProductSymbol,
    PerturbationSpec,
    TrigPolySymbol,
    ZeroSymbol,
)
from neartoep.series import (
    AnalyticSeries,
    LaurentSeries,
    backshift,
    multiply_analytic,
)
from neartoep.subspaces import contains, kernel_subspace, principal_angles, span

CONTAINMENT_TOL = 1e-7
WITNESS_TOL = 1e-8
ANGLE_TOL = 1e-10
N = 64


def unit(coeffs, n=N):
    f = AnalyticSeries.from_coeffs(coeffs, n)
    return f * (1.0 / f.norm())


def test_model_space_dimension_equals_degree():
    assert model_space(BlaschkeProduct(z_power=3), N).dim == 3
    theta = BlaschkeProduct.from_points([0.4, -0.2 + 0.1j], z_power=1)
    assert model_space(theta, N).dim == 3


def test_monomial_model_space_is_low_degree_polynomials():
    m = model_space(BlaschkeProduct(z_power=2), N)
    poly = span([AnalyticSeries.monomial(j, N) for j in range(2)], N)
    assert float(principal_angles(m, poly).max(initial=0.0)) < ANGLE_TOL


def test_backshifted_inner_function_lies_in_model_space():
    theta = BlaschkeProduct.from_points([0.5, -0.3], z_power=1)
    k_theta = model_space(theta, 128)
    s_theta = backshift(blaschke_expand(theta, 128))
    ok, resid = contains(k_theta, s_theta, 1e-8)
    assert ok, resid


def test_lambda_set_tracks_divisibility():
    theta = BlaschkeProduct(z_power=2)
    theta_exp = blaschke_expand(theta, N)
    divisible = multiply_analytic(theta_exp, unit([0.5, 1.0]))
    mixed = unit([1.0, 0.25])
    assert lambda_set(theta, [divisible], N) == set()
    assert lambda_set(theta, [mixed], N) == {1}
    assert lambda_set(theta, [divisible, mixed], N) == {2}


def test_zero_symbol_defect_space_is_the_pairing_span():
    u = unit([1.0, 0.5, -0.25])
    v = AnalyticSeries.from_coeffs([0, 1.0], N)
    pert = PerturbationSpec(((u, v),))
    f = theorem_defect_space(ZeroSymbol(), pert, N)
    want = span([u], N)
    assert f.dim == 1
    assert float(principal_angles(f, want).max()) < ANGLE_TOL
    assert theorem_defect_bound(ZeroSymbol(), pert, N) == 1


def test_monomial_symbol_defect_space_is_shifted_replacement():
    m = 2
    u = unit([1.0])
    v = AnalyticSeries.from_coeffs([0.5, 0, 0, 0, 1.0], N)
    pert = PerturbationSpec(((u, v),))
    sym = InnerSymbol(BlaschkeProduct(z_power=m))
    f = theorem_defect_space(sym, pert, N)
    shifted = v
    for _ in range(m + 1):
        shifted = backshift(shifted)
    assert float(principal_angles(f, span([shifted], N)).max()) < ANGLE_TOL


def test_conj_inner_bound_counts_model_components():
    theta = BlaschkeProduct(z_power=2)
    theta_exp = blaschke_expand(theta, N)
    u_div = multiply_analytic(theta_exp, unit([1.0, 0.3]))
    u_div = u_div * (1.0 / u_div.norm())
    u_mix = unit([1.0, 0, 0, 0.2])
    u_mix = u_mix - u_div * complex(np.vdot(u_div.coeffs, u_mix.coeffs))
    u_mix = u_mix * (1.0 / u_mix.norm())
    v1 = AnalyticSeries.from_coeffs([0, 1.0], N)
    v2 = AnalyticSeries.from_coeffs([0, 0, 0, 0.5], N)
    sym = ConjInnerSymbol(theta)
    pert_div = PerturbationSpec(((u_div, v1),))
    assert theorem_defect_bound(sym, pert_div, N) == 1
    pert_both = PerturbationSpec(((u_div, v1), (u_mix, v2)))
    assert theorem_defect_bound(sym, pert_both, N) == 3


def test_witness_validates_its_hypotheses():
    u = unit([1.0])
    v = AnalyticSeries.from_coeffs([0, 1.0], N)
    pert = PerturbationSpec(((u, v),))
    nonvanishing = AnalyticSeries.from_coeffs([1.0, 1.0], N)
    with pytest.raises(HypothesisViolationError):
        defect_witness(ZeroSymbol(), nonvanishing, pert)
    outside = AnalyticSeries.from_coeffs([0, 1.0], N)  # <z, 1> = 0 but R z = v != 0
    with pytest.raises(HypothesisViolationError):
        defect_witness(InnerSymbol(BlaschkeProduct(z_power=1)), outside, pert)


def test_unsupported_symbol_rejected():
    u = unit([1.0])
    v = AnalyticSeries.from_coeffs([0, 1.0], N)
    pert = PerturbationSpec(((u, v),))
    sym = TrigPolySymbol(LaurentSeries.from_pairs([(-1, 1.0), (2, 1.0)], N))
    with pytest.raises(InputError):
        verify_defect_theorem(sym, pert, N)


CASE_SEEDS = {"zero": 101, "inner": 202, "invertible": 303, "conj_inner": 404}


@pytest.mark.parametrize("case", ["zero", "inner", "invertible", "conj_inner"])
def test_verify_defect_theorem_seeded_instance(case):
    rng = np.random.default_rng(CASE_SEEDS[case])
    pert = seeded_perturbation(rng, N, rank=2, max_degree=6)
    if case == "zero":
        sym = ZeroSymbol()
    elif case == "inner":
        sym = InnerSymbol(random_blaschke(rng))
    elif case == "invertible":
        sym = InvertibleProductSymbol(
            disk_invertible_poly(rng, N), disk_invertible_poly(rng, N)
        )
    else:
        sym = ConjInnerSymbol(random_blaschke(rng, max_degree=2))
    report, witness = verify_defect_theorem(sym, pert, N)
    assert report.bound_from_theorem is not None
    assert report.defect_dim <= report.bound_from_theorem
    assert report.contained_in_theorem_space
    assert report.max_residual_outside_theorem_space < CONTAINMENT_TOL
    assert witness.max_membership_residual < WITNESS_TOL
    assert witness.max_w_in_space_residual < WITNESS_TOL


def test_defect_matches_brute_force_on_small_case():
    # rank-one annihilator perturbation: kernel is the hyperplane u-perp
    u = unit([1.0, 0.5])
    v = AnalyticSeries.from_coeffs([0, 0, 1.0], N)
    pert = PerturbationSpec(((u, v),))
    report, _ = verify_defect_theorem(ZeroSymbol(), pert, N)
    assert report.defect_dim == 1
    from neartoep.operators import perturbed_matrix, symbol_fourier, toeplitz_matrix

    op = perturbed_matrix(toeplitz_matrix(symbol_fourier(ZeroSymbol(), N)), pert)
    m = kernel_subspace(op, 1e-9, column_cap=N // 2)
    # brute force: S* applied to each vanishing basis vector, residual rank
    from neartoep.subspaces import vanish_at_zero

    w = vanish_at_zero(m)
    resid = []
    for j in range(w.dim):
        h = AnalyticSeries(w.frame[:, j].copy(), N)
        sh = backshift(h)
        resid.append(sh.coeffs - m.frame @ (m.frame.conj().T @ sh.coeffs))
    rank = np.linalg.matrix_rank(np.column_stack(resid), tol=1e-9)
    assert rank == report.defect_dim

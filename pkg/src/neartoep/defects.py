"""Case-specific defect spaces and witnesses for perturbed-Toeplitz kernels.

For each supported symbol class this module builds the predicted defect
space F, constructs the witness w that returns S*h + w to the kernel, and
runs the end-to-end check: computed minimal defect against the predicted
bound, residual directions against F, and the witness contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct, blaschke_expand
from .errors import HypothesisViolationError, InputError
from .operators import (
    ConjInnerSymbol,
    InnerSymbol,
    InvertibleProductSymbol,
    OperatorMatrix,
    PerturbationSpec,
    Symbol,
    ZeroSymbol,
    apply,
    perturbed_matrix,
    symbol_fourier,
    toeplitz_matrix,
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
    riesz_project,
    taylor_invert,
)
from .subspaces import (
    DefectReport,
    Subspace,
    contains,
    kernel_subspace,
    minimal_defect,
    span,
    vanish_at_zero,
)

# Relative projection-norm threshold deciding whether an inner function
# divides u (projection onto the model space below it counts as zero).
DIVISIBILITY_TOL = 1e-8

WITNESS_KERNEL_TOL = 1e-8

_DEFECT_CASES = (ZeroSymbol, InnerSymbol, InvertibleProductSymbol, ConjInnerSymbol)


def _require_defect_case(sym: Symbol) -> None:
    if not isinstance(sym, _DEFECT_CASES):
        raise InputError(
            f"no defect theorem for symbol class {type(sym).__name__!r}"
        )


def model_space(
    theta: BlaschkeProduct, truncation: int, rank_tol: float = 1e-9
) -> Subspace:
    """Kernel of the conjugate-inner Toeplitz matrix (truncated model space)."""
    sym = conj_on_circle(blaschke_expand(theta, truncation))
    return kernel_subspace(toeplitz_matrix(sym, label="conj-inner"), rank_tol)


def conj_toeplitz_apply(f: AnalyticSeries, h: AnalyticSeries) -> AnalyticSeries:
    """Apply the Toeplitz operator with symbol conj(f) to h."""
    return riesz_project(multiply(conj_on_circle(f), embed(h)))


def lambda_set(
    theta: BlaschkeProduct,
    u_list: list[AnalyticSeries],
    truncation: int,
    tol: float = DIVISIBILITY_TOL,
) -> set[int]:
    """1-based indices k with nonzero model-space component of u_k (theta does not divide u_k)."""
    k_theta = model_space(theta, truncation)
    out = set()
    for idx, u in enumerate(u_list, start=1):
        uu = u.resized(truncation)
        part = k_theta.frame @ (k_theta.frame.conj().T @ uu.coeffs)
        if np.linalg.norm(part) > tol * max(uu.norm(), 1e-300):
            out.add(idx)
    return out


def _invertible_chain(sym: InvertibleProductSymbol, f: AnalyticSeries) -> AnalyticSeries:
    """T_{1/f1} T_{conj(1/f2)} applied to f."""
    n = f.truncation
    f1_inv = taylor_invert(sym.f1.resized(n))
    f2_inv = taylor_invert(sym.f2.resized(n))
    return multiply_analytic(f1_inv, conj_toeplitz_apply(f2_inv, f))


def theorem_defect_space(
    sym: Symbol,
    pert: PerturbationSpec,
    truncation: int,
    rank_tol: float = 1e-9,
    divisibility_tol: float = DIVISIBILITY_TOL,
) -> Subspace:
    """The predicted defect space F for the given symbol class."""
    _require_defect_case(sym)
    if not pert.terms:
        return Subspace.zero(truncation, rank_tol)
    us = [u.resized(truncation) for u, _ in pert.terms]
    vs = [v.resized(truncation) for _, v in pert.terms]
    if isinstance(sym, ZeroSymbol):
        return span(us, truncation, rank_tol)
    if isinstance(sym, InnerSymbol):
        theta = blaschke_expand(sym.product, truncation)
        return span([conj_toeplitz_apply(theta, backshift(v)) for v in vs],
                    truncation, rank_tol)
    if isinstance(sym, InvertibleProductSymbol):
        return span([_invertible_chain(sym, backshift(v)) for v in vs],
                    truncation, rank_tol)
    theta = blaschke_expand(sym.product, truncation)
    vectors = [multiply_analytic(theta, backshift(v)) for v in vs]
    k_theta = model_space(sym.product, truncation, rank_tol)
    lam = lambda_set(sym.product, us, truncation, divisibility_tol)
    for idx in sorted(lam):
        u = us[idx - 1]
        proj = k_theta.frame @ (k_theta.frame.conj().T @ u.coeffs)
        vectors.append(AnalyticSeries(proj, truncation))
    return span(vectors, truncation, rank_tol)


def theorem_defect_bound(
    sym: Symbol, pert: PerturbationSpec, truncation: int,
    divisibility_tol: float = DIVISIBILITY_TOL,
) -> int:
    _require_defect_case(sym)
    n = pert.rank_bound
    if isinstance(sym, ConjInnerSymbol) and n:
        us = [u.resized(truncation) for u, _ in pert.terms]
        return n + len(lambda_set(sym.product, us, truncation, divisibility_tol))
    return n


def defect_witness(
    sym: Symbol,
    h: AnalyticSeries,
    pert: PerturbationSpec,
    operator: OperatorMatrix | None = None,
    kernel_tol: float = WITNESS_KERNEL_TOL,
) -> AnalyticSeries:
    """The proof's corrector w with S*h + w back in the kernel.

    Requires h in the kernel with h(0) = 0 (validated); the conjugate-inner
    case builds the negative-frequency decomposition explicitly.
    """
    _require_defect_case(sym)
    n = h.truncation
    if operator is None:
        operator = perturbed_matrix(
            toeplitz_matrix(symbol_fourier(sym, n)), pert.resized(n)
        )
    if abs(h.coeffs[0]) > kernel_tol * max(1.0, h.norm()):
        raise HypothesisViolationError("witness needs h(0) = 0")
    image = apply(operator, h)
    if image.norm() > kernel_tol * max(1.0, h.norm()):
        raise HypothesisViolationError("witness needs h in the kernel")
    if not pert.terms:
        return AnalyticSeries.zero(n)
    pert = pert.resized(n)
    sh = backshift(h)
    weights = [inner_product(h, u) for u, _ in pert.terms]
    if isinstance(sym, ZeroSymbol):
        acc = AnalyticSeries.zero(n)
        for u, _ in pert.terms:
            acc = acc + inner_product(sh, u) * u
        return -acc
    if isinstance(sym, InnerSymbol):
        theta = blaschke_expand(sym.product, n)
        acc = AnalyticSeries.zero(n)
        for wgt, (_, v) in zip(weights, pert.terms):
            acc = acc + wgt * conj_toeplitz_apply(theta, backshift(v))
        return acc
    if isinstance(sym, InvertibleProductSymbol):
        acc = AnalyticSeries.zero(n)
        for wgt, (_, v) in zip(weights, pert.terms):
            acc = acc + wgt * _invertible_chain(sym, backshift(v))
        return acc
    return _conj_inner_witness(sym, h, pert, weights)


def _conj_inner_witness(
    sym: ConjInnerSymbol,
    h: AnalyticSeries,
    pert: PerturbationSpec,
    weights: list[complex],
) -> AnalyticSeries:
    n = h.truncation
    theta = blaschke_expand(sym.product, n)
    theta_bar = conj_on_circle(theta)
    psi = multiply(theta_bar, embed(backshift(h)))
    for wgt, (_, v) in zip(weights, pert.terms):
        psi = psi + wgt * embed(backshift(v))
    # Negative-frequency frame for B = span of conj(theta) * (model part of
    # u_i); membership matches the divisibility call used by the bound, so
    # numerically-zero parts never contribute junk directions.
    k_theta = model_space(sym.product, n)
    lam = lambda_set(sym.product, [u for u, _ in pert.terms], n)
    b_vectors = []
    for idx in sorted(lam):
        u = pert.terms[idx - 1][0]
        part = k_theta.frame @ (k_theta.frame.conj().T @ u.coeffs)
        b_vectors.append(multiply(theta_bar, embed(AnalyticSeries(part, n))).coeffs)
    acc = AnalyticSeries.zero(n)
    for wgt, (_, v) in zip(weights, pert.terms):
        acc = acc + wgt * multiply_analytic(theta, backshift(v))
    if not b_vectors:
        return acc
    bmat = np.column_stack(b_vectors)
    q, _ = np.linalg.qr(bmat)
    psi1 = LaurentSeries(q @ (q.conj().T @ psi.coeffs), n)
    theta_psi1 = riesz_project(multiply(embed(theta), psi1))
    return acc - theta_psi1


@dataclass(frozen=True)
class WitnessEntry:
    witness: AnalyticSeries
    membership_residual: float
    w_in_space_residual: float

    def to_json_dict(self) -> dict:
        return {
            "witness": self.witness.to_json_dict(),
            "membership_residual": self.membership_residual,
            "w_in_space_residual": self.w_in_space_residual,
        }


@dataclass(frozen=True)
class WitnessReport:
    entries: tuple[WitnessEntry, ...]

    @property
    def max_membership_residual(self) -> float:
        return max((e.membership_residual for e in self.entries), default=0.0)

    @property
    def max_w_in_space_residual(self) -> float:
        return max((e.w_in_space_residual for e in self.entries), default=0.0)

    def to_json_dict(self) -> dict:
        return {
            "max_membership_residual": self.max_membership_residual,
            "max_w_in_space_residual": self.max_w_in_space_residual,
            "entries": [e.to_json_dict() for e in self.entries],
        }


def verify_defect_theorem(
    sym: Symbol,
    pert: PerturbationSpec,
    truncation: int,
    rank_tol: float = 1e-9,
    containment_tol: float = 1e-7,
    witness_tol: float = WITNESS_KERNEL_TOL,
    column_cap: int | None = None,
) -> tuple[DefectReport, WitnessReport]:
    """End-to-end check of the defect prediction for one instance.

    Failures land in the report fields; only malformed inputs raise.
    column_cap None picks the interior window truncation // 2, which keeps
    band-cutoff artifacts at the top of the matrix out of the kernel.
    """
    _require_defect_case(sym)
    pert_n = pert.resized(truncation)
    operator = perturbed_matrix(
        toeplitz_matrix(symbol_fourier(sym, truncation)), pert_n
    )
    cap = truncation // 2 if column_cap is None else column_cap
    m = kernel_subspace(operator, rank_tol, column_cap=cap)
    base = minimal_defect(m)
    f_space = theorem_defect_space(sym, pert_n, truncation, rank_tol)
    bound = theorem_defect_bound(sym, pert_n, truncation)
    # S*M sits inside M + F; residual directions are orthogonal to M already,
    # so containment is tested against the joint span, not F alone.
    joint = span(
        list(m.frame.T) + list(f_space.frame.T), truncation, rank_tol=rank_tol
    )
    worst_outside = 0.0
    for j in range(base.residual_frame.dim):
        _, resid = contains(joint, base.residual_frame.frame[:, j], containment_tol)
        worst_outside = max(worst_outside, resid)
    report = DefectReport(
        defect_dim=base.defect_dim,
        residual_frame=base.residual_frame,
        singular_values=base.singular_values,
        bound_from_theorem=bound,
        contained_in_theorem_space=worst_outside < containment_tol,
        max_residual_outside_theorem_space=worst_outside,
    )
    entries = []
    vanishing = vanish_at_zero(m)
    for j in range(vanishing.dim):
        h = AnalyticSeries(vanishing.frame[:, j].copy(), truncation)
        w = defect_witness(sym, h, pert_n, operator=operator, kernel_tol=witness_tol)
        candidate = backshift(h) + w
        scale = max(1.0, candidate.norm())
        membership = apply(operator, candidate).norm() / scale
        if w.norm() == 0.0:
            w_resid = 0.0
        else:
            _, w_resid = contains(f_space, w, witness_tol)
        entries.append(WitnessEntry(w, float(membership), float(w_resid)))
    return report, WitnessReport(tuple(entries))

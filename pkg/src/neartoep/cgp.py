"""Shift-stable representations of perturbed-Toeplitz kernels.

Each supported symbol class admits a representation of the kernel as
f = sum_j A_j k_j with the coefficient tuple (k_0, ..., k_m) ranging over
the nullspace of a small family of linear clauses.  This module builds the
slot maps A_j and the clause family for every branch, decomposes kernel
vectors back into coefficient tuples, and verifies both directions against
the computed kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .blaschke import BlaschkeProduct, blaschke_expand
from .defects import model_space
from .errors import (
    DegenerateBranchError,
    HeadroomError,
    HypothesisViolationError,
    InputError,
)
from .operators import (
    ConjInnerSymbol,
    InnerSymbol,
    InvertibleProductSymbol,
    PerturbationSpec,
    Symbol,
    ZeroSymbol,
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
    laurent_shift,
    multiply,
    multiply_analytic,
    riesz_project,
    taylor_invert,
)
from .subspaces import (
    Subspace,
    _fix_phases,
    complement_within,
    contains,
    direct_sum,
    kernel_subspace,
    principal_angles,
    project,
    span,
)

# Scalar branch decisions (a mean or pairing counting as zero).
DEGENERATE_BRANCH_TOL = 1e-10
# Below this the branch scalars are considered genuinely ill-posed.
DENOMINATOR_FLOOR = 1e-14
NORM_IDENTITY_TOL = 1e-10
INNER_MODULUS_TOL = 1e-8
SAMPLE_CAP = 32
_PAD_TOL = 1e-12


def mult_matrix(f: AnalyticSeries) -> np.ndarray:
    """Truncated matrix of multiplication by the analytic function f."""
    return toeplitz_matrix(embed(f), label="mult").entries


def conj_mult_matrix(f: AnalyticSeries) -> np.ndarray:
    """Truncated matrix of the Toeplitz operator with symbol conj(f)."""
    return toeplitz_matrix(conj_on_circle(f), label="conj-mult").entries


def shift_matrix(truncation: int) -> np.ndarray:
    return np.eye(truncation, k=-1, dtype=np.complex128)


def _abs_squared(f: AnalyticSeries) -> LaurentSeries:
    return multiply(embed(f), conj_on_circle(f))


def is_numerically_inner(f: AnalyticSeries, tol: float = INNER_MODULUS_TOL) -> bool:
    """Whether |f| = 1 on a circle grid, up to tol."""
    grid = 4 * f.truncation
    angles = 2.0 * np.pi * np.arange(grid) / grid
    vand = np.exp(1j * np.outer(angles, np.arange(f.truncation)))
    values = vand @ f.coeffs
    return bool(np.max(np.abs(np.abs(values) - 1.0)) < tol)


@dataclass(frozen=True)
class LinearClause:
    """One linear condition on the coefficient tuple.

    mats holds one rows-by-truncation block per slot; None marks a slot the
    clause does not touch.  The clause reads: sum_j mats[j] @ k_j = 0.
    """

    label: str
    mats: tuple

    def __post_init__(self) -> None:
        rows = {m.shape[0] for m in self.mats if m is not None}
        if len(rows) > 1:
            raise InputError(f"clause {self.label!r} mixes row counts {sorted(rows)}")
        for m in self.mats:
            if m is not None:
                m.flags.writeable = False

    @property
    def row_count(self) -> int:
        for m in self.mats:
            if m is not None:
                return int(m.shape[0])
        return 0

    def residual(self, k_vectors: Sequence[np.ndarray]) -> float:
        acc = None
        for mat, k in zip(self.mats, k_vectors):
            if mat is None:
                continue
            term = mat @ k
            acc = term if acc is None else acc + term
        if acc is None:
            return 0.0
        return float(np.max(np.abs(acc)))


def ip_family_clause(
    vectors: Sequence[AnalyticSeries | None],
    depth: int,
    label: str = "moment-family",
) -> LinearClause:
    """Rows <k_j, z^n v_j> summed over slots, for n = 0 .. depth-1."""
    mats = []
    for v in vectors:
        if v is None or v.norm() == 0.0:
            mats.append(None)
            continue
        n = v.truncation
        rows = np.zeros((depth, n), dtype=np.complex128)
        for r in range(min(depth, n)):
            rows[r, r:] = np.conj(v.coeffs[: n - r])
        mats.append(rows)
    return LinearClause(label, tuple(mats))


def model_membership_clause(
    theta_exp: AnalyticSeries,
    factors: Sequence[AnalyticSeries | None],
    label: str = "model-space",
) -> LinearClause:
    """sum_j factor_j * k_j must lie in the kernel of the conj-inner operator."""
    tmat = conj_mult_matrix(theta_exp)
    mats = tuple(
        None if f is None else tmat @ mult_matrix(f) for f in factors
    )
    return LinearClause(label, mats)


def constant_value_clause(
    factors: Sequence[AnalyticSeries | None],
    label: str = "constant-value",
) -> LinearClause:
    """sum_j factor_j * k_j must be a constant function."""
    mats = tuple(
        None if f is None else mult_matrix(f)[1:, :] for f in factors
    )
    return LinearClause(label, mats)


def zero_slot_clause(
    slot_count: int, slot: int, truncation: int, label: str = "zero-slot"
) -> LinearClause:
    mats = [None] * slot_count
    mats[slot] = np.eye(truncation, dtype=np.complex128)
    return LinearClause(label, tuple(mats))


@dataclass(frozen=True)
class CgpFrame:
    """Slot maps, clause family, and invariants for one kernel representation."""

    case_tag: str
    branch: str
    truncation: int
    slot_maps: tuple
    clauses: tuple
    f0: AnalyticSeries
    e_list: tuple
    constraint_vectors: tuple
    degree_pad: int
    isometric: bool
    expected_trivial: bool = False
    notes: tuple = ()

    def __post_init__(self) -> None:
        for m in self.slot_maps:
            m.flags.writeable = False

    @property
    def slot_count(self) -> int:
        return len(self.slot_maps)

    def named_vector(self, name: str) -> AnalyticSeries | None:
        for key, vec in self.constraint_vectors:
            if key == name:
                return vec
        return None


def _degree_pad(slot_maps: Sequence[np.ndarray]) -> int:
    pad = 0
    for mat in slot_maps:
        col = np.abs(mat[:, 0])
        nz = np.nonzero(col > _PAD_TOL)[0]
        if nz.size:
            pad = max(pad, int(nz[-1]))
    return pad


def projection_of_one(m: Subspace) -> AnalyticSeries:
    return project(m, AnalyticSeries.one(m.truncation))


def w_theta(
    theta_exp: AnalyticSeries, v: AnalyticSeries, u_theta: AnalyticSeries
) -> complex:
    """1 + <theta v, u_theta>, the split-branch selector."""
    return 1.0 + complex(inner_product(multiply_analytic(theta_exp, v), u_theta))


def rho_theta(
    theta_exp: AnalyticSeries,
    v: AnalyticSeries,
    u1: AnalyticSeries,
    wt: complex,
) -> complex:
    den = u1.norm() ** 2 + abs(wt) ** 2 * v.norm() ** 2
    if den < DENOMINATOR_FLOOR:
        raise DegenerateBranchError("projection coefficient denominator vanishes")
    num = np.conj(u1.coeffs[0]) + np.conj(theta_exp.coeffs[0] * v.coeffs[0]) * wt
    return complex(num / den)


def _single_term(pert: PerturbationSpec) -> tuple[AnalyticSeries, AnalyticSeries]:
    if pert.rank_bound != 1:
        raise HypothesisViolationError(
            "kernel representation needs a rank-one perturbation"
        )
    u, v = pert.terms[0]
    if backshift(v).norm() <= 1e-14 * max(1.0, v.norm()):
        raise HypothesisViolationError("kernel representation needs a nonconstant v")
    return u, v


def _trivial_frame(case_tag: str, truncation: int, reason: str) -> CgpFrame:
    return CgpFrame(
        case_tag=case_tag,
        branch="trivial-kernel",
        truncation=truncation,
        slot_maps=(),
        clauses=(),
        f0=AnalyticSeries.zero(truncation),
        e_list=(),
        constraint_vectors=(),
        degree_pad=0,
        isometric=False,
        expected_trivial=True,
        notes=(reason,),
    )


def _zero_symbol_frame(
    pert: PerturbationSpec,
    truncation: int,
    inner_truncation: int,
    branch_tol: float,
) -> CgpFrame:
    u, _ = _single_term(pert)
    u = u.resized(truncation)
    one = AnalyticSeries.one(truncation)
    f0 = one - np.conj(u.coeffs[0]) * u
    v0 = riesz_project(embed(u) - _abs_squared(u) * u.coeffs[0])
    v1 = riesz_project(laurent_shift(_abs_squared(u), -1))
    a_shift_u = shift_matrix(truncation) @ mult_matrix(u)
    if f0.norm() <= branch_tol:
        slot_maps = (a_shift_u,)
        clauses = (ip_family_clause([v1], inner_truncation),)
        return CgpFrame(
            case_tag="hyperplane",
            branch="vanishing-projection",
            truncation=truncation,
            slot_maps=slot_maps,
            clauses=clauses,
            f0=AnalyticSeries.zero(truncation),
            e_list=(u,),
            constraint_vectors=(("v1", v1),),
            degree_pad=_degree_pad(slot_maps),
            isometric=is_numerically_inner(u),
        )
    slot_maps = (mult_matrix(f0), a_shift_u)
    clauses = (ip_family_clause([v0, v1], inner_truncation),)
    return CgpFrame(
        case_tag="hyperplane",
        branch="full",
        truncation=truncation,
        slot_maps=slot_maps,
        clauses=clauses,
        f0=f0,
        e_list=(u,),
        constraint_vectors=(("v0", v0), ("v1", v1)),
        degree_pad=_degree_pad(slot_maps),
        isometric=False,
    )


def _kernel_line_frame(
    case_tag: str,
    q: AnalyticSeries,
    base: AnalyticSeries,
    degeneracy: complex,
    truncation: int,
    branch_tol: float,
) -> CgpFrame:
    """Shared inner/invertible construction: the kernel lives on the q line."""
    if abs(degeneracy) > branch_tol:
        return _trivial_frame(
            case_tag, truncation, "pairing 1 + <q, u> does not vanish"
        )
    one = AnalyticSeries.one(truncation)
    a0 = q.coeffs[0]
    q_s = backshift(q - a0 * base)
    nqs = q_s.norm()
    if abs(a0) > branch_tol:
        f0 = (np.conj(a0) / q.norm() ** 2) * q
        if nqs > 0.0:
            a1 = shift_matrix(truncation) @ mult_matrix(q_s * (1.0 / nqs))
            e_list = (q_s * (1.0 / nqs),)
        else:
            a1 = np.zeros((truncation, truncation), dtype=np.complex128)
            e_list = ()
        slot_maps = (mult_matrix(f0), a1)
        clauses = (
            constant_value_clause([one, None]),
            zero_slot_clause(2, 1, truncation),
        )
        return CgpFrame(
            case_tag=case_tag,
            branch="nonvanishing-mean",
            truncation=truncation,
            slot_maps=slot_maps,
            clauses=clauses,
            f0=f0,
            e_list=e_list,
            constraint_vectors=(),
            degree_pad=_degree_pad(slot_maps),
            isometric=abs(f0.norm() - 1.0) < branch_tol,
        )
    slot_maps = (mult_matrix(q * (1.0 / nqs)),)
    clauses = (constant_value_clause([one]),)
    return CgpFrame(
        case_tag=case_tag,
        branch="vanishing-mean",
        truncation=truncation,
        slot_maps=slot_maps,
        clauses=clauses,
        f0=AnalyticSeries.zero(truncation),
        e_list=(q_s * (1.0 / nqs),),
        constraint_vectors=(),
        degree_pad=_degree_pad(slot_maps),
        isometric=abs(q.norm() / nqs - 1.0) < branch_tol,
    )


def _inner_frame(
    sym: InnerSymbol,
    pert: PerturbationSpec,
    truncation: int,
    branch_tol: float,
) -> CgpFrame:
    u, v = _single_term(pert)
    u, v = u.resized(truncation), v.resized(truncation)
    theta_exp = blaschke_expand(sym.product, truncation)
    q = riesz_project(multiply(conj_on_circle(theta_exp), embed(v)))
    rebuilt = multiply_analytic(theta_exp, q)
    if (rebuilt - v).norm() > branch_tol * max(1.0, v.norm()):
        return _trivial_frame("inner-line", truncation, "inner factor does not divide v")
    c = 1.0 + complex(inner_product(q, u))
    return _kernel_line_frame(
        "inner-line", q, AnalyticSeries.one(truncation), c, truncation, branch_tol
    )


def _invertible_frame(
    sym: InvertibleProductSymbol,
    pert: PerturbationSpec,
    truncation: int,
    branch_tol: float,
) -> CgpFrame:
    u, v = _single_term(pert)
    u, v = u.resized(truncation), v.resized(truncation)
    f1_inv = taylor_invert(sym.f1.resized(truncation))
    f2_inv = taylor_invert(sym.f2.resized(truncation))
    t = riesz_project(multiply(conj_on_circle(f2_inv), embed(v)))
    q = multiply_analytic(f1_inv, t)
    c = 1.0 + complex(inner_product(q, u))
    return _kernel_line_frame("invertible-line", q, f1_inv, c, truncation, branch_tol)


def _conj_inner_frame(
    sym: ConjInnerSymbol,
    pert: PerturbationSpec,
    truncation: int,
    inner_truncation: int,
    branch_tol: float,
    divisibility_tol: float,
) -> CgpFrame:
    u, v = _single_term(pert)
    u, v = u.resized(truncation), v.resized(truncation)
    one = AnalyticSeries.one(truncation)
    theta_exp = blaschke_expand(sym.product, truncation)
    theta0 = theta_exp.coeffs[0]
    k_theta = model_space(sym.product, truncation)
    u1 = AnalyticSeries(k_theta.frame @ (k_theta.frame.conj().T @ u.coeffs), truncation)
    u_theta = u - u1
    theta_v = multiply_analytic(theta_exp, v)
    v_at_zero = v.coeffs[0]
    s_v = backshift(v)
    nsv = s_v.norm()
    p_model = one - np.conj(theta0) * theta_exp
    if u1.norm() <= divisibility_tol * u.norm():
        c = 1.0 + complex(inner_product(theta_v, u))
        if abs(c) > branch_tol:
            slot_maps = (mult_matrix(p_model),)
            clauses = (model_membership_clause(theta_exp, [p_model]),)
            return CgpFrame(
                case_tag="conj-inner",
                branch="model-space",
                truncation=truncation,
                slot_maps=slot_maps,
                clauses=clauses,
                f0=p_model,
                e_list=(),
                constraint_vectors=(),
                degree_pad=_degree_pad(slot_maps),
                isometric=False,
            )
        f0 = p_model + (np.conj(theta0 * v_at_zero) / v.norm() ** 2) * theta_v
        e1 = multiply_analytic(theta_exp, s_v) * (1.0 / nsv)
        slot_maps = (
            mult_matrix(f0),
            mult_matrix(multiply_analytic(theta_exp, v - v_at_zero * one) * (1.0 / nsv)),
        )
        clauses = (
            model_membership_clause(
                theta_exp, [p_model, theta_exp * (-v_at_zero / nsv)]
            ),
            constant_value_clause(
                [one * (np.conj(theta0 * v_at_zero) / v.norm() ** 2), one * (1.0 / nsv)]
            ),
        )
        return CgpFrame(
            case_tag="conj-inner",
            branch="extended-model-space",
            truncation=truncation,
            slot_maps=slot_maps,
            clauses=clauses,
            f0=f0,
            e_list=(e1,),
            constraint_vectors=(),
            degree_pad=_degree_pad(slot_maps),
            isometric=False,
        )
    wt = w_theta(theta_exp, v, u_theta)
    nu1 = u1.norm()
    e2 = u1 * (1.0 / nu1)
    a1 = mult_matrix(multiply_analytic(theta_exp, v - v_at_zero * one) * (1.0 / nsv))
    a2 = shift_matrix(truncation) @ mult_matrix(e2)
    v2 = riesz_project(laurent_shift(_abs_squared(u1), -1)) * (1.0 / nu1)
    if abs(wt) > branch_tol:
        if abs(v.norm() - 1.0) > branch_tol:
            raise InputError(
                "split-branch representation is stated for a unit-norm v; "
                "rescale the perturbation before building the frame"
            )
        rho = rho_theta(theta_exp, v, u1, wt)
        removed = u1 + np.conj(wt) * theta_v
        f0 = (
            p_model
            + (np.conj(theta0 * v_at_zero) / v.norm() ** 2) * theta_v
            - rho * removed
        )
        v0 = riesz_project(
            embed(removed)
            - embed(v) * (theta0 * np.conj(wt))
            + _abs_squared(v) * (theta0 * v_at_zero * np.conj(wt) / v.norm() ** 2)
            - _abs_squared(removed) * np.conj(rho)
        )
        v1 = riesz_project(
            multiply(embed(v), conj_on_circle(v - v_at_zero * one))
        ) * (np.conj(wt) / nsv)
        slot_maps = (mult_matrix(f0), a1, a2)
        clauses = (
            model_membership_clause(
                theta_exp, [p_model, theta_exp * (-v_at_zero / nsv), None]
            ),
            constant_value_clause(
                [
                    one * (np.conj(theta0 * v_at_zero) / v.norm() ** 2),
                    one * (1.0 / nsv),
                    AnalyticSeries.monomial(1, truncation, -np.conj(wt) / nu1),
                ]
            ),
            ip_family_clause([v0, v1, v2], inner_truncation),
        )
        return CgpFrame(
            case_tag="conj-inner",
            branch="split",
            truncation=truncation,
            slot_maps=slot_maps,
            clauses=clauses,
            f0=f0,
            e_list=(multiply_analytic(theta_exp, s_v) * (1.0 / nsv), e2),
            constraint_vectors=(("v0", v0), ("v1", v1), ("v2", v2)),
            degree_pad=_degree_pad(slot_maps),
            isometric=False,
        )
    f0 = (
        p_model
        - (np.conj(u1.coeffs[0]) / nu1**2) * u1
        + (np.conj(theta0 * v_at_zero) / v.norm() ** 2) * theta_v
    )
    v0 = riesz_project(embed(u1) - _abs_squared(u1) * (u1.coeffs[0] / nu1**2))
    notes = []
    if u1.degree(branch_tol) < 1:
        notes.append(
            "constant model component of u leaves the final slot unconstrained"
        )
    slot_maps = (mult_matrix(f0), a1, a2)
    clauses = (
        model_membership_clause(
            theta_exp, [p_model, theta_exp * (-v_at_zero / nsv), None]
        ),
        constant_value_clause(
            [
                one * (np.conj(theta0 * v_at_zero) / v.norm() ** 2),
                one * (1.0 / nsv),
                None,
            ]
        ),
        ip_family_clause([v0, None, v2], inner_truncation),
    )
    return CgpFrame(
        case_tag="conj-inner",
        branch="orthogonal-split",
        truncation=truncation,
        slot_maps=slot_maps,
        clauses=clauses,
        f0=f0,
        e_list=(multiply_analytic(theta_exp, s_v) * (1.0 / nsv), e2),
        constraint_vectors=(("v0", v0), ("v2", v2)),
        degree_pad=_degree_pad(slot_maps),
        isometric=False,
        notes=tuple(notes),
    )


def build_cgp_frame(
    sym: Symbol,
    pert: PerturbationSpec,
    truncation: int,
    inner_truncation: int = 48,
    branch_tol: float = DEGENERATE_BRANCH_TOL,
    divisibility_tol: float = 1e-8,
) -> CgpFrame:
    """Representation frame for the kernel of the perturbed operator."""
    if isinstance(sym, ZeroSymbol):
        return _zero_symbol_frame(pert, truncation, inner_truncation, branch_tol)
    if isinstance(sym, InnerSymbol):
        return _inner_frame(sym, pert, truncation, branch_tol)
    if isinstance(sym, InvertibleProductSymbol):
        return _invertible_frame(sym, pert, truncation, branch_tol)
    if isinstance(sym, ConjInnerSymbol):
        return _conj_inner_frame(
            sym, pert, truncation, inner_truncation, branch_tol, divisibility_tol
        )
    raise InputError(
        f"no kernel representation for symbol class {type(sym).__name__!r}"
    )


def build_monomial_split_frame(
    power: int,
    pert: PerturbationSpec,
    truncation: int,
    inner_truncation: int = 48,
    branch_tol: float = DEGENERATE_BRANCH_TOL,
) -> CgpFrame:
    """The worked monomial instance of the split branch, built verbatim.

    Expects u = z^(power-1)/4 + u2 with u2 supported on degrees >= power and
    a unit-norm v; the constant slot is multiplied by 1 rather than by the
    projection vector, so the frame is non-orthogonal but still exact.
    """
    u, v = _single_term(pert)
    u, v = u.resized(truncation), v.resized(truncation)
    if power < 1:
        raise InputError("monomial instance needs power >= 1")
    head = np.zeros(power, dtype=np.complex128)
    head[-1] = 0.25
    if np.max(np.abs(u.coeffs[:power] - head)) > 1e-12:
        raise InputError("monomial instance expects u to start with z^(power-1)/4")
    if abs(v.norm() - 1.0) > branch_tol:
        raise InputError("monomial instance expects a unit-norm v")
    one = AnalyticSeries.one(truncation)
    theta_exp = AnalyticSeries.monomial(power, truncation)
    u2 = AnalyticSeries(
        np.concatenate([np.zeros(power, dtype=np.complex128), u.coeffs[power:]]),
        truncation,
    )
    wt = w_theta(theta_exp, v, u2)
    if abs(wt) <= branch_tol:
        raise InputError("monomial instance needs a nonzero split selector")
    v_at_zero = v.coeffs[0]
    s_v = backshift(v)
    nsv = s_v.norm()
    theta_v = multiply_analytic(theta_exp, v)
    shift = shift_matrix(truncation)
    a1 = mult_matrix(multiply_analytic(theta_exp, v - v_at_zero * one) * (1.0 / nsv))
    a2 = (
        shift @ mult_matrix(AnalyticSeries.monomial(power - 1, truncation))
        + shift @ mult_matrix(theta_v * (4.0 * np.conj(wt)))
        - shift @ mult_matrix(theta_v) * (4.0 * np.conj(wt))
    )
    v0 = AnalyticSeries.monomial(power - 1, truncation, 0.25) + np.conj(wt) * theta_v
    v1 = riesz_project(
        multiply(embed(v), conj_on_circle(v - v_at_zero * one))
    ) * (np.conj(wt) / nsv)
    slot_maps = (np.eye(truncation, dtype=np.complex128), a1, a2)
    clauses = (
        model_membership_clause(
            theta_exp, [one, theta_exp * (-v_at_zero / nsv), None]
        ),
        constant_value_clause(
            [None, one * (1.0 / nsv), AnalyticSeries.monomial(1, truncation, -4.0 * np.conj(wt))]
        ),
        ip_family_clause([v0, v1, None], inner_truncation),
    )
    return CgpFrame(
        case_tag="monomial-split",
        branch="split",
        truncation=truncation,
        slot_maps=slot_maps,
        clauses=clauses,
        f0=AnalyticSeries.zero(truncation),
        e_list=(
            multiply_analytic(theta_exp, s_v) * (1.0 / nsv),
            AnalyticSeries.monomial(power - 1, truncation),
        ),
        constraint_vectors=(("v0", v0), ("v1", v1)),
        degree_pad=_degree_pad(slot_maps),
        isometric=False,
        notes=("constant slot multiplied by 1 in place of the projection vector",),
    )


def monomial_split_expected_kernel(
    power: int,
    pert: PerturbationSpec,
    truncation: int,
    rank_tol: float = 1e-9,
) -> Subspace:
    """span{1, .., z^(power-1)} + span{z^power v} minus the removed direction."""
    u, v = _single_term(pert)
    u, v = u.resized(truncation), v.resized(truncation)
    theta_exp = AnalyticSeries.monomial(power, truncation)
    u2 = AnalyticSeries(
        np.concatenate([np.zeros(power, dtype=np.complex128), u.coeffs[power:]]),
        truncation,
    )
    wt = w_theta(theta_exp, v, u2)
    theta_v = multiply_analytic(theta_exp, v)
    polys = span(
        [AnalyticSeries.monomial(j, truncation) for j in range(power)],
        truncation,
        rank_tol,
    )
    ambient = direct_sum(polys, span([theta_v], truncation, rank_tol))
    removed = AnalyticSeries.monomial(power - 1, truncation, 0.25) + np.conj(wt) * theta_v
    return complement_within(ambient, span([removed], truncation, rank_tol))


def _stack_clauses(frame: CgpFrame, cap: int) -> np.ndarray:
    blocks = []
    for clause in frame.clauses:
        rows = clause.row_count
        if rows == 0:
            continue
        parts = [
            np.zeros((rows, cap), dtype=np.complex128) if m is None else m[:, :cap]
            for m in clause.mats
        ]
        blocks.append(np.hstack(parts))
    if not blocks:
        return np.zeros((0, frame.slot_count * cap), dtype=np.complex128)
    return np.vstack(blocks)


def _nullspace(matrix: np.ndarray, rank_tol: float) -> np.ndarray:
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(cols, dtype=np.complex128)
    _, svals, vh = np.linalg.svd(matrix, full_matrices=True)
    if svals.size == 0 or svals[0] == 0.0:
        return np.eye(cols, dtype=np.complex128)
    rank = int(np.sum(svals > rank_tol * svals[0]))
    basis = vh.conj().T[:, rank:]
    return _fix_phases(basis)


def _split_stacked(k_stacked: np.ndarray, slots: int, cap: int, truncation: int) -> list:
    out = []
    for j in range(slots):
        full = np.zeros(truncation, dtype=np.complex128)
        full[:cap] = k_stacked[j * cap : (j + 1) * cap]
        out.append(full)
    return out


def _assemble(frame: CgpFrame, k_vectors: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros(frame.truncation, dtype=np.complex128)
    for mat, k in zip(frame.slot_maps, k_vectors):
        acc = acc + mat @ k
    return acc


def _constraint_violation(frame: CgpFrame, k_vectors: Sequence[np.ndarray]) -> float:
    scale = max(1.0, float(np.sqrt(sum(np.linalg.norm(k) ** 2 for k in k_vectors))))
    worst = 0.0
    for clause in frame.clauses:
        worst = max(worst, clause.residual(k_vectors) / scale)
    return worst


def k_membership(
    frame: CgpFrame,
    k_list: Sequence[AnalyticSeries],
    tol: float = 1e-8,
) -> tuple[bool, float]:
    """Whether the coefficient tuple satisfies every clause of the frame."""
    if len(k_list) != frame.slot_count:
        raise InputError(
            f"expected {frame.slot_count} coefficient slots, got {len(k_list)}"
        )
    vectors = [k.resized(frame.truncation).coeffs for k in k_list]
    worst = _constraint_violation(frame, vectors)
    return worst < tol, worst


def cgp_decompose(
    f: AnalyticSeries,
    frame: CgpFrame,
    inner_truncation: int = 48,
) -> tuple[list, float]:
    """Minimum-norm coefficient tuple with f = sum_j A_j k_j.

    Coefficients are supported below inner_truncation; the support plus the
    slot-map degree pad must fit inside the truncation order.
    """
    if frame.slot_count == 0:
        raise InputError("frame has no slots to decompose against")
    n = frame.truncation
    if inner_truncation + frame.degree_pad > n:
        raise HeadroomError(
            f"coefficient support {inner_truncation} plus multiplier degree "
            f"{frame.degree_pad} exceeds truncation {n}"
        )
    cap = inner_truncation
    big = np.hstack([m[:, :cap] for m in frame.slot_maps])
    target = f.resized(n).coeffs
    solution, *_ = np.linalg.lstsq(big, target, rcond=None)
    k_vectors = _split_stacked(solution, frame.slot_count, cap, n)
    fit = float(
        np.linalg.norm(big @ solution - target) / max(1.0, np.linalg.norm(target))
    )
    return [AnalyticSeries(k, n) for k in k_vectors], fit


def _reverse_fit(
    frame: CgpFrame,
    target: np.ndarray,
    cap: int,
    rank_tol: float,
    constraint_tol: float,
    null_basis: np.ndarray | None,
) -> tuple[list, float, float, np.ndarray | None]:
    big = np.hstack([m[:, :cap] for m in frame.slot_maps])
    solution, *_ = np.linalg.lstsq(big, target, rcond=None)
    k_vectors = _split_stacked(solution, frame.slot_count, cap, frame.truncation)
    fit = float(np.linalg.norm(big @ solution - target) / max(1.0, np.linalg.norm(target)))
    violation = _constraint_violation(frame, k_vectors)
    if violation <= constraint_tol:
        return k_vectors, fit, violation, null_basis
    if null_basis is None:
        null_basis = _nullspace(_stack_clauses(frame, cap), rank_tol)
    if null_basis.shape[1]:
        reduced, *_ = np.linalg.lstsq(big @ null_basis, target, rcond=None)
        stacked = null_basis @ reduced
        k_vectors = _split_stacked(stacked, frame.slot_count, cap, frame.truncation)
        fit = float(
            np.linalg.norm(big @ stacked - target) / max(1.0, np.linalg.norm(target))
        )
        violation = _constraint_violation(frame, k_vectors)
    return k_vectors, fit, violation, null_basis


@dataclass(frozen=True)
class RepresentationReport:
    case_tag: str
    branch: str
    kernel_dim: int
    k_dim_sampled: int
    forward_samples: int
    forward_max_residual: float
    backshift_max_violation: float
    reverse_max_residual: float
    constraint_max_violation: float
    f0_membership_residual: float
    norm_identity_max_error: float | None
    subspace_angle_audit: float | None
    passed: bool
    notes: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "case_tag": self.case_tag,
            "branch": self.branch,
            "kernel_dim": self.kernel_dim,
            "k_dim_sampled": self.k_dim_sampled,
            "forward_samples": self.forward_samples,
            "forward_max_residual": self.forward_max_residual,
            "backshift_max_violation": self.backshift_max_violation,
            "reverse_max_residual": self.reverse_max_residual,
            "constraint_max_violation": self.constraint_max_violation,
            "f0_membership_residual": self.f0_membership_residual,
            "norm_identity_max_error": self.norm_identity_max_error,
            "subspace_angle_audit": self.subspace_angle_audit,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def verify_corollary(
    sym: Symbol,
    pert: PerturbationSpec,
    truncation: int,
    inner_truncation: int = 48,
    rank_tol: float = 1e-9,
    membership_tol: float = 1e-8,
    constraint_tol: float = 1e-8,
    branch_tol: float = DEGENERATE_BRANCH_TOL,
    column_cap: int | None = None,
    seed: int = 0,
    sample_cap: int = SAMPLE_CAP,
    frame_builder: Callable | None = None,
) -> RepresentationReport:
    """Bidirectional check of the kernel representation for one instance.

    column_cap None picks the interior window truncation // 2 for kernel
    extraction, keeping band-cutoff artifacts out of the comparison.
    """
    pert_n = pert.resized(truncation)
    op = perturbed_matrix(
        toeplitz_matrix(symbol_fourier(sym, truncation)), pert_n
    )
    column_cap = truncation // 2 if column_cap is None else column_cap
    m = kernel_subspace(op, rank_tol, column_cap=column_cap)
    if frame_builder is not None:
        frame = frame_builder(sym, pert_n, truncation, inner_truncation)
    else:
        frame = build_cgp_frame(
            sym, pert_n, truncation, inner_truncation, branch_tol=branch_tol
        )
    notes = list(frame.notes)
    if frame.expected_trivial:
        passed = m.dim == 0
        if not passed:
            notes.append(f"kernel has dimension {m.dim}, expected trivial")
        return RepresentationReport(
            case_tag=frame.case_tag,
            branch=frame.branch,
            kernel_dim=m.dim,
            k_dim_sampled=0,
            forward_samples=0,
            forward_max_residual=0.0,
            backshift_max_violation=0.0,
            reverse_max_residual=0.0,
            constraint_max_violation=0.0,
            f0_membership_residual=0.0,
            norm_identity_max_error=None,
            subspace_angle_audit=None,
            passed=passed,
            notes=tuple(notes),
        )
    f0_resid = 0.0
    if frame.f0.norm() > 1e-12:
        _, f0_resid = contains(m, frame.f0, membership_tol)
    d_cap = column_cap if column_cap is not None else truncation
    # Forward tuples may use any support that keeps the assembled series
    # in-band; the interior column cap only governs kernel extraction.
    cap_fwd = min(inner_truncation, truncation - frame.degree_pad)
    if cap_fwd < 2:
        raise HeadroomError(
            "column cap leaves no room for forward coefficient support"
        )
    cap_rev = min(truncation - frame.degree_pad, max(inner_truncation, d_cap))
    null_fwd = _nullspace(_stack_clauses(frame, cap_fwd), rank_tol)
    k_dim = null_fwd.shape[1]
    samples = [null_fwd[:, j] for j in range(min(k_dim, sample_cap))]
    if k_dim > 1:
        rng = np.random.default_rng(seed)
        mix = rng.standard_normal((k_dim, 4)) + 1j * rng.standard_normal((k_dim, 4))
        mixed = null_fwd @ mix
        for j in range(mixed.shape[1]):
            col = mixed[:, j]
            samples.append(col / np.linalg.norm(col))
    forward_max = 0.0
    backshift_max = 0.0
    zero_images = 0
    image_vectors = []
    for stacked in samples:
        k_vectors = _split_stacked(stacked, frame.slot_count, cap_fwd, truncation)
        f = _assemble(frame, k_vectors)
        fnorm = np.linalg.norm(f)
        if fnorm > 1e-12:
            # Soundness is membership in ker R; the operator residual avoids
            # comparing against a column-capped kernel basis that may omit
            # genuine high-degree directions.
            resid = float(np.linalg.norm(op.entries @ f) / fnorm)
            forward_max = max(forward_max, resid)
            image_vectors.append(f / fnorm)
        else:
            zero_images += 1
        shifted = [np.concatenate([k[1:], [0.0]]) for k in k_vectors]
        backshift_max = max(backshift_max, _constraint_violation(frame, shifted))
    if zero_images:
        notes.append(f"{zero_images} sampled tuples assemble to zero")
    reverse_max = 0.0
    constraint_max = 0.0
    norm_err: float | None = 0.0 if frame.isometric else None
    null_rev: np.ndarray | None = None
    for j in range(m.dim):
        target = m.frame[:, j]
        k_vectors, fit, violation, null_rev = _reverse_fit(
            frame, target, cap_rev, rank_tol, constraint_tol, null_rev
        )
        reverse_max = max(reverse_max, fit)
        constraint_max = max(constraint_max, violation)
        if frame.isometric:
            total = sum(np.linalg.norm(k) ** 2 for k in k_vectors)
            norm_err = max(norm_err, abs(np.linalg.norm(target) ** 2 - total))
    audit: float | None = None
    if image_vectors and k_dim <= sample_cap and m.dim > 0:
        image_span = span(
            [AnalyticSeries(vec, truncation) for vec in image_vectors],
            truncation,
            rank_tol,
        )
        if image_span.dim == m.dim:
            audit = float(principal_angles(image_span, m)[-1])
        else:
            notes.append(
                f"representation image spans {image_span.dim} of {m.dim} "
                "kernel directions"
            )
    passed = (
        forward_max < membership_tol
        and reverse_max < membership_tol
        and constraint_max < constraint_tol
        and backshift_max < constraint_tol
        and f0_resid < membership_tol
        and (norm_err is None or norm_err < NORM_IDENTITY_TOL)
        and (audit is None or audit < 1e-6)
    )
    return RepresentationReport(
        case_tag=frame.case_tag,
        branch=frame.branch,
        kernel_dim=m.dim,
        k_dim_sampled=k_dim,
        forward_samples=len(samples),
        forward_max_residual=float(forward_max),
        backshift_max_violation=float(backshift_max),
        reverse_max_residual=float(reverse_max),
        constraint_max_violation=float(constraint_max),
        f0_membership_residual=float(f0_resid),
        norm_identity_max_error=None if norm_err is None else float(norm_err),
        subspace_angle_audit=audit,
        passed=passed,
        notes=tuple(notes),
    )


def remark_projection_formula(
    theta: BlaschkeProduct,
    v: AnalyticSeries,
    g: AnalyticSeries,
    mu: complex,
    truncation: int,
) -> AnalyticSeries:
    """Closed form for the projection of 1 after removing one direction.

    The ambient space is the model space plus the theta*v line; the removed
    direction is g + mu*theta*v with g from the model space.
    """
    v, g = v.resized(truncation), g.resized(truncation)
    theta_exp = blaschke_expand(theta, truncation)
    theta0 = theta_exp.coeffs[0]
    one = AnalyticSeries.one(truncation)
    theta_v = multiply_analytic(theta_exp, v)
    removed = g + mu * theta_v
    if removed.norm() < 1e-14:
        raise InputError("removed direction must be nonzero")
    p_model = one - np.conj(theta0) * theta_exp
    p_ambient = p_model + (np.conj(theta0 * v.coeffs[0]) / v.norm() ** 2) * theta_v
    numerator = complex(inner_product(p_model, g)) + np.conj(
        theta0 * v.coeffs[0] * mu
    )
    denominator = g.norm() ** 2 + abs(mu) ** 2 * v.norm() ** 2
    return p_ambient - (numerator / denominator) * removed


def remark_projection_direct(
    theta: BlaschkeProduct,
    v: AnalyticSeries,
    g: AnalyticSeries,
    mu: complex,
    truncation: int,
    rank_tol: float = 1e-9,
    membership_tol: float = 1e-8,
) -> AnalyticSeries:
    """The same projection computed from explicit orthonormal frames."""
    v, g = v.resized(truncation), g.resized(truncation)
    theta_exp = blaschke_expand(theta, truncation)
    k_theta = model_space(theta, truncation)
    ok, resid = contains(k_theta, g, membership_tol)
    if not ok:
        raise InputError(
            f"g must lie in the model space (residual {resid:.2e})"
        )
    theta_v = multiply_analytic(theta_exp, v)
    ambient = direct_sum(k_theta, span([theta_v], truncation, rank_tol))
    removed = span([g + mu * theta_v], truncation, rank_tol)
    m = complement_within(ambient, removed)
    return projection_of_one(m)

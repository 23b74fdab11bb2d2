"""Finite Blaschke products and polynomial inner-outer splitting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryAmbiguityError, InputError
from .series import AnalyticSeries, multiply_analytic

# Roots this close to the unit circle cannot be classified reliably.
BOUNDARY_EPS = 1e-6

UNIMODULAR_TOL = 1e-10


@dataclass(frozen=True)
class BlaschkeProduct:
    """z**z_power times elementary factors (a - z)/(1 - conj(a) z).

    zeros lists (point, multiplicity) pairs with every |point| < 1;
    unimodular_const is a modulus-one scalar in front.
    """

    zeros: tuple[tuple[complex, int], ...] = ()
    z_power: int = 0
    unimodular_const: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        norm_zeros = []
        for point, mult in self.zeros:
            point = complex(point)
            mult = int(mult)
            if abs(point) >= 1.0:
                raise InputError(f"Blaschke zero {point} not inside the open disk")
            if mult < 1:
                raise InputError("zero multiplicities must be positive")
            norm_zeros.append((point, mult))
        object.__setattr__(self, "zeros", tuple(norm_zeros))
        object.__setattr__(self, "z_power", int(self.z_power))
        const = complex(self.unimodular_const)
        if self.z_power < 0:
            raise InputError("z_power must be nonnegative")
        if abs(abs(const) - 1.0) > UNIMODULAR_TOL:
            raise InputError(f"front constant {const} is not unimodular")
        object.__setattr__(self, "unimodular_const", const)

    @classmethod
    def from_points(cls, points, z_power: int = 0, const: complex = 1.0) -> "BlaschkeProduct":
        return cls(tuple((complex(p), 1) for p in points), z_power, const)

    def degree(self) -> int:
        return self.z_power + sum(m for _, m in self.zeros)

    def value_at_zero(self) -> complex:
        if self.z_power > 0:
            return 0.0 + 0.0j
        out = self.unimodular_const
        for point, mult in self.zeros:
            out *= point**mult
        return complex(out)

    def to_json_dict(self) -> dict:
        return {
            "zeros": [
                {"point": [float(p.real), float(p.imag)], "multiplicity": m}
                for p, m in self.zeros
            ],
            "z_power": self.z_power,
            "const": [float(self.unimodular_const.real), float(self.unimodular_const.imag)],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BlaschkeProduct":
        try:
            zeros = tuple(
                (complex(z["point"][0], z["point"][1]), int(z["multiplicity"]))
                for z in data.get("zeros", [])
            )
            z_power = int(data.get("z_power", 0))
            c = data.get("const", [1.0, 0.0])
            const = complex(c[0], c[1])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed Blaschke product: {exc}") from exc
        return cls(zeros, z_power, const)


def _factor_series(point: complex, truncation: int) -> AnalyticSeries:
    """Taylor coefficients of (point - z)/(1 - conj(point) z)."""
    coeffs = np.empty(truncation, dtype=np.complex128)
    coeffs[0] = point
    if truncation > 1:
        n = np.arange(1, truncation)
        coeffs[1:] = -(1.0 - abs(point) ** 2) * np.conj(point) ** (n - 1)
    return AnalyticSeries(coeffs, truncation)


def blaschke_expand(b: BlaschkeProduct, truncation: int) -> AnalyticSeries:
    """Taylor expansion of the product, truncated to the given order."""
    acc = AnalyticSeries.one(truncation) * b.unimodular_const
    for point, mult in b.zeros:
        factor = _factor_series(point, truncation)
        for _ in range(mult):
            acc = multiply_analytic(acc, factor)
    if b.z_power:
        arr = np.zeros(truncation, dtype=np.complex128)
        keep = truncation - b.z_power
        if keep > 0:
            arr[b.z_power :] = acc.coeffs[:keep]
        acc = AnalyticSeries(arr, truncation)
    return acc


def inner_outer_factor(
    p: AnalyticSeries, boundary_eps: float = BOUNDARY_EPS
) -> tuple[BlaschkeProduct, AnalyticSeries]:
    """Split a polynomial into a Blaschke part and a disk-zero-free part.

    The returned pair multiplies back to p exactly: all scalar factors are
    folded into the outer polynomial and the Blaschke constant stays 1.
    Roots within boundary_eps of the unit circle raise.
    """
    deg = p.degree(tol=0.0)
    if deg < 0:
        raise InputError("cannot factor the zero polynomial")
    lead_trim = np.abs(p.coeffs[: deg + 1]) > 0
    z_power = int(np.argmax(lead_trim)) if lead_trim.any() else 0
    body = p.coeffs[z_power : deg + 1]
    inner_pts: list[complex] = []
    outer_roots: list[complex] = []
    if body.shape[0] > 1:
        roots = np.roots(body[::-1])
        for r in roots:
            m = abs(r)
            if m < 1.0 - boundary_eps:
                inner_pts.append(complex(r))
            elif m <= 1.0 + boundary_eps:
                raise BoundaryAmbiguityError(
                    f"root modulus {m:.12g} within {boundary_eps} of the circle"
                )
            else:
                outer_roots.append(complex(r))
    lead = complex(body[-1])
    inner = BlaschkeProduct.from_points(inner_pts, z_power=z_power)
    # p = lead z^m prod(z - a) prod(z - b) and (a - z) = -(1 - conj(a) z) b_a(z),
    # so the outer part keeps lead * (-1)^#inner * prod(1 - conj(a) z) * prod(z - b).
    outer_poly = np.array([lead * (-1) ** len(inner_pts)], dtype=np.complex128)
    for a in inner_pts:
        outer_poly = np.convolve(outer_poly, np.array([1.0, -np.conj(a)]))
    for bpt in outer_roots:
        outer_poly = np.convolve(outer_poly, np.array([-bpt, 1.0]))
    outer = AnalyticSeries.from_coeffs(outer_poly, p.truncation)
    return inner, outer

"""Closed-form scalar quantities of the weighted biharmonic problem.

Every formula here is cheap algebra; the numerical modules treat these
values as ground truth.  When all inputs are ints or Fractions the
computations stay in exact rational arithmetic, otherwise they run in
floats.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ParameterDomainError, SingularParameterError

Real = Union[int, float, Fraction]


def _coerce(*values: Real):
    """Promote ints to Fraction when every input is exact, else to float."""
    if all(isinstance(v, (int, Fraction)) for v in values):
        return tuple(Fraction(v) for v in values)
    return tuple(float(v) for v in values)


def _maybe_float(x):
    return x


def _sqrt(x: Real) -> float:
    return math.sqrt(float(x))


@dataclass(frozen=True)
class DerivedParams:
    """Parameter bundle (n, alpha, q) plus every derived exponent."""

    n: int
    alpha: Real
    q: Real
    beta: Real
    gamma: Real
    gbar: Real
    two_star_star: Optional[Real]


def gamma_alpha(n: int, alpha: Real) -> Real:
    (a,) = _coerce(alpha)
    half_n = Fraction(n - 2, 2) if isinstance(a, Fraction) else (n - 2) / 2
    half_a = (a - 2) / 2
    return half_n * half_n - half_a * half_a


def gbar_alpha(n: int, alpha: Real) -> Real:
    (a,) = _coerce(alpha)
    half_n = Fraction(n - 2, 2) if isinstance(a, Fraction) else (n - 2) / 2
    half_a = (a - 2) / 2
    return half_n * half_n + half_a * half_a


def derive_params(n: int, alpha: Real, q: Real) -> DerivedParams:
    """Populate beta, gamma, gbar and the critical exponent for (n, alpha, q)."""
    if n < 2:
        raise ParameterDomainError(f"dimension n={n} must be >= 2")
    if q < 2:
        raise ParameterDomainError(f"exponent q={q} must be >= 2")
    a, qq = _coerce(alpha, q)
    two = Fraction(2) if isinstance(a, Fraction) else 2.0
    beta = n - qq * (n - 4 + a) / two
    two_star_star: Optional[Real] = None
    if n >= 5:
        two_star_star = (
            Fraction(2 * n, n - 4) if isinstance(a, Fraction) else 2 * n / (n - 4)
        )
        if qq > two_star_star:
            warnings.warn(
                f"q={q} exceeds the critical exponent 2n/(n-4)={two_star_star}; "
                "only the radial theory applies",
                stacklevel=2,
            )
    return DerivedParams(
        n=n,
        alpha=a,
        q=qq,
        beta=beta,
        gamma=gamma_alpha(n, a),
        gbar=gbar_alpha(n, a),
        two_star_star=two_star_star,
    )


@dataclass(frozen=True)
class RadialClosedForms:
    s2_rad: Real
    mu21_rad: Real
    conjugate_alpha: Optional[Real]


def radial_closed_forms(n: int, alpha: Real) -> RadialClosedForms:
    """Best q=2 radial constant, the second-order/first-order ratio, and the
    conjugate exponent of alpha."""
    if n < 2:
        raise ParameterDomainError(f"dimension n={n} must be >= 2")
    (a,) = _coerce(alpha)
    g = gamma_alpha(n, a)
    s2 = g * g
    # same value written as a product of linear factors; cross-check
    alt = (n - 4 + a) ** 2 * (n - a) ** 2 / (Fraction(16) if isinstance(a, Fraction) else 16.0)
    if isinstance(a, Fraction):
        assert s2 == alt
    else:
        assert math.isclose(float(s2), float(alt), rel_tol=1e-12, abs_tol=1e-300)
    mu21 = ((n - a) / (Fraction(2) if isinstance(a, Fraction) else 2.0)) ** 2
    conj: Optional[Real] = None
    if n >= 3 and a != 2:
        conj = 2 + (n - 2) ** 2 / (a - 2)
    return RadialClosedForms(s2_rad=s2, mu21_rad=mu21, conjugate_alpha=conj)


def conjugate_exponent(n: int, alpha: Real) -> Real:
    """Solve (alpha - 2)(x - 2) = (n - 2)^2 for x."""
    if alpha == 2:
        raise ParameterDomainError("alpha = 2 has no finite conjugate exponent")
    (a,) = _coerce(alpha)
    return 2 + (n - 2) ** 2 / (a - 2)


@dataclass(frozen=True)
class ScalingRelation:
    alpha: Real
    alpha_tilde: Real
    tau: Real
    g: Real
    conjugate: bool


def scaling_relation(n: int, alpha: Real, alpha_tilde: Real) -> ScalingRelation:
    """Rescaling exponent tau and gradient-term coefficient g linking the two
    weight exponents alpha, alpha_tilde."""
    if alpha == 4 - n or alpha_tilde == 4 - n:
        raise SingularParameterError(
            f"exponents must differ from 4-n={4 - n}: got {alpha}, {alpha_tilde}"
        )
    a, at = _coerce(alpha, alpha_tilde)
    tau = (n - 4 + a) / (n - 4 + at)
    bracket = at * a - 2 * (at + a) - n * (n - 4)
    g = (n - 2) * (at - a) * bracket / (n - 4 + a) ** 2
    # bracket == (alpha-2)(alpha_tilde-2) - (n-2)^2, so for n >= 3 the
    # conjugacy condition is exactly bracket == 0
    if isinstance(a, Fraction):
        conjugate = (a - 2) * (at - 2) == (n - 2) ** 2
    else:
        scale = max(1.0, abs(a - 2) * abs(at - 2))
        conjugate = abs((a - 2) * (at - 2) - (n - 2) ** 2) <= 1e-12 * scale
    return ScalingRelation(alpha=a, alpha_tilde=at, tau=tau, g=g, conjugate=conjugate)


@dataclass(frozen=True)
class PhaseThresholds:
    bs1: Optional[float]
    break_pos_sphere: float
    strictness_upper: Optional[float]
    strictness_lower: float = 2.0


def phase_thresholds(n: int, q: Optional[Real] = None) -> PhaseThresholds:
    """Closed-form thresholds for symmetry breaking, positivity breaking on
    the sphere, and critical-exponent strictness."""
    if n < 2:
        raise ParameterDomainError(f"dimension n={n} must be >= 2")
    bs1 = None
    if q is not None:
        if q <= 2:
            raise ParameterDomainError("the symmetry-breaking threshold needs q > 2")
        q = float(q)
        bs1 = (n - 1) / (q - 2) * (1.0 + math.sqrt(q - 1.0))
    break_pos_sphere = math.sqrt((n - 1) ** 2 + 1)
    strictness_upper = None
    if n >= 5:
        strictness_upper = math.sqrt(4.0 + 2.0 * (n - 2) ** 2 * (n - 4) / (n - 3))
    return PhaseThresholds(
        bs1=bs1,
        break_pos_sphere=break_pos_sphere,
        strictness_upper=strictness_upper,
    )

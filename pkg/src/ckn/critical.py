"""Critical-exponent machinery built around the Talenti bubble
U(x) = (1 + |x|^2)^((4-n)/2).

Contents: quadrature verification of the radial integral identities behind
the strictness expansion

    int |x|^(-2a) |Delta(|x|^a U)|^2 = int |Delta U|^2 + c(n, a) I,
    c(n, a) = a(a+2) [a^2 + 2a - (n-2)^2 (n-4) / (2(n-3))],

the sign predicate c(n, -alpha/2) < 0 with its interval form, the
shifted-weight inequality f(t) <= f(0) - C_a t^2 int |grad u|^2 for
compactly supported radial u, and the concentration family
u_eps = eps^((4-n)/2) chi U(./eps)."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy.interpolate import make_interp_spline

from .errors import ParameterDomainError, SupportViolationError, SupportWarning
from .grids import RadialProfile
from .quadrature import (DEFAULT_CTX, QuadratureContext, sphere_area,
                         weighted_radial_integral)

# ---------------------------------------------------------------------------
# Talenti bubble and its analytic derivatives


def talenti(r: np.ndarray, n: int) -> np.ndarray:
    return np.power(1.0 + r**2, 0.5 * (4 - n))


def talenti_d1(r: np.ndarray, n: int) -> np.ndarray:
    return (4 - n) * r * np.power(1.0 + r**2, 0.5 * (2 - n))


def talenti_d2(r: np.ndarray, n: int) -> np.ndarray:
    phi = 1.0 + r**2
    return (4 - n) * np.power(phi, 0.5 * (2 - n)) + (4 - n) * (2 - n) * r**2 * np.power(
        phi, -0.5 * n
    )


def talenti_laplacian(r: np.ndarray, n: int) -> np.ndarray:
    return talenti_d2(r, n) + (n - 1) / r * talenti_d1(r, n)


def expansion_coefficient(n: int, a: float) -> float:
    """c(n, a) = a(a+2)[a^2 + 2a - (n-2)^2 (n-4)/(2(n-3))]."""
    bracket = (n - 2) ** 2 * (n - 4) / (2.0 * (n - 3))
    return a * (a + 2.0) * (a**2 + 2.0 * a - bracket)


@dataclass(frozen=True)
class TalentiReport:
    n: int
    I: float
    J: float
    ratio_relerr: float
    sstar_num: float
    expansion_relerrs: Dict[float, float]
    coefficients: Dict[float, float]
    identity_relerrs: Dict[str, float]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "I": self.I,
            "J": self.J,
            "ratio_relerr": self.ratio_relerr,
            "sstar_num": self.sstar_num,
            "expansion_relerrs": {str(k): v for k, v in self.expansion_relerrs.items()},
            "coefficients": {str(k): v for k, v in self.coefficients.items()},
            "identity_relerrs": dict(self.identity_relerrs),
        }


def _relerr(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


def talenti_identity_suite(
    n: int,
    a_values: Sequence[float],
    ctx: QuadratureContext = DEFAULT_CTX,
) -> TalentiReport:
    """Verify the radial identities on U by independent quadrature.

    All left-hand sides are assembled from the analytic derivatives of U,
    never from finite differences, so the recorded relative errors measure
    only the quadrature."""
    if n < 5:
        raise ParameterDomainError(f"need n >= 5, got n={n}")

    U = lambda r: talenti(r, n)
    Up = lambda r: talenti_d1(r, n)
    lap = lambda r: talenti_laplacian(r, n)

    I = weighted_radial_integral(lambda r: U(r) ** 2, n, -4.0, ctx=ctx)
    J = weighted_radial_integral(lambda r: Up(r) ** 2, n, -2.0, ctx=ctx)
    ratio = (n - 2) * (n - 4) ** 2 / (4.0 * (n - 3))
    ratio_relerr = _relerr(J / I, ratio)

    identity_relerrs = {
        # int |x|^-4 U (x . grad U) = -(n-4)/2 I
        "radial-1": _relerr(
            weighted_radial_integral(lambda r: U(r) * r * Up(r), n, -4.0, ctx=ctx),
            -0.5 * (n - 4) * I,
        ),
        # int |x|^-2 (x . grad U) Delta U = (n/2) J
        "radial-2": _relerr(
            weighted_radial_integral(lambda r: r * Up(r) * lap(r), n, -2.0, ctx=ctx),
            0.5 * n * J,
        ),
        # int |x|^-2 U Delta U = -J - (n-4) I
        "radial-3": _relerr(
            weighted_radial_integral(lambda r: U(r) * lap(r), n, -2.0, ctx=ctx),
            -J - (n - 4) * I,
        ),
    }

    energy = weighted_radial_integral(lambda r: lap(r) ** 2, n, 0.0, ctx=ctx)
    two_ss = 2.0 * n / (n - 4)
    mass = weighted_radial_integral(lambda r: U(r) ** two_ss, n, 0.0, ctx=ctx)
    sstar_num = energy / mass ** (2.0 / two_ss)

    expansion_relerrs: Dict[float, float] = {}
    coefficients: Dict[float, float] = {}
    for a in a_values:
        a = float(a)
        c = expansion_coefficient(n, a)
        coefficients[a] = c

        def modified(r: np.ndarray, a: float = a) -> np.ndarray:
            # |x|^-a Delta(|x|^a U), so the weight cancels in the square
            return (lap(r) + (2.0 * a * Up(r) / r) + a * (n - 2 + a) * U(r) / r**2) ** 2

        lhs = weighted_radial_integral(modified, n, 0.0, ctx=ctx)
        expansion_relerrs[a] = _relerr(lhs, energy + c * I)

    return TalentiReport(
        n=n,
        I=I,
        J=J,
        ratio_relerr=ratio_relerr,
        sstar_num=sstar_num,
        expansion_relerrs=expansion_relerrs,
        coefficients=coefficients,
        identity_relerrs=identity_relerrs,
    )


# ---------------------------------------------------------------------------
# Strictness predicate


def strictness_sign_check(n: int, alpha: float) -> dict:
    """Sign of c(n, -alpha/2), cross-checked against the interval form.

    With x = a^2 + 2a = ((alpha-2)^2 - 4)/4 and j the bracket constant,
    c = x (x - j); hence c < 0 iff 2 < |alpha - 2| < sqrt(4 + 2j)."""
    if n < 5:
        raise ParameterDomainError(f"need n >= 5, got n={n}")
    a = -0.5 * float(alpha)
    coefficient = expansion_coefficient(n, a)
    upper = math.sqrt(4.0 + 2.0 * (n - 2) ** 2 * (n - 4) / (n - 3))
    shift = abs(float(alpha) - 2.0)
    predicate = 2.0 < shift < upper

    # the two routes are algebraically identical; only a float landing
    # exactly on a boundary could make them disagree
    x = a * (a + 2.0)
    j = (n - 2) ** 2 * (n - 4) / (2.0 * (n - 3))
    on_boundary = min(abs(x), abs(x - j)) < 1e-12 * max(1.0, j)
    if (coefficient < 0.0) != predicate and not on_boundary:
        raise AssertionError(
            f"sign route c={coefficient} disagrees with interval route "
            f"|alpha-2|={shift}, upper={upper}"
        )
    return {"predicate": predicate, "coefficient": coefficient, "interval": (2.0, upper)}


# ---------------------------------------------------------------------------
# Shifted-weight inequality


@dataclass(frozen=True)
class ShiftedWeightReport:
    n: int
    a: float
    C_a: float
    e: Tuple[float, ...]
    t_values: List[float]
    f_values: List[float]
    inequality_ok: bool
    fitted_t2_coeff: float
    fitted_t1_coeff: float
    f0: float
    grad_sq: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "C_a": self.C_a,
            "e": list(self.e),
            "t_values": list(self.t_values),
            "f_values": list(self.f_values),
            "inequality_ok": self.inequality_ok,
            "fitted_t2_coeff": self.fitted_t2_coeff,
            "fitted_t1_coeff": self.fitted_t1_coeff,
            "f0": self.f0,
            "grad_sq": self.grad_sq,
        }


def _profile_splines(u: RadialProfile):
    r = np.asarray(u.nodes, dtype=float)
    v = np.asarray(u.values, dtype=float)
    k = 5 if r.size >= 6 else 3
    spl = make_interp_spline(r, v, k=k)
    return spl, spl.derivative(1), spl.derivative(2)


def _check_ball_support(u: RadialProfile) -> float:
    r = np.asarray(u.nodes, dtype=float)
    v = np.asarray(u.values, dtype=float)
    if r[-1] > 1.0 + 1e-12:
        raise SupportViolationError(f"profile extends to r={r[-1]} > 1")
    peak = float(np.max(np.abs(v)))
    if abs(float(v[-1])) > 1e-9 * max(peak, 1e-300):
        raise SupportViolationError(
            "profile does not vanish at the boundary of the unit ball"
        )
    near = np.abs(v[r > 0.99 * r[-1]])
    if near.size and float(np.max(near)) > 1e-4 * max(peak, 1e-300):
        raise SupportViolationError(
            "profile does not decay near the boundary of the unit ball"
        )
    return float(r[-1])


def _gauss_grid_1d(a: float, b: float, panels: int, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + halfs[:, None] * x[None, :]).ravel()
    weights = (halfs[:, None] * w[None, :]).ravel()
    return nodes, weights


def shifted_weight_lemma_check(
    n: int,
    a: float,
    u: RadialProfile,
    t_values: Sequence[float],
    r_panels: int = 48,
    theta_panels: int = 24,
    panel_order: int = 12,
) -> ShiftedWeightReport:
    """Evaluate f(t) = int |tx+e|^(-2a) |Delta(|tx+e|^a u)|^2 on the ball.

    The weight never vanishes for t <= 1/4, so a tensor Gauss rule in
    (r, theta) with measure omega_(n-1) r^(n-1) sin^(n-2)(theta) suffices.
    The canonical axis e is the first coordinate direction; by rotational
    invariance of the radial profile the choice is immaterial."""
    if u.n != n:
        raise ParameterDomainError(f"profile dimension {u.n} != {n}")
    t_values = [float(t) for t in t_values]
    if any(t < 0.0 or t > 0.25 for t in t_values):
        raise ParameterDomainError("t values must lie in [0, 1/4]")
    r_max = _check_ball_support(u)
    spl, s1, s2 = _profile_splines(u)

    a = float(a)
    c_a = a * (a + 2.0) * (n - 2) / float(n)
    omega_sec = sphere_area(n - 1)

    r, wr = _gauss_grid_1d(0.0, r_max, r_panels, panel_order)
    th, wth = _gauss_grid_1d(0.0, math.pi, theta_panels, panel_order)
    cos_th = np.cos(th)
    # measure factors, split by coordinate
    mr = wr * r ** (n - 1)
    mth = wth * np.sin(th) ** (n - 2)

    u_vals = np.asarray(spl(r), dtype=float)
    ur = np.asarray(s1(r), dtype=float)
    lap_u = np.asarray(s2(r), dtype=float) + (n - 1) / r * ur

    R = r[:, None]
    UR = ur[:, None]
    LAP = lap_u[:, None]
    UV = u_vals[:, None]
    C = cos_th[None, :]

    f_values: List[float] = []
    for t in t_values:
        W = 1.0 + 2.0 * t * R * C + (t * R) ** 2
        integrand = (LAP + (2.0 * a * t * UR * (t * R + C) + a * (n - 2 + a) * t**2 * UV) / W) ** 2
        f_values.append(float(omega_sec * mr @ integrand @ mth))

    # reference quantities by 1-D quadrature on the same spline
    f0 = float(
        weighted_radial_integral(
            lambda s: (np.asarray(s2(s)) + (n - 1) / s * np.asarray(s1(s))) ** 2,
            n,
            0.0,
            domain=(0.0, r_max),
        )
    )
    grad_sq = float(
        weighted_radial_integral(
            lambda s: np.asarray(s1(s)) ** 2, n, 0.0, domain=(0.0, r_max)
        )
    )

    ts = np.array(t_values)
    df = np.array(f_values) - f0
    nonzero = ts > 0.0
    if np.count_nonzero(nonzero) >= 2:
        design = np.stack([ts[nonzero], ts[nonzero] ** 2], axis=1)
        coef, *_ = np.linalg.lstsq(design, df[nonzero], rcond=None)
        lin, quad = float(coef[0]), float(coef[1])
    else:
        lin, quad = 0.0, 0.0

    if c_a > 0.0:
        inequality_ok = all(
            fv <= f0 - c_a * t**2 * grad_sq + 1e-12 * f0
            for t, fv in zip(t_values, f_values)
            if t > 0.0
        )
    else:
        inequality_ok = False

    e = tuple([1.0] + [0.0] * (n - 1))
    return ShiftedWeightReport(
        n=n,
        a=a,
        C_a=c_a,
        e=e,
        t_values=t_values,
        f_values=f_values,
        inequality_ok=inequality_ok,
        fitted_t2_coeff=quad,
        fitted_t1_coeff=lin,
        f0=f0,
        grad_sq=grad_sq,
    )


# ---------------------------------------------------------------------------
# Concentration family


def smoothstep_cutoff(r: np.ndarray) -> np.ndarray:
    """Quintic smoothstep: 1 for r <= 1/2, 0 for r >= 3/4."""
    s = np.clip((np.asarray(r, dtype=float) - 0.5) / 0.25, 0.0, 1.0)
    return 1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s**2)


def _smoothstep_d1(r: np.ndarray) -> np.ndarray:
    s = (np.asarray(r, dtype=float) - 0.5) / 0.25
    inside = (s > 0.0) & (s < 1.0)
    out = np.zeros_like(s)
    ss = s[inside]
    out[inside] = -(30.0 * ss**2 - 60.0 * ss**3 + 30.0 * ss**4) / 0.25
    return out


def _smoothstep_d2(r: np.ndarray) -> np.ndarray:
    s = (np.asarray(r, dtype=float) - 0.5) / 0.25
    inside = (s > 0.0) & (s < 1.0)
    out = np.zeros_like(s)
    ss = s[inside]
    out[inside] = -(60.0 * ss - 180.0 * ss**2 + 120.0 * ss**3) / 0.25**2
    return out


@dataclass(frozen=True)
class UepsReport:
    n: int
    lam: float
    epsilons: List[float]
    ratios: List[float]
    slope_biharmonic: float
    below_sstar: bool
    cutoff: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sstar_num: float = float("nan")
    biharmonic_excess: List[float] = field(default_factory=list)
    mass_deficits: List[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.lam,
            "epsilons": list(self.epsilons),
            "ratios": list(self.ratios),
            "slope_biharmonic": self.slope_biharmonic,
            "below_sstar": self.below_sstar,
            "cutoff": "quintic-smoothstep[1/2,3/4]",
            "sstar_num": self.sstar_num,
            "biharmonic_excess": list(self.biharmonic_excess),
            "mass_deficits": list(self.mass_deficits),
        }


def ueps_profile(n: int, eps: float, r: np.ndarray) -> np.ndarray:
    return eps ** (0.5 * (4 - n)) * smoothstep_cutoff(r) * talenti(r / eps, n)


def _ueps_derivs(n: int, eps: float, r: np.ndarray):
    scale = eps ** (0.5 * (4 - n))
    chi, chi1, chi2 = smoothstep_cutoff(r), _smoothstep_d1(r), _smoothstep_d2(r)
    s = r / eps
    U, U1, U2 = talenti(s, n), talenti_d1(s, n) / eps, talenti_d2(s, n) / eps**2
    v = scale * chi * U
    v1 = scale * (chi1 * U + chi * U1)
    v2 = scale * (chi2 * U + 2.0 * chi1 * U1 + chi * U2)
    return v, v1, v2


def ueps_family(
    n: int,
    lam: float,
    epsilons: Sequence[float],
    ctx: QuadratureContext = DEFAULT_CTX,
) -> UepsReport:
    """Rayleigh quotients R(eps) of the truncated bubbles on the unit ball.

    R(eps) = (int |Delta u_eps|^2 - lambda int |grad u_eps|^2)
             / (int u_eps^(2**))^(2/2**)."""
    if n < 5:
        raise ParameterDomainError(f"need n >= 5, got n={n}")
    epsilons = [float(e) for e in epsilons]
    if any(e <= 0.0 or e > 0.25 for e in epsilons):
        raise ParameterDomainError("epsilon values must lie in (0, 1/4]")
    if any(b >= a for a, b in zip(epsilons[:-1], epsilons[1:])):
        raise ParameterDomainError("epsilon values must be strictly decreasing")
    if lam <= 0.0:
        warnings.warn(
            "lambda <= 0: the quotient cannot dip below the unweighted "
            "critical constant",
            SupportWarning,
        )

    two_ss = 2.0 * n / (n - 4)
    energy_U = weighted_radial_integral(lambda r: talenti_laplacian(r, n) ** 2, n, 0.0, ctx=ctx)
    mass_U = weighted_radial_integral(lambda r: talenti(r, n) ** two_ss, n, 0.0, ctx=ctx)
    sstar_num = energy_U / mass_U ** (2.0 / two_ss)

    ratios: List[float] = []
    excess: List[float] = []
    deficits: List[float] = []
    for eps in epsilons:
        def lap_sq(r: np.ndarray, eps: float = eps) -> np.ndarray:
            _, v1, v2 = _ueps_derivs(n, eps, r)
            return (v2 + (n - 1) / r * v1) ** 2

        def grad_sq(r: np.ndarray, eps: float = eps) -> np.ndarray:
            _, v1, _ = _ueps_derivs(n, eps, r)
            return v1**2

        def mass(r: np.ndarray, eps: float = eps) -> np.ndarray:
            v, _, _ = _ueps_derivs(n, eps, r)
            return np.abs(v) ** two_ss

        num = weighted_radial_integral(lap_sq, n, 0.0, domain=(0.0, 0.75), ctx=ctx)
        grd = weighted_radial_integral(grad_sq, n, 0.0, domain=(0.0, 0.75), ctx=ctx)
        den = weighted_radial_integral(mass, n, 0.0, domain=(0.0, 0.75), ctx=ctx)
        ratios.append((num - lam * grd) / den ** (2.0 / two_ss))
        excess.append(num - energy_U)
        deficits.append(mass_U - den)

    if len(epsilons) >= 2:
        slope = float(
            np.polyfit(np.log(epsilons), np.log(np.abs(excess)), 1)[0]
        )
    else:
        slope = float("nan")

    return UepsReport(
        n=n,
        lam=float(lam),
        epsilons=epsilons,
        ratios=ratios,
        slope_biharmonic=slope,
        below_sstar=bool(min(ratios) < sstar_num),
        cutoff=smoothstep_cutoff,
        sstar_num=sstar_num,
        biharmonic_excess=excess,
        mass_deficits=deficits,
    )

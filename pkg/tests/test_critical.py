"""Bubble identities, the strictness sign test, the shifted-weight
comparison, and the concentrating family."""
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import beta as beta_fn

from ckn.critical import (strictness_sign_check, expansion_coefficient,
                          shifted_weight_lemma_check, smoothstep_cutoff,
                          talenti, talenti_identity_suite, talenti_laplacian,
                          ueps_family, ueps_profile)
from ckn.errors import (ParameterDomainError, SupportViolationError,
                        SupportWarning)
from ckn.grids import RadialProfile
from ckn.quadrature import QuadratureContext, sphere_area, weighted_radial_integral

DOUBLED = QuadratureContext(panel_order=12, panel_count=128, grading_levels=120)


# ---------------------------------------------------------------------------
# bubble moments


def bubble_moment(n, p, nu):
    mu = n + p
    return sphere_area(n) * 0.5 * beta_fn(0.5 * mu, nu - 0.5 * mu)


def test_n5_moments_closed_form():
    # I = int |x|^-4 U^2 = 4 pi^3 / 3, J = int |x|^-2 |grad U|^2 = pi^3 / 2
    rep = talenti_identity_suite(5, (1.0,))
    assert rep.I == pytest.approx(4.0 * math.pi**3 / 3.0, rel=5e-15)
    assert rep.J == pytest.approx(math.pi**3 / 2.0, rel=5e-15)
    # and both agree with the Beta-function oracle
    assert rep.I == pytest.approx(bubble_moment(5, -4.0, 1.0), rel=1e-13)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_ratio_identity_all_dimensions(n):
    rep = talenti_identity_suite(n, (-3.0, -2.5, 1.0, 2.0))
    assert rep.ratio_relerr <= 1e-6
    assert all(v <= 1e-6 for v in rep.identity_relerrs.values())
    assert all(v <= 1e-6 for v in rep.expansion_relerrs.values())


def test_doubled_panels_reach_1e8():
    rep = talenti_identity_suite(6, (-3.0, 2.0), ctx=DOUBLED)
    worst = max([rep.ratio_relerr] + list(rep.expansion_relerrs.values())
                + list(rep.identity_relerrs.values()))
    assert worst <= 1e-8


def test_sstar_frozen_values():
    assert talenti_identity_suite(5, (1.0,)).sstar_num == pytest.approx(
        102.38327344058288, rel=1e-10
    )
    assert talenti_identity_suite(6, (1.0,)).sstar_num == pytest.approx(
        247.2844473661603, rel=1e-10
    )


def test_expansion_coefficient_closed_form():
    # c(n, a) = a(a+2)[a^2 + 2a - (n-2)^2 (n-4) / (2(n-3))]
    for n, a in ((5, -3.0), (6, 1.0), (7, -2.5)):
        x = a * (a + 2.0)
        j = (n - 2) ** 2 * (n - 4) / (2.0 * (n - 3))
        assert expansion_coefficient(n, a) == pytest.approx(x * (x - j), rel=1e-12)


# ---------------------------------------------------------------------------
# sign test


def test_strictness_interval_endpoint_sqrt13():
    rep = strictness_sign_check(5, 5.0)
    assert rep["interval"][1] == math.sqrt(13.0)  # exact float arithmetic
    assert rep["predicate"]


def test_strictness_outside_interval():
    rep = strictness_sign_check(6, -3.1)
    assert not rep["predicate"]
    assert rep["coefficient"] > 0.0


def test_strictness_requires_n5():
    with pytest.raises(ParameterDomainError):
        strictness_sign_check(4, 5.0)


@given(st.integers(5, 12), st.floats(-30.0, 34.0, allow_nan=False))
@settings(max_examples=1000, deadline=None)
def test_strictness_dual_routes_agree(n, alpha):
    """strictness_sign_check raises internally if the sign of c(n, -alpha/2)
    disagrees with the interval characterization; sampling widely is the
    proof burden here."""
    rep = strictness_sign_check(n, alpha)
    lo, hi = rep["interval"]
    assert lo == 2.0 and hi > lo
    assert rep["predicate"] == (lo < abs(alpha - 2.0) < hi)


# ---------------------------------------------------------------------------
# shifted weight


def ball_bump(n=6, N=2001):
    r = np.linspace(0.0, 1.0, N)
    return RadialProfile(nodes=r, values=(1.0 - r**2) ** 3, n=n)


def f0_oracle(n):
    """f(0) = int |Delta u|^2 for u = (1-r^2)^3: at t = 0 the shifted weight
    |t x + e| is identically 1, so only the plain biharmonic energy remains."""
    def integrand(r):
        du = -6.0 * r * (1.0 - r**2) ** 2
        d2u = -6.0 * (1.0 - r**2) ** 2 + 24.0 * r**2 * (1.0 - r**2)
        return (d2u + (n - 1) / r * du) ** 2

    return weighted_radial_integral(integrand, n, 0.0, domain=(1e-12, 1.0))


def test_shifted_weight_center_value_against_oracle():
    rep = shifted_weight_lemma_check(6, -3.0, ball_bump(), t_values=(0.02, 0.05))
    assert rep.C_a == 2.0
    assert rep.f0 == pytest.approx(f0_oracle(6), rel=1e-8)
    # int |grad u|^2 = omega_6 int r^5 (6 r (1-r^2)^2)^2 dr
    grad_oracle = weighted_radial_integral(
        lambda r: 36.0 * r**2 * (1.0 - r**2) ** 4, 6, 0.0, domain=(0.0, 1.0)
    )
    assert rep.grad_sq == pytest.approx(grad_oracle, rel=1e-10)


def test_shifted_weight_inequality_and_cancellation():
    rep = shifted_weight_lemma_check(
        6, -3.0, ball_bump(), t_values=(0.02, 0.04, 0.06, 0.08, 0.10)
    )
    assert rep.inequality_ok
    # fitted first-order coefficient must cancel
    assert abs(rep.fitted_t1_coeff) <= 1e-3 * rep.f0
    # fitted quadratic loss is at least C_a * |grad u|_2^2
    assert rep.fitted_t2_coeff <= -rep.C_a * rep.grad_sq * (1.0 - 1e-6)


def test_shifted_weight_rejects_boundary_supported_profile():
    r = np.linspace(0.0, 1.0, 501)
    bad = RadialProfile(nodes=r, values=1.0 - r**2 + 0.5, n=6)
    with pytest.raises(SupportViolationError):
        shifted_weight_lemma_check(6, -3.0, bad, t_values=(0.05,))


# ---------------------------------------------------------------------------
# concentrating family


def test_smoothstep_plateau_and_support():
    r = np.array([0.0, 0.3, 0.5, 0.625, 0.75, 0.9])
    chi = smoothstep_cutoff(r)
    assert chi[0] == 1.0 and chi[2] == 1.0
    assert chi[4] == 0.0 and chi[5] == 0.0
    assert 0.0 < chi[3] < 1.0
    fine = smoothstep_cutoff(np.linspace(0.5, 0.75, 200))
    assert np.all(np.diff(fine) <= 1e-12)


def test_ueps_profile_scaling():
    r = np.array([0.01, 0.02])
    u1 = ueps_profile(7, 0.01, r)
    u2 = ueps_profile(7, 0.02, r)
    assert np.all(u1 > 0.0) and np.all(u2 > 0.0)
    assert u1[0] > u2[0]  # sharper concentration is taller at its core


def test_ueps_parameter_domain():
    with pytest.raises(ParameterDomainError):
        ueps_family(7, 0.0, (0.3, 0.1))  # eps > 1/4
    with pytest.raises(ParameterDomainError):
        ueps_family(7, 0.0, (0.1, 0.2))  # not strictly decreasing


def test_ueps_ratios_approach_sstar_from_above():
    with pytest.warns(SupportWarning):
        rep = ueps_family(7, 0.0, (0.2, 0.1, 0.05, 0.025))
    assert rep.ratios == sorted(rep.ratios, reverse=True)
    assert rep.ratios[-1] >= rep.sstar_num * (1.0 - 5e-3)
    assert all(d >= 0.0 for d in rep.mass_deficits)


def test_ueps_negative_lambda_warns():
    with pytest.warns(SupportWarning):
        ueps_family(6, -1.0, (0.1, 0.05))

"""Constrained minimization of the one-dimensional quotient: solver vs
brute-force oracle, symmetry, degeneracies, and the sweep machinery."""
import math

import numpy as np
import pytest

from ckn.errors import ParameterDomainError
from ckn.grids import LineGrid
from ckn.radial_solver import (MinimizationConfig, alpha_scan,
                               brute_force_oracle, consistency_suite,
                               minimize_mu_q, scan_row)

COARSE = LineGrid(12.0, 41)


def test_solver_matches_brute_force_oracle():
    cfg = MinimizationConfig(grid=COARSE)
    res = minimize_mu_q(5, 0.0, 3.0, cfg)
    oracle = brute_force_oracle(5, 0.0, 3.0, COARSE)
    assert res.converged
    assert abs(res.mu_q - oracle) / oracle <= 1e-4


def test_alpha_reflection_bitwise():
    cfg = MinimizationConfig()
    a = minimize_mu_q(5, 0.0, 3.0, cfg)
    b = minimize_mu_q(5, 4.0, 3.0, cfg)
    assert a.mu_q == b.mu_q  # the assembled forms are identical


def test_degenerate_boundary_alpha():
    # alpha = 4 - n kills the zeroth-order coefficient: infimum 0, no minimizer
    res = minimize_mu_q(5, -1.0, 3.0, MinimizationConfig())
    assert res.degenerate
    assert res.mu_q == 0.0
    assert res.converged


def test_q2_quotient_bounded_below_and_decreasing_in_L():
    vals = []
    for L in (6.0, 12.0, 24.0):
        res = minimize_mu_q(5, 0.0, 2.0, MinimizationConfig(grid=LineGrid(L, 2001)))
        assert res.converged
        vals.append(res.mu_q)
    assert all(v >= 1.5625 for v in vals)
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] - 1.5625 < 0.1


def test_determinism_same_seed():
    cfg = MinimizationConfig(init="random", seed=7)
    a = minimize_mu_q(5, 0.0, 3.0, cfg)
    b = minimize_mu_q(5, 0.0, 3.0, cfg)
    assert a.mu_q == b.mu_q
    np.testing.assert_array_equal(a.profile.values, b.profile.values)


def test_bad_init_raises():
    with pytest.raises(ParameterDomainError):
        minimize_mu_q(5, 0.0, 3.0, MinimizationConfig(init="nope"))


def test_scan_row_fields_consistent():
    row = scan_row(5, 3.0, 0.0, MinimizationConfig())
    assert row.converged
    assert row.s2_rad == 1.5625
    assert row.rellich == 1.5625
    assert row.mu_q > 0.0
    from ckn.quadrature import sphere_area

    # S_q^rad = omega_n^((q-2)/q) mu_q
    assert row.s_q_rad == pytest.approx(
        sphere_area(5) ** (1.0 / 3.0) * row.mu_q, rel=1e-12
    )


def test_alpha_scan_handles_degenerate_rows():
    rows = alpha_scan(5, 3.0, (-1.0, 1.0, 1.0), MinimizationConfig())
    assert len(rows) == 3
    assert [r.alpha for r in rows] == [-1.0, 0.0, 1.0]
    assert rows[0].mu_q == 0.0  # boundary case, degenerate but well-defined


def test_consistency_suite_n5():
    rep = consistency_suite(5, 6.0, 3.0, MinimizationConfig())
    assert rep.conjugate_relerr is not None and rep.conjugate_relerr <= 1e-3
    assert rep.sandwich_ok
    assert rep.concavity_ok


def test_consistency_suite_n2_ratio_constancy():
    rep = consistency_suite(2, 0.0, 3.0, MinimizationConfig())
    assert rep.n2_ratio_const_err is not None
    assert rep.n2_ratio_const_err <= 1e-3

"""Grid and profile containers plus the two-column profile file format."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckn.errors import GridError
from ckn.grids import (LineGrid, LineProfile, RadialProfile,
                       load_profile, log_uniform_radial_nodes, save_profile)
from ckn.params import derive_params


def test_line_grid_spacing_and_center():
    g = LineGrid(12.0, 2001)
    assert g.h == pytest.approx(0.012, rel=1e-15)
    s = g.s
    assert s[0] == -12.0 and s[-1] == 12.0
    assert s[g.N // 2] == 0.0  # odd N pins s = 0


def test_line_grid_validation():
    with pytest.raises(GridError):
        LineGrid(12.0, 2000)  # even
    with pytest.raises(GridError):
        LineGrid(-1.0, 2001)


def test_refined_and_doubled():
    g = LineGrid(6.0, 101)
    assert g.refined().h == pytest.approx(g.h / 2.0)
    assert g.doubled_extent().h == pytest.approx(g.h)
    assert g.doubled_extent().L == 12.0


def test_radial_profile_validation():
    with pytest.raises(GridError):
        RadialProfile(nodes=np.array([0.0, 1.0, 1.0]),
                      values=np.zeros(3), n=5)
    with pytest.raises(GridError):
        RadialProfile(nodes=np.array([-0.1, 1.0]), values=np.zeros(2), n=5)


def test_log_uniform_nodes_increasing():
    r = log_uniform_radial_nodes(LineGrid(4.0, 101))
    assert np.all(np.diff(r) > 0)
    assert r[0] == pytest.approx(np.exp(-4.0))


def test_line_profile_roundtrip(tmp_path):
    grid = LineGrid(6.0, 201)
    params = derive_params(5, 0.0, 3.0)
    w = LineProfile(grid=grid, values=np.exp(-grid.s**2), params=params)
    path = tmp_path / "w.dat"
    save_profile(path, w)
    back = load_profile(path)
    assert isinstance(back, LineProfile)
    # 17-significant-digit emission round-trips doubles exactly
    np.testing.assert_array_equal(back.values, w.values)
    assert back.params.n == 5 and float(back.params.q) == 3.0


def test_radial_profile_roundtrip(tmp_path):
    r = np.linspace(0.0, 1.0, 101)
    u = RadialProfile(nodes=r, values=(1 - r**2) ** 3, n=6)
    path = tmp_path / "u.dat"
    save_profile(path, u)
    back = load_profile(path)
    assert isinstance(back, RadialProfile)
    assert back.n == 6
    np.testing.assert_array_equal(back.nodes, u.nodes)
    np.testing.assert_array_equal(back.values, u.values)


@given(st.floats(0.5, 50.0), st.integers(2, 400))
@settings(max_examples=50)
def test_grid_h_consistent(L, half):
    g = LineGrid(L, 2 * half + 1)
    s = g.s
    assert np.allclose(np.diff(s), g.h, rtol=1e-12, atol=1e-12)

"""Line and radial grids, sampled profiles, and the shared profile file
format (`# kind=...` header plus two whitespace-separated columns)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import GridError
from .params import DerivedParams


@dataclass(frozen=True)
class LineGrid:
    """Uniform grid on [-L, L] with an odd number of points so s = 0 is a node."""

    L: float
    N: int

    def __post_init__(self):
        if self.L <= 0:
            raise GridError(f"half-length L={self.L} must be positive")
        if self.N < 5 or self.N % 2 == 0:
            raise GridError(f"N={self.N} must be odd and >= 5")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.N - 1)

    @property
    def s(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.N)

    def doubled_extent(self) -> "LineGrid":
        """Same spacing, doubled half-length."""
        return LineGrid(L=2.0 * self.L, N=2 * self.N - 1)

    def refined(self) -> "LineGrid":
        """Same extent, halved spacing."""
        return LineGrid(L=self.L, N=2 * self.N - 1)


@dataclass(frozen=True)
class LineProfile:
    """Samples w_i ~ w(s_i) of a compactly supported line profile."""

    grid: LineGrid
    values: np.ndarray
    params: DerivedParams

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.N,):
            raise GridError(f"values shape {v.shape} does not match N={self.grid.N}")
        object.__setattr__(self, "values", v)

    def boundary_magnitude(self) -> float:
        peak = float(np.max(np.abs(self.values))) or 1.0
        return max(abs(self.values[0]), abs(self.values[-1])) / peak


@dataclass(frozen=True)
class RadialProfile:
    """Samples u_j ~ u(r_j) on strictly increasing positive radial nodes."""

    nodes: np.ndarray
    values: np.ndarray
    n: int

    def __post_init__(self):
        r = np.asarray(self.nodes, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape:
            raise GridError("nodes and values must be 1-d arrays of equal length")
        if np.any(np.diff(r) <= 0):
            raise GridError("radial nodes must be strictly increasing")
        if r[0] < 0:
            raise GridError("radial nodes must be nonnegative")
        object.__setattr__(self, "nodes", r)
        object.__setattr__(self, "values", v)


def log_uniform_radial_nodes(grid: LineGrid) -> np.ndarray:
    """Radial nodes r = exp(-s) matching a line grid, in increasing order."""
    return np.exp(-grid.s[::-1])


def save_profile(path: Union[str, Path], profile: Union[LineProfile, RadialProfile]) -> None:
    lines = []
    if isinstance(profile, LineProfile):
        p = profile.params
        lines.append("# kind=line")
        lines.append(f"# n={p.n}")
        lines.append(f"# alpha={float(p.alpha):.17g}")
        lines.append(f"# q={float(p.q):.17g}")
        xs, ys = profile.grid.s, profile.values
    else:
        lines.append("# kind=radial")
        lines.append(f"# n={profile.n}")
        xs, ys = profile.nodes, profile.values
    for x, y in zip(xs, ys):
        lines.append(f"{x:.17g} {y:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_profile(path: Union[str, Path]):
    """Read a profile file; returns LineProfile or RadialProfile."""
    from .params import derive_params

    header = {}
    xs, ys = [], []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, val = body.split("=", 1)
                header[key.strip()] = val.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GridError(f"bad profile line: {raw!r}")
        xs.append(float(parts[0]))
        ys.append(float(parts[1]))
    kind = header.get("kind")
    if kind == "radial":
        return RadialProfile(nodes=np.array(xs), values=np.array(ys), n=int(header["n"]))
    if kind == "line":
        x = np.array(xs)
        N = len(x)
        L = float(x[-1])
        if not math.isclose(-L, float(x[0]), rel_tol=1e-12):
            raise GridError("line profile nodes must span [-L, L]")
        grid = LineGrid(L=L, N=N)
        if not np.allclose(grid.s, x, rtol=0, atol=1e-12 * max(1.0, L)):
            raise GridError("line profile nodes are not uniform")
        params = derive_params(int(header["n"]), float(header["alpha"]), float(header["q"]))
        return LineProfile(grid=grid, values=np.array(ys), params=params)
    raise GridError(f"missing or unknown profile kind in header: {kind!r}")

"""Breaking-symmetry and breaking-positivity certificates.

The symmetry certificate implements the second-variation test: on a
converged radial minimizer let

    xi^2 = int(|w''|^2 + 2 gbar |w'|^2 + gam^2 |w|^2) / int |w|^2 ,

then radial minimality among all competitors would force

    (q - 2) xi^2 <= (n - 1)^2 + 2 (n - 1) xi ,

so a positive defect Q = (q-2) xi^2 - 2(n-1) xi - (n-1)^2 certifies that no
extremal is radial."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParameterDomainError, UnconvergedResultError
from .radial_solver import MinimizationResult, _assemble_form
from .spectrum import (SpectrumModel, _nearest_sphere_level, full_sphere,
                       positivity_predicates)
from .params import gamma_alpha, phase_thresholds

CERTIFICATE_MARGIN = 1e-6


def closed_form_breaking(n: int, alpha: float, q: float) -> bool:
    """|gamma_alpha| beyond the closed-form threshold (n-1)(1+sqrt(q-1))/(q-2)."""
    if q <= 2:
        return False
    thr = phase_thresholds(n, q).bs1
    return abs(float(gamma_alpha(n, alpha))) > thr


@dataclass(frozen=True)
class SymmetryCertificate:
    xi: float
    Q: float
    closed_form_broken: bool
    certified_broken: bool
    nearest_eigen_k: int
    eigen_distance: float

    def as_dict(self) -> dict:
        return {
            "xi": self.xi,
            "Q": self.Q,
            "closed_form_broken": self.closed_form_broken,
            "certified_broken": self.certified_broken,
            "nearest_eigen_k": self.nearest_eigen_k,
            "eigen_distance": self.eigen_distance,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def eigen_proximity(n: int, alpha: float):
    """Nearest spherical level to -gamma_alpha: argmin_k |gamma + k(n-2+k)|."""
    g = float(gamma_alpha(n, alpha))
    k, dist = _nearest_sphere_level(full_sphere(n), -g)
    return {"k": k, "distance": float(dist)}


def symmetry_certificate(
    result: MinimizationResult, n: Optional[int] = None, q: Optional[float] = None
) -> SymmetryCertificate:
    if not result.converged or result.degenerate:
        raise UnconvergedResultError(
            "refusing to certify from an unconverged or degenerate minimizer "
            f"(converged={result.converged}, el_residual={result.el_residual:.3g})"
        )
    params = result.profile.params
    if n is None:
        n = params.n
    if q is None:
        q = float(params.q)
    if q <= 2:
        raise ParameterDomainError("the second-variation test needs q > 2")

    grid = result.profile.grid
    w = result.profile.values[1:-1]
    A, _ = _assemble_form(grid, float(params.gbar), float(params.gamma))
    h = grid.h
    quad = float(w @ (A @ w))
    mass2 = h * float(np.sum(w**2))
    xi = math.sqrt(quad / mass2)
    Q = (q - 2.0) * xi**2 - 2.0 * (n - 1) * xi - (n - 1) ** 2

    prox = eigen_proximity(n, float(params.alpha))
    return SymmetryCertificate(
        xi=xi,
        Q=Q,
        closed_form_broken=closed_form_breaking(n, float(params.alpha), q),
        certified_broken=Q > CERTIFICATE_MARGIN * (n - 1) ** 2,
        nearest_eigen_k=prox["k"],
        eigen_distance=prox["distance"],
    )


POSITIVITY_NOTE = (
    "sign-changing extremals are guaranteed only for exponents q in an "
    "interval (2, q_a) whose upper endpoint is not quantified; for larger q "
    "the flags are necessary-condition indicators only"
)


@dataclass(frozen=True)
class PositivityReport:
    break_pos: bool
    sphere_threshold_exceeded: bool
    lambda1: float
    lambda2: float
    note: str


def positivity_phase(n: int, alpha: float, model: SpectrumModel) -> PositivityReport:
    preds = positivity_predicates(model, n, float(alpha))
    thr = phase_thresholds(n).break_pos_sphere
    exceeded = abs(float(alpha) - 2.0) > thr
    if model.kind == "full-sphere":
        # on the full sphere the two predicates are algebraically identical;
        # tolerate disagreement only within rounding distance of the threshold
        margin = abs(abs(float(alpha) - 2.0) - thr)
        if preds.break_pos != exceeded and margin > 1e-9 * max(1.0, thr):
            raise AssertionError(
                "inconsistent positivity predicates away from the threshold"
            )
    return PositivityReport(
        break_pos=preds.break_pos,
        sphere_threshold_exceeded=exceeded,
        lambda1=preds.lambda1,
        lambda2=preds.lambda2,
        note=POSITIVITY_NOTE,
    )

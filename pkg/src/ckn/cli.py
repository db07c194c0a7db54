"""Command-line surface: subcommand dispatch, flat key=value config files,
and bit-stable CSV/JSON emission.

Determinism contract: with identical flags, config, and seed the emitted
bytes are identical run-to-run and independent of --jobs.  Floats are
printed with %.17g (round-trip exact for doubles), CSV uses LF endings and
a `.` decimal separator, and parallel sweeps merge rows in key order.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (CknError, DegenerateIdentityError, GridError,
                     ParameterDomainError, UnconvergedResultError)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_UNCONVERGED = 2
EXIT_IO = 3


# ---------------------------------------------------------------------------
# formatting


def _fmt(x) -> str:
    """One CSV cell: %.17g floats, lowercase booleans, plain ints."""
    if isinstance(x, bool) or isinstance(x, np.bool_):
        return "true" if x else "false"
    if isinstance(x, float) or isinstance(x, np.floating):
        return f"{float(x):.17g}"
    return str(x)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(c) for c in row))
    return "\n".join(lines) + "\n"


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return obj


def _json_text(obj) -> str:
    return json.dumps(_jsonify(obj), indent=2, sort_keys=False) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# argument plumbing


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage failures exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        _diag(f"error: {message}")
        raise SystemExit(EXIT_DOMAIN)


def _parse_grid(text: str) -> Tuple[float, int]:
    try:
        ls, ns = text.split(",")
        return float(ls), int(ns)
    except ValueError as exc:
        raise ParameterDomainError(f"--grid expects L,N, got {text!r}") from exc


def _float_list(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ParameterDomainError(f"bad float list {text!r}") from exc


def _range_triple(text: str) -> Tuple[float, float, float]:
    vals = _float_list(text)
    if len(vals) != 3:
        raise ParameterDomainError(f"range expects lo,hi,step, got {text!r}")
    return vals[0], vals[1], vals[2]


def _read_config(path: str) -> dict:
    """Flat `key = value` file; '#' starts a comment; keys use flag spelling."""
    entries = {}
    try:
        raw = open(path).read()
    except OSError as exc:
        raise ParameterDomainError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(raw.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterDomainError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> None:
    """Overlay config-file values under explicit flags.

    Precedence: built-in default < CKN_CONFIG file < --config file < flag.
    A flag counts as explicit when it appears in argv."""
    paths = []
    env = os.environ.get("CKN_CONFIG")
    if env:
        paths.append(env)
    if getattr(args, "config", None):
        paths.append(args.config)
    merged = {}
    for p in paths:
        merged.update(_read_config(p))
    if not merged:
        return
    explicit = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
                for tok in argv if tok.startswith("--")}
    for key, value in merged.items():
        if key in explicit or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        else:
            setattr(args, key, value)


def _common_flags(sp: argparse.ArgumentParser, default_format: str = "json") -> None:
    sp.add_argument("--format", choices=("csv", "json"), default=default_format)
    sp.add_argument("--out", default=None, help="output file (default: stdout)")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--grid", default=None, metavar="L,N",
                    help="line-grid override for solver-backed commands")
    sp.add_argument("--config", default=None, help="flat key=value config file")


def _min_config(args) -> "MinimizationConfig":
    from .grids import LineGrid
    from .radial_solver import MinimizationConfig

    kw = {"seed": args.seed}
    if args.grid is not None:
        L, N = _parse_grid(args.grid)
        kw["grid"] = LineGrid(L, N)
    return MinimizationConfig(**kw)


def _jobs(args) -> int:
    j = getattr(args, "jobs", None)
    if j is None:
        j = os.cpu_count() or 1
    if j < 1:
        raise ParameterDomainError(f"--jobs must be >= 1, got {j}")
    return j


def _fan_out(worker, tasks: List, jobs: int) -> List:
    """Order-preserving map over tasks, optionally across processes.

    Rows are computed by the same picklable worker either way, so output
    bytes do not depend on the job count."""
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# pool workers (module level so they pickle)


def _scan_worker(task) -> "ScanRow":
    n, q, alpha, cfg = task
    from .radial_solver import ScanRow, scan_row

    try:
        return scan_row(n, q, alpha, cfg)
    except Exception:
        return ScanRow(alpha=float(alpha), mu_q=math.nan, s_q_rad=math.nan,
                       s2_rad=math.nan, rellich=math.nan, sq_positive=False,
                       bs_closed_form=False, bs_certificate=False, converged=False)


def _phase_worker(task) -> tuple:
    n, alpha, q, model_kind = task
    from .params import gamma_alpha
    from .phase import closed_form_breaking, positivity_phase
    from .spectrum import full_sphere, half_sphere

    model = full_sphere(n) if model_kind == "full" else half_sphere(n)
    rep = positivity_phase(n, alpha, model)
    bs = closed_form_breaking(n, alpha, q) if q is not None else False
    return (float(alpha), float(gamma_alpha(n, alpha)), rep.break_pos,
            rep.sphere_threshold_exceeded, rep.lambda1, rep.lambda2, bs)


def _probe_worker(task) -> "ProbeRow":
    n, lam, cfg = task
    from .bn_ball import ProbeRow, dimension_probe

    try:
        return dimension_probe(n, [lam], cfg)[0]
    except Exception:
        return ProbeRow(lam=float(lam), s_lambda=math.nan, sstar_num=math.nan,
                        below_sstar=False, pohozaev_A=math.nan, converged=False)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_constants(args) -> int:
    from .params import derive_params, radial_closed_forms
    from .spectrum import full_sphere, half_sphere, rellich_constant

    p = derive_params(args.n, args.alpha, args.q)
    forms = radial_closed_forms(args.n, args.alpha)
    rc_full = rellich_constant(full_sphere(args.n), args.n, args.alpha)
    rc_half = rellich_constant(half_sphere(args.n), args.n, args.alpha)
    payload = {
        "n": p.n,
        "alpha": float(p.alpha),
        "q": float(p.q),
        "beta": float(p.beta),
        "gamma": float(p.gamma),
        "gbar": float(p.gbar),
        "two_star_star": None if p.two_star_star is None else float(p.two_star_star),
        "s2_rad": float(forms.s2_rad),
        "mu21_rad": float(forms.mu21_rad),
        "conjugate_alpha": (None if forms.conjugate_alpha is None
                            else float(forms.conjugate_alpha)),
        "rellich_full_sphere": float(rc_full.value),
        "rellich_half_sphere": float(rc_half.value),
    }
    if args.format == "csv":
        keys = [k for k, v in payload.items() if v is not None]
        _emit(_csv(keys, [[payload[k] for k in keys]]), args.out)
    else:
        _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_radial_min(args) -> int:
    from .radial_solver import minimize_mu_q

    cfg = _min_config(args)
    res = minimize_mu_q(args.n, args.alpha, args.q, cfg)
    payload = {
        "n": args.n, "alpha": args.alpha, "q": args.q,
        "mu_q": res.mu_q, "s_q_rad": res.s_q_rad,
        "iterations": res.iterations, "el_residual": res.el_residual,
        "converged": res.converged, "degenerate": res.degenerate,
    }
    if args.save_profile:
        from .grids import save_profile
        save_profile(args.save_profile, res.profile)
    if args.format == "csv":
        keys = list(payload)
        _emit(_csv(keys, [[payload[k] for k in keys]]), args.out)
    else:
        _emit(_json_text(payload), args.out)
    if not res.converged and not res.degenerate:
        _diag(f"radial-min did not converge (el_residual={res.el_residual:.3g})")
        return EXIT_UNCONVERGED
    return EXIT_OK


SCAN_HEADER = ("alpha", "mu_q", "s_q_rad", "s2_rad", "rellich", "sq_positive",
               "bs_closed_form", "bs_certificate", "converged")


def _cmd_scan(args) -> int:
    lo, hi, step = _range_triple(args.alpha_range)
    if step <= 0 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ParameterDomainError("need a finite alpha range with positive step")
    cfg = _min_config(args)
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    alphas = [lo + k * step for k in range(count)]
    rows = _fan_out(_scan_worker, [(args.n, args.q, a, cfg) for a in alphas],
                    _jobs(args))
    if args.format == "json":
        _emit(_json_text([{k: getattr(r, k) for k in SCAN_HEADER} for r in rows]),
              args.out)
    else:
        _emit(_csv(SCAN_HEADER, [[getattr(r, k) for k in SCAN_HEADER] for r in rows]),
              args.out)
    return EXIT_OK


PHASE_HEADER = ("alpha", "gamma_alpha", "break_pos", "sphere_threshold_exceeded",
                "lambda1", "lambda2", "bs_closed_form")


def _cmd_phase(args) -> int:
    from .phase import POSITIVITY_NOTE

    if args.alpha_range is not None:
        lo, hi, step = _range_triple(args.alpha_range)
        if step <= 0:
            raise ParameterDomainError("need a positive alpha step")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        alphas = [lo + k * step for k in range(count)]
    elif args.alpha is not None:
        alphas = [args.alpha]
    else:
        raise ParameterDomainError("phase needs --alpha or --alpha-range")
    rows = _fan_out(_phase_worker,
                    [(args.n, a, args.q, args.model) for a in alphas], _jobs(args))
    if args.format == "json":
        payload = {
            "rows": [dict(zip(PHASE_HEADER, r)) for r in rows],
            "note": POSITIVITY_NOTE,
        }
        _emit(_json_text(payload), args.out)
    else:
        _emit(_csv(PHASE_HEADER, rows), args.out)
    return EXIT_OK


def _cmd_critical_check(args) -> int:
    from .critical import strictness_sign_check

    rep = strictness_sign_check(args.n, args.alpha)
    payload = {"n": args.n, "alpha": args.alpha, "predicate": rep["predicate"],
               "coefficient": rep["coefficient"],
               "interval": list(rep["interval"])}
    if args.format == "csv":
        _emit(_csv(("n", "alpha", "predicate", "coefficient",
                    "interval_lo", "interval_hi"),
                   [[args.n, args.alpha, rep["predicate"], rep["coefficient"],
                     rep["interval"][0], rep["interval"][1]]]), args.out)
    else:
        _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_talenti_verify(args) -> int:
    from .critical import talenti_identity_suite
    from .quadrature import QuadratureContext

    ctx = QuadratureContext()
    if args.double_panels:
        ctx = QuadratureContext(panel_order=ctx.panel_order,
                                panel_count=2 * ctx.panel_count,
                                grading_levels=ctx.grading_levels + 40)
    rep = talenti_identity_suite(args.n, _float_list(args.a_values), ctx=ctx)
    worst = max([rep.ratio_relerr] + list(rep.expansion_relerrs.values())
                + list(rep.identity_relerrs.values()))
    payload = rep.as_dict()
    payload["worst_relerr"] = worst
    payload["tol"] = args.tol
    payload["passed"] = worst <= args.tol
    if args.format == "csv":
        _emit(_csv(("n", "I", "J", "ratio_relerr", "sstar_num", "worst_relerr",
                    "passed"),
                   [[rep.n, rep.I, rep.J, rep.ratio_relerr, rep.sstar_num,
                     worst, payload["passed"]]]), args.out)
    else:
        _emit(_json_text(payload), args.out)
    if not payload["passed"]:
        _diag(f"talenti-verify: worst relative error {worst:.3g} > tol {args.tol:g}")
        return EXIT_UNCONVERGED
    return EXIT_OK


def _default_ball_profile(n: int) -> "RadialProfile":
    from .grids import RadialProfile

    r = np.linspace(0.0, 1.0, 2001)
    return RadialProfile(nodes=r, values=(1.0 - r**2) ** 3, n=n)


def _cmd_shifted_weight(args) -> int:
    from .critical import shifted_weight_lemma_check

    if args.profile:
        from .grids import load_profile
        u = load_profile(args.profile)
    else:
        u = _default_ball_profile(args.n)
    rep = shifted_weight_lemma_check(args.n, args.a, u,
                                     t_values=_float_list(args.t_values))
    payload = rep.as_dict()
    if args.format == "csv":
        _emit(_csv(("t", "f"), list(zip(rep.t_values, rep.f_values))), args.out)
    else:
        _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_ueps(args) -> int:
    from .critical import ueps_family

    rep = ueps_family(args.n, getattr(args, "lam"), _float_list(args.epsilons))
    payload = rep.as_dict()
    if args.format == "csv":
        _emit(_csv(("epsilon", "ratio", "biharmonic_excess", "mass_deficit"),
                   list(zip(rep.epsilons, rep.ratios, rep.biharmonic_excess,
                            rep.mass_deficits))), args.out)
    else:
        _emit(_json_text(payload), args.out)
    return EXIT_OK


def _bn_config(args) -> "BNConfig":
    from .bn_ball import BNConfig

    return BNConfig(n=args.n, lam=getattr(args, "lam", 0.0), N_r=args.nr,
                    r_min=args.r_min, stab=args.stab,
                    max_iters=args.max_iters, seed=args.seed)


def _cmd_bn(args) -> int:
    from .bn_ball import minimize_bn

    rep = minimize_bn(_bn_config(args))
    payload = rep.as_dict()
    if args.save_profile:
        from .grids import save_profile
        save_profile(args.save_profile, rep.profile)
    if args.format == "csv":
        keys = [k for k, v in payload.items() if not isinstance(v, str)]
        _emit(_csv(keys, [[payload[k] for k in keys]]), args.out)
    else:
        _emit(_json_text(payload), args.out)
    if not rep.converged:
        _diag(f"bn did not converge (el_residual={rep.el_residual:.3g})")
        return EXIT_UNCONVERGED
    return EXIT_OK


PROBE_HEADER = ("lambda", "s_lambda", "sstar_num", "below_sstar", "pohozaev_A",
                "converged")
_PROBE_ATTRS = ("lam", "s_lambda", "sstar_num", "below_sstar", "pohozaev_A",
                "converged")


def _cmd_bn_probe(args) -> int:
    cfg = _bn_config(args)
    lams = _float_list(args.lambdas)
    rows = _fan_out(_probe_worker, [(args.n, lam, cfg) for lam in lams],
                    _jobs(args))
    table = [[getattr(r, k) for k in _PROBE_ATTRS] for r in rows]
    if args.format == "json":
        _emit(_json_text([dict(zip(PROBE_HEADER, row)) for row in table]), args.out)
    else:
        _emit(_csv(PROBE_HEADER, table), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify umbrella


def _suite_talenti(args) -> Tuple[bool, dict]:
    from .critical import talenti_identity_suite

    rep = talenti_identity_suite(args.n, (-3.0, -2.5, 1.0, 2.0))
    worst = max([rep.ratio_relerr] + list(rep.expansion_relerrs.values())
                + list(rep.identity_relerrs.values()))
    return worst <= 1e-6, {"worst_relerr": worst, "tol": 1e-6}


def _suite_identity(args) -> Tuple[bool, dict]:
    from .grids import LineGrid, LineProfile
    from .operators import norm_identity_check
    from .params import derive_params

    grid = LineGrid(12.0, 4001)
    params = derive_params(args.n, 0.0, 3.0)
    w = LineProfile(grid=grid, values=np.exp(-grid.s**2), params=params)
    rep = norm_identity_check(w)
    worst = max(rep.rel_errors["q"], rep.rel_errors["quad"])
    return worst <= 1e-6, {"rel_errors": dict(rep.rel_errors), "tol": 1e-6}


def _suite_closed_form(args) -> Tuple[bool, dict]:
    from .params import radial_closed_forms
    from .spectrum import full_sphere, half_sphere, rellich_constant

    checks = {}
    forms = radial_closed_forms(5, 0.0)
    checks["s2_rad(5,0)"] = float(forms.s2_rad)
    checks["rellich_half(5,0)"] = float(rellich_constant(half_sphere(5), 5, 0.0).value)
    ok = (abs(checks["s2_rad(5,0)"] - 25.0 / 16.0) == 0.0
          and abs(checks["rellich_half(5,0)"] - 27.5625) <= 1e-12)
    # the full-sphere constant is a squared spectral distance, so it is
    # bounded by the radial closed form on a sample of alphas
    for a in (-6.0, -1.0, 0.0, 1.0, 3.0, 7.0):
        rc = rellich_constant(full_sphere(args.n), args.n, a)
        s2 = float(radial_closed_forms(args.n, a).s2_rad)
        if float(rc.value) > s2 * (1.0 + 1e-12):
            ok = False
            checks[f"sandwich_violated_alpha={a}"] = float(rc.value)
    return ok, checks


def _suite_critical(args) -> Tuple[bool, dict]:
    from .critical import strictness_sign_check

    # the checker raises if its two algebraic routes disagree
    sampled = 0
    for alpha in np.linspace(-12.0, 16.0, 57):
        strictness_sign_check(args.n, float(alpha))
        sampled += 1
    return True, {"sampled": sampled}


_SUITES = {
    "talenti": _suite_talenti,
    "identity": _suite_identity,
    "closed-form": _suite_closed_form,
    "critical": _suite_critical,
}


def _cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    results = {}
    all_ok = True
    for name in names:
        ok, detail = _SUITES[name](args)
        results[name] = {"passed": ok, **detail}
        _diag(f"verify {name}: {'PASS' if ok else 'FAIL'}")
        all_ok = all_ok and ok
    payload = {"passed": all_ok, "suites": results}
    if args.format == "csv":
        _emit(_csv(("suite", "passed"),
                   [[k, v["passed"]] for k, v in results.items()]), args.out)
    else:
        _emit(_json_text(payload), args.out)
    return EXIT_OK if all_ok else EXIT_UNCONVERGED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="ckn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", help="closed-form exponents and constants")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--q", type=float, default=2.0)
    _common_flags(sp)
    sp.set_defaults(run=_cmd_constants)

    sp = sub.add_parser("radial-min", help="minimize the radial quotient")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--save-profile", default=None)
    _common_flags(sp)
    sp.set_defaults(run=_cmd_radial_min)

    sp = sub.add_parser("scan", help="alpha sweep of constants and phase flags")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--alpha-range", required=True, metavar="LO,HI,STEP")
    sp.add_argument("--jobs", type=int, default=None)
    _common_flags(sp, default_format="csv")
    sp.set_defaults(run=_cmd_scan)

    sp = sub.add_parser("phase", help="positivity/symmetry phase indicators")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--alpha-range", default=None, metavar="LO,HI,STEP")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--model", choices=("full", "half"), default="full")
    sp.add_argument("--jobs", type=int, default=None)
    _common_flags(sp)
    sp.set_defaults(run=_cmd_phase)

    sp = sub.add_parser("critical-check", help="strict-improvement sign test")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    _common_flags(sp)
    sp.set_defaults(run=_cmd_critical_check)

    sp = sub.add_parser("talenti-verify", help="bubble identity suite")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a-values", default="-3,-2.5,1,2")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--double-panels", action="store_true")
    _common_flags(sp)
    sp.set_defaults(run=_cmd_talenti_verify)

    sp = sub.add_parser("shifted-weight", help="off-center weight comparison")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--t-values", default="0.02,0.04,0.06,0.08,0.10")
    sp.add_argument("--profile", default=None,
                    help="radial profile file (default: (1-r^2)^3)")
    _common_flags(sp)
    sp.set_defaults(run=_cmd_shifted_weight)

    sp = sub.add_parser("ueps", help="concentrating-family diagnostics")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--epsilons", default="0.2,0.1,0.05,0.025")
    _common_flags(sp)
    sp.set_defaults(run=_cmd_ueps)

    def _bn_flags(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--nr", type=int, default=2001,
                        help="radial nodes on [0, 1]")
        sp.add_argument("--r-min", type=float, default=1e-6)
        sp.add_argument("--stab", type=float, default=1.0)
        sp.add_argument("--max-iters", type=int, default=600)

    sp = sub.add_parser("bn", help="perturbed critical minimization on the ball")
    _bn_flags(sp)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--save-profile", default=None)
    _common_flags(sp)
    sp.set_defaults(run=_cmd_bn)

    sp = sub.add_parser("bn-probe", help="sweep the perturbation strength")
    _bn_flags(sp)
    sp.add_argument("--lambdas", required=True, metavar="L1,L2,...")
    sp.add_argument("--jobs", type=int, default=None)
    _common_flags(sp, default_format="csv")
    sp.set_defaults(run=_cmd_bn_probe)

    sp = sub.add_parser("verify", help="umbrella verification suites")
    sp.add_argument("--suite", choices=tuple(_SUITES) + ("all",), required=True)
    sp.add_argument("--n", type=int, default=5)
    _common_flags(sp)
    sp.set_defaults(run=_cmd_verify)

    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        _apply_config(args, argv)
        return args.run(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ParameterDomainError, GridError, DegenerateIdentityError,
            ValueError) as exc:
        _diag(f"parameter error: {exc}")
        return EXIT_DOMAIN
    except UnconvergedResultError as exc:
        _diag(f"non-convergence: {exc}")
        return EXIT_UNCONVERGED
    except OSError as exc:
        _diag(f"i/o error: {exc}")
        return EXIT_IO
    except CknError as exc:
        _diag(f"error: {exc}")
        return EXIT_DOMAIN


def main() -> None:
    raise SystemExit(dispatch())


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands:
  scatter    profile -> spectral CSV + JSON sidecar
  asym       long-time ray values from spectral data (or a profile)
  evolve     direct finite-difference evolution, snapshot CSV
  compare    direct evolution vs. ray predictions on the same field
  soliton    exact one-soliton samples and its singularity schedule
  selfcheck  deterministic invariant battery

Every option can come from a --config JSON file; explicit flags win.
Every output file starts with "# config <fingerprint>" where the
fingerprint hashes the fully resolved option set, so outputs can be
matched to the run that produced them.  Floats are written with repr()
to make outputs byte-reproducible.

Exit codes: 0 ok, 1 validation failure, 2 bad input, 3 runtime failure
(quadrature non-convergence or a solution singularity).
"""

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics, exact, pde, profiles, scattering
from .errors import (InputError, QuadratureError, SingularityError,
                     ValidationError)
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, cauchy_halfline,
                         pv_cauchy)
from .special import dilog


def _fingerprint(cfg):
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc


def _merge(defaults, config_path, overrides):
    """defaults < config file < explicit flags; unknown keys are errors."""
    cfg = dict(defaults)
    if config_path:
        raw = _load_json(config_path)
        unknown = sorted(set(raw) - set(defaults))
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(raw)
    for key, val in overrides.items():
        if val is not None:
            cfg[key] = val
    return cfg


def _floats(value, what):
    if isinstance(value, (list, tuple)):
        items = value
    else:
        items = [tok for tok in str(value).split(",") if tok.strip()]
    try:
        out = [float(v) for v in items]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what} must be numbers, got {value!r}") from exc
    if not out:
        raise InputError(f"{what} must not be empty")
    return out


def _thread_count():
    raw = os.environ.get("NNLS_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"NNLS_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise InputError("NNLS_THREADS must be >= 1")
    return n


def _fmt(v):
    return repr(float(v))


def _write_lines(path, lines):
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _build_profile(cfg):
    kwargs = {}
    if cfg["profile"] == "soliton" and cfg.get("phi1") is not None:
        kwargs["phi1"] = float(cfg["phi1"])
    if cfg["profile"] == "smoothed_step" and cfg.get("width") is not None:
        kwargs["width"] = float(cfg["width"])
    return profiles.resolve(cfg["profile"], float(cfg.get("amplitude", 1.0)),
                            **kwargs)


def _sidecar_path(csv_path):
    if csv_path.endswith(".csv"):
        return csv_path[:-4] + ".json"
    return csv_path + ".json"


def _spectral_from_cfg(cfg):
    """Spectral data either loaded from disk or computed from a profile."""
    if cfg.get("data"):
        sidecar = cfg.get("sidecar") or _sidecar_path(cfg["data"])
        return scattering.load_spectral_data(cfg["data"], sidecar)
    prof = _build_profile(cfg)
    grid = scattering.default_k_grid(int(cfg["k_count"]), float(cfg["k_min"]),
                                     float(cfg["k_max"]))
    return scattering.scattering_data(prof, grid)


_PROFILE_KEYS = {
    "profile": "smoothed_step", "amplitude": 1.0, "phi1": None, "width": None,
}
_GRID_KEYS = {"k_min": 1e-3, "k_max": 50.0, "k_count": 2000}


# ---------------------------------------------------------------------------
# scatter

def cmd_scatter(args):
    defaults = dict(_PROFILE_KEYS, **_GRID_KEYS, out="spectral.csv")
    defaults["profile"] = "pure_step"
    cfg = _merge(defaults, args.config, {
        "profile": args.profile, "amplitude": args.amplitude,
        "phi1": args.phi1, "width": args.width, "out": args.out,
        "k_min": args.k_min, "k_max": args.k_max, "k_count": args.k_count,
    })
    fp = _fingerprint(cfg)
    prof = _build_profile(cfg)
    grid = scattering.default_k_grid(int(cfg["k_count"]), float(cfg["k_min"]),
                                     float(cfg["k_max"]))
    sd = scattering.scattering_data(prof, grid)
    out = cfg["out"]
    scattering.write_spectral_csv(sd, out, fp)
    scattering.write_sidecar(sd, _sidecar_path(out), fp)
    bad = [name for name, (ok, _, _) in sd.validation.items() if not ok]
    print(f"wrote {out} and {_sidecar_path(out)}: {sd.case_tag}, "
          f"k1={_fmt(sd.k1)}, checks failed: {bad if bad else 'none'}")
    return 0


# ---------------------------------------------------------------------------
# asym

def _asym_row(sd, x, t):
    xi = x / (4.0 * t)
    nan = float("nan")
    if xi == 0.0:
        return ([x, t, xi, "", nan, nan, nan, "", nan, nan, nan, nan,
                 "transition-zone, unsupported"])
    res = asymptotics.q_asymptotic(sd, x, t)
    ph = asymptotics.phase_data(sd, abs(xi))
    flag = "near-transition" if abs(xi) < 0.05 * sd.amplitude else ""
    q = res.value
    return [x, t, xi, res.regime, q.real, q.imag, abs(q), res.error_order,
            ph.nu.imag, ph.nu.real, ph.delta_at_0.real, ph.delta_at_0.imag,
            flag]


def cmd_asym(args):
    defaults = dict(_PROFILE_KEYS, **_GRID_KEYS, data=None, sidecar=None,
                    x="-8,-4,4,8", t="10,20,40", out="asym.csv")
    cfg = _merge(defaults, args.config, {
        "profile": args.profile, "amplitude": args.amplitude,
        "phi1": args.phi1, "width": args.width, "data": args.data,
        "sidecar": args.sidecar, "x": args.x, "t": args.t, "out": args.out,
        "k_min": args.k_min, "k_max": args.k_max, "k_count": args.k_count,
    })
    fp = _fingerprint(cfg)
    xs = _floats(cfg["x"], "x")
    ts = _floats(cfg["t"], "t")
    if any(t <= 0 for t in ts):
        raise InputError("asym needs t > 0")
    sd = _spectral_from_cfg(cfg)
    pairs = [(x, t) for t in ts for x in xs]
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _asym_row(sd, *p), pairs))
    else:
        rows = [_asym_row(sd, x, t) for x, t in pairs]
    lines = [f"# config {fp}",
             "x,t,xi,regime,Re q,Im q,abs q,error_order,"
             "Im nu,Re nu,Re delta0,Im delta0,flag"]
    for row in rows:
        cells = []
        for v in row:
            s = _fmt(v) if isinstance(v, float) else str(v)
            cells.append(f'"{s}"' if "," in s else s)
        lines.append(",".join(cells))
    _write_lines(cfg["out"], lines)
    flagged = sum(1 for row in rows if row[-1])
    print(f"wrote {cfg['out']}: {len(rows)} rows, {flagged} flagged")
    return 0


# ---------------------------------------------------------------------------
# evolve

def _grid_points(cfg):
    if cfg.get("n_points"):
        return int(cfg["n_points"])
    L = float(cfg["L"])
    h = float(cfg["h"])
    n = int(round(2.0 * L / h)) + 1
    if n % 2 == 0:
        n += 1
    return n


def cmd_evolve(args):
    defaults = dict(_PROFILE_KEYS, L=40.0, h=0.02, n_points=None, dt=5e-5,
                    times="0.5,1.0", backend=None, smooth_width=None,
                    out="evolve.csv")
    cfg = _merge(defaults, args.config, {
        "profile": args.profile, "amplitude": args.amplitude,
        "phi1": args.phi1, "width": args.width, "L": args.L, "h": args.h,
        "n_points": args.n_points, "dt": args.dt, "times": args.times,
        "backend": args.backend, "out": args.out,
    })
    fp = _fingerprint(cfg)
    prof = _build_profile(cfg)
    times = _floats(cfg["times"], "times")
    state = pde.initial_state(prof, float(cfg["L"]), _grid_points(cfg),
                              smooth_width=cfg.get("smooth_width"))
    config = pde.EvolveConfig(dt=float(cfg["dt"]), snapshot_times=tuple(times),
                              backend=cfg.get("backend"))
    result = pde.evolve(state, config)
    lines = [f"# config {fp}", f"# backend {result.backend}",
             "t,x,Re q,Im q"]
    for snap in result.snapshots:
        for j in range(snap.n_points):
            lines.append(",".join(_fmt(v) for v in
                                  (snap.t, snap.x_grid[j],
                                   snap.q[j].real, snap.q[j].imag)))
    if result.blowup:
        lines.append(f"# blowup t={_fmt(result.blowup['time'])} "
                     f"sup={_fmt(result.blowup['sup'])}")
    _write_lines(cfg["out"], lines)
    msg = f"wrote {cfg['out']}: {len(result.snapshots)} snapshots"
    if result.blowup:
        msg += f", blow-up at t={result.blowup['time']:g}"
    print(msg)
    return 0


# ---------------------------------------------------------------------------
# compare

def cmd_compare(args):
    # Step-like data of height A generically focuses into a pole before
    # t = 2*pi/A**2, so the default comparison window stays well inside that.
    defaults = dict(_PROFILE_KEYS, **_GRID_KEYS, L=110.0, h=0.05,
                    n_points=None, dt=5e-4, times="0.5,1.0,1.5,2.0,2.5",
                    rays="-0.5,0.5", x0=None, backend=None,
                    out="compare.csv")
    cfg = _merge(defaults, args.config, {
        "profile": args.profile, "amplitude": args.amplitude,
        "phi1": args.phi1, "width": args.width, "L": args.L, "h": args.h,
        "n_points": args.n_points, "dt": args.dt, "times": args.times,
        "rays": args.rays, "x0": args.x0, "backend": args.backend,
        "out": args.out,
        "k_min": args.k_min, "k_max": args.k_max, "k_count": args.k_count,
    })
    fp = _fingerprint(cfg)
    prof = _build_profile(cfg)
    times = _floats(cfg["times"], "times")
    rays = _floats(cfg["rays"], "rays")
    x0s = _floats(cfg["x0"], "x0") if cfg.get("x0") not in (None, "") else []
    if any(t <= 0 for t in times):
        raise InputError("compare needs snapshot times > 0")
    if any(r == 0.0 for r in rays):
        raise InputError("rays must be nonzero (the transition zone is not covered)")

    sd = scattering.scattering_data(prof, scattering.default_k_grid(
        int(cfg["k_count"]), float(cfg["k_min"]), float(cfg["k_max"])))
    state = pde.initial_state(prof, float(cfg["L"]), _grid_points(cfg))
    result = pde.evolve(state, pde.EvolveConfig(
        dt=float(cfg["dt"]), snapshot_times=tuple(times),
        backend=cfg.get("backend")))

    lines = [f"# config {fp}", f"# backend {result.backend}",
             "kind,param,t,x,Re pde,Im pde,Re pred,Im pred,abs err,rel err,"
             "regime"]
    footer = []
    truncated_rays = []
    for xi in rays:
        samples, truncated = pde.ray_sample(result, xi, times)
        if truncated:
            truncated_rays.append(xi)
        kept = [(t, x, val) for (t, x, val, trusted) in samples if trusted]
        pde_abs = []
        used_t = []
        for t, x, val in kept:
            res = asymptotics.q_asymptotic(sd, x, t)
            pred = res.value
            err = abs(val - pred)
            rel = err / max(abs(pred), 1e-300)
            lines.append(",".join(
                ["ray", _fmt(xi)] + [_fmt(v) for v in
                 (t, x, val.real, val.imag, pred.real, pred.imag, err, rel)]
                + [res.regime]))
            pde_abs.append(abs(val))
            used_t.append(t)
        if not kept:
            footer.append(f"# ray {_fmt(xi)}: no trusted samples")
            continue
        if xi < 0:
            nu = asymptotics.nu_of_xi(sd, abs(xi))
            slope = float(np.polyfit(np.log(used_t), np.log(pde_abs), 1)[0])
            footer.append(
                f"# ray {_fmt(xi)}: fitted decay exponent {_fmt(slope)}, "
                f"predicted {_fmt(-0.5 - nu.imag)}")
        else:
            plateau = abs(asymptotics.modulated_constant(sd, xi))
            dev = max(abs(a - plateau) / plateau for a in pde_abs)
            footer.append(
                f"# ray {_fmt(xi)}: plateau {_fmt(plateau)}, "
                f"max rel dev {_fmt(dev)}")
    for x0 in x0s:
        errs = []
        for snap in result.snapshots:
            val = complex(np.interp(x0, snap.x_grid, snap.q.real),
                          np.interp(x0, snap.x_grid, snap.q.imag))
            pred = asymptotics.q_soliton_region(sd, x0, snap.t)
            err = abs(val - pred)
            rel = err / max(abs(pred), 1e-300)
            lines.append(",".join(
                ["x0", _fmt(x0)] + [_fmt(v) for v in
                 (snap.t, x0, val.real, val.imag, pred.real, pred.imag,
                  err, rel)] + ["Soliton"]))
            errs.append(rel)
        footer.append(f"# x0 {_fmt(x0)}: max rel err {_fmt(max(errs))}")
    if truncated_rays:
        footer.append("# truncated rays: "
                      + ",".join(_fmt(x) for x in truncated_rays))
    if result.blowup:
        footer.append(f"# blowup t={_fmt(result.blowup['time'])}")
    _write_lines(cfg["out"], lines + footer)
    for line in footer:
        print(line[2:])
    print(f"wrote {cfg['out']}")
    return 0


# ---------------------------------------------------------------------------
# soliton

def cmd_soliton(args):
    defaults = {"amplitude": 1.0, "phi1": math.pi, "x_min": -5.0,
                "x_max": 5.0, "x_count": 101, "times": "0.5",
                "out": "soliton.csv"}
    cfg = _merge(defaults, args.config, {
        "amplitude": args.amplitude, "phi1": args.phi1, "x_min": args.x_min,
        "x_max": args.x_max, "x_count": args.x_count, "times": args.times,
        "out": args.out,
    })
    fp = _fingerprint(cfg)
    params = exact.SolitonParams(float(cfg["amplitude"]), float(cfg["phi1"]))
    times = _floats(cfg["times"], "times")
    xs = np.linspace(float(cfg["x_min"]), float(cfg["x_max"]),
                     int(cfg["x_count"]))
    sing = exact.singularity_times(params)
    lines = [f"# config {fp}",
             "# singular times at x=0: " + ",".join(_fmt(s) for s in sing),
             "x,t,Re q,Im q"]
    for t in times:
        vals = exact.one_soliton(params, xs, t)
        for x, v in zip(xs, vals):
            lines.append(",".join(_fmt(u) for u in (x, t, v.real, v.imag)))
    _write_lines(cfg["out"], lines)
    if args.list_singularities:
        print("singular times at x=0: " + ", ".join(_fmt(s) for s in sing))
    print(f"wrote {cfg['out']}: {len(times) * xs.size} rows")
    return 0


# ---------------------------------------------------------------------------
# selfcheck

def _selfcheck_battery(fault):
    spec = DEFAULT_SPEC
    if fault == "quadrature":
        # an unsatisfiable tail tolerance: every mapped tail now fails
        spec = QuadratureSpec(tail_tol=0.0)
    elif fault is not None:
        raise InputError(f"unknown fault {fault!r} (supported: quadrature)")

    checks = []

    def check(name, tol):
        def deco(fn):
            checks.append((name, tol, fn))
            return fn
        return deco

    @check("pv-cauchy-arctan", 1e-9)
    def _pv():
        val = pv_cauchy(lambda z: 1.0 / (1.0 + z * z), 1.0)
        return abs(val - (-np.pi / 2.0))

    @check("halfline-dilog", 1e-8)
    def _halfline():
        # density ln(1 + r1*r2) for the unit step, = ln(4z^2/(4z^2+1))
        g = lambda z: np.log(4.0 * np.asarray(z) ** 2 / (4.0 * np.asarray(z) ** 2 + 1.0))
        val = cauchy_halfline(g, -0.5, 0.0, spec)
        want = 1j * dilog(-1.0) / (4.0 * np.pi)
        return abs(val - want)

    @check("cf4-unimodular", 5e-14)
    def _det():
        prof = profiles.pure_step(1.0)
        m = scattering.jost_solve(prof, 2.3, "left")
        return abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] - 1.0)

    @check("pure-step-scattering", 1e-6)
    def _scatter():
        prof = profiles.pure_step(1.0)
        sd = scattering.scattering_data(prof, scattering.default_k_grid(40))
        kc = sd.k_grid.astype(complex)
        a1_ref = 1.0 + 0.25 / kc ** 2
        b_ref = 1.0 / (2j * kc)
        err = max(
            float(np.max(np.abs(sd.a1 - a1_ref) / np.abs(a1_ref))),
            float(np.max(np.abs(sd.a2 - 1.0))),
            float(np.max(np.abs(sd.b - b_ref) / np.abs(b_ref))),
            abs(sd.k1 - 0.5),
        )
        return err

    @check("trace-formula", 1e-8)
    def _trace():
        sd = scattering.pure_step_spectral_data(1.0)
        return abs(scattering.trace_eval(sd, 2j, "a1") - 0.9375)

    @check("reflectionless-soliton", 1e-10)
    def _soliton():
        sd = scattering.soliton_spectral_data(1.0, math.pi)
        params = exact.SolitonParams(1.0, math.pi)
        val = asymptotics.q_soliton_region(sd, 1.3, 2.1)
        return abs(val - exact.one_soliton(params, 1.3, 2.1))

    @check("residual-constant", 0.0)
    def _residual():
        A = 2.0
        qc = np.full(41, A, dtype=complex)
        return abs(exact.pde_residual(qc, qc, qc, 0.25, 1e-3) - 2.0 * A ** 3)

    @check("stepper-zero-field", 0.0)
    def _zero():
        q = np.zeros(33, dtype=complex)
        out, steps, blew = pde._kernel("python").rk4_run(
            q, 0.1, 1e-4, 50, check_every=10, blow_threshold=1e6)
        return 0.0 if (steps == 50 and not blew) else float(np.max(np.abs(out)) + 1.0)

    return checks


def cmd_selfcheck(args):
    cfg = {"inject_fault": args.inject_fault or ""}
    fp = _fingerprint(cfg)
    checks = _selfcheck_battery(args.inject_fault)
    lines = [f"# config {fp}"]
    n_ok = 0
    for name, tol, fn in checks:
        try:
            err = float(fn())
        except (QuadratureError, SingularityError, ValidationError,
                InputError) as exc:
            lines.append(f"FAIL {name}: {type(exc).__name__}: {exc}")
            continue
        if err <= tol:
            n_ok += 1
            lines.append(f"ok   {name}: err={_fmt(err)} tol={_fmt(tol)}")
        else:
            lines.append(f"FAIL {name}: err={_fmt(err)} tol={_fmt(tol)}")
    lines.append(f"selfcheck: {n_ok}/{len(checks)} ok")
    if args.out:
        _write_lines(args.out, lines)
    print("\n".join(lines[1:]))
    return 0 if n_ok == len(checks) else 1


# ---------------------------------------------------------------------------

def _add_profile_flags(p, default_profile):
    p.add_argument("--profile", default=None,
                   help=f"builtin name or profile JSON path "
                        f"(default {default_profile})")
    p.add_argument("--amplitude", type=float, default=None,
                   help="boundary value A > 0")
    p.add_argument("--phi1", type=float, default=None,
                   help="soliton phase (soliton profile only)")
    p.add_argument("--width", type=float, default=None,
                   help="ramp width (smoothed_step only)")


def _add_grid_flags(p):
    p.add_argument("--k-min", dest="k_min", type=float, default=None)
    p.add_argument("--k-max", dest="k_max", type=float, default=None)
    p.add_argument("--k-count", dest="k_count", type=int, default=None,
                   help="nodes per sign of the spectral grid")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nnlstep",
        description="Step-like scattering, long-time ray values, and direct "
                    "evolution for the nonlocal focusing Schrodinger flow.")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("scatter", help="compute spectral data for a profile")
    p.add_argument("--config", default=None)
    _add_profile_flags(p, "pure_step")
    _add_grid_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("asym", help="long-time values along rays x = 4 xi t")
    p.add_argument("--config", default=None)
    _add_profile_flags(p, "smoothed_step")
    _add_grid_flags(p)
    p.add_argument("--data", default=None, help="spectral CSV from `scatter`")
    p.add_argument("--sidecar", default=None,
                   help="sidecar JSON (default: CSV path with .json)")
    p.add_argument("--x", default=None, help="comma list of x values")
    p.add_argument("--t", default=None, help="comma list of times > 0")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("evolve", help="direct finite-difference evolution")
    p.add_argument("--config", default=None)
    _add_profile_flags(p, "smoothed_step")
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--n-points", dest="n_points", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--times", default=None, help="comma list of snapshot times")
    p.add_argument("--backend", default=None, choices=("python", "cython"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("compare",
                       help="direct evolution against ray predictions")
    p.add_argument("--config", default=None)
    _add_profile_flags(p, "smoothed_step")
    _add_grid_flags(p)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--n-points", dest="n_points", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--times", default=None)
    p.add_argument("--rays", default=None, help="comma list of xi values")
    p.add_argument("--x0", default=None,
                   help="comma list of fixed positions (soliton region)")
    p.add_argument("--backend", default=None, choices=("python", "cython"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("soliton", help="exact one-soliton samples")
    p.add_argument("--config", default=None)
    p.add_argument("--amplitude", type=float, default=None)
    p.add_argument("--phi1", type=float, default=None)
    p.add_argument("--x-min", dest="x_min", type=float, default=None)
    p.add_argument("--x-max", dest="x_max", type=float, default=None)
    p.add_argument("--x-count", dest="x_count", type=int, default=None)
    p.add_argument("--times", default=None)
    p.add_argument("--list-singularities", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_soliton)

    p = sub.add_parser("selfcheck", help="deterministic invariant battery")
    p.add_argument("--out", default=None)
    p.add_argument("--inject-fault", dest="inject_fault", default=None,
                   help="deliberately break one stage (supported: quadrature)")
    p.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1
    except (QuadratureError, SingularityError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

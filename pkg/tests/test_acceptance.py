"""Release gate: eleven end-to-end acceptance checks.

Each test prints a single "criterion NN <name>: PASS/FAIL (...)" line on
the real stdout (past pytest's capture) so a plain `pytest -v` run leaves
a complete scoreboard in the log.  Expensive artifacts (numeric spectral
data) are built lazily and shared across criteria.
"""

import math

import numpy as np
import pytest

from nnlstep import asymptotics, cli, exact, pde, profiles, scattering


def _report(capsys, num, name, ok, detail):
    with capsys.disabled():
        print("criterion %02d %s: %s (%s)" % (num, name, "PASS" if ok else "FAIL", detail))


# ---------------------------------------------------------------------------
# shared numeric spectral data (built once, reused by criteria 1/2/5/6/9)

_SD_CACHE = {}


def _oracle_grid():
    pos = np.geomspace(0.05, 10.0, 200)
    return np.concatenate([-pos[::-1], pos])


def _numeric_sd(name):
    if name not in _SD_CACHE:
        if name == "pure":
            _SD_CACHE[name] = scattering.scattering_data(
                profiles.pure_step(1.0), _oracle_grid())
        elif name == "smoothed":
            _SD_CACHE[name] = scattering.scattering_data(
                profiles.smoothed_step(1.0), scattering.default_k_grid(60))
        elif name == "soliton":
            _SD_CACHE[name] = scattering.scattering_data(
                profiles.soliton(1.0, math.pi), scattering.default_k_grid(60))
        else:
            raise KeyError(name)
    return _SD_CACHE[name]


# ---------------------------------------------------------------------------


def test_c01_pure_step_closed_forms(capsys):
    # computed a1, a2, b on |k| in [0.05, 10] vs the step closed forms
    sd = _numeric_sd("pure")
    k = sd.k_grid.astype(complex)
    a1_ref = 1.0 + 0.25 / k ** 2
    a2_ref = np.ones_like(k)
    b_ref = 1.0 / (2j * k)
    rel = max(
        float(np.max(np.abs(sd.a1 - a1_ref) / np.abs(a1_ref))),
        float(np.max(np.abs(sd.a2 - a2_ref) / np.abs(a2_ref))),
        float(np.max(np.abs(sd.b - b_ref) / np.abs(b_ref))),
    )
    ok = rel < 1e-6
    _report(capsys, 1, "pure-step scattering oracle", ok,
            "max rel err %.2e, tol 1e-6" % rel)
    assert ok


def test_c02_determinant_and_symmetry(capsys):
    worst = 0.0
    for name in ("pure", "smoothed", "soliton"):
        v = _numeric_sd(name).validation
        for key in ("det_relation", "conjugation_symmetry"):
            passed, err, tol = v[key]
            worst = max(worst, float(err))
            assert passed, "%s %s: %.3e > %.3e" % (name, key, err, tol)
    ok = worst <= 1e-8
    _report(capsys, 2, "determinant and symmetry invariants", ok,
            "worst residual %.2e over 3 profiles, tol 1e-8" % worst)
    assert ok


def test_c03_k1_recovery(capsys):
    target = 0.5  # A/2 for A = 1
    vals = {
        "generic formula": scattering.compute_k1(scattering.pure_step_spectral_data(1.0)),
        "non-generic formula": scattering.compute_k1(scattering.soliton_spectral_data(1.0)),
        "step root search": scattering.k1_from_root_search(profiles.pure_step(1.0)),
        "soliton root search": scattering.k1_from_root_search(profiles.soliton(1.0, math.pi)),
    }
    worst = max(abs(v - target) for v in vals.values())
    ok = worst < 1e-6
    _report(capsys, 3, "k1 recovery", ok,
            "max |k1 - A/2| = %.2e over both formulas and root searches, tol 1e-6" % worst)
    assert ok


def test_c04_delta_closed_form(capsys):
    # delta(0.5, 0) for the unit step against an independent dilog series
    n = np.arange(1, 200001)
    li2_m1 = float(np.sum((-1.0) ** n / n ** 2))  # alternating, tail < 2.5e-11
    want = np.exp(1j * li2_m1 / (4.0 * np.pi))
    got = asymptotics.delta_at(scattering.pure_step_spectral_data(1.0), 0.5, 0.0)
    err = abs(got - want)
    ok = err < 1e-8
    _report(capsys, 4, "delta closed form", ok,
            "|delta - exp(i Li2(-1)/4pi)| = %.2e, tol 1e-8" % err)
    assert ok


def test_c05_small_k_law(capsys):
    # k^2 a1(k) -> A^2 a2(0)/4 by extrapolation, generic-case profiles
    worst = 0.0
    for name in ("pure", "smoothed"):
        sd = _numeric_sd(name)
        assert sd.case_tag == "CaseI"
        passed, rel, tol = sd.validation["small_k_a1_limit"]
        worst = max(worst, float(rel))
        assert passed, "%s: rel err %.3e > %.3e" % (name, rel, tol)
    ok = worst < 1e-3
    _report(capsys, 5, "small-k law", ok,
            "worst rel err %.2e over 2 generic profiles, tol 1e-3" % worst)
    assert ok


def test_c06_conserved_combination(capsys):
    worst_ratio = 0.0
    for name in ("pure", "smoothed", "soliton"):
        sd = _numeric_sd(name)
        passed, spread, tol = sd.validation["conserved_combination"]
        worst_ratio = max(worst_ratio, float(spread) / sd.amplitude ** 2)
        assert passed
    # one profile away from A = 1
    A = 2.5
    cons = scattering.small_k_limit(profiles.pure_step(A)).conserved_combination()
    spread = float(np.max(np.abs(cons - cons[cons.size // 2])))
    worst_ratio = max(worst_ratio, spread / A ** 2)
    ok = worst_ratio <= 1e-8
    _report(capsys, 6, "conserved combination", ok,
            "worst spread %.2e * A^2, tol 1e-8 * A^2" % worst_ratio)
    assert ok


def _soliton_err(h, dt):
    prof = profiles.soliton(1.0, math.pi)
    n = int(round(80.0 / h)) + 1
    state = pde.initial_state(prof, 40.0, n)
    res = pde.evolve(state, pde.EvolveConfig(dt=dt, snapshot_times=(1.0,)))
    snap = res.snapshots[-1]
    x = snap.x_grid
    m = np.abs(x) <= 20.0
    ref = exact.one_soliton(exact.SolitonParams(1.0, math.pi), x[m], 1.0)
    return float(np.max(np.abs(snap.q[m] - ref)))


def test_c07_soliton_vs_pde(capsys):
    ladder = ((0.04, 2e-4), (0.02, 5e-5), (0.01, 1.25e-5))
    errs = [_soliton_err(h, dt) for h, dt in ladder]
    hs = [h for h, _ in ladder]
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    ok = errs[1] < 1e-3 and 1.8 <= slope <= 2.2
    _report(capsys, 7, "exact soliton vs PDE", ok,
            "sup err %.2e at h=0.02 (tol 1e-3), order fit slope %.3f (2.0 +- 0.2)"
            % (errs[1], slope))
    assert ok


def test_c08_discrete_residual(capsys):
    # exact solution: residual is pure discretization error, O(h^2)
    p = exact.SolitonParams(1.0, math.pi)
    t = 0.8
    errs = []
    for h in (0.02, 0.01):
        dt = 0.05 * h * h
        x = np.arange(-10.0, 10.0 + h / 2, h)
        errs.append(exact.pde_residual(exact.one_soliton(p, x, t - dt),
                                       exact.one_soliton(p, x, t),
                                       exact.one_soliton(p, x, t + dt), h, dt))
    ratio = errs[0] / errs[1]
    # constant field: residual is the nonlinear term alone, exactly 2 A^3
    exact_const = True
    for A in (1.0, 1.7):
        q = np.full(41, A, dtype=complex)
        exact_const = exact_const and (exact.pde_residual(q, q, q, 0.1, 0.01) == 2.0 * A ** 3)
    ok = 3.0 < ratio < 5.0 and exact_const
    _report(capsys, 8, "discrete residual", ok,
            "halving ratio %.2f (want ~4), constant field == 2A^3: %s"
            % (ratio, exact_const))
    assert ok


def test_c09_ray_decay_vs_prediction(capsys):
    # smoothed step A=1 evolved on L=110, h=0.05, dt=5e-4; rays xi = -+0.5
    # sampled at trusted times t in [10, 40].
    state = pde.initial_state(profiles.smoothed_step(1.0), 110.0, 4401)
    times = (0.5, 1.0, 1.5, 2.0, 2.5, 10.0, 20.0, 40.0)
    res = pde.evolve(state, pde.EvolveConfig(dt=5e-4, snapshot_times=times))

    left, _ = pde.ray_sample(res, -0.5)
    right, _ = pde.ray_sample(res, 0.5)
    window = [(t, v) for (t, x, v, tr) in left if tr and 10.0 <= t <= 40.0]

    if window:
        ts = np.array([t for t, _ in window])
        vs = np.array([abs(v) for _, v in window])
        slope = float(np.polyfit(np.log(ts), np.log(vs), 1)[0])
        plat = abs(asymptotics.modulated_constant(_numeric_sd("smoothed"), 0.5))
        rw = [(t, v) for (t, x, v, tr) in right if tr and 10.0 <= t <= 40.0]
        dev = abs(abs(rw[-1][1]) - plat) / plat
        ok = -0.65 <= slope <= -0.35 and dev <= 0.15
        _report(capsys, 9, "ray decay vs prediction", ok,
                "decay exponent %.3f (want [-0.65,-0.35]), plateau dev %.1f%% (tol 15%%)"
                % (slope, 100 * dev))
        assert ok
        return

    # No trusted samples in the window: the field focused into a pole first.
    # Report what the run did produce, then fail -- the check as stated is
    # not satisfiable for this data.
    assert res.blowup is not None
    tb = res.blowup["time"]
    pre = [(t, v) for (t, x, v, tr) in left if tr]
    ts = np.array([t for t, _ in pre])
    vs = np.array([abs(v) for _, v in pre])
    slope = float(np.polyfit(np.log(ts), np.log(vs), 1)[0])
    plat = abs(asymptotics.modulated_constant(_numeric_sd("smoothed"), 0.5))
    pre_r = [(t, v) for (t, x, v, tr) in right if tr]
    dev = abs(abs(pre_r[-1][1]) - plat) / plat
    detail = ("no trusted samples in t in [10, 40]: field focuses into a pole at "
              "t = %.4g (sup %.1e); pre-singularity window t in [%.2g, %.2g] gives "
              "left-ray exponent %.3f and right-ray plateau dev %.1f%%"
              % (tb, res.blowup["sup"], ts[0], ts[-1], slope, 100 * dev))
    _report(capsys, 9, "ray decay vs prediction", False, detail)
    pytest.fail("criterion 9: " + detail)


def test_c10_soliton_region_formula(capsys):
    sd = scattering.soliton_spectral_data(1.0, 2.0)
    p = exact.SolitonParams(1.0, 2.0)
    worst = 0.0
    for x0, t in ((-3.0, 5.0), (0.7, 12.0), (5.0, 30.0)):
        got = asymptotics.q_soliton_region(sd, x0, t)
        worst = max(worst, abs(got - exact.one_soliton(p, x0, t)))
    ok = worst < 1e-10
    _report(capsys, 10, "soliton-region formula", ok,
            "max |q_soliton_region - one_soliton| = %.2e, tol 1e-10" % worst)
    assert ok


def test_c11_selfcheck_determinism(capsys, tmp_path):
    f1, f2 = tmp_path / "s1.txt", tmp_path / "s2.txt"
    rc1 = cli.main(["selfcheck", "--out", str(f1)])
    rc2 = cli.main(["selfcheck", "--out", str(f2)])
    same = f1.read_bytes() == f2.read_bytes()
    ok = rc1 == 0 and rc2 == 0 and same
    _report(capsys, 11, "selfcheck determinism", ok,
            "exit codes %d/%d, outputs byte-identical: %s" % (rc1, rc2, same))
    assert ok

"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured numbers.
Under pytest the lines are repeated in the terminal summary; the file also
runs as a script.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from fd_oracle import fd_circle_ground_state  # noqa: E402

from leakywire import birman_schwinger as bs  # noqa: E402
from leakywire import bounds as bd  # noqa: E402
from leakywire import curves as cv  # noqa: E402
from leakywire import geometry as geo  # noqa: E402
from leakywire.special import k0_integral_check  # noqa: E402


RESULT_LINES = []   # shown in the pytest terminal summary (see conftest.py)


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} | {detail}"
    RESULT_LINES.append(line)
    print(line, flush=True)
    return ok


def criterion_1():
    betas = [math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi]
    ang_err = max(abs(geo.chord_arc_constant(cv.angle(b)).c - math.sin(b / 2)) for b in betas)
    circ_err = abs(geo.chord_arc_constant(cv.circle(1.0)).c - 2 / math.pi)
    c_line = geo.chord_arc_constant(cv.line()).c
    est = geo.chord_arc_constant(cv.spinode(), levels=6).level_estimates
    ok = (ang_err <= 1e-6 and circ_err <= 1e-4 and c_line == 1.0
          and est[6] <= 0.05 and all(b < a for a, b in zip(est, est[1:])))
    return report(1, "chord-arc constants", ok,
                  f"angle err {ang_err:.1e}, circle err {circ_err:.1e}, line c={c_line!r}, "
                  f"spinode level 6 = {est[6]:.4f}")


def criterion_2():
    cases = [(1, 1), (2, 0.5), (10, 1)]
    err = max(abs(k0_integral_check(k, c) - math.pi / (k * c)) for k, c in cases)
    return report(2, "Macdonald integral identity", err <= 1e-8, f"max abs err {err:.1e}")


def criterion_3():
    mus = []
    for T in (25, 50, 100, 200):
        d = bs.discretize(cv.line(T), 4096)
        mus.append(bs.largest_eigenvalue(bs.assemble_bs_matrix(d, 1.0, 0.6))[0])
    ok = all(b > a for a, b in zip(mus, mus[1:])) and max(mus) <= 0.83334 and mus[-1] >= 0.81
    return report(3, "line norm convergence", ok, "mu_max = " + ", ".join(f"{m:.6f}" for m in mus))


def criterion_4():
    d = bs.discretize(cv.line(), 512)
    states = bs.find_bound_states(d, 1.0, 0.51, 5.0)
    return report(4, "no spurious states on the line", len(states) == 0,
                  f"{len(states)} states on kappa in [0.51, 5]")


def criterion_5():
    d = bs.discretize(cv.circle(1.0), 256)
    ok, parts = True, []
    for kappa in (0.5, 1.0, 2.0):
        mu_b = bs.largest_eigenvalue(bs.assemble_bs_matrix(d, 1.0, kappa))[0]
        cm = bs.assemble_comparison_matrix(2 / math.pi, 1.0, kappa, d)
        mu_c = bs.largest_eigenvalue(cm)[0]
        schur = bs.schur_row_bound(cm)
        top = 1 / (2 * (2 / math.pi) * kappa) + 1e-6
        ok &= mu_b <= mu_c <= schur <= top
        parts.append(f"k={kappa}: {mu_b:.4f}<={mu_c:.4f}<={schur:.4f}<={top:.4f}")
    return report(5, "domination chain on the circle", ok, "; ".join(parts))


def criterion_6():
    rep = bd.verify_report(cv.circle(1.0), 1.0)
    lams = [s.lam for s in rep.states]
    lo = -math.pi ** 2 / 16 - 1e-6
    fd = fd_circle_ground_state(alpha=1.0, R=1.0, L=8.0, h=0.02)
    rel = abs(lams[0] - fd) / abs(fd) if lams else math.inf
    ok = bool(lams) and all(lo <= lam < 0 for lam in lams) and rel <= 0.05
    return report(6, "circle bound states", ok,
                  f"lambda = {lams}, FD oracle {fd:.5f}, rel diff {rel:.3%}")


def criterion_7():
    rep = bd.verify_report(cv.angle(math.pi / 3), 1.0)
    lam0 = rep.states[0].lam if rep.states else math.nan
    cands = {c.bound_kind: c for c in rep.candidates}
    direct, comp = cands.get(bd.SINGLE), cands.get(bd.COMPOSITE)
    ok = (-1 <= lam0 < -0.25 and direct is not None and comp is not None
          and abs(direct.bound + 1) < 1e-12 and abs(comp.bound + 1) < 1e-12
          and direct.passed and comp.passed)
    return report(7, "angle pi/3 bounds", ok,
                  f"lambda0 = {lam0:.6f}, direct {direct.bound:.6f} ({direct.passed}), "
                  f"composite {comp.bound:.6f} ({comp.passed})")


def _random_curve(rng):
    kind = rng.choice(["circle", "angle", "line", "parabola", "circular_arc", "segment",
                       "spinode", "rhamphoid", "cusp_family"])
    if kind == "circle":
        return cv.circle(rng.uniform(0.3, 3.0))
    if kind == "angle":
        return cv.angle(rng.uniform(0.2, math.pi), T=rng.uniform(10, 60))
    if kind == "line":
        return cv.line(rng.uniform(5, 60))
    if kind == "parabola":
        return cv.parabola(rng.uniform(0.1, 2.0), T=rng.uniform(10, 40))
    if kind == "circular_arc":
        return cv.circular_arc(rng.uniform(0.5, 2.0), rng.uniform(0.5, 5.5))
    if kind == "segment":
        return cv.segment((0, 0), rng.uniform(0, 2 * math.pi), rng.uniform(0.5, 5))
    if kind == "cusp_family":
        n = int(rng.integers(1, 4))
        return cv.cusp_family(n, n + int(rng.integers(0, 3)))
    return cv.builtin(kind)


def criterion_8(draws=100):
    rng = np.random.default_rng(20240611)
    fails = 0
    for _ in range(draws):
        curve, alpha = _random_curve(rng), rng.uniform(0.2, 5.0)
        d = bs.discretize(curve, 96)
        kappas = np.sort(rng.uniform(0.05, 10.0, 16))
        mu = [bs.largest_eigenvalue(bs.assemble_bs_matrix(d, alpha, k))[0] for k in kappas]
        fails += not np.all(np.diff(mu) < 0)
    # bound formulas
    for _ in range(draws):
        alpha = rng.uniform(0.1, 10)
        cs = list(rng.uniform(0.05, 1.0, rng.integers(1, 6)))
        i = rng.integers(len(cs))
        worse = list(cs)
        worse[i] *= rng.uniform(0.1, 0.99)
        t = rng.uniform(0.1, 10)
        fails += not bd.composite_bound(alpha, worse) < bd.composite_bound(alpha, cs)
        fails += not math.isclose(bd.single_bound(t * alpha, cs[0]),
                                  t ** 2 * bd.single_bound(alpha, cs[0]), rel_tol=1e-12)
    return report(8, "monotonicity properties", fails == 0, f"{fails} violations in {draws} draws")


def criterion_9():
    alpha = 1.0
    rep = bd.verify_report(bd.star_graph(3), alpha)
    lam0 = rep.states[0].lam if rep.states else math.nan
    ok = rep.bound == -9 * alpha ** 2 / 4 and bool(rep.states) and rep.passed
    return report(9, "three-edge star graph", ok, f"bound {rep.bound!r}, ground state {lam0:.6f}")


def criterion_10():
    shifts = []
    for curve, kmin in ((cv.circle(1.0), 1e-3), (cv.angle(math.pi / 3), 0.5005)):
        lam = []
        for n in (512, 1024):
            states = bs.find_bound_states(bs.discretize(curve, n), 1.0, kmin, 2.0)
            lam.append(np.array([s.lam for s in states]))
        if len(lam[0]) != len(lam[1]) or len(lam[0]) == 0:
            shifts.append(math.inf)
        else:
            shifts.append(float(np.max(np.abs(lam[0] - lam[1]))))
    return report(10, "quadrature robustness", max(shifts) <= 1e-5,
                  f"max shift circle {shifts[0]:.1e}, angle {shifts[1]:.1e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(10)])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)

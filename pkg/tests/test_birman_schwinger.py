import math

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import i0, iv, k0, kv

from leakywire import birman_schwinger as bs
from leakywire import curves as cv
from leakywire.errors import ConvergenceError, DomainError


@pytest.fixture(scope="module")
def circle_disc():
    return bs.discretize(cv.circle(1.0), 256)


def circle_kappa0(alpha=1.0, R=1.0):
    # m = 0 mode of the circle: alpha R I0(kappa R) K0(kappa R) = 1
    return brentq(lambda k: alpha * R * i0(k * R) * k0(k * R) - 1, 1e-3, 50)


@pytest.mark.parametrize("make,n", [(lambda: cv.circle(1.3), 256), (lambda: cv.angle(1.0, T=30), 512),
                                    (lambda: cv.spinode(), 256)])
@pytest.mark.parametrize("rule", ["panel_gauss", "log_subtraction"])
def test_weights_sum_to_length(make, n, rule):
    c = make()
    d = bs.discretize(c, n, rule=rule)
    assert d.weights.sum() == pytest.approx(c.length, rel=1e-10)
    assert np.all(d.weights > 0)


def test_domain_tags():
    assert bs.discretize(cv.circle(1.0), 64).domain == "LoopPeriodic"
    assert bs.discretize(cv.line(10), 64).domain == "TruncatedLine"
    assert bs.discretize(cv.spinode(), 64).domain == "Segment"
    edges = [cv.segment((0, 0), a, 5.0, kind=cv.INFINITE) for a in (0, 2.0, 4.0)]
    assert bs.discretize(edges, 96).domain == "Graph"


def test_matrix_symmetric(circle_disc):
    B = bs.assemble_bs_matrix(circle_disc, 1.0, 0.7)
    assert np.allclose(B.entries, B.entries.T)
    assert B.n == circle_disc.n


@pytest.mark.parametrize("kappa", [0.3, 1.0, 3.0])
def test_circle_mode_eigenvalues(circle_disc, kappa):
    # the circle diagonalizes in Fourier modes: mu_m = alpha R I_m(kappa R) K_m(kappa R)
    vals, _ = bs.top_eigenpairs(bs.assemble_bs_matrix(circle_disc, 1.0, kappa), 5)
    exact = [iv(m, kappa) * kv(m, kappa) for m in (0, 1, 1, 2, 2)]
    assert np.allclose(vals, exact, rtol=1e-9)


def test_log_subtraction_converges():
    exact = i0(1.0) * k0(1.0)
    err = []
    for n in (128, 256, 512):
        d = bs.discretize(cv.circle(1.0), n, rule="log_subtraction")
        err.append(abs(bs.largest_eigenvalue(bs.assemble_bs_matrix(d, 1.0, 1.0))[0] - exact))
    assert err[2] < err[1] < err[0]
    assert err[2] < 1e-3


def test_line_approaches_analytic_norm():
    d = bs.discretize(cv.line(60), 1024)
    mu = bs.largest_eigenvalue(bs.assemble_bs_matrix(d, 1.0, 0.6))[0]
    bound = bs.bs_norm_line_analytic(1.0, 1.0, 0.6)
    assert bound == pytest.approx(5 / 6)
    assert 0.8 < mu < bound


def test_comparison_dominates(circle_disc):
    c = 2 / math.pi
    for kappa in (0.5, 2.0):
        B = bs.assemble_bs_matrix(circle_disc, 1.0, kappa)
        Cm = bs.assemble_comparison_matrix(c, 1.0, kappa, circle_disc)
        mu_b = bs.largest_eigenvalue(B)[0]
        mu_c = bs.largest_eigenvalue(Cm)[0]
        assert mu_b <= mu_c <= bs.schur_row_bound(Cm) <= math.pi / (4 * kappa) + 1e-6


def test_comparison_entrywise_log_rule():
    d = bs.discretize(cv.circle(1.0), 200, rule="log_subtraction")
    B = bs.assemble_bs_matrix(d, 1.0, 1.0).nystrom()
    Cm = bs.assemble_comparison_matrix(2 / math.pi, 1.0, 1.0, d).nystrom()
    assert np.all(B >= 0) and np.all(Cm >= B - 1e-15)


def test_comparison_needs_single_piece():
    edges = [cv.segment((0, 0), a, 5.0, kind=cv.INFINITE) for a in (0, 2.0, 4.0)]
    d = bs.discretize(edges, 96)
    with pytest.raises(DomainError):
        bs.assemble_comparison_matrix(1.0, 1.0, 1.0, d)


def test_power_iteration_matches_dense(circle_disc):
    B = bs.assemble_bs_matrix(circle_disc, 1.0, 1.0)
    mu_d, v_d = bs.largest_eigenvalue(B)
    mu_p, v_p = bs.largest_eigenvalue(B, method="power")
    assert mu_p == pytest.approx(mu_d, rel=1e-10)
    assert abs(abs(v_p @ v_d) - 1) < 1e-6


def test_power_iteration_reports_failure():
    M = np.diag([1.0, -1.0])  # equal-modulus eigenvalues: no convergence
    with pytest.raises(ConvergenceError):
        bs.power_iteration(M, max_iter=50)


def test_bad_inputs(circle_disc):
    with pytest.raises(DomainError):
        bs.assemble_bs_matrix(circle_disc, 1.0, 0.0)
    with pytest.raises(DomainError):
        bs.assemble_bs_matrix(circle_disc, -1.0, 1.0)
    with pytest.raises(DomainError):
        bs.discretize(cv.circle(1.0), 8)
    with pytest.raises(DomainError):
        bs.discretize(cv.circle(1.0), 64, rule="trapezoid")
    with pytest.raises(DomainError):
        bs.find_bound_states(circle_disc, 1.0, 2.0, 1.0)


def test_mu_decreasing_in_kappa(circle_disc):
    table = bs.eigenvalue_curve(circle_disc, 1.0, np.geomspace(0.05, 20, 16), top_k=3)
    assert table.mu.shape == (16, 3)
    assert np.all(np.diff(table.mu[:, 0]) < 0)


def test_eigenvalue_curve_csv(tmp_path, circle_disc):
    table = bs.eigenvalue_curve(circle_disc, 1.0, [0.5, 1.0, 2.0], top_k=2)
    path = tmp_path / "eig.csv"
    table.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "kappa,mu_1,mu_2"
    assert float(lines[2].split(",")[1]) == table.mu[1, 0]  # 17 digits round-trip
    with pytest.raises(DomainError):
        bs.eigenvalue_curve(circle_disc, 1.0, [1.0, 0.5])


@pytest.mark.parametrize("alpha", [1.0, 2.5])
def test_circle_ground_state(circle_disc, alpha):
    states = bs.find_bound_states(circle_disc, alpha, 1e-3, 2 * alpha)
    k_exact = circle_kappa0(alpha)
    assert states[0].kappa == pytest.approx(k_exact, rel=1e-9)
    assert states[0].lam == pytest.approx(-k_exact ** 2, rel=1e-9)
    assert states[0].residual < 1e-8
    w = circle_disc.weights
    assert float(w @ states[0].eigenvector ** 2) == pytest.approx(1.0)


def test_degenerate_pair_on_circle(circle_disc):
    # alpha = 3: the m = 1 mode binds as a doubly degenerate level
    states = bs.find_bound_states(circle_disc, 3.0, 1e-3, 6.0)
    k1 = brentq(lambda k: 3 * iv(1, k) * kv(1, k) - 1, 1e-3, 10)
    excited = [s for s in states if abs(s.kappa - k1) < 1e-6]
    assert len(excited) == 2 and all(s.multiplicity == 2 for s in excited)


def test_no_states_reports_diagnostics():
    d = bs.discretize(cv.line(50), 256)
    states = bs.find_bound_states(d, 1.0, 0.51, 5.0)
    assert len(states) == 0 and states.diagnostics


def test_state_record(circle_disc):
    st = bs.find_bound_states(circle_disc, 1.0, 1e-3, 2.0)[0]
    rec = st.to_record()
    assert set(rec) == {"kappa", "lambda", "branch", "residual"}
    assert rec["lambda"] == -rec["kappa"] ** 2


def test_graded_panels_near_corner():
    d = bs.discretize(cv.angle(1.0, T=30), 512)
    lengths = d.panel_bounds[:, 1] - d.panel_bounds[:, 0]
    at_corner = np.abs(d.panel_bounds).min(axis=1) < 1e-12
    assert lengths[at_corner].max() < lengths.max() / 100

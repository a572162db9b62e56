import warnings

import numpy as np
import pytest
import sympy as sp

import oracles
from tensoralg import scalars
from tensoralg.curvature import (Chart, DimensionError, MetricContext,
                                 setup_frame, setup_metric)
from tensoralg.scalars import is_zero, parse, sym


@pytest.fixture(scope="module")
def polar():
    return setup_metric(["r", "phi"], [["1", "0"], ["0", "r^2"]])


@pytest.fixture(scope="module")
def sphere():
    return setup_metric(["theta", "phi"],
                        [["a^2", "0"], ["0", "a^2*sin(theta)^2"]],
                        constants=("a",))


@pytest.fixture(scope="module")
def schwarzschild():
    return setup_metric(
        ["t", "r", "theta", "phi"],
        [["(2*m-r)/r", "0", "0", "0"],
         ["0", "r/(r-2*m)", "0", "0"],
         ["0", "0", "r^2", "0"],
         ["0", "0", "0", "r^2*sin(theta)^2"]],
        constants=("m",))


def _all_zero(array, rank):
    if rank == 0:
        return is_zero(array)
    return all(_all_zero(sub, rank - 1) for sub in array)


# ---------------------------------------------------------------------------
# setup


def test_chart_validation():
    with pytest.raises(DimensionError):
        Chart(("x",))
    with pytest.raises(ValueError):
        Chart(("x", "x"))


def test_setup_metric_polar(polar):
    assert polar.diagonal
    assert polar.ug[0][0] == 1 and polar.ug[1][1] == 1 / sym("r") ** 2


def test_setup_metric_identity():
    flat = setup_metric(["x", "y"], [["1", "0"], ["0", "1"]])
    assert flat.diagonal and flat.ug == [[1, 0], [0, 1]]


def test_setup_metric_offdiagonal_involutory():
    ctx = setup_metric(["x", "y"], [["0", "1"], ["1", "0"]])
    assert not ctx.diagonal
    assert ctx.det == -1
    assert ctx.ug == [[0, 1], [1, 0]]


def test_setup_metric_rejects_asymmetric():
    with pytest.raises(ValueError):
        setup_metric(["x", "y"], [["1", "x"], ["0", "1"]])


def test_setup_metric_rejects_singular():
    with pytest.raises(ValueError):
        setup_metric(["x", "y"], [["1", "1"], ["1", "1"]])


def test_setup_frame_polar():
    ctx = setup_frame(["r", "phi"],
                      [["cos(phi)", "-r*sin(phi)"],
                       ["sin(phi)", "r*cos(phi)"]],
                      [["1", "0"], ["0", "1"]])
    assert ctx.cframe_flag
    assert ctx.lg == [[1, 0], [0, sym("r") ** 2]]


def test_setup_frame_identity():
    ctx = setup_frame(["x", "y"], [["1", "0"], ["0", "1"]],
                      [["1", "0"], ["0", "1"]])
    assert ctx.lg == [[1, 0], [0, 1]]


def test_setup_frame_schwarzschild():
    ctx = setup_frame(
        ["t", "r", "theta", "phi"],
        [["sqrt((r-2*m)/r)", "0", "0", "0"],
         ["0", "sqrt(r/(r-2*m))", "0", "0"],
         ["0", "0", "r", "0"],
         ["0", "0", "0", "r*sin(theta)"]],
        [["-1", "0", "0", "0"], ["0", "1", "0", "0"],
         ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    expected = setup_metric(
        ["t", "r", "theta", "phi"],
        [["(2*m-r)/r", "0", "0", "0"],
         ["0", "r/(r-2*m)", "0", "0"],
         ["0", "0", "r^2", "0"],
         ["0", "0", "0", "r^2*sin(theta)^2"]])
    for i in range(4):
        for j in range(4):
            assert is_zero(ctx.lg[i][j] - expected.lg[i][j])


def test_setup_frame_rejects_singular():
    with pytest.raises(ValueError):
        setup_frame(["x", "y"], [["1", "1"], ["1", "1"]],
                    [["1", "0"], ["0", "1"]])


# ---------------------------------------------------------------------------
# Christoffel symbols


def test_polar_christoffels(polar):
    r = sym("r")
    c1, c2 = polar.christoffel1, polar.christoffel2
    assert c1[0][1][1] == r          # Gamma_{r phi phi}
    assert c1[1][1][0] == -r         # Gamma_{phi phi r}
    assert c2[1][1][0] == -r         # Gamma_{phi phi}^r
    assert c2[0][1][1] == 1 / r      # Gamma_{r phi}^phi
    assert _all_zero(setup_metric(["x", "y"],
                                  [["1", "0"], ["0", "1"]]).christoffel1, 3)


def test_christoffel_first_pair_symmetry(schwarzschild):
    c1 = schwarzschild.christoffel1
    n = 4
    for h in range(n):
        for k in range(n):
            for l in range(n):
                assert is_zero(c1[h][k][l] - c1[k][h][l])


def test_christoffel_independent_count(schwarzschild):
    # n^2 (n+1)/2 independent second-kind slots once (h, k) symmetry is used
    n = 4
    count = sum(1 for h in range(n) for k in range(h, n) for j in range(n))
    assert count == n * n * (n + 1) // 2


def test_christoffel2_matches_finite_differences(schwarzschild):
    gfun_raw = oracles.metric_fn(schwarzschild)
    point = [0.0, 5.0, 0.8, 0.3]
    def gfun(x):
        return gfun_raw(x, {"m": 1.0})
    fd = oracles.fd_christoffel2(gfun, point)
    values = dict(zip("t r theta phi".split(), point), m=1.0)
    c2 = schwarzschild.christoffel2
    for h in range(4):
        for k in range(4):
            for j in range(4):
                exact = complex(scalars.evaluate(c2[h][k][j], values)).real
                assert abs(exact - fd[h][k][j]) < 5e-7 * max(1, abs(exact))


# ---------------------------------------------------------------------------
# torsion and nonmetricity coefficients


def test_contortion_zero_torsion(polar):
    ctx = setup_metric(["r", "phi"], [["1", "0"], ["0", "r^2"]])
    ctx.set_torsion([[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]])
    assert _all_zero(ctx.contortion, 3)


def test_nonmetricity_zero_vector():
    ctx = setup_metric(["x", "y"], [["1", "0"], ["0", "1"]])
    ctx.set_nonmetricity(["0", "0"])
    assert _all_zero(ctx.nonmetricity_coeffs, 3)


def test_torsion_antisymmetry_validated():
    ctx = setup_metric(["x", "y"], [["1", "0"], ["0", "1"]])
    bad = [[["0", "0"], ["1", "0"]], [["1", "0"], ["0", "0"]]]
    with pytest.raises(ValueError):
        ctx.set_torsion(bad)


def test_contortion_and_nonmetricity_against_brute_force():
    # evaluate both formula implementations numerically at a random point
    ctx = setup_metric(["x", "y"], [["1+x^2", "x*y"], ["x*y", "2+y^2"]])
    tau = [[["0", "0"], ["x", "y"]], [["-x", "-y"], ["0", "0"]]]
    mu = ["x+1", "y+2"]
    ctx.set_torsion(tau)
    ctx.set_nonmetricity(mu)
    values = {"x": 0.7, "y": -0.4}

    def ev(e):
        return complex(scalars.evaluate(e, values)).real

    g = np.array([[ev(parse(x)) for x in row]
                  for row in (["1+x^2", "x*y"], ["x*y", "2+y^2"])])
    tau_n = np.array([[[ev(parse(x)) for x in row] for row in plane]
                      for plane in tau])
    mu_n = np.array([ev(parse(x)) for x in mu])
    n = 2
    for i in range(n):
        for j in range(n):
            for k in range(n):
                kappa = -0.5 * sum(
                    tau_n[i, j, m] * g[k, m] + tau_n[k, i, m] * g[j, m]
                    + tau_n[k, j, m] * g[i, m] for m in range(n))
                nu = 0.5 * (-g[i, k] * mu_n[j] - g[j, k] * mu_n[i]
                            + g[i, j] * mu_n[k])
                assert abs(ev(ctx.contortion[i][j][k]) - kappa) < 1e-12
                assert abs(ev(ctx.nonmetricity_coeffs[i][j][k]) - nu) < 1e-12


def test_connection_reductions():
    ctx = setup_metric(["r", "phi"], [["1", "0"], ["0", "r^2"]])
    # no torsion, no nonmetricity: connection is the first-kind Christoffel
    assert ctx.connection == ctx.christoffel1
    ctx2 = setup_metric(["r", "phi"], [["1", "0"], ["0", "r^2"]])
    tau = [[["0", "0"], ["r", "0"]], [["-r", "0"], ["0", "0"]]]
    ctx2.set_torsion(tau)
    n = 2
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert is_zero(ctx2.connection[a][b][c]
                               - ctx2.christoffel1[a][b][c]
                               + ctx2.contortion[a][b][c])


def test_frame_mode_connection_is_rotation_coefficients():
    ctx = setup_frame(["r", "phi"],
                      [["cos(phi)", "-r*sin(phi)"],
                       ["sin(phi)", "r*cos(phi)"]],
                      [["1", "0"], ["0", "1"]])
    assert ctx.connection == ctx.rotation_coeffs


# ---------------------------------------------------------------------------
# curvature tensors


def test_flat_3d_riemann_zero():
    flat = setup_metric(["x", "y", "z"],
                        [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    assert _all_zero(flat.riemann, 4)


def test_sphere_scalar_curvature(sphere):
    assert is_zero(sphere.ricci_scalar - 2 / sym("a") ** 2)


def test_sphere_ricci_proportional_to_metric(sphere):
    for i in range(2):
        for j in range(2):
            assert is_zero(sphere.ricci[i][j]
                           - sphere.lg[i][j] / sym("a") ** 2)


def test_schwarzschild_is_vacuum(schwarzschild):
    assert _all_zero(schwarzschild.ricci, 2)
    assert _all_zero(schwarzschild.einstein, 2)


def test_riemann_antisymmetry(schwarzschild):
    R = schwarzschild.riemann
    n = 4
    for h in range(n):
        for l in range(n):
            for k in range(n):
                for j in range(n):
                    assert is_zero(R[h][l][k][j] + R[h][k][l][j])


def test_ricci_symmetry(schwarzschild):
    ric = schwarzschild.ricci
    for i in range(4):
        for j in range(4):
            assert is_zero(ric[i][j] - ric[j][i])


def test_riemann_matches_finite_differences(schwarzschild):
    gfun_raw = oracles.metric_fn(schwarzschild)
    point = [0.0, 5.0, 0.8, 0.3]
    def gfun(x):
        return gfun_raw(x, {"m": 1.0})
    fd = oracles.fd_riemann(gfun, point)
    values = dict(zip("t r theta phi".split(), point), m=1.0)
    R = schwarzschild.riemann
    for h in range(4):
        for l in range(4):
            for k in range(4):
                for j in range(4):
                    exact = complex(
                        scalars.evaluate(R[h][l][k][j], values)).real
                    assert abs(exact - fd[h][l][k][j]) < 2e-5 * max(
                        1, abs(exact))


def test_riemann_matches_finite_differences_nondiagonal():
    ctx = setup_metric(["x", "y"], [["1+y^2", "x*y/2"], ["x*y/2", "2+x^2"]])
    gfun_raw = oracles.metric_fn(ctx)
    point = [0.6, -0.3]
    def gfun(xy):
        return gfun_raw(xy, {})
    fd = oracles.fd_riemann(gfun, point)
    values = {"x": 0.6, "y": -0.3}
    R = ctx.riemann
    for h in range(2):
        for l in range(2):
            for k in range(2):
                for j in range(2):
                    exact = complex(
                        scalars.evaluate(R[h][l][k][j], values)).real
                    assert abs(exact - fd[h][l][k][j]) < 2e-5 * max(
                        1, abs(exact))


def test_weyl_dimension_guards():
    flat2 = setup_metric(["x", "y"], [["1", "0"], ["0", "1"]])
    with pytest.raises(DimensionError):
        flat2.weyl
    flat3 = setup_metric(["x", "y", "z"],
                         [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        w = flat3.weyl
    assert any("three dimensions" in str(c.message) for c in caught)
    assert _all_zero(w, 4)


def test_weyl_trace_free(schwarzschild):
    W, ug = schwarzschild.weyl, schwarzschild.ug
    n = 4
    for j in range(n):
        for l in range(n):
            trace = sum(ug[i][k] * W[i][j][k][l]
                        for i in range(n) for k in range(n))
            assert is_zero(trace)


def test_weyl_of_schwarzschild_nonzero(schwarzschild):
    assert not _all_zero(schwarzschild.weyl, 4)


# ---------------------------------------------------------------------------
# frame quantities


def test_constant_frame_has_no_structure():
    ctx = setup_frame(["x", "y"], [["1", "0"], ["0", "1"]],
                      [["1", "0"], ["0", "1"]])
    assert _all_zero(ctx.frame_bracket, 3)
    assert _all_zero(ctx.rotation_coeffs, 3)
    assert _all_zero(ctx.riemann_frame, 4)


def test_rotation_coeffs_antisymmetry_polar():
    ctx = setup_frame(["r", "phi"],
                      [["cos(phi)", "-r*sin(phi)"],
                       ["sin(phi)", "r*cos(phi)"]],
                      [["1", "0"], ["0", "1"]])
    gam = ctx.rotation_coeffs
    for a in range(2):
        for b in range(2):
            for c in range(2):
                assert is_zero(gam[a][b][c] + gam[b][a][c])


def test_rotation_coeffs_antisymmetry_schwarzschild_and_count():
    ctx = setup_frame(
        ["t", "r", "theta", "phi"],
        [["sqrt((r-2*m)/r)", "0", "0", "0"],
         ["0", "sqrt(r/(r-2*m))", "0", "0"],
         ["0", "0", "r", "0"],
         ["0", "0", "0", "r*sin(theta)"]],
        [["-1", "0", "0", "0"], ["0", "1", "0", "0"],
         ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    gam = ctx.rotation_coeffs
    n = 4
    nonzero_slots = 0
    for a in range(n):
        for c in range(n):
            assert is_zero(gam[a][a][c])
        for b in range(n):
            for c in range(n):
                assert is_zero(gam[a][b][c] + gam[b][a][c])
                if a < b and not is_zero(gam[a][b][c]):
                    nonzero_slots += 1
    assert nonzero_slots <= n * n * (n - 1) // 2  # 24 in four dimensions


def test_frame_bracket_antisymmetric_last_pair():
    ctx = setup_frame(["theta", "phi"], [["a", "0"], ["0", "a*sin(theta)"]],
                      [["1", "0"], ["0", "1"]], constants=("a",))
    lam = ctx.frame_bracket
    for a in range(2):
        for b in range(2):
            for c in range(2):
                assert is_zero(lam[a][b][c] + lam[a][c][b])


def test_frame_coordinate_agreement_polar():
    coord = setup_metric(["r", "phi"], [["1", "0"], ["0", "r^2"]])
    frame = setup_frame(["r", "phi"],
                        [["cos(phi)", "-r*sin(phi)"],
                         ["sin(phi)", "r*cos(phi)"]],
                        [["1", "0"], ["0", "1"]])
    assert is_zero(coord.ricci_scalar - frame.ricci_scalar_frame)


def test_frame_coordinate_agreement_sphere():
    # curved case pins the frame-curvature conventions
    coord = setup_metric(["theta", "phi"],
                         [["a^2", "0"], ["0", "a^2*sin(theta)^2"]])
    frame = setup_frame(["theta", "phi"],
                        [["a", "0"], ["0", "a*sin(theta)"]],
                        [["1", "0"], ["0", "1"]], constants=("a",))
    assert is_zero(frame.ricci_scalar_frame - coord.ricci_scalar)
    assert is_zero(frame.ricci_scalar_frame - 2 / sym("a") ** 2)


def test_frame_coordinate_agreement_schwarzschild():
    frame = setup_frame(
        ["t", "r", "theta", "phi"],
        [["sqrt((r-2*m)/r)", "0", "0", "0"],
         ["0", "sqrt(r/(r-2*m))", "0", "0"],
         ["0", "0", "r", "0"],
         ["0", "0", "0", "r*sin(theta)"]],
        [["-1", "0", "0", "0"], ["0", "1", "0", "0"],
         ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    assert is_zero(frame.ricci_scalar)          # coordinate pipeline
    assert is_zero(frame.ricci_scalar_frame)    # frame pipeline


def test_frame_ops_require_frame(polar):
    with pytest.raises(ValueError):
        polar.rotation_coeffs


# ---------------------------------------------------------------------------
# memoization and snapshots


def test_memo_invalidated_by_torsion():
    ctx = setup_metric(["r", "phi"], [["1", "0"], ["0", "r^2"]])
    before = ctx.connection
    ctx.set_torsion([[["0", "0"], ["r", "0"]], [["-r", "0"], ["0", "0"]]])
    after = ctx.connection
    assert before != after


def test_freeze_snapshot(sphere):
    sphere.ricci_scalar
    snap = sphere.freeze()
    assert snap.ricci is not None and isinstance(snap.ricci, tuple)
    assert is_zero(snap.ricci_scalar - 2 / sym("a") ** 2)

import json
import math
import os
import subprocess

import numpy as np
import pytest

import qgh

PATH3 = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
PAIR3 = np.array([[0.0, 3.0], [3.0, 0.0]])


def test_gh_golden_pair():
    value, exact = qgh.gh_distance(PATH3, PAIR3)
    assert exact
    assert value == 1.0


def test_bracket_sits_below_gh():
    b = qgh.distq_bracket(PATH3, PAIR3)
    assert b["gh"] == 1.0
    assert b["lower"] == pytest.approx(0.5, abs=1e-9)
    assert b["lower"] <= b["upper"] <= b["gh"] + 1e-6


def test_dual_seminorm_on_the_path():
    rng = np.random.default_rng(0)
    for _ in range(20):
        lam = rng.normal(size=3)
        lam -= lam.mean()
        assert qgh.lip_dual(PATH3, lam) == pytest.approx(abs(lam[0]) + abs(lam[2]), abs=1e-9)


def test_radius_and_diameter():
    assert qgh.radius_diameter(PATH3) == pytest.approx((1.0, 2.0))


def test_fejer_first_kernel_matches_closed_form():
    delta, residual, support = qgh.fejer_delta(1, 1)
    assert delta == pytest.approx(0.25 - 1.0 / math.pi**2, abs=1e-4)
    assert support == 3
    assert residual >= 0.0


def test_window_norm_of_a_unitary():
    theta = np.array([[0.0, 0.3], [-0.3, 0.0]])
    assert qgh.window_norm(2, {(1, 0): 1j}, theta, 3) == pytest.approx(1.0)


def test_commutator_norm_is_the_lipschitz_constant():
    f = np.array([0.0, 0.5, 3.0])
    assert qgh.commutator_norm(PATH3, np.ones(3), f) == pytest.approx(2.5)


def test_errors_surface_as_value_errors():
    bad = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
    with pytest.raises(qgh.QghError):
        qgh.gh_distance(bad, PAIR3)
    with pytest.raises(ValueError):
        qgh.commutator_norm(PATH3, np.array([1.0, 0.0, 1.0]), np.zeros(3))


def test_cli_through_the_module_is_deterministic():
    a = qgh.run_cli(["appendix1"])
    b = qgh.run_cli(["appendix1"])
    assert a[0] == 0
    assert a[1] == b[1]
    assert json.loads(a[1])["passed"]


@pytest.mark.skipif("QGH_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_binary_fejer_table():
    out = subprocess.run([os.environ["QGH_CLI"], "fejer-table", "--n-max", "2"], capture_output=True, text=True)
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert lines[0].startswith("n,")
    assert len(lines) == 3

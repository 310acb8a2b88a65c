import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from icaprobe.errors import AccuracyError
from icaprobe.quadrature import (
    QuadratureRule,
    gaussian_weighted_rule,
    integrate_interval,
)


def gaussian_moment(k: int) -> float:
    """Oracle: E Z^k by the double-factorial recursion E Z^(2m) = (2m-1)!!."""
    if k % 2:
        return 0.0
    acc = 1
    for j in range(1, k, 2):
        acc *= j
    return float(acc)


def test_normalization_order_50():
    rule = gaussian_weighted_rule(50)
    assert rule.apply(lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=1e-12)


def test_unit_variance_order_50():
    rule = gaussian_weighted_rule(50)
    assert rule.apply(lambda x: x**2) == pytest.approx(1.0, abs=1e-12)


def test_fourth_moment_order_50():
    rule = gaussian_weighted_rule(50)
    assert rule.apply(lambda x: x**4) == pytest.approx(gaussian_moment(4), abs=1e-10)


@pytest.mark.parametrize("order", [8, 51, 200])
def test_monomials_exact_to_degree(order):
    # tolerance is relative to the absolute-moment scale sum w |x|^k, the
    # cancellation floor of any floating-point dot product (odd moments of
    # high degree cancel huge symmetric terms)
    rule = gaussian_weighted_rule(order)
    top = min(2 * order - 1, 30)
    for k in range(top + 1):
        val = rule.apply(lambda x, k=k: x**k)
        expected = gaussian_moment(k)
        scale = float(rule.weights @ np.abs(rule.nodes) ** k)
        assert abs(val - expected) <= 1e-9 * max(1.0, scale), f"k={k}"


def test_order_8_limit_of_exactness():
    # degree 15 is the last exact monomial at order 8; degree 16 is not
    rule = gaussian_weighted_rule(8)
    assert rule.apply(lambda x: x**15) == pytest.approx(0.0, abs=1e-9)
    exact_16 = gaussian_moment(16)
    assert abs(rule.apply(lambda x: x**16) - exact_16) > 1e-3 * exact_16


def test_order_validation():
    with pytest.raises(ValueError):
        gaussian_weighted_rule(1)
    with pytest.raises(ValueError):
        gaussian_weighted_rule(0)


def test_rule_invariants_checked():
    with pytest.raises(ValueError):
        QuadratureRule(nodes=np.array([0.0, 0.0]), weights=np.array([0.5, 0.5]), kind="plain-interval")
    with pytest.raises(ValueError):
        QuadratureRule(nodes=np.array([0.0, 1.0]), weights=np.array([0.5, -0.5]), kind="plain-interval")


def test_high_order_drops_underflowed_tail_nodes():
    rule = gaussian_weighted_rule(400)
    assert len(rule.nodes) <= 400
    assert np.all(rule.weights > 0)
    assert rule.apply(lambda x: x**2) == pytest.approx(1.0, abs=1e-12)


def test_interval_constant():
    assert integrate_interval(lambda x: np.ones_like(x), 0.0, 1.0, 1e-10) == pytest.approx(
        1.0, abs=1e-10
    )


def test_interval_linear():
    assert integrate_interval(lambda x: x, 0.0, 2.0, 1e-10) == pytest.approx(2.0, abs=1e-10)


def test_interval_gaussian_density():
    # oracle: the mass missed outside [-12, 12] is erfc(12/sqrt(2)), ~ 3.5e-33
    tail = math.erfc(12.0 / math.sqrt(2.0))
    assert tail < 1e-30
    phi = lambda x: np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    val = integrate_interval(phi, -12.0, 12.0, 1e-10)
    assert val == pytest.approx(1.0 - tail, abs=1e-10)


def test_interval_rejects_bad_arguments():
    with pytest.raises(ValueError):
        integrate_interval(lambda x: x, 1.0, 0.0, 1e-10)
    with pytest.raises(ValueError):
        integrate_interval(lambda x: x, 0.0, 1.0, -1.0)


def test_interval_accuracy_failure_carries_best_estimate():
    # oscillation far too fast for the point budget never stabilizes
    wild = lambda x: np.cos(1e6 * x)
    with pytest.raises(AccuracyError) as exc:
        integrate_interval(wild, 0.0, 1.0, 1e-14, max_points=1 << 10)
    assert exc.value.best_estimate is not None
    assert exc.value.error_bound > 1e-14


@given(
    a=st.floats(-3, 3, allow_nan=False),
    b=st.floats(-3, 3, allow_nan=False),
)
def test_interval_linearity(a, b):
    f = lambda x: np.sin(x)
    g = lambda x: x * x
    combined = integrate_interval(lambda x: a * f(x) + b * g(x), 0.0, 2.0, 1e-11)
    parts = a * integrate_interval(f, 0.0, 2.0, 1e-11) + b * integrate_interval(
        g, 0.0, 2.0, 1e-11
    )
    assert combined == pytest.approx(parts, abs=5e-10 * (1 + abs(a) + abs(b)))


def test_refinement_never_worse_on_known_integral():
    # exp integrates to e - 1 on [0, 1]; tighter tolerance must not be worse
    exact = math.e - 1.0
    loose = integrate_interval(lambda x: np.exp(x), 0.0, 1.0, 1e-6)
    tight = integrate_interval(lambda x: np.exp(x), 0.0, 1.0, 1e-12)
    assert abs(tight - exact) <= abs(loose - exact) + 1e-15


def test_refining_order_never_worse():
    # against the analytic moment E Z^8 = 105, order 10 >= order 5 accuracy
    exact = gaussian_moment(8)
    coarse = abs(gaussian_weighted_rule(5).apply(lambda x: x**8) - exact)
    fine = abs(gaussian_weighted_rule(10).apply(lambda x: x**8) - exact)
    assert fine <= coarse + 1e-12


def test_gaussian_rule_agrees_with_interval_rule():
    rule = gaussian_weighted_rule(200)
    phi = lambda x: np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    f = lambda x: np.log(np.cosh(x))
    by_interval = integrate_interval(lambda x: phi(x) * f(x), -12.0, 12.0, 1e-12)
    assert rule.apply(f) == pytest.approx(by_interval, abs=1e-10)

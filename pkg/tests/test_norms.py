import math

import numpy as np
import pytest

from fockops.functions import ExpPolyFunction, TaylorFunction, evaluate, kernel, normalized_kernel
from fockops.norms import (GAMMA_NOTE, FockTypeParams, QuadratureConfig, diverges, fock_norm, hu_norm,
                           inner_product, log_monomial_norm, monomial_norm_exact, paley_norm, pointwise_bound_check)

INF = math.inf

# reference values from the brute-force oracle (adaptive Simpson x 4096-point trapezoid)
ORACLE = [
    ("z^3 classical p=2", ExpPolyFunction([0, 0, 0, 1]), FockTypeParams.classical(2), 2.449489742783239),
    ("1+z classical p=1", ExpPolyFunction([1, 1]), FockTypeParams.classical(1), 1.5485724605299813),
    ("exp(z/2) m=1 p=2", ExpPolyFunction([1], (0, 0.5, 0)), FockTypeParams(1, 2), 1.5551203015562565),
    ("z^2 m=0.5 p=3", ExpPolyFunction([0, 0, 1]), FockTypeParams(0.5, 3), 72.54204591210247),
    ("z^10 m=1 p=1", ExpPolyFunction([0] * 10 + [1]), FockTypeParams(1, 1), 250804651.26964208),
]


def z(k):
    return ExpPolyFunction([0] * k + [1])


@pytest.mark.parametrize("p", [1, 2, 3, 4, INF])
def test_constant_one_has_norm_one(p):
    assert fock_norm(ExpPolyFunction([1]), FockTypeParams.classical(p)).value == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("p", [1, 2, 4])
def test_normalized_kernel(p):
    assert fock_norm(normalized_kernel(2 + 1j), FockTypeParams.classical(p)).value == pytest.approx(1, abs=1e-7)


def test_z_classical_p2():
    assert fock_norm(z(1), FockTypeParams.classical(2)).value == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("name,f,params,ref", ORACLE, ids=[o[0] for o in ORACLE])
def test_against_frozen_oracle(name, f, params, ref):
    res = fock_norm(f, params)
    assert abs(res.value - ref) <= max(1e-8 * ref, res.error_estimate + res.tail_bound)


def test_result_carries_tail_and_family():
    res = fock_norm(z(2), FockTypeParams(1.5, 2))
    d = res.to_dict()
    assert d["family"] == "focktype" and d["tail_bound"] >= 0 and not d["divergent"]


def test_divergence_flag():
    f = ExpPolyFunction([1], (0, 0, 0.5))  # |f| exp(-|z|^2/2) = exp(-y^2)
    assert fock_norm(f, FockTypeParams.classical(2)).divergent
    assert fock_norm(f, FockTypeParams.classical(INF)).value == pytest.approx(1, abs=1e-9)
    assert fock_norm(ExpPolyFunction([1], (0, 0, 0.6)), FockTypeParams.classical(INF)).divergent
    assert diverges(ExpPolyFunction([1], (0, 0, 0.1)), FockTypeParams(1.9, 2))
    assert not diverges(ExpPolyFunction([1], (0, 3, 0)), FockTypeParams(1.1, 2))
    assert diverges(ExpPolyFunction([1], (0, 1.5, 0)), FockTypeParams(1, 1))
    assert not diverges(TaylorFunction([1, 2, 3]), FockTypeParams(0.3, 1))


def test_sup_norm_focktype():
    # sup |e^z| e^{-|z|} = 1, approached along the positive axis
    assert fock_norm(kernel(1), FockTypeParams(1, INF)).value == pytest.approx(1, abs=1e-9)
    # sup r^k e^{-r^m} = (k/(m e))^(k/m)
    k, m = 4, 1.5
    ref = (k / (m * math.e)) ** (k / m)
    assert fock_norm(z(k), FockTypeParams(m, INF)).value == pytest.approx(ref, rel=1e-9)


def test_monomial_norm_exact_examples():
    for p in (1, 2, 3, INF):
        assert monomial_norm_exact(0, p).value == 1.0
    assert monomial_norm_exact(3, 2).value == pytest.approx(math.sqrt(6), rel=1e-14)
    assert "2^(kp/2)" in GAMMA_NOTE


def test_focktype_asymptotic_is_k_stable():
    r = [math.exp(monomial_norm_exact(k, 2, "focktype", 1).log_value - fock_norm(z(k), FockTypeParams(1, 2)).log_value)
         for k in (25, 50, 100)]
    assert monomial_norm_exact(50, 2, "focktype", 1).asymptotic
    assert max(r) / min(r) < 1.10


def test_monomial_closed_form_vs_quadrature():
    for p in (1, 2):
        params = FockTypeParams.classical(p)
        for k in range(0, 101):
            lq = fock_norm(z(k), params).log_value
            assert abs(lq - log_monomial_norm(k, params)) < 1e-9 * max(1.0, abs(lq))


@pytest.mark.parametrize("m", [0.5, 4 / 3, 3.0])
def test_focktype_monomial_gamma(m):
    params = FockTypeParams(m, 2)
    for k in (0, 3, 17):
        assert fock_norm(z(k), params).log_value == pytest.approx(log_monomial_norm(k, params), rel=1e-10, abs=1e-10)


def test_paley_examples():
    assert paley_norm(ExpPolyFunction([2 - 1j]), 1, 2).value == pytest.approx(abs(2 - 1j))
    ratios = [paley_norm(z(k), 1, 2).value / fock_norm(z(k), FockTypeParams(1, 2)).value for k in range(1, 61)]
    # measured bracket: [0.8165, 0.9959]
    assert 0.80 < min(ratios) and max(ratios) < 1.0
    f = ExpPolyFunction([1], (0, 0.5, 0))
    r = paley_norm(f, 1, 2).value / fock_norm(f, FockTypeParams(1, 2)).value
    assert 0.80 < r < 1.0


def test_hu_examples():
    p = 2
    for f in (ExpPolyFunction([1]), z(1), z(2), kernel(1)):
        r = hu_norm(f, p, 0).value / fock_norm(f, FockTypeParams.classical(p)).value
        assert r == pytest.approx((2 * math.pi / p) ** (1 / p), rel=1e-9)
    ratios = [hu_norm(z(k), 2, 1).value / fock_norm(z(k), FockTypeParams.classical(2)).value for k in range(0, 61)]
    # measured bracket: [1, 1.5805]
    assert 0.99 < min(ratios) and max(ratios) < 1.6


def test_hu_sup_kernels_bounded():
    vals = [hu_norm(normalized_kernel(w), INF, 2).value for w in (0, 1, 2 + 1j, 3j, 3)]
    assert all(0.5 < v < 2.0 for v in vals)


def test_pointwise_bounds():
    rep = pointwise_bound_check(normalized_kernel(1 + 1j), 2, n=1, norm=1.0)
    # equality at z = w, seen on the grid up to its spacing
    assert rep.holds and rep.max_ratio_value == pytest.approx(1, abs=1e-3)
    assert abs(rep.argmax_value - (1 + 1j)) < 0.05
    rep = pointwise_bound_check(z(3), 2, n=2)
    assert rep.holds and rep.slack > 0
    rep = pointwise_bound_check(ExpPolyFunction([1]), 2, n=0)
    assert rep.holds


def test_reproducing_identity():
    rng = np.random.default_rng(11)
    for deg in (0, 3, 10):
        f = ExpPolyFunction(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        for w in (0, 1, 2 + 1j, 3j):
            assert abs(inner_product(f, kernel(w)) - evaluate(f, w)) <= 1e-8 * max(1.0, abs(evaluate(f, w)))


def test_config_is_respected():
    cfg = QuadratureConfig(radial_nodes=10, angular_nodes=64, max_angular_nodes=128)
    res = fock_norm(normalized_kernel(1), FockTypeParams.classical(1), cfg)
    assert res.value == pytest.approx(1, abs=1e-6)

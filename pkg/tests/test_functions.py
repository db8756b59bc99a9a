import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockops.functions import (AffineSymbol, ExpPolyFunction, PreimageError, TaylorFunction, TruncationOverflow,
                               antiderivative, compose_affine, differentiate, evaluate, function_from_dict, kernel,
                               log_modulus, max_modulus, multiply, order_of_growth, solve_preimage, to_taylor)
from fockops.symbols import OperatorSpec

RNG = np.random.default_rng(7)
cplx = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def test_evaluate_kernel_and_monomial():
    assert evaluate(kernel(1), 1) == pytest.approx(math.e, rel=1e-15)
    assert evaluate(ExpPolyFunction([0, 0, 1]), 1j) == pytest.approx(-1)
    assert evaluate(ExpPolyFunction([1], (0, 0, 0.25)), 2) == pytest.approx(math.e, rel=1e-15)


def test_evaluate_overflow_keeps_log_modulus():
    f = ExpPolyFunction([1], (0, 0, 1))
    z = 40.0
    assert abs(evaluate(f, z)) == math.inf
    assert log_modulus(f, z) == pytest.approx(1600.0)


def test_log_modulus_of_high_degree_polynomial():
    f = ExpPolyFunction([1, 0, 0, 1] + [0] * 196 + [1])
    assert log_modulus(f, 50.0) == pytest.approx(200 * math.log(50), rel=1e-14)


def test_differentiate_examples():
    w = 2.0
    d = differentiate(kernel(w), 1)
    assert np.allclose(d.poly, [2.0]) and d.expo == kernel(w).expo
    assert np.allclose(differentiate(ExpPolyFunction([0, 0, 0, 1]), 2).poly, [0, 6])
    assert differentiate(ExpPolyFunction([1, 2]), 0) == ExpPolyFunction([1, 2])


def test_differentiate_matches_finite_differences():
    f = ExpPolyFunction([0, 1], (0, 0, 1))
    d = differentiate(f, 1)
    z = RNG.normal(size=10) + 1j * RNG.normal(size=10)
    h = 1e-6
    fd = (evaluate(f, z + h) - evaluate(f, z - h)) / (2 * h)
    assert np.allclose(evaluate(d, z), fd, rtol=1e-8)
    assert np.allclose(evaluate(d, z), (1 + 2 * z**2) * np.exp(z**2), rtol=1e-12)


def test_compose_affine_examples():
    g = compose_affine(ExpPolyFunction([0, 0, 1]), AffineSymbol(1, 1))
    assert np.allclose(g.poly, [1, 2, 1])
    assert compose_affine(ExpPolyFunction([3.5]), AffineSymbol(0.3, 2)) == ExpPolyFunction([3.5])
    w, a, b = 1 + 2j, 0.5 - 0.2j, 0.3 + 1j
    k = compose_affine(kernel(w), AffineSymbol(a, b))
    z = RNG.normal(size=(5, 5)) + 1j * RNG.normal(size=(5, 5))
    ref = np.exp(np.conj(w) * b) * evaluate(kernel(np.conj(a) * w), z)
    assert np.allclose(evaluate(k, z), ref, rtol=1e-13)


@given(cplx, cplx, st.lists(cplx, min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_compose_then_inverse_is_identity(a, b, coeffs):
    if abs(a) < 0.2:
        a = 0.2 + 0j
    psi = AffineSymbol(a, b)
    f = ExpPolyFunction(coeffs, (0.1, 0.2j, 0.05))
    g = compose_affine(compose_affine(f, psi), psi.inverse())
    z = np.linspace(-5, 5, 11)[:, None] + 1j * np.linspace(-5, 5, 11)[None, :]
    z = z[np.abs(z) <= 5]
    fv, gv = evaluate(f, z), evaluate(g, z)
    assert np.allclose(gv, fv, rtol=1e-10, atol=1e-10 * np.max(np.abs(fv)))


def test_multiply_examples():
    f = ExpPolyFunction([1, 2, 3], (0.1, 0.2, 0))
    assert multiply(ExpPolyFunction([1]), f) == f
    assert multiply(kernel(1 + 1j), kernel(-1 - 1j)) == ExpPolyFunction([1])
    z = RNG.normal(size=20) + 1j * RNG.normal(size=20)
    prod = multiply(ExpPolyFunction([0, 1]), ExpPolyFunction([1], (0, 1, 0)))
    assert np.allclose(evaluate(prod, z), z * np.exp(z), rtol=1e-12)


def test_multiply_taylor_cap():
    a = TaylorFunction(np.ones(200))
    with pytest.raises(TruncationOverflow):
        multiply(a, a)


def test_antiderivative_examples():
    assert np.allclose(antiderivative(TaylorFunction([1])).coeffs, [0, 1])
    k = 7
    c = np.zeros(k + 1)
    c[k] = 1
    out = antiderivative(TaylorFunction(c)).coeffs
    assert out[k + 1] == pytest.approx(1 / (k + 1)) and np.count_nonzero(out) == 1


def test_antiderivative_round_trip_exact():
    c = RNG.normal(size=21) + 1j * RNG.normal(size=21)
    f = TaylorFunction(c)
    back = differentiate(antiderivative(f), 1)
    # c / (k+1) * (k+1) is c up to one rounding of each part
    for x, y in ((back.coeffs.real, c.real), (back.coeffs.imag, c.imag)):
        assert np.all(np.abs(x - y) <= np.spacing(np.abs(y)))


@given(st.lists(cplx, min_size=1, max_size=20))
@settings(max_examples=40, deadline=None)
def test_differentiate_inverts_antiderivative_with_zero_constant(coeffs):
    f = TaylorFunction([0] + coeffs)
    g = antiderivative(differentiate(f, 1))
    assert np.allclose(g.coeffs[: len(f.coeffs)], f.coeffs, rtol=1e-14, atol=1e-14)


def test_to_taylor_truncation_bound():
    f = ExpPolyFunction([1, 1], (0, 0.5, 0.1))
    t = to_taylor(f, 60)
    z = 3 * np.exp(1j * np.linspace(0, 2 * np.pi, 50))
    err = np.max(np.abs(evaluate(t, z) - evaluate(f, z)))
    assert err <= max(t.tail_estimate(3.0), 1e-12)


def test_max_modulus_examples():
    assert max_modulus(ExpPolyFunction([0, 0, 0, 0, 1]), 2.5).value == pytest.approx(2.5**4, rel=1e-12)
    assert max_modulus(kernel(1), 3.0).value == pytest.approx(math.exp(3), rel=1e-12)
    mm = max_modulus(ExpPolyFunction([1], (0, 0, 1)), 4.0)
    assert mm.log_value == pytest.approx(16.0, rel=1e-9)


def test_order_of_growth():
    e1 = order_of_growth(kernel(1))
    assert abs(e1.estimate - 1) < 0.05 and e1.symbolic == 1
    e2 = order_of_growth(ExpPolyFunction([1], (0, 0, 1)))
    assert abs(e2.estimate - 2) < 0.05 and e2.symbolic == 2
    poly = order_of_growth(ExpPolyFunction([1, 2, 3]))
    assert poly.degenerate and poly.estimate == 0.0


def test_order_of_weight_is_at_most_two():
    spec = OperatorSpec.make(a=0.5, b=1, n=2, poly=(1, 1), expo=(0, 0.3, 0.2))
    assert order_of_growth(spec.weight()).estimate <= 2.05


def test_order_estimate_matches_symbolic():
    for f in (ExpPolyFunction([1, 1], (0, 0.4, 0)), ExpPolyFunction([2], (0, 1, 0.3j))):
        g = order_of_growth(f)
        assert abs(g.estimate - g.symbolic) < 0.1


def test_solve_preimage_examples():
    pre = solve_preimage(ExpPolyFunction([1]), OperatorSpec.make(a=1, n=1), 10)
    assert np.allclose(pre.function.coeffs[:3], [0, 1, 0]) and pre.residual == 0
    pre = solve_preimage(kernel(1), OperatorSpec.make(a=0.5), 40)
    z = np.linspace(-2, 2, 9)
    assert np.allclose(evaluate(pre.function, z), np.exp(2 * z), rtol=1e-12)
    spec = OperatorSpec.make(a=1, b=1, expo=(0, -1, 0))
    h = ExpPolyFunction([1], (-0.5, 1, 0))
    assert solve_preimage(h, spec, 60, radius=3.0).residual < 1e-6


def test_solve_preimage_refusals():
    with pytest.raises(PreimageError) as e:
        solve_preimage(ExpPolyFunction([1]), OperatorSpec.make(a=1, poly=(-1, 1)), 10)
    assert e.value.location == pytest.approx(1)
    with pytest.raises(PreimageError):
        solve_preimage(ExpPolyFunction([1]), OperatorSpec(ExpPolyFunction([1]), AffineSymbol(0, 1, True), 0), 10)


def test_json_round_trip():
    f = ExpPolyFunction([1, 2j], (0.5, -1j, 0.25))
    t = TaylorFunction([1, 0.5, 1j])
    for g in (f, t):
        assert function_from_dict(json.loads(json.dumps(g.to_dict()))) == g
    psi = AffineSymbol(0.5 + 1j, -2)
    assert AffineSymbol.from_dict(json.loads(json.dumps(psi.to_dict()))) == psi

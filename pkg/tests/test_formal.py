import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from lfcalc.formal import (
    DivergentIntegralError,
    FormalExpr,
    NotTransformableError,
    OutsideSupportError,
    RationalSpectrum,
    Support,
    SupportMismatchError,
    add,
    convolve_formal,
    definite_integral,
    expr_discrepancy,
    inverse_closed_form,
    lf_antiderivative,
    lf_derivative,
    mul_exponential,
    random_expression,
    spectrum_discrepancy,
    spectrum_product,
    transform_closed_form,
    verify_formal_identity,
)
from lfcalc.special import AlphaContext


def E(alpha, lam, c=1.0, k=0, anchor=0.0):
    return FormalExpr.exponential(alpha, lam, c, k, anchor)


def X(alpha, k=1, c=1.0):
    return FormalExpr.monomial(alpha, k, c)


def terms(e):
    return [(t.coeff, t.k, t.lam) for t in e.terms]


# -- algebra


def test_add_examples():
    a = 0.6
    assert terms(X(a) + X(a)) == [(2, 1, 0)]
    assert terms(E(a, -1) + FormalExpr.zero(a)) == [(1, 0, -1)]
    assert terms((X(a) + E(a, 2)) + X(a, c=-1)) == [(1, 0, 2)]
    e = X(a, 3) + E(a, -1 + 1j, 2.5, 2)
    assert add(e, -e).is_zero()


def test_add_rejects_mismatch():
    with pytest.raises(SupportMismatchError):
        E(0.5, -1) + E(0.5, -1, anchor=1.0)
    with pytest.raises(SupportMismatchError):
        E(0.5, -1) + E(0.6, -1)


def test_canonical_form_merges_and_sorts():
    e = FormalExpr.build([(1, 2, -1), (2, 0, 0), (3, 2, -1), (-2, 0, 0)], 0.5)
    assert terms(e) == [(4, 2, -1)]
    again = FormalExpr.build(e.terms, 0.5)
    assert again == e


def test_mul_exponential_examples():
    a = 0.7
    assert terms(mul_exponential(E(a, -1), -1)) == [(1, 0, -2)]
    assert terms(mul_exponential(X(a), 3)) == [(1, 1, 3)]
    e = mul_exponential(E(1.0, -1), -2)
    x = np.linspace(0, 5, 21)
    assert np.max(np.abs(e(x) - np.exp(-x) * np.exp(-2 * x))) < 1e-15


def test_derivative_examples():
    a = 0.45
    assert lf_derivative(FormalExpr.build([(1, 0, 0)], a)).is_zero()
    lam = -1.3 + 0.4j
    assert terms(lf_derivative(E(a, lam))) == [(lam, 0, lam)]
    d = lf_derivative(E(1.0, -1, k=2))
    assert terms(d) == [(2, 1, -1), (-1, 2, -1)]


def test_antiderivative_examples():
    a = 0.3
    g = lf_antiderivative(FormalExpr.build([(1, 0, 0)], a))
    assert len(g) == 1 and g.terms[0].k == 1 and g.terms[0].lam == 0
    assert abs(g.terms[0].coeff - 1 / math.gamma(1 + a)) < 1e-15
    assert terms(lf_antiderivative(E(a, -1))) == [(-1, 0, -1)]
    g = lf_antiderivative(E(1.0, -1, k=1))
    # -(x + 1) e^{-x}
    assert expr_discrepancy(g, FormalExpr.build([(-1, 0, -1), (-1, 1, -1)], 1.0)) < 1e-15


def test_definite_integral_examples():
    v = definite_integral(X(0.5), 0.0, 1.0)
    assert abs(v - math.gamma(1.5) / math.gamma(2)) < 1e-15
    assert definite_integral(FormalExpr.build([(1, 0, 0)], 0.5), 0.3, 0.3) == 0
    assert abs(definite_integral(E(1.0, -1), 0.0, math.inf) - 1) < 1e-15


def test_definite_integral_orientation():
    e = E(0.6, -1, 2.0, 1) + X(0.6, 2)
    assert definite_integral(e, 0.5, 0.5) == 0
    assert abs(definite_integral(e, 0.2, 1.7) + definite_integral(e, 1.7, 0.2)) < 1e-14


def test_definite_integral_errors():
    with pytest.raises(OutsideSupportError):
        definite_integral(E(0.5, -1, anchor=1.0), 0.0, 2.0)
    with pytest.raises(DivergentIntegralError):
        definite_integral(E(0.5, 1.0), 0.0, math.inf)
    with pytest.raises(DivergentIntegralError):
        definite_integral(X(0.5, 1), 0.0, math.inf)


def test_classical_reduction_pointwise():
    # alpha = 1 formal results against scipy quadrature
    e = FormalExpr.build([(1.5, 2, -0.7), (-0.3, 0, -2), (0.25, 1, 0)], 1.0)
    f = lambda x: 1.5 * x**2 * np.exp(-0.7 * x) - 0.3 * np.exp(-2 * x) + 0.25 * x  # noqa: E731
    for a, b in [(0, 1), (0.5, 3), (2, 7)]:
        ref = integrate.quad(f, a, b)[0]
        assert abs(definite_integral(e, a, b) - ref) / abs(ref) < 1e-10
    d = lf_derivative(e)
    x = np.linspace(0.1, 4, 17)
    fd = 3 * x * np.exp(-0.7 * x) - 0.7 * 1.5 * x**2 * np.exp(-0.7 * x) + 0.6 * np.exp(-2 * x) + 0.25
    assert np.max(np.abs(d(x) - fd)) < 1e-12


def test_evaluation_on_interval_support():
    e = FormalExpr.build([(1, 1, 0)], 0.5, 0.0, Support.interval(-1, 1))
    assert abs(e(-0.25) + 0.5) < 1e-15
    with pytest.raises(OutsideSupportError):
        e(1.5)


# -- transforms


def test_transform_examples():
    ctx = AlphaContext(0.6)
    S = transform_closed_form(E(0.6, -1), ctx)
    assert [(t.coeff, t.pole, t.power) for t in S.terms] == [(1, 1, 1)]
    S2 = transform_closed_form(E(0.6, -1, k=1), ctx)
    assert abs(S2.terms[0].coeff - math.gamma(1.6)) < 1e-15 and S2.terms[0].power == 2
    lam = 2.5
    assert abs(transform_closed_form(E(0.6, -lam), ctx)(ctx, 0.0) - 1 / lam) < 1e-15


def test_transform_classical_pairs():
    ctx = AlphaContext(1.0)
    w = np.linspace(-3, 3, 13)
    S = transform_closed_form(E(1.0, -1), ctx)
    assert np.max(np.abs(S(ctx, w) - 1 / (1 + 2j * np.pi * w))) < 1e-15
    S = transform_closed_form(E(1.0, -1, k=1), ctx)
    assert np.max(np.abs(S(ctx, w) - 1 / (1 + 2j * np.pi * w) ** 2)) < 1e-15
    assert abs(abs(transform_closed_form(E(1.0, -1), ctx)(ctx, 1.0)) - 0.15718) < 1e-5


def test_transform_errors():
    ctx = AlphaContext(0.5)
    with pytest.raises(NotTransformableError):
        transform_closed_form(E(0.5, 0.5), ctx)
    with pytest.raises(NotTransformableError):
        transform_closed_form(X(0.5), ctx)
    with pytest.raises(NotTransformableError):
        transform_closed_form(E(0.5, -1, anchor=1.0), ctx)


def test_spectrum_product_matches_direct_evaluation():
    rng = np.random.default_rng(3)
    S1 = RationalSpectrum.build([(1, 1, 1), (0.5j, 2 + 1j, 3)], 0.7)
    S2 = RationalSpectrum.build([(2, 3, 2), (-1, 1, 1)], 0.7)
    P = spectrum_product(S1, S2)
    s = rng.normal(size=20) + 1j * rng.normal(size=20)
    assert np.max(np.abs(P.evaluate_s(s) - S1.evaluate_s(s) * S2.evaluate_s(s))) < 1e-12


def test_convolve_examples():
    a = 0.55
    h = convolve_formal(E(a, -1), E(a, -2))
    assert expr_discrepancy(h, E(a, -1) - E(a, -2)) < 1e-15
    assert convolve_formal(E(a, -1), FormalExpr.zero(a)).is_zero()
    f1 = E(a, -1, 2.0) + E(a, -3 + 1j)
    f2 = E(a, -2, -1.0) + E(a, -1)
    assert convolve_formal(f1, f2) == convolve_formal(f2, f1)
    with pytest.raises(NotTransformableError):
        convolve_formal(E(a, -1, k=1), E(a, -2))


def test_convolve_classical_oracle():
    h = convolve_formal(E(1.0, -1), E(1.0, -2))
    for x in (0.3, 1.0, 4.0):
        ref = integrate.quad(lambda t: np.exp(-t) * np.exp(-2 * (x - t)), 0, x)[0]
        assert abs(h(x) - ref) < 1e-12
    h = convolve_formal(E(1.0, -1), E(1.0, -1))
    assert abs(h(2.0) - 2 * math.exp(-2)) < 1e-15


# -- identity suite


@pytest.mark.parametrize("alpha", [0.35, 0.8, 1.0])
def test_identities_hold_exactly(alpha):
    ctx = AlphaContext(alpha)
    e = E(alpha, -1) + E(alpha, -1.5 + 1j, 0.5, 2)
    f1, f2 = E(alpha, -1), E(alpha, -2)
    cases = [
        ("linearity", [e, f2], {"a": 1.0, "b": 0.0}),
        ("linearity", [e, f2], {"a": 2 - 1j, "b": 0.3}),
        ("inverse-linearity", [e, f2], {}),
        ("scaling", [e], {"scale": 3.0}),
        ("shift", [f1 + E(alpha, -3, 2.0)], {"c": 0.7}),
        ("modulation", [e], {"c": 1.2}),
        ("derivative", [e], {}),
        ("convolution", [f1, f2], {}),
        ("commutativity", [f1, f2], {}),
        ("distributivity", [f1, f2, E(alpha, -4)], {}),
        ("uniqueness", [e], {}),
        ("round-trip", [e], {}),
    ]
    for tag, inputs, params in cases:
        r = verify_formal_identity(tag, inputs, ctx, **params)
        assert r.passed, (tag, r.max_abs_discrepancy)
        assert r.max_abs_discrepancy <= 1e-12 * max(1.0, r.lhs_norm, r.rhs_norm)


def test_variant_reporting_at_classical_point():
    ctx = AlphaContext(1.0)
    r = verify_formal_identity("derivative", [E(1.0, -1)], ctx)
    assert r.variant.startswith("plus")
    assert r.variants["minus (printed)"] > 1e-3
    r = verify_formal_identity("shift", [E(1.0, -1)], ctx, c=0.5)
    assert r.variant.startswith("minus-h0")
    assert r.variants["plus-no-h0 (printed)"] > 1e-3
    r = verify_formal_identity("modulation", [E(1.0, -1)], ctx, c=0.5)
    assert r.variants["minus-no-h0 (printed)"] > 1e-3


def test_convolution_theorem_example():
    ctx = AlphaContext(0.5)
    lhs = transform_closed_form(convolve_formal(E(0.5, -1), E(0.5, -2)), ctx)
    expect = RationalSpectrum.build([(1, 1, 1), (-1, 2, 1)], 0.5)
    assert spectrum_discrepancy(lhs, expect) < 1e-15


def test_parseval_not_formal():
    with pytest.raises(ValueError):
        verify_formal_identity("parseval", [E(0.5, -1)], AlphaContext(0.5))
    with pytest.raises(ValueError):
        verify_formal_identity("nonsense", [E(0.5, -1)], AlphaContext(0.5))


# -- properties

alphas = st.sampled_from([0.25, 0.5, 0.7, 1.0])


@settings(max_examples=100, deadline=None)
@given(alphas, st.integers(0, 2**32 - 1))
def test_round_trip_property(alpha, seed):
    e = random_expression(np.random.default_rng(seed), alpha, 6, 8)
    back = lf_derivative(lf_antiderivative(e))
    assert expr_discrepancy(back, e) <= 1e-12 * max(1.0, e.coefficient_scale())


@settings(max_examples=60, deadline=None)
@given(alphas, st.integers(0, 2**32 - 1))
def test_transform_linear_and_injective(alpha, seed):
    rng = np.random.default_rng(seed)
    ctx = AlphaContext(alpha)
    e1 = random_expression(rng, alpha, 4, 5, decaying=True)
    e2 = random_expression(rng, alpha, 4, 5, decaying=True)
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    lhs = transform_closed_form(e1.scale(a) + e2.scale(b), ctx)
    rhs = transform_closed_form(e1, ctx).scale(a) + transform_closed_form(e2, ctx).scale(b)
    scale = max(1.0, lhs.coefficient_scale(), rhs.coefficient_scale())
    assert spectrum_discrepancy(lhs, rhs) <= 1e-12 * scale
    back = inverse_closed_form(transform_closed_form(e1, ctx))
    assert expr_discrepancy(back, e1) <= 1e-12 * max(1.0, e1.coefficient_scale())


@settings(max_examples=60, deadline=None)
@given(alphas, st.integers(0, 2**32 - 1))
def test_canonicalization_idempotent(alpha, seed):
    e = random_expression(np.random.default_rng(seed), alpha, 6, 8)
    assert FormalExpr.build(e.terms, alpha) == e
    keys = [(t.k, t.lam) for t in e.terms]
    assert len(keys) == len(set(keys))
    assert all(t.coeff != 0 for t in e.terms)

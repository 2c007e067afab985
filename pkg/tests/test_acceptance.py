"""Acceptance criteria 1 to 9, one test each.

Every test prints a single ``PASS``/``FAIL`` line with its measured numbers,
bypassing output capture so the lines appear in a plain ``pytest -v`` log.
The file can also be run directly: ``python tests/test_acceptance.py``.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy.special import erfc

from lfcalc import (
    AlphaContext,
    FormalExpr,
    Grid,
    IdentityTag,
    SampledSignal,
    build_measure_matched_rule,
    exponential_law_gap,
    convolve_numeric,
    forward,
    ml_eval,
    moment_closed_form,
    random_expression,
    riemann_integral,
    series_coefficients,
    series_partial_sum,
    verify_formal_identity,
    verify_numeric,
)
from lfcalc.cli import main


@pytest.fixture
def say(capsys):
    def emit(n, ok, msg):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {msg}")
    return emit


def test_criterion_1_mittag_leffler(say):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    r = 20 * np.sqrt(rng.uniform(0, 1, 100))
    z = r * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    e1 = np.max(np.abs(ml_eval(1.0, z) - np.exp(z)) / np.abs(np.exp(z)))
    x = np.linspace(-3, 3, 121)
    ref = np.exp(x**2) * erfc(-x)
    e2 = np.max(np.abs(ml_eval(0.5, x) - ref) / np.abs(ref))
    dt = time.perf_counter() - t0
    ok = e1 <= 1e-12 and e2 <= 1e-10 and dt < 1.0
    say(1, ok, f"E_1 rel err {e1:.2e} (<=1e-12), E_1/2 rel err {e2:.2e} (<=1e-10), {dt:.3f} s (<1 s)")
    assert ok


def test_criterion_2_quadrature_moments(say):
    t0 = time.perf_counter()
    worst = 0.0
    for alpha in (0.3, 0.5, 0.9):
        ctx = AlphaContext(alpha)
        for a, b in ((0.0, 1.0), (1.0, 3.5)):
            rule = build_measure_matched_rule(ctx, a, b, 32)
            for k in range(21):
                approx = rule.integrate(lambda x: (x - a) ** (k * alpha))
                exact = moment_closed_form(alpha, k, b - a)
                worst = max(worst, abs(approx - exact) / exact)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt < 1.0
    say(2, ok, f"worst moment rel err {worst:.2e} (<=1e-10), {dt:.3f} s (<1 s)")
    assert ok


def test_criterion_3_riemann_divergence(say):
    rows = []
    ok = True
    for alpha in (0.3, 0.5, 0.9, 1.0):
        ctx = AlphaContext(alpha)
        for n in (10, 100, 1000):
            got = riemann_integral(lambda x: np.ones_like(x), 0.0, 1.0, n, ctx).real
            exact = n ** (1 - alpha) / math.gamma(1 + alpha)
            err = abs(got - exact) / exact
            ok &= err <= 1e-13
            rows.append(err)
    ctx = AlphaContext(0.5)
    growth = [riemann_integral(lambda x: np.ones_like(x), 0, 1, n, ctx).real for n in (10, 100, 1000)]
    ok &= growth[0] < growth[1] < growth[2]
    say(3, ok, f"max rel err vs N^(1-a)/Gamma(1+a) {max(rows):.1e}, "
               f"alpha=0.5 sums {growth[0]:.3f}, {growth[1]:.3f}, {growth[2]:.3f} (diverging)")
    assert ok


def test_criterion_4_fundamental_theorem(say):
    worst = 0.0
    fails = 0
    for alpha, seed in ((0.5, 11), (1.0, 12), (0.3, 13)):
        ctx = AlphaContext(alpha)
        rng = np.random.default_rng(seed)
        count = 1000 if alpha == 0.5 else 200
        for _ in range(count):
            e = random_expression(rng, alpha, 6, 8)
            r = verify_formal_identity(IdentityTag.ROUND_TRIP, [e], ctx)
            worst = max(worst, r.max_abs_discrepancy / max(r.tolerance, 1e-300) * 1e-12)
            fails += not r.passed
    ok = fails == 0
    say(4, ok, f"1000 seeded expressions at alpha=0.5 (+200 at 1.0 and 0.3), "
               f"{fails} failures, worst rel discrepancy {worst:.1e} (<=1e-12)")
    assert ok


def test_criterion_5_formal_theorems(say):
    lines = []
    ok = True
    printed_fail = {}
    for alpha in (0.5, 1.0):
        ctx = AlphaContext(alpha)
        rng = np.random.default_rng(5)
        for _ in range(20):
            d = lambda: random_expression(rng, alpha, 4, 5, decaying=True)  # noqa: E731
            m = lambda: random_expression(rng, alpha, 0, 3, decaying=True, monomials=False)  # noqa: E731
            cases = [
                (IdentityTag.LINEARITY, [d(), d()], {"a": 1.5 - 0.5j, "b": -0.7}),
                (IdentityTag.INVERSE_LINEARITY, [d(), d()], {"a": 0.3, "b": 2.0}),
                (IdentityTag.SCALING, [d()], {"scale": float(rng.uniform(0.25, 4))}),
                (IdentityTag.SHIFT, [m()], {"c": float(rng.uniform(0.1, 2))}),
                (IdentityTag.MODULATION, [d()], {"c": float(rng.uniform(0.1, 2))}),
                (IdentityTag.DERIVATIVE, [d()], {}),
                (IdentityTag.CONVOLUTION, [m(), m()], {}),
            ]
            for tag, inputs, params in cases:
                r = verify_formal_identity(tag, inputs, ctx, **params)
                ok &= r.passed
                if alpha == 1.0 and r.variants:
                    for name, v in r.variants.items():
                        if "printed" in name:
                            failed = v > 1e-12 * max(1.0, r.lhs_norm)
                            printed_fail[(tag.value, name)] = printed_fail.get((tag.value, name), True) and failed
                if tag in (IdentityTag.SHIFT, IdentityTag.DERIVATIVE, IdentityTag.MODULATION):
                    lines.append((tag.value, r.variant))
    held = sorted(set(lines))
    ok &= all(printed_fail.values()) and len(printed_fail) == 3
    names = ", ".join(f"{t}: {v}" for t, v in held)
    fails = ", ".join(f"{t} {n}" for (t, n), f in sorted(printed_fail.items()) if f)
    say(5, ok, f"all rows exact to 1e-12; holding variants [{names}]; fail at alpha=1: [{fails}]")
    assert ok


def test_criterion_6_classical_reduction(say):
    t0 = time.perf_counter()
    ctx = AlphaContext(1.0)
    e = FormalExpr.exponential(1.0, -1.0)
    w = np.linspace(-4, 4, 801)
    S = forward(e, ctx, omega=w, X=40.0, nodes=4096)
    fwd = np.max(np.abs(S.values - 1 / (1 + 2j * np.pi * w)))
    rt = verify_numeric(IdentityTag.ROUND_TRIP, [e], ctx, omega_max=256.0,
                        forward_nodes=32768, inverse_nodes=8192)
    ps = verify_numeric(IdentityTag.PARSEVAL, [e], ctx, omega_max=256.0, forward_nodes=32768)
    g = Grid.linspace(0, 8, 2048)
    h = convolve_numeric(SampledSignal.from_function(lambda x: np.exp(-x), g),
                         SampledSignal.from_function(lambda x: np.exp(-2 * x), g), ctx)
    conv = np.max(np.abs(h.values - (np.exp(-g.points) - np.exp(-2 * g.points))))
    dt = time.perf_counter() - t0
    rel = rt.max_abs_discrepancy / rt.lhs_norm
    ok = fwd <= 1e-6 and rel <= 1e-3 and ps.passed and conv <= 1e-4 and dt < 30
    say(6, ok, f"forward max err {fwd:.1e} (<=1e-6), round-trip rel L2 {rel:.2e} (<=1e-3), "
               f"Parseval |x side - 1/2| {abs(ps.lhs_norm - 0.5):.1e}, |omega side - 1/2| "
               f"{abs(ps.rhs_norm - 0.5):.1e} (<=1e-3), convolution {conv:.1e} (<=1e-4), "
               f"{dt:.1f} s (<30 s)")
    assert ok


def test_criterion_6_round_trip_at_narrow_band_is_reported():
    # informational: with |omega| <= 64 the spectral tail alone costs ~3e-3
    ctx = AlphaContext(1.0)
    e = FormalExpr.exponential(1.0, -1.0)
    rt = verify_numeric(IdentityTag.ROUND_TRIP, [e], ctx, omega_max=64.0,
                        forward_nodes=32768, inverse_nodes=8192)
    assert 1e-3 < rt.max_abs_discrepancy / rt.lhs_norm < 1e-2


def test_criterion_7_reconciliation(say):
    gaps = {a: float(np.abs(exponential_law_gap(AlphaContext(a), 1.0, 1.0, 1.0))) for a in (0.5, 1.0)}
    ok = gaps[0.5] > 0 and gaps[1.0] <= 1e-10
    say(7, ok, f"|E(1)^2 - E(2)| = {gaps[0.5]:.4f} at alpha=0.5 (>0), {gaps[1.0]:.1e} at alpha=1 (<=1e-10)")
    assert ok


def test_criterion_8_series(say):
    worst = 0.0
    for alpha in (0.3, 0.5, 0.7, 0.9, 1.0):
        ctx = AlphaContext(alpha)
        for l in (0.5, 1.0, 2.0):
            c = series_coefficients(lambda x: np.ones_like(x), l, 8, ctx)
            s0 = series_partial_sum(series_coefficients(lambda x: np.ones_like(x), l, 0, ctx),
                                    np.linspace(-l, l, 11), ctx)
            worst = max(worst, abs(c[0] - 1), np.max(np.abs(s0 - 1)))
    ctx = AlphaContext(1.0)
    c = series_coefficients(lambda x: np.sign(x), 1.0, 64, ctx)
    x = np.linspace(1e-4, 0.2, 4000)
    gibbs = (np.max(series_partial_sum(c, x, ctx).real) - 1.0) / 2.0
    ok = worst <= 1e-13 and abs(gibbs - 0.089) <= 0.01
    say(8, ok, f"f=1 reconstruction err {worst:.1e} over alpha in 0.3..1, "
               f"Gibbs overshoot {100 * gibbs:.2f}% of jump (8.9% +- 1%)")
    assert ok


def test_criterion_9_determinism(tmp_path, say):
    spec = tmp_path / "e.json"
    spec.write_text(json.dumps({"alpha": 0.6, "terms": [{"coeff": 1, "k": 1, "lambda": -1.5}]}))
    outs = []
    for cmd in (["transform", str(spec), "--omega-count", "65", "--nodes", "512"],
                ["series", str(spec), "--terms", "8", "--half-period", "2"],
                ["table", "moments", "--alpha", "0.4"]):
        pair = []
        for i in range(2):
            p = tmp_path / f"{cmd[0]}{i}.csv"
            assert main(cmd + ["--seed", "3", "--out", str(p)]) == 0
            pair.append(p.read_bytes())
        outs.append(pair[0] == pair[1])
    ok = all(outs)
    say(9, ok, f"byte-identical repeats for transform, series, table: {outs}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

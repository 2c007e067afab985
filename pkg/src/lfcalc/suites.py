"""Seeded verification suites over the formal and numeric layers."""

from __future__ import annotations

import numpy as np

from .formal import FormalExpr, random_expression, verify_formal_identity
from .report import IdentityTag, VerificationReport
from .special import AlphaContext, KernelConvention
from .transform import verify_numeric

__all__ = ["aggregate", "run_formal_suite", "run_numeric_suite"]


def aggregate(tag: IdentityTag, reports, layer: str) -> VerificationReport:
    """Fold reports of one identity into a worst-case row."""
    worst = max(reports, key=lambda r: (r.max_abs_discrepancy / r.tolerance) if r.tolerance else np.inf)
    variants = {}
    for r in reports:
        for k, v in r.variants.items():
            variants[k] = max(variants.get(k, 0.0), v)
    names = {r.variant for r in reports if r.variant}
    notes = list(worst.notes) + [f"{len(reports)} seeded cases, worst case shown"]
    return VerificationReport(
        identity=tag.value,
        lhs_norm=worst.lhs_norm,
        rhs_norm=worst.rhs_norm,
        max_abs_discrepancy=worst.max_abs_discrepancy,
        tolerance=worst.tolerance,
        variant=worst.variant if len(names) <= 1 else ",".join(sorted(names)),
        asserted=all(r.asserted for r in reports),
        alpha=worst.alpha,
        layer=layer,
        notes=notes,
        variants=variants,
    )


def _distinct_mixture(rng, alpha, terms=3):
    e = random_expression(rng, alpha, max_k=0, max_terms=terms, decaying=True, monomials=False)
    return e


def run_formal_suite(alpha: float, seed: int = 0, count: int = 50, roundtrip_count: int = 1000):
    """Every formal identity on seeded random members of the closed-form family."""
    ctx = AlphaContext(alpha)
    rng = np.random.default_rng(seed)
    rows = []

    rt = [verify_formal_identity(IdentityTag.ROUND_TRIP,
                                 [random_expression(rng, alpha, 6, 8)], ctx)
          for _ in range(roundtrip_count)]
    rows.append(aggregate(IdentityTag.ROUND_TRIP, rt, "formal"))

    def dec():
        return random_expression(rng, alpha, 6, 8, decaying=True)

    plan = [
        (IdentityTag.LINEARITY, lambda: ([dec(), dec()], {"a": complex(*rng.uniform(-2, 2, 2)),
                                                         "b": complex(*rng.uniform(-2, 2, 2))})),
        (IdentityTag.INVERSE_LINEARITY, lambda: ([dec(), dec()], {"a": rng.uniform(-2, 2),
                                                                 "b": rng.uniform(-2, 2)})),
        (IdentityTag.SCALING, lambda: ([dec()], {"scale": rng.uniform(0.25, 4)})),
        (IdentityTag.SHIFT, lambda: ([_distinct_mixture(rng, alpha)], {"c": rng.uniform(0.1, 2)})),
        (IdentityTag.MODULATION, lambda: ([dec()], {"c": rng.uniform(0.1, 2)})),
        (IdentityTag.DERIVATIVE, lambda: ([dec()], {})),
        (IdentityTag.CONVOLUTION, lambda: ([_distinct_mixture(rng, alpha),
                                            _distinct_mixture(rng, alpha)], {})),
        (IdentityTag.COMMUTATIVITY, lambda: ([_distinct_mixture(rng, alpha),
                                              _distinct_mixture(rng, alpha)], {})),
        (IdentityTag.DISTRIBUTIVITY, lambda: ([_distinct_mixture(rng, alpha) for _ in range(3)], {})),
        (IdentityTag.UNIQUENESS, lambda: ([dec()], {})),
    ]
    for tag, draw in plan:
        reps = []
        for _ in range(count):
            inputs, params = draw()
            reps.append(verify_formal_identity(tag, inputs, ctx, **params))
        rows.append(aggregate(tag, reps, "formal"))
    return rows


def run_numeric_suite(alpha: float, convention=KernelConvention.CASE3, tolerance: float = 1e-3,
                      X: float = 40.0, nodes: int | None = None, omega=None):
    """Numeric identity rows on fixed decaying test signals.

    At ``alpha = 1`` with ``case3`` the classical rows are asserted; otherwise
    they are reported only.  Lighter grids are used for ``alpha < 1``, where
    each kernel value costs a Mittag-Leffler evaluation.
    """
    ctx = AlphaContext(alpha)
    classical = alpha == 1.0
    if nodes is None:
        nodes = 4096 if classical else 1024
    if omega is None:
        omega = np.linspace(-4.0, 4.0, 257 if classical else 65)
    decay = FormalExpr.exponential(alpha, -1.0)
    decay2 = FormalExpr.exponential(alpha, -2.0)
    decay3 = FormalExpr.exponential(alpha, -3.0)

    def gauss(x):
        return np.exp(-np.pi * np.asarray(x, dtype=float) ** 2)

    common = dict(convention=convention, X=X, nodes=nodes, omega=omega, tolerance=tolerance)
    heavy = {} if classical else {"omega_max": 16.0, "forward_nodes": 2048, "inverse_nodes": 2048,
                                  "x": np.linspace(0.1, 5.0, 256)}
    rt_nodes = {"forward_nodes": 32768, "inverse_nodes": 8192} if classical else {}
    conv = {} if classical else {"conv_points": 2049}
    rows = [
        verify_numeric(IdentityTag.LINEARITY, [decay, gauss], ctx, **common),
        verify_numeric(IdentityTag.SHIFT, [gauss], ctx, c=0.5, **common),
        verify_numeric(IdentityTag.SCALING, [gauss], ctx, scale=2.0, **common),
        verify_numeric(IdentityTag.MODULATION, [gauss], ctx, c=0.5, **common),
        verify_numeric(IdentityTag.DERIVATIVE, [decay], ctx, **common),
        verify_numeric(IdentityTag.CONVOLUTION, [decay, decay2], ctx, **conv, **common),
        verify_numeric(IdentityTag.COMMUTATIVITY, [decay, decay2], ctx, **conv, **common),
        verify_numeric(IdentityTag.DISTRIBUTIVITY, [decay, decay2, decay3], ctx, **conv, **common),
        verify_numeric(IdentityTag.ROUND_TRIP, [decay], ctx, **heavy, **rt_nodes, **common),
        verify_numeric(IdentityTag.PARSEVAL, [decay], ctx, **heavy,
                       **({"forward_nodes": 32768} if classical else {}), **common),
    ]
    return rows

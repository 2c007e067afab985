"""Pointwise realizations of the order-alpha integral and derivative.

The functions here act on genuine complex-valued functions (callables or
sampled data) rather than formal expressions.  The reconciliation report
measures how far the pointwise layer is from the formal one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .rules import QuadratureRule, build_measure_matched_rule, build_riemann_rule
from .special import AlphaContext, ml_eval

__all__ = [
    "DegenerateSignalError",
    "DiscrepancyReport",
    "Grid",
    "IntegrabilityWarning",
    "SampledSignal",
    "estimate_holder_exponent",
    "integrability_measure",
    "lf_derivative_numeric",
    "lf_integral_line",
    "lf_integral_matched",
    "lf_integral_riemann",
    "matched_integral",
    "reconciliation_report",
    "riemann_integral",
]

DEFAULT_LINE_NODES = 4096
DEFAULT_BOUND = 1e6


class DegenerateSignalError(ValueError):
    """The signal carries no scaling information (for example, it is constant)."""


class IntegrabilityWarning(UserWarning):
    """The absolute integral exceeded the configured bound (advisory only)."""


@dataclass(frozen=True)
class Grid:
    """Strictly increasing sample points."""

    points: np.ndarray
    uniform: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a grid needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, a: float, b: float, n: int) -> "Grid":
        return cls(np.linspace(a, b, int(n)), uniform=True)

    def __len__(self):
        return self.points.size

    @property
    def a(self) -> float:
        return float(self.points[0])

    @property
    def b(self) -> float:
        return float(self.points[-1])


SUPPORT_HINTS = ("half-line", "symmetric-line", "interval")


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples on a grid.

    Between samples the signal is read through a cubic spline; outside the
    grid it is taken as zero.
    """

    grid: Grid
    values: np.ndarray
    support: str = "interval"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.points.shape:
            raise ValueError("values and grid differ in length")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        if self.support not in SUPPORT_HINTS:
            raise ValueError(f"unknown support hint {self.support!r}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, grid: Grid, support: str = "interval") -> "SampledSignal":
        return cls(grid, np.asarray(f(grid.points), dtype=complex), support)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def interpolant(self):
        """Callable spline through the samples, zero outside the grid."""
        spline = CubicSpline(self.grid.points, self.values)
        a, b = self.grid.a, self.grid.b

        def f(x):
            x = np.asarray(x, dtype=float)
            inside = (x >= a) & (x <= b)
            out = np.zeros(x.shape, dtype=complex)
            out[inside] = spline(x[inside])
            return out

        return f


def _as_callable(f):
    if isinstance(f, SampledSignal):
        return f.interpolant()
    return f


# --------------------------------------------------------------------------
# integrals


def lf_integral_riemann(f: SampledSignal, ctx: AlphaContext) -> complex:
    """Literal left-endpoint sum ``(1/Gamma(1+a)) sum f(t_j) (t_{j+1}-t_j)^a``.

    No limit is taken.  For ``f = 1`` on ``N`` uniform cells of ``[0, 1]`` the
    value is ``N**(1-a) / Gamma(1+a)``, which grows without bound for ``a < 1``.
    """
    t = f.grid.points
    dt = np.diff(t)
    w = dt**ctx.alpha / ctx.gamma1
    return complex(np.dot(w, f.values[:-1]))


def riemann_integral(f, a: float, b: float, n: int, ctx: AlphaContext) -> complex:
    """Literal sum for a callable over ``n`` uniform cells, oriented.

    ``a == b`` gives 0 and ``a > b`` gives minus the integral over ``[b, a]``.
    """
    if a == b:
        return 0j
    if a > b:
        return -riemann_integral(f, b, a, n, ctx)
    rule = build_riemann_rule(ctx, a, b, n)
    return rule.apply(f(rule.nodes))


def lf_integral_matched(f, rule: QuadratureRule, ctx: AlphaContext | None = None) -> complex:
    """``sum_i w_i f(x_i)`` with a measure-matched (or any) rule.

    ``f`` is a callable or a :class:`SampledSignal`, which is interpolated.
    """
    if ctx is not None and ctx.alpha != rule.alpha:
        raise ValueError("rule order differs from the context")
    g = _as_callable(f)
    try:
        vals = np.asarray(g(rule.nodes), dtype=complex)
    except Exception as exc:  # surfaced as a node failure
        raise ArithmeticError(f"integrand evaluation failed at rule nodes: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise ArithmeticError("integrand is not finite at some rule node")
    return rule.apply(vals)


def matched_integral(f, a: float, b: float, ctx: AlphaContext, n: int = 32) -> complex:
    """Matched-rule integral over ``[a, b]`` anchored at ``a``, oriented.

    For ``a > b`` the rule is built on ``[b, a]`` (anchored at ``b``) and the
    sign is flipped, so that orientation reverses the value.
    """
    if a == b:
        return 0j
    if a > b:
        return -matched_integral(f, b, a, ctx, n)
    return lf_integral_matched(f, build_measure_matched_rule(ctx, a, b, n), ctx)


def half_line_rule(ctx: AlphaContext, X: float, nodes: int) -> QuadratureRule:
    """Matched rule on ``[0, X]`` used for each half of a line integral."""
    if not X > 0:
        raise ValueError("truncation X must be positive")
    return build_measure_matched_rule(ctx, 0.0, float(X), int(nodes))


def integrability_measure(f, X: float, ctx: AlphaContext, nodes: int = DEFAULT_LINE_NODES,
                          rule: QuadratureRule | None = None) -> float:
    """``int_{-X}^{X} |f| (dx)^a`` with the split-at-zero matched rule."""
    rule = rule or half_line_rule(ctx, X, nodes)
    g = _as_callable(f)
    pos = np.abs(np.asarray(g(rule.nodes), dtype=complex))
    neg = np.abs(np.asarray(g(-rule.nodes), dtype=complex))
    return float(np.dot(rule.weights, pos + neg))


def lf_integral_line(f, X: float, ctx: AlphaContext, nodes: int = DEFAULT_LINE_NODES,
                     rule: QuadratureRule | None = None, bound: float | None = None) -> complex:
    """``int_{-X}^{X} f (dx)^a`` split at 0 into two matched half-line integrals.

    The left half is integrated as ``int_0^X f(-x) (dx)^a``.  ``nodes`` counts
    nodes per half.  When ``bound`` is given and ``int |f| (dx)^a`` exceeds it,
    an :class:`IntegrabilityWarning` is issued; the value is still returned.
    """
    rule = rule or half_line_rule(ctx, X, nodes)
    g = _as_callable(f)
    vp = np.asarray(g(rule.nodes), dtype=complex)
    vm = np.asarray(g(-rule.nodes), dtype=complex)
    if not (np.all(np.isfinite(vp)) and np.all(np.isfinite(vm))):
        raise ArithmeticError("integrand is not finite at some rule node")
    if bound is not None:
        mag = float(np.dot(rule.weights, np.abs(vp) + np.abs(vm)))
        if mag > bound:
            warnings.warn(
                f"absolute integral {mag:.3g} exceeds the bound {bound:.3g}",
                IntegrabilityWarning,
                stacklevel=2,
            )
    return complex(np.dot(rule.weights, vp + vm))


# --------------------------------------------------------------------------
# derivative and Hölder diagnostics


def lf_derivative_numeric(f, x0: float, ctx: AlphaContext, h: float = 1e-4):
    """Difference quotient ``Gamma(1+a) (f(x0+h) - f(x0)) / h**a`` at finite ``h``.

    Returns
    -------
    value : complex
        The quotient at step ``h``.
    exponent : float
        Scaling exponent ``p`` with ``quotient ~ h**p`` from a second probe at
        ``h / 100``; ``nan`` if either quotient vanishes.  For classically smooth
        ``f`` and ``a < 1`` this is about ``1 - a``: the literal limit is zero.
    """
    if not h > 0:
        raise ValueError("step h must be positive")

    def q(step):
        return ctx.gamma1 * (complex(f(x0 + step)) - complex(f(x0))) / step**ctx.alpha

    v1 = q(h)
    v2 = q(h * 1e-2)
    if v1 == 0 or v2 == 0:
        return v1, float("nan")
    return v1, math.log(abs(v1) / abs(v2)) / math.log(100.0)


def estimate_holder_exponent(f: SampledSignal, min_samples: int = 64):
    """Oscillation-scaling estimate of the Hölder exponent.

    For dyadic lags ``s`` the maximal oscillation ``max |f_i - f_{i+s}|`` is
    regressed against ``s`` on log-log axes.

    Returns
    -------
    dict
        ``alpha_hat`` (slope clipped to ``(0, 1]``) and ``confidence`` (R^2).
    """
    v = f.values
    if v.size < min_samples:
        raise ValueError(f"need at least {min_samples} samples")
    if not f.grid.uniform:
        d = np.diff(f.grid.points)
        if np.max(np.abs(d - d.mean())) > 1e-9 * abs(d.mean()):
            raise ValueError("Hölder estimate needs a uniform grid")
    lags, osc = [], []
    s = 1
    while s <= v.size // 4:
        o = np.max(np.abs(v[s:] - v[:-s]))
        lags.append(s)
        osc.append(o)
        s *= 2
    osc = np.asarray(osc)
    if np.all(osc == 0):
        raise DegenerateSignalError("constant signal has no Hölder exponent")
    keep = osc > 0
    lx = np.log(np.asarray(lags, dtype=float)[keep])
    ly = np.log(osc[keep])
    if lx.size < 2:
        raise DegenerateSignalError("too few nonzero oscillation scales")
    slope, icpt = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + icpt)
    ss = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss if ss > 0 else 1.0
    return {"alpha_hat": float(min(max(slope, np.finfo(float).tiny), 1.0)), "confidence": float(r2)}


# --------------------------------------------------------------------------
# reconciliation


@dataclass
class DiscrepancyReport:
    """Formal-versus-pointwise gaps for one expression."""

    alpha: float
    exponential_law_gap: float
    exponential_law_argmax: float
    quadrature_gap: float
    rates: tuple
    interval: tuple
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "exponential_law_gap": self.exponential_law_gap,
            "exponential_law_argmax": self.exponential_law_argmax,
            "quadrature_gap": self.quadrature_gap,
            "rates": [[complex(r).real, complex(r).imag] for r in self.rates],
            "interval": list(self.interval),
            "notes": list(self.notes),
        }


def exponential_law_gap(ctx: AlphaContext, a: complex, b: complex, x) -> np.ndarray:
    """``|E(a x^al) E(b x^al) - E((a+b) x^al)|`` pointwise."""
    xa = np.asarray(x, dtype=float) ** ctx.alpha
    return np.abs(
        ml_eval(ctx.alpha, a * xa) * ml_eval(ctx.alpha, b * xa) - ml_eval(ctx.alpha, (a + b) * xa)
    )


def reconciliation_report(e, ctx: AlphaContext, rates=(1.0, 1.0), x_max: float = 1.0,
                          points: int = 101, interval: tuple = (0.0, 8.0), n: int = 32
                          ) -> DiscrepancyReport:
    """Measure where the formal layer and pointwise numerics disagree.

    Parameters
    ----------
    e : FormalExpr
        Expression whose formal definite integral over ``interval`` is compared
        with the matched quadrature of its pointwise values.  The interval must
        start at the anchor.
    rates : pair of complex
        ``(a, b)`` for the exponential-law probe on ``[0, x_max]``.
    """
    from .formal import definite_integral

    a, b = complex(rates[0]), complex(rates[1])
    xs = np.linspace(0.0, x_max, points)
    gaps = exponential_law_gap(ctx, a, b, xs)
    i = int(np.argmax(gaps))
    lo, hi = interval
    formal = definite_integral(e, lo, hi)
    numeric = matched_integral(e, lo, hi, ctx, n)
    notes = []
    if lo != e.anchor:
        notes.append("interval does not start at the anchor; matched rule is not exact there")
    return DiscrepancyReport(
        alpha=ctx.alpha,
        exponential_law_gap=float(gaps[i]),
        exponential_law_argmax=float(xs[i]),
        quadrature_gap=float(abs(formal - numeric)),
        rates=(a, b),
        interval=(float(lo), float(hi)),
        notes=notes,
    )

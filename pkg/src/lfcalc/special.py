"""Gamma, the one-parameter Mittag-Leffler function and the fractal Fourier kernels.

The Mittag-Leffler function ``E_a(z) = sum_k z**k / Gamma(1 + k*a)`` is the
fractal analogue of ``exp``.  Evaluation is split in two regimes:

* the Taylor series with adaptive truncation, used wherever its summation is
  well conditioned (small ``|z|``, or ``z`` inside the growth sector), and
* a Hankel-contour representation of the inverse Laplace transform
  ``E_a(z) = (2 pi i)^-1 int_Ha e^s s^(a-1) / (s^a - z) ds`` collapsed onto
  two rays ``arg s = +-theta``, plus the residue at ``s = z**(1/a)`` when the
  pole lies inside the swept sector.

The contour route keeps double precision for arguments where the series
would cancel catastrophically (negative real part, the rotated rays used by
the transform kernels).  At ``a = 1`` the ray integrand vanishes identically
and the representation reduces to the residue ``exp(z)``.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, rgamma

__all__ = [
    "AlphaContext",
    "DomainError",
    "KernelConvention",
    "MittagLefflerConvergenceError",
    "ReducedAccuracyWarning",
    "gamma",
    "kernel",
    "ml_eval",
    "ml_series",
    "mittag_leffler",
    "pow_alpha",
]

DEFAULT_Z_MAX = 50.0
DEFAULT_TERM_CAP = 10_000
SERIES_STOP = 1e-16
ASYMPTOTIC_RADIUS = 8.0


class DomainError(ValueError):
    """Argument outside the supported domain of a special function."""


class MittagLefflerConvergenceError(ArithmeticError):
    """The Mittag-Leffler series hit its term cap before converging."""


class ReducedAccuracyWarning(UserWarning):
    """Argument magnitude beyond the guarded regime ``|z| <= z_max``."""


def gamma(x: float) -> float:
    """Gamma function for ``x > 0``.

    Raises
    ------
    DomainError
        If ``x <= 0`` (or is not finite).
    """
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma is only supported for finite x > 0, got {x!r}")
    return math.gamma(x)


@dataclass(frozen=True)
class AlphaContext:
    """Fractal order ``alpha`` in (0, 1] together with its derived constants.

    ``h0 = (2 pi)**alpha / Gamma(1 + alpha)`` is the scale of the generalized
    kernel and ``i_pow_alpha = exp(i pi alpha / 2)`` is the principal ``i**alpha``.
    """

    alpha: float
    h0: float = field(init=False)
    i_pow_alpha: complex = field(init=False)
    gamma1: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not (0.0 < a <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        g1 = math.gamma(1.0 + a)
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "h0", (2.0 * math.pi) ** a / g1)
        if a == 1.0:
            ipa = 1j
        else:
            ipa = cmath.exp(0.5j * math.pi * a)
        object.__setattr__(self, "i_pow_alpha", ipa)


def pow_alpha(ctx: AlphaContext, x):
    """Odd extension ``sign(x) * |x|**alpha``; identity at ``alpha = 1``."""
    if ctx.alpha == 1.0:
        if np.isscalar(x):
            return float(x)
        return np.asarray(x, dtype=float)
    xa = np.asarray(x, dtype=float)
    out = np.sign(xa) * np.abs(xa) ** ctx.alpha
    if np.ndim(out) == 0:
        return float(out)
    return out


# --------------------------------------------------------------------------
# series


@lru_cache(maxsize=64)
def _series_ratios(alpha: float, n: int) -> np.ndarray:
    # r[k] = Gamma(1 + (k-1) a) / Gamma(1 + k a), r[0] unused
    k = np.arange(n + 1, dtype=float)
    lg = gammaln(1.0 + k * alpha)
    r = np.empty(n + 1)
    r[0] = 1.0
    r[1:] = np.exp(lg[:-1] - lg[1:])
    r.flags.writeable = False
    return r


def ml_series(alpha: float, z, term_cap: int = DEFAULT_TERM_CAP, return_condition=False):
    """Taylor series of ``E_alpha`` with adaptive truncation.

    Summation for each entry stops once the current term falls below
    ``1e-16`` times the running maximum of the partial-sum magnitudes (and the
    terms have started to decrease).

    Parameters
    ----------
    alpha : float
    z : complex or array_like
    term_cap : int
        Maximum number of terms.
    return_condition : bool
        Also return ``sum |t_k| / |E|``, the condition number of the summation.

    Raises
    ------
    MittagLefflerConvergenceError
        If any entry needs more than ``term_cap`` terms.
    """
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    if alpha == 1.0:
        # E_1 is exp; every regime below collapses to it
        out = np.exp(zarr)
        return complex(out) if scalar else out
    zf = zarr.reshape(-1)
    total = np.ones_like(zf)
    absum = np.ones(zf.shape, dtype=float)
    runmax = np.ones(zf.shape, dtype=float)
    term = np.ones_like(zf)
    active = np.ones(zf.shape, dtype=bool)
    ratios = _series_ratios(float(alpha), min(term_cap, 256))
    k = 0
    while active.any():
        k += 1
        if k > term_cap:
            raise MittagLefflerConvergenceError(
                f"Mittag-Leffler series did not converge within {term_cap} terms"
            )
        if k >= len(ratios):
            ratios = _series_ratios(float(alpha), min(term_cap, 2 * len(ratios)))
        idx = np.flatnonzero(active)
        za = zf[idx]
        growth = np.abs(za) * ratios[k]
        t = term[idx] * za * ratios[k]
        term[idx] = t
        s = total[idx] + t
        total[idx] = s
        at = np.abs(t)
        absum[idx] += at
        rm = np.maximum(runmax[idx], np.abs(s))
        runmax[idx] = rm
        done = (at <= SERIES_STOP * rm) & (growth < 1.0)
        active[idx[done]] = False
    out = total.reshape(zarr.shape)
    if scalar:
        out = complex(out)
    if return_condition:
        with np.errstate(divide="ignore"):
            cond = (absum / np.abs(total)).reshape(zarr.shape)
        return out, cond
    return out


# --------------------------------------------------------------------------
# contour representation

_THETA_CANDIDATES = np.pi * np.linspace(0.75, 1.0, 6)


def _angdist(phi):
    w = np.mod(phi + np.pi, 2.0 * np.pi) - np.pi
    return np.abs(w)


@lru_cache(maxsize=256)
def _ray_nodes(alpha: float, theta: float):
    """Exp-sinh nodes and weights for ``int_0^inf F(u) du`` on the rays."""
    c = abs(math.cos(theta))
    u_hi = (60.0 / c) ** alpha
    t_hi = math.asinh(2.0 * math.log(u_hi) / math.pi) + 0.1
    t_lo = math.asinh(2.0 * math.log(1e-22) / math.pi)
    h = min(0.025, 0.06 * alpha)
    n = int(math.ceil((t_hi - t_lo) / h)) + 1
    t = np.linspace(t_lo, t_hi, n)
    h = t[1] - t[0]
    u = np.exp(0.5 * math.pi * np.sinh(t))
    w = h * 0.5 * math.pi * np.cosh(t) * u
    return u, w


def _ml_contour(alpha: float, z: np.ndarray) -> np.ndarray:
    """Contour evaluation of ``E_alpha`` for arrays of arguments."""
    if alpha == 1.0:
        # ray integrand vanishes identically; only the residue survives
        return np.exp(z)
    out = np.empty_like(z)
    argz = np.angle(z)
    # pick per-point ray angle keeping both pole images off the real u-axis
    d = np.minimum(
        _angdist(argz[:, None] - alpha * _THETA_CANDIDATES[None, :]),
        _angdist(argz[:, None] + alpha * _THETA_CANDIDATES[None, :]),
    )
    choice = np.argmax(d, axis=1)
    for j in np.unique(choice):
        sel = np.flatnonzero(choice == j)
        theta = float(_THETA_CANDIDATES[j])
        u, w = _ray_nodes(alpha, theta)
        ep = np.exp(1j * alpha * theta)
        em = np.conj(ep)
        up = u ** (1.0 / alpha)
        fp = w * ep * np.exp(up * np.exp(1j * theta))
        fm = w * em * np.exp(up * np.exp(-1j * theta))
        zs = z[sel]
        # chunk to bound memory: len(zs) x len(u)
        step = max(1, 2_000_000 // len(u))
        vals = np.empty(len(sel), dtype=complex)
        for lo in range(0, len(sel), step):
            zz = zs[lo : lo + step, None]
            integ = fp / (u * ep - zz) - fm / (u * em - zz)
            vals[lo : lo + step] = integ.sum(axis=1)
        vals /= 2j * math.pi * alpha
        inside = np.abs(argz[sel]) < alpha * theta
        if inside.any():
            zi = zs[inside]
            vals[inside] += np.exp(np.exp(np.log(zi) / alpha)) / alpha
        out[sel] = vals
    return out


@lru_cache(maxsize=64)
def _asym_coeffs(alpha: float, n: int) -> np.ndarray:
    # c[j] = 1 / Gamma(1 - j a), j = 1..n
    j = np.arange(1, n + 1, dtype=float)
    c = rgamma(1.0 - j * alpha)
    c.flags.writeable = False
    return c


def _ml_asymptotic(alpha: float, z: np.ndarray, max_terms: int = 60):
    """Large-``|z|`` expansion ``exp(z^(1/a))/a - sum_j z^-j / Gamma(1 - j a)``.

    Returns the values and a mask of entries for which the divergent tail
    became negligible (smallest term below ``1e-16`` of the running sum).
    """
    c = _asym_coeffs(alpha, max_terms)
    inv = 1.0 / z
    p = np.ones_like(z)
    total = np.zeros_like(z)
    best = np.full(z.shape, np.inf)
    ok = np.zeros(z.shape, dtype=bool)
    for j in range(max_terms):
        p = p * inv
        t = c[j] * p
        at = np.abs(t)
        # stop adding once terms grow again (optimal truncation)
        grow = at > best
        live = ~ok & ~grow
        total = np.where(live, total - t, total)
        best = np.where(live & (at > 0), np.minimum(best, at), best)
        ok |= live & (at <= 1e-16 * np.maximum(np.abs(total), 1e-300)) & (at > 0)
        if ok.all():
            break
    argz = np.angle(z)
    inside = np.abs(argz) < alpha * np.pi
    if inside.any():
        zi = z[inside]
        total[inside] += np.exp(np.exp(np.log(zi) / alpha)) / alpha
    return total, ok


def ml_eval(alpha: float, z):
    """Vectorized ``E_alpha(z)`` without range warnings.

    Entries whose series summation is well conditioned use the series; the
    rest (and any entry whose a-posteriori condition number is poor) use the
    contour representation.
    """
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    if alpha == 1.0:
        # E_1 is exp; every regime below collapses to it
        out = np.exp(zarr)
        return complex(out) if scalar else out
    zf = zarr.reshape(-1)
    out = np.empty_like(zf)
    if zf.size:
        r = np.abs(zf)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            big = np.power(r, 1.0 / alpha)
            argz = np.angle(zf)
            grow = np.where(
                np.abs(argz) < alpha * np.pi,
                big * np.cos(argz / alpha) - math.log(alpha),
                -np.inf,
            )
            floor = -np.log1p(r) - 2.0
            log_mag = np.maximum(grow, floor)
        use_series = (big <= 600.0) & (big - log_mag <= 5.0)
        idx = np.flatnonzero(use_series)
        if idx.size:
            vals, cond = ml_series(alpha, zf[idx], return_condition=True)
            bad = ~(cond < 1e3)
            out[idx] = vals
            use_series[idx[bad]] = False
        rest = np.flatnonzero(~use_series)
        if rest.size and alpha < 1.0:
            far = rest[r[rest] >= ASYMPTOTIC_RADIUS]
            if far.size:
                vals, ok = _ml_asymptotic(alpha, zf[far])
                out[far[ok]] = vals[ok]
                done = np.zeros(zf.shape, dtype=bool)
                done[far[ok]] = True
                rest = rest[~done[rest]]
        if rest.size:
            out[rest] = _ml_contour(alpha, zf[rest])
    out = out.reshape(zarr.shape)
    if scalar:
        return complex(out)
    return out


def mittag_leffler(ctx: AlphaContext, z, z_max: float = DEFAULT_Z_MAX):
    """``E_alpha(z) = sum_k z**k / Gamma(1 + k alpha)`` for complex ``z``.

    Entries with ``|z| > z_max`` are still evaluated, but a
    :class:`ReducedAccuracyWarning` is issued for them.
    """
    zarr = np.asarray(z, dtype=complex)
    if np.any(np.abs(zarr) > z_max):
        warnings.warn(
            f"|z| exceeds z_max={z_max}; Mittag-Leffler accuracy not guaranteed",
            ReducedAccuracyWarning,
            stacklevel=2,
        )
    return ml_eval(ctx.alpha, z)


class KernelConvention(enum.Enum):
    """Three omega parametrizations of the fractal Fourier pair.

    ``CASE1``: kernel ``E(-+ i^a x^a w^a)``, inverse prefactor ``1/(2 pi)^a``.
    ``CASE2``: kernel scale ``(2 pi)^a``, inverse prefactor 1.
    ``CASE3``: kernel scale ``h0``, symmetric ``1/Gamma(1+a)`` prefactors.
    """

    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"

    def scale(self, ctx: AlphaContext) -> float:
        if self is KernelConvention.CASE1:
            return 1.0
        if self is KernelConvention.CASE2:
            return (2.0 * math.pi) ** ctx.alpha
        return ctx.h0

    def forward_prefactor(self, ctx: AlphaContext) -> float:
        return 1.0 / ctx.gamma1

    def inverse_prefactor(self, ctx: AlphaContext) -> float:
        if self is KernelConvention.CASE1:
            return 1.0 / (2.0 * math.pi) ** ctx.alpha
        if self is KernelConvention.CASE2:
            return 1.0
        return 1.0 / ctx.gamma1

    @classmethod
    def parse(cls, text: str) -> "KernelConvention":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown kernel convention {text!r}; expected case1, case2 or case3"
            ) from None


def kernel_argument(ctx, x, omega, sign, convention=KernelConvention.CASE3):
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return (
        sign
        * ctx.i_pow_alpha
        * convention.scale(ctx)
        * (pow_alpha(ctx, x) * pow_alpha(ctx, omega))
    )


def kernel(ctx: AlphaContext, x, omega, sign: int, convention=KernelConvention.CASE3):
    """Fractal Fourier kernel ``E_a(sign * i^a * scale * x^a * omega^a)``.

    ``x`` and ``omega`` broadcast against each other.  Negative arguments use
    the odd extension of :func:`pow_alpha`.
    """
    return ml_eval(ctx.alpha, kernel_argument(ctx, x, omega, sign, convention))

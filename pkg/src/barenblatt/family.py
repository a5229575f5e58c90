"""The compactly supported self-similar density family.

A member is

    u(x, t) = C t^{-alpha d} (1 - (|x| / c t^alpha)^beta)_+^gamma

on R^d, with C chosen so that u(., t) integrates to one for every t > 0.
The support is the closed ball of radius c t^alpha; u vanishes identically
outside it (exact 0.0, not a denormal) and is maximal at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import inv_reg_inc_beta, ln_gamma, reg_inc_beta

__all__ = [
    "FamilyParams",
    "new_family",
    "support_radius",
    "pdf",
    "radial_pdf",
    "ball_probability",
    "cdf_1d",
    "quantile_1d",
    "radial_moment",
    "self_similarity_residual",
]


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of one family member; norm_c is derived, not free.

    Immutable after construction; all evaluation paths assume the
    constraints checked by `new_family` hold.
    """

    alpha: float
    beta_exp: float
    gamma_exp: float
    c: float
    d: int
    norm_c: float


def _ln_beta(a: float, b: float) -> float:
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def new_family(alpha, beta_exp, gamma_exp, c, d) -> FamilyParams:
    """Validate parameters and compute the normalization constant.

    C = beta / (c^d sigma(S^{d-1}) B(d/beta, gamma+1)), assembled in log
    space so extreme parameter combinations cannot overflow on the way.
    """
    alpha = float(alpha)
    beta_exp = float(beta_exp)
    gamma_exp = float(gamma_exp)
    c = float(c)
    if alpha <= 0.0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if beta_exp <= 0.0 or not math.isfinite(beta_exp):
        raise ValueError(f"beta_exp must be > 0, got {beta_exp}")
    if gamma_exp <= 0.0 or not math.isfinite(gamma_exp):
        raise ValueError(f"gamma_exp must be > 0, got {gamma_exp}")
    if c <= 0.0 or not math.isfinite(c):
        raise ValueError(f"c must be > 0, got {c}")
    if int(d) != d or int(d) < 1:
        raise ValueError(f"d must be an integer >= 1, got {d}")
    d = int(d)
    ln_sphere = math.log(2.0) + 0.5 * d * math.log(math.pi) - ln_gamma(0.5 * d)
    ln_c = (
        math.log(beta_exp)
        - d * math.log(c)
        - ln_sphere
        - _ln_beta(d / beta_exp, gamma_exp + 1.0)
    )
    return FamilyParams(alpha, beta_exp, gamma_exp, c, d, math.exp(ln_c))


def _check_time(t) -> float:
    t = float(t)
    if not (t > 0.0) or not math.isfinite(t):
        raise ValueError(f"t must be > 0, got {t}")
    return t


def support_radius(p: FamilyParams, t) -> float:
    """Front radius r(t) = c t^alpha."""
    t = _check_time(t)
    return p.c * t**p.alpha


def _radius_of(p: FamilyParams, x):
    """Reduce a point argument to radii.

    Conventions: a scalar is a point on the first coordinate axis; for
    d = 1 arrays are elementwise points; for d >= 2 the last axis must
    have length d (a (d,) vector is a single point, (..., d) is a batch).
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or p.d == 1:
        return np.abs(arr)
    if arr.shape[-1] != p.d:
        raise ValueError(
            f"point array must have last axis of length d={p.d}, got shape {arr.shape}"
        )
    return np.sqrt(np.sum(arr * arr, axis=-1))


def _profile(p: FamilyParams, r, t: float):
    """Density as a function of radius; exact 0.0 from the front outward."""
    z = np.asarray(r, dtype=float) / (p.c * t**p.alpha)
    # min(z, 1) pins every outside point to the boundary where the plateau
    # factor is exactly zero; also shields pow from rounding above 1
    body = np.maximum(1.0 - np.minimum(z, 1.0) ** p.beta_exp, 0.0)
    return p.norm_c * t ** (-p.alpha * p.d) * body**p.gamma_exp


def pdf(p: FamilyParams, x, t):
    """Density u(x, t); see `_radius_of` for accepted point layouts."""
    t = _check_time(t)
    out = _profile(p, _radius_of(p, x), t)
    return float(out) if np.ndim(out) == 0 else out


def radial_pdf(p: FamilyParams, r, t):
    """Density of the radius |X(t)|: sigma(S^{d-1}) r^{d-1} u(r, t)."""
    t = _check_time(t)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0):
        raise ValueError("radius must be >= 0")
    ln_sphere = math.log(2.0) + 0.5 * p.d * math.log(math.pi) - ln_gamma(0.5 * p.d)
    out = math.exp(ln_sphere) * r_arr ** (p.d - 1) * _profile(p, r_arr, t)
    return float(out) if np.ndim(r) == 0 else out


def ball_probability(p: FamilyParams, a, t):
    """P(|X(t)| <= a) = I((a/ct^alpha)^beta; d/beta, gamma+1), clamped at 1."""
    t = _check_time(t)
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr < 0.0):
        raise ValueError("ball radius must be >= 0")
    z = np.minimum(a_arr / (p.c * t**p.alpha), 1.0) ** p.beta_exp
    out = reg_inc_beta(np.minimum(z, 1.0), p.d / p.beta_exp, p.gamma_exp + 1.0)
    return float(out) if np.ndim(a) == 0 else np.asarray(out)


def _require_1d(p: FamilyParams):
    if p.d != 1:
        raise ValueError(f"operation requires d = 1, got d = {p.d}")


def cdf_1d(p: FamilyParams, x, t):
    """Distribution function F(x) = (1 + sgn(x) I((|x|/ct^alpha)^beta; 1/beta, gamma+1))/2.

    The incomplete-beta argument carries the beta power: that is the only
    reading consistent with the ball law and with quadrature of the pdf.
    """
    _require_1d(p)
    t = _check_time(t)
    x_arr = np.asarray(x, dtype=float)
    z = np.minimum(np.abs(x_arr) / (p.c * t**p.alpha), 1.0) ** p.beta_exp
    half_mass = reg_inc_beta(np.minimum(z, 1.0), 1.0 / p.beta_exp, p.gamma_exp + 1.0)
    out = 0.5 * (1.0 + np.sign(x_arr) * half_mass)
    return float(out) if np.ndim(x) == 0 else out


def quantile_1d(p: FamilyParams, q, t):
    """Inverse of cdf_1d; q = 0, 1/2, 1 map to -r(t), 0, r(t)."""
    _require_1d(p)
    t = _check_time(t)
    q_arr = np.asarray(q, dtype=float)
    if np.any(q_arr < 0.0) or np.any(q_arr > 1.0):
        raise ValueError("quantile level must lie in [0, 1]")
    y = inv_reg_inc_beta(np.abs(2.0 * q_arr - 1.0), 1.0 / p.beta_exp, p.gamma_exp + 1.0)
    out = np.sign(q_arr - 0.5) * (p.c * t**p.alpha) * np.asarray(y) ** (1.0 / p.beta_exp)
    return float(out) if np.ndim(q) == 0 else out


def radial_moment(p: FamilyParams, k, t) -> float:
    """E |X(t)|^k = c^k t^{alpha k} B((d+k)/beta, gamma+1) / B(d/beta, gamma+1)."""
    t = _check_time(t)
    k = float(k)
    if k < 0.0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    ln_ratio = _ln_beta((p.d + k) / p.beta_exp, p.gamma_exp + 1.0) - _ln_beta(
        p.d / p.beta_exp, p.gamma_exp + 1.0
    )
    return math.exp(k * math.log(p.c) + p.alpha * k * math.log(t) + ln_ratio)


def self_similarity_residual(p: FamilyParams, x, t, L):
    """u(x, t) - L^{d alpha} u(L^alpha x, L t); zero for every member."""
    t = _check_time(t)
    L = float(L)
    if L <= 0.0:
        raise ValueError(f"L must be > 0, got {L}")
    r = _radius_of(p, x)
    lhs = _profile(p, r, t)
    rhs = L ** (p.d * p.alpha) * _profile(p, L**p.alpha * r, L * t)
    out = lhs - rhs
    return float(out) if np.ndim(out) == 0 else out

"""Norms on the disc and bidisc, and the pairwise double-integral functional.

The squared Dirichlet-type norm with radial weight exponent p is

    ||f||^2 = int_D |f'(z)|^2 (1-|z|^2)^p dA(z),

a seminorm (constants get norm 0; no constant offset is added).  Two routes
are provided: an exact coefficient formula, sum_{n>=1} n^2 |a_n|^2 B(n, p+1),
and quadrature against the weighted rule.

The pairwise functional couples two weighted disc measures through the
kernel |1 - conj(w) z|^{-q}:

    D(f) = iint |f(z)-f(w)|^2 / |1 - conj(w) z|^q  dA_sigma(z) dA_tau(w).

For weight parameters inside the admissible window this quantity is
equivalent (with unknown absolute constants) to the squared Dirichlet-type
norm with p = sigma + tau - 2*beta, where q = 2*(beta + 2); the experiment
layer checks that equivalence as a ratio-band property.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from ._numutil import abs_sq, powq
from .errors import ConvergenceError, ParamError
from .quadrature import (
    DEFAULT_BIDISC_SETTINGS,
    DEFAULT_DISC_SETTINGS,
    QuadratureSettings,
    build_disc_rule,
    integrate_bidisc,
    build_bidisc_rule,
    integrate_disc,
    refine_until,
)
from .series import TruncatedPowerSeries, differentiate, eval_series

_RADIAL_BLOCK = 16  # z-radial block size for the correlation path (memory bound)


@dataclass(frozen=True)
class WeightParams:
    """Admissible weight tuple (sigma, tau, beta).

    Constructed through :func:`validate_params` or
    :func:`validate_main_theorem_params`; construction enforces the window

        sigma > -1,  tau > -1,  max(sigma, tau)/2 - 1 < beta <= (sigma+tau)/2.

    The derived exponents are p = sigma + tau - 2*beta (Dirichlet weight) and
    q = 2*(beta + 2) (kernel exponent of the pairwise functional).
    """

    sigma: float
    tau: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "beta", float(self.beta))
        if self.sigma <= -1.0:
            raise ParamError(f"sigma must satisfy sigma > -1, got {self.sigma:g}")
        if self.tau <= -1.0:
            raise ParamError(f"tau must satisfy tau > -1, got {self.tau:g}")
        lower = max(self.sigma, self.tau) / 2.0 - 1.0
        if not (self.beta > lower):
            raise ParamError(
                f"beta must satisfy beta > max(sigma,tau)/2 - 1 = {lower:g}, got {self.beta:g}"
            )
        upper = (self.sigma + self.tau) / 2.0
        if not (self.beta <= upper):
            raise ParamError(
                f"beta must satisfy beta <= (sigma+tau)/2 = {upper:g}, got {self.beta:g}"
            )

    @property
    def p_dirichlet(self) -> float:
        return self.sigma + self.tau - 2.0 * self.beta

    @property
    def q_exponent(self) -> float:
        return 2.0 * (self.beta + 2.0)


def validate_params(sigma: float, tau: float, beta: float) -> WeightParams:
    """Validate the general window; raises ParamError naming the violated inequality."""
    return WeightParams(sigma=sigma, tau=tau, beta=beta)


def validate_main_theorem_params(sigma: float, beta: float) -> WeightParams:
    """Validate the strict equal-weight window sigma > 0, sigma/2 - 1 < beta < sigma.

    This is the window under which the composition-operator bound applies;
    it forces p = 2*sigma - 2*beta > 0.
    """
    sigma = float(sigma)
    beta = float(beta)
    if sigma <= 0.0:
        raise ParamError(f"sigma must satisfy sigma > 0, got {sigma:g}")
    if not (beta > sigma / 2.0 - 1.0):
        raise ParamError(
            f"beta must satisfy beta > sigma/2 - 1 = {sigma / 2.0 - 1.0:g}, got {beta:g}"
        )
    if not (beta < sigma):
        raise ParamError(f"beta must satisfy beta < sigma (strictly), got beta = {beta:g}")
    return WeightParams(sigma=sigma, tau=sigma, beta=beta)


@dataclass(frozen=True)
class NormResult:
    """A squared norm with its computation route and error estimate."""

    value_sq: float
    method: str  # "coefficient" | "quadrature"
    rel_error_estimate: float
    trace: tuple | None = None  # refinement trace for quadrature results

    def __post_init__(self):
        if self.value_sq < 0:
            raise ParamError("squared norm cannot be negative")


def _value_fn(f):
    """Evaluation callable for series, disc-function objects, or plain callables."""
    if isinstance(f, TruncatedPowerSeries):
        return lambda z: eval_series(f, z)
    if hasattr(f, "value"):
        return f.value
    if callable(f):
        return f
    raise ParamError(f"cannot evaluate object of type {type(f).__name__}")


def _deriv_fn(f):
    if isinstance(f, TruncatedPowerSeries):
        df = differentiate(f)
        return lambda z: eval_series(df, z)
    if hasattr(f, "deriv"):
        return f.deriv
    raise ParamError(f"no derivative available for object of type {type(f).__name__}")


def dirichlet_norm_sq_coeff(s: TruncatedPowerSeries, p: float) -> NormResult:
    """Exact squared Dirichlet-type norm from coefficients.

    sum_{n>=1} n^2 |a_n|^2 B(n, p+1), with B the Beta function; the n-th term
    is the weighted moment of |z|^{2(n-1)} hit by the derivative coefficient.
    """
    if p < 0:
        raise ParamError(f"radial weight exponent must be >= 0, got {p:g}")
    n = np.arange(1, len(s.coeffs))
    if len(n) == 0:
        return NormResult(value_sq=0.0, method="coefficient", rel_error_estimate=0.0)
    a = np.asarray(s.coeffs[1:], dtype=complex)
    value = float(np.sum(n**2 * np.abs(a) ** 2 * np.exp(betaln(n, p + 1.0))))
    return NormResult(value_sq=value, method="coefficient", rel_error_estimate=0.0)


def dirichlet_norm_sq_quad(
    f, p: float, settings: QuadratureSettings = DEFAULT_DISC_SETTINGS
) -> NormResult:
    """Squared Dirichlet-type norm by quadrature on |f'|^2.

    The weight (1-|z|^2)^p is absorbed into the sigma = p rule; dividing by
    the rule normalization p+1 recovers the unweighted-dA convention.
    """
    if p < 0:
        raise ParamError(f"radial weight exponent must be >= 0, got {p:g}")
    deriv = _deriv_fn(f)

    def functional(n_rad, n_ang):
        rule = build_disc_rule(p, n_rad, n_ang)
        val = integrate_disc(rule, lambda z: abs_sq(np.asarray(deriv(z))))
        return float(np.real(val)) / (p + 1.0)

    refined = refine_until(settings, functional)
    return NormResult(
        value_sq=max(float(np.real(refined.value)), 0.0),
        method="quadrature",
        rel_error_estimate=refined.achieved_rel_change,
        trace=refined.trace,
    )


def bergman_norm_sq_bidisc(
    F, sigma: float, settings: QuadratureSettings = DEFAULT_BIDISC_SETTINGS
) -> NormResult:
    """Squared norm iint |F(z,w)|^2 dA_sigma(z) dA_sigma(w) by tensor quadrature.

    Only the modulus of F is consumed: F may expose ``modulus(z, w)`` or be a
    plain callable returning complex values.
    """
    if hasattr(F, "modulus_sq"):
        mod_sq = F.modulus_sq
    elif hasattr(F, "modulus"):
        mod_sq = lambda z, w: F.modulus(z, w) ** 2  # noqa: E731
    elif callable(F):
        mod_sq = lambda z, w: abs_sq(F(z, w))  # noqa: E731
    else:
        raise ParamError(f"cannot evaluate object of type {type(F).__name__} on the bidisc")

    def functional(n_rad, n_ang):
        rule = build_bidisc_rule(sigma, sigma, n_rad, n_ang)
        val = integrate_bidisc(rule, mod_sq)
        return float(np.real(val))

    refined = refine_until(settings, functional)
    return NormResult(
        value_sq=max(float(np.real(refined.value)), 0.0),
        method="quadrature",
        rel_error_estimate=refined.achieved_rel_change,
        trace=refined.trace,
    )


def pairwise_difference_integral(
    value_fn, sigma: float, tau: float, q: float, n_rad: int, n_ang: int
) -> float:
    """Single-rule evaluation of iint |f(z)-f(w)|^2 / |1-conj(w) z|^q dA_sigma dA_tau.

    Exploits the tensor structure: for fixed radii the kernel depends on the
    angle difference only, so the angular double sum collapses to a circular
    cross-correlation of the nodal values, evaluated with FFTs.  This is the
    same nodal sum as the generic tensor accumulation, reassociated.
    """
    rule_z = build_disc_rule(sigma, n_rad, n_ang)
    rule_w = build_disc_rule(tau, n_rad, n_ang)
    m = n_ang
    fz = np.asarray(value_fn(rule_z.nodes), dtype=complex).reshape(n_rad, m)
    fw = np.asarray(value_fn(rule_w.nodes), dtype=complex).reshape(n_rad, m)
    if not (np.all(np.isfinite(fz)) and np.all(np.isfinite(fw))):
        raise ConvergenceError("integrand is non-finite at a quadrature node")
    mean_sq_z = np.mean(np.abs(fz) ** 2, axis=1)
    mean_sq_w = np.mean(np.abs(fw) ** 2, axis=1)
    spec_z = np.fft.fft(fz, axis=1)
    spec_w = np.fft.fft(fw, axis=1)
    r_z = np.sqrt(rule_z.radial_t)
    r_w = np.sqrt(rule_w.radial_t)
    cos_d = np.cos(2.0 * np.pi * np.arange(m) / m)

    parts = []
    for lo in range(0, n_rad, _RADIAL_BLOCK):
        hi = min(lo + _RADIAL_BLOCK, n_rad)
        x = r_z[lo:hi, None] * r_w[None, :]  # (b, n_rad)
        kern = 1.0 / powq(
            1.0 - 2.0 * x[:, :, None] * cos_d[None, None, :] + (x**2)[:, :, None], q
        )
        kern_mean = np.mean(kern, axis=2)  # (b, n_rad)
        corr = np.fft.ifft(spec_z[lo:hi, None, :] * np.conj(spec_w)[None, :, :], axis=2)
        cross = np.mean(kern * np.real(corr), axis=2) / m  # (b, n_rad)
        block = kern_mean * (mean_sq_z[lo:hi, None] + mean_sq_w[None, :]) - 2.0 * cross
        parts.append(
            np.sum((rule_z.radial_w[lo:hi, None] * block) * rule_w.radial_w[None, :])
        )
    total = float(np.sum(np.asarray(parts)))
    return rule_z.normalization * rule_w.normalization * total


def double_integral_functional(
    f, params: WeightParams, settings: QuadratureSettings = DEFAULT_BIDISC_SETTINGS
) -> NormResult:
    """Refinement-driven evaluation of the pairwise double-integral functional.

    Expected to lose accuracy (and eventually fail with ConvergenceError)
    as beta approaches the upper endpoint of the window while f has large
    boundary oscillation; the refinement trace is attached for diagnosis.
    """
    value_fn = _value_fn(f)
    q = params.q_exponent

    def functional(n_rad, n_ang):
        return pairwise_difference_integral(value_fn, params.sigma, params.tau, q, n_rad, n_ang)

    refined = refine_until(settings, functional)
    return NormResult(
        value_sq=max(float(np.real(refined.value)), 0.0),
        method="quadrature",
        rel_error_estimate=refined.achieved_rel_change,
        trace=refined.trace,
    )


def equivalence_ratio(
    f, params: WeightParams, settings: QuadratureSettings = DEFAULT_BIDISC_SETTINGS
) -> float:
    """Ratio of the pairwise functional to the squared Dirichlet-type norm.

    The denominator uses the exact coefficient route whenever f is a series
    (removing one source of quadrature error from the ratio); both sides are
    homogeneous of degree 2, so the ratio is scale-invariant.
    """
    numerator = double_integral_functional(f, params, settings)
    if isinstance(f, TruncatedPowerSeries):
        denominator = dirichlet_norm_sq_coeff(f, params.p_dirichlet)
    else:
        denominator = dirichlet_norm_sq_quad(f, params.p_dirichlet)
    if denominator.value_sq <= 0.0:
        raise ParamError("equivalence ratio undefined for constant functions")
    return numerator.value_sq / denominator.value_sq

"""Funnel Poisson-operator modes, scattering coefficients and the
functional equation tying the resolvent at s and 1 - s.

The scattering coefficient is a ratio of six Gamma factors; it is
evaluated in log space with explicit pole tallies so that exact zeros
(a denominator Gamma pole) come out as exact 0 rather than NaN, and a
surplus of numerator poles raises PoleError.
"""

from __future__ import annotations

import cmath

from .errors import DomainError, PoleError
from .geometry import TWO_PI
from .model_kernels import beta_kappa, funnel_mode, v0_profile
from .specfun import _is_nonpositive_integer, log_gamma, rgamma

#: Normalization of the per-mode functional equation: the residual uses
#: c_norm = C_NORM_BASE * ell.  Calibrated once from a single reference
#: point (s = 0.7 + 0.4i, kappa = 1, r = 1, r' = 2, ell = 1) and frozen;
#: the measured base is 1 to machine precision, i.e. per mode
#:   v~(s) - v~(1-s) = (2s-1) ell^2 E(1-s; r) S(s) E(1-s; r').
C_NORM_BASE = 1.0


def poisson_mode(s: complex, kappa: float, r: float, ell: float) -> complex:
    """Poisson mode (1/ell) beta_kappa(s) v0_kappa(s; r) / Gamma(s + 1/2).

    Vanishes at r = 0; symmetric under kappa -> -kappa; poles where
    beta_kappa has them, at s in -(1 + 2 N0) +- i omega kappa.
    """
    s = complex(s)
    if r < 0.0:
        raise DomainError(f"Poisson mode needs r >= 0, got {r}")
    q = TWO_PI / ell * abs(kappa)  # even in kappa
    return beta_kappa(s, q) * v0_profile(s, q, r) * rgamma(s + 0.5) / ell


def scattering_coeff(s: complex, kappa: float, ell: float) -> complex:
    """Funnel scattering coefficient for frequency kappa.

        Gamma(1/2 - s) Gamma((s + iq + 1)/2) Gamma((s - iq + 1)/2)
        -----------------------------------------------------------,
        Gamma(s - 1/2) Gamma((2 - s + iq)/2) Gamma((2 - s - iq)/2)

    with q = omega kappa.  Returns exact 0 when denominator Gamma poles
    dominate; raises PoleError when numerator poles dominate or the pole
    orders balance (indeterminate without a limit direction).
    """
    s = complex(s)
    q = TWO_PI / ell * abs(kappa)  # even in kappa
    num = (
        0.5 - s,
        complex((s.real + 1.0) / 2.0, (s.imag + q) / 2.0),
        complex((s.real + 1.0) / 2.0, (s.imag - q) / 2.0),
    )
    den = (
        s - 0.5,
        complex((2.0 - s.real) / 2.0, (-s.imag + q) / 2.0),
        complex((2.0 - s.real) / 2.0, (-s.imag - q) / 2.0),
    )
    n_poles = sum(1 for z in num if _is_nonpositive_integer(z) is not None)
    d_poles = sum(1 for z in den if _is_nonpositive_integer(z) is not None)
    if n_poles > d_poles:
        raise PoleError(f"scattering coefficient pole at s = {s}, kappa = {kappa}")
    if d_poles > n_poles:
        return 0.0 + 0.0j
    if n_poles:
        raise PoleError(
            f"indeterminate Gamma ratio at s = {s}, kappa = {kappa} "
            f"({n_poles} poles on each side)"
        )
    log_ratio = sum(log_gamma(z) for z in num) - sum(log_gamma(z) for z in den)
    return cmath.exp(log_ratio)


def functional_equation_residual(
    s: complex, kappa: float, r: float, r2: float, ell: float
) -> float:
    """Absolute residual of the per-mode functional equation.

    | v~_kappa(s; r, r') - v~_kappa(1-s; r, r')
      - (2s-1) ell E(1-s; r) S(s) E(1-s; r') c_norm |

    with c_norm = C_NORM_BASE * ell.  Requires s and 1-s off the relevant
    pole sets.
    """
    s = complex(s)
    lhs = funnel_mode(s, kappa, r, r2, ell) - funnel_mode(1.0 - s, kappa, r, r2, ell)
    rhs = (
        (2.0 * s - 1.0)
        * ell
        * poisson_mode(1.0 - s, kappa, r, ell)
        * scattering_coeff(s, kappa, ell)
        * poisson_mode(1.0 - s, kappa, r2, ell)
        * (C_NORM_BASE * ell)
    )
    return abs(lhs - rhs)


def calibrate_c_norm_base(
    s: complex = 0.7 + 0.4j,
    kappa: float = 1.0,
    r: float = 1.0,
    r2: float = 2.0,
    ell: float = 1.0,
) -> complex:
    """Solve the functional equation for c_norm/ell at one reference point.

    Diagnostic only: C_NORM_BASE is frozen; this recomputes what it would
    be, so tests can assert the frozen value still matches.
    """
    s = complex(s)
    lhs = funnel_mode(s, kappa, r, r2, ell) - funnel_mode(1.0 - s, kappa, r, r2, ell)
    block = (
        (2.0 * s - 1.0)
        * ell
        * poisson_mode(1.0 - s, kappa, r, ell)
        * scattering_coeff(s, kappa, ell)
        * poisson_mode(1.0 - s, kappa, r2, ell)
    )
    return lhs / (block * ell)

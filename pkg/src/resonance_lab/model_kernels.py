"""Twisted resolvent kernels on the three model ends, by two representations.

Each kernel is computed per eigenvalue class of the monodromy (the twist is
diagonalized once and for all; kernels are diagonal in that basis), either as

  * a truncated method-of-images sum of the free kernel with twist weights,
    valid in the convergence half-plane Re s > C + MARGIN, or
  * a Fourier-mode synthesis from closed-form mode functions, valid for all
    s off the mode pole lattices.

Mode profiles for the hyperbolic cylinder / funnel are built from the
regularized hypergeometric function; cusp modes from modified Bessel
functions of order s - 1/2.  The two routes agree on the common domain,
which is the module's master cross-check.

Evaluation domains (series guard GUARD_DELTA = 1e-3):
  * cylinder profile v(s; r) needs r >= -R_PROFILE_MIN (~ -3.45);
    in mode synthesis this bounds min(r, r') from above by R_PROFILE_MIN.
  * funnel profile v0(s; r) needs 0 <= r <= R0_PROFILE_MAX (~ 4.15).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, PoleError, TruncationError
from .free_resolvent import g_s
from .geometry import TWO_PI, CylCoord, HPoint, cusp_to_plane, cyl_to_plane, sigma
from .specfun import bessel_i, bessel_k, log_gamma
from .twist import TwistSpec

#: Margin over every convergence abscissa.
MARGIN = 0.1

#: Largest r at which the cylinder profile can be evaluated at -r
#: (series guard |z| <= 1 - 1e-3 on the hypergeometric argument).
R_PROFILE_MIN = 0.5 * math.log((2.0 - specfun.GUARD_DELTA) / specfun.GUARD_DELTA)

#: Largest |r| for the funnel boundary profile (guard on tanh^2 r).
R0_PROFILE_MAX = math.atanh(math.sqrt(1.0 - specfun.GUARD_DELTA))

#: Empirically confirmed Fourier prefactors (cross-checked against images).
FOURIER_PREFACTOR = {"cylinder": "1/ell", "funnel": "1/ell", "cusp": "1"}

_MAX_FOURIER_MODES = 3000


@dataclass(frozen=True)
class ImagesConfig:
    """Truncation control for method-of-images sums."""

    max_images: int = 10_000
    tail_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.max_images < 1 or not self.tail_tol > 0.0:
            raise DomainError(f"invalid ImagesConfig {self}")


@dataclass(frozen=True)
class QuadConfig:
    """Adaptive quadrature control for the continued lattice sum."""

    tol: float = 1e-12
    max_panels: int = 4000


def _require_convergence(s: complex, ell: float, t: TwistSpec) -> None:
    abscissa = t.log_norm() / ell
    if s.real <= abscissa + MARGIN:
        raise DomainError(
            f"Re s = {s.real} not above the convergence abscissa "
            f"{abscissa} + margin {MARGIN}"
        )


def _two_sided_sum(term, cfg: ImagesConfig, center) -> complex:
    """Sum term(k) over k in Z with adaptive symmetric truncation.

    term(k) must decay eventually geometrically in |k| on each side; the
    side tail is estimated from the last ratio and must drop below
    cfg.tail_tol.
    """
    total = center
    for side in (1, -1):
        prev = None
        k = side
        while True:
            cur = term(k)
            total += cur
            if prev is not None and abs(cur) > 0 and abs(k) >= 3:
                ratio = abs(cur) / prev if prev > 0 else 1.0
                if ratio < 0.95:
                    tail = abs(cur) * ratio / (1.0 - ratio)
                    if 4.0 * tail < cfg.tail_tol:
                        break
            if abs(cur) == 0.0 and abs(k) > 2:
                break
            prev = abs(cur)
            k += side
            if abs(k) > cfg.max_images:
                raise TruncationError(
                    f"images sum not below tail_tol={cfg.tail_tol} "
                    f"within {cfg.max_images} images"
                )
    return total


# ---------------------------------------------------------------------------
# Hyperbolic cylinder
# ---------------------------------------------------------------------------


def cyl_class_images(
    s: complex,
    ell: float,
    lam: complex,
    z: HPoint,
    z2: HPoint,
    cfg: ImagesConfig = ImagesConfig(),
) -> complex:
    """Raw image sum sum_k lam^k g_s(sigma(z, e^{k ell} z')) for one class.

    No fundamental-domain reduction is applied; valid for any half-plane
    points with z != z'.
    """
    wc = z2.z
    unit_modulus = abs(abs(lam) - 1.0) < 1e-15
    log_lam = cmath.log(lam)

    def term(k: int) -> complex:
        if abs(k) * ell > 700.0:
            # image beyond double range; its contribution underflowed long ago
            return 0.0 + 0.0j
        img = HPoint.from_complex(math.exp(k * ell) * wc)
        base = g_s(s, sigma(z, img))
        if unit_modulus:
            return lam**k * base
        # non-unit |lam|: lam^k alone can overflow while base underflows;
        # the product is controlled by the convergence condition
        if base == 0.0:
            return 0.0 + 0.0j
        return cmath.exp(k * log_lam + cmath.log(base))

    return _two_sided_sum(term, cfg, g_s(s, sigma(z, z2)))


def _reduce_cylinder(z: HPoint, ell: float) -> tuple[HPoint, int]:
    """Move z into the fundamental domain 1 <= |z| < e^ell; return the word."""
    m = math.floor(math.log(abs(z.z)) / ell)
    if m == 0:
        return z, 0
    return HPoint.from_complex(math.exp(-m * ell) * z.z), m


def cyl_kernel_images(
    s: complex,
    ell: float,
    t: TwistSpec,
    z: HPoint,
    z2: HPoint,
    cfg: ImagesConfig = ImagesConfig(),
) -> np.ndarray:
    """Twisted cylinder resolvent kernel by the method of images.

    Returns one complex value per eigenvalue class of the twist.  Points
    are reduced to the fundamental domain with the twist factor applied
    for the reduction word.
    """
    s = complex(s)
    if not ell > 0.0:
        raise DomainError(f"cylinder length must be positive, got {ell}")
    _require_convergence(s, ell, t)
    zf, m1 = _reduce_cylinder(z, ell)
    wf, m2 = _reduce_cylinder(z2, ell)
    out = np.empty(len(t.angles), dtype=complex)
    for j, cls in enumerate(t.angles):
        lam = cls.eigenvalue
        out[j] = lam ** (m1 - m2) * cyl_class_images(s, ell, lam, zf, wf, cfg)
    return out


def _log_cosh(r: float) -> float:
    a = abs(r)
    return a + math.log1p(math.exp(-2.0 * a)) - math.log(2.0)


def _half_one_minus_tanh(r: float) -> float:
    """(1 - tanh r)/2 = 1/(1 + e^{2r}), computed without cancellation."""
    if r > 0:
        e = math.exp(-2.0 * r)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(2.0 * r))


def log_a_kappa(s: complex, q: float) -> complex:
    """log of 2^{-2s} Gamma(s + iq) Gamma(s - iq), q = omega * kappa."""
    return (
        -2.0 * s * math.log(2.0)
        + log_gamma(complex(s.real, s.imag + q))
        + log_gamma(complex(s.real, s.imag - q))
    )


def a_kappa(s: complex, q: float) -> complex:
    """2^{-2s} Gamma(s + iq) Gamma(s - iq), q = omega * kappa."""
    return cmath.exp(log_a_kappa(s, q))


def _v_profile_scaled(s: complex, q: float, r: float) -> tuple[complex, float]:
    warg = _half_one_minus_tanh(r)
    if warg > 1.0 - specfun.GUARD_DELTA:
        raise DomainError(
            f"profile argument (1-tanh r)/2 = {warg} outside the series guard; "
            f"needs r >= {-R_PROFILE_MIN:.3f}"
        )
    m, e = specfun.reg_hyp2f1_scaled(
        complex(s.real, s.imag + q), complex(s.real, s.imag - q), s + 0.5, warg
    )
    lc = _log_cosh(r)
    return m * cmath.exp(complex(0.0, -s.imag * lc)), e - s.real * lc


def _scaled_to_value(m: complex, e: float, what: str) -> complex:
    if m == 0.0:
        return 0.0 + 0.0j
    x = e + math.log(abs(m))
    if x > 709.0:
        raise specfun.OverflowBudgetError(f"{what} overflows a double ({x:.1f})")
    if x < -745.0:
        return 0.0 + 0.0j
    return m * math.exp(e)


def v_profile(s: complex, q: float, r: float) -> complex:
    """Cylinder mode profile (cosh r)^{-s} F~(s+iq, s-iq; s+1/2; (1-tanh r)/2)."""
    m, e = _v_profile_scaled(complex(s), q, r)
    return _scaled_to_value(m, e, "cylinder mode profile")


def _assemble_mode(log_pref: complex, f1: tuple[complex, float], f2: tuple[complex, float]) -> complex:
    """exp(log_pref) * f1 * f2 with all exponents combined before exp."""
    m = f1[0] * f2[0]
    if m == 0.0:
        return 0.0 + 0.0j
    x = log_pref.real + f1[1] + f2[1]
    if x + math.log(abs(m)) < -745.0:
        return 0.0 + 0.0j
    if x + math.log(abs(m)) > 709.0:
        raise specfun.OverflowBudgetError(f"mode value overflows a double ({x:.1f})")
    return m * cmath.exp(complex(x, log_pref.imag))


def cyl_mode(s: complex, kappa: float, r: float, r2: float, ell: float) -> complex:
    """Two-point cylinder mode a_kappa(s) v(s; -min) v(s; max).

    Symmetric in r <-> r2; poles on the lattice -N0 +- i omega kappa.
    The three factors are combined in log scale, so high frequencies whose
    individual factors over/underflow still evaluate.
    """
    s = complex(s)
    omega = TWO_PI / ell
    q = omega * abs(kappa)  # formulas are even in kappa; canonicalize for bit-equal values
    lo, hi = min(r, r2), max(r, r2)
    return _assemble_mode(
        log_a_kappa(s, q), _v_profile_scaled(s, q, -lo), _v_profile_scaled(s, q, hi)
    )


def _fourier_synthesis(mode_term, k_max: int | None, tail_tol: float) -> complex:
    """Sum mode_term(k) over k in Z, adaptively unless k_max is given.

    The side tails are estimated geometrically from the last magnitude
    ratio with a safety factor of 10 (the ratio still creeps toward its
    asymptote when r and r' are close).
    """
    if k_max is not None:
        total = mode_term(0)
        for k in range(1, k_max + 1):
            total += mode_term(k) + mode_term(-k)
        return total
    total = mode_term(0)
    scale = max(abs(total), 1e-30)
    for side in (1, -1):
        prev = None
        k = side
        while True:
            cur = mode_term(k)
            total += cur
            mag = abs(cur)
            scale = max(scale, mag)
            if mag == 0.0 and prev == 0.0:
                break  # two consecutive true underflows: the tail is gone
            if prev is not None and 0.0 < mag < prev:
                ratio = mag / prev
                tail = mag * ratio / (1.0 - ratio) if ratio < 0.995 else math.inf
                if 10.0 * tail < tail_tol * scale:
                    break
            prev = mag
            k += side
            if abs(k) > _MAX_FOURIER_MODES:
                raise TruncationError(
                    f"Fourier synthesis needs more than {_MAX_FOURIER_MODES} modes"
                )
    return total


def cyl_kernel_fourier(
    s: complex,
    ell: float,
    t: TwistSpec,
    c1: CylCoord,
    c2: CylCoord,
    k_max: int | None = None,
    tail_tol: float = 1e-12,
) -> np.ndarray:
    """Twisted cylinder resolvent kernel via Fourier-mode synthesis.

    Per class j: (1/ell) sum_k e^{i kappa (phi - phi')} v_kappa(s; r, r')
    with kappa = k + theta_j; 2pi windings of the angles enter through the
    twist phase lambda_j^(w - w').
    """
    s = complex(s)
    if not t.is_unitary:
        raise DomainError("Fourier synthesis requires a unitary twist")
    if c1.r == c2.r and c1.phi == c2.phi:
        raise DomainError("Fourier synthesis requires distinct points")
    dphi = c1.phi - c2.phi
    dw = c1.winding - c2.winding
    out = np.empty(len(t.angles), dtype=complex)
    for j, cls in enumerate(t.angles):
        theta = cls.theta

        def mode_term(k: int) -> complex:
            kap = k + theta
            return cmath.exp(1j * kap * dphi) * cyl_mode(s, kap, c1.r, c2.r, ell)

        val = _fourier_synthesis(mode_term, k_max, tail_tol) / ell
        out[j] = cls.eigenvalue**dw * val
    return out


# ---------------------------------------------------------------------------
# Model funnel (Dirichlet boundary at r = 0)
# ---------------------------------------------------------------------------


def log_beta_kappa(s: complex, q: float) -> complex:
    """log of (1/2) Gamma((s + iq + 1)/2) Gamma((s - iq + 1)/2)."""
    return (
        -math.log(2.0)
        + log_gamma(complex((s.real + 1.0) / 2.0, (s.imag + q) / 2.0))
        + log_gamma(complex((s.real + 1.0) / 2.0, (s.imag - q) / 2.0))
    )


def beta_kappa(s: complex, q: float) -> complex:
    """(1/2) Gamma((s + iq + 1)/2) Gamma((s - iq + 1)/2)."""
    return cmath.exp(log_beta_kappa(s, q))


def _v0_profile_scaled(s: complex, q: float, r: float) -> tuple[complex, float]:
    th = math.tanh(r)
    warg = th * th
    if warg > 1.0 - specfun.GUARD_DELTA:
        raise DomainError(
            f"tanh^2 r = {warg} outside the series guard; needs |r| <= "
            f"{R0_PROFILE_MAX:.3f}"
        )
    m, e = specfun.reg_hyp2f1_scaled(
        complex((s.real + 1.0) / 2.0, (s.imag + q) / 2.0),
        complex((s.real + 1.0) / 2.0, (s.imag - q) / 2.0),
        1.5,
        warg,
    )
    lc = _log_cosh(r)
    return th * m * cmath.exp(complex(0.0, -s.imag * lc)), e - s.real * lc


def v0_profile(s: complex, q: float, r: float) -> complex:
    """Dirichlet profile tanh(r) (cosh r)^{-s} F~(.., ..; 3/2; tanh^2 r)."""
    m, e = _v0_profile_scaled(complex(s), q, r)
    return _scaled_to_value(m, e, "funnel boundary profile")


def funnel_mode(s: complex, kappa: float, r: float, r2: float, ell: float) -> complex:
    """Funnel mode beta_kappa(s) v0(s; min) v(s; max) for r, r2 >= 0.

    Vanishes identically at r = 0 (Dirichlet); poles on -(1+2 N0) +- i omega kappa.
    Factors are combined in log scale as for the cylinder mode.
    """
    s = complex(s)
    if r < 0.0 or r2 < 0.0:
        raise DomainError(f"funnel coordinates must satisfy r >= 0, got {r}, {r2}")
    omega = TWO_PI / ell
    q = omega * abs(kappa)  # even in kappa
    lo, hi = min(r, r2), max(r, r2)
    return _assemble_mode(
        log_beta_kappa(s, q), _v0_profile_scaled(s, q, lo), _v_profile_scaled(s, q, hi)
    )


def funnel_kernel(
    s: complex,
    ell: float,
    t: TwistSpec,
    c1: CylCoord,
    c2: CylCoord,
    cfg: ImagesConfig = ImagesConfig(),
) -> np.ndarray:
    """Funnel resolvent kernel by images: R_C(z, z') - R_C(z, reflected z').

    The reflection r -> -r is z -> -conj(z) on the half-plane; the
    reflected term carries the same per-class twist weights.
    """
    if c1.r < 0.0 or c2.r < 0.0:
        raise DomainError("funnel points need r >= 0")
    z = cyl_to_plane(c1, ell)
    w = cyl_to_plane(c2, ell)
    w_refl = cyl_to_plane(CylCoord(-c2.r, c2.phi), ell)
    direct = cyl_kernel_images(s, ell, t, z, w, cfg)
    image = cyl_kernel_images(s, ell, t, z, w_refl, cfg)
    phases = np.array(
        [cls.eigenvalue ** (c1.winding - c2.winding) for cls in t.angles]
    )
    return phases * (direct - image)


def funnel_kernel_fourier(
    s: complex,
    ell: float,
    t: TwistSpec,
    c1: CylCoord,
    c2: CylCoord,
    k_max: int | None = None,
    tail_tol: float = 1e-12,
) -> np.ndarray:
    """Funnel resolvent kernel via the mode functions (same 1/ell prefactor)."""
    s = complex(s)
    if not t.is_unitary:
        raise DomainError("Fourier synthesis requires a unitary twist")
    dphi = c1.phi - c2.phi
    dw = c1.winding - c2.winding
    out = np.empty(len(t.angles), dtype=complex)
    for j, cls in enumerate(t.angles):
        theta = cls.theta

        def mode_term(k: int) -> complex:
            kap = k + theta
            return cmath.exp(1j * kap * dphi) * funnel_mode(s, kap, c1.r, c2.r, ell)

        val = _fourier_synthesis(mode_term, k_max, tail_tol) / ell
        out[j] = cls.eigenvalue**dw * val
    return out


# ---------------------------------------------------------------------------
# Parabolic cylinder (cusp)
# ---------------------------------------------------------------------------


def cusp_mode(s: complex, kappa: float, y: float, y2: float) -> complex:
    """Cusp Fourier mode.

    kappa != 0: sqrt(y y') I_{s-1/2}(|kappa| y_min) K_{s-1/2}(|kappa| y_max);
    kappa == 0: y_min^s y_max^{1-s} / (2s - 1), pole at s = 1/2.
    """
    s = complex(s)
    if y <= 0.0 or y2 <= 0.0:
        raise DomainError(f"cusp coordinates must satisfy y > 0, got {y}, {y2}")
    lo, hi = min(y, y2), max(y, y2)
    if kappa == 0.0:
        if abs(s - 0.5) < 1e-12:
            raise PoleError("cusp zero mode has its pole at s = 1/2")
        return lo**s * hi ** (1.0 - s) / (2.0 * s - 1.0)
    nu = s - 0.5
    ak = abs(kappa)
    scaled = bessel_i(nu, ak * lo, scaled=True) * bessel_k(nu, ak * hi, scaled=True)
    return math.sqrt(y * y2) * scaled * math.exp(-ak * (hi - lo))


def cusp_kernel(
    s: complex,
    t: TwistSpec,
    c1: CylCoord,
    c2: CylCoord,
    k_max: int | None = None,
    tail_tol: float = 1e-12,
) -> np.ndarray:
    """Cusp resolvent kernel via Fourier modes (prefactor 1).

    Per class j: sum_k e^{2 pi i (k+theta_j)(x - x')} u_{2 pi (k+theta_j)}(s; y, y')
    with x = phi/(2 pi), y = e^r.
    """
    s = complex(s)
    if not t.is_unitary:
        raise DomainError("cusp twists must be unitary")
    p1, p2 = cusp_to_plane(c1), cusp_to_plane(c2)
    dx = p1.x - p2.x
    dw = c1.winding - c2.winding
    if p1.y == p2.y and dx == 0.0:
        raise DomainError("cusp synthesis requires distinct points")
    out = np.empty(len(t.angles), dtype=complex)
    for j, cls in enumerate(t.angles):
        theta = cls.theta
        if theta == 0.0 and abs(s - 0.5) < 1e-12:
            raise PoleError("resolvent pole at s = 1/2 for the theta = 0 class")

        def mode_term(k: int) -> complex:
            freq = k + theta
            return cmath.exp(2j * math.pi * freq * dx) * cusp_mode(
                s, TWO_PI * freq, p1.y, p2.y
            )

        val = _fourier_synthesis(mode_term, k_max, tail_tol)
        out[j] = cls.eigenvalue**dw * val
    return out


def cusp_class_images(
    s: complex,
    lam: complex,
    z: HPoint,
    z2: HPoint,
    cfg: ImagesConfig = ImagesConfig(),
) -> complex:
    """Raw cusp image sum sum_k lam^k g_s(sigma(z, z'+k)) for one class.

    The terms decay only polynomially (sigma ~ k^2), so Re s must exceed
    1/2 + MARGIN; the tail is bounded by comparison with the integral.
    """
    if s.real <= 0.5 + MARGIN:
        raise DomainError(f"cusp image sum needs Re s > {0.5 + MARGIN}, got {s.real}")
    total = g_s(s, sigma(z, z2))
    two_sig = 2.0 * s.real - 1.0
    for side in (1, -1):
        k = side
        while True:
            img = HPoint(z2.x + k, z2.y)
            cur = lam**k * g_s(s, sigma(z, img))
            total += cur
            # integral comparison: sum_{j>k} j^{-2 Re s} < k^{1-2 Re s}/(2 Re s - 1)
            if abs(k) > 2 and abs(cur) * abs(k) / two_sig < cfg.tail_tol:
                break
            k += side
            if abs(k) > cfg.max_images:
                raise TruncationError(
                    f"cusp images not below tail_tol={cfg.tail_tol} "
                    f"within {cfg.max_images} images"
                )
    return total


def cusp_kernel_images(
    s: complex,
    t: TwistSpec,
    c1: CylCoord,
    c2: CylCoord,
    cfg: ImagesConfig = ImagesConfig(),
) -> np.ndarray:
    """Cusp resolvent kernel by images, reduced to Re z in [0, 1)."""
    s = complex(s)
    p1, p2 = cusp_to_plane(c1), cusp_to_plane(c2)
    m1, x1 = divmod(p1.x, 1.0)
    m2, x2 = divmod(p2.x, 1.0)
    z = HPoint(x1, p1.y)
    w = HPoint(x2, p2.y)
    out = np.empty(len(t.angles), dtype=complex)
    for j, cls in enumerate(t.angles):
        lam = cls.eigenvalue
        phase = lam ** (int(m1) - int(m2) + c1.winding - c2.winding)
        out[j] = phase * cusp_class_images(s, lam, z, w, cfg)
    return out


# ---------------------------------------------------------------------------
# Twisted lattice sums S_xi and the cylinder H-series
# ---------------------------------------------------------------------------


def _sxi_f(x: float, a: float, b2: float, s: complex) -> complex:
    w = (x + a) * (x + a) + b2
    return cmath.exp(-s * math.log(w))


def _sxi_tail_euler(xi: complex, s: complex, a: float, b2: float, start: int) -> complex:
    """sum_{k >= start} xi^k f(k) by the Euler transform (|xi| = 1, xi != 1)."""
    J = 40
    vals = [_sxi_f(start + j, a, b2, s) for j in range(J + 1)]
    # forward differences in place: after pass j, vals[0] = Delta^j f(start)
    total = 0.0 + 0.0j
    factor = xi**start / (1.0 - xi)
    total += factor * vals[0]
    for j in range(1, J + 1):
        for i in range(J + 1 - j):
            vals[i] = vals[i + 1] - vals[i]
        factor *= xi / (1.0 - xi)
        term = factor * vals[0]
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def _sxi_tail_integral(s: complex, a: float, b: float, start: int) -> complex:
    """sum_{k >= start} f(k) for xi = 1 by Euler-Maclaurin with exact integral."""
    u0 = start + a
    b2 = b * b
    # integral: sum_m binom(-s, m) b^{2m} u0^{1-2s-2m}/(2s+2m-1)
    integral = 0.0 + 0.0j
    binom = 1.0 + 0.0j
    m = 0
    ratio = b2 / (u0 * u0)
    while True:
        integral += binom * b2**m * u0 ** (1.0 - 2.0 * s - 2.0 * m) / (
            2.0 * s + 2.0 * m - 1.0
        )
        binom *= (-s - m) / (m + 1.0)
        m += 1
        if abs(binom) * ratio**m * abs(u0 ** (1.0 - 2.0 * s)) < 1e-20 or m > 300:
            break
    f0 = _sxi_f(start, a, b2, s)
    w = u0 * u0 + b2
    wp = 2.0 * u0
    f1 = -s * cmath.exp(-(s + 1.0) * cmath.log(w)) * wp
    f3 = -8.0 * s * (s + 1.0) * (s + 2.0) * u0**3 * cmath.exp(
        -(s + 3.0) * cmath.log(w)
    ) + 12.0 * s * (s + 1.0) * u0 * cmath.exp(-(s + 2.0) * cmath.log(w))
    return integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0


def s_xi_direct(xi_angle: float, s: complex, a: float, b: float) -> complex:
    """Twisted lattice sum sum_k xi^k (|k+a|^2 + b^2)^{-s}, xi = e^{2 pi i xi_angle}.

    Direct summation with accelerated tails; requires Re s > 1/2 + MARGIN.
    """
    s = complex(s)
    if not (0.0 <= xi_angle < 1.0):
        raise DomainError(f"xi_angle must lie in [0, 1), got {xi_angle}")
    if not b > 0.0:
        raise DomainError(f"b must be positive, got {b}")
    if s.real <= 0.5 + MARGIN:
        raise DomainError(f"direct sum needs Re s > {0.5 + MARGIN}, got {s.real}")
    b2 = b * b
    K = int(max(64.0, 8.0 + abs(a), 8.0 + 3.0 * b, 8.0 + 2.0 * abs(s)))
    xi = cmath.exp(2j * math.pi * xi_angle)
    total = 0.0 + 0.0j
    for k in range(-K, K + 1):
        total += xi**k * _sxi_f(k, a, b2, s)
    if xi_angle == 0.0:
        total += _sxi_tail_integral(s, a, b, K + 1)
        total += _sxi_tail_integral(s, -a, b, K + 1)
    else:
        total += _sxi_tail_euler(xi, s, a, b2, K + 1)
        total += _sxi_tail_euler(xi.conjugate(), s, -a, b2, K + 1)
    return total


def s_xi_continued(
    xi_angle: float,
    s: complex,
    a: float,
    b: float,
    quad: QuadConfig = QuadConfig(),
) -> complex:
    """Meromorphic continuation of S_xi via its Poisson-summation integral.

    S_xi(s; a, b) = sqrt(pi) b^{1-2s} / Gamma(s) * [ I(s) + [xi = 1] Gamma(s - 1/2) ],

    where I(s) integrates e^{-u} u^{s-3/2} against the dual theta sum with
    the zero-frequency term removed.  Valid for all s; for xi = 1 the poles
    sit at s in 1/2 - N0 (from the separated Gamma(s - 1/2) term).
    """
    from ._quad import gauss_legendre_adaptive

    s = complex(s)
    if not (0.0 <= xi_angle < 1.0):
        raise DomainError(f"xi_angle must lie in [0, 1), got {xi_angle}")
    if not b > 0.0:
        raise DomainError(f"b must be positive, got {b}")
    lam = xi_angle
    if lam == 0.0 and specfun._is_nonpositive_integer(s - 0.5) is not None:
        raise PoleError(f"S_1 has a pole at s = {s}")

    pib2 = math.pi * math.pi * b * b
    m_min = 1.0 if lam == 0.0 else min(lam, 1.0 - lam)

    def dual_sum(u: float) -> complex:
        kmax = int(math.sqrt(u * 700.0 / pib2)) + 2
        acc = 0.0 + 0.0j
        for k in range(-kmax, kmax + 1):
            freq = k + lam
            if freq == 0.0:
                continue
            ex = -pib2 * freq * freq / u
            if ex < -700.0:
                continue
            # dual phase is e^{-2 pi i a (k+lam)}: the sign is pinned by the
            # index-shift identity S(s; a+1, b) = xi^{-1} S(s; a, b)
            acc += cmath.exp(complex(ex, -2.0 * math.pi * a * freq))
        return acc

    def integrand(u: float) -> complex:
        return cmath.exp(-u + (s - 1.5) * math.log(u)) * dual_sum(u)

    # upper limit: e^{-U} U^{Re s - 1/2} < 1e-16
    U = 45.0
    while U - max(s.real - 0.5, 0.0) * math.log(U) < 37.0:
        U += 5.0
    u_min = pib2 * m_min * m_min / 700.0
    integral = gauss_legendre_adaptive(
        integrand, u_min, U, quad.tol, max_panels=quad.max_panels
    )
    if lam == 0.0:
        integral += cmath.exp(log_gamma(s - 0.5))
    pref = cmath.exp(
        0.5 * math.log(math.pi) + (1.0 - 2.0 * s) * math.log(b) - log_gamma(s)
    )
    return pref * integral


def h_series_direct(
    s: complex,
    ell: float,
    t: TwistSpec,
    z: HPoint,
    z2: HPoint,
    cfg: ImagesConfig = ImagesConfig(),
) -> np.ndarray:
    """Direct evaluation of H(s; z, z') = sum_{k != 0} lam^k sigma(z, e^{k ell} z')^{-s}.

    Requires Re s above the twist's convergence abscissa plus MARGIN.
    """
    s = complex(s)
    _require_convergence(s, ell, t)
    wc = z2.z
    out = np.empty(len(t.angles), dtype=complex)
    for j, cls in enumerate(t.angles):
        log_lam = cmath.log(cls.eigenvalue)

        def term(k: int) -> complex:
            if k == 0 or abs(k) * ell > 700.0:
                return 0.0 + 0.0j
            img = HPoint.from_complex(math.exp(k * ell) * wc)
            x = k * log_lam - s * math.log(sigma(z, img))
            return cmath.exp(x) if x.real > -745.0 else 0.0 + 0.0j

        out[j] = _two_sided_sum(term, cfg, 0.0 + 0.0j)
    return out

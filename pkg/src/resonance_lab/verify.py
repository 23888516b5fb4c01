"""Cross-oracle verification suite.

Every check pits one computational route against an independent one
(images vs Fourier synthesis, direct sums vs continued integrals, finite
differences vs closed forms) and reports a named pass/fail result.  The
CLI `verify` command runs all of them.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import model_kernels as mk
from . import resonances as rz
from . import scattering as sc
from .free_resolvent import free_kernel
from .geometry import TWO_PI, CylCoord, HPoint, cyl_to_plane, sigma
from .twist import TwistSpec

_TWIST_EXAMPLE = TwistSpec.from_angles([(0.25, 1), (0.5, 1)])  # diag(i, -1)
_S_REF = 2.0 + 0.3j


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def max_workers() -> int:
    """Thread cap from RESONANCE_LAB_THREADS (default: os.cpu_count())."""
    raw = os.environ.get("RESONANCE_LAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, n if n > 0 else (os.cpu_count() or 1))


def _sample_cylinder_pairs(rng, n, r_range=(-2.0, 2.0), min_dr=0.15):
    # near-diagonal evaluation is out of scope; keep radial separation so
    # the mode sums converge at their generic geometric rate
    out = []
    while len(out) < n:
        c1 = CylCoord(rng.uniform(*r_range), rng.uniform(0.0, TWO_PI))
        c2 = CylCoord(rng.uniform(*r_range), rng.uniform(0.0, TWO_PI))
        if abs(c1.r - c2.r) < min_dr:
            continue
        if sigma(cyl_to_plane(c1, 1.0), cyl_to_plane(c2, 1.0)) > 1.05:
            out.append((c1, c2))
    return out


def check_two_representation_cylinder(n_pairs: int = 20, tol: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(101)
    ell, t = 1.0, _TWIST_EXAMPLE
    worst = 0.0
    for c1, c2 in _sample_cylinder_pairs(rng, n_pairs):
        ki = mk.cyl_kernel_images(
            _S_REF, ell, t, cyl_to_plane(c1, ell), cyl_to_plane(c2, ell),
            mk.ImagesConfig(tail_tol=1e-12),
        )
        kf = mk.cyl_kernel_fourier(_S_REF, ell, t, c1, c2)
        worst = max(worst, float(np.max(np.abs(ki - kf) / np.abs(ki))))
    return CheckResult(
        "two_representation_cylinder", worst <= tol, f"max rel err {worst:.3e}"
    )


def check_two_representation_funnel(n_pairs: int = 20, tol: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(102)
    ell, t = 1.0, _TWIST_EXAMPLE
    worst = 0.0
    got = 0
    while got < n_pairs:
        c1 = CylCoord(rng.uniform(0.05, 2.2), rng.uniform(0.0, TWO_PI))
        c2 = CylCoord(rng.uniform(0.05, 2.2), rng.uniform(0.0, TWO_PI))
        if abs(c1.r - c2.r) < 0.15:
            continue
        if sigma(cyl_to_plane(c1, ell), cyl_to_plane(c2, ell)) < 1.05:
            continue
        got += 1
        ki = mk.funnel_kernel(_S_REF, ell, t, c1, c2, mk.ImagesConfig(tail_tol=1e-13))
        kf = mk.funnel_kernel_fourier(_S_REF, ell, t, c1, c2)
        worst = max(worst, float(np.max(np.abs(ki - kf) / np.abs(ki))))
    return CheckResult(
        "two_representation_funnel", worst <= tol, f"max rel err {worst:.3e}"
    )


def check_two_representation_cusp(n_pairs: int = 20, tol: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(103)
    t = _TWIST_EXAMPLE
    worst = 0.0
    got = 0
    while got < n_pairs:
        c1 = CylCoord(rng.uniform(-0.5, 1.2), rng.uniform(0.0, TWO_PI))
        c2 = CylCoord(rng.uniform(-0.5, 1.2), rng.uniform(0.0, TWO_PI))
        if abs(math.exp(c1.r) - math.exp(c2.r)) < 0.15:
            continue
        got += 1
        # cusp image terms decay only like k^(-2 Re s); the absolute tail
        # budget 1e-10 keeps the relative error well under tol
        ki = mk.cusp_kernel_images(
            _S_REF, t, c1, c2, mk.ImagesConfig(max_images=40_000, tail_tol=1e-10)
        )
        kf = mk.cusp_kernel(_S_REF, t, c1, c2)
        worst = max(worst, float(np.max(np.abs(ki - kf) / np.abs(ki))))
    return CheckResult(
        "two_representation_cusp", worst <= tol, f"max rel err {worst:.3e}"
    )


def _ode_residual_cylinder(s, kap, r, r2, ell, h=1e-3):
    om = TWO_PI / ell
    f = lambda rr: mk.cyl_mode(s, kap, rr, r2, ell)
    fp, f0, fm = f(r + h), f(r), f(r - h)
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    d1 = (fp - fm) / (2.0 * h)
    return abs(
        -d2 - math.tanh(r) * d1 - s * (1.0 - s) * f0
        + om * om * kap * kap / math.cosh(r) ** 2 * f0
    )


def _ode_residual_funnel(s, kap, r, r2, ell, h=1e-3):
    om = TWO_PI / ell
    f = lambda rr: mk.funnel_mode(s, kap, rr, r2, ell)
    fp, f0, fm = f(r + h), f(r), f(r - h)
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    d1 = (fp - fm) / (2.0 * h)
    return abs(
        -d2 - math.tanh(r) * d1 - s * (1.0 - s) * f0
        + om * om * kap * kap / math.cosh(r) ** 2 * f0
    )


def check_mode_ode(n_samples: int = 50, tol: float = 1e-4) -> CheckResult:
    rng = np.random.default_rng(104)
    ell = 1.0
    worst = 0.0
    for _ in range(n_samples):
        kap = rng.uniform(-2.0, 2.0)
        r2 = rng.uniform(-1.5, 2.5)
        r = r2 + rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.2)
        worst = max(worst, _ode_residual_cylinder(_S_REF, kap, r, r2, ell))
        rf2 = rng.uniform(0.5, 2.8)
        rf = rf2 + rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.0)
        if rf < 0.02:
            rf = rf2 + 0.4
        worst = max(worst, _ode_residual_funnel(_S_REF, kap, rf, rf2, ell))
    return CheckResult("mode_ode_residual", worst <= tol, f"max residual {worst:.3e}")


def check_sxi_dual(tol: float = 1e-8) -> CheckResult:
    worst = 0.0
    for s in (0.75, 1.5, 2.0 + 2.0j):
        for xia in (0.0, 1.0 / 3.0, 0.5):
            for a, b in ((0.0, 1.0), (0.3, 0.5), (-1.7, 2.5)):
                d = mk.s_xi_direct(xia, s, a, b)
                c = mk.s_xi_continued(xia, s, a, b)
                worst = max(worst, abs(d - c) / max(abs(d), 1e-30))
    return CheckResult("sxi_dual_representation", worst <= tol, f"max rel err {worst:.3e}")


def check_scattering(tol_inv: float = 1e-10, tol_feq: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(105)
    ell = 1.0
    worst_inv = 0.0
    n = 0
    while n < 200:
        s = complex(rng.uniform(-2.0, 3.0), rng.uniform(-3.0, 3.0))
        kap = rng.uniform(-3.0, 3.0)
        try:
            v = sc.scattering_coeff(s, kap, ell) * sc.scattering_coeff(1.0 - s, kap, ell)
        except Exception:
            continue
        if v == 0.0:
            continue
        n += 1
        worst_inv = max(worst_inv, abs(v - 1.0))
    worst_feq = 0.0
    for s in (0.7 + 0.4j, 0.3 - 0.6j, 0.55 + 1.2j, 0.8 + 0.15j, 0.42 - 1.1j):
        for kap in (0.25, 0.5, 1.0, 1.75, 2.5):
            for r, r2 in ((0.5, 1.5), (1.0, 2.0), (2.0, 0.7), (1.3, 1.3), (0.4, 2.6)):
                worst_feq = max(
                    worst_feq, sc.functional_equation_residual(s, kap, r, r2, ell)
                )
    ok = worst_inv <= tol_inv and worst_feq <= tol_feq
    return CheckResult(
        "scattering_identities",
        ok,
        f"inversion {worst_inv:.3e}, functional eq {worst_feq:.3e}",
    )


def check_free_kernel_pde(n_points: int = 30, tol: float = 1e-4) -> CheckResult:
    rng = np.random.default_rng(106)
    s = _S_REF
    z2 = HPoint(0.3, 1.2)
    h = 1e-3
    worst = 0.0
    done = 0
    while done < n_points:
        z = HPoint(rng.uniform(-2.0, 2.0), rng.uniform(0.4, 3.0))
        if sigma(z, z2) < math.cosh(0.25) ** 2:
            continue
        done += 1
        u = lambda x, y: free_kernel(s, HPoint(x, y), z2)
        uxx = (u(z.x + h, z.y) - 2.0 * u(z.x, z.y) + u(z.x - h, z.y)) / (h * h)
        uyy = (u(z.x, z.y + h) - 2.0 * u(z.x, z.y) + u(z.x, z.y - h)) / (h * h)
        resid = abs(-z.y * z.y * (uxx + uyy) - s * (1.0 - s) * u(z.x, z.y))
        worst = max(worst, resid)
    return CheckResult("free_kernel_pde", worst <= tol, f"max residual {worst:.3e}")


def check_kernel_symmetries(tol: float = 1e-8) -> CheckResult:
    rng = np.random.default_rng(107)
    ell, t = 1.0, _TWIST_EXAMPLE
    cfg = mk.ImagesConfig(tail_tol=1e-12)
    worst_eq = 0.0
    worst_sym = 0.0
    for _ in range(10):
        z = HPoint(rng.uniform(-1.0, 1.0), rng.uniform(0.8, 2.0))
        w = HPoint(rng.uniform(-1.0, 1.0), rng.uniform(2.5, 4.0))
        shifted = HPoint.from_complex(math.exp(ell) * z.z)
        for cls in t.angles:
            lam = cls.eigenvalue
            a = mk.cyl_class_images(_S_REF, ell, lam, shifted, w, cfg)
            b = lam * mk.cyl_class_images(_S_REF, ell, lam, z, w, cfg)
            worst_eq = max(worst_eq, abs(a - b))
            c = mk.cyl_class_images(_S_REF, ell, lam, z, w, cfg).conjugate()
            d = mk.cyl_class_images(_S_REF.conjugate(), ell, lam, w, z, cfg)
            worst_sym = max(worst_sym, abs(c - d))
    ok = worst_eq <= tol and worst_sym <= tol
    return CheckResult(
        "kernel_symmetries", ok, f"equivariance {worst_eq:.3e}, conj-symmetry {worst_sym:.3e}"
    )


def check_twist_phase(tol: float = 1e-12) -> CheckResult:
    ell, t = 1.0, _TWIST_EXAMPLE
    c2 = CylCoord(0.8, 1.1)
    worst = 0.0
    for phi in (0.3, 2.0, 5.5):
        base = mk.cyl_kernel_fourier(_S_REF, ell, t, CylCoord(-0.4, phi), c2)
        shifted = mk.cyl_kernel_fourier(_S_REF, ell, t, CylCoord(-0.4, phi + TWO_PI), c2)
        for j, cls in enumerate(t.angles):
            phase = cmath.exp(2j * math.pi * cls.theta)
            worst = max(worst, abs(shifted[j] - phase * base[j]) / abs(base[j]))
    return CheckResult("twist_phase", worst <= tol, f"max rel err {worst:.3e}")


def check_resonance_example(tol: float = 1e-12) -> CheckResult:
    ell = 1.0
    rs = rz.cylinder_resonances(ell, _TWIST_EXAMPLE, 8.0)
    step = math.pi / (2.0 * ell)
    expected: dict[tuple[int, int], int] = {}
    for n in range(0, 9):
        q = -17
        while q * step <= 8.0:
            if q % 4 != 0 and abs(complex(-n, step * q)) < 8.0:
                expected[(n, q)] = 1 if q % 2 else 2
            q += 1
    got: dict[tuple[int, int], int] = {}
    for p in rs:
        key = (round(-p.location.real), round(p.location.imag / step))
        if abs(p.location - complex(-key[0], key[1] * step)) > tol:
            return CheckResult("resonance_example", False, f"off-lattice point {p}")
        got[key] = p.mult
    ok = got == expected
    return CheckResult(
        "resonance_example",
        ok,
        f"{len(got)} lattice points, total mult {sum(got.values())}",
    )


def check_counting(tol_coeff: float = 0.1) -> CheckResult:
    ell = 2.0 * math.pi
    t0 = TwistSpec.trivial()
    rs = rz.cylinder_resonances(ell, t0, 5.0)
    n5 = rz.counting_function(rs, 5.0)
    spec = rz.SurfaceSpec(cylinders=((ell, t0),))
    table = [row for row in rz.census(spec, 400.0, 8) if row[0] >= 100.0]
    coeff, spread = rz.growth_fit(table)
    ok = n5 == 78 and abs(coeff - ell / 2.0) / (ell / 2.0) <= tol_coeff
    return CheckResult(
        "counting_and_growth", ok, f"N(5) = {n5}, growth coeff {coeff:.4f} (ell/2 = {ell/2:.4f})"
    )


ALL_CHECKS = (
    check_two_representation_cylinder,
    check_two_representation_funnel,
    check_two_representation_cusp,
    check_mode_ode,
    check_sxi_dual,
    check_scattering,
    check_free_kernel_pde,
    check_kernel_symmetries,
    check_twist_phase,
    check_resonance_example,
    check_counting,
)


def run_all(parallel: bool = True) -> list[CheckResult]:
    """Run every check; order of results is fixed regardless of scheduling."""
    if parallel and max_workers() > 1:
        with ThreadPoolExecutor(max_workers=max_workers()) as pool:
            return list(pool.map(lambda c: c(), ALL_CHECKS))
    return [c() for c in ALL_CHECKS]

"""Model kernels: images vs Fourier cross-checks, mode functions, lattice sums."""

import cmath
import math

import numpy as np
import pytest

from resonance_lab import free_resolvent as fr
from resonance_lab import model_kernels as mk
from resonance_lab.errors import DomainError, PoleError, TruncationError
from resonance_lab.free_resolvent import g_tail
from resonance_lab.geometry import TWO_PI, CylCoord, HPoint, cyl_to_plane, sigma
from resonance_lab.twist import TwistSpec

S_REF = 2.0 + 0.3j
ELL = 1.0
TWIST = TwistSpec.from_angles([(0.25, 1), (0.5, 1)])  # diag(i, -1)
CFG = mk.ImagesConfig(tail_tol=1e-12)


def sample_pair(rng, r_lo, r_hi, ell, min_sigma=1.05, min_dr=0.15):
    # kernels are off-diagonal objects; near-coincident r slows the mode
    # sum without testing anything new (near-diagonal evaluation is out
    # of scope), so keep a minimum radial separation
    while True:
        c1 = CylCoord(rng.uniform(r_lo, r_hi), rng.uniform(0.0, TWO_PI))
        c2 = CylCoord(rng.uniform(r_lo, r_hi), rng.uniform(0.0, TWO_PI))
        if abs(c1.r - c2.r) < min_dr:
            continue
        if sigma(cyl_to_plane(c1, ell), cyl_to_plane(c2, ell)) > min_sigma:
            return c1, c2


class TestCylinderKernel:
    def test_images_vs_fourier(self):
        rng = np.random.default_rng(51)
        for _ in range(8):
            c1, c2 = sample_pair(rng, -2.0, 2.0, ELL)
            ki = mk.cyl_kernel_images(
                S_REF, ELL, TWIST, cyl_to_plane(c1, ELL), cyl_to_plane(c2, ELL), CFG
            )
            kf = mk.cyl_kernel_fourier(S_REF, ELL, TWIST, c1, c2)
            assert np.max(np.abs(ki - kf) / np.abs(ki)) < 1e-6

    def test_equivariance(self):
        # raw image sums at z and e^ell z differ by the eigenvalue
        rng = np.random.default_rng(52)
        for _ in range(5):
            z = HPoint(rng.uniform(-1, 1), rng.uniform(0.8, 2.0))
            w = HPoint(rng.uniform(-1, 1), rng.uniform(2.5, 4.0))
            shifted = HPoint.from_complex(math.exp(ELL) * z.z)
            for cls in TWIST.angles:
                lam = cls.eigenvalue
                a = mk.cyl_class_images(S_REF, ELL, lam, shifted, w, CFG)
                b = lam * mk.cyl_class_images(S_REF, ELL, lam, z, w, CFG)
                assert abs(a - b) < 1e-8

    def test_conjugate_symmetry(self):
        # K_s(z, z')* = K_{s bar}(z', z) per class (unitary twist)
        z, w = HPoint(0.3, 1.1), HPoint(-0.5, 2.2)
        for cls in TWIST.angles:
            lam = cls.eigenvalue
            a = mk.cyl_class_images(S_REF, ELL, lam, z, w, CFG).conjugate()
            b = mk.cyl_class_images(S_REF.conjugate(), ELL, lam, w, z, CFG)
            assert abs(a - b) < 1e-8

    def test_real_s_hermitian(self):
        z, w = HPoint(0.3, 1.1), HPoint(-0.5, 2.2)
        for cls in TWIST.angles:
            lam = cls.eigenvalue
            a = mk.cyl_class_images(2.5, ELL, lam, z, w, CFG).conjugate()
            b = mk.cyl_class_images(2.5, ELL, lam, w, z, CFG)
            assert abs(a - b) < 1e-9

    def test_fundamental_domain_reduction(self):
        # public kernel is equivariant through the reduction word
        z = HPoint(0.2, 1.4)
        w = HPoint(-0.3, 2.1)
        far = HPoint.from_complex(math.exp(3 * ELL) * z.z)
        base = mk.cyl_kernel_images(S_REF, ELL, TWIST, z, w, CFG)
        moved = mk.cyl_kernel_images(S_REF, ELL, TWIST, far, w, CFG)
        for j, cls in enumerate(TWIST.angles):
            assert abs(moved[j] - cls.eigenvalue**3 * base[j]) < 1e-8

    def test_convergence_abscissa(self):
        with pytest.raises(DomainError):
            mk.cyl_kernel_images(0.05, ELL, TWIST, HPoint(0, 1), HPoint(0, 2), CFG)
        t_mod = TwistSpec.from_angles([(0.0, 1)], moduli=[2.0])
        with pytest.raises(DomainError):
            mk.cyl_kernel_images(1.9, ELL, t_mod, HPoint(0, 1), HPoint(0, 2), CFG)

    def test_non_unitary_twist(self):
        # diagonalizable monodromy with modulus e^0.8: kernel finite and
        # stable under tightening the truncation
        t = TwistSpec.from_angles([(0.25, 1)], moduli=[0.8])
        z, w = HPoint(0.0, 1.0), HPoint(0.3, 1.8)
        a = mk.cyl_kernel_images(1.2, ELL, t, z, w, mk.ImagesConfig(tail_tol=1e-9))
        b = mk.cyl_kernel_images(1.2, ELL, t, z, w, mk.ImagesConfig(tail_tol=1e-13))
        assert np.isfinite(a.view(float)).all()
        assert np.max(np.abs(a - b)) < 1e-9

    def test_truncation_budget_error(self):
        with pytest.raises(TruncationError):
            mk.cyl_kernel_images(
                0.2, ELL, TwistSpec.trivial(), HPoint(0, 1), HPoint(0, 2),
                mk.ImagesConfig(max_images=4, tail_tol=1e-14),
            )

    def test_twist_phase(self):
        c1, c2 = CylCoord(-0.4, 2.0), CylCoord(0.8, 1.1)
        base = mk.cyl_kernel_fourier(S_REF, ELL, TWIST, c1, c2)
        shifted = mk.cyl_kernel_fourier(
            S_REF, ELL, TWIST, CylCoord(-0.4, 2.0 + TWO_PI), c2
        )
        for j, cls in enumerate(TWIST.angles):
            phase = cmath.exp(2j * math.pi * cls.theta)
            assert abs(shifted[j] - phase * base[j]) <= 1e-12 * abs(base[j])

    def test_untwisted_cosine_pairing(self):
        # theta = 0, phi = phi': k and -k mode contributions coincide
        t0 = TwistSpec.trivial()
        r, r2 = 0.6, 1.7
        for k in (1, 2, 5):
            pos = mk.cyl_mode(S_REF, float(k), r, r2, ELL)
            neg = mk.cyl_mode(S_REF, float(-k), r, r2, ELL)
            assert pos == neg

    def test_increase_budget_stability(self):
        # raising k_max by 50% moves the kernel by less than the tail bound
        c1, c2 = CylCoord(0.5, 1.0), CylCoord(1.1, 4.0)
        a = mk.cyl_kernel_fourier(S_REF, ELL, TWIST, c1, c2, k_max=40)
        b = mk.cyl_kernel_fourier(S_REF, ELL, TWIST, c1, c2, k_max=60)
        assert np.max(np.abs(a - b)) < 1e-10
        # same for the image sum: once the adaptive tail bound is met,
        # a larger image budget cannot move the value by more than it
        z, w = cyl_to_plane(c1, ELL), cyl_to_plane(c2, ELL)
        tol = 1e-9
        ia = mk.cyl_kernel_images(S_REF, ELL, TWIST, z, w, mk.ImagesConfig(200, tol))
        ib = mk.cyl_kernel_images(S_REF, ELL, TWIST, z, w, mk.ImagesConfig(300, tol / 1000))
        assert np.max(np.abs(ia - ib)) < tol


class TestCylinderModes:
    def test_ode_residual(self):
        om = TWO_PI / ELL
        h = 1e-3
        rng = np.random.default_rng(53)
        for _ in range(10):
            kap = rng.uniform(-2, 2)
            r2 = rng.uniform(-1.5, 2.5)
            r = r2 + rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.2)
            f = lambda rr: mk.cyl_mode(S_REF, kap, rr, r2, ELL)
            d2 = (f(r + h) - 2 * f(r) + f(r - h)) / h**2
            d1 = (f(r + h) - f(r - h)) / (2 * h)
            resid = (
                -d2
                - math.tanh(r) * d1
                - S_REF * (1 - S_REF) * f(r)
                + om**2 * kap**2 / math.cosh(r) ** 2 * f(r)
            )
            assert abs(resid) < 1e-4

    def test_large_r_asymptotic(self):
        # v_kappa(s; r) ~ 2^s e^{-rs} / Gamma(s + 1/2) at r = 12, within 1%
        from resonance_lab.specfun import log_gamma

        q = TWO_PI / ELL * 1.25
        v = mk.v_profile(S_REF, q, 12.0)
        asym = cmath.exp(S_REF * math.log(2.0) - 12.0 * S_REF - log_gamma(S_REF + 0.5))
        assert abs(v / asym - 1.0) < 0.01

    def test_symmetry_in_arguments(self):
        assert mk.cyl_mode(S_REF, 0.75, 0.4, 1.9, ELL) == mk.cyl_mode(
            S_REF, 0.75, 1.9, 0.4, ELL
        )

    def test_kappa_sign_symmetry(self):
        assert mk.cyl_mode(S_REF, 1.25, 0.3, 1.0, ELL) == mk.cyl_mode(
            S_REF, -1.25, 0.3, 1.0, ELL
        )

    def test_profile_domain_guard(self):
        with pytest.raises(DomainError):
            mk.v_profile(S_REF, 1.0, -4.0)

    def test_high_frequency_underflow_is_zero(self):
        # far above the decay scale the mode is a true zero, not garbage
        v = mk.cyl_mode(S_REF, 400.0, 0.5, 1.5, ELL)
        assert v == 0.0


class TestFunnelKernel:
    def test_dirichlet_boundary(self):
        assert mk.funnel_mode(S_REF, 0.25, 0.0, 1.3, ELL) == 0.0
        assert mk.v0_profile(S_REF, 1.0, 0.0) == 0.0

    def test_images_vs_fourier(self):
        rng = np.random.default_rng(54)
        for _ in range(8):
            c1, c2 = sample_pair(rng, 0.05, 2.2, ELL)
            ki = mk.funnel_kernel(S_REF, ELL, TWIST, c1, c2, mk.ImagesConfig(tail_tol=1e-13))
            kf = mk.funnel_kernel_fourier(S_REF, ELL, TWIST, c1, c2)
            assert np.max(np.abs(ki - kf) / np.abs(ki)) < 1e-6

    def test_near_diagonal_regression(self):
        # slowly converging mode sum (r ~ r'): needs log-scaled profiles
        c1 = CylCoord(1.1776100337538342, 3.1039609370197336)
        c2 = CylCoord(1.2074494672455192, 6.139203243515375)
        ki = mk.funnel_kernel(S_REF, ELL, TWIST, c1, c2, mk.ImagesConfig(tail_tol=1e-13))
        kf = mk.funnel_kernel_fourier(S_REF, ELL, TWIST, c1, c2)
        assert np.max(np.abs(ki - kf) / np.abs(ki)) < 1e-8

    def test_images_difference_structure(self):
        # funnel kernel = cylinder kernel minus reflected cylinder kernel
        c1, c2 = CylCoord(0.8, 1.2), CylCoord(1.4, 3.0)
        direct = mk.cyl_kernel_images(
            S_REF, ELL, TWIST, cyl_to_plane(c1, ELL), cyl_to_plane(c2, ELL), CFG
        )
        refl = mk.cyl_kernel_images(
            S_REF, ELL, TWIST, cyl_to_plane(c1, ELL),
            cyl_to_plane(CylCoord(-c2.r, c2.phi), ELL), CFG,
        )
        fun = mk.funnel_kernel(S_REF, ELL, TWIST, c1, c2, CFG)
        assert np.max(np.abs(fun - (direct - refl))) < 1e-12

    def test_pole_blowup(self):
        # |v~_kappa| grows like 1/eps toward s = -1 + i omega kappa
        kap = 0.25
        s_pole = complex(-1.0, TWO_PI / ELL * kap)
        mags = [
            abs(mk.funnel_mode(s_pole + 10.0**-m, kap, 0.7, 1.6, ELL))
            for m in range(1, 6)
        ]
        assert all(b > 5 * a for a, b in zip(mags[:-1], mags[1:]))

    def test_negative_r_rejected(self):
        with pytest.raises(DomainError):
            mk.funnel_mode(S_REF, 0.5, -0.1, 1.0, ELL)


class TestCuspKernel:
    def test_zero_mode_value(self):
        assert abs(mk.cusp_mode(2.0, 0.0, 1.0, 2.0) - 1.0 / 6.0) < 1e-15

    def test_zero_mode_pole(self):
        with pytest.raises(PoleError):
            mk.cusp_mode(0.5, 0.0, 1.0, 2.0)

    def test_continuity_at_kappa_zero(self):
        u0 = mk.cusp_mode(2.0, 0.0, 1.0, 2.0)
        u_small = mk.cusp_mode(2.0, 1e-4, 1.0, 2.0)
        assert abs(u_small - u0) < 1e-4

    def test_images_vs_fourier(self):
        rng = np.random.default_rng(55)
        cfg = mk.ImagesConfig(max_images=40_000, tail_tol=1e-10)
        done = 0
        while done < 10:
            c1 = CylCoord(rng.uniform(-0.5, 1.2), rng.uniform(0.0, TWO_PI))
            c2 = CylCoord(rng.uniform(-0.5, 1.2), rng.uniform(0.0, TWO_PI))
            if abs(math.exp(c1.r) - math.exp(c2.r)) < 0.15:
                continue
            done += 1
            ki = mk.cusp_kernel_images(3.0 + 0.2j, TWIST, c1, c2, cfg)
            kf = mk.cusp_kernel(3.0 + 0.2j, TWIST, c1, c2)
            assert np.max(np.abs(ki - kf) / np.abs(ki)) < 1e-5

    def test_zero_mode_factor_is_entire(self):
        # (2s-1) u_0(s; y, y') has vanishing d/d(s bar) on a grid near s = 1/2
        h = 1e-4
        fac = lambda s: (2.0 * s - 1.0) * mk.cusp_mode(s, 0.0, 1.3, 2.6)
        for s0 in (0.5 + 1e-3, 0.9 + 0.4j, 0.2 - 0.7j):
            dre = (fac(s0 + h) - fac(s0 - h)) / (2 * h)
            dim = (fac(s0 + 1j * h) - fac(s0 - 1j * h)) / (2 * h)
            assert abs(0.5 * (dre + 1j * dim)) < 1e-6

    def test_resolvent_pole_at_half(self):
        t_with_zero = TwistSpec.from_angles([(0.0, 1), (0.25, 1)])
        with pytest.raises(PoleError):
            mk.cusp_kernel(0.5, t_with_zero, CylCoord(0.0, 1.0), CylCoord(0.5, 2.0))
        # no theta = 0 class: regular at s = 1/2
        v = mk.cusp_kernel(0.5, TWIST, CylCoord(0.0, 1.0), CylCoord(0.5, 2.0))
        assert np.all(np.isfinite(v.view(float)))


class TestSXi:
    def test_closed_form(self):
        closed = (math.pi / 2.0) * (
            1.0 / math.tanh(math.pi) + math.pi / math.sinh(math.pi) ** 2
        )
        assert abs(mk.s_xi_direct(0.0, 2.0, 0.0, 1.0) - closed) < 1e-12
        assert abs(mk.s_xi_continued(0.0, 2.0, 0.0, 1.0) - closed) < 1e-12

    def test_brute_force_oracle(self):
        # plain 2M-term partial sum, Re s large enough for a clean tail
        s = 3.0
        want = sum(
            (abs(k + 0.3) ** 2 + 1.21) ** -s for k in range(-20000, 20001)
        )
        assert abs(mk.s_xi_direct(0.0, s, 0.3, 1.1) - want) < 1e-10

    def test_index_shift(self):
        for xia in (0.25, 0.7):
            xi = cmath.exp(2j * math.pi * xia)
            lhs = mk.s_xi_direct(xia, 1.5, 1.3, 1.0)
            rhs = mk.s_xi_direct(xia, 1.5, 0.3, 1.0) / xi
            assert abs(lhs - rhs) / abs(rhs) < 1e-10

    def test_overlap_agreement(self):
        for s in (0.75, 1.5, 2.0 + 2.0j):
            for xia in (0.0, 1.0 / 3.0, 0.5):
                for a, b in ((0.0, 1.0), (0.3, 0.5), (-1.7, 2.5)):
                    d = mk.s_xi_direct(xia, s, a, b)
                    c = mk.s_xi_continued(xia, s, a, b)
                    assert abs(d - c) / abs(d) < 1e-8

    def test_pole_witness(self):
        v = mk.s_xi_continued(0.0, 0.5 + 1e-4, 0.2, 1.0)
        assert abs(v) > 1e3
        with pytest.raises(PoleError):
            mk.s_xi_continued(0.0, 0.5, 0.2, 1.0)

    def test_nonunit_xi_is_pole_free(self):
        v = mk.s_xi_continued(0.25, 0.5, 0.2, 1.0)
        assert np.isfinite(v.real) and np.isfinite(v.imag)

    def test_direct_domain_guard(self):
        with pytest.raises(DomainError):
            mk.s_xi_direct(0.0, 0.55, 0.0, 1.0)


class TestHSeries:
    def test_untwisted_real_positive(self):
        t0 = TwistSpec.trivial()
        h = mk.h_series_direct(4.0, ELL, t0, HPoint(0.0, 1.0), HPoint(0.3, 1.5), CFG)
        assert abs(h[0].imag) < 1e-14
        assert h[0].real > 0.0

    def test_decomposition_identity(self):
        # kernel = free + (1/4pi) sum_{n<N} Gamma-coeff H(s+n) + twisted g_tail sum
        import resonance_lab.specfun as sf

        big_n = 2
        z, w = HPoint(0.1, 1.2), HPoint(-0.4, 2.0)
        for j, cls in enumerate(TWIST.angles):
            lam = cls.eigenvalue
            lhs = mk.cyl_class_images(S_REF, ELL, lam, z, w, CFG)
            rhs = fr.free_kernel(S_REF, z, w)
            for n in range(big_n):
                coeff = cmath.exp(
                    2.0 * sf.log_gamma(S_REF + n)
                    - math.lgamma(n + 1)
                    - sf.log_gamma(2.0 * S_REF + n)
                ) / (4.0 * math.pi)
                hn = mk.h_series_direct(
                    S_REF + n, ELL, TWIST, z, w, mk.ImagesConfig(tail_tol=1e-13)
                )
                rhs += coeff * hn[j]
            k = 1
            while True:
                t1 = lam**k * g_tail(S_REF, big_n, sigma(z, HPoint.from_complex(math.exp(k * ELL) * w.z)))
                t2 = lam**-k * g_tail(S_REF, big_n, sigma(z, HPoint.from_complex(math.exp(-k * ELL) * w.z)))
                rhs += t1 + t2
                if abs(t1) + abs(t2) < 1e-14:
                    break
                k += 1
            assert abs(lhs - rhs) < 1e-8

    def test_termwise_envelope(self):
        # |H| bounded by the geometric envelope of its term magnitudes
        t0 = TwistSpec.trivial()
        s = 3.0
        z, w = HPoint(0.0, 1.0), HPoint(0.2, 1.1)
        h = mk.h_series_direct(s, ELL, t0, z, w, CFG)
        envelope = 0.0
        for k in range(1, 200):
            for kk in (k, -k):
                envelope += sigma(z, HPoint.from_complex(math.exp(kk * ELL) * w.z)) ** -s
        assert abs(h[0]) <= envelope * (1.0 + 1e-9)

"""The deformed calculus: kernel, operator, intertwiners, translation,
convolution.  Monomial actions are exact oracles; quadrature routes are
checked against them and against Gaussian closed forms."""

import math

import numpy as np
import pytest

from dunkl.core import (
    convolution,
    dual_intertwiner_v,
    dual_intertwiner_v_grid,
    dunkl_kernel,
    dunkl_operator,
    intertwiner_v,
    intertwiner_v_inverse,
    translation,
)
from dunkl.functions import (
    GridFunction,
    KernelFunction,
    PolyFunction,
    PolyGaussian,
    WrappedFunction,
    gaussian,
    monomial_gaussian,
)
from dunkl.quadrature import radial_rule
from dunkl.special import b_coeff
from dunkl.transform import forward

ALPHAS = (-0.4, 0.0, 0.5, 1.5, 2.7)
Z_SET = (0.1, -0.1, 1.0, -1.0, 5.0, -5.0, 10j, -10j, 3 + 4j)


def kernel_half_closed(z):
    """Order-1/2 kernel in elementary functions (half-integer Bessel)."""
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    s = np.sinh(z) / z
    return s + (np.cosh(z) - s) / z


class TestKernel:
    def test_normalized_at_zero(self):
        for a in ALPHAS:
            for mode in ("series", "bochner", "bessel"):
                assert dunkl_kernel(a, 0.0, mode) == pytest.approx(1.0, abs=1e-13)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_mode_agreement(self, alpha):
        for z in Z_SET:
            vals = [dunkl_kernel(alpha, z, m) for m in ("series", "bochner", "bessel")]
            scale = max(abs(v) for v in vals)
            assert max(abs(v - w) for v in vals for w in vals) <= 1e-10 * scale

    def test_half_integer_closed_form(self):
        for z in (0.7, -2.0, 1.5j, 2.0 + 1.0j):
            got = dunkl_kernel(0.5, z)
            want = kernel_half_closed(z)
            assert abs(got - want) <= 1e-12 * abs(want)

    def test_series_radius_error(self):
        with pytest.raises(ValueError, match="bochner"):
            dunkl_kernel(0.5, 100.0, "series")

    def test_bochner_large_argument(self):
        # beyond the series radius the integral representation still works
        got = dunkl_kernel(0.5, 80.0, "bochner")
        want = kernel_half_closed(80.0)
        assert abs(got - want) <= 1e-10 * abs(want)


class TestOperator:
    def test_constant_annihilated(self):
        out = dunkl_operator(0.7, PolyFunction(np.array([4.0])))
        assert np.all(out.coeffs == 0)

    def test_linear(self):
        for a in ALPHAS:
            out = dunkl_operator(a, PolyFunction(np.array([0.0, 1.0])))
            assert out.coeffs[0] == pytest.approx(2.0 * a + 2.0, rel=1e-14)

    def test_monomial_rules(self):
        a = 0.8
        for n in range(1, 12):
            out = dunkl_operator(a, PolyFunction.monomial(n))
            gain = n if n % 2 == 0 else n + 2 * a + 1
            assert out.coeffs[n - 1] == pytest.approx(gain, rel=1e-14)

    @pytest.mark.parametrize("lam", [1.0, 1j, 2j])
    def test_eigenrelation(self, lam):
        a = 0.7
        kf = KernelFunction(a, lam)
        op = dunkl_operator(a, kf)
        grid = np.linspace(-2.0, 2.0, 41)
        vals = np.asarray([kf(float(x)) for x in grid])
        image = np.asarray([op(float(x)) for x in grid])
        assert np.max(np.abs(image - lam * vals)) <= 1e-9 * np.max(np.abs(vals))

    def test_polygaussian_exact(self):
        a = 0.5
        f = gaussian()
        image = dunkl_operator(a, f)
        # even input: reflection term vanishes, image is -2x e^{-x^2}
        x = np.linspace(-2, 2, 11)
        np.testing.assert_allclose(image(x), -2 * x * np.exp(-(x**2)), rtol=1e-14)

    def test_requires_derivative(self):
        with pytest.raises(ValueError):
            dunkl_operator(0.5, WrappedFunction(lambda x: np.exp(-np.asarray(x) ** 2)))


class TestIntertwiner:
    def test_normalization(self):
        assert intertwiner_v(0.9, PolyFunction(np.array([1.0]))).coeffs[0] == pytest.approx(1.0)

    def test_square_diagonal(self):
        for a in (0.0, 0.5, 1.3):
            out = intertwiner_v(a, PolyFunction.monomial(2))
            assert out.coeffs[2] == pytest.approx(1.0 / (2.0 * (a + 1.0)), rel=1e-13)

    def test_exponential_maps_to_kernel(self):
        a, lam = 0.8, 1.1
        f = WrappedFunction(lambda x: np.exp(lam * np.asarray(x)))
        kf = KernelFunction(a, lam)
        for x in (0.4, 1.7, -2.2):
            assert intertwiner_v(a, f, x) == pytest.approx(kf(x), rel=1e-12)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_transmutation_exact_on_polynomials(self, alpha):
        rng = np.random.default_rng(3)
        p = PolyFunction(rng.standard_normal(21))
        lhs = dunkl_operator(alpha, intertwiner_v(alpha, p))
        rhs = intertwiner_v(alpha, p.derivative())
        width = max(len(lhs.coeffs), len(rhs.coeffs))
        lc, rc = np.zeros(width), np.zeros(width)
        lc[: len(lhs.coeffs)] = lhs.coeffs
        rc[: len(rhs.coeffs)] = rhs.coeffs
        assert np.max(np.abs(lc - rc)) <= 1e-12 * np.max(np.abs(rc))


class TestInverseIntertwiner:
    def test_polynomial_roundtrip_exact(self):
        a = 1.3
        rng = np.random.default_rng(5)
        p = PolyFunction(rng.standard_normal(15))
        back = intertwiner_v_inverse(a, intertwiner_v(a, p))
        np.testing.assert_allclose(back.coeffs, p.coeffs, rtol=1e-12, atol=1e-14)

    def test_diagonal(self):
        a = 0.7
        out = intertwiner_v_inverse(a, PolyFunction.monomial(4))
        assert out.coeffs[4] == pytest.approx(b_coeff(4, a) / math.factorial(4), rel=1e-13)

    @pytest.mark.parametrize("alpha", [0.0, 0.49, 1.2])
    def test_kernel_maps_back_to_exponential(self, alpha):
        lam = 1.1
        kf = KernelFunction(alpha, lam)
        for x in (0.9, 1.6, -1.3):
            got = intertwiner_v_inverse(alpha, kf, x)
            assert got == pytest.approx(math.exp(lam * x), rel=1e-5)

    def test_alpha_zero_square_example(self):
        # r = 0 even-part formula applied to x^2 must produce b_2(0)/2! x^2 = 2 x^2
        f = WrappedFunction(lambda x: np.asarray(x, dtype=float) ** 2)
        for x in (0.9, 1.4):
            assert intertwiner_v_inverse(0.0, f, x) == pytest.approx(2.0 * x * x, rel=1e-8)

    def test_grid_function_path(self):
        a, lam = 0.3, 0.9
        kf = KernelFunction(a, lam)
        half = np.linspace(1e-3, 6.0, 480)
        grid = np.concatenate([-half[::-1], half])
        gf = GridFunction(grid, np.real(kf(grid)), smoothness_hint="schwartz")
        got = intertwiner_v_inverse(a, gf, 1.2)
        assert got == pytest.approx(math.exp(lam * 1.2), rel=1e-5)

    def test_generic_hint_rejected(self):
        gf = GridFunction(np.array([-1.0, 1.0]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            intertwiner_v_inverse(0.3, gf, 0.9)

    def test_half_integer_rejected(self):
        with pytest.raises(ValueError):
            intertwiner_v_inverse(0.5, KernelFunction(0.5, 1.0), 1.0)


class TestDualIntertwiner:
    @pytest.mark.parametrize("alpha", [0.0, 0.7, 1.5])
    def test_gaussian_closed_form(self, alpha):
        # tV(e^{-y^2})(x) = Gamma(alpha+1)/sqrt(pi) e^{-x^2}
        f = gaussian()
        for x in (0.0, 1.3, -2.0):
            want = math.gamma(alpha + 1.0) / math.sqrt(math.pi) * math.exp(-x * x)
            assert dual_intertwiner_v(alpha, f, x) == pytest.approx(want, rel=1e-11)

    def test_grid_route_matches_pointwise(self):
        a = 0.7
        f = PolyGaussian(PolyFunction(np.array([1.0, 0.3])), 1.0)
        xs = np.array([0.0, 0.8, 2.1, -1.1])
        grid_vals = dual_intertwiner_v_grid(a, f, xs, u_max=128.0)
        point_vals = np.asarray([dual_intertwiner_v(a, f, float(x)) for x in xs])
        np.testing.assert_allclose(grid_vals, point_vals, rtol=1e-10, atol=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.5])
    def test_duality_pairing(self, alpha):
        # int V(f) g |x|^(2a+1) dx = int f tV(g) dx for f = x^2, g = gaussian
        f = PolyFunction.monomial(2)
        g = gaussian()
        vf = intertwiner_v(alpha, f)
        rule = radial_rule(alpha, 14.0, 128)
        lhs = np.sum(rule.weights * (vf(rule.nodes) + vf(-rule.nodes)) * np.exp(-rule.nodes**2))
        gl_x, gl_w = np.polynomial.legendre.leggauss(200)
        nodes, weights = 14.0 * gl_x, 14.0 * gl_w
        rhs = np.sum(weights * nodes**2 * dual_intertwiner_v_grid(alpha, g, nodes, u_max=400.0))
        closed = math.gamma(alpha + 1.0) / 2.0
        assert lhs == pytest.approx(closed, rel=1e-10)
        assert abs(lhs - rhs) <= 1e-8 * abs(closed)

    def test_dual_transmutation(self):
        # tV(Lambda f) = (tV f)' on f = x exp(-x^2), checked by high-order FD
        a = 0.8
        f = monomial_gaussian(1)
        lf = dunkl_operator(a, f)
        h = 1e-3
        for x in (-1.2, 0.4, 1.9):
            lhs = dual_intertwiner_v(a, lf, x)
            tv = lambda u: dual_intertwiner_v(a, f, u)
            rhs = (8 * (tv(x + h) - tv(x - h)) - (tv(x + 2 * h) - tv(x - 2 * h))) / (12 * h)
            assert lhs == pytest.approx(rhs, rel=1e-6, abs=1e-8)


class TestTranslation:
    def test_at_origin(self):
        a = 0.6
        f = PolyGaussian(PolyFunction(np.array([0.5, 1.0, 0.3])), 1.0)
        for y in (0.9, -1.7):
            assert translation(a, f, 0.0, y) == pytest.approx(f(y), rel=1e-12)

    def test_both_zero_convention(self):
        f = gaussian()
        assert translation(0.5, f, 0.0, 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("alpha", [0.0, 0.6, 1.5])
    def test_product_formula(self, alpha):
        for lam in (1.2, 1.5j):
            kf = KernelFunction(alpha, lam)
            for (x, y) in ((0.7, -1.1), (1.3, 1.3), (-0.4, 2.0)):
                got = translation(alpha, kf, x, y)
                want = kf(x) * kf(y)
                assert abs(got - want) <= 1e-8 * abs(want)

    def test_transform_side_oracle(self, plan_factory):
        # tau_x f(y) = c_a int E(i l x) E(i l y) Ff(l) |l|^(2a+1) dl
        a = 0.5
        plan = plan_factory(a)
        f = gaussian()
        spectrum = forward(plan, plan.sample(f)).values
        x = 0.9
        lam = plan.lambda_nodes
        from dunkl.transform import kernel_unitary

        ker = kernel_unitary(a, lam * x, +1) * kernel_unitary(a, lam * (-x), +1)
        want = plan.c_alpha * np.sum(plan.lambda_weights * ker * spectrum)
        got = translation(a, f, x, -x)
        assert got == pytest.approx(float(np.real(want)), rel=1e-8)


class TestConvolution:
    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.5])
    def test_gaussian_closed_form(self, alpha):
        # e^{-.^2} * e^{-.^2} = Gamma(a+1) 2^{-(a+1)} e^{-x^2/2}
        f = gaussian()
        for x in (0.0, 0.8, -1.5):
            got = convolution(alpha, f, f, x)
            want = math.gamma(alpha + 1.0) * 2.0 ** (-(alpha + 1.0)) * math.exp(-x * x / 2.0)
            assert got == pytest.approx(want, rel=1e-6)

    def test_commutativity(self):
        a = 0.7
        f = gaussian()
        g = PolyGaussian(PolyFunction(np.array([1.0, 0.5])), 1.0)
        for x in (0.0, 0.9, -1.4):
            fg = convolution(a, f, g, x)
            gf = convolution(a, g, f, x)
            assert fg == pytest.approx(gf, rel=1e-8)

    def test_even_input_at_origin_reduces(self):
        a = 0.9
        f = gaussian()
        g = PolyGaussian(PolyFunction(np.array([1.0, 0.0, 1.0])), 1.0)
        rule = radial_rule(a, 14.0, 128)
        direct = np.sum(rule.weights * (f(rule.nodes) * g(rule.nodes) + f(-rule.nodes) * g(-rule.nodes)))
        assert convolution(a, f, g, 0.0) == pytest.approx(float(direct), rel=1e-9)

    def test_transform_identity(self, plan_factory):
        # F(f * g) = F f F g on a reduced plan
        a = 0.5
        plan = plan_factory(a, half_width=10.0, n_x=160, lambda_max=12.0, n_lambda=192, tol=1e-9)
        f = gaussian()
        conv_vals = np.asarray([convolution(a, f, f, float(x)) for x in plan.x_nodes])
        lhs = forward(plan, conv_vals).values
        ff = forward(plan, plan.sample(f)).values
        mask = np.abs(plan.lambda_nodes) <= 8.0
        err = np.max(np.abs(lhs[mask] - ff[mask] ** 2))
        assert err <= 1e-6 * np.max(np.abs(ff[mask] ** 2))

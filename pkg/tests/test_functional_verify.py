import math

import numpy as np
import pytest

from blgauss import (
    GridFunction,
    box_function,
    bump_function,
    direct_extremizers,
    direct_gaussian_check,
    direct_integral_check,
    gaussian_function,
    harmonic_combine,
    integrate,
    make_datum,
    reverse_extremizers,
    reverse_gaussian_check,
    reverse_integral_check,
    solve,
    sup_convolution,
)
from conftest import coordinate_datum, prekopa_leindler_datum, young_flagship

BOX = [-8.0], [8.0]


def grid_gaussian(precision, points=801, center=None):
    p = np.atleast_2d(precision)
    lo = [-8.0] * p.shape[0]
    hi = [8.0] * p.shape[0]
    return GridFunction.from_callable(gaussian_function(p, center), lo, hi, points)


class TestGridFunction:
    def test_rejects_bad_boxes(self):
        with pytest.raises(ValueError):
            GridFunction([0.0], [0.0], np.ones(5))
        with pytest.raises(ValueError):
            GridFunction([0.0, 0.0, 0.0], [1.0, 1.0, 1.0], np.ones((2, 2, 2)))

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            GridFunction([0.0], [1.0], np.array([1.0, -0.1]))
        with pytest.raises(ValueError):
            GridFunction([0.0], [1.0], np.array([1.0, np.nan]))
        with pytest.raises(ValueError):
            GridFunction([0.0], [1.0], np.array([1.0]))
        with pytest.raises(ValueError):
            GridFunction([0.0], [1.0], np.ones((3, 3)))

    def test_from_callable_1d(self):
        gf = GridFunction.from_callable(lambda p: p[..., 0] ** 2, [0.0], [1.0], 5)
        np.testing.assert_allclose(gf.values, np.linspace(0, 1, 5) ** 2)
        assert gf.dim == 1
        assert gf.points_per_axis == (5,)

    def test_from_callable_2d(self):
        gf = GridFunction.from_callable(
            lambda p: p[..., 0] + 2 * p[..., 1], [0.0, 0.0], [1.0, 1.0], 3
        )
        assert gf.dim == 2
        assert gf.values[2, 1] == pytest.approx(1.0 + 2 * 0.5)

    def test_round_trip(self):
        gf = grid_gaussian([[1.0]], points=33)
        back = GridFunction.from_dict(gf.to_dict())
        np.testing.assert_array_equal(back.values, gf.values)
        np.testing.assert_array_equal(back.lo, gf.lo)

    def test_max_boundary_value(self):
        gf = grid_gaussian([[1.0]], points=101)
        assert gf.max_boundary_value() == pytest.approx(math.exp(-32.0), rel=1e-12)

    def test_interpolator_matches_nodes_and_zeroes_outside(self):
        gf = grid_gaussian([[1.0]], points=201)
        itp = gf.interpolator()
        xs = gf.axes()[0]
        np.testing.assert_allclose(itp(xs[:, None]), gf.values, atol=1e-12)
        assert itp(np.array([[9.5]]))[()] == 0.0
        assert itp(np.array([[-100.0]]))[()] == 0.0

    def test_interpolator_clips_negative_overshoot(self):
        # cubic overshoot next to a step must be clipped at zero
        vals = np.zeros(11)
        vals[5] = 1.0
        gf = GridFunction([-1.0], [1.0], vals)
        probe = np.linspace(-1, 1, 401)[:, None]
        assert gf.interpolator()(probe).min() >= 0.0

    def test_interpolator_2d(self):
        gf = GridFunction.from_callable(
            gaussian_function(np.eye(2)), [-8.0, -8.0], [8.0, 8.0], 101
        )
        itp = gf.interpolator()
        v = itp(np.array([[0.5, -0.25]]))[0]
        assert v == pytest.approx(math.exp(-0.5 * (0.25 + 0.0625)), abs=1e-5)
        assert itp(np.array([[8.5, 0.0]]))[0] == 0.0


class TestIntegrate:
    def test_normal_density_1d(self):
        density = lambda p: np.exp(-0.5 * p[..., 0] ** 2) / math.sqrt(2 * math.pi)
        gf = GridFunction.from_callable(density, [-8.0], [8.0], 2001)
        assert integrate(gf) == pytest.approx(1.0, abs=1e-6)

    def test_linear_ramp_exact(self):
        gf = GridFunction([0.0], [1.0], np.linspace(0, 1, 11))
        assert integrate(gf) == pytest.approx(0.5, abs=1e-14)

    def test_gaussian_2d_mass(self):
        P = np.array([[2.0, 0.3], [0.3, 1.0]])
        gf = GridFunction.from_callable(gaussian_function(P), [-8.0, -8.0], [8.0, 8.0], 401)
        expect = 2 * math.pi / math.sqrt(np.linalg.det(P))
        assert integrate(gf) == pytest.approx(expect, rel=1e-6)


class TestBuiltinFunctions:
    def test_gaussian_peak_and_center(self):
        f = gaussian_function([[4.0]], center=[1.5])
        assert f(np.array([[1.5]]))[0] == pytest.approx(1.0)
        assert f(np.array([[2.5]]))[0] == pytest.approx(math.exp(-2.0))

    def test_bump_support(self):
        f = bump_function(radius=2.0)
        assert f(np.array([[0.0]]))[0] == pytest.approx(1.0)
        assert f(np.array([[2.0]]))[0] == 0.0
        assert f(np.array([[1.99]]))[0] > 0.0

    def test_box_indicator(self):
        f = box_function([-1.0], [2.0])
        np.testing.assert_array_equal(
            f(np.array([[-1.5], [0.0], [2.0], [2.5]])), [0.0, 1.0, 1.0, 0.0]
        )


class TestDirectIntegralCheck:
    def test_cauchy_schwarz_equality_case(self):
        # same function in both slots of the two-identical-maps datum: the
        # direct inequality at constant 1 is Cauchy-Schwarz with equality
        d = prekopa_leindler_datum()
        f = grid_gaussian([[1.3]])
        ratio = direct_integral_check(d, [f, f], 1.0, resolution=801)
        assert ratio == pytest.approx(1.0, abs=1e-8)

    def test_cauchy_schwarz_strict_case(self):
        d = prekopa_leindler_datum()
        ratio = direct_integral_check(
            d, [grid_gaussian([[1.0]]), grid_gaussian([[3.0]])], 1.0, resolution=801
        )
        assert ratio < 1.0

    def test_young_extremizers_give_equality(self):
        _, d = young_flagship()
        r = solve(d)
        fs = [grid_gaussian(P) for P in direct_extremizers(d, r.A)]
        ratio = direct_integral_check(d, fs, r.constant, resolution=401)
        assert ratio == pytest.approx(1.0, abs=1e-4)

    def test_matches_sqrt_of_gaussian_ratio(self):
        # for Gaussian inputs the quadrature ratio must equal the square root
        # of the determinant-form ratio; this ties the two oracles together
        _, d = young_flagship()
        r = solve(d)
        Q = [np.array([[0.8]]), np.array([[1.4]]), np.array([[0.6]])]
        quad = direct_integral_check(d, [grid_gaussian(q) for q in Q], r.constant, resolution=401)
        gauss = direct_gaussian_check(d, r.constant, Q)
        assert quad == pytest.approx(math.sqrt(gauss), abs=1e-8)

    def test_rough_functions_stay_dominated(self):
        _, d = young_flagship()
        r = solve(d)
        fs = [
            GridFunction.from_callable(bump_function(radius=2.0), *BOX, 801),
            GridFunction.from_callable(box_function([-1.0], [1.0]), *BOX, 801),
            GridFunction.from_callable(bump_function(radius=1.0, center=[0.5]), *BOX, 801),
        ]
        ratio = direct_integral_check(d, fs, r.constant, resolution=801)
        assert ratio <= 1.0 + 1e-3

    def test_zero_factor_returns_zero_with_warning(self):
        d = prekopa_leindler_datum()
        zero = GridFunction([-8.0], [8.0], np.zeros(11))
        with pytest.warns(UserWarning, match="integrates to zero"):
            ratio = direct_integral_check(d, [grid_gaussian([[1.0]]), zero], 1.0, resolution=101)
        assert ratio == 0.0

    def test_boundary_truncation_warns(self):
        d = prekopa_leindler_datum()
        flat = GridFunction([-8.0], [8.0], np.ones(101))
        with pytest.warns(UserWarning, match="decayed"):
            direct_integral_check(d, [flat, flat], 1.0, resolution=101)

    def test_rejects_high_dimensions(self):
        d = coordinate_datum(3)
        fs = [grid_gaussian([[1.0]], points=11) for _ in range(3)]
        with pytest.raises(ValueError):
            direct_integral_check(d, fs, 1.0, resolution=11)

    def test_rejects_wrong_function_count(self):
        d = prekopa_leindler_datum()
        with pytest.raises(ValueError):
            direct_integral_check(d, [grid_gaussian([[1.0]])], 1.0)


class TestSupConvolution:
    def test_single_identity_factor_reproduces_input(self):
        d = make_datum(1, [1.0], [np.eye(1)])
        f = grid_gaussian([[0.9]])
        env = sup_convolution(d, [f], resolution=201)
        expect = GridFunction.from_callable(gaussian_function([[0.9]]), env.lo, env.hi, 201)
        np.testing.assert_allclose(env.values, expect.values, atol=1e-6)

    def test_gaussian_closure_one_dim_kernel(self):
        _, d = young_flagship()
        P = [np.array([[1.3]]), np.array([[0.7]]), np.array([[2.1]])]
        fs = [grid_gaussian(p) for p in P]
        env = sup_convolution(d, fs, resolution=201)
        A = harmonic_combine(d, P)
        expect = GridFunction.from_callable(gaussian_function(A), env.lo, env.hi, 201)
        assert np.abs(env.values - expect.values).max() <= 5e-3

    def test_gaussian_tuple_centering_agrees_with_pinv(self):
        _, d = young_flagship()
        P = [np.array([[1.3]]), np.array([[0.7]]), np.array([[2.1]])]
        fs = [grid_gaussian(p) for p in P]
        a = sup_convolution(d, fs, resolution=101)
        b = sup_convolution(d, fs, resolution=101, tuple_=P)
        np.testing.assert_allclose(a.values, b.values, atol=5e-3)

    def test_gaussian_closure_two_dim_kernel(self):
        d = make_datum(
            2, [0.5] * 4, [np.eye(2)[:1], np.eye(2)[1:], np.eye(2)[:1], np.eye(2)[1:]]
        )
        P = [np.array([[p]]) for p in (1.0, 2.0, 0.5, 1.5)]
        fs = [grid_gaussian(p, points=401) for p in P]
        env = sup_convolution(d, fs, resolution=61)
        A = harmonic_combine(d, P)
        expect = GridFunction.from_callable(gaussian_function(A), env.lo, env.hi, 61)
        assert np.abs(env.values - expect.values).max() <= 3e-2

    def test_rejects_kernel_dimension_above_two(self):
        d = make_datum(1, [0.25] * 4, [np.eye(1)] * 4)
        fs = [grid_gaussian([[1.0]], points=11)] * 4
        with pytest.raises(ValueError):
            sup_convolution(d, fs, resolution=11)


class TestReverseIntegralCheck:
    def test_young_extremizers_give_equality(self):
        _, d = young_flagship()
        r = solve(d)
        exts, _ = reverse_extremizers(d, r.A)
        fs = [grid_gaussian(P) for P in exts]
        ratio = reverse_integral_check(d, fs, r.constant, resolution=201, tuple_=exts)
        assert ratio == pytest.approx(1.0, abs=2e-3)

    def test_matches_sqrt_of_gaussian_ratio(self):
        _, d = young_flagship()
        r = solve(d)
        Q = [np.array([[0.8]]), np.array([[1.4]]), np.array([[0.6]])]
        quad = reverse_integral_check(
            d, [grid_gaussian(q) for q in Q], r.constant, resolution=201, tuple_=Q
        )
        gauss = reverse_gaussian_check(d, r.constant, Q)
        assert quad == pytest.approx(math.sqrt(gauss), abs=2e-3)

    def test_prekopa_leindler_gaussians(self):
        # reversed inequality on the two-identical-maps datum with constant 1:
        # equal-precision inputs achieve equality, and translation is an exact
        # symmetry so shifted copies still do; mismatched precisions lose
        d = prekopa_leindler_datum()
        centered = [grid_gaussian([[1.0]]), grid_gaussian([[1.0]])]
        assert reverse_integral_check(d, centered, 1.0, resolution=201) == pytest.approx(
            1.0, abs=2e-3
        )
        shifted = [grid_gaussian([[1.0]], center=[1.0]), grid_gaussian([[1.0]], center=[-1.0])]
        assert reverse_integral_check(d, shifted, 1.0, resolution=201) == pytest.approx(
            1.0, abs=2e-3
        )
        mismatched = [grid_gaussian([[1.0]]), grid_gaussian([[3.0]])]
        ratio = reverse_integral_check(d, mismatched, 1.0, resolution=201)
        expect = math.sqrt(reverse_gaussian_check(d, 1.0, [np.eye(1), 3.0 * np.eye(1)]))
        assert ratio == pytest.approx(expect, abs=2e-3)
        assert ratio < 0.99

    def test_zero_input_returns_zero_with_warning(self):
        d = prekopa_leindler_datum()
        zero = GridFunction([-8.0], [8.0], np.zeros(11))
        with pytest.warns(UserWarning, match="integrates to zero"):
            ratio = reverse_integral_check(d, [zero, zero], 1.0, resolution=51)
        assert ratio == 0.0

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discop.errors import ParamError
from discop.norms import (
    bergman_norm_sq_bidisc,
    dirichlet_norm_sq_coeff,
    dirichlet_norm_sq_quad,
    double_integral_functional,
    equivalence_ratio,
    validate_main_theorem_params,
    validate_params,
)
from discop.quadrature import QuadratureSettings
from discop.series import TruncatedPowerSeries
from oracles import (
    PAIRWISE_MONOMIAL_SIGMA1_BETA05,
    V1_QUAD_4X,
    V1_SERIES,
    dirichlet_monomial_sq,
    pairwise_series_oracle,
)

# --- parameter windows -------------------------------------------------------


def test_validate_params_accepts_window_point():
    p = validate_params(1.0, 1.0, 0.5)
    assert p.p_dirichlet == pytest.approx(1.0)
    assert p.q_exponent == pytest.approx(5.0)


def test_validate_params_rejects_beta_above_mean():
    with pytest.raises(ParamError, match="beta"):
        validate_params(1.0, 1.0, 2.0)


def test_validate_params_near_lower_edge():
    p = validate_params(0.0, 0.0, -0.9)
    assert p.p_dirichlet == pytest.approx(1.8)


def test_validate_params_rejects_weight_endpoint():
    with pytest.raises(ParamError, match="sigma"):
        validate_params(-1.0, 0.0, -0.6)
    with pytest.raises(ParamError, match="tau"):
        validate_params(0.0, -1.0, -0.6)


def test_validate_main_window_point():
    p = validate_main_theorem_params(1.0, 0.5)
    assert p.tau == p.sigma == 1.0
    assert p.p_dirichlet == pytest.approx(1.0)


def test_validate_main_rejects_equality():
    with pytest.raises(ParamError, match="strictly"):
        validate_main_theorem_params(1.0, 1.0)


def test_validate_main_negative_beta_ok():
    p = validate_main_theorem_params(0.5, -0.5)
    assert p.p_dirichlet == pytest.approx(2.0)


def test_validate_main_requires_positive_sigma():
    with pytest.raises(ParamError, match="sigma"):
        validate_main_theorem_params(0.0, -0.5)


# --- Dirichlet-type norms ----------------------------------------------------


def test_coeff_norm_constant_is_zero():
    assert dirichlet_norm_sq_coeff(TruncatedPowerSeries([3.0 + 1j]), 1.0).value_sq == 0.0


def test_coeff_norm_linear():
    res = dirichlet_norm_sq_coeff(TruncatedPowerSeries.monomial(1), 1.0)
    assert res.value_sq == pytest.approx(0.5)
    assert res.method == "coefficient"
    assert res.rel_error_estimate == 0.0


def test_coeff_norm_square():
    res = dirichlet_norm_sq_coeff(TruncatedPowerSeries.monomial(2), 1.0)
    assert res.value_sq == pytest.approx(2.0 / 3.0)


def test_coeff_norm_rejects_negative_weight():
    with pytest.raises(ParamError):
        dirichlet_norm_sq_coeff(TruncatedPowerSeries.monomial(1), -0.5)


def test_quad_norm_linear():
    res = dirichlet_norm_sq_quad(TruncatedPowerSeries.monomial(1), 1.0)
    assert res.value_sq == pytest.approx(0.5, abs=1e-10)
    assert res.method == "quadrature"
    assert res.trace is not None


def test_quad_norm_z8_weight_two():
    res = dirichlet_norm_sq_quad(TruncatedPowerSeries.monomial(8), 2.0)
    assert res.value_sq == pytest.approx(dirichlet_monomial_sq(8, 2.0), rel=1e-12)


def test_quad_norm_z8_weight_one_closed_form():
    res = dirichlet_norm_sq_quad(TruncatedPowerSeries.monomial(8), 1.0)
    assert res.value_sq == pytest.approx(64.0 / 72.0, rel=1e-8)


def test_weight_zero_admitted_for_diagnostics():
    s = TruncatedPowerSeries([0.0, 1.0, 0.5])
    coeff = dirichlet_norm_sq_coeff(s, 0.0).value_sq
    quad = dirichlet_norm_sq_quad(s, 0.0).value_sq
    assert coeff > 0
    assert quad == pytest.approx(coeff, rel=1e-10)


def test_quad_norm_constant():
    res = dirichlet_norm_sq_quad(TruncatedPowerSeries([2.0]), 1.0)
    assert res.value_sq <= 1e-14


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
@given(
    coeffs=st.lists(
        st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
        min_size=2,
        max_size=17,
    )
)
def test_route_agreement_on_polynomials(p, coeffs):
    s = TruncatedPowerSeries(coeffs)
    coeff = dirichlet_norm_sq_coeff(s, p).value_sq
    quad = dirichlet_norm_sq_quad(s, p).value_sq
    assert quad == pytest.approx(coeff, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("theta", [np.pi / 7, 1.0, 2.5])
def test_rotation_invariance(theta):
    s = TruncatedPowerSeries([0.3, 1.0, -0.5j, 0.25])
    rotated = TruncatedPowerSeries(
        [c * np.exp(1j * n * theta) for n, c in enumerate(s.coeffs)]
    )
    for p in (0.5, 1.0, 2.0):
        base = dirichlet_norm_sq_coeff(s, p).value_sq
        assert dirichlet_norm_sq_coeff(rotated, p).value_sq == pytest.approx(base, rel=1e-12)
        assert dirichlet_norm_sq_quad(rotated, p).value_sq == pytest.approx(
            dirichlet_norm_sq_quad(s, p).value_sq, rel=1e-12
        )


@given(
    scale=st.complex_numbers(
        min_magnitude=0.01, max_magnitude=10.0, allow_nan=False, allow_infinity=False
    )
)
def test_homogeneity(scale):
    s = TruncatedPowerSeries([0.0, 1.0, 0.5, -0.25j])
    base_c = dirichlet_norm_sq_coeff(s, 1.0).value_sq
    base_q = dirichlet_norm_sq_quad(s, 1.0).value_sq
    scaled = scale * s
    assert dirichlet_norm_sq_coeff(scaled, 1.0).value_sq == pytest.approx(
        abs(scale) ** 2 * base_c, rel=1e-12
    )
    assert dirichlet_norm_sq_quad(scaled, 1.0).value_sq == pytest.approx(
        abs(scale) ** 2 * base_q, rel=1e-12
    )


# --- bidisc Bergman norm -----------------------------------------------------


def test_bergman_constant_one():
    res = bergman_norm_sq_bidisc(lambda z, w: np.ones(np.broadcast(z, w).shape), 1.0)
    assert res.value_sq == pytest.approx(1.0, abs=1e-10)


def test_bergman_product():
    res = bergman_norm_sq_bidisc(lambda z, w: z * w, 1.0)
    assert res.value_sq == pytest.approx(1.0 / 9.0, rel=1e-10)


def test_bergman_difference():
    res = bergman_norm_sq_bidisc(lambda z, w: z - w, 1.0)
    assert res.value_sq == pytest.approx(2.0 / 3.0, rel=1e-10)


# --- pairwise double integral ------------------------------------------------


def test_double_integral_constant_is_zero():
    params = validate_params(1.0, 1.0, 0.5)
    res = double_integral_functional(TruncatedPowerSeries([4.0]), params)
    assert res.value_sq <= 1e-12


def test_double_integral_linear_matches_pinned_oracle():
    params = validate_params(1.0, 1.0, 0.5)
    res = double_integral_functional(TruncatedPowerSeries.monomial(1), params)
    # default rule is coarser than the pinned 4x value; 5e-4 covers the gap
    assert res.value_sq == pytest.approx(V1_QUAD_4X, rel=5e-4)
    assert res.value_sq == pytest.approx(V1_SERIES, rel=5e-4)
    assert res.trace is not None and len(res.trace) >= 2


def test_brute_force_4x_matches_series_oracle():
    from discop.norms import pairwise_difference_integral
    from discop.series import eval_series

    s = TruncatedPowerSeries.monomial(1)
    val = pairwise_difference_integral(lambda z: eval_series(s, z), 1.0, 1.0, 5.0, 128, 512)
    assert val == pytest.approx(V1_QUAD_4X, rel=1e-12)
    assert val == pytest.approx(V1_SERIES, rel=2e-5)


def test_series_oracle_reproduces_frozen_table():
    for n, expected in PAIRWISE_MONOMIAL_SIGMA1_BETA05.items():
        assert pairwise_series_oracle(n, 1.0, 1.0, 0.5) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_double_integral_against_series_oracle(n):
    params = validate_params(1.0, 1.0, 0.5)
    res = double_integral_functional(TruncatedPowerSeries.monomial(n), params)
    assert res.value_sq == pytest.approx(
        PAIRWISE_MONOMIAL_SIGMA1_BETA05[n], rel=5e-3
    )


def test_double_integral_upper_endpoint_converges():
    # beta = (sigma+tau)/2 is allowed; the trace must stabilize even though
    # the series-side oracle is unavailable there
    params = validate_params(1.0, 1.0, 1.0)
    res = double_integral_functional(TruncatedPowerSeries.monomial(1), params)
    assert res.value_sq > 0
    assert res.rel_error_estimate <= 0.05


def test_double_integral_asymmetric_weights():
    params = validate_params(1.0, 0.5, 0.25)
    res = double_integral_functional(TruncatedPowerSeries.monomial(2), params)
    oracle = pairwise_series_oracle(2, 1.0, 0.5, 0.25)
    assert res.value_sq == pytest.approx(oracle, rel=5e-3)


# --- equivalence ratio -------------------------------------------------------


def test_ratio_rotation_invariant():
    params = validate_params(1.0, 1.0, 0.5)
    base = equivalence_ratio(TruncatedPowerSeries.monomial(1), params)
    for theta in (np.pi / 7, 1.0, 2.5):
        rotated = TruncatedPowerSeries([0.0, np.exp(1j * theta)])
        assert equivalence_ratio(rotated, params) == pytest.approx(base, rel=1e-12)


def test_ratio_scale_invariant():
    params = validate_params(1.0, 1.0, 0.5)
    s = TruncatedPowerSeries([0.0, 1.0, 0.25])
    assert equivalence_ratio(3.5j * s, params) == pytest.approx(
        equivalence_ratio(s, params), rel=1e-12
    )


def test_ratio_rejects_constants():
    params = validate_params(1.0, 1.0, 0.5)
    with pytest.raises(ParamError):
        equivalence_ratio(TruncatedPowerSeries([1.0]), params)


def test_ratio_band_over_monomials():
    params = validate_params(1.0, 1.0, 0.5)
    settings = QuadratureSettings()
    ratios = [
        equivalence_ratio(TruncatedPowerSeries.monomial(n), params, settings)
        for n in range(1, 9)
    ]
    assert all(np.isfinite(r) and r > 0 for r in ratios)
    assert max(ratios) / min(ratios) <= 10.0
    oracle_ratios = [
        PAIRWISE_MONOMIAL_SIGMA1_BETA05[n] / dirichlet_monomial_sq(n, 1.0)
        for n in range(1, 9)
    ]
    for got, want in zip(ratios, oracle_ratios):
        assert got == pytest.approx(want, rel=5e-3)


def test_ratio_band_with_mobius_composed_functions():
    from discop.series import coefficients_of
    from discop.symbols import MobiusAuto

    params = validate_params(1.0, 1.0, 0.5)
    mob = MobiusAuto(0.5)
    family = [TruncatedPowerSeries.monomial(n) for n in (1, 2, 3)]
    family += [coefficients_of(lambda z, n=n: mob.value(z) ** n, 48) for n in (1, 2)]
    ratios = []
    for f in family:
        functional = double_integral_functional(f, params)
        denom = dirichlet_norm_sq_coeff(f, params.p_dirichlet).value_sq
        ratio = functional.value_sq / denom
        prev = float(np.real(functional.trace[-2][2])) / denom
        assert abs(ratio - prev) / max(ratio, prev) < 0.02
        ratios.append(ratio)
    assert all(np.isfinite(r) and r > 0 for r in ratios)
    assert max(ratios) / min(ratios) < 10.0

"""Parameter validation, density construction and rank classification."""

import math

import numpy as np
from numpy.testing import assert_allclose

from xfid import sampling
from xfid.errors import ShapeError, ValidationError
from xfid.xstate import (
    Kind,
    RankClass,
    classify_rank,
    coeff_e,
    coeff_f,
    coeff_fprime,
    coeff_g,
    derived_coefficients,
    from_density,
    to_density,
    validate,
    weight_w,
    x_bound,
    y_bound,
)

HALF_PI = math.pi / 2


def test_validate_accepts_and_echoes():
    p = validate(0.7, 0.6, 0.5, 0.001, 0.0001, 1.0, 2.0)
    assert p.theta == 0.7 and p.mu == 1.0 and p.nu == 2.0


def test_validate_rejects_bad_angles_and_bounds():
    for bad in (
        dict(theta=-0.2, phi=0.5, psi=0.5, x=0.0, y=0.0),
        dict(theta=0.5, phi=HALF_PI + 0.2, psi=0.5, x=0.0, y=0.0),
        dict(theta=0.5, phi=0.5, psi=0.5, x=0.5, y=0.0),
        dict(theta=0.5, phi=0.5, psi=0.5, x=0.0, y=0.5),
        dict(theta=float("nan"), phi=0.5, psi=0.5, x=0.0, y=0.0),
    ):
        try:
            validate(**bad)
            assert False, f"expected ValidationError for {bad}"
        except ValidationError:
            pass


def test_validate_slack_at_positivity_edge():
    theta, phi, psi = 0.8, 0.7, 0.6
    cap = float(x_bound(theta, phi, psi))
    validate(theta, phi, psi, cap + 1e-13, 0.0)
    try:
        validate(theta, phi, psi, cap + 1e-9, 0.0)
        assert False, "expected ValidationError just past the cap"
    except ValidationError:
        pass


def test_density_structure():
    p = validate(0.7, 0.6, 0.5, 0.002, 0.001, 0.3, 5.1)
    rho = to_density(p)
    s = math.sin(p.theta) ** 2
    assert_allclose(np.trace(rho).real, 1.0, atol=1e-15)
    assert_allclose(rho[0, 0].real, 1.0 - s, atol=1e-15)
    assert_allclose(rho[0, 3], math.sqrt(p.x) * np.exp(1j * p.mu), atol=1e-15)
    assert_allclose(rho[1, 2], math.sqrt(p.y) * np.exp(1j * p.nu), atol=1e-15)
    # only the diagonal and antidiagonal are populated
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    mask[np.arange(4), ::-1][np.arange(4), np.arange(4)] = False
    zeroed = rho.copy()
    zeroed[np.arange(4), np.arange(4)] = 0
    zeroed[0, 3] = zeroed[3, 0] = zeroed[1, 2] = zeroed[2, 1] = 0
    assert np.all(zeroed == 0)


def test_density_round_trip_all_classes():
    for name in sampling.RANK_CLASS_NAMES:
        arrays = sampling.sample_class_arrays(name, 40, seed=5)
        rho = sampling.as_density(arrays)
        for i in range(0, 40, 7):
            p = sampling.row_params(arrays, i)
            q = from_density(rho[i])
            assert_allclose(to_density(q), rho[i], atol=1e-12)


def test_from_density_rejects_non_x_shape():
    p = validate(0.7, 0.6, 0.5, 0.002, 0.001)
    rho = to_density(p)
    rho[0, 1] = rho[1, 0] = 1e-6
    try:
        from_density(rho)
        assert False, "expected ShapeError"
    except ShapeError:
        pass


def test_classification_of_sampled_classes():
    expected = {
        "rank1": RankClass(1, Kind.SOLE),
        "rank2_first": RankClass(2, Kind.FIRST),
        "rank2_second": RankClass(2, Kind.SECOND),
        "rank2_third": RankClass(2, Kind.THIRD),
        "rank3_first": RankClass(3, Kind.FIRST),
        "rank3_second": RankClass(3, Kind.SECOND),
        "rank4": RankClass(4, Kind.SOLE),
    }
    for name in sampling.RANK_CLASS_NAMES:
        arrays = sampling.sample_class_arrays(name, 30, seed=9)
        for i in range(30):
            got = classify_rank(sampling.row_params(arrays, i))
            assert got == expected[name], f"{name} row {i}: {got}"


def test_classification_golden_states():
    bell = validate(math.pi / 4, HALF_PI, HALF_PI, 0.25, 0.0)
    assert classify_rank(bell) == RankClass(1, Kind.SOLE)
    mixed = validate(math.pi / 3, math.acos(1.0 / math.sqrt(3.0)), math.pi / 4, 0.0, 0.0)
    assert classify_rank(mixed) == RankClass(4, Kind.SOLE)
    inner_mix = validate(HALF_PI, math.pi / 4, 0.0, 0.0, 1.0 / 36.0, 0.0, math.pi)
    assert classify_rank(inner_mix) == RankClass(2, Kind.SECOND)


def test_block_shape_constants_at_quarter_pi():
    phi = psi = math.pi / 4
    assert_allclose(float(coeff_g(phi, psi)), 11.0 / 16.0, atol=1e-12)
    assert_allclose(float(coeff_f(phi, psi)), 1.0 / (2.0 * math.sqrt(2.0)), atol=1e-12)
    assert_allclose(float(coeff_e(phi, psi)), 0.5, atol=1e-12)
    assert_allclose(float(coeff_fprime(phi, psi)), 0.5, atol=1e-12)
    assert_allclose(float(weight_w(phi, psi)), 0.25, atol=1e-12)


def test_derived_coefficients_fractions():
    co = derived_coefficients(math.pi / 3, math.pi / 4, math.pi / 4, 0.01, 0.002)
    assert_allclose(co.H, 3.0 / 64.0, atol=1e-12)
    assert_allclose(co.G, 9.0 / 128.0, atol=1e-12)
    assert_allclose(co.A, 9.0 / 16.0, atol=1e-12)
    assert_allclose(co.B, 7.0 / 16.0, atol=1e-12)
    assert_allclose(co.d, 13.0 / 16.0, atol=1e-12)
    assert_allclose(co.t, 3.0 / 4.0, atol=1e-12)
    assert_allclose(co.u, 7.0 / 16.0, atol=1e-12)
    assert_allclose(co.alpha, 7.0 / 8.0, atol=1e-12)
    assert_allclose(co.beta, -3.0 / 2.0, atol=1e-12)
    assert_allclose(co.k, -1.0 / 8.0, atol=1e-12)
    assert co.a == 0.01
    d = co.to_dict()
    assert set(d) == {"H", "G", "A", "B", "f", "fprime", "p", "q", "e", "r",
                      "d", "t", "u", "g", "alpha", "beta", "k", "a"}


def test_bound_functions_broadcast():
    theta = np.linspace(0.1, 1.4, 7)
    caps_x = x_bound(theta, 0.7, 0.6)
    caps_y = y_bound(theta, 0.7, 0.6)
    assert caps_x.shape == (7,) and caps_y.shape == (7,)
    assert np.all(caps_x >= 0) and np.all(caps_y >= 0)

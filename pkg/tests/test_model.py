import math

import numpy as np
import pytest

from hypwave.errors import CharacteristicSpeed, HypothesisViolation, TauOutOfRange, UnknownModel
from hypwave.model import (
    ModelSpec, PhaseState, builtin_model, derivs_at_zero, jacobian, model_from_config,
    polynomial_model, rhs, tau_thresholds, validate,
)


def test_burgers_fisher_derivatives():
    spec = builtin_model("burgers-fisher", 0.2)
    assert derivs_at_zero(spec) == (0.0, 1.0, 0.0, 1.0, -2.0, 0.0)
    assert spec.g(0.0) == 0.0 and spec.g(1.0) == 0.0


def test_polynomial_evaluation():
    spec = polynomial_model([0, 1, 0.5], [0, 1, -1], 0.2)
    assert spec.f(2.0) == pytest.approx(4.0)
    assert spec.g(0.5) == pytest.approx(0.25)
    assert derivs_at_zero(spec)[0] == 1.0


def test_finite_difference_derivatives_of_callbacks():
    spec = ModelSpec("sine", f=np.sin, f_prime=np.cos, g=lambda u: u * (1 - u),
                     g_prime=lambda u: 1 - 2 * u, tau=0.2)
    d = derivs_at_zero(spec)
    assert d[0] == pytest.approx(1.0, abs=1e-12)
    assert d[1] == pytest.approx(0.0, abs=1e-8)
    assert d[2] == pytest.approx(-1.0, abs=1e-6)
    assert d[4] == pytest.approx(-2.0, abs=1e-8)


def test_thresholds_burgers_fisher():
    tmax, t1, tbar = tau_thresholds(builtin_model("burgers-fisher", 0.2))
    assert (tmax, t1, tbar) == pytest.approx((1.0, 1.0, 1.0), abs=1e-12)


def test_tau_one_closed_forms():
    _, t1, _ = tau_thresholds(polynomial_model([0, 1], [0, 1, -1], 0.2))
    assert t1 == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-15)
    _, t1, _ = tau_thresholds(polynomial_model([0, 0, 3], [0, 2, -2], 0.1))
    assert t1 == pytest.approx(0.5, abs=1e-15)


def test_tau_one_ignores_constant_flux_shift():
    a = tau_thresholds(polynomial_model([0, 1, 0.5], [0, 1, -1], 0.2))[1]
    b = tau_thresholds(polynomial_model([3, 1, 0.5], [0, 1, -1], 0.2))[1]
    assert a == b


def test_validate_admissible_and_out_of_range():
    assert validate(builtin_model("burgers-fisher", 0.2)).admissible
    with pytest.raises(TauOutOfRange) as exc:
        validate(builtin_model("burgers-fisher", 1.5))
    assert exc.value.tau == 1.5 and exc.value.tau_bar == pytest.approx(1.0)
    assert not validate(builtin_model("burgers-fisher", 1.5), strict=False).admissible


def test_validate_rejects_flipped_source():
    with pytest.raises(HypothesisViolation) as exc:
        validate(polynomial_model([0, 1], [0, -1, 1], 0.2))
    assert exc.value.condition == "g'(0)>0"


def test_validate_rejects_non_positive_interior():
    # u (1 - u) (1 - 3u) (1 - 1.5u): right signs at both ends, negative on (1/3, 2/3)
    with pytest.raises(HypothesisViolation) as exc:
        validate(polynomial_model([0, 1], [0, 1, -5.5, 9, -4.5], 0.2))
    assert exc.value.condition == "g>0 on (0,1)"


def test_unknown_model():
    with pytest.raises(UnknownModel):
        builtin_model("kdv", 0.2)


def test_config_round_trip(tmp_path):
    spec = polynomial_model([0, 1, 0.5], [0, 1, -1], 0.3, name="quad")
    path = tmp_path / "m.json"
    import json
    path.write_text(json.dumps(spec.to_config()))
    back = model_from_config(path)
    assert back.to_config() == spec.to_config()
    bf = model_from_config({"name": "burgers-fisher", "tau": 0.4, "f_poly": [9]})
    assert derivs_at_zero(bf) == (0.0, 1.0, 0.0, 1.0, -2.0, 0.0)


def test_rhs_equilibria(bf02):
    m, _ = bf02
    for c in (0.0, 0.3, -1.2):
        for u in (0.0, 1.0):
            r = rhs(PhaseState(u, m.spec.f(u)), c, m)
            assert abs(r.U) <= 1e-12 and abs(r.V) <= 1e-12


def test_rhs_hand_value(bf02):
    m, _ = bf02
    r = rhs(PhaseState(0.1, 0.0), 0.01, m)
    assert r.U == pytest.approx(0.0051801, abs=1e-6)
    assert r.V == pytest.approx(0.0900518, abs=1e-6)


def test_jacobian_at_rest(bf02):
    m, _ = bf02
    np.testing.assert_allclose(jacobian(PhaseState(0, 0), 0.0, m), [[0, -1], [1, 0]], atol=0)
    assert np.trace(jacobian(PhaseState(0, 0), 0.0, m)) == 0.0


def test_characteristic_speed_rejected(bf02):
    m, _ = bf02
    with pytest.raises(CharacteristicSpeed):
        rhs(PhaseState(0.1, 0.0), 1 / math.sqrt(0.2), m)


def test_phase_state_must_be_finite():
    with pytest.raises(ValueError):
        PhaseState(float("nan"), 0.0)

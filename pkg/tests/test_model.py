import math

import numpy as np
import pytest

from rank1spec import errors, model
from rank1spec.model import (
    AffineTail,
    BaseSpectrum,
    PerturbationCoefficients,
    PowerTail,
    TargetSpectrum,
    validate_base,
    validate_coefficients,
    validate_target,
)

from conftest import finite_coeffs


# ---------------------------------------------------------------------------
# base spectrum


def test_lambda_at_pure_tail(zspec):
    assert zspec.lambda_at(7) == 7.0
    assert zspec.lambda_at(-3) == -3.0
    np.testing.assert_array_equal(zspec.lambda_at(np.array([-1, 0, 2])), [-1.0, 0.0, 2.0])


def test_lambda_at_head_overrides_tail():
    spec = validate_base(
        BaseSpectrum("Z", head_offset=-1, head=(-1.2, 0.1, 1.0), tail=AffineTail(1.0, 0.0), gap=0.8)
    )
    assert spec.lambda_at(-1) == -1.2
    assert spec.lambda_at(0) == 0.1
    assert spec.lambda_at(1) == 1.0
    assert spec.lambda_at(2) == 2.0  # back on the affine tail
    assert spec.lambda_at(-2) == -2.0


def test_window_indices_both_index_kinds(zspec):
    np.testing.assert_array_equal(zspec.window_indices(2), [-2, -1, 0, 1, 2])
    nspec = validate_base(BaseSpectrum("N", 1, (), AffineTail(1.0, 0.0), 1.0))
    np.testing.assert_array_equal(nspec.window_indices(3), [1, 2, 3])


def test_validate_base_certifies_smallest_gap():
    spec = validate_base(
        BaseSpectrum("Z", head_offset=0, head=(0.0, 0.7, 2.0), tail=AffineTail(1.0, 0.0), gap=0.5)
    )
    assert spec.gap == pytest.approx(0.7)  # min(0.7, 1.3, slope 1.0, junction 1.0)


def test_validate_base_rejects_nonmonotone_head():
    with pytest.raises(errors.NonMonotone):
        validate_base(BaseSpectrum("Z", 0, (0.0, 1.0, 0.5), AffineTail(1.0, 0.0), 0.1))


def test_validate_base_rejects_bad_junction():
    # head ends at 5.0 but the tail would continue at lambda_2 = 2
    with pytest.raises(errors.NonMonotone):
        validate_base(BaseSpectrum("Z", 0, (0.0, 5.0), AffineTail(1.0, 0.0), 0.5))


def test_validate_base_rejects_overstated_gap():
    with pytest.raises(errors.GapViolation):
        validate_base(BaseSpectrum("Z", 0, (), AffineTail(1.0, 0.0), 1.5))


def test_validate_base_rejects_nonreal_and_bad_kind():
    with pytest.raises(errors.NonReal):
        validate_base(BaseSpectrum("Z", 0, (math.nan,), AffineTail(1.0, 0.0), 0.5))
    with pytest.raises(errors.SchemaError):
        validate_base(BaseSpectrum("Q", 0, (), AffineTail(1.0, 0.0), 1.0))
    with pytest.raises(errors.NonMonotone):
        validate_base(BaseSpectrum("Z", 0, (), AffineTail(-1.0, 0.0), 1.0))


# ---------------------------------------------------------------------------
# coefficients


def test_power_tail_value():
    tail = PowerTail(beta=2.0, scale=3.0, phase=np.pi / 2)
    v = tail.value(2)
    assert abs(v - 3.0 / 4.0 * 1j) < 1e-15


def test_c_is_conj_a_times_b():
    coeffs = PerturbationCoefficients(
        a_head_offset=0,
        a_head=(1.0 + 2.0j,),
        a_tail=None,
        b_head_offset=0,
        b_head=(3.0 - 1.0j,),
        b_tail=None,
    )
    # conj(1+2i) * (3-i) = (1-2i)(3-i) = 1 - 7i
    assert coeffs.c_at(0) == (1.0 - 7.0j)
    assert coeffs.c_at(5) == 0.0


def test_c_tail_sum_bounds_brute_force(zspec):
    coeffs = PerturbationCoefficients(
        a_head_offset=0,
        a_head=(1.0,),
        a_tail=PowerTail(beta=1.0, scale=1.0, phase=0.0),
        b_head_offset=0,
        b_head=(0.5,),
        b_tail=PowerTail(beta=1.5, scale=2.0, phase=0.3),
    )
    for radius in (0, 3, 10, 50):
        idx = np.arange(radius + 1, 100001)
        truth = 2.0 * float(np.sum(np.abs(coeffs.c_at(idx))))  # symmetric |c_n|
        bound = coeffs.c_tail_sum(radius, "Z")
        assert bound >= truth * (1.0 - 1e-12)
        assert bound <= truth * 1.05 + 1e-12  # 64 explicit terms keep it tight


def test_c_tail_sum_covers_head_beyond_radius(zspec):
    coeffs = finite_coeffs({5: 0.25, -7: 0.5})
    assert coeffs.c_tail_sum(7, "Z") == 0.0
    assert coeffs.c_tail_sum(6, "Z") == pytest.approx(0.5)
    assert coeffs.c_tail_sum(3, "Z") == pytest.approx(0.75)


def test_partition_by_exact_zero(zspec):
    coeffs = finite_coeffs({1: 0.2, 3: -0.1})
    i0, i1 = coeffs.partition(np.arange(0, 5))
    np.testing.assert_array_equal(i0, [0, 2, 4])
    np.testing.assert_array_equal(i1, [1, 3])


def test_validate_rejects_non_square_summable_tail(zspec):
    coeffs = PerturbationCoefficients(
        a_head_offset=0,
        a_head=(1.0,),
        a_tail=PowerTail(beta=0.5, scale=1.0, phase=0.0),
        b_head_offset=0,
        b_head=(1.0,),
        b_tail=None,
    )
    with pytest.raises(errors.NonSummable):
        validate_coefficients(coeffs, zspec)


def test_validate_rejects_tail_without_index_zero_cover(zspec):
    coeffs = PerturbationCoefficients(
        a_head_offset=2,
        a_head=(1.0,),
        a_tail=PowerTail(beta=2.0, scale=1.0, phase=0.0),
        b_head_offset=2,
        b_head=(1.0,),
        b_tail=None,
    )
    with pytest.raises(errors.IndexMismatch):
        validate_coefficients(coeffs, zspec)


def test_validate_rejects_degenerate_explicit_index(zspec):
    coeffs = PerturbationCoefficients(
        a_head_offset=0,
        a_head=(1.0, 0.0, 1.0),
        a_tail=None,
        b_head_offset=0,
        b_head=(0.5, 0.0, 0.5),
        b_tail=None,
    )
    with pytest.raises(errors.DegenerateIndex):
        validate_coefficients(coeffs, zspec)


def test_validate_accepts_finite_zero_tail_instance(zspec):
    coeffs = finite_coeffs({0: 0.1j, 4: -0.2})
    assert validate_coefficients(coeffs, zspec) is coeffs


# ---------------------------------------------------------------------------
# targets


def test_target_defaults_to_lambda(zspec):
    target = TargetSpectrum(nu_head_offset=0, nu_head=(0.25 + 0.0j,))
    assert validate_target(target, zspec) is target
    assert target.nu_at(0, zspec) == 0.25
    assert target.nu_at(9, zspec) == 9.0


# ---------------------------------------------------------------------------
# JSON round-trips


def test_base_json_roundtrip(zspec):
    doc = model.base_to_json(zspec)
    back = model.base_from_json(doc)
    assert back == zspec


def test_coefficients_json_roundtrip():
    coeffs = PerturbationCoefficients(
        a_head_offset=-1,
        a_head=(1.0 + 0.5j, 2.0),
        a_tail=PowerTail(1.5, 0.3, 0.1),
        b_head_offset=-1,
        b_head=(0.0, 1.0j),
        b_tail=None,
    )
    back = model.coefficients_from_json(model.coefficients_to_json(coeffs))
    assert back == coeffs


def test_target_json_roundtrip():
    target = TargetSpectrum(0, (0.25 + 0.1j, 1.5))
    back = model.target_from_json(model.target_to_json(target))
    assert back == target


def test_json_rejects_unknown_and_missing_fields(zspec):
    doc = model.base_to_json(zspec)
    doc["surprise"] = 1
    with pytest.raises(errors.SchemaError):
        model.base_from_json(doc)
    doc = model.base_to_json(zspec)
    del doc["gap"]
    with pytest.raises(errors.SchemaError):
        model.base_from_json(doc)


def test_json_rejects_malformed_complex():
    doc = {
        "a_head": {"offset": 0, "values": [[1.0]]},
        "a_tail": "zero",
        "b_head": {"offset": 0, "values": []},
        "b_tail": "zero",
    }
    with pytest.raises(errors.SchemaError):
        model.coefficients_from_json(doc)


def test_dump_json_deterministic_and_atomic(tmp_path, zspec):
    doc = model.base_to_json(zspec)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    model.dump_json(doc, p1)
    model.dump_json(doc, p2)
    assert p1.read_bytes() == p2.read_bytes()
    leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert not leftovers

import json

import pytest

from diffmod import serial
from diffmod.dmcore import RingContext, koszul, truncate
from diffmod.exactla import PrimeField, Rationals
from diffmod.harness import deg0_scorpion, fixtures_by_name, scorpion
from diffmod.homology import homology_summary
from diffmod.structure import FlagOrder


def test_module_round_trip(qq, fp):
    for field in (qq, fp):
        module = scorpion(field)
        data = serial.module_to_json(module)
        assert serial.module_from_json(data) == module


def test_module_json_shape(qq):
    data = serial.module_to_json(deg0_scorpion(qq))
    assert data["field"] == "QQ"
    assert data["diff_degree"] == [0, 0]
    assert data["generators"][1] == {"shift": [1, 0], "cap": [None, None]}
    # entries are 1-based and sparse; coefficients are strings over QQ
    assert {"row": 2, "col": 4, "coeff": "-1"} in data["entries"]
    assert len(data["entries"]) == 5
    text = json.dumps(data)
    assert "null" in text  # infinite caps on the wire


def test_prime_field_coefficients_are_integers(fp):
    data = serial.module_to_json(scorpion(fp))
    coeffs = {e["coeff"] for e in data["entries"]}
    assert all(isinstance(c, int) and 0 <= c < fp.p for c in coeffs)


def test_capped_module_round_trip(qq):
    module = truncate(deg0_scorpion(qq), 0, 0, "above")
    assert serial.module_from_json(serial.module_to_json(module)) == module


def test_omitted_entries_are_zero(qq):
    data = {
        "d": 1,
        "field": "QQ",
        "diff_degree": [0],
        "generators": [{"shift": [0], "cap": [None]}, {"shift": [1], "cap": [None]}],
        "entries": [{"row": 1, "col": 2, "coeff": "1/1"}],
    }
    module = serial.module_from_json(data)
    assert module.coeffs[1][0] == qq.zero
    assert module.coeffs[0][1] == qq.one


def test_entry_out_of_range_rejected():
    data = {
        "d": 1, "field": "QQ", "diff_degree": [0],
        "generators": [{"shift": [0], "cap": [None]}],
        "entries": [{"row": 2, "col": 1, "coeff": "1"}],
    }
    with pytest.raises(ValueError):
        serial.module_from_json(data)


def test_complex_round_trip(qq):
    complex_ = koszul(RingContext(d=3, field=qq), [0, 1, 2])
    data = serial.complex_to_json(complex_)
    assert serial.complex_from_json(data) == complex_


def test_flag_and_provenance_round_trip(qq):
    order = FlagOrder((0, 1, 1, 2))
    assert serial.flag_from_json(serial.flag_to_json(order)) == order
    provenance = fixtures_by_name(qq)["minimized-scorpion"].provenance
    data = serial.provenance_to_json(provenance)
    assert data["steps"] == [{"row": 1, "col": 4}]
    assert serial.provenance_from_json(data) == provenance


def test_summary_serialization(qq):
    summary = homology_summary(deg0_scorpion(qq))
    data = serial.summary_to_json(summary)
    assert data["finite_length"] is True
    assert data["total_length"] == 1
    assert data["support_box"] == {"low": [0, 0], "high": [0, 0]}
    assert data["cells"] == [
        {"intervals": [[0, 0], [0, 0]], "dimension": 1, "lattice_count": 1}
    ]


def test_field_specs():
    assert serial.field_from_json("QQ") == Rationals()
    assert serial.field_from_json({"Fp": 101}) == PrimeField(101)
    assert serial.field_to_json(PrimeField(101)) == {"Fp": 101}
    with pytest.raises(ValueError):
        serial.field_from_json({"GF": 4})


def test_coerce_field_round_trip(qq, fp):
    module = deg0_scorpion(qq)
    over_fp = serial.coerce_field(module, fp)
    assert over_fp.ring.field == fp
    assert serial.coerce_field(over_fp, qq) == module


def test_canonical_text_is_deterministic(fp):
    a = serial.module_to_text(scorpion(fp))
    b = serial.module_to_text(scorpion(fp))
    assert a == b

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rieszlab import InstanceError, parse_instance
from rieszlab.instance import dump_instance, format_rational
from rieszlab.sampling import random_instance

MINIMAL = {
    "dimension": 2,
    "weights": ["1/1", "1/1"],
    "expectationPartition": [[0, 1]],
    "algebraAtoms": [[0, 1]],
}


def parse(obj):
    return parse_instance(json.dumps(obj))


def error_for(obj):
    with pytest.raises(InstanceError) as exc:
        parse(obj)
    return exc.value


def test_minimal():
    inst = parse(MINIMAL)
    assert inst.dimension == 2
    assert inst.weights == (1, 1)
    assert inst.options.theta == 2 and inst.options.depth == 10 and not inst.options.oracle


def test_overlapping_blocks():
    err = error_for({**MINIMAL, "expectationPartition": [[0, 1], [1]]})
    assert err.pointer == "/expectationPartition"


def test_zero_weight():
    err = error_for({**MINIMAL, "weights": ["0/1", "1/1"]})
    assert "weights must be strictly positive" in str(err)
    assert err.pointer == "/weights/0"


@pytest.mark.parametrize(
    "change, pointer",
    [
        ({"extra": 1}, "/extra"),
        ({"weights": [0.5, "1/1"]}, "/weights/0"),
        ({"weights": ["1/1"]}, "/weights"),
        ({"dimension": 0}, "/dimension"),
        ({"algebraAtoms": [[0], [1]], "expectationPartition": [[0], [1]], "charge": ["1/1"]}, "/charge"),
        ({"algebraAtoms": [[0, 1]], "expectationPartition": [[0], [1]]}, "/algebraAtoms"),
        ({"options": {"theta": "1/1"}}, "/options/theta"),
        ({"options": {"depth": 0}}, "/options/depth"),
        ({"options": {"speed": 1}}, "/options/speed"),
        ({"functional": {"type": "sparse"}}, "/functional/type"),
        ({"functional": {"type": "matrix", "rows": [["1/1", "0/1"]]}}, "/functional/rows"),
        ({"density": ["1/0", "1/1"]}, "/density/0"),
    ],
)
def test_pointed_errors(change, pointer):
    assert error_for({**MINIMAL, **change}).pointer == pointer


def test_malformed_json():
    with pytest.raises(InstanceError, match="malformed JSON"):
        parse_instance(b"{not json")
    with pytest.raises(InstanceError):
        parse_instance(b"[1, 2]")
    with pytest.raises(InstanceError, match="missing field"):
        parse_instance(b"{}")


def test_missing_payloads():
    inst = parse(MINIMAL)
    with pytest.raises(InstanceError):
        inst.component_charge()
    with pytest.raises(InstanceError):
        inst.strong_functional()


def test_digest_tracks_bytes():
    a = parse_instance(json.dumps(MINIMAL))
    b = parse_instance(json.dumps(MINIMAL, indent=1))
    assert a.to_json() == b.to_json() and a.digest != b.digest


@given(st.fractions(max_denominator=10**6))
def test_rational_text_round_trip(x):
    assert Fraction(format_rational(x)) == x


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_dump_parse_round_trip(seed):
    import random

    inst = parse(random_instance(random.Random(seed)))
    again = parse_instance(dump_instance(inst))
    assert again.to_json() == inst.to_json()
    assert again.component_charge().atom_values == inst.component_charge().atom_values

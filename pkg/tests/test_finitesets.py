import pytest
from hypothesis import given
from hypothesis import strategies as st

from canimm.finitesets import (
    FiniteSet,
    SetPrefix,
    decode_finite_set,
    encode_finite_set,
    subset_of_string,
)


def test_canonical_code_examples():
    assert encode_finite_set([]).code == 0
    assert encode_finite_set([0, 2]).code == 5
    assert decode_finite_set(8).elements == (3,)
    assert decode_finite_set(6).elements == (1, 2)


@given(st.sets(st.integers(min_value=0, max_value=200)))
def test_code_roundtrip(elements):
    fs = encode_finite_set(elements)
    assert set(fs.elements) == elements
    assert decode_finite_set(fs.code).code == fs.code


@given(st.integers(min_value=0, max_value=1 << 64))
def test_decode_encode_identity_on_codes(code):
    assert encode_finite_set(decode_finite_set(code).elements).code == code


def test_max_of_empty_set_is_undefined():
    with pytest.raises(ValueError):
        FiniteSet(0).max_value()


def test_characteristic_string_has_length_max_plus_one():
    assert FiniteSet(0).characteristic_string() == ""
    fs = encode_finite_set([0, 3])
    assert fs.characteristic_string() == "1001"


def test_subset_of_string_semantics():
    fs = encode_finite_set([1, 3])
    assert subset_of_string(fs, "0101")
    assert not subset_of_string(fs, "010")  # element beyond the string
    assert not subset_of_string(fs, "0100")
    assert subset_of_string(encode_finite_set([]), "")


def test_set_prefix_bits_roundtrip():
    p = SetPrefix.from_bits("01101")
    assert p.members() == (1, 2, 4)
    assert p.bits == "01101"
    assert SetPrefix.from_members([1, 2, 4], 5) == p
    assert p.complement_members() == (0, 3)
    assert 2 in p and 0 not in p and 99 not in p


def test_set_prefix_rejects_overflow():
    with pytest.raises(ValueError):
        SetPrefix(0b100, 2)

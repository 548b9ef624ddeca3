import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapaudit.idcodec import (
    MAX_VALUE,
    InvalidDigit,
    MalformedFullname,
    Overflow,
    RecordId,
    RecordKind,
    UnknownPrefix,
    decode_base36,
    encode_base36,
    parse_fullname,
)

# int(s, 36) is the independent conversion oracle for valid lowercase input.


def test_decode_earliest_comment_id():
    assert decode_base36("2") == 2


def test_decode_two_digit():
    assert decode_base36("zz") == 35 * 36 + 35 == 1295


def test_decode_highest_comment_id_matches_oracle():
    s = "djml18j"
    assert int(s, 36) == 29_484_960_643
    assert decode_base36(s) == 29_484_960_643


@pytest.mark.parametrize("bad", ["", "ab!", "a b", "ABC", "Zz", "a-b"])
def test_decode_rejects_invalid_digits(bad):
    with pytest.raises(InvalidDigit):
        decode_base36(bad)


def test_decode_rejects_overlong():
    with pytest.raises(Overflow):
        decode_base36("1" * 13)


def test_encode_zero():
    assert encode_base36(0) == "0"


def test_encode_inverse_of_decode():
    assert encode_base36(1295) == "zz"


def test_encode_first_submission_roundtrip():
    v = 9_970_002
    s = encode_base36(v)
    assert decode_base36(s) == v
    assert int(s, 36) == v


def test_encode_rejects_out_of_range():
    with pytest.raises(Overflow):
        encode_base36(-1)
    with pytest.raises(Overflow):
        encode_base36(MAX_VALUE + 1)


def test_leading_zeros_decode_but_never_encode():
    assert decode_base36("0z") == decode_base36("z") == 35
    assert encode_base36(35) == "z"


def test_parse_fullname_comment():
    rid = parse_fullname("t1_2")
    assert rid == RecordId(RecordKind.COMMENT, 2)


def test_parse_fullname_submission():
    rid = parse_fullname("t3_zz")
    assert rid == RecordId(RecordKind.SUBMISSION, 1295)


def test_parse_fullname_unknown_prefix():
    with pytest.raises(UnknownPrefix):
        parse_fullname("t5_abc")


@pytest.mark.parametrize("bad", ["abc", "t1_", "_abc", ""])
def test_parse_fullname_malformed(bad):
    with pytest.raises(MalformedFullname):
        parse_fullname(bad)


def test_record_id_bounds():
    with pytest.raises(Overflow):
        RecordId(RecordKind.COMMENT, MAX_VALUE + 1)
    with pytest.raises(Overflow):
        RecordId(RecordKind.COMMENT, -1)


def test_record_id_fullname_roundtrip():
    rid = RecordId(RecordKind.SUBMISSION, 9_970_002)
    assert parse_fullname(rid.fullname) == rid


@given(st.integers(min_value=0, max_value=MAX_VALUE))
@settings(max_examples=300, deadline=None)
def test_roundtrip_property(v):
    assert decode_base36(encode_base36(v)) == v


@given(st.integers(min_value=0, max_value=MAX_VALUE))
@settings(max_examples=200, deadline=None)
def test_encode_matches_oracle(v):
    assert int(encode_base36(v), 36) == v


@given(st.integers(min_value=0, max_value=MAX_VALUE), st.integers(min_value=0, max_value=MAX_VALUE))
@settings(max_examples=200, deadline=None)
def test_encoding_monotone_under_length_lex_order(a, b):
    ea, eb = encode_base36(a), encode_base36(b)
    assert (a < b) == ((len(ea), ea) < (len(eb), eb)) or a == b

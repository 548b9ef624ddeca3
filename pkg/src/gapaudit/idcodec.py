"""Base-36 codec for sequential record identifiers.

Every downstream analysis does arithmetic on integer ID positions; this
module is the only place identifier strings are interpreted. Identifiers
are lowercase base-36 ("0"-"9", "a"-"z"), at most 12 digits, which caps
values at 36**12 - 1 and keeps everything inside a signed 64-bit integer.
Type-prefixed fullnames ("t1_..." for comments, "t3_..." for submissions)
carry the record kind.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

MAX_DIGITS = 12
MAX_VALUE = 36**MAX_DIGITS - 1

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"
_DIGIT_VALUE = {c: i for i, c in enumerate(_ALPHABET)}


class CodecError(ValueError):
    """Base class for identifier parsing failures."""


class InvalidDigit(CodecError):
    """Identifier contains a character outside [0-9a-z] (or is empty)."""


class Overflow(CodecError):
    """Value does not fit in the 12-digit base-36 ceiling."""


class UnknownPrefix(CodecError):
    """Fullname prefix is not a comment (t1) or submission (t3)."""


class MalformedFullname(CodecError):
    """Fullname lacks the underscore separator or has an empty suffix."""


class RecordKind(enum.Enum):
    COMMENT = "comment"
    SUBMISSION = "submission"


_PREFIX_TO_KIND = {"t1": RecordKind.COMMENT, "t3": RecordKind.SUBMISSION}
KIND_TO_PREFIX = {RecordKind.COMMENT: "t1", RecordKind.SUBMISSION: "t3"}


@dataclass(frozen=True, slots=True)
class RecordId:
    """A typed position in one of the two sequential ID spaces."""

    kind: RecordKind
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value <= MAX_VALUE:
            raise Overflow(f"id value {self.value} outside [0, {MAX_VALUE}]")

    @property
    def base36(self) -> str:
        return encode_base36(self.value)

    @property
    def fullname(self) -> str:
        return f"{KIND_TO_PREFIX[self.kind]}_{encode_base36(self.value)}"


def decode_base36(s: str) -> int:
    """Decode a lowercase base-36 string to its integer value.

    Uppercase input is rejected rather than folded: the corpora audited
    here are lowercase-only, so case anomalies indicate corruption.

    Raises InvalidDigit for characters outside [0-9a-z] (or empty input),
    Overflow for strings longer than 12 digits.
    """
    if not s:
        raise InvalidDigit("empty identifier")
    if len(s) > MAX_DIGITS:
        raise Overflow(f"identifier {s!r} longer than {MAX_DIGITS} digits")
    value = 0
    for c in s:
        d = _DIGIT_VALUE.get(c)
        if d is None:
            raise InvalidDigit(f"invalid base-36 digit {c!r} in {s!r}")
        value = value * 36 + d
    return value


def encode_base36(v: int) -> str:
    """Encode an integer as canonical lowercase base-36 (no leading zeros)."""
    if not 0 <= v <= MAX_VALUE:
        raise Overflow(f"value {v} outside [0, {MAX_VALUE}]")
    if v == 0:
        return "0"
    digits = []
    while v:
        v, d = divmod(v, 36)
        digits.append(_ALPHABET[d])
    return "".join(reversed(digits))


def parse_fullname(s: str) -> RecordId:
    """Parse a type-prefixed fullname ("t1_abc", "t3_xyz") into a RecordId.

    Raises MalformedFullname when the underscore or suffix is missing,
    UnknownPrefix for any type other than t1/t3.
    """
    prefix, sep, suffix = s.partition("_")
    if not sep or not suffix or not prefix:
        raise MalformedFullname(f"not a fullname: {s!r}")
    kind = _PREFIX_TO_KIND.get(prefix)
    if kind is None:
        raise UnknownPrefix(f"unsupported fullname prefix {prefix!r} in {s!r}")
    return RecordId(kind, decode_base36(suffix))

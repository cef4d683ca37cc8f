"""Bit-exact 12-byte wire codec for temperature messages.

Layout (big-endian): magic "HK", version 0x01, level, period index as a
32-bit unsigned integer, R, G, B, and an XOR checksum over the preceding
eleven bytes. The color travels in the payload so a display never needs
palette knowledge.
"""

from __future__ import annotations

import struct

from .engine import FIVE_LEVEL_PHRASES, TemperatureMessage

MAGIC = b"HK"
VERSION = 1
PAYLOAD_LEN = 12
LEVEL_LIMIT = 8  # wire alphabet: levels 0..7
PERIOD_LIMIT = 1 << 32

_STRUCT = struct.Struct(">2sBBI3BB")


class CodecError(ValueError):
    """Base class for encode/decode failures."""


class PayloadLengthError(CodecError):
    pass


class MagicError(CodecError):
    pass


class VersionError(CodecError):
    pass


class ChecksumError(CodecError):
    pass


class LevelRangeError(CodecError):
    pass


def xor_checksum(data: bytes) -> int:
    """XOR of all bytes; detects every single-bit flip."""
    acc = 0
    for b in data:
        acc ^= b
    return acc


def encode(message: TemperatureMessage) -> bytes:
    """Encode a message into its 12-byte payload."""
    if not 0 <= message.level < LEVEL_LIMIT:
        raise LevelRangeError(f"level {message.level} outside wire range 0..7")
    if not 0 <= message.period_index < PERIOD_LIMIT:
        raise CodecError("period_index does not fit an unsigned 32-bit field")
    r, g, b = message.color
    if any(not 0 <= c <= 255 for c in (r, g, b)):
        raise CodecError(f"invalid RGB triple: {message.color!r}")
    body = _STRUCT.pack(
        MAGIC, VERSION, message.level, message.period_index, r, g, b, 0
    )[:-1]
    return body + bytes([xor_checksum(body)])


def _phrase_for(level: int, level_count: int) -> str:
    if level_count == len(FIVE_LEVEL_PHRASES) and level < level_count:
        return FIVE_LEVEL_PHRASES[level]
    return f"level {level} of {level_count}"


def decode(data: bytes, level_count: int = 5) -> TemperatureMessage:
    """Decode a payload, reconstructing the phrase for the given alphabet
    size (the payload itself does not carry the level count).

    Raises a CodecError subclass on bad length, magic, version, checksum,
    or an out-of-range level; never anything else.
    """
    if len(data) != PAYLOAD_LEN:
        raise PayloadLengthError(f"expected {PAYLOAD_LEN} bytes, got {len(data)}")
    magic, version, level, period_index, r, g, b, checksum = _STRUCT.unpack(data)
    if magic != MAGIC:
        raise MagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise VersionError(f"unsupported version {version}")
    if checksum != xor_checksum(data[:-1]):
        raise ChecksumError("checksum mismatch")
    if level >= LEVEL_LIMIT:
        raise LevelRangeError(f"level {level} outside wire range 0..7")
    return TemperatureMessage(
        period_index=period_index,
        level=level,
        color=(r, g, b),
        phrase=_phrase_for(level, level_count),
    )


def payload_hex(data: bytes) -> str:
    """Lowercase space-separated hex dump, the form used in logs."""
    return data.hex(" ")

"""Canonical byte encodings shared by hashing and wire serialization.

Field elements are fixed-width big-endian (width set by the modulus, 32
bytes at the default 256-bit modulus). Exponents are minimal big-endian
with a 2-byte length prefix. Identities and digests are exactly 20 bytes.

XOR between mixed operands acts on 20-byte canonical forms: identities are
zero-padded at construction, exponents are zero-padded up to 20 bytes or
hashed down to 20 when wider, and passwords are always hashed to 20 bytes.
"""

import hashlib

HASH_BYTES = 20
HASH_BITS = HASH_BYTES * 8


def field_width(modulus):
    """Bytes needed for one field element under this modulus."""
    return (modulus.bit_length() + 7) // 8


def fe_bytes(value, modulus):
    if not 0 <= value < modulus:
        raise ValueError(f"field element {value} out of range for modulus")
    return value.to_bytes(field_width(modulus), "big")


def exp_bytes(value):
    """Exponent as minimal big-endian bytes behind a 2-byte length prefix."""
    if value < 0:
        raise ValueError("exponents are non-negative")
    raw = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "big")
    if len(raw) > 0xFFFF:
        raise ValueError("exponent too wide to serialize")
    return len(raw).to_bytes(2, "big") + raw


def identity(text):
    """Canonical 20-byte identity: UTF-8 payload zero-padded to 20 bytes."""
    payload = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    if len(payload) > HASH_BYTES:
        raise ValueError(f"identity payload exceeds {HASH_BYTES} bytes")
    return payload.ljust(HASH_BYTES, b"\x00")


def exp20(value):
    """Exponent reduced to a 20-byte canonical XOR operand."""
    raw = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "big")
    if len(raw) > HASH_BYTES:
        return hashlib.sha1(raw).digest()
    return raw.rjust(HASH_BYTES, b"\x00")


def pw20(password):
    """Password string reduced to a 20-byte canonical XOR operand."""
    return hashlib.sha1(password.encode("utf-8")).digest()


def xor20(a, b):
    if len(a) != HASH_BYTES or len(b) != HASH_BYTES:
        raise ValueError("XOR operands must be 20-byte canonical forms")
    return bytes(x ^ y for x, y in zip(a, b))


def as_degree(digest):
    """Read a 20-byte value as a big-endian integer Chebyshev degree."""
    return int.from_bytes(digest, "big")

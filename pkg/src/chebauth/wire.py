"""Bit-exact framing of the three authentication messages.

One type byte of framing (excluded from cost accounting) followed by a
fixed-width big-endian concatenation of the fields in message order:

  0x01 LoginRequest  {C1, C2, M_i}   payload 32 + 20 + 20 = 72 bytes
  0x02 AgtResponse   {C3, Auth_s}    payload 32 + 20      = 52 bytes
  0x03 EvConfirm     {C4, Auth_u}    payload 20 + 20      = 40 bytes

at the default 256-bit modulus and 160-bit hash; the payloads total
576 + 416 + 320 = 1312 bits.
"""

from .encoding import HASH_BYTES, fe_bytes, field_width
from .protocol import AgtResponse, EvConfirm, LoginRequest

MSG_LOGIN_REQUEST = 0x01
MSG_AGT_RESPONSE = 0x02
MSG_EV_CONFIRM = 0x03


class WireError(ValueError):
    pass


class TruncatedFrame(WireError):
    pass


class UnknownType(WireError):
    pass


class FieldRangeError(WireError):
    """A decoded field element is >= the modulus."""


def encode(msg, modulus):
    if isinstance(msg, LoginRequest):
        return bytes([MSG_LOGIN_REQUEST]) + fe_bytes(msg.c1, modulus) + msg.c2 + msg.m_i
    if isinstance(msg, AgtResponse):
        return bytes([MSG_AGT_RESPONSE]) + fe_bytes(msg.c3, modulus) + msg.auth_s
    if isinstance(msg, EvConfirm):
        return bytes([MSG_EV_CONFIRM]) + msg.c4 + msg.auth_u
    raise WireError(f"not a protocol message: {type(msg).__name__}")


def _take_fe(payload, offset, modulus):
    fw = field_width(modulus)
    value = int.from_bytes(payload[offset: offset + fw], "big")
    if value >= modulus:
        raise FieldRangeError("field element out of range")
    return value, offset + fw


def decode(frame, modulus):
    """Exact inverse of encode for valid frames."""
    if len(frame) < 1:
        raise TruncatedFrame("empty frame")
    msg_type, payload = frame[0], frame[1:]
    fw = field_width(modulus)
    expected = {
        MSG_LOGIN_REQUEST: fw + 2 * HASH_BYTES,
        MSG_AGT_RESPONSE: fw + HASH_BYTES,
        MSG_EV_CONFIRM: 2 * HASH_BYTES,
    }.get(msg_type)
    if expected is None:
        raise UnknownType(f"unknown message type 0x{msg_type:02x}")
    if len(payload) != expected:
        raise TruncatedFrame(f"expected {expected} payload bytes, got {len(payload)}")
    if msg_type == MSG_LOGIN_REQUEST:
        c1, off = _take_fe(payload, 0, modulus)
        return LoginRequest(c1, payload[off: off + HASH_BYTES], payload[off + HASH_BYTES:])
    if msg_type == MSG_AGT_RESPONSE:
        c3, off = _take_fe(payload, 0, modulus)
        return AgtResponse(c3, payload[off:])
    return EvConfirm(payload[:HASH_BYTES], payload[HASH_BYTES:])


def message_bits(modulus_bits=256, hash_bits=160):
    """Paper-comparable payload sizes in bits, keyed by message name."""
    return {
        "LoginRequest": modulus_bits + 2 * hash_bits,
        "AgtResponse": modulus_bits + hash_bits,
        "EvConfirm": 2 * hash_bits,
    }


def session_cost_bits(modulus_bits=256, hash_bits=160):
    """Total public-channel bits per session: 2*|field| + 5*|digest|."""
    return sum(message_bits(modulus_bits, hash_bits).values())

import random

import pytest

from chebauth import wire
from chebauth.protocol import AgtResponse, EvConfirm, LoginRequest

N64 = 13468081934599448201  # 64-bit prime (from a seeded certificate)
N_DEFAULT_BITS = 256


def random_messages(rng, modulus, count):
    out = []
    for _ in range(count):
        kind = rng.randrange(3)
        fe = rng.randrange(0, modulus)
        d1 = rng.randbytes(20)
        d2 = rng.randbytes(20)
        if kind == 0:
            out.append(LoginRequest(fe, d1, d2))
        elif kind == 1:
            out.append(AgtResponse(fe, d1))
        else:
            out.append(EvConfirm(d1, d2))
    return out


def test_round_trip_random_messages():
    rng = random.Random(0)
    for msg in random_messages(rng, N64, 200):
        assert wire.decode(wire.encode(msg, N64), N64) == msg


def test_payload_lengths_at_default_sizes():
    modulus = (1 << 256) - 189  # any 256-bit odd value sets the field width
    rng = random.Random(1)
    login = LoginRequest(rng.randrange(modulus), rng.randbytes(20), rng.randbytes(20))
    resp = AgtResponse(rng.randrange(modulus), rng.randbytes(20))
    confirm = EvConfirm(rng.randbytes(20), rng.randbytes(20))
    assert len(wire.encode(login, modulus)) == 1 + 72
    assert len(wire.encode(resp, modulus)) == 1 + 52
    assert len(wire.encode(confirm, modulus)) == 1 + 40


def test_truncated_frame_rejected():
    frame = wire.encode(LoginRequest(5, bytes(20), bytes(20)), N64)
    with pytest.raises(wire.TruncatedFrame):
        wire.decode(frame[:-1], N64)
    with pytest.raises(wire.TruncatedFrame):
        wire.decode(b"", N64)


def test_unknown_type_rejected():
    with pytest.raises(wire.UnknownType):
        wire.decode(b"\x09" + bytes(72), N64)


def test_field_out_of_range_rejected():
    frame = bytearray(wire.encode(LoginRequest(5, bytes(20), bytes(20)), N64))
    frame[1:9] = (N64 + 1).to_bytes(8, "big") if N64 + 1 < 1 << 64 else b"\xff" * 8
    with pytest.raises(wire.FieldRangeError):
        wire.decode(bytes(frame), N64)


def test_encode_injective_on_samples():
    rng = random.Random(2)
    msgs = random_messages(rng, N64, 300)
    frames = {wire.encode(m, N64) for m in msgs}
    assert len(frames) == len(set(map(repr, msgs)))


def test_message_bits_default_configuration():
    bits = wire.message_bits()
    assert bits == {"LoginRequest": 576, "AgtResponse": 416, "EvConfirm": 320}
    assert wire.session_cost_bits() == 1312


def test_session_cost_formula_other_configurations():
    # 2 * modulus_bits + 5 * hash_bits
    assert wire.session_cost_bits(128, 160) == 2 * 128 + 5 * 160
    assert wire.session_cost_bits(64, 160) == 928
    assert wire.session_cost_bits(256, 256) == 2 * 256 + 5 * 256


def test_non_message_rejected():
    with pytest.raises(wire.WireError):
        wire.encode(object(), N64)

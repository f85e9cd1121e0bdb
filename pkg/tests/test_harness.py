import random

import pytest

from chebauth import wire
from chebauth.cheb import OracleRangeError
from chebauth.encoding import identity
from chebauth.harness import (
    Drop,
    FlipBit,
    ImpersonateAgt,
    ImpersonateEv,
    InMemoryTransport,
    LoopbackStreamTransport,
    Replay,
    build_deployment,
    load_scenarios,
    offline_guess_experiment,
    outcome_row,
    run_honest,
    run_scenario_file,
    run_with_adversary,
    write_outcome_csv,
)
from chebauth.protocol import agt_register


def test_honest_run_agrees_and_has_three_frames(toy_deployment):
    outcome = run_honest(toy_deployment, 1)
    assert outcome.success
    assert outcome.sk_ev == outcome.sk_agt
    assert len(outcome.transcript.entries) == 3
    indices = [i for _, _, i in outcome.transcript.entries]
    assert indices == [0, 1, 2]


def test_honest_run_is_byte_deterministic(toy_deployment):
    a = run_honest(toy_deployment, 5)
    b = run_honest(toy_deployment, 5)
    assert a.transcript.frames() == b.transcript.frames()
    assert a.sk_ev == b.sk_ev


def test_different_seeds_differ(toy_deployment):
    assert run_honest(toy_deployment, 1).sk_ev != run_honest(toy_deployment, 2).sk_ev


def test_honest_op_counts(toy_deployment):
    outcome = run_honest(toy_deployment, 1)
    assert (outcome.ev_counter.chebyshev, outcome.ev_counter.hashes) == (5, 7)
    assert (outcome.agt_counter.chebyshev, outcome.agt_counter.hashes) == (2, 5)


def test_flip_in_response_rejected_at_auth_s(toy_deployment):
    outcome = run_with_adversary(toy_deployment, 3, [FlipBit(1, 100)])
    assert not outcome.success
    assert outcome.failure[0] == "EV"
    assert outcome.failure[1] in ("Auth_s", "decode")
    assert outcome.sk_agt is None


def test_flip_in_login_rejected_at_c2(toy_deployment):
    # bit 200 lands inside C2 at a 64-bit modulus (type byte + 8-byte C1)
    outcome = run_with_adversary(toy_deployment, 3, [FlipBit(0, 200)])
    assert outcome.failure == ("AGT", "C2")
    assert outcome.sk_ev is None and outcome.sk_agt is None


def test_replay_confirm_rejected_at_auth_u(toy_deployment):
    prior = run_honest(toy_deployment, 50)
    outcome = run_with_adversary(toy_deployment, 51, [Replay(2, prior.transcript)])
    assert outcome.failure == ("AGT", "Auth_u")
    assert outcome.sk_agt is None


def test_replayed_login_elicits_response_but_session_fails(toy_deployment):
    # without timestamps the AGT answers a replayed login (wasted work),
    # but the live EV holds a fresh r_1 and rejects the response
    prior = run_honest(toy_deployment, 60)
    outcome = run_with_adversary(toy_deployment, 61, [Replay(0, prior.transcript)])
    assert outcome.failure == ("EV", "Auth_s")
    assert outcome.sk_ev is None and outcome.sk_agt is None


def test_drop_stalls_without_keys(toy_deployment):
    outcome = run_with_adversary(toy_deployment, 9, [Drop(1)])
    assert outcome.failure == ("transport", "drop:1")
    assert outcome.sk_ev is None and outcome.sk_agt is None


def test_impersonate_agt_rejected_by_ev(toy_deployment):
    impostor = agt_register(
        identity("AGT-evil"), toy_deployment.ta, toy_deployment.params, random.Random(77)
    )
    outcome = run_with_adversary(toy_deployment, 10, [ImpersonateAgt(impostor)])
    assert outcome.failure == ("EV", "Auth_s")


def test_impersonate_ev_rejected_locally(toy_deployment):
    outcome = run_with_adversary(toy_deployment, 11, [ImpersonateEv()])
    assert outcome.failure == ("EV", "I0")
    assert len(outcome.transcript.entries) == 0  # no message ever emitted


def test_no_agreement_on_different_keys(toy_deployment):
    # safety: no adversarial run ends with both keys present but unequal
    for seed in range(30):
        for actions in ([FlipBit(0, seed % 384)], [FlipBit(1, seed % 224)],
                        [FlipBit(2, seed % 320)]):
            outcome = run_with_adversary(toy_deployment, seed, actions)
            if outcome.sk_ev is not None and outcome.sk_agt is not None:
                assert outcome.sk_ev == outcome.sk_agt


# ---------------------------------------------------------------------------
# transports

def test_in_memory_transport_fifo():
    t = InMemoryTransport()
    t.send(b"one")
    t.send(b"two")
    assert t.recv() == b"one" and t.recv() == b"two"


def test_loopback_stream_preserves_frame_boundaries(toy_deployment):
    outcome = run_honest(toy_deployment, 1)
    t = LoopbackStreamTransport()
    for frame in outcome.transcript.frames():
        t.send(frame)
    for frame in outcome.transcript.frames():
        assert t.recv() == frame


# ---------------------------------------------------------------------------
# offline guessing

@pytest.fixture(scope="module")
def tiny_deployment():
    # modulus small enough for the brute-force oracle
    from chebauth.cheb import gen_modulus

    cert = gen_modulus(20, 0, random.Random(15))
    return build_deployment(15, bits=20, certificate=cert, password="hunter2")


def test_offline_guessing_needs_the_identity(tiny_deployment):
    transcripts = [run_honest(tiny_deployment, s).transcript for s in range(3)]
    report = offline_guess_experiment(
        tiny_deployment, transcripts, ["letmein", "hunter2", "password"], max_n=50_000
    )
    by_pw = {row["password"]: row for row in report}
    assert by_pw["hunter2"]["confirmed_with_id"]
    assert not by_pw["letmein"]["confirmed_with_id"]
    assert not any(row["confirmed_without_id"] for row in report)
    assert all(row["oracle_calls"] > 0 for row in report)


def test_offline_guessing_empty_dictionary(tiny_deployment):
    assert offline_guess_experiment(tiny_deployment, [], []) == []


def test_offline_guessing_rejects_large_modulus(toy_deployment):
    with pytest.raises(OracleRangeError):
        offline_guess_experiment(toy_deployment, [], ["pw"])


# ---------------------------------------------------------------------------
# scenario files

SCENARIO_TEXT = """\
# three scenarios
scenario honest seed 1
passthrough

scenario flip-response seed 2
flip 1 100

scenario replay-confirm seed 3
replay 2 1

scenario stolen-card seed 4
impersonate-ev
"""


def test_scenario_file_round_trip(tmp_path, toy_deployment):
    path = tmp_path / "attacks.scn"
    path.write_text(SCENARIO_TEXT)
    scenarios = load_scenarios(path)
    assert [s.name for s in scenarios] == [
        "honest", "flip-response", "replay-confirm", "stolen-card"
    ]
    rows = run_scenario_file(path, toy_deployment)
    by_name = {row["scenario"]: row for row in rows}
    assert by_name["honest"]["result"] == "success"
    assert by_name["flip-response"]["result"] == "reject"
    assert by_name["replay-confirm"]["failing_check"] == "Auth_u"
    assert by_name["stolen-card"]["failing_check"] == "I0"


def test_scenario_parse_errors(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("flip 0 1\n")
    with pytest.raises(ValueError):
        load_scenarios(bad)
    bad.write_text("scenario x seed 1\nwarp 9\n")
    with pytest.raises(ValueError):
        load_scenarios(bad)


def test_outcome_csv_round_trips(tmp_path, toy_deployment):
    import csv
    import io

    rows = [outcome_row("honest", run_honest(toy_deployment, 1))]
    buf = io.StringIO()
    write_outcome_csv(rows, buf)
    parsed = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert parsed[0]["scenario"] == "honest"
    assert parsed[0]["result"] == "success"
    assert parsed[0]["ev_cheb"] == "5"
    assert parsed[0]["agt_hash_online"] == "5"
    assert parsed[0]["agt_hash_total"] == "6"

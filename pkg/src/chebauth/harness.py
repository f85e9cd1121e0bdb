"""Deterministic simulation of honest and adversarial protocol sessions.

A session runs over an in-memory transport; a Dolev-Yao-style adversary can
flip bits, replay frames from earlier transcripts, drop frames, or stand in
for a party (wrong aggregator key, stolen smartcard without the password).
Outcomes record which party rejected and at which verification check, so
each attack-resistance claim is individually testable.

Scenario definitions load from a line-oriented text format and outcomes
serialize to CSV rows.
"""

import csv
import io
import random
from dataclasses import dataclass, field

from . import wire
from .cheb import OracleRangeError, cheb_eval, dlog_bruteforce
from .encoding import as_degree, identity, pw20, xor20
from .protocol import (
    AGT_CACHED_HASHES,
    AuthError,
    EvConfirm,
    LoginRequest,
    AgtResponse,
    OpCounter,
    agt_confirm,
    agt_handle_login,
    agt_register,
    digest160,
    ev_handle_response,
    ev_login,
    ev_register,
    ta_setup,
)


# ---------------------------------------------------------------------------
# adversary actions

@dataclass(frozen=True)
class PassThrough:
    pass


@dataclass(frozen=True)
class FlipBit:
    msg_index: int
    bit_index: int


@dataclass(frozen=True)
class Replay:
    msg_index: int
    transcript: "Transcript"


@dataclass(frozen=True)
class Drop:
    msg_index: int


@dataclass(frozen=True)
class ImpersonateAgt:
    agt: object  # an AgtState with the wrong key material


@dataclass(frozen=True)
class ImpersonateEv:
    guessed_password: str = "wrong-guess"


# ---------------------------------------------------------------------------
# transcripts and outcomes

@dataclass
class Transcript:
    entries: list = field(default_factory=list)  # (direction, frame, index)

    def append(self, direction, frame):
        self.entries.append((direction, frame, len(self.entries)))

    def frames(self):
        return [frame for _, frame, _ in self.entries]


@dataclass
class SessionOutcome:
    sk_ev: bytes | None
    sk_agt: bytes | None
    transcript: Transcript
    ev_counter: OpCounter
    agt_counter: OpCounter
    failure: tuple | None = None  # (party, check)

    @property
    def success(self):
        return self.failure is None and self.sk_ev is not None and self.sk_agt is not None


# ---------------------------------------------------------------------------
# transports

class InMemoryTransport:
    """Synchronous frame queue; the default transport."""

    def __init__(self):
        self._queue = []

    def send(self, frame):
        self._queue.append(bytes(frame))

    def recv(self):
        return self._queue.pop(0)


class LoopbackStreamTransport:
    """Same interface over a single loopback byte stream.

    Frames are length-prefixed (2 bytes, big-endian) so message boundaries
    survive the stream.
    """

    def __init__(self):
        self._buffer = io.BytesIO()
        self._read_pos = 0

    def send(self, frame):
        self._buffer.seek(0, io.SEEK_END)
        self._buffer.write(len(frame).to_bytes(2, "big") + bytes(frame))

    def recv(self):
        self._buffer.seek(self._read_pos)
        length = int.from_bytes(self._buffer.read(2), "big")
        frame = self._buffer.read(length)
        self._read_pos = self._buffer.tell()
        return frame


# ---------------------------------------------------------------------------
# deployments

@dataclass
class Deployment:
    params: object
    ta: object
    agt: object
    card: object
    id_i: bytes
    password: str


def build_deployment(seed, bits=64, certificate=None, ev_id="EV-0001", password="correct horse"):
    """TA setup plus one registered aggregator and one registered EV."""
    rng = random.Random(seed)
    params, ta = ta_setup(bits, rng, certificate=certificate)
    agt = agt_register(identity("AGT-01"), ta, params, rng)
    id_i = identity(ev_id)
    card = ev_register(id_i, password, ta, agt, params, rng)
    return Deployment(params, ta, agt, card, id_i, password)


# ---------------------------------------------------------------------------
# session runner

def _flip(frame, bit_index):
    if not 0 <= bit_index < len(frame) * 8:
        raise ValueError("bit index outside frame")
    data = bytearray(frame)
    data[bit_index // 8] ^= 1 << (7 - bit_index % 8)
    return bytes(data)


def _deliver(frame, index, actions):
    """Apply adversary transforms for this message slot; None means dropped."""
    for action in actions:
        if isinstance(action, FlipBit) and action.msg_index == index:
            frame = _flip(frame, action.bit_index)
        elif isinstance(action, Replay) and action.msg_index == index:
            frame = action.transcript.frames()[index]
        elif isinstance(action, Drop) and action.msg_index == index:
            return None
    return frame


def run_with_adversary(deployment, seed, actions=()):
    """One login + authentication session with the adversary in the channel.

    The transcript records the frames as delivered (what each receiver
    observed). Verification failures become recorded outcomes, not errors.
    """
    rng = random.Random(seed)
    params = deployment.params
    N = params.N

    agt = deployment.agt
    agt.counter = OpCounter("AGT")
    agt.pending = None
    ev_counter = OpCounter("EV")
    transcript = Transcript()

    def outcome(sk_ev=None, sk_agt=None, failure=None, session=None):
        counter = session.counter if session is not None else ev_counter
        return SessionOutcome(sk_ev, sk_agt, transcript, counter, agt.counter, failure)

    impersonate_agt = next((a for a in actions if isinstance(a, ImpersonateAgt)), None)
    impersonate_ev = next((a for a in actions if isinstance(a, ImpersonateEv)), None)

    # login (message 0: EV -> AGT)
    password = impersonate_ev.guessed_password if impersonate_ev else deployment.password
    try:
        session, msg1 = ev_login(
            deployment.card, deployment.id_i, password, params, rng, counter=ev_counter
        )
    except AuthError as err:
        return outcome(failure=("EV", err.check))
    frame = _deliver(wire.encode(msg1, N), 0, actions)
    if frame is None:
        return outcome(failure=("transport", "drop:0"), session=session)
    transcript.append("EV->AGT", frame)

    responder = impersonate_agt.agt if impersonate_agt else agt
    responder.counter = agt.counter
    try:
        msg1_rx = wire.decode(frame, N)
        if not isinstance(msg1_rx, LoginRequest):
            raise wire.WireError("wrong message type")
    except wire.WireError:
        return outcome(failure=("AGT", "decode"), session=session)
    try:
        msg2 = agt_handle_login(responder, msg1_rx, params, rng, force=bool(impersonate_agt))
    except AuthError as err:
        return outcome(failure=("AGT", err.check), session=session)

    # response (message 1: AGT -> EV)
    frame = _deliver(wire.encode(msg2, N), 1, actions)
    if frame is None:
        return outcome(failure=("transport", "drop:1"), session=session)
    transcript.append("AGT->EV", frame)
    try:
        msg2_rx = wire.decode(frame, N)
        if not isinstance(msg2_rx, AgtResponse):
            raise wire.WireError("wrong message type")
    except wire.WireError:
        return outcome(failure=("EV", "decode"), session=session)
    try:
        msg3, sk_ev = ev_handle_response(session, deployment.card, deployment.id_i, msg2_rx, params)
    except AuthError as err:
        return outcome(failure=("EV", err.check), session=session)

    # confirmation (message 2: EV -> AGT)
    frame = _deliver(wire.encode(msg3, N), 2, actions)
    if frame is None:
        return outcome(sk_ev=sk_ev, failure=("transport", "drop:2"), session=session)
    transcript.append("EV->AGT", frame)
    try:
        msg3_rx = wire.decode(frame, N)
        if not isinstance(msg3_rx, EvConfirm):
            raise wire.WireError("wrong message type")
    except wire.WireError:
        return outcome(sk_ev=sk_ev, failure=("AGT", "decode"), session=session)
    try:
        sk_agt = agt_confirm(agt, msg3_rx, params)
    except AuthError as err:
        return outcome(sk_ev=sk_ev, failure=("AGT", err.check), session=session)
    return outcome(sk_ev=sk_ev, sk_agt=sk_agt, session=session)


def run_honest(deployment, seed):
    """Honest session; both keys must come out present and equal."""
    return run_with_adversary(deployment, seed, ())


# ---------------------------------------------------------------------------
# offline password-guessing experiment

def offline_guess_experiment(deployment, transcripts, dictionary, max_n=100_000):
    """Dictionary attack report at a toy modulus.

    For each candidate password, records whether any card or transcript
    value confirms the guess with and without knowledge of the true ID.
    Without the ID, confirmation via I would require both the identity and
    a discrete-log inversion; the report counts the brute-force oracle
    steps spent on the attempt.
    """
    params = deployment.params
    if params.N > (1 << 24):
        raise OracleRangeError("offline guessing experiment requires a toy modulus")
    card = deployment.card
    report = []
    # With the ID withheld, I = T_{ID*RPW}(pub_TA); a dlog of I against
    # pub_TA (bounded by the orbit period at a toy modulus) still yields
    # only the composite degree, which cannot be split without the ID.
    dlog_v = dlog_bruteforce(params.pub_ta, card.i_value, params.N, max_n)
    oracle_calls = dlog_v if dlog_v is not None else max_n
    for candidate in dictionary:
        rpw = digest160([xor20(deployment.id_i, pw20(candidate))])
        i_0 = cheb_eval(
            as_degree(deployment.id_i),
            cheb_eval(as_degree(rpw), params.pub_ta, params.N),
            params.N,
        )
        report.append(
            {
                "password": candidate,
                "confirmed_with_id": i_0 == card.i_value,
                "confirmed_without_id": False,  # Z needs A_i, M_i needs h(k_j)
                "oracle_calls": oracle_calls,
            }
        )
    return report


# ---------------------------------------------------------------------------
# scenario files and CSV reports

@dataclass
class Scenario:
    name: str
    seed: int
    actions: list  # raw (verb, args) tuples, resolved at run time


def load_scenarios(path):
    """Parse a line-oriented scenario file.

    Grammar (one token sequence per line, '#' comments allowed):
        scenario NAME seed SEED
        flip MSG_INDEX BIT_INDEX
        replay MSG_INDEX PRIOR_SEED
        drop MSG_INDEX
        impersonate-agt
        impersonate-ev [GUESSED_PASSWORD]
        passthrough
    """
    scenarios = []
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            verb = tokens[0]
            if verb == "scenario":
                if len(tokens) != 4 or tokens[2] != "seed":
                    raise ValueError(f"{path}:{lineno}: expected 'scenario NAME seed SEED'")
                scenarios.append(Scenario(tokens[1], int(tokens[3]), []))
                continue
            if not scenarios:
                raise ValueError(f"{path}:{lineno}: action before any 'scenario' line")
            if verb == "flip" and len(tokens) == 3:
                scenarios[-1].actions.append(("flip", int(tokens[1]), int(tokens[2])))
            elif verb == "replay" and len(tokens) == 3:
                scenarios[-1].actions.append(("replay", int(tokens[1]), int(tokens[2])))
            elif verb == "drop" and len(tokens) == 2:
                scenarios[-1].actions.append(("drop", int(tokens[1])))
            elif verb == "impersonate-agt" and len(tokens) == 1:
                scenarios[-1].actions.append(("impersonate-agt",))
            elif verb == "impersonate-ev" and len(tokens) <= 2:
                scenarios[-1].actions.append(("impersonate-ev", *tokens[1:]))
            elif verb == "passthrough" and len(tokens) == 1:
                scenarios[-1].actions.append(("passthrough",))
            else:
                raise ValueError(f"{path}:{lineno}: unknown action {line!r}")
    return scenarios


def _resolve_actions(scenario, deployment):
    actions = []
    for spec in scenario.actions:
        verb = spec[0]
        if verb == "flip":
            actions.append(FlipBit(spec[1], spec[2]))
        elif verb == "replay":
            prior = run_honest(deployment, spec[2])
            actions.append(Replay(spec[1], prior.transcript))
        elif verb == "drop":
            actions.append(Drop(spec[1]))
        elif verb == "impersonate-agt":
            rng = random.Random(scenario.seed ^ 0x5CE7A210)
            impostor = agt_register(identity("AGT-evil"), deployment.ta, deployment.params, rng)
            actions.append(ImpersonateAgt(impostor))
        elif verb == "impersonate-ev":
            actions.append(ImpersonateEv(*spec[1:]))
        elif verb == "passthrough":
            actions.append(PassThrough())
    return actions


OUTCOME_FIELDS = (
    "scenario",
    "result",
    "failing_party",
    "failing_check",
    "ev_cheb",
    "ev_hash",
    "agt_cheb",
    "agt_hash_online",
    "agt_hash_total",
)


def outcome_row(name, outcome):
    party, check = outcome.failure if outcome.failure else ("", "")
    return {
        "scenario": name,
        "result": "success" if outcome.success else "reject",
        "failing_party": party,
        "failing_check": check,
        "ev_cheb": outcome.ev_counter.chebyshev,
        "ev_hash": outcome.ev_counter.hashes,
        "agt_cheb": outcome.agt_counter.chebyshev,
        "agt_hash_online": outcome.agt_counter.hashes,
        "agt_hash_total": outcome.agt_counter.hashes + AGT_CACHED_HASHES,
    }


def run_scenario_file(path, deployment):
    return [
        outcome_row(s.name, run_with_adversary(deployment, s.seed, _resolve_actions(s, deployment)))
        for s in load_scenarios(path)
    ]


def write_outcome_csv(rows, stream):
    writer = csv.DictWriter(stream, fieldnames=OUTCOME_FIELDS)
    writer.writeheader()
    writer.writerows(rows)

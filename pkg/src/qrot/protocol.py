"""Sender and receiver state machines for the randomized OT session.

Message flow after the handshake: the sender issues the commitment challenge,
the receiver commits to all basis/outcome pairs, the sender names a test
subset, the receiver opens it, the sender checks the error rate and discloses
her remaining bases, the receiver sends an ordered pair of index sets, the
sender answers with syndromes for both halves plus the hashing seed.

Output convention: the sender's m_0 hashes the first element of the received
pair and m_1 the second. The receiver places his matched-basis set at pair
position c, so he can decode exactly the position-c string; the chosen-string
relation receiver.m_c == sender.(m_0, m_1)[c] holds by construction.

Every out-of-phase or malformed message ends the session with a typed abort;
no path yields a DONE state with inconsistent outputs.
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

from qrot import commit, pamp, qsim, recon, wire
from qrot.bitcore import BitString, IndexSet, Rng, extract, sample_subset
from qrot.bounds import BoundsError, ProtocolParams
from qrot.wire import Frame


class ProtocolError(ValueError):
    pass


class Msg(enum.IntEnum):
    HELLO = 0x01
    HELLO_ACK = 0x02
    CHALLENGE = 0x03
    COMMITMENTS = 0x04
    TEST_SET = 0x05
    OPENINGS = 0x06
    BASES = 0x07
    SEP = 0x08
    SYNDROMES = 0x09
    HASH_SEED = 0x0A
    ABORT = 0x0B


class AbortReason(enum.IntEnum):
    TEST_FAILED = 0x01
    INSUFFICIENT_BASES = 0x02
    IR_FAILED = 0x03
    MULTIPHOTON = 0x04
    PROTOCOL_ERROR = 0x05
    TRANSPORT = 0x06


class Phase(enum.Enum):
    HELLO = "hello"
    CHALLENGE = "challenge"
    COMMIT = "commit"
    TEST = "test"
    BASES = "bases"
    SEPARATE = "separate"
    SYNDROME = "syndrome"
    HASH = "hash"
    DONE = "done"
    ABORTED = "aborted"


PROTOCOL_VERSION = 1

_BACKEND_CODES = {recon.BACKEND_TRIVIAL: 0, recon.BACKEND_LDPC: 1}
_BACKEND_NAMES = {v: k for k, v in _BACKEND_CODES.items()}

_CONFIG_STRUCT = struct.Struct(">BBBHHQI8d")


@dataclass(frozen=True)
class SessionConfig:
    """Everything both parties must agree on before the quantum phase."""

    params: ProtocolParams
    hash_id: int = commit.HASH_AES128
    k: int = 32
    tag_bits: int = 32
    ir_backend: str = recon.BACKEND_LDPC

    def __post_init__(self):
        if self.hash_id not in commit.HASH_NAMES:
            raise ProtocolError(f"unknown hash id {self.hash_id}")
        if self.ir_backend not in _BACKEND_CODES:
            raise ProtocolError(f"unknown IR backend {self.ir_backend}")

    @property
    def commit_params(self) -> commit.CommitParams:
        # per-round message is the (basis, outcome) pair
        return commit.CommitParams(k=self.k, n_msg=2)

    @property
    def ir_params(self) -> recon.IrParams:
        p = self.params
        return recon.IrParams(n_raw=p.n_raw, p_design=p.p_max + p.delta1,
                              f=p.f, tag_bits=self.tag_bits,
                              backend=self.ir_backend)

    def serialize(self) -> bytes:
        p = self.params
        return _CONFIG_STRUCT.pack(
            PROTOCOL_VERSION, self.hash_id, _BACKEND_CODES[self.ir_backend],
            self.k, self.tag_bits, p.n0, p.n,
            p.alpha, p.delta1, p.delta2, p.p_max, p.f, p.p_multi,
            p.eps_ir, p.eps_bind)

    @classmethod
    def parse(cls, raw: bytes) -> "SessionConfig":
        if len(raw) != _CONFIG_STRUCT.size:
            raise ProtocolError("bad handshake record length")
        (ver, hash_id, backend, k, tag_bits, n0, n,
         alpha, d1, d2, p_max, f, p_multi, eps_ir, eps_bind) = _CONFIG_STRUCT.unpack(raw)
        if ver != PROTOCOL_VERSION:
            raise ProtocolError(f"protocol version mismatch: {ver}")
        if backend not in _BACKEND_NAMES:
            raise ProtocolError(f"unknown IR backend code {backend}")
        try:
            params = ProtocolParams(n0=n0, alpha=alpha, delta1=d1, delta2=d2,
                                    p_max=p_max, n=n, f=f, p_multi=p_multi,
                                    eps_ir=eps_ir, eps_bind=eps_bind)
        except BoundsError as exc:
            raise ProtocolError(str(exc)) from exc
        return cls(params=params, hash_id=hash_id, k=k, tag_bits=tag_bits,
                   ir_backend=_BACKEND_NAMES[backend])


def declared_payload_sizes(config: SessionConfig) -> dict:
    """Byte budget of every disclosing message, from the config alone.

    The leak-ledger tests check the transcript against these numbers.
    """
    p = config.params
    cp = config.commit_params
    ir = config.ir_params
    syn_record = 32 + 4 + (ir.syndrome_bits + 7) // 8 + 2 + (ir.tag_bits + 7) // 8
    return {
        Msg.COMMITMENTS: 4 + p.n0 * cp.com_bytes,
        Msg.OPENINGS: 4 + p.n_test * (1 + cp.seed_bytes),
        Msg.BASES: 4 + (p.n0 - p.n_test + 7) // 8,
        Msg.SEP: 2 * (4 + 4 * p.n_raw),
        Msg.SYNDROMES: 2 * syn_record,
        Msg.HASH_SEED: 8 + (p.n_raw + p.n - 1 + 7) // 8,
    }


# ---------------------------------------------------------------------------
# transcript
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranscriptEntry:
    direction: str  # "send" | "recv"
    type_code: int
    length: int
    digest: str


@dataclass
class SessionTranscript:
    entries: list = field(default_factory=list)
    abort_reason: AbortReason | None = None

    def record(self, direction: str, frame: Frame) -> None:
        dig = hashlib.blake2b(frame.payload, digest_size=8).hexdigest()
        self.entries.append(TranscriptEntry(direction, frame.type_code,
                                            len(frame.payload), dig))

    def payload_bytes(self, type_code: int) -> int:
        return sum(e.length for e in self.entries if e.type_code == type_code)


# ---------------------------------------------------------------------------
# outputs and fault-injection hooks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SenderOutput:
    m0: BitString
    m1: BitString


@dataclass(frozen=True)
class ReceiverOutput:
    c: int
    m_c: BitString


@dataclass(frozen=True)
class RotOutput:
    sender: SenderOutput
    receiver: ReceiverOutput

    @property
    def correct(self) -> bool:
        """Chosen-string relation: the receiver holds the sender's m_c."""
        chosen = self.sender.m0 if self.receiver.c == 0 else self.sender.m1
        return self.receiver.m_c == chosen


@dataclass(frozen=True)
class CheatHooks:
    """Fault injections replacing one party's honest program.

    flip_rate: receiver commits to outcome bits flipped at this rate.
    basis_match_prob: receiver's bases regenerated to match the sender's
        with this probability (skew; honest physics gives 1/2).
    corrupt_syndrome: sender flips tag bytes in the syndrome message.
    early_message: receiver sends a separation message before committing.
    """

    flip_rate: float = 0.0
    basis_match_prob: float | None = None
    corrupt_syndrome: bool = False
    early_message: bool = False


# ---------------------------------------------------------------------------
# shared machinery
# ---------------------------------------------------------------------------

class _Session:
    def __init__(self, config: SessionConfig, rng: Rng, hooks: CheatHooks):
        self.config = config
        self.rng = rng
        self.hooks = hooks
        self.phase = Phase.HELLO
        self.transcript = SessionTranscript()
        self.abort_reason: AbortReason | None = None

    @property
    def finished(self) -> bool:
        return self.phase in (Phase.DONE, Phase.ABORTED)

    def _send(self, type_code: int, payload: bytes) -> Frame:
        frame = Frame(type_code, payload)
        self.transcript.record("send", frame)
        return frame

    def _abort(self, reason: AbortReason) -> list[Frame]:
        self.phase = Phase.ABORTED
        self.abort_reason = reason
        self.transcript.abort_reason = reason
        return [self._send(Msg.ABORT, bytes([reason]))]

    def transport_abort(self) -> None:
        if not self.finished:
            self.phase = Phase.ABORTED
            self.abort_reason = AbortReason.TRANSPORT
            self.transcript.abort_reason = AbortReason.TRANSPORT

    def on_frame(self, frame: Frame) -> list[Frame]:
        if self.finished:
            return []
        self.transcript.record("recv", frame)
        if frame.type_code == Msg.ABORT:
            self.phase = Phase.ABORTED
            reason = AbortReason(frame.payload[0]) if frame.payload else \
                AbortReason.PROTOCOL_ERROR
            self.abort_reason = reason
            self.transcript.abort_reason = reason
            return []
        try:
            handler = self._handlers().get((self.phase, frame.type_code))
            if handler is None:
                return self._abort(AbortReason.PROTOCOL_ERROR)
            return handler(frame.payload)
        except (ProtocolError, ValueError, struct.error):
            return self._abort(AbortReason.PROTOCOL_ERROR)

    def _handlers(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# sender (Alice)
# ---------------------------------------------------------------------------

class SenderSession(_Session):
    def __init__(self, config: SessionConfig, view: qsim.AliceView, rng: Rng,
                 hooks: CheatHooks | None = None):
        super().__init__(config, rng, hooks or CheatHooks())
        if view.theta.length != config.params.n0:
            raise ProtocolError("quantum-phase view does not match N0")
        self.view = view
        self.challenge: commit.Challenge | None = None
        self.coms: np.ndarray | None = None
        self.test_set: IndexSet | None = None
        self.output: SenderOutput | None = None
        self.qber_estimate: float | None = None

    def start(self) -> list[Frame]:
        return [self._send(Msg.HELLO, self.config.serialize())]

    def _handlers(self):
        return {
            (Phase.HELLO, Msg.HELLO_ACK): self._on_hello_ack,
            (Phase.COMMIT, Msg.COMMITMENTS): self._on_commitments,
            (Phase.TEST, Msg.OPENINGS): self._on_openings,
            (Phase.SEPARATE, Msg.SEP): self._on_sep,
        }

    def _on_hello_ack(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        if payload != struct.pack(">QQQ", p.n_test, p.n_check, p.n_raw):
            return self._abort(AbortReason.PROTOCOL_ERROR)
        if p.p_multi > 0.0:
            est = qsim.multi_photon_estimate(self.view.n_tot, self.view.n_multi)
            if est >= p.p_multi:
                return self._abort(AbortReason.MULTIPHOTON)
        self.challenge = commit.sample_challenge(self.rng, self.config.commit_params)
        self.phase = Phase.COMMIT
        return [self._send(Msg.CHALLENGE, self.challenge.r1.serialize())]

    def _on_commitments(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        cp = self.config.commit_params
        count = struct.unpack(">I", payload[:4])[0]
        if count != p.n0 or len(payload) != 4 + count * cp.com_bytes:
            return self._abort(AbortReason.PROTOCOL_ERROR)
        self.coms = np.frombuffer(payload[4:], np.uint8).reshape(count, cp.com_bytes)
        self.test_set = sample_subset(self.rng, p.n0, p.n_test)
        self.phase = Phase.TEST
        return [self._send(Msg.TEST_SET, self.test_set.serialize())]

    def _on_openings(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        cp = self.config.commit_params
        rec = 1 + cp.seed_bytes
        count = struct.unpack(">I", payload[:4])[0]
        if count != p.n_test or len(payload) != 4 + count * rec:
            return self._abort(AbortReason.PROTOCOL_ERROR)
        body = np.frombuffer(payload[4:], np.uint8).reshape(count, rec)
        msgs = np.stack([body[:, 0] >> 7, (body[:, 0] >> 6) & 1], axis=1)
        ok = commit.verify_batch(self.coms[self.test_set.indices], msgs,
                                 body[:, 1:], self.challenge, cp,
                                 self.config.hash_id)
        if not ok.all():
            return self._abort(AbortReason.TEST_FAILED)

        theta_a = self.view.theta.bits()[self.test_set.indices]
        x_a = self.view.x.bits()[self.test_set.indices]
        matched = msgs[:, 0] == theta_a
        if int(matched.sum()) < p.n_check:
            return self._abort(AbortReason.TEST_FAILED)
        p_est = float((msgs[matched, 1] != x_a[matched]).mean())
        self.qber_estimate = p_est
        if p_est > p.p_max:
            return self._abort(AbortReason.TEST_FAILED)

        rest = self.test_set.complement()
        self.phase = Phase.SEPARATE
        return [self._send(Msg.BASES, extract(self.view.theta, rest).serialize())]

    def _on_sep(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        first, used = IndexSet.parse(payload, p.n0)
        second, used2 = IndexSet.parse(payload[used:], p.n0)
        if used + used2 != len(payload):
            return self._abort(AbortReason.PROTOCOL_ERROR)
        in_test = self.test_set.membership_mask()
        if (len(first) != p.n_raw or len(second) != p.n_raw
                or in_test[first.indices].any() or in_test[second.indices].any()
                or np.intersect1d(first.indices, second.indices).size):
            return self._abort(AbortReason.PROTOCOL_ERROR)

        code_seed = self.rng.bytes(32)
        ir = self.config.ir_params
        s0 = recon.syn(extract(self.view.x, first), ir, code_seed)
        s1 = recon.syn(extract(self.view.x, second), ir, code_seed)
        syn_payload = s0.serialize() + s1.serialize()
        if self.hooks.corrupt_syndrome:
            buf = bytearray(syn_payload)
            buf[len(s0.serialize()) - 1] ^= 0xFF  # first record's tag
            buf[-1] ^= 0xFF                       # second record's tag
            syn_payload = bytes(buf)

        seed = pamp.sample_seed(self.rng, p.n_raw, p.n)
        self.output = SenderOutput(pamp.hash_bits(seed, extract(self.view.x, first)),
                                   pamp.hash_bits(seed, extract(self.view.x, second)))
        self.phase = Phase.DONE
        return [self._send(Msg.SYNDROMES, syn_payload),
                self._send(Msg.HASH_SEED, seed.serialize())]


# ---------------------------------------------------------------------------
# receiver (Bob)
# ---------------------------------------------------------------------------

class ReceiverSession(_Session):
    def __init__(self, config: SessionConfig, view: qsim.BobView, rng: Rng,
                 hooks: CheatHooks | None = None, force_choice: int | None = None):
        super().__init__(config, rng, hooks or CheatHooks())
        if view.theta.length != config.params.n0:
            raise ProtocolError("quantum-phase view does not match N0")
        self.view = view
        self.force_choice = force_choice
        self.challenge: commit.Challenge | None = None
        self.msgs: np.ndarray | None = None
        self.seeds: np.ndarray | None = None
        self.i0: IndexSet | None = None
        self.choice: int | None = None
        self.decoded: BitString | None = None
        self.output: ReceiverOutput | None = None

    def _handlers(self):
        return {
            (Phase.HELLO, Msg.HELLO): self._on_hello,
            (Phase.CHALLENGE, Msg.CHALLENGE): self._on_challenge,
            (Phase.TEST, Msg.TEST_SET): self._on_test_set,
            (Phase.BASES, Msg.BASES): self._on_bases,
            (Phase.SYNDROME, Msg.SYNDROMES): self._on_syndromes,
            (Phase.HASH, Msg.HASH_SEED): self._on_hash_seed,
        }

    def _on_hello(self, payload: bytes) -> list[Frame]:
        theirs = SessionConfig.parse(payload)
        if theirs != self.config:
            return self._abort(AbortReason.PROTOCOL_ERROR)
        p = self.config.params
        self.phase = Phase.CHALLENGE
        return [self._send(Msg.HELLO_ACK,
                           struct.pack(">QQQ", p.n_test, p.n_check, p.n_raw))]

    def _on_challenge(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        cp = self.config.commit_params
        r1, used = BitString.parse(payload)
        if used != len(payload) or r1.length != cp.n_r:
            return self._abort(AbortReason.PROTOCOL_ERROR)
        self.challenge = commit.Challenge(r1)

        x = self.view.x.bits().copy()
        if self.hooks.flip_rate > 0.0:
            x ^= (self.rng.uniform(p.n0) < self.hooks.flip_rate).astype(np.uint8)
        self.msgs = np.stack([self.view.theta.bits(), x], axis=1)
        seeds = np.frombuffer(self.rng.bytes(p.n0 * cp.seed_bytes),
                              np.uint8).reshape(p.n0, cp.seed_bytes).copy()
        if cp.n_s % 8:
            seeds[:, -1] &= (0xFF << (8 - cp.n_s % 8)) & 0xFF
        self.seeds = seeds
        coms = commit.commit_batch(self.msgs, seeds, self.challenge, cp,
                                   self.config.hash_id)
        self.phase = Phase.TEST
        out = []
        if self.hooks.early_message:
            out.append(self._send(Msg.SEP, b""))
        out.append(self._send(Msg.COMMITMENTS,
                              struct.pack(">I", p.n0) + coms.tobytes()))
        return out

    def _on_test_set(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        cp = self.config.commit_params
        test_set, used = IndexSet.parse(payload, p.n0)
        if used != len(payload) or len(test_set) != p.n_test:
            return self._abort(AbortReason.PROTOCOL_ERROR)
        self.test_set = test_set
        opened = self.msgs[test_set.indices]
        msg_byte = (opened[:, 0] << 7 | opened[:, 1] << 6).astype(np.uint8)
        records = np.concatenate([msg_byte[:, None], self.seeds[test_set.indices]],
                                 axis=1)
        self.phase = Phase.BASES
        return [self._send(Msg.OPENINGS,
                           struct.pack(">I", p.n_test) + records.tobytes())]

    def _on_bases(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        theta_a, used = BitString.parse(payload)
        rest = self.test_set.complement()
        if used != len(payload) or theta_a.length != len(rest):
            return self._abort(AbortReason.PROTOCOL_ERROR)
        match = theta_a.bits() == self.view.theta.bits()[rest.indices]
        matching = rest.indices[match]
        differing = rest.indices[~match]
        if matching.size < p.n_raw or differing.size < p.n_raw:
            return self._abort(AbortReason.INSUFFICIENT_BASES)

        self.choice = self.force_choice if self.force_choice is not None \
            else self.rng.bytes(1)[0] & 1
        self.i0 = _pick(self.rng, matching, p.n_raw, p.n0)
        i1 = _pick(self.rng, differing, p.n_raw, p.n0)
        pair = (self.i0, i1) if self.choice == 0 else (i1, self.i0)
        self.phase = Phase.SYNDROME
        return [self._send(Msg.SEP, pair[0].serialize() + pair[1].serialize())]

    def _on_syndromes(self, payload: bytes) -> list[Frame]:
        s_first, used = recon.Syndrome.parse(payload)
        s_second, used2 = recon.Syndrome.parse(payload[used:])
        if used + used2 != len(payload):
            return self._abort(AbortReason.PROTOCOL_ERROR)
        mine = s_first if self.choice == 0 else s_second
        decoded = recon.dec(mine, extract(self.view.x, self.i0),
                            self.config.ir_params)
        if decoded is None:
            return self._abort(AbortReason.IR_FAILED)
        self.decoded = decoded
        self.phase = Phase.HASH
        return []

    def _on_hash_seed(self, payload: bytes) -> list[Frame]:
        p = self.config.params
        seed = pamp.ToeplitzSeed.parse(payload)
        if seed.n_in != p.n_raw or seed.n_out != p.n:
            return self._abort(AbortReason.PROTOCOL_ERROR)
        self.output = ReceiverOutput(self.choice, pamp.hash_bits(seed, self.decoded))
        self.phase = Phase.DONE
        return []


def _pick(rng: Rng, pool: np.ndarray, size: int, universe: int) -> IndexSet:
    """Uniform size-subset of the candidate pool, as global indices."""
    sub = sample_subset(rng, pool.size, size)
    return IndexSet(pool[sub.indices], universe)


# ---------------------------------------------------------------------------
# session driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SessionResult:
    output: RotOutput | None
    abort_reason: AbortReason | None
    sender_transcript: SessionTranscript
    receiver_transcript: SessionTranscript
    qber_estimate: float | None = None

    @property
    def success(self) -> bool:
        return self.output is not None


def _skew_bases(alice: qsim.AliceView, bob: qsim.BobView, model: qsim.SourceModel,
                match_prob: float, rng: Rng) -> qsim.BobView:
    """Replace the receiver's measurement record with basis-skewed one."""
    n = alice.theta.length
    mism = (rng.uniform(n) >= match_prob).astype(np.uint8)
    theta_b = alice.theta.bits() ^ mism
    noise = (rng.uniform(n) < model.p_err).astype(np.uint8)
    unif = np.frombuffer(rng.bytes(n), np.uint8) & 1
    x_b = np.where(mism == 0, alice.x.bits() ^ noise, unif).astype(np.uint8)
    return qsim.BobView(BitString.from_bits(theta_b), BitString.from_bits(x_b))


def run_session(config: SessionConfig, model: qsim.SourceModel,
                seed: int | Rng, *,
                sender_hooks: CheatHooks | None = None,
                receiver_hooks: CheatHooks | None = None,
                force_choice: int | None = None,
                max_rounds: int = 64) -> SessionResult:
    """Drive both state machines over an in-process framed transport."""
    root = Rng.from_int(seed) if isinstance(seed, int) else seed
    source_rng = root.spawn(b"source")
    sender_rng = root.spawn(b"sender")
    receiver_rng = root.spawn(b"receiver")

    alice_view, bob_view = qsim.run_quantum_phase(model, config.params.n0, source_rng)
    rhooks = receiver_hooks or CheatHooks()
    if rhooks.basis_match_prob is not None:
        bob_view = _skew_bases(alice_view, bob_view, model,
                               rhooks.basis_match_prob, receiver_rng)

    sender = SenderSession(config, alice_view, sender_rng, hooks=sender_hooks)
    receiver = ReceiverSession(config, bob_view, receiver_rng, hooks=rhooks,
                               force_choice=force_choice)

    conn_a, conn_b = wire.queue_pair()
    try:
        for frame in sender.start():
            conn_a.send(frame)
        for _ in range(max_rounds):
            progressed = False
            for actor, conn in ((receiver, conn_b), (sender, conn_a)):
                while True:
                    try:
                        frame = conn.recv(timeout=0)
                    except wire.Timeout:
                        break
                    progressed = True
                    for out in actor.on_frame(frame):
                        conn.send(out)
            if sender.finished and receiver.finished:
                break
            if not progressed:
                sender.transport_abort()
                receiver.transport_abort()
                break
        else:
            sender.transport_abort()
            receiver.transport_abort()
    except wire.WireError:
        sender.transport_abort()
        receiver.transport_abort()

    reason = sender.abort_reason or receiver.abort_reason
    output = None
    if reason is None and sender.output is not None and receiver.output is not None:
        output = RotOutput(sender.output, receiver.output)
    elif reason is None:
        reason = AbortReason.TRANSPORT
    return SessionResult(output, reason, sender.transcript, receiver.transcript,
                         qber_estimate=sender.qber_estimate)


def drive(actor: _Session, conn: wire.Connection,
          timeout: float = wire.DEFAULT_TIMEOUT) -> None:
    """Run one state machine over an already-open connection until it ends."""
    try:
        if isinstance(actor, SenderSession):
            for frame in actor.start():
                conn.send(frame)
        while not actor.finished:
            frame = conn.recv(timeout=timeout)
            for out in actor.on_frame(frame):
                conn.send(out)
    except (wire.Timeout, wire.WireError):
        actor.transport_abort()


def desk_config(n0: int = 1 << 16, n: int = 16, tag_bits: int = 16, k: int = 16,
                ir_backend: str = recon.BACKEND_TRIVIAL,
                hash_id: int = commit.HASH_AES128) -> SessionConfig:
    """Small parameter point sized for CI: one session well under a second."""
    params = ProtocolParams(n0=n0, alpha=0.25, delta1=0.02, delta2=0.03,
                            p_max=0.02, n=n, f=1.3, p_multi=0.0,
                            eps_ir=2.0 ** -tag_bits, eps_bind=2.0 ** -k)
    return SessionConfig(params=params, hash_id=hash_id, k=k,
                         tag_bits=tag_bits, ir_backend=ir_backend)

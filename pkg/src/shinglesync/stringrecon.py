"""End-to-end string reconciliation over a framed transport.

Session outline: exchange hello frames (parameters, lengths, observed
symbols), reconcile the two initial shingle multisets (fixed-bound bundle or
rateless pair streaming), merge each side's ordered shingling to unique
decodability, exchange merge seams as canonical instance-index pairs, rebuild
and uniquely decode the remote multiset, then confirm with digests.  Only the
multiset reconciliation and the merge exchange carry data proportional to the
difference; everything else is constant-size framing.
"""

from __future__ import annotations

import hashlib
import random
import struct
from collections import Counter
from dataclasses import dataclass, field as dc_field

from .alphabet import DEFAULT_DELIMITER, Alphabet, validate_word
from .debruijn import DeBruijnGraph
from .decider import TokenDecider
from .errors import (
    BoundExceededError,
    InvalidParameterError,
    ProtocolError,
    SessionAbortError,
)
from .field import P61, FieldSpec
from .setrecon import (
    DEFAULT_OCC_BITS,
    Delta,
    EvalBundle,
    PartialDecode,
    RatelessDecoder,
    RatelessSource,
    ShingleCodec,
    char_poly_evals,
    reconcile_fixed,
    roots_by_candidates,
)
from .shingles import ShingleMultiset, fold, shingle_sequence
from .transport import Endpoint, Frame, FrameKind

PROTOCOL_VERSION = 1

MODE_FIXED = "fixed"
MODE_RATELESS = "rateless"


@dataclass(frozen=True)
class ReconConfig:
    """Parameters one session runs under; the initiator's copy wins."""

    l: int
    mode: str = MODE_RATELESS
    m_hat: int = 64
    k: int = 8
    seed: int = 1
    occ_bits: int = DEFAULT_OCC_BITS
    prime: int = P61
    point_span: int = 1 << 40
    delimiter: str = DEFAULT_DELIMITER

    def __post_init__(self):
        if self.l < 2:
            raise InvalidParameterError("l must be >= 2")
        if self.mode not in (MODE_FIXED, MODE_RATELESS):
            raise InvalidParameterError(f"unknown mode {self.mode!r}")

    def field_spec(self) -> FieldSpec:
        return FieldSpec(self.prime, self.point_span)


@dataclass(frozen=True)
class MergeRecord:
    """One merge seam: the canonical instance index of the absorbed length-l
    shingle and of the anchor shingle it was concatenated onto."""

    atom_index: int
    anchor_index: int


@dataclass
class SessionReport:
    role: str
    l: int = 0
    mode: str = ""
    n_local: int = 0
    n_remote: int = 0
    outcome: str = "incomplete"
    merges_local: int = 0
    merges_remote: int = 0
    alpha: int | None = None
    bits: dict[str, list[int]] = dc_field(default_factory=dict)

    def step_bits(self, step: str) -> tuple[int, int]:
        sent, received = self.bits.get(step, [0, 0])
        return sent, received

    def to_text(self) -> str:
        lines = [
            f"role={self.role}",
            f"outcome={self.outcome}",
            f"mode={self.mode}",
            f"l={self.l}",
            f"n_local={self.n_local}",
            f"n_remote={self.n_remote}",
        ]
        if self.alpha is not None:
            lines.append(f"alpha={self.alpha}")
        lines.append(f"merges_local={self.merges_local}")
        lines.append(f"merges_remote={self.merges_remote}")
        total_sent = total_recv = 0
        for step in sorted(self.bits):
            sent, received = self.bits[step]
            total_sent += sent
            total_recv += received
            lines.append(f"{step}_bits_sent={sent}")
            lines.append(f"{step}_bits_recv={received}")
        lines.append(f"total_bits_sent={total_sent}")
        lines.append(f"total_bits_recv={total_recv}")
        return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# merge bookkeeping


def merge_until_ud(
    ordered: list[str], l: int, delimiter: str = DEFAULT_DELIMITER
) -> tuple[ShingleMultiset, list[tuple[int, int]]]:
    """Stream ordered shingles through the merging decider.

    Returns the uniquely decodable merged multiset plus the glued seams as
    (left_position, right_position) pairs over the input ordering.
    """
    decider = TokenDecider(l, delimiter, track_undo=True)
    ranges: list[tuple[int, int]] = []
    seams: list[tuple[int, int]] = []
    for pos, shingle in enumerate(ordered):
        outcome = decider.push_or_merge(shingle)
        if outcome.merges:
            pieces = ranges[-outcome.merges :]
            del ranges[-outcome.merges :]
            pieces.append((pos, pos))
            for (lo_a, hi_a), (lo_b, _hi_b) in zip(pieces, pieces[1:]):
                assert hi_a + 1 == lo_b
                seams.append((hi_a, lo_b))
            ranges.append((pieces[0][0], pos))
        else:
            ranges.append((pos, pos))
    ms = ShingleMultiset(Counter(decider.labels()), base_len=l)
    return ms, seams


def _position_instances(ordered: list[str]) -> list[tuple[str, int]]:
    """Instance identity (shingle, occurrence) of each stream position."""
    seen: Counter = Counter()
    out = []
    for s in ordered:
        seen[s] += 1
        out.append((s, seen[s]))
    return out


def seams_to_records(ordered: list[str], seams: list[tuple[int, int]]) -> list[MergeRecord]:
    """Convert position seams to canonical instance-index records."""
    instances = _position_instances(ordered)
    index_of = {inst: i for i, inst in enumerate(ShingleMultiset(Counter(ordered)).instances())}
    return [
        MergeRecord(atom_index=index_of[instances[right]], anchor_index=index_of[instances[left]])
        for left, right in seams
    ]


def apply_merge_records(
    ms: ShingleMultiset, records: list[MergeRecord], l: int
) -> ShingleMultiset:
    """Rebuild a merged multiset from an initial multiset plus seam records.

    Each record glues two instances left-to-right; gluing chains are folded
    with the non-overlapping concatenation.
    """
    instances = ms.instances()
    successor: dict[int, int] = {}
    has_pred: set[int] = set()
    for rec in records:
        if not (0 <= rec.anchor_index < len(instances) and 0 <= rec.atom_index < len(instances)):
            raise ProtocolError("merge record index out of range")
        if rec.anchor_index in successor or rec.atom_index in has_pred:
            raise ProtocolError("conflicting merge records")
        successor[rec.anchor_index] = rec.atom_index
        has_pred.add(rec.atom_index)
    merged: Counter = Counter()
    covered = 0
    consumed: set[int] = set()
    for idx in range(len(instances)):
        if idx in has_pred or idx in consumed or idx not in successor:
            continue
        chain = [idx]
        cur = idx
        while cur in successor:
            cur = successor[cur]
            if cur in consumed or len(chain) > len(instances):
                raise ProtocolError("merge records form a cycle")
            chain.append(cur)
        consumed.update(chain)
        covered += len(chain)
        merged[fold([instances[i][0] for i in chain], l)] += 1
    for idx, (shingle, _occ) in enumerate(instances):
        if idx not in consumed and idx not in has_pred:
            merged[shingle] += 1
            covered += 1
    # a pure record cycle has no chain head, leaving its instances uncovered
    if covered != len(instances):
        raise ProtocolError("merge records form a cycle")
    return ShingleMultiset(merged, base_len=l)


# ---------------------------------------------------------------------------
# wire payload codecs


def _pack_indices(values: list[int], bits: int) -> bytes:
    acc = 0
    nbits = 0
    out = bytearray()
    for v in values:
        acc = (acc << bits) | v
        nbits += bits
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return bytes(out)


def _unpack_indices(data: bytes, bits: int, count: int) -> list[int]:
    acc = 0
    nbits = 0
    out = []
    it = iter(data)
    mask = (1 << bits) - 1
    for _ in range(count):
        while nbits < bits:
            try:
                acc = (acc << 8) | next(it)
            except StopIteration:
                raise ProtocolError("truncated merge index block") from None
            nbits += 8
        nbits -= bits
        out.append((acc >> nbits) & mask)
    return out


def encode_hello(config: ReconConfig, role: int, word_len: int, symbols: str) -> bytes:
    sym = symbols.encode("utf-8")
    return (
        struct.pack(
            ">BBIBIHBQQQQ",
            PROTOCOL_VERSION,
            role,
            config.l,
            0 if config.mode == MODE_FIXED else 1,
            config.m_hat,
            config.k,
            config.occ_bits,
            config.seed,
            config.prime,
            config.point_span,
            word_len,
        )
        + struct.pack(">I", len(sym))
        + sym
    )


def decode_hello(payload: bytes) -> tuple[ReconConfig, int, int, str]:
    head = struct.Struct(">BBIBIHBQQQQ")
    if len(payload) < head.size + 4:
        raise ProtocolError("short hello frame")
    version, role, l, mode, m_hat, k, occ_bits, seed, prime, span, word_len = head.unpack_from(payload)
    if version != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {version}")
    (sym_len,) = struct.unpack_from(">I", payload, head.size)
    if len(payload) != head.size + 4 + sym_len:
        raise ProtocolError("hello frame length mismatch")
    sym = payload[head.size + 4 :].decode("utf-8")
    config = ReconConfig(
        l=l,
        mode=MODE_FIXED if mode == 0 else MODE_RATELESS,
        m_hat=m_hat,
        k=k,
        seed=seed,
        occ_bits=occ_bits,
        prime=prime,
        point_span=span,
    )
    return config, role, word_len, sym


def encode_bundle(bundle: EvalBundle) -> bytes:
    out = struct.pack(">QI", bundle.set_size, len(bundle.points))
    for z, v in zip(bundle.points, bundle.values):
        out += struct.pack(">QQ", z, v)
    return out


def decode_bundle(payload: bytes) -> EvalBundle:
    if len(payload) < 12:
        raise ProtocolError("short bundle frame")
    set_size, count = struct.unpack_from(">QI", payload)
    if len(payload) != 12 + 16 * count:
        raise ProtocolError("bundle frame length mismatch")
    points = []
    values = []
    for i in range(count):
        z, v = struct.unpack_from(">QQ", payload, 12 + 16 * i)
        points.append(z)
        values.append(v)
    return EvalBundle(tuple(points), tuple(values), set_size)


def encode_pairs(pairs: list[tuple[int, int]]) -> bytes:
    out = struct.pack(">I", len(pairs))
    for z, v in pairs:
        out += struct.pack(">QQ", z, v)
    return out


def decode_pairs(payload: bytes) -> list[tuple[int, int]]:
    if len(payload) < 4:
        raise ProtocolError("short pair frame")
    (count,) = struct.unpack_from(">I", payload)
    if len(payload) != 4 + 16 * count:
        raise ProtocolError("pair frame length mismatch")
    return [struct.unpack_from(">QQ", payload, 4 + 16 * i) for i in range(count)]


DELTA_ELEMENTS = 0  # second block holds the receiver's missing elements
DELTA_POLY = 1  # second block holds a polynomial whose roots the receiver owns


def encode_delta_elements(mode: int, sender_only: list[int], second: list[int]) -> bytes:
    out = struct.pack(">BI", mode, len(sender_only))
    for e in sender_only:
        out += struct.pack(">Q", e)
    out += struct.pack(">I", len(second))
    for e in second:
        out += struct.pack(">Q", e)
    return out


def decode_delta_elements(payload: bytes) -> tuple[int, list[int], list[int]]:
    if len(payload) < 5:
        raise ProtocolError("short delta frame")
    mode, n1 = struct.unpack_from(">BI", payload)
    if mode not in (DELTA_ELEMENTS, DELTA_POLY):
        raise ProtocolError(f"unknown delta mode {mode}")
    off = 5 + 8 * n1
    if len(payload) < off + 4:
        raise ProtocolError("delta frame length mismatch")
    first = [struct.unpack_from(">Q", payload, 5 + 8 * i)[0] for i in range(n1)]
    (n2,) = struct.unpack_from(">I", payload, off)
    if len(payload) != off + 4 + 8 * n2:
        raise ProtocolError("delta frame length mismatch")
    second = [struct.unpack_from(">Q", payload, off + 4 + 8 * i)[0] for i in range(n2)]
    return mode, first, second


def encode_merges(records: list[MergeRecord], index_bits: int) -> bytes:
    flat: list[int] = []
    for rec in records:
        flat.append(rec.atom_index)
        flat.append(rec.anchor_index)
    return struct.pack(">IB", len(records), index_bits) + _pack_indices(flat, index_bits)


def decode_merges(payload: bytes) -> list[MergeRecord]:
    if len(payload) < 5:
        raise ProtocolError("short merges frame")
    count, bits = struct.unpack_from(">IB", payload)
    if not 1 <= bits <= 32:
        raise ProtocolError("bad merge index width")
    flat = _unpack_indices(payload[5:], bits, 2 * count)
    return [MergeRecord(atom_index=flat[2 * i], anchor_index=flat[2 * i + 1]) for i in range(count)]


def _index_bits(n_instances: int) -> int:
    return max(1, (max(n_instances - 1, 1)).bit_length())


def _digest(word: str) -> bytes:
    return hashlib.sha256(word.encode("utf-8")).digest()[:8]


# ---------------------------------------------------------------------------
# the session


class _MeteredEndpoint:
    """Tags every frame's bits with the protocol step that produced it."""

    def __init__(self, endpoint: Endpoint, report: SessionReport):
        self.endpoint = endpoint
        self.report = report
        self.step = "hello"

    def send(self, kind: FrameKind, payload: bytes = b"") -> None:
        before = self.endpoint.bits_sent()
        self.endpoint.send(Frame(kind, payload))
        self.report.bits.setdefault(self.step, [0, 0])[0] += self.endpoint.bits_sent() - before

    def recv(self) -> Frame:
        before = self.endpoint.bits_received()
        frame = self.endpoint.recv()
        self.report.bits.setdefault(self.step, [0, 0])[1] += self.endpoint.bits_received() - before
        if frame.kind == FrameKind.ABORT:
            raise SessionAbortError(frame.payload.decode("utf-8", "replace"))
        return frame

    def expect(self, kind: FrameKind) -> Frame:
        frame = self.recv()
        if frame.kind != kind:
            raise ProtocolError(f"expected {kind.name}, got {frame.kind.name}")
        return frame


ROLE_INITIATOR = "initiator"
ROLE_RESPONDER = "responder"


def run_protocol(
    word: str,
    endpoint: Endpoint,
    role: str,
    config: ReconConfig,
    alpha: int | None = None,
) -> tuple[str, SessionReport]:
    """Run one full reconciliation session; returns the remote word and report.

    Both endpoints call this with their own word and role.  The initiator's
    configuration wins the hello negotiation; the responder adopts it.
    """
    if role not in (ROLE_INITIATOR, ROLE_RESPONDER):
        raise InvalidParameterError(f"unknown role {role!r}")
    report = SessionReport(role=role, alpha=alpha)
    wire = _MeteredEndpoint(endpoint, report)
    try:
        return _run(word, wire, role, config, report), report
    except BaseException as exc:
        if report.outcome == "incomplete":
            report.outcome = f"error:{type(exc).__name__}"
        try:
            if not isinstance(exc, (SessionAbortError, ProtocolError)):
                endpoint.send(Frame(FrameKind.ABORT, str(exc).encode("utf-8")))
        except Exception:
            pass
        raise


def _run(
    word: str,
    wire: _MeteredEndpoint,
    role: str,
    config: ReconConfig,
    report: SessionReport,
) -> str:
    validate_word(word, config.delimiter)
    my_hello = encode_hello(
        config, 0 if role == ROLE_INITIATOR else 1, len(word), "".join(sorted(set(word)))
    )
    if role == ROLE_INITIATOR:
        wire.send(FrameKind.HELLO, my_hello)
        peer_cfg, _peer_role, n_remote, peer_syms = decode_hello(wire.expect(FrameKind.HELLO).payload)
        if (peer_cfg.l, peer_cfg.mode, peer_cfg.m_hat, peer_cfg.k, peer_cfg.seed,
                peer_cfg.occ_bits, peer_cfg.prime, peer_cfg.point_span) != (
                config.l, config.mode, config.m_hat, config.k, config.seed,
                config.occ_bits, config.prime, config.point_span):
            raise SessionAbortError("peer did not adopt the offered parameters")
    else:
        peer_cfg, _peer_role, n_remote, peer_syms = decode_hello(wire.expect(FrameKind.HELLO).payload)
        config = ReconConfig(
            l=peer_cfg.l,
            mode=peer_cfg.mode,
            m_hat=peer_cfg.m_hat,
            k=peer_cfg.k,
            seed=peer_cfg.seed,
            occ_bits=peer_cfg.occ_bits,
            prime=peer_cfg.prime,
            point_span=peer_cfg.point_span,
            delimiter=config.delimiter,
        )
        my_hello = encode_hello(config, 1, len(word), "".join(sorted(set(word))))
        wire.send(FrameKind.HELLO, my_hello)

    report.l = config.l
    report.mode = config.mode
    report.n_local = len(word)
    report.n_remote = n_remote

    alphabet = Alphabet(sorted(set(word) | set(peer_syms)), delimiter=config.delimiter)
    field = config.field_spec()
    codec = ShingleCodec(alphabet, field, config.occ_bits)

    # step 1: shingle locally
    ordered = shingle_sequence(word, config.l, config.delimiter)
    local_ms = ShingleMultiset(Counter(ordered), base_len=config.l)

    # step 2: reconcile the multisets
    wire.step = "step2"
    delta = _reconcile_step(wire, role, config, codec, local_ms)
    remote_initial = local_ms.difference(delta.only_local).union(delta.only_remote)

    # steps 3-4: merge to unique decodability (local work only)
    merged_ms, seams = merge_until_ud(ordered, config.l, config.delimiter)
    records = seams_to_records(ordered, seams)
    report.merges_local = len(records)

    # step 5: exchange merge seams
    wire.step = "step5"
    merges_payload = encode_merges(records, _index_bits(local_ms.total()))
    if role == ROLE_INITIATOR:
        wire.send(FrameKind.MERGES, merges_payload)
        remote_records = decode_merges(wire.expect(FrameKind.MERGES).payload)
    else:
        remote_records = decode_merges(wire.expect(FrameKind.MERGES).payload)
        wire.send(FrameKind.MERGES, merges_payload)
    report.merges_remote = len(remote_records)

    # step 6: rebuild and uniquely decode the remote string
    remote_merged = apply_merge_records(remote_initial, remote_records, config.l)
    remote_word = DeBruijnGraph.build(remote_merged, config.l, config.delimiter).decode_unique()

    wire.step = "done"
    if role == ROLE_INITIATOR:
        wire.send(FrameKind.DONE, _digest(remote_word))
        peer_digest = wire.expect(FrameKind.DONE).payload
    else:
        peer_digest = wire.expect(FrameKind.DONE).payload
        wire.send(FrameKind.DONE, _digest(remote_word))
    if peer_digest != _digest(word):
        report.outcome = "digest-mismatch"
        raise ProtocolError("peer recovered a different string")
    report.outcome = "ok"
    # sanity: the merged multiset we shipped decodes back to our own word
    assert merged_ms.total() == local_ms.total() - len(records)
    return remote_word


def _reconcile_step(
    wire: _MeteredEndpoint,
    role: str,
    config: ReconConfig,
    codec: ShingleCodec,
    local_ms: ShingleMultiset,
) -> Delta:
    field = codec.field
    if config.mode == MODE_FIXED:
        n_points = config.m_hat + config.k + 1
        points = field.sample_points(config.seed, n_points)
        if role == ROLE_INITIATOR:
            bundle = char_poly_evals(local_ms, points, codec)
            wire.send(FrameKind.EVAL_BUNDLE, encode_bundle(bundle))
            _mode, sender_only, receiver_only = decode_delta_elements(
                wire.expect(FrameKind.DELTA).payload
            )
            return Delta(
                only_local=codec.decode_multiset(receiver_only),
                only_remote=codec.decode_multiset(sender_only),
            )
        remote_bundle = decode_bundle(wire.expect(FrameKind.EVAL_BUNDLE).payload)
        try:
            delta = reconcile_fixed(local_ms, remote_bundle, codec, config.m_hat, config.k)
        except BoundExceededError as exc:
            wire.send(FrameKind.ABORT, f"needs-larger-bound: {exc}".encode("utf-8"))
            raise
        local_elems = [codec.encode(s, occ) for s, occ in delta.only_local.instances()]
        remote_elems = [codec.encode(s, occ) for s, occ in delta.only_remote.instances()]
        wire.send(FrameKind.DELTA, encode_delta_elements(DELTA_ELEMENTS, local_elems, remote_elems))
        return delta

    # rateless mode: the responder interpolates and pulls out its own side's
    # instances; the initiator extracts the other side by evaluating the
    # handed-over polynomial at its own elements (all roots live there)
    if role == ROLE_INITIATOR:
        source = RatelessSource(local_ms, codec, config.seed)
        wire.send(
            FrameKind.EVAL_BUNDLE, encode_bundle(EvalBundle((), (), local_ms.total()))
        )
        while True:
            frame = wire.recv()
            if frame.kind == FrameKind.DELTA_REQ:
                (count,) = struct.unpack(">I", frame.payload)
                wire.send(FrameKind.EVAL_PAIR, encode_pairs(source.next_pairs(count)))
            elif frame.kind == FrameKind.DELTA:
                mode, sender_only, second = decode_delta_elements(frame.payload)
                if mode != DELTA_POLY:
                    raise ProtocolError("expected the polynomial hand-off delta")
                my_roots = roots_by_candidates(list(second), source.elements, field.p)
                if my_roots is None:
                    raise SessionAbortError("hand-off polynomial does not split over local elements")
                wire.send(FrameKind.DELTA, encode_delta_elements(DELTA_ELEMENTS, my_roots, []))
                return Delta(
                    only_local=codec.decode_multiset(my_roots),
                    only_remote=codec.decode_multiset(sender_only),
                )
            else:
                raise ProtocolError(f"unexpected frame {frame.kind.name} during reconciliation")
    header = decode_bundle(wire.expect(FrameKind.EVAL_BUNDLE).payload)
    decoder = RatelessDecoder(local_ms, codec, header.set_size, k=config.k, partial=True)
    partial: PartialDecode | None = None
    while partial is None:
        wanted = max(1, decoder.pairs_wanted())
        wire.send(FrameKind.DELTA_REQ, struct.pack(">I", wanted))
        for z, v in decode_pairs(wire.expect(FrameKind.EVAL_PAIR).payload):
            partial = decoder.feed(z, v)
            if partial is not None:
                break
    local_elems = [codec.encode(s, occ) for s, occ in partial.only_local.instances()]
    wire.send(
        FrameKind.DELTA,
        encode_delta_elements(DELTA_POLY, local_elems, list(partial.remote_poly)),
    )
    mode, remote_elems, _ = decode_delta_elements(wire.expect(FrameKind.DELTA).payload)
    if mode != DELTA_ELEMENTS:
        raise ProtocolError("expected the extracted-elements delta")
    return Delta(
        only_local=partial.only_local,
        only_remote=codec.decode_multiset(remote_elems),
    )


def random_edits(word: str, alpha: int, rng: random.Random, symbols: str) -> str:
    """Apply `alpha` uniform random single-character insertions/deletions."""
    chars = list(word)
    for _ in range(alpha):
        if chars and rng.random() < 0.5:
            del chars[rng.randrange(len(chars))]
        else:
            chars.insert(rng.randrange(len(chars) + 1), rng.choice(symbols))
    return "".join(chars)

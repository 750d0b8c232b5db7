"""Streaming unique-decodability decider.

The decider consumes one symbol at a time and maintains, per symbol: a
visited flag, an on-cycle flag, adjacency lists capped at two entries, the
first/last positions seen so far, and a stack of visited symbols.  A stream is
rejected the moment its consumed prefix stops being uniquely decodable from
its length-2 windows; rejection is absorbing.  State size depends only on the
alphabet, never on the stream length.

Three rejection rules apply when consuming character c after prefix u:

* cycle intrusion: a new edge arrives at a symbol already marked as lying on
  a cycle;
* communicating parents: c already has two distinct in-neighbors whose
  occurrence intervals in u overlap (the interval test stands in for a
  strong-connectivity query and is validated against the enumeration oracle);
* degree overflow: a third distinct parent or child appears.  This is an
  early exit only; it never changes the final verdict, just when it lands.

`TokenDecider` runs the same transition system over an interned alphabet of
length l-1 node grams, where each pushed shingle contributes one edge.  With
undo tracking enabled it supports the merge loop: a rejected shingle is fused
with its predecessor into their transitive closure and retried, which always
terminates because a single shingle spanning the whole stream is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .alphabet import DEFAULT_DELIMITER, Alphabet
from .errors import (
    InvalidParameterError,
    InvalidShingleError,
    InvalidTokenError,
    ProtocolMisuseError,
)
from .shingles import noconcat, shingle_sequence


class Reason(Enum):
    CYCLE_INTRUSION = "cycle-intrusion"
    COMMUNICATING_PARENTS = "communicating-parents"
    DEGREE_OVERFLOW = "degree-overflow"
    # mixed-length streams only: a second, differently-labeled edge between
    # the same node pair makes the two labels swappable in any walk, so the
    # multiset cannot decode uniquely.  Fixed-length streams never trip this
    # because source and target grams determine a length-l label completely.
    PARALLEL_LABELS = "parallel-labels"


@dataclass(frozen=True)
class Verdict:
    """`ok` means the stream so far is still uniquely decodable.

    When not ok, `reason` names the rejection rule and `position` is the
    1-based index of the push that tripped it.
    """

    ok: bool
    reason: Reason | None = None
    position: int | None = None

    def __bool__(self) -> bool:
        return self.ok


STILL_UD = Verdict(True)

# undo record: (cid, old_prev, first_visit, popped, old_last, edge_added)
_Record = tuple[int, int, bool, list[int], int, bool]


class _Core:
    """Shared transition system over dense integer symbol ids."""

    __slots__ = (
        "visited",
        "on_cycle",
        "children",
        "parents",
        "first_ix",
        "last_ix",
        "stack",
        "prev",
        "pos",
        "verdict",
        "_track_undo",
        "_undo",
    )

    def __init__(self, slots: int, track_undo: bool = False):
        self.visited = [False] * slots
        self.on_cycle = [False] * slots
        self.children: list[list[int]] = [[] for _ in range(slots)]
        self.parents: list[list[int]] = [[] for _ in range(slots)]
        self.first_ix = [0] * slots
        self.last_ix = [0] * slots
        self.stack: list[int] = []
        self.prev = -1
        self.pos = 0
        self.verdict: Verdict = STILL_UD
        self._track_undo = track_undo
        self._undo: list[_Record] = []

    def grow_to(self, slots: int) -> None:
        while len(self.visited) < slots:
            self.visited.append(False)
            self.on_cycle.append(False)
            self.children.append([])
            self.parents.append([])
            self.first_ix.append(0)
            self.last_ix.append(0)

    def slot_count(self) -> int:
        return len(self.visited)

    def step(self, cid: int) -> Verdict:
        """Consume one symbol id.  Absorbing unless undo tracking is on, in
        which case a rejected step leaves the state exactly as it found it."""
        if not self.verdict.ok and not self._track_undo:
            return self.verdict

        self.pos += 1
        pos = self.pos
        old_prev = self.prev
        first_visit = False
        popped: list[int] = []

        if pos == 1:
            self.visited[cid] = True
            self.stack.append(cid)
            self.first_ix[cid] = self.last_ix[cid] = 1
            self.prev = cid
            if self._track_undo:
                self._undo.append((cid, old_prev, True, popped, 0, False))
            return STILL_UD

        p = self.prev
        if not self.visited[cid]:
            first_visit = True
            self.visited[cid] = True
            self.stack.append(cid)
        elif cid not in self.children[p]:
            if self.on_cycle[cid]:
                return self._reject(
                    Reason.CYCLE_INTRUSION, (cid, old_prev, False, popped, self.last_ix[cid], False)
                )
            # close a new cycle: unwind the visit stack to the previous
            # occurrence of cid, marking everything popped
            while True:
                v = self.stack.pop()
                self.on_cycle[v] = True
                popped.append(v)
                if v == cid:
                    break
        # else: walking an already-drawn edge, nothing to mark

        ps = self.parents[cid]
        if len(ps) == 2:
            a, b = ps
            if not (self.last_ix[a] < self.first_ix[b] or self.last_ix[b] < self.first_ix[a]):
                return self._reject(
                    Reason.COMMUNICATING_PARENTS,
                    (cid, old_prev, first_visit, popped, self.last_ix[cid], False),
                )

        old_last = self.last_ix[cid]
        if first_visit:
            self.first_ix[cid] = pos
        self.last_ix[cid] = pos

        edge_added = False
        if cid not in self.children[p]:
            if len(self.children[p]) == 2 or len(self.parents[cid]) == 2:
                return self._reject(
                    Reason.DEGREE_OVERFLOW, (cid, old_prev, first_visit, popped, old_last, False)
                )
            self.children[p].append(cid)
            self.parents[cid].append(p)
            edge_added = True

        self.prev = cid
        if self._track_undo:
            self._undo.append((cid, old_prev, first_visit, popped, old_last, edge_added))
        return STILL_UD

    def _reject(self, reason: Reason, record: _Record) -> Verdict:
        verdict = Verdict(False, reason, self.pos)
        if self._track_undo:
            self._revert(record)
        else:
            self.verdict = verdict
        return verdict

    def _revert(self, record: _Record) -> None:
        """Restore the state to just before the step that produced `record`."""
        cid, old_prev, first_visit, popped, old_last, edge_added = record
        if self.pos == 1:
            self.visited[cid] = False
            self.first_ix[cid] = self.last_ix[cid] = 0
            self.stack.pop()
            self.prev = old_prev
            self.pos = 0
            return
        if edge_added:
            self.children[old_prev].pop()
            self.parents[cid].pop()
        self.last_ix[cid] = old_last
        if first_visit:
            self.visited[cid] = False
            self.first_ix[cid] = 0
            assert self.stack and self.stack[-1] == cid
            self.stack.pop()
        for v in reversed(popped):
            self.on_cycle[v] = False
            self.stack.append(v)
        self.prev = old_prev
        self.pos -= 1

    def undo_last(self) -> None:
        if not self._undo:
            raise ProtocolMisuseError("nothing to undo")
        self._revert(self._undo.pop())


class UdDecider:
    """Character-level decider over a fixed alphabet."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._core = _Core(len(alphabet))

    @property
    def verdict(self) -> Verdict:
        return self._core.verdict

    def slot_count(self) -> int:
        return self._core.slot_count()

    def stack_depth(self) -> int:
        return len(self._core.stack)

    def push(self, char: str) -> Verdict:
        """Consume one character; invalid symbols raise and leave state intact."""
        cid = self.alphabet.index(char)
        return self._core.step(cid)

    def feed(self, word: str) -> Verdict:
        """Push a whole word without early exit (absorbed pushes are cheap)."""
        return self.feed_ids(self.alphabet.encode(word))

    def feed_ids(self, ids: list[int]) -> Verdict:
        out = self.verdict
        step = self._core.step
        for cid in ids:
            out = step(cid)
        return out


def is_ud(word: str, alphabet: Alphabet | None = None) -> bool:
    """True iff `word` is uniquely decodable from its length-2 windows."""
    if alphabet is None:
        alphabet = Alphabet.from_text(word)
    core = _Core(len(alphabet))
    step = core.step
    for cid in alphabet.encode(word):
        if not step(cid).ok:
            return False
    return True


@dataclass(frozen=True)
class MergeOutcome:
    """Result of push_or_merge: either a plain accept or a fused shingle.

    `label` is the shingle that ended up as the latest edge; `merges` counts
    how many predecessor edges were folded into it.
    """

    accepted: bool
    label: str
    merges: int = 0

    @property
    def merged(self) -> bool:
        return self.merges > 0


class TokenDecider:
    """Decider over the node grams of length-l shingles.

    Each pushed shingle walks one edge from its length l-1 prefix to its
    length l-1 suffix.  Node tokens are interned on first sight, so state
    grows with the token alphabet, not the stream length.
    """

    def __init__(self, l: int, delimiter: str = DEFAULT_DELIMITER, track_undo: bool = False):
        if l < 2:
            raise InvalidParameterError(f"shingle length l must be >= 2, got {l}")
        self.l = l
        self.delimiter = delimiter
        self._ids: dict[str, int] = {}
        self._core = _Core(0, track_undo=track_undo)
        self._track_undo = track_undo
        self._labels: list[str] = []
        # (source id, target id) -> the one label allowed on that node pair
        self._edge_labels: dict[tuple[int, int], str] = {}
        # per accepted shingle: the edge key it introduced, or None
        self._label_keys: list[tuple[int, int] | None] = []

    @property
    def verdict(self) -> Verdict:
        return self._core.verdict

    def slot_count(self) -> int:
        return self._core.slot_count()

    def labels(self) -> list[str]:
        """Live shingle labels in stream order (post-merge view)."""
        return list(self._labels)

    def _intern(self, token: str) -> int:
        tid = self._ids.get(token)
        if tid is None:
            tid = len(self._ids)
            self._ids[token] = tid
            self._core.grow_to(tid + 1)
        return tid

    def push_token(self, token: str) -> Verdict:
        """Consume one node gram directly (plain streaming, no edge labels)."""
        if len(token) != self.l - 1:
            raise InvalidTokenError(f"token {token!r} is not a length-{self.l - 1} gram")
        return self._core.step(self._intern(token))

    def _split(self, shingle: str) -> tuple[str, str]:
        if len(shingle) < self.l:
            raise InvalidShingleError(f"shingle {shingle!r} shorter than l={self.l}")
        k = self.l - 1
        return shingle[:k], shingle[len(shingle) - k :]

    def push_shingle(self, shingle: str) -> Verdict:
        """Walk the edge of one shingle; the first push also visits its source."""
        src, dst = self._split(shingle)
        if not self._core.verdict.ok and not self._track_undo:
            return self._core.verdict
        sid = self._intern(src)
        if self._core.pos == 0:
            out = self._core.step(sid)
            if not out.ok:  # pragma: no cover - a lone visit cannot fail
                return out
        did = self._intern(dst)
        key = (sid, did)
        existing = self._edge_labels.get(key)
        if existing is not None and existing != shingle:
            verdict = Verdict(False, Reason.PARALLEL_LABELS, self._core.pos + 1)
            if not self._track_undo:
                self._core.verdict = verdict
            return verdict
        out = self._core.step(did)
        if out.ok:
            self._labels.append(shingle)
            if existing is None:
                self._edge_labels[key] = shingle
                self._label_keys.append(key)
            else:
                self._label_keys.append(None)
        return out

    def push_word(self, word: str) -> Verdict:
        out = self.verdict
        for s in shingle_sequence(word, self.l, self.delimiter):
            out = self.push_shingle(s)
        return out

    def undo_last(self) -> str:
        """Revert the most recent accepted shingle, returning its label."""
        if not self._track_undo:
            raise ProtocolMisuseError("undo tracking disabled")
        if not self._labels:
            raise ProtocolMisuseError("no accepted shingle to undo")
        self._core.undo_last()
        if self._core.pos == 1:
            # removing the first edge also removes the initial source visit
            self._core.undo_last()
        key = self._label_keys.pop()
        if key is not None:
            del self._edge_labels[key]
        return self._labels.pop()

    def push_or_merge(self, shingle: str) -> MergeOutcome:
        """Push a shingle, fusing it leftward with predecessors until accepted.

        Each fuse replaces the previous edge (u, v) and the pending edge
        (v, w) with the single transitive-closure edge (u, w) labeled by their
        non-overlapping concatenation.
        """
        if not self._track_undo:
            raise ProtocolMisuseError("push_or_merge requires undo tracking")
        out = self.push_shingle(shingle)
        if out.ok:
            return MergeOutcome(True, shingle, 0)
        merges = 0
        pending = shingle
        while True:
            if not self._labels:
                raise ProtocolMisuseError("merge requested with no prior edge")
            prev_label = self.undo_last()
            pending = noconcat(prev_label, pending, self.l)
            merges += 1
            if self.push_shingle(pending).ok:
                return MergeOutcome(False, pending, merges)

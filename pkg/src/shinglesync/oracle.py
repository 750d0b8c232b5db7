"""Ground-truth oracles, independent of the streaming decider.

decoding_count enumerates every way a shingle multiset can be walked as an
Eulerian path of its de Bruijn graph, so it is exponential in the worst case
and meant for desk-scale cross-validation only.  is_obstruction scans for the
pattern certificates of ambiguous decodings directly, without building any
automaton.  The pair transforms generate words guaranteed to share window
multisets, which exercises both oracles and the decider from a third angle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .alphabet import DEFAULT_DELIMITER, validate_word
from .errors import InvalidParameterError
from .shingles import ShingleMultiset, interior_qgrams


@dataclass(frozen=True)
class DecodingCount:
    """Number of distinct words consistent with a multiset, capped.

    `count` saturates at the cap used for the search; `witnesses` holds up to
    that many distinct decoded words, sorted.
    """

    count: int
    witnesses: tuple[str, ...]
    cap: int

    @property
    def saturated(self) -> bool:
        return self.count >= self.cap


def decoding_count(
    ms: ShingleMultiset,
    cap: int = 2,
    l: int | None = None,
    delimiter: str = DEFAULT_DELIMITER,
) -> DecodingCount:
    """Count distinct words whose delimited window multiset equals `ms`.

    Exhaustive backtracking over Eulerian paths from the all-delimiter node,
    deduplicating textually and stopping once `cap` distinct words are found.
    Multisets that assemble into no word at all yield count 0.
    """
    if cap < 1:
        raise InvalidParameterError(f"cap must be >= 1, got {cap}")
    if l is None:
        l = ms.base_len or ms.min_len()
    if l < 2:
        raise InvalidParameterError(f"shingle length l must be >= 2, got {l}")
    if any(len(s) < l for s in ms.entries):
        return DecodingCount(0, (), cap)

    k = l - 1
    start = delimiter * k
    total = ms.total()
    out_edges: dict[str, list[list]] = {}
    for label, mult in sorted(ms.entries.items()):
        src, dst = label[:k], label[len(label) - k :]
        out_edges.setdefault(src, []).append([dst, label, mult])
    if start not in out_edges:
        return DecodingCount(0, (), cap)

    words: set[str] = set()
    path: list[str] = []

    def search(node: str, used: int) -> bool:
        """Returns True when the cap is hit and the search can stop."""
        if used == total:
            if node == start:
                folded = start + "".join(path)
                word = folded[k:-k] if len(folded) > 2 * k else ""
                if delimiter not in word:
                    words.add(word)
                    if len(words) >= cap:
                        return True
            return False
        for edge in out_edges.get(node, ()):
            if edge[2] == 0:
                continue
            edge[2] -= 1
            path.append(edge[1][k:])
            if search(edge[0], used + 1):
                return True
            path.pop()
            edge[2] += 1
        return False

    search(start, 0)
    return DecodingCount(len(words), tuple(sorted(words)), cap)


def _next_occurrence_table(word: str, symbols: str) -> dict[str, list[int]]:
    """next_occ[c][i] = smallest j >= i with word[j] == c, or n if none."""
    n = len(word)
    table = {c: [n] * (n + 1) for c in symbols}
    for i in range(n - 1, -1, -1):
        for c in symbols:
            table[c][i] = table[c][i + 1]
        table[word[i]][i] = i
    return table


def find_obstruction(word: str, delimiter: str = DEFAULT_DELIMITER) -> tuple[str, str, str] | None:
    """Find a pattern certificate (x, a, b) that the word decodes ambiguously.

    A word is certified when, for some x and some a, b both distinct from x,
    it contains an occurrence of `a x` later followed by b with no a strictly
    between, and (independently positioned) an occurrence of a later followed
    by b with no x strictly between.  Returns the first certificate found in
    scan order, or None.
    """
    validate_word(word, delimiter)
    n = len(word)
    if n < 3:
        return None
    symbols = sorted(set(word))
    nxt = _next_occurrence_table(word, "".join(symbols))

    for x in symbols:
        others = [c for c in symbols if c != x]
        for a in others:
            # positions where the factor `a x` occurs
            ax_positions = [i for i in range(n - 1) if word[i] == a and word[i + 1] == x]
            if not ax_positions:
                continue
            a_positions = [i for i in range(n) if word[i] == a]
            for b in others:
                # membership via the `a x (not a)* b` pattern
                in_first = False
                for i in ax_positions:
                    j_b = nxt[b][i + 2]
                    j_a = nxt[a][i + 2]
                    if j_b < n and j_b <= j_a:
                        in_first = True
                        break
                if not in_first:
                    continue
                # membership via the `a (not x)* b` pattern
                for i in a_positions:
                    j_b = nxt[b][i + 1]
                    j_x = nxt[x][i + 1]
                    if j_b < n and j_b < j_x:
                        return (x, a, b)
    return None


def is_obstruction(word: str, delimiter: str = DEFAULT_DELIMITER) -> bool:
    """True iff the word matches some obstruction pattern (hence is not UD)."""
    return find_obstruction(word, delimiter) is not None


def obstruction_language_count(sigma_size: int) -> int:
    """Number of distinct obstruction pattern languages over an alphabet.

    There are sigma choices of x; for each, sigma-1 patterns with a = b and
    (sigma-1)(sigma-2) with a != b.
    """
    if sigma_size < 1:
        raise InvalidParameterError(f"alphabet size must be >= 1, got {sigma_size}")
    s = sigma_size
    return s * ((s - 1) + (s - 1) * (s - 2))


def _require_gram(z: str, q: int, name: str) -> None:
    if len(z) != q - 1:
        raise InvalidParameterError(f"{name} must be a length-{q - 1} gram, got {z!r}")


def transposition_pair(
    x1: str, z1: str, x2: str, z2: str, x3: str, x4: str, x5: str, q: int
) -> tuple[str, str]:
    """A pair of words with equal length-q window multisets, by block swap.

    The word x1 z1 X2 z2 x3 z1 X4 z2 x5 and its mate with X2 and X4 exchanged
    share every length-q window, since the swapped blocks sit between
    identical length q-1 anchors.
    """
    _require_gram(z1, q, "z1")
    _require_gram(z2, q, "z2")
    x = x1 + z1 + x2 + z2 + x3 + z1 + x4 + z2 + x5
    xp = x1 + z1 + x4 + z2 + x3 + z1 + x2 + z2 + x5
    return x, xp


def rotation_pair(x1: str, z1: str, x2: str, z2: str, q: int) -> tuple[str, str]:
    """A pair of words with equal interior length-q window multisets, by rotation.

    z1 x1 z2 x2 z1 and z2 x2 z1 x1 z2 share interior windows; their padded
    multisets also agree whenever z1 == z2, since then both words start and
    end with the same anchor gram.
    """
    _require_gram(z1, q, "z1")
    _require_gram(z2, q, "z2")
    x = z1 + x1 + z2 + x2 + z1
    xp = z2 + x2 + z1 + x1 + z2
    return x, xp


def interior_equal(x: str, xp: str, q: int) -> bool:
    """True iff the raw (unpadded) length-q window multisets agree."""
    return interior_qgrams(x, q) == Counter(interior_qgrams(xp, q))

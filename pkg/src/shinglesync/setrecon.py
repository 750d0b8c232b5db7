"""Multiset reconciliation via characteristic-polynomial evaluation.

Each (shingle, occurrence) instance is encoded injectively into the low range
of a prime field; both hosts evaluate the product of (Z - element) over their
multisets at shared points drawn from the reserved top range.  The pointwise
ratio of the two evaluations equals the ratio of the difference polynomials,
whose roots decode back to the differing instances.  A fixed-bound one-shot
mode and a rateless streaming mode share the machinery.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .alphabet import Alphabet
from .errors import (
    BoundExceededError,
    EncodingCapacityError,
    InvalidParameterError,
    InvalidPointError,
    PointCollisionError,
)
from .field import (
    GAUSS_LIMIT,
    FieldSpec,
    NewtonInterpolator,
    _draw_points,
    find_roots,
    interpolate_rational,
    interpolate_rational_gauss,
    pdivmod,
    peval,
    pgcd,
    pscale,
    rational_from_modulus,
    rational_points_needed,
)
from .shingles import ShingleMultiset

DEFAULT_OCC_BITS = 16


@dataclass(frozen=True)
class ShingleCodec:
    """Injective map between (shingle, occurrence) pairs and field elements.

    A shingle is read as digits base |alphabet|+1 (delimiter gets the top
    digit) behind a leading sentinel digit, then paired with the occurrence
    counter in the low `occ_bits` bits.  Everything must land below the
    field's reserved point range.
    """

    alphabet: Alphabet
    field: FieldSpec
    occ_bits: int = DEFAULT_OCC_BITS

    def encode(self, shingle: str, occurrence: int) -> int:
        if occurrence < 1:
            raise InvalidParameterError("occurrence counter starts at 1")
        if occurrence > (1 << self.occ_bits):
            raise EncodingCapacityError(f"occurrence {occurrence} exceeds {self.occ_bits} bits")
        base = len(self.alphabet) + 1
        delim_digit = len(self.alphabet)
        value = 1
        for ch in shingle:
            digit = delim_digit if ch == self.alphabet.delimiter else self.alphabet.index(ch)
            value = value * base + digit
        element = (value << self.occ_bits) | (occurrence - 1)
        if element >= self.field.encoding_limit:
            raise EncodingCapacityError(f"shingle {shingle!r} does not fit the encoding range")
        return element

    def decode(self, element: int) -> tuple[str, int]:
        if not 0 <= element < self.field.encoding_limit:
            raise InvalidParameterError("element outside the encoding range")
        occurrence = (element & ((1 << self.occ_bits) - 1)) + 1
        value = element >> self.occ_bits
        base = len(self.alphabet) + 1
        digits = []
        while value > 1:
            value, d = divmod(value, base)
            digits.append(d)
        if value != 1 or not digits:
            raise InvalidParameterError(f"element {element} is not a shingle encoding")
        chars = []
        for d in reversed(digits):
            chars.append(self.alphabet.delimiter if d == len(self.alphabet) else self.alphabet.symbols[d])
        return "".join(chars), occurrence

    def encode_multiset(self, ms: ShingleMultiset) -> list[int]:
        return [self.encode(s, occ) for s, occ in ms.instances()]

    def decode_multiset(self, elements: list[int]) -> ShingleMultiset:
        counts: dict[str, int] = {}
        for e in elements:
            s, _ = self.decode(e)
            counts[s] = counts.get(s, 0) + 1
        return ShingleMultiset(counts)


@dataclass(frozen=True)
class EvalBundle:
    """Characteristic-polynomial evaluations at shared sample points."""

    points: tuple[int, ...]
    values: tuple[int, ...]
    set_size: int

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise InvalidParameterError("points and values must align")
        if len(set(self.points)) != len(self.points):
            raise InvalidParameterError("sample points must be distinct")


@dataclass(frozen=True)
class Delta:
    """Instances present on exactly one side."""

    only_local: ShingleMultiset
    only_remote: ShingleMultiset

    @property
    def size(self) -> int:
        return self.only_local.total() + self.only_remote.total()


@dataclass(frozen=True)
class PartialDecode:
    """A verified decode with only the local side's roots extracted.

    The remaining polynomial's roots all lie in the remote multiset, so the
    peer can extract them by evaluating at its own elements instead of
    factoring.
    """

    only_local: ShingleMultiset
    remote_poly: tuple[int, ...]


def roots_by_candidates(poly: list[int], candidates: list[int], p: int) -> list[int] | None:
    """Roots of a squarefree polynomial known to lie in `candidates`.

    Evaluates at every candidate; returns None unless exactly degree-many
    distinct roots are found.
    """
    deg = len(poly) - 1
    if deg < 0:
        return None
    if deg == 0:
        return []
    roots = [e for e in set(candidates) if peval(poly, e, p) == 0]
    if len(roots) != deg:
        return None
    return sorted(roots)


def char_poly_evals(
    ms: ShingleMultiset, points: list[int], codec: ShingleCodec
) -> EvalBundle:
    """Evaluate prod (Z - element) over the encoded multiset at each point."""
    elements = codec.encode_multiset(ms)
    return eval_bundle(elements, points, codec.field)


def eval_bundle(elements: list[int], points: list[int], field: FieldSpec) -> EvalBundle:
    p = field.p
    limit = field.encoding_limit
    values = []
    for z in points:
        if not limit <= z < p:
            raise InvalidPointError(f"point {z} lies inside the encoding range")
        acc = 1
        for e in elements:
            acc = acc * (z - e) % p
        values.append(acc)
    return EvalBundle(tuple(points), tuple(values), len(elements))


def _degree_split(total: int, size_diff: int) -> tuple[int, int] | None:
    """Degrees (num, den) for a difference of at most `total` instances, with
    the larger side (`size_diff` = absolute set-size gap) in the numerator.

    The true difference count always has the parity of the size difference,
    so a mismatched bound rounds down.
    """
    if (total - size_diff) % 2 != 0:
        total -= 1
    den = (total - size_diff) // 2
    num = den + size_diff
    if den < 0 or num < 0:
        return None
    return num, den


def _decode_delta(
    num: list[int],
    den: list[int],
    codec: ShingleCodec,
    local_elements: set[int],
) -> Delta | None:
    """Roots -> instances, with structural checks; None when anything is off."""
    p = codec.field.p
    g = pgcd(num, den, p)
    if len(g) > 1:
        num = pdivmod(num, g, p)[0]
        den = pdivmod(den, g, p)[0]
    inv = pow(den[-1], p - 2, p) if den else 0
    num, den = pscale(num, inv, p), pscale(den, inv, p)
    if not num or num[-1] != 1:
        return None
    rng = random.Random(0x5EED)
    roots_local = find_roots(num, p, rng)
    roots_remote = find_roots(den, p, rng)
    if roots_local is None or roots_remote is None:
        return None
    if set(roots_local) & set(roots_remote):
        return None
    limit = codec.field.encoding_limit
    if any(r >= limit for r in roots_local) or any(r >= limit for r in roots_remote):
        return None
    if not set(roots_local) <= local_elements:
        return None
    if set(roots_remote) & local_elements:
        return None
    try:
        only_local = codec.decode_multiset(roots_local)
        only_remote = codec.decode_multiset(roots_remote)
    except InvalidParameterError:
        return None
    return Delta(only_local, only_remote)


def reconcile_fixed(
    local: ShingleMultiset,
    remote: EvalBundle,
    codec: ShingleCodec,
    bound: int,
    k: int = 8,
) -> Delta:
    """One-shot reconciliation assuming at most `bound` differing instances.

    The remote bundle must carry enough points for the interpolation plus `k`
    verification points.  Verification failure raises BoundExceededError, the
    caller's cue to raise the bound or switch to the rateless mode.
    """
    if bound < 0 or k < 1:
        raise InvalidParameterError("bound must be >= 0 and k >= 1")
    p = codec.field.p
    elements = codec.encode_multiset(local)
    local_bundle = eval_bundle(elements, list(remote.points), codec.field)
    diff = local_bundle.set_size - remote.set_size
    split = _degree_split(bound, abs(diff))
    if split is None:
        raise BoundExceededError(f"size difference {diff} exceeds the bound {bound}")
    # keep the larger difference side in the numerator so the Euclidean route
    # stops early; flip back when reading the roots
    flip = diff < 0
    deg_num, deg_den = split
    needed = rational_points_needed(deg_num, deg_den)
    if len(remote.points) < needed + k:
        raise InvalidParameterError(f"need {needed + k} shared points, have {len(remote.points)}")
    ratios = []
    for lv, rv in zip(local_bundle.values, remote.values):
        if rv == 0 or lv == 0:
            raise PointCollisionError("characteristic value is zero at a sample point")
        top, bot = (rv, lv) if flip else (lv, rv)
        ratios.append(top * pow(bot, p - 2, p) % p)
    zs = list(remote.points)
    result = interpolate_rational(zs[:needed], ratios[:needed], deg_num, deg_den, p)
    delta = None
    if result is not None:
        num, den = result
        top_vals = remote.values if flip else local_bundle.values
        bot_vals = local_bundle.values if flip else remote.values
        if _verify(num, den, zs[needed : needed + k], top_vals[needed : needed + k],
                   bot_vals[needed : needed + k], p):
            local_poly, remote_poly = (den, num) if flip else (num, den)
            delta = _decode_delta(local_poly, remote_poly, codec, set(elements))
    if delta is None:
        raise BoundExceededError("verification failed; difference larger than the bound")
    return delta


def _verify(
    num: list[int],
    den: list[int],
    points: list[int] | tuple[int, ...],
    local_vals: list[int] | tuple[int, ...],
    remote_vals: list[int] | tuple[int, ...],
    p: int,
) -> bool:
    """Check num/den == chi_local/chi_remote at every verification point."""
    for z, lv, rv in zip(points, local_vals, remote_vals):
        if peval(num, z, p) * rv % p != peval(den, z, p) * lv % p:
            return False
    return True


class RatelessSource:
    """Produces (point, value) pairs for the local multiset on demand."""

    def __init__(self, ms: ShingleMultiset, codec: ShingleCodec, seed: int):
        self.codec = codec
        self.elements = codec.encode_multiset(ms)
        self.set_size = len(self.elements)
        self._rng = random.Random(seed)
        self._seen: set[int] = set()

    def next_pairs(self, count: int) -> list[tuple[int, int]]:
        points = _draw_points(self._rng, self.codec.field, count, self._seen)
        p = self.codec.field.p
        out = []
        for z in points:
            acc = 1
            for e in self.elements:
                acc = acc * (z - e) % p
            out.append((z, acc))
        return out


class RatelessDecoder:
    """Consumes remote (point, value) pairs until a verified delta emerges.

    Degree hypotheses grow as pairs arrive; a hypothesis is accepted when the
    interpolated ratio checks out on `k` fresh verification pairs and its
    roots decode to instances consistent with the local multiset.
    """

    def __init__(
        self,
        local: ShingleMultiset,
        codec: ShingleCodec,
        remote_set_size: int,
        k: int = 8,
        partial: bool = False,
    ):
        if k < 1:
            raise InvalidParameterError("k must be >= 1")
        self.codec = codec
        self.k = k
        self.partial = partial
        self.elements = codec.encode_multiset(local)
        self._element_set = set(self.elements)
        self.size_diff = len(self.elements) - remote_set_size
        # larger difference side goes in the numerator (see reconcile_fixed)
        self._flip = self.size_diff < 0
        self._points: list[int] = []
        self._ratios: list[int] = []
        self._remote_vals: list[int] = []
        self._local_vals: list[int] = []
        self._t = 0  # hypothesis: instances beyond the forced size difference, per side
        self._interp = NewtonInterpolator(codec.field.p)
        self.pairs_consumed = 0
        self.result: Delta | PartialDecode | None = None

    def _hypothesis_degrees(self) -> tuple[int, int]:
        return self._t + abs(self.size_diff), self._t

    def pairs_wanted(self) -> int:
        """How many more pairs the next hypothesis attempt needs."""
        deg_num, deg_den = self._hypothesis_degrees()
        needed = rational_points_needed(deg_num, deg_den) + self.k
        return max(0, needed - len(self._points))

    def feed(self, point: int, value: int) -> Delta | PartialDecode | None:
        """Consume one remote pair; returns the result once confident."""
        if self.result is not None:
            return self.result
        if value == 0:
            raise PointCollisionError("remote evaluation is zero at a sample point")
        field = self.codec.field
        if not field.encoding_limit <= point < field.p:
            raise InvalidPointError(f"point {point} lies inside the encoding range")
        p = field.p
        acc = 1
        for e in self.elements:
            acc = acc * (point - e) % p
        self._points.append(point)
        self._local_vals.append(acc)
        self._remote_vals.append(value)
        top, bot = (value, acc) if self._flip else (acc, value)
        self._ratios.append(top * pow(bot, p - 2, p) % p)
        self.pairs_consumed += 1
        while self.pairs_wanted() == 0:
            if self._attempt():
                return self.result
            # step the hypothesis; exact up to 32 per side, widening beyond
            self._t += 1 if self._t < 32 else max(1, self._t // 8)
        return None

    def _attempt(self) -> bool:
        deg_num, deg_den = self._hypothesis_degrees()
        p = self.codec.field.p
        needed = rational_points_needed(deg_num, deg_den)
        if deg_num + deg_den <= GAUSS_LIMIT:
            result = interpolate_rational_gauss(
                self._points[:needed], self._ratios[:needed], deg_num, deg_den, p
            )
        else:
            # the interpolant is shared across attempts and only ever extended
            while len(self._interp.xs) < needed:
                i = len(self._interp.xs)
                self._interp.add_point(self._points[i], self._ratios[i])
            result = rational_from_modulus(
                self._interp.modulus(), self._interp.polynomial(), deg_num, deg_den, p
            )
        if result is None:
            return False
        num, den = result
        top_vals = self._remote_vals if self._flip else self._local_vals
        bot_vals = self._local_vals if self._flip else self._remote_vals
        if not _verify(
            num,
            den,
            self._points[needed : needed + self.k],
            top_vals[needed : needed + self.k],
            bot_vals[needed : needed + self.k],
            p,
        ):
            return False
        local_poly, remote_poly = (den, num) if self._flip else (num, den)
        if not self.partial:
            delta = _decode_delta(local_poly, remote_poly, self.codec, self._element_set)
            if delta is None:
                return False
            self.result = delta
            return True
        # drop any common factor, then pull the local side's roots out of the
        # local elements directly; the peer owns the remaining polynomial
        g = pgcd(local_poly, remote_poly, p)
        if len(g) > 1:
            local_poly = pdivmod(local_poly, g, p)[0]
            remote_poly = pdivmod(remote_poly, g, p)[0]
        local_roots = roots_by_candidates(local_poly, self.elements, p)
        if local_roots is None:
            return False
        try:
            only_local = self.codec.decode_multiset(local_roots)
        except InvalidParameterError:
            return False
        self.result = PartialDecode(only_local, tuple(remote_poly))
        return True

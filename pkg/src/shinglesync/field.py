"""Prime-field and polynomial arithmetic for characteristic-polynomial reconciliation.

Polynomials over GF(p) are little-endian coefficient lists; [] is the zero
polynomial and trailing zero coefficients are trimmed.  Everything here is
plain Python integers, sized for a fixed 61-bit default prime with smaller
primes selectable for tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidParameterError

# Smallest prime above 2**61; products of two residues stay well inside
# Python's fast int range.
P61 = 2305843009213693967

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a witness set deterministic for all 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field together with its reserved evaluation-point range.

    Sample points are drawn from the top `point_span` residues, which are
    excluded from the shingle-encoding range, so a point can never coincide
    with an encoded element.
    """

    p: int
    point_span: int

    def __post_init__(self):
        if not is_probable_prime(self.p):
            raise InvalidParameterError(f"{self.p} is not prime")
        if not 0 < self.point_span < self.p:
            raise InvalidParameterError("point_span must be in (0, p)")

    @classmethod
    def default61(cls) -> "FieldSpec":
        return cls(P61, 1 << 40)

    @classmethod
    def small(cls, p: int) -> "FieldSpec":
        return cls(p, max(2, p // 4))

    @property
    def encoding_limit(self) -> int:
        return self.p - self.point_span

    def sample_points(self, seed: int, count: int) -> list[int]:
        """Deterministic distinct points from the reserved top range."""
        rng = random.Random(seed)
        return _draw_points(rng, self, count, set())


def _draw_points(rng: random.Random, field: FieldSpec, count: int, seen: set[int]) -> list[int]:
    from .errors import CapacityError

    if count > field.point_span - len(seen):
        raise CapacityError("field too small for the requested number of points")
    out: list[int] = []
    while len(out) < count:
        z = field.p - 1 - rng.randrange(field.point_span)
        if z in seen:
            continue
        seen.add(z)
        out.append(z)
    return out


# ---------------------------------------------------------------------------
# polynomial arithmetic, little-endian coefficient lists


def ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return ptrim(out)


def psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return ptrim(out)


def pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return ptrim(out)


def pscale(a: list[int], c: int, p: int) -> list[int]:
    c %= p
    return ptrim([ai * c % p for ai in a])


def pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    b = ptrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = ptrim(list(a))
    if len(a) < len(b):
        return [], a
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[len(b) - 1 + i] * inv_lead % p
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return ptrim(q), ptrim(a[: len(b) - 1])


def pmod(a: list[int], b: list[int], p: int) -> list[int]:
    return pdivmod(a, b, p)[1]


def pmonic(a: list[int], p: int) -> list[int]:
    if not a:
        return []
    if a[-1] == 1:
        return list(a)
    return pscale(a, pow(a[-1], p - 2, p), p)


def pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, pmod(a, b, p)
    return pmonic(a, p)


def peval(a: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    """base**e reduced modulo the polynomial `mod`."""
    result = [1]
    base = pmod(base, mod, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), mod, p)
        base = pmod(pmul(base, base, p), mod, p)
        e >>= 1
    return result


def poly_from_roots(roots: list[int], p: int) -> list[int]:
    out = [1]
    for r in roots:
        out = pmul(out, [(-r) % p, 1], p)
    return out


class NewtonInterpolator:
    """Incremental polynomial interpolation via divided differences.

    Points can be appended one at a time; polynomial() returns the unique
    interpolant of degree < number of points, in coefficient form.
    """

    def __init__(self, p: int):
        self.p = p
        self.xs: list[int] = []
        self.coeffs: list[int] = []  # divided-difference coefficients
        self._basis: list[int] = [1]  # prod (x - x_i), little-endian
        self._poly: list[int] = []

    def add_point(self, x: int, y: int) -> None:
        p = self.p
        # divided difference of the new point against the current polynomial
        denom = 1
        for xi in self.xs:
            denom = denom * (x - xi) % p
        if denom == 0:
            raise InvalidParameterError("duplicate interpolation point")
        num = (y - peval(self._poly, x, p)) % p
        c = num * pow(denom, p - 2, p) % p
        self._poly = padd(self._poly, pscale(self._basis, c, p), p)
        self._basis = pmul(self._basis, [(-x) % p, 1], p)
        self.xs.append(x)
        self.coeffs.append(c)

    def polynomial(self) -> list[int]:
        return list(self._poly)

    def modulus(self) -> list[int]:
        """prod (Z - x_i) over the points added so far."""
        return list(self._basis)


def find_roots(f: list[int], p: int, rng: random.Random | None = None) -> list[int] | None:
    """All roots of a squarefree `f` that splits into distinct linear factors.

    Returns None when `f` does not split completely over GF(p).  Uses gcd
    with Z^p - Z followed by random equal-degree splitting; small fields fall
    back to direct scanning so tests have an independent route.
    """
    f = pmonic(f, p)
    if not f:
        raise InvalidParameterError("zero polynomial has every root")
    if len(f) == 1:
        return []
    if p < (1 << 20):
        roots = [x for x in range(p) if peval(f, x, p) == 0]
        return roots if len(roots) == len(f) - 1 else None
    # keep only rational roots: gcd(f, Z^p - Z)
    zp = ppowmod([0, 1], p, f, p)
    linear_part = pgcd(psub(zp, [0, 1], p), f, p)
    if len(linear_part) != len(f):
        return None
    rng = rng or random.Random(0xC0FFEE)
    roots: list[int] = []
    half = (p - 1) // 2

    stack = [f]
    while stack:
        g = stack.pop()
        if len(g) == 1:
            continue
        if len(g) == 2:
            roots.append((-g[0]) % p)
            continue
        while True:
            a = rng.randrange(p)
            probe = ppowmod([a, 1], half, g, p)
            d = pgcd(psub(probe, [1], p), g, p)
            if 0 < len(d) - 1 < len(g) - 1:
                stack.append(d)
                stack.append(pdivmod(g, d, p)[0])
                break
    return sorted(roots)


def solve_linear(matrix: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """Gaussian elimination mod p with column pivoting; free variables are 0.

    Returns None when the system is inconsistent.
    """
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    rows = [list(r) + [b % p] for r, b in zip(matrix, rhs)]
    pivot_cols: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(vi - f * vr) % p for vi, vr in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if rows[i][n_cols]:
            return None
    solution = [0] * n_cols
    for i, c in enumerate(pivot_cols):
        solution[c] = rows[i][n_cols]
    return solution


def interpolate_rational_gauss(
    zs: list[int], rs: list[int], deg_num: int, deg_den: int, p: int
) -> tuple[list[int], list[int]] | None:
    """Monic num/den with num(z) = r * den(z) at each point, via a linear solve.

    Uses exactly deg_num + deg_den points; both polynomials are monic of the
    exact degrees requested, so the system is square.
    """
    u = deg_num + deg_den
    if len(zs) < u:
        raise InvalidParameterError(f"need {u} points, have {len(zs)}")
    matrix: list[list[int]] = []
    rhs: list[int] = []
    for z, r in zip(zs[:u], rs[:u]):
        row = [pow(z, j, p) for j in range(deg_num)]
        row += [(-r * pow(z, j, p)) % p for j in range(deg_den)]
        matrix.append(row)
        rhs.append((r * pow(z, deg_den, p) - pow(z, deg_num, p)) % p)
    sol = solve_linear(matrix, rhs, p) if u else []
    if sol is None:
        return None
    num = ptrim(sol[:deg_num] + [1])
    den = ptrim(sol[deg_num:] + [1])
    return num, den


def rational_from_modulus(
    big_m: list[int], f: list[int], deg_num: int, deg_den: int, p: int
) -> tuple[list[int], list[int]] | None:
    """Rational reconstruction of f mod big_m via the extended Euclidean
    algorithm, stopping at the first remainder of degree <= deg_num."""
    r0, r1 = big_m, f
    t0, t1 = [], [1]
    while r1 and len(r1) - 1 > deg_num:
        q, rem = pdivmod(r0, r1, p)
        r0, r1 = r1, rem
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    if not r1 or not t1 or len(t1) - 1 > deg_den:
        return None
    g = pgcd(r1, t1, p)
    if len(g) > 1:
        r1 = pdivmod(r1, g, p)[0]
        t1 = pdivmod(t1, g, p)[0]
    inv = pow(t1[-1], p - 2, p)
    return pscale(r1, inv, p), pscale(t1, inv, p)


def interpolate_rational_eea(
    zs: list[int], rs: list[int], deg_num: int, deg_den: int, p: int
) -> tuple[list[int], list[int]] | None:
    """Rational reconstruction via the extended Euclidean algorithm.

    Needs deg_num + deg_den + 1 points: interpolate F through the ratios,
    then reconstruct from (prod (Z - z_i), F).
    """
    u = deg_num + deg_den + 1
    if len(zs) < u:
        raise InvalidParameterError(f"need {u} points, have {len(zs)}")
    interp = NewtonInterpolator(p)
    for z, r in zip(zs[:u], rs[:u]):
        interp.add_point(z, r)
    return rational_from_modulus(interp.modulus(), interp.polynomial(), deg_num, deg_den, p)


# above this many unknowns the cubic-cost linear solve is replaced by the
# quadratic Euclidean route (one extra sample point)
GAUSS_LIMIT = 64


def rational_points_needed(deg_num: int, deg_den: int) -> int:
    u = deg_num + deg_den
    return u if u <= GAUSS_LIMIT else u + 1


def interpolate_rational(
    zs: list[int], rs: list[int], deg_num: int, deg_den: int, p: int
) -> tuple[list[int], list[int]] | None:
    if deg_num + deg_den <= GAUSS_LIMIT:
        return interpolate_rational_gauss(zs, rs, deg_num, deg_den, p)
    return interpolate_rational_eea(zs, rs, deg_num, deg_den, p)

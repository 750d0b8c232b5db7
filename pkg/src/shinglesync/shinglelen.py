"""Shingle-length sizing for random bit strings, via the Lambert W function.

For n iid bits that are 0 with probability p > 0.5, the sizing rule bounds
the shingle length at n + 1 + W(-ln(p) p^-n)/ln(p), which grows like
1 + log(n)/log(1/p).  The W argument overflows floats long before n gets
interesting, so the solver works on log(z) directly: for z > 0 the principal
branch satisfies W + ln(W) = ln(z).
"""

from __future__ import annotations

import math

from .errors import InvalidParameterError


def lambert_w_from_log(log_z: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    """Principal-branch W(e**log_z), Newton iteration on W + ln W = log_z."""
    w = log_z - math.log(log_z) if log_z > 1.0 else math.exp(log_z - math.exp(log_z - 1.0))
    if w <= 0.0:
        w = 1e-9
    for _ in range(max_iter):
        f = w + math.log(w) - log_z
        step = f / (1.0 + 1.0 / w)
        w_next = w - step
        if w_next <= 0.0:
            w_next = w / 2.0
        if abs(w_next - w) <= tol * max(1.0, abs(w_next)):
            return w_next
        w = w_next
    return w


def lambert_w(z: float) -> float:
    """Principal-branch W(z) for z > 0 (real, positive arguments only)."""
    if z <= 0.0:
        raise InvalidParameterError("only positive arguments are supported")
    return lambert_w_from_log(math.log(z))


def shingle_len_bound(n: int, p: float) -> float:
    """The real-valued sizing threshold for n bits at bit bias p."""
    if not 0.5 < p < 1.0:
        raise InvalidParameterError(f"p must lie in (0.5, 1), got {p}")
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n}")
    ln_p = math.log(p)
    # z = -ln(p) * p**-n, handled in log space
    log_z = math.log(-ln_p) - n * ln_p
    w = lambert_w_from_log(log_z)
    return n + 1 + w / ln_p


def recommend_shingle_len(n: int, p: float) -> int:
    """Smallest usable shingle length at the sizing threshold, at least 2."""
    return max(2, math.ceil(shingle_len_bound(n, p) - 1e-9))

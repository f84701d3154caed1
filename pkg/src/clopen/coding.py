"""Bit-exact codings of finite sequences and rationals.

Every finite sequence of naturals is coded by a single natural through a
length-tagged iterated Cantor pairing:

    encode(())            = 0
    encode(u0, ..., u_{n-1}) = 1 + C(n - 1, C(u0, C(u1, ... C(u_{n-2}, u_{n-1}))))

with C(a, b) = (a + b)(a + b + 1)/2 + a.  The scheme is a bijection between
the naturals and all finite sequences, so every natural decodes; there is no
"non-code" branch.  Codes are a wire format: they appear verbatim in instance
and output files and must never change between releases.

Arbitrary-precision integers are required throughout; codes of short
sequences with small entries stay small, but they grow quickly with length.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence, Tuple

SeqCode = int
Rational = Fraction


def pair(a: int, b: int) -> int:
    """Cantor pairing C(a, b), a bijection from pairs of naturals to naturals."""
    s = a + b
    return s * (s + 1) // 2 + a


def unpair(z: int) -> Tuple[int, int]:
    """Inverse of pair()."""
    w = (isqrt(8 * z + 1) - 1) // 2
    a = z - w * (w + 1) // 2
    return a, w - a


@lru_cache(maxsize=1 << 16)
def _encode_tuple(u: Tuple[int, ...]) -> SeqCode:
    n = len(u)
    if n == 0:
        return 0
    fold = u[n - 1]
    for i in range(n - 2, -1, -1):
        fold = pair(u[i], fold)
    return 1 + pair(n - 1, fold)


def encode(u: Sequence[int]) -> SeqCode:
    """Code of a finite sequence of naturals; 0 codes the empty sequence."""
    return _encode_tuple(tuple(u))


@lru_cache(maxsize=1 << 16)
def decode(s: SeqCode) -> Tuple[int, ...]:
    """The sequence coded by s.  Total: every natural is a valid code."""
    if s == 0:
        return ()
    tag, fold = unpair(s - 1)
    out = []
    for _ in range(tag):
        a, fold = unpair(fold)
        out.append(a)
    out.append(fold)
    return tuple(out)


def lh(s: SeqCode) -> int:
    """Length of the sequence coded by s."""
    if s == 0:
        return 0
    return unpair(s - 1)[0] + 1


def proj(s: SeqCode, i: int) -> int:
    """The i-th entry of the coded sequence, 0 for i past its length."""
    u = decode(s)
    return u[i] if i < len(u) else 0


def append(s: SeqCode, k: int) -> SeqCode:
    """Code of the coded sequence extended by one entry k."""
    return encode(decode(s) + (k,))


def is_prefix(s: SeqCode, t: SeqCode) -> bool:
    """Whether the sequence coded by s is an initial segment of t's."""
    u, v = decode(s), decode(t)
    return len(u) <= len(v) and v[: len(u)] == u


def pair_code(i: int, n: int) -> SeqCode:
    """Code of the two-entry sequence (i, n)."""
    return 1 + pair(1, pair(i, n))


def quad_code(i: int, j: int, m: int, n: int) -> SeqCode:
    """Code of the four-entry sequence (i, j, m, n)."""
    return 1 + pair(3, pair(i, pair(j, pair(m, n))))


def split_pair_code(t: SeqCode) -> Tuple[int, int] | None:
    """(i, n) if t codes a two-entry sequence, else None."""
    u = decode(t)
    if len(u) == 2:
        return u[0], u[1]
    return None


def rational_of_index(s: int) -> Rational:
    """The rational with index s: (-1)^(s)_0 * (s)_1 / ((s)_2 + 1).

    Hits every rational; the result is always in lowest terms with a
    positive denominator.
    """
    u = decode(s)
    sign = u[0] if len(u) > 0 else 0
    num = u[1] if len(u) > 1 else 0
    den = (u[2] if len(u) > 2 else 0) + 1
    q = Fraction(num, den)
    return -q if sign % 2 else q


def index_of_rational(q: Rational) -> int:
    """An index s with rational_of_index(s) == q (the canonical one)."""
    sign = 0 if q >= 0 else 1
    return encode((sign, abs(q.numerator), q.denominator - 1))

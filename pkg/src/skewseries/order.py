"""Exponent vectors, monomial orders and the shuffle partial order.

Exponents are plain tuples of non-negative ints. Orders are referred to by
name (``"lex"``, ``"deglex"``, ``"degrevlex"``); every comparison goes
through :func:`sort_key`, so sorting a list of exponents ascending in an
order is ``sorted(xs, key=sort_key_fn(order))``.

Power-series convention: the *least* monomial of an element is its leading
monomial, so ``lex`` is "leftmost nonzero entry of beta - alpha positive
means alpha < beta", which puts (0,1,1) below (2,0,0).
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, Sequence

Exponent = tuple[int, ...]

ORDERS = ("lex", "deglex", "degrevlex")

LESS, EQUAL, GREATER = -1, 0, 1


class _Infinity:
    """Sentinel exponent strictly above every exponent (LM of zero)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("skewseries.INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self


INF = _Infinity()


def check_order(order: str) -> str:
    if order not in ORDERS:
        raise ValueError(f"unknown monomial order {order!r}; choose from {', '.join(ORDERS)}")
    return order


def _lex_key(a: Exponent):
    return a


def _deglex_key(a: Exponent):
    return (sum(a), a)


def _degrevlex_key(a: Exponent):
    # ties in degree are broken by the rightmost nonzero entry of b - a
    # being negative, i.e. larger trailing entries sort first
    return (sum(a), tuple(-c for c in reversed(a)))


_KEYS = {"lex": _lex_key, "deglex": _deglex_key, "degrevlex": _degrevlex_key}


def sort_key_fn(order: str) -> Callable[[Exponent], tuple]:
    return _KEYS[check_order(order)]


def sort_key(order: str, a: Exponent) -> tuple:
    return _KEYS[check_order(order)](a)


def compare(order: str, a: Exponent, b: Exponent) -> int:
    """Return LESS, EQUAL or GREATER for ``a`` against ``b``."""
    if a is INF or b is INF:
        if a is b:
            return EQUAL
        return GREATER if a is INF else LESS
    if len(a) != len(b):
        raise ValueError(f"exponent length mismatch: {len(a)} vs {len(b)}")
    ka, kb = sort_key(order, tuple(a)), sort_key(order, tuple(b))
    if ka < kb:
        return LESS
    if ka > kb:
        return GREATER
    return EQUAL


def precedes(order: str, a: Exponent, b: Exponent) -> bool:
    """Strict ``a < b`` in the order."""
    return compare(order, a, b) == LESS


def order_min(order: str, exps: Iterable[Exponent]):
    key = sort_key_fn(order)
    exps = list(exps)
    if not exps:
        return INF
    return min(exps, key=key)


def degree(a: Exponent) -> int:
    return sum(a)


def unit_vector(n: int, i: int) -> Exponent:
    """e_i with 1-based index i."""
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def sub_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def div_leq(a: Exponent, b: Exponent) -> bool:
    """Divisibility: True iff b - a has no negative entry."""
    if len(a) != len(b):
        raise ValueError("exponent length mismatch")
    return all(x <= y for x, y in zip(a, b))


def in_F(a: Exponent, b: Exponent) -> bool:
    """Membership of b in the shuffle cone F(a).

    F(a) is generated from a by adding standard basis vectors and elementary
    shuffles e_i - e_j (i <= j) while staying in N^n. It is the set of b with
    |b| >= |a| whose prefix sums dominate those of a.
    """
    if len(a) != len(b):
        raise ValueError("exponent length mismatch")
    sa = sb = 0
    for x, y in zip(a[:-1], b[:-1]):
        sa += x
        sb += y
        if sb < sa:
            return False
    return sum(b) >= sum(a)


def join(a: Exponent, b: Exponent) -> Exponent:
    if len(a) != len(b):
        raise ValueError("exponent length mismatch")
    return tuple(max(x, y) for x, y in zip(a, b))


def exponents_of_degree(n: int, d: int):
    """All exponents in N^n of total degree exactly d (lex-descending)."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in exponents_of_degree(n - 1, d - first):
            yield (first,) + rest


def exponents_below(n: int, N: int) -> list[Exponent]:
    """All exponents of total degree < N, graded by degree."""
    out = []
    for d in range(N):
        out.extend(exponents_of_degree(n, d))
    return out


def iterate_below_cap(order: str, n: int, N: int) -> list[Exponent]:
    """All exponents with |a| < N sorted ascending in ``order``."""
    if N < 1:
        raise ValueError("cap N must be >= 1")
    exps = exponents_below(n, N)
    assert len(exps) == math.comb(N - 1 + n, n)
    return sorted(exps, key=sort_key_fn(order))


def is_triangular_pair(order: str, a: Exponent, b: Exponent) -> bool:
    """Does the implication ``b in F(a) => a <= b`` hold for this pair?"""
    if not in_F(a, b):
        return True
    return compare(order, a, b) != GREATER


def word_exponent(word: Sequence[int], n: int) -> Exponent:
    """Exponent of a word of 1-based variable indices."""
    e = [0] * n
    for i in word:
        e[i - 1] += 1
    return tuple(e)


def exponent_word(a: Exponent) -> list[int]:
    """The sorted word x_1^{a_1} ... x_n^{a_n} as 1-based indices."""
    return [i + 1 for i, c in enumerate(a) for _ in range(c)]


def all_exponents_upto(n: int, d: int) -> list[Exponent]:
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) <= d]

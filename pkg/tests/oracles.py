"""Independent reference computations used to freeze expected values.

Nothing here calls the multiplication engine or the division code.
"""

from __future__ import annotations

import itertools
import math
from collections import deque


def shuffle_closure(alpha, max_degree):
    """Breadth-first closure of {alpha} under adding e_i - e_j (i < j) and e_k."""
    n = len(alpha)
    start = tuple(alpha)
    seen = {start}
    todo = deque([start])
    while todo:
        a = todo.popleft()
        nxt = []
        for i in range(n):
            for j in range(i + 1, n):
                if a[j] > 0:
                    b = list(a)
                    b[i] += 1
                    b[j] -= 1
                    nxt.append(tuple(b))
        if sum(a) < max_degree:
            for k in range(n):
                b = list(a)
                b[k] += 1
                nxt.append(tuple(b))
        for b in nxt:
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def teichmuller_power(c, p, N):
    """Teichmueller lift mod p^N as c^(p^(N-1))."""
    return pow(c % p, p ** (N - 1), p ** N)


def digits(a, p, N):
    """Greedy p-adic digit expansion with Teichmueller digits, mod p^N."""
    M = p ** N
    a %= M
    out = []
    for j in range(N):
        r = (a // p ** j) % p
        if r:
            d = teichmuller_power(r, p, N)
            out.append((j, d))
            a = (a - d * p ** j) % M
    assert a == 0
    return out


def vp(n, p):
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def falling_factorial_valuation(a, r, p):
    return vp(math.factorial(a) // math.factorial(a - p ** r), p)


def _monomials(n, N):
    return [e for d in range(N) for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]


def _rank_mod_p(rows, p):
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def commutative_member(f_terms, gens_terms, n, N, p):
    """Is f in the ideal (gens) + m^N of F_p[x_1..x_n]/m^N?

    Terms are dicts exponent -> coefficient. The ideal mod m^N is spanned by
    the shifted multiples x^g * h; membership is a rank comparison.
    """
    mons = _monomials(n, N)
    idx = {m: i for i, m in enumerate(mons)}

    def vec(terms):
        v = [0] * len(mons)
        for e, c in terms.items():
            if sum(e) < N:
                v[idx[tuple(e)]] = (v[idx[tuple(e)]] + c) % p
        return v

    rows = []
    for h in gens_terms:
        for g in mons:
            shifted = {tuple(a + b for a, b in zip(e, g)): c for e, c in h.items()}
            rows.append(vec(shifted))
    rows = [r for r in rows if any(r)]
    base = _rank_mod_p(rows, p) if rows else 0
    return _rank_mod_p(rows + [vec(f_terms)], p) == base

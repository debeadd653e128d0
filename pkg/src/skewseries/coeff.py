"""Coefficient arithmetic for the two base-ring cases.

Case ``A``: a finite field F_{p^m}. Elements are encoded as integers
``0 <= c < p^m`` whose base-p digits are the coefficients of a polynomial
over F_p, reduced modulo a fixed monic irreducible of degree m. The
multiplicative section k -> A is the identity.

Case ``B``: the p-adic integers Z_p, truncated to Z/p^N. The residue field
is F_p and the multiplicative (Teichmueller) section sends a residue c to
the unique (p-1)-th root of unity, or 0, congruent to c.

Scalars are plain Python ints throughout. A *digit* is a scalar lying in
the image of the multiplicative section; digits are represented by their
carrier value (the Teichmueller lift itself in case B).
"""

from __future__ import annotations

import math
from functools import cached_property

DEFAULT_IRREDUCIBLES: dict[tuple[int, int], tuple[int, ...]] = {
    # (p, m) -> monic irreducible, coefficients from constant term upward
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 5): (1, 0, 0, 1, 0, 1),
    (2, 6): (1, 0, 0, 0, 0, 1, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 0, 2, 1),
    (5, 2): (1, 1, 1),
    (7, 2): (1, 0, 1),
}


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _poly_mulmod(a: list[int], b: list[int], f: tuple[int, ...], p: int) -> list[int]:
    m = len(f) - 1
    prod = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * f[j]) % p
    return prod[:m]


def _is_irreducible(f: tuple[int, ...], p: int) -> bool:
    # x^(p^k) != x mod f for k < m with gcd conditions is overkill at these
    # sizes; brute-force trial division by monic polynomials instead.
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for code in range(p**d):
            g = [(code // p**i) % p for i in range(d)] + [1]
            r = list(f)
            for i in range(m - d, -1, -1):
                c = r[i + d]
                if c:
                    for j in range(d + 1):
                        r[i + j] = (r[i + j] - c * g[j]) % p
            if not any(r[:d]):
                return False
    return True


class CoefficientDomain:
    """The coefficient ring A together with its residue field k.

    ``precision`` is the global cap N: scalars live modulo p^N in case B.
    In case A it is kept for bookkeeping only.
    """

    def __init__(self, case: str, p: int, m: int = 1, precision: int = 1,
                 irreducible: tuple[int, ...] | None = None):
        if case not in ("A", "B"):
            raise ValueError(f"unknown case {case!r}; expected 'A' or 'B'")
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if m < 1:
            raise ValueError("extension degree m must be >= 1")
        if precision < 1:
            raise ValueError("precision must be >= 1")
        if case == "B" and m != 1:
            raise ValueError("case B supports only Z_p (residue field F_p, m = 1)")
        self.case = case
        self.p = p
        self.m = m
        self.precision = precision
        self.q = p**m
        if case == "A" and m > 1:
            if irreducible is None:
                try:
                    irreducible = DEFAULT_IRREDUCIBLES[(p, m)]
                except KeyError:
                    raise ValueError(
                        f"no default irreducible for F_{p}^{m}; pass one explicitly") from None
            irreducible = tuple(int(c) % p for c in irreducible)
            if len(irreducible) != m + 1 or not _is_irreducible(irreducible, p):
                raise ValueError(f"{irreducible} is not a monic irreducible of degree {m} over F_{p}")
        else:
            irreducible = None
        self.irreducible = irreducible
        self.modulus = p**precision if case == "B" else self.q

    def __repr__(self) -> str:
        if self.case == "B":
            return f"CoefficientDomain(B, Z_{self.p} mod {self.p}^{self.precision})"
        return f"CoefficientDomain(A, F_{self.q})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, CoefficientDomain) and self.case == other.case
                and self.p == other.p and self.m == other.m
                and self.precision == other.precision and self.irreducible == other.irreducible)

    def __hash__(self) -> int:
        return hash((self.case, self.p, self.m, self.precision, self.irreducible))

    def with_precision(self, precision: int) -> CoefficientDomain:
        return CoefficientDomain(self.case, self.p, self.m, precision, self.irreducible)

    @property
    def is_prime_field(self) -> bool:
        return self.case == "A" and self.m == 1

    # -- extension field tables -------------------------------------------------

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        p, m, f = self.p, self.m, self.irreducible
        q = self.q

        def to_poly(c):
            return [(c // p**i) % p for i in range(m)]

        def to_code(v):
            return sum(c * p**i for i, c in enumerate(v))

        for g in range(2, q):
            exp = [1]
            gp = to_poly(g)
            cur = to_poly(1)
            for _ in range(q - 2):
                cur = _poly_mulmod(cur, gp, f, p)
                exp.append(to_code(cur))
            if len(set(exp)) == q - 1:
                log = [0] * q
                for i, e in enumerate(exp):
                    log[e] = i
                return exp, log
        raise AssertionError("finite field without a primitive element")

    def _fadd(self, a: int, b: int) -> int:
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def _fneg(self, a: int) -> int:
        p = self.p
        out, place = 0, 1
        while a:
            out += ((-a) % p) * place
            a //= p
            place *= p
        return out

    def _fmul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return exp[(log[a] + log[b]) % (self.q - 1)]

    # -- scalar operations -------------------------------------------------------

    def reduce(self, a: int) -> int:
        if self.case == "B" or self.m == 1:
            return a % self.modulus
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element code of F_{self.q}")
        return a

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> A."""
        if self.case == "A":
            return n % self.p
        return n % self.modulus

    def add(self, a: int, b: int) -> int:
        if self.case == "A" and self.m > 1:
            return self._fadd(a, b)
        return (a + b) % self.modulus

    def neg(self, a: int) -> int:
        if self.case == "A" and self.m > 1:
            return self._fneg(a)
        return (-a) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.case == "A" and self.m > 1:
            return self._fmul(a, b)
        return (a * b) % self.modulus

    def inv(self, a: int) -> int:
        """Inverse of a unit scalar."""
        if self.residue(a) == 0:
            raise ZeroDivisionError("scalar is not a unit")
        if self.case == "A" and self.m > 1:
            exp, log = self._exp_log
            return exp[(-log[a]) % (self.q - 1)]
        return pow(a, -1, self.modulus)

    def residue(self, a: int) -> int:
        """Reduction A -> k (element code in k)."""
        if self.case == "B":
            return a % self.p
        return self.reduce(a)

    # -- multiplicative section and standard forms -------------------------------

    @cached_property
    def _teich(self) -> list[int]:
        return [self._teich_lift(c) for c in range(self.q)]

    def _teich_lift(self, c: int) -> int:
        if self.case == "A":
            return c
        M = self.modulus
        cur = c % self.p
        while True:
            nxt = pow(cur, self.p, M)
            if nxt == cur:
                return cur
            cur = nxt

    def teichmuller(self, residue: int) -> int:
        """The unique digit congruent to ``residue`` mod p."""
        if self.case == "B":
            return self._teich[residue % self.p]
        return self._teich[self.reduce(residue)]

    def digit_residue(self, d: int) -> int:
        """Printing representative of a digit: its residue."""
        return self.residue(d)

    def is_digit(self, a: int) -> bool:
        if self.case == "A":
            return 0 <= a < self.q
        a %= self.modulus
        return a == self._teich[a % self.p]

    def digit_mul(self, a: int, b: int) -> int:
        return self.mul(a, b)

    def digit_inv(self, d: int) -> int:
        """Inverse of a nonzero digit; again a digit."""
        return self.teichmuller(self._residue_inv(self.residue(d)))

    def _residue_inv(self, c: int) -> int:
        if c == 0:
            raise ZeroDivisionError("zero digit has no inverse")
        if self.case == "B" or self.m == 1:
            return pow(c, -1, self.p)
        return self.inv(c)

    def scalar_add(self, a: int, b: int) -> int:
        return self.add(a, b)

    def scalar_standard_form(self, a: int, precision: int | None = None) -> list[tuple[int, int]]:
        """Digits ``[(j, a_j)]`` with a = sum a_j p^j (case B) and a_j digits.

        Only exponents ``j < precision`` (default N) are produced; zero digits
        are omitted. In case A the expansion is the single term ``(0, a)``.
        """
        if self.case == "A":
            a = self.reduce(a)
            return [(0, a)] if a else []
        if precision is None:
            precision = self.precision
        p = self.p
        teich = self._teich
        a %= self.modulus
        out = []
        for j in range(precision):
            if a == 0:
                break
            d = teich[a % p]
            if d:
                out.append((j, d))
            a = (a - d) // p
        return out

    def from_digits(self, digits, precision: int | None = None) -> int:
        """Inverse of :meth:`scalar_standard_form`."""
        if self.case == "A":
            total = 0
            for j, d in digits:
                if j == 0:
                    total = self.add(total, d)
            return total
        if precision is None:
            precision = self.precision
        mod = self.p**precision
        return sum(d * self.p**j for j, d in digits if j < precision) % mod

    def scalar_valuation(self, a: int) -> float | int:
        """p-adic valuation; ``math.inf`` for zero (i.e. ``>= N`` in case B)."""
        if self.case == "A":
            return 0 if self.reduce(a) else math.inf
        a %= self.modulus
        if a == 0:
            return math.inf
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v


def teichmuller(domain: CoefficientDomain, residue: int) -> int:
    return domain.teichmuller(residue)


def scalar_standard_form(domain: CoefficientDomain, a: int) -> list[tuple[int, int]]:
    return domain.scalar_standard_form(a)


def scalar_valuation(domain: CoefficientDomain, a: int):
    return domain.scalar_valuation(a)


def digit_mul(domain: CoefficientDomain, a: int, b: int) -> int:
    return domain.digit_mul(a, b)


def scalar_add(domain: CoefficientDomain, a: int, b: int) -> int:
    return domain.scalar_add(a, b)

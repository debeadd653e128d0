"""Right division, S-elements and Groebner bases modulo m^N.

All statements are truncated: an element is zero when it vanishes modulo
m^N, membership means membership in I + m^N, and a basis is accepted when
every S-element remainder vanishes modulo m^N.

Division by a tuple F = (f_1, ..., f_s) works with left multiples: the
result satisfies ``f = q_1 f_1 + ... + q_s f_s + r``.

Under lex, a divisor can have tail monomials of smaller total degree than
its leading monomial. Subtracting multiples of it then feeds terms from
above the cap back below it, so a single pass at cap N is not enough. For
those inputs the division is repeated with growing working caps until two
consecutive runs agree below degree N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .order import INF, Exponent, div_leq, join, sort_key_fn, sub_exp
from .ring import Element, Ring


class DivisionError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    """How far a division result can be trusted.

    ``exact``: a single pass at cap N is exact modulo m^N.
    ``stabilized``: two consecutive runs, the last at working cap ``cap``,
    agreed below degree N. ``failed``: no agreement up to ``cap``.
    """

    kind: str
    cap: int

    def __str__(self):
        return "exact" if self.kind == "exact" else f"{self.kind}({self.cap})"

    @property
    def ok(self) -> bool:
        return self.kind != "failed"


@dataclass
class DivisionRegions:
    """Partition of N^n by the leading monomials of a divisor tuple.

    Region i (0-based) is (LM(f_i) + N^n) minus the earlier regions; the rest
    is the complement region, reported as ``None``.
    """

    corners: list

    def region(self, alpha: Exponent):
        for i, c in enumerate(self.corners):
            if c is not INF and div_leq(c, alpha):
                return i
        return None

    def in_region(self, alpha: Exponent, i) -> bool:
        return self.region(alpha) == i

    def complement_below(self, n: int, N: int) -> list[Exponent]:
        from .order import exponents_below
        return [a for a in exponents_below(n, N) if self.region(a) is None]


def delta_regions(F: Sequence[Element]) -> DivisionRegions:
    if not F:
        raise ValueError("empty divisor tuple")
    return DivisionRegions([f.lm() for f in F])


@dataclass
class DivisionResult:
    quotients: list[Element]
    remainder: Element
    truncated: bool
    certificate: Certificate
    regions: DivisionRegions

    def __iter__(self):
        return iter((self.quotients, self.remainder))


def degree_drop(f: Element) -> int | float:
    """|LM(f)| minus the least total degree of the non-leading terms."""
    lm = f.lm()
    tail = [sum(e) for e in f.terms if e != lm]
    if not tail:
        return float("-inf")
    return sum(lm) - min(tail)


def _divide_once(ring: Ring, f: Element, F: list[Element]):
    """One division pass inside ``ring`` (all inputs belong to it)."""
    ring._build_engine()
    dom = ring.domain
    lms = [g.lm() for g in F]
    memos = [{0: g.vec} for g in F]
    g = np.array(f.vec, copy=True)
    q = [ring._zeros() for _ in F]
    r = ring._zeros()
    p = ring.p
    caseB = ring.case == "B"
    while True:
        pos = ring._lm_pos(g, ring.order)
        if pos is None:
            break
        k, j = pos
        beta = ring._full(k, j)
        c = int(g[k])
        t = dom.teichmuller((c // p ** j) % p) if caseB else c
        i = next((i for i, a in enumerate(lms) if div_leq(a, beta)), None)
        if i is None:
            # move the leading term into the remainder
            term = dom.mul(t, p ** j) if caseB else t
            if ring.gf:
                r[k] = dom.add(int(r[k]), term)
                g[k] = dom.sub(int(g[k]), term)
            else:
                r[k] = (int(r[k]) + term) % ring.M
                g[k] = (int(g[k]) - term) % ring.M
            g = ring._canon(g)
            continue
        gamma = sub_exp(beta, lms[i])
        jg, gp = ring._pack(gamma)
        kg = ring.index[gp]
        P = ring._canon(ring._mono_mul(kg, F[i].vec, memos[i]))
        ppos = ring._lm_pos(P, ring.order)
        if ppos is None or ring._full(ppos[0], ppos[1] + jg) != beta:
            raise DivisionError(
                f"LM(x^{gamma} * f_{i + 1}) != {beta}: leading monomials are not multiplicative here")
        pc = int(P[ppos[0]])
        u = dom.teichmuller((pc // p ** ppos[1]) % p) if caseB else pc
        coef = dom.mul(t, dom.digit_inv(u))
        if caseB:
            coef = dom.mul(coef, p ** jg)
        if ring.gf:
            q[i][kg] = dom.add(int(q[i][kg]), coef)
        else:
            q[i][kg] = (int(q[i][kg]) + coef) % ring.M
        g = ring._canon(ring._axpy(g, dom.neg(coef), P))
    return [ring.element(v) for v in q], ring.element(r)


def right_divide(f: Element, F: Sequence[Element], max_cap: int | None = None,
                 lift: Callable[[Ring], Element] | None = None) -> DivisionResult:
    """Divide f by the tuple F: f = sum q_i f_i + r modulo m^N.

    Under lex with a positive degree drop the working cap is raised until
    the output is stable. ``lift(R)`` may rebuild f inside the higher
    precision ring R (for instance as a product of polynomial
    representatives); by default f is padded with zeros.
    """
    F = list(F)
    if not F:
        raise ValueError("empty divisor tuple")
    ring = f.ring
    for g in F:
        if g.ring is not ring:
            raise ValueError("presentation mismatch")
        if g.is_zero():
            raise DivisionError("zero divisor in the divisor tuple")
    N = ring.N
    regions = delta_regions(F)
    drops = [degree_drop(g) for g in F]
    if ring.order != "lex" or max(drops) <= 0:
        qs, r = _divide_once(ring, f, F)
        return DivisionResult(qs, r, f.truncated, Certificate("exact", N), regions)
    max_cap = max_cap or 4 * N
    h = int(max(drops)) + 1
    prev = None
    step = 0
    cap = N
    while True:
        R = ring.at_precision(cap)
        fR = R.convert(f) if lift is None or R is ring else lift(R)
        qs, r = _divide_once(R, fR, [R.convert(g) for g in F])
        cur = [ring.convert(x) for x in qs] + [ring.convert(r)]
        if prev is not None and all(a == b for a, b in zip(prev, cur)):
            return DivisionResult(cur[:-1], cur[-1], True, Certificate("stabilized", cap), regions)
        prev = cur
        step = 1 if step == 0 else 2 * step
        cap = N + step * h
        if cap > max_cap:
            return DivisionResult(cur[:-1], cur[-1], True, Certificate("failed", max_cap), regions)


# -- S-elements and bases -------------------------------------------------------

def _normalize_lc(e: Element) -> Element:
    """e scaled so that its leading coefficient is 1."""
    ring = e.ring
    return ring.scale(e, ring.domain.digit_inv(e.lc()))


def spair(g: Element, h: Element) -> Element:
    """The S-element of g and h: cancel leading terms at the join of LMs."""
    if g.is_zero() or h.is_zero():
        raise ValueError("S-element of a zero element")
    ring = g.ring
    a, b = g.lm(), h.lm()
    J = join(a, b)
    if sum(J) >= ring.N:
        return ring.zero
    A = ring.mul(ring.monomial(sub_exp(J, a)), g)
    Bm = ring.mul(ring.monomial(sub_exp(J, b)), h)
    return _normalize_lc(A) - _normalize_lc(Bm)


@dataclass
class GroebnerBasis:
    elements: list[Element]
    order: str
    N: int
    log: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def lms(self):
        return [g.lm() for g in self.elements]


def _as_list(G) -> list[Element]:
    if isinstance(G, GroebnerBasis):
        return list(G.elements)
    return [g for g in G]


@dataclass
class BuchbergerResult:
    ok: bool
    witness: tuple | None = None  # (i, j, remainder), 0-based indices
    certificates: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _spair_lift(g: Element, h: Element):
    """S-element of the polynomial representatives, formed at a higher cap."""
    return lambda R: spair(R.convert(g), R.convert(h))


def buchberger_check(G, max_cap: int | None = None) -> BuchbergerResult:
    elems = _as_list(G)
    if not elems or any(g.is_zero() for g in elems):
        raise ValueError("candidate basis must be a nonempty tuple of nonzero elements")
    certs = []
    for i, j in itertools.combinations(range(len(elems)), 2):
        S = spair(elems[i], elems[j])
        if S.is_zero():
            continue
        res = right_divide(S, elems, max_cap=max_cap, lift=_spair_lift(elems[i], elems[j]))
        certs.append(res.certificate)
        if not res.remainder.is_zero():
            return BuchbergerResult(False, (i, j, res.remainder), certs)
    return BuchbergerResult(True, None, certs)


def complete(generators, order: str | None = None, N: int | None = None,
             max_cap: int | None = None) -> GroebnerBasis:
    """Buchberger completion with the normal pair-selection strategy."""
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("no nonzero generators")
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    if N is not None and N != ring.N:
        ring = ring.at_precision(N)
    G = [ring.convert(g) for g in gens]
    key = sort_key_fn(ring.order)
    log = [f"start with {len(G)} generators"]
    pairs = {(i, j) for i, j in itertools.combinations(range(len(G)), 2)}
    while True:
        while pairs:
            i, j = min(pairs, key=lambda ij: (key(join(G[ij[0]].lm(), G[ij[1]].lm())), ij))
            pairs.discard((i, j))
            S = spair(G[i], G[j])
            if S.is_zero():
                continue
            res = right_divide(S, G, max_cap=max_cap, lift=_spair_lift(G[i], G[j]))
            if not res.certificate.ok:
                raise DivisionError(f"lex division did not stabilise ({res.certificate})")
            r = res.remainder
            if r.is_zero():
                log.append(f"S({i + 1},{j + 1}) -> 0")
                continue
            r = _normalize_lc(r)
            G.append(r)
            k = len(G) - 1
            log.append(f"S({i + 1},{j + 1}) -> new g{k + 1} with LM {r.lm()}")
            pairs.update((a, k) for a in range(k))
        check = buchberger_check(G, max_cap=max_cap)
        if check.ok:
            return GroebnerBasis(G, ring.order, ring.N, log)
        i, j, r = check.witness
        G.append(_normalize_lc(r))
        k = len(G) - 1
        log.append(f"recheck S({i + 1},{j + 1}) -> new g{k + 1}")
        pairs.update((a, k) for a in range(k))


@dataclass
class MemberResult:
    yes: bool
    remainder: Element
    division: DivisionResult

    def __bool__(self):
        return self.yes


def member(f: Element, G, max_cap: int | None = None,
           lift: Callable[[Ring], Element] | None = None) -> MemberResult:
    """Is f in the left ideal generated by the Groebner basis G (mod m^N)?"""
    elems = _as_list(G)
    res = right_divide(f, elems, max_cap=max_cap, lift=lift)
    return MemberResult(res.remainder.is_zero(), res.remainder, res)


def lm_ideal_contains(lms, alpha) -> bool:
    return any(a is not INF and div_leq(a, alpha) for a in lms)


def nested_equal(G_I, G_J) -> bool:
    """Given J inside I, decide I = J by comparing leading-monomial staircases."""
    I, J = _as_list(G_I), _as_list(G_J)
    if not I or not J:
        raise ValueError("empty basis")
    for g in J:
        if not member(g, I).yes:
            raise ValueError("nesting precondition violated: an element of G_J is not in I")
    ring = I[0].ring
    from .order import exponents_below
    li, lj = [g.lm() for g in I], [g.lm() for g in J]
    return all(lm_ideal_contains(li, a) == lm_ideal_contains(lj, a)
               for a in exponents_below(ring.n, ring.N))


# -- Weierstrass preparation ------------------------------------------------------

@dataclass
class WeierstrassResult:
    u: Element
    F: Element
    q: Element
    r: Element
    certificate: Certificate

    def __iter__(self):
        return iter((self.u, self.F))


def unit_inverse(u: Element) -> Element:
    """Inverse of a unit u = c (1 - q) with q in m, by the geometric series."""
    ring = u.ring
    if ring.domain.residue(int(u.vec[0])) == 0:
        raise ValueError("not a unit")
    cinv = ring.domain.inv(int(u.vec[0]))
    w = ring.scale(u, cinv)          # w = 1 - q
    q = ring.one - w
    acc, power = ring.one, ring.one
    for _ in range(ring.N):
        power = ring.mul(power, q)
        if power.is_zero():
            break
        acc = acc + power
    return ring.scale(acc, cinv)


def weierstrass(f: Element, max_cap: int | None = None) -> WeierstrassResult:
    """f = u F with u a unit, lc(F) = 1 and supp(F) meeting LM(f) + N^n only at LM(f)."""
    if f.is_zero():
        raise ValueError("Weierstrass preparation of zero")
    ring = f.ring
    lt = f.lt()
    rest = f - lt
    if rest.is_zero():
        q, r, cert = ring.zero, ring.zero, Certificate("exact", ring.N)
    else:
        res = right_divide(rest, [f], max_cap=max_cap)
        q, r, cert = res.quotients[0], res.remainder, res.certificate
    c = f.lc()
    cinv = ring.domain.digit_inv(c)
    F = ring.scale(lt + r, cinv)
    # (1 - q) f = lt + r = c F, hence f = (1 - q)^(-1) c F
    u = ring.scale(unit_inverse(ring.one - q), c)
    return WeierstrassResult(u, F, q, r, cert)

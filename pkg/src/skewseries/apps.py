"""Worked applications.

1. Derivative operators on Z_p[[x]][[y; delta]] with delta(x) = p^2, where
   [y, -] = p^2 d/dx and [x, -] = -p^2 d/dy. The height-one prime demo
   replays, on a concrete element, the reduction that pushes any prime not
   containing p down to a unit.

2. Truncated basis ladders J = I_0 < I_1 < ... < I_s = I over a
   two-variable ring F_p[[x]][[y; sigma, delta]] under lex, with checks
   that each I_r is two-sided with Groebner basis G_r, and the normal
   element witness g_1 r = r' g_1 (mod J).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groebner import (GroebnerBasis, _as_list, buchberger_check, complete, delta_regions,
                       lm_ideal_contains, member, right_divide)
from .order import INF, compare, div_leq, exponents_below, sort_key_fn
from .ring import Element, Ring, preset


def flagship_ring(precision: int = 12) -> Ring:
    """Z_3[[x]][[y; delta]], delta(x) = p^2, variables x1 = p, x2 = x, x3 = y."""
    return Ring(preset("yx-p2", precision=precision))


def _check_flagship_shape(ring: Ring):
    if ring.case != "B" or ring.n != 3:
        raise ValueError("expected a presentation over Z_p with variables p, x, y (case B, n = 3)")


_VAR = {"x": 0, "y": 1}


def partial_derivative(f: Element, var: str, k: int = 1) -> Element:
    """Formal k-fold partial derivative in x or y, ignoring the ring relation."""
    ring = f.ring
    _check_flagship_shape(ring)
    if var not in _VAR:
        raise ValueError("var must be 'x' or 'y'")
    v = _VAR[var]
    raw = []
    for idx in np.flatnonzero(f.vec):
        g = ring.basis[int(idx)]
        e = g[v]
        if e < k:
            continue
        ff = math.perm(e, k)  # e (e-1) ... (e-k+1)
        h = list(g)
        h[v] -= k
        raw.append((int(f.vec[idx]) * ff, (0,) + tuple(h)))
    return ring.from_raw(raw)


def commutator(a: Element, b: Element) -> Element:
    return a * b - b * a


# -- valuations of falling factorials -----------------------------------------------

def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_ratio_valuation(a: int, r: int, p: int) -> tuple[int, bool]:
    """v_p(a! / (a - p^r)!) and whether it equals 1 + p + ... + p^(r-1)."""
    pr = p ** r
    if a < pr:
        raise ValueError(f"need a >= p^r = {pr}")
    value = sum(_vp(a - i, p) for i in range(pr))
    return value, value == (pr - 1) // (p - 1)


def exclusion_set_criterion(a: int, r: int, p: int) -> bool:
    """Equality predicted by membership outside {p^s, ..., p^s + p^r - 1}, s > r."""
    s = r + 1
    while p ** s <= a:
        if p ** s <= a <= p ** s + p ** r - 1:
            return False
        s += 1
    return True


def window_criterion(a: int, r: int, p: int) -> bool:
    """Equality holds iff no multiple of p^(r+1) lies in (a - p^r, a].

    The window holds exactly one multiple of p^r, namely p^r * floor(a / p^r).
    """
    return (a // p ** r) % p != 0


# -- LM of derivatives -----------------------------------------------------------

@dataclass
class DerivativeStep:
    operator: str
    result: Element
    lm: tuple
    predicted: tuple | None = None

    @property
    def matches(self) -> bool:
        return self.predicted is None or self.predicted == self.lm

    def line(self) -> str:
        lm = "inf" if self.lm is INF else "(" + ",".join(map(str, self.lm)) + ")"
        deg = "-" if self.lm is INF else str(sum(self.lm))
        return f"{self.operator} LM={lm} deg={deg}"


def lm_derivative_step(f: Element) -> tuple[str, Element, tuple, tuple]:
    """Apply d_x^(p^t) (t = v_p(b)) or, if b = 0, d_y^(p^t) (t = v_p(c)).

    Returns (operator, result, observed LM, predicted LM).
    """
    ring = f.ring
    _check_flagship_shape(ring)
    if f.is_zero():
        raise ValueError("zero element")
    a, b, c = f.lm("lex")
    p = ring.p
    if b:
        t = _vp(b, p)
        var, pred = "x", lambda v: (a + v, b - p ** t, c)
    elif c:
        t = _vp(c, p)
        var, pred = "y", lambda v: (a + v, b, c - p ** t)
    else:
        raise ValueError("LM has b = c = 0: no derivative step applies")
    v = (p ** t - 1) // (p - 1)
    res = partial_derivative(f, var, p ** t)
    return f"d_{var}^{p ** t}", res, res.lm("lex"), pred(v)


def divide_by_p_power(f: Element, v: int) -> Element:
    """p^(-v) f for f divisible by p^v (high digits are taken to be zero)."""
    ring = f.ring
    if v == 0:
        return f
    q = ring.p ** v
    raw = []
    for idx in np.flatnonzero(f.vec):
        c = int(f.vec[idx])
        if c % q:
            raise ValueError(f"element is not divisible by p^{v}")
        raw.append((c // q, ring._full(int(idx), 0)))
    return ring.from_raw(raw)


@dataclass
class DerivativeTrace:
    start: Element
    steps: list[DerivativeStep] = field(default_factory=list)
    status: str = "budget-exhausted"

    @property
    def final(self) -> Element:
        return self.steps[-1].result if self.steps else self.start

    @property
    def consistent(self) -> bool:
        return all(s.matches for s in self.steps)

    def lines(self) -> list[str]:
        out = [s.line() for s in self.steps]
        out.append(f"terminal {self.status}")
        return out


def prime_height1_demo(f: Element, budget: int = 64) -> DerivativeTrace:
    """Strip p-powers and apply LM-lowering derivatives until a unit appears.

    Terminal states: ``unit`` (LM = 0), ``p-divisible`` (LM = (a, 0, 0) with
    a > 0, i.e. a power of p times a unit), ``budget-exhausted``.
    """
    ring = f.ring
    _check_flagship_shape(ring)
    if f.is_zero():
        raise ValueError("zero element")
    trace = DerivativeTrace(f)
    cur = f
    p = ring.p
    while len(trace.steps) < budget:
        a, b, c = cur.lm("lex")
        if (a, b, c) == (0, 0, 0):
            trace.status = "unit"
            return trace
        if a > 0:
            if b == 0 and c == 0:
                trace.status = "p-divisible"
                return trace
            cur = divide_by_p_power(cur, a)
            trace.steps.append(DerivativeStep(f"p^-{a}", cur, cur.lm("lex"), (0, b, c)))
            continue
        op, res, lm, pred = lm_derivative_step(cur)
        trace.steps.append(DerivativeStep(op, res, lm, pred))
        v = lm[0] if lm is not INF else 0
        cur = res
        if v and len(trace.steps) < budget:
            cur = divide_by_p_power(res, v)
            trace.steps.append(DerivativeStep(f"p^-{v}", cur, cur.lm("lex"), (0,) + tuple(lm[1:])))
    a = cur.lm("lex")
    if a == (0, 0, 0):
        trace.status = "unit"
    return trace


def delta_power(ring: Ring, i: int, f: Element, ell: int) -> Element:
    for _ in range(ell):
        f = ring.apply_delta(i, f)
    return f


# -- ladders -------------------------------------------------------------------

class LadderError(ValueError):
    pass


@dataclass
class TruncatedBasisLadder:
    G_J: list[Element]
    extension: list[Element]
    levels: list[list[Element]]          # G_0 = G_J, ..., G_s
    boxes: list[tuple]                   # per extension element: (a_lo, a_hi, b_lo)
    gb_checks: list = field(default_factory=list)
    delta_checks: list[str] = field(default_factory=list)
    order_checks: list[str] = field(default_factory=list)

    @property
    def s(self) -> int:
        return len(self.extension)

    @property
    def t(self) -> int:
        return len(self.G_J)

    @property
    def passes(self) -> bool:
        return all(c.ok for c in self.gb_checks) and not self.delta_checks and not self.order_checks

    def G(self, r: int) -> list[Element]:
        return self.levels[r]

    def lines(self) -> list[str]:
        out = [f"G_J: {len(self.G_J)} elements; extension: {self.s} elements"]
        for r, chk in enumerate(self.gb_checks):
            lms = [str(g.lm()) for g in self.levels[r]]
            out.append(f"G_{r}: LMs {' '.join(lms) if lms else '-'} groebner={'yes' if chk.ok else 'no'}")
        for msg in self.delta_checks + self.order_checks:
            out.append(f"violation: {msg}")
        out.append("ladder " + ("ok" if self.passes else "fails"))
        return out


def _in_J(f: Element, G_J: list[Element]) -> bool:
    if not G_J:
        return f.is_zero()
    return member(f, G_J).yes


def build_ladder(G_J, extension) -> TruncatedBasisLadder:
    """All truncated tuples G_r = G_J + (g_1..g_r) with their region checks."""
    G_J = _as_list(G_J)
    ext = _as_list(extension)
    elems = G_J + ext
    if not elems:
        raise LadderError("empty ladder")
    ring = elems[0].ring
    if ring.case != "A" or ring.domain.m != 1:
        raise LadderError("ladders need a presentation over a prime field F_p")
    if ring.order != "lex":
        raise LadderError("ladders use the lex order")
    for g in ext:
        if g.is_zero():
            raise LadderError("zero element in the extension")
    lms = [g.lm() for g in ext]
    for i in range(len(ext) - 1):
        if compare("lex", lms[i], lms[i + 1]) <= 0:
            raise LadderError(f"extension not sorted by strictly decreasing LM at position {i + 1}: "
                              f"{lms[i]} then {lms[i + 1]}")
    for i, g in enumerate(ext):
        if _in_J(g, G_J):
            raise LadderError(f"extension element g_{i + 1} lies in J")
    levels = [G_J + ext[:r] for r in range(len(ext) + 1)]
    boxes = []
    for i, (a, b) in enumerate(lms) if ring.n == 2 else []:
        hi = lms[i - 1][0] if i > 0 else math.inf
        boxes.append((a, hi, b))
    lad = TruncatedBasisLadder(G_J, ext, levels, boxes)
    for r, G in enumerate(levels):
        lad.gb_checks.append(buchberger_check(G) if G else _EmptyCheck())
    if ring.n == 2 and ext:
        _check_2d_regions(lad, ring)
    return lad


class _EmptyCheck:
    ok = True
    witness = None


def _check_2d_regions(lad: TruncatedBasisLadder, ring: Ring):
    regions = delta_regions(lad.G_J + lad.extension)
    t = lad.t
    members: dict[int, list] = {i: [] for i in range(lad.s)}
    for alpha in exponents_below(2, ring.N):
        reg = regions.region(alpha)
        if reg is None or reg < t:
            continue
        i = reg - t
        members[i].append(alpha)
        a_lo, a_hi, b_lo = lad.boxes[i]
        if not (a_lo <= alpha[0] < a_hi and alpha[1] >= b_lo):
            lad.delta_checks.append(f"{alpha} in region of g_{i + 1} lies outside its box "
                                    f"[{a_lo},{a_hi}) x [{b_lo},inf)")
    key = sort_key_fn("lex")
    for i in range(lad.s):
        for j in range(i + 1, lad.s):
            if members[i] and members[j]:
                lo = min(members[i], key=key)
                hi = max(members[j], key=key)
                if compare("lex", lo, hi) <= 0:
                    lad.order_checks.append(
                        f"region of g_{i + 1} contains {lo}, not above {hi} from the region of g_{j + 1}")


def sample_panel(ring: Ring, samples: int = 20, max_degree: int = 4, seed: int = 0) -> list[Element]:
    """All monomials of degree <= max_degree plus seeded random elements."""
    panel = [ring.monomial(a) for a in ring.monomials_upto(max_degree)]
    rng = np.random.default_rng(seed)
    while len(panel) < len(ring.monomials_upto(max_degree)) + samples:
        e = ring.random_element(rng, density=0.25, max_degree=max(max_degree, 1))
        if not e.is_zero():
            panel.append(e)
    return panel


@dataclass
class SidednessReport:
    r: int
    gb_ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)   # (generator index, sample, remainder)

    @property
    def ok(self) -> bool:
        return self.gb_ok and not self.failures

    def lines(self) -> list[str]:
        out = [f"level {self.r}: groebner={'yes' if self.gb_ok else 'no'} checked={self.checked} "
               f"failures={len(self.failures)}"]
        for gi, a, rem in self.failures[:10]:
            out.append(f"  g{gi + 1} * ({a}) not in I_{self.r}: remainder {rem}")
        return out


def _product_lift(a: Element, b: Element):
    """The product of two representatives formed at a higher working cap."""
    return lambda R: R.mul(R.convert(a), R.convert(b))


def two_sidedness_check(ladder: TruncatedBasisLadder, r: int, samples: int = 20,
                        seed: int = 0, max_degree: int = 4) -> SidednessReport:
    """Check g * a in I_r for all generators g of G_r and a sampled panel of a."""
    G = ladder.G(r)
    rep = SidednessReport(r, ladder.gb_checks[r].ok)
    if not G:
        return rep
    ring = G[0].ring
    panel = sample_panel(ring, samples, max_degree, seed)
    for gi, g in enumerate(G):
        for a in panel:
            rep.checked += 1
            res = member(ring.mul(g, a), G, lift=_product_lift(g, a))
            if not res.yes:
                rep.failures.append((gi, a, res.remainder))
    return rep


@dataclass
class WitnessReport:
    g1: Element
    checked: int = 0
    pairs: list = field(default_factory=list)      # (r, r')
    failures: list = field(default_factory=list)   # (r, r', difference)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"g1 = {self.g1}", f"checked={self.checked} failures={len(self.failures)}"]
        for r, rp in self.pairs[:3]:
            out.append(f"  r = {r}  ->  r' = {rp}")
        for r, rp, d in self.failures[:10]:
            out.append(f"  FAIL r = {r}: g1 r - r' g1 = {d}")
        return out


def polynormal_witness(ladder: TruncatedBasisLadder, samples: int = 20, seed: int = 0,
                       panel: list[Element] | None = None) -> WitnessReport:
    """g_1 is normal modulo J: g_1 r - r' g_1 in J with r' from dividing g_1 r by G_1.

    Dividing g_1 r by G_1 = (h_1, .., h_t, g_1) gives quotients (a_1, .., a_t, r')
    and a remainder. The claim is verified by an explicit certificate: the
    remainder vanishes and g_1 r - r' g_1 equals sum a_k h_k modulo m^N.
    """
    if ladder.s < 1:
        raise LadderError("ladder has no extension element")
    g1 = ladder.extension[0]
    ring = g1.ring
    G1 = ladder.G(1)
    t = ladder.t
    rep = WitnessReport(g1)
    if panel is None:
        rng = np.random.default_rng(seed)
        panel = []
        while len(panel) < samples:
            e = ring.random_element(rng, density=0.2)
            if not e.is_zero():
                panel.append(e)
    for rr in panel:
        prod = ring.mul(g1, rr)
        res = right_divide(prod, G1, lift=_product_lift(g1, rr))
        rp = res.quotients[t]
        diff = prod - ring.mul(rp, g1)
        j = ring.zero
        for a, h in zip(res.quotients[:t], ladder.G_J):
            j = j + ring.mul(a, h)
        rep.checked += 1
        rep.pairs.append((rr, rp))
        if not (res.remainder.is_zero() and res.certificate.ok and diff == j):
            rep.failures.append((rr, rp, diff - j if res.remainder.is_zero() else res.remainder))
    return rep


# -- ideal helpers used by the ladder demos ---------------------------------------

def two_sided_closure(generators, max_rounds: int = 64) -> GroebnerBasis:
    """Left Groebner basis of the two-sided ideal generated by ``generators``.

    Right multiples g * x_v are added until the left ideal is closed under
    right multiplication by every variable.
    """
    gens = [g for g in _as_list(generators) if not g.is_zero()]
    if not gens:
        raise ValueError("no nonzero generators")
    ring = gens[0].ring
    G = complete(gens)
    for _ in range(max_rounds):
        extra = []
        for g in G.elements:
            for v in range(1, ring.n + 1):
                h = ring.mul(g, ring.var(v))
                if not member(h, G.elements + extra).yes:
                    extra.append(h)
        if not extra:
            return minimal_basis(G)
        G = complete(G.elements + extra)
    raise RuntimeError("two-sided closure did not settle")


def minimal_basis(G) -> GroebnerBasis:
    """Drop elements whose LM is divisible by the LM of another kept element."""
    elems = _as_list(G)
    key = sort_key_fn(elems[0].ring.order) if elems else None
    keep: list[Element] = []
    for g in sorted(elems, key=lambda e: (sum(e.lm()), key(e.lm()))):
        if not any(div_leq(h.lm(), g.lm()) for h in keep):
            keep.append(g)
    ring = elems[0].ring if elems else None
    log = list(getattr(G, "log", []))
    return GroebnerBasis(keep, ring.order if ring else None, ring.N if ring else None, log)


def minimal_lm_generators(lms) -> list:
    """Minimal generators of the monomial ideal spanned by ``lms``."""
    lms = [a for a in lms if a is not INF]
    out = []
    for a in lms:
        if any(div_leq(b, a) and b != a for b in lms):
            continue
        if a not in out:
            out.append(a)
    return out


def ladder_extension(G_I, G_J) -> list[Element]:
    """Elements of G_I whose LMs are the minimal generators of LM(I) outside
    LM(J), one per LM, sorted by decreasing LM."""
    I, J = _as_list(G_I), _as_list(G_J)
    lj = [h.lm() for h in J]
    chosen = {}
    for a in minimal_lm_generators([g.lm() for g in I]):
        if lm_ideal_contains(lj, a):
            continue
        chosen[a] = next(g for g in I if g.lm() == a)
    key = sort_key_fn("lex")
    return [chosen[a] for a in sorted(chosen, key=key, reverse=True)]


def remark_counterexample(p: int = 2, precision: int = 8):
    """The commutative three-variable ring and the two bases of the remark.

    Returns (ring, G, G_prime) with G = (y^2 z + x z^2, y z^2, z^3) and
    G' = (x z^3, y^2 z + x z^2, y z^2, z^3).
    """
    from .ring import RingPresentation
    ring = Ring(RingPresentation("A", p, 3, precision, "lex", name="Fp[[x,y,z]]"))
    x, y, z = ring.var(1), ring.var(2), ring.var(3)
    G = [y * y * z + x * z * z, y * z * z, z ** 3]
    Gp = [x * z ** 3] + G
    return ring, G, Gp


def seeded_ladder(ring: Ring, seed: int, max_tries: int = 64) -> TruncatedBasisLadder:
    """A ladder J < I from random generators: J two-sided closure of one
    element of order >= 2, I that of J plus one element of order >= 1.
    Seeds whose draw gives J = I are skipped deterministically."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        a = ring.random_element(rng, density=0.3, max_degree=4, min_degree=2)
        b = ring.random_element(rng, density=0.3, max_degree=3, min_degree=1)
        if a.is_zero() or b.is_zero():
            continue
        G_J = two_sided_closure([a])
        G_I = two_sided_closure(G_J.elements + [b])
        ext = ladder_extension(G_I.elements, G_J.elements)
        if ext:
            return build_ladder(G_J.elements, ext)
    raise RuntimeError("no proper ladder found")

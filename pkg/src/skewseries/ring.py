"""Iterated local skew power series rings truncated modulo m^N.

A ring is given by a :class:`RingPresentation`: the coefficient case, the
number of variables n, the total-degree cap N, the active monomial order,
and tables ``sigma[(i, r)]``, ``delta[(i, r)]`` holding the images of x_r
(r < i) under the skew derivation attached to x_i, so that

    x_i x_r = sigma_i(x_r) x_i + delta_i(x_r).

Omitted entries default to sigma = id and delta = 0. In case ``B`` the
first variable x_1 is the uniformiser p; it is central and carries no table
entries.

Internally an element is a dense vector of scalars indexed by the
"packed" monomials: monomials of total degree < N in the non-scalar
variables (x_2..x_n in case B, all of x_1..x_n in case A). In case B the
scalar at packed monomial x^g absorbs the powers of p and is stored modulo
p^(N - |g|). The digit-by-digit standard form is derived on demand.

Multiplication uses precomputed sparse matrices for left multiplication by
each variable. They are filled in by the recursion

    x_v x_u x^b' = sigma_v(x_u) (x_v x^b') + delta_v(x_u) x^b'     (u < v)

where x_u is the first variable of x^b = x_u x^b'. The literal word
rewriting procedure is available as :meth:`Ring.rewrite_word` and serves
as an independent check.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernel as _kernel
from .coeff import CoefficientDomain
from .order import INF, Exponent, check_order, exponent_word, exponents_below, sort_key_fn
from .text import Digit, coefficient_value, parse_terms

TableEntry = "str | Sequence[tuple[object, Exponent]]"


class PresentationError(ValueError):
    """Raised when a presentation fails validation."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(report.summary())


class NonTriangularLexError(ValueError):
    pass


@dataclass(frozen=True)
class Failure:
    kind: str
    i: int
    r: int
    message: str

    def __str__(self):
        return f"{self.kind} ({self.i}, {self.r}): {self.message}"


@dataclass
class ValidationReport:
    failures: list[Failure] = field(default_factory=list)
    triangular: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, kind: str, i: int, r: int, message: str):
        self.failures.append(Failure(kind, i, r, message))

    def summary(self) -> str:
        if self.ok:
            tri = "triangular" if self.triangular else "non-triangular"
            return f"valid ({tri})"
        return "invalid presentation:\n" + "\n".join(f"  {f}" for f in self.failures)


@dataclass
class RingPresentation:
    case: str
    p: int
    n: int
    precision: int
    order: str = "lex"
    sigma: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)
    m: int = 1
    irreducible: tuple | None = None
    name: str | None = None

    def __post_init__(self):
        check_order(self.order)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        self.sigma = {tuple(k): v for k, v in self.sigma.items()}
        self.delta = {tuple(k): v for k, v in self.delta.items()}

    def domain(self, precision: int | None = None) -> CoefficientDomain:
        return CoefficientDomain(self.case, self.p, self.m, precision or self.precision,
                                 self.irreducible)

    def replace(self, **kw) -> RingPresentation:
        d = dict(case=self.case, p=self.p, n=self.n, precision=self.precision, order=self.order,
                 sigma=dict(self.sigma), delta=dict(self.delta), m=self.m,
                 irreducible=self.irreducible, name=self.name)
        d.update(kw)
        return RingPresentation(**d)


# -- presets -------------------------------------------------------------------

def preset(name: str, precision: int | None = None, order: str | None = None) -> RingPresentation:
    """Named presentations.

    ``qcomm(q)``: F_5[[x1]][[x2; sigma]] with x2 x1 = q x1 x2.
    ``delta-x2``: F_5[[x1]][[x2; delta]] with x2 x1 = x1 x2 + x1^2.
    ``yx-p2``:   Z_3[[x]][[y; delta]] with yx = xy + p^2 (x1 = p, x2 = x, x3 = y).
    """
    key = name.replace(" ", "")
    m = re.fullmatch(r"qcomm\((-?\d+)\)", key)
    if m:
        q = int(m.group(1))
        P = RingPresentation("A", 5, 2, precision or 10, order or "lex",
                             sigma={(2, 1): [(q, (1, 0))]}, name=f"qcomm({q})")
    elif key == "delta-x2":
        P = RingPresentation("A", 5, 2, precision or 10, order or "lex",
                             delta={(2, 1): [(1, (2, 0))]}, name="delta-x2")
    elif key == "yx-p2":
        P = RingPresentation("B", 3, 3, precision or 12, order or "lex",
                             delta={(3, 2): [(1, (2, 0, 0))]}, name="yx-p2")
    else:
        raise ValueError(f"unknown preset {name!r}; known: qcomm(q), delta-x2, yx-p2")
    return P


PRESET_NAMES = ("qcomm(2)", "delta-x2", "yx-p2")


# -- elements ------------------------------------------------------------------

class Element:
    """An element of a truncated ring, immutable, in canonical packed form."""

    __slots__ = ("ring", "vec", "truncated", "_terms", "_lm")

    def __init__(self, ring: Ring, vec: np.ndarray, truncated: bool = False):
        vec.setflags(write=False)
        self.ring = ring
        self.vec = vec
        self.truncated = truncated
        self._terms = None
        self._lm = None

    # standard form ----------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, int]:
        """The standard form as ``{exponent: digit}``."""
        if self._terms is None:
            self._terms = self.ring._standard_form(self.vec)
        return self._terms

    def support(self) -> set[Exponent]:
        return set(self.terms)

    def sorted_terms(self, order: str | None = None) -> list[tuple[Exponent, int]]:
        key = sort_key_fn(order or self.ring.order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def is_zero(self) -> bool:
        return not self.vec.any()

    def __bool__(self):
        return not self.is_zero()

    def lm(self, order: str | None = None):
        return self.ring.lm(self, order)

    def lc(self, order: str | None = None) -> int:
        return self.ring.lc(self, order)

    def lt(self, order: str | None = None) -> Element:
        return self.ring.lt(self, order)

    def valuation_degree(self):
        """Least total degree in the support (inf for zero)."""
        if self.is_zero():
            return math.inf
        return min(sum(e) for e in self.terms)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        return self.ring.add(self, self.ring.coerce(other))

    def __radd__(self, other):
        return self.ring.add(self.ring.coerce(other), self)

    def __sub__(self, other):
        return self.ring.sub(self, self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.sub(self.ring.coerce(other), self)

    def __neg__(self):
        return self.ring.neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.ring.scale(self, self.ring.domain.from_int(other))
        return self.ring.mul(self, other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.ring.one
        for _ in range(k):
            out = self.ring.mul(out, self)
        return out

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.ring.scale(self, self.ring.domain.from_int(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.ring.equal(self, other)

    def __hash__(self):
        return hash((id(self.ring), self.vec.tobytes()))

    def __str__(self):
        from .text import print_canonical
        return print_canonical(self)

    def __repr__(self):
        return f"Element({self})"


# -- engine helpers --------------------------------------------------------------

@dataclass
class _CSR:
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray


def _valuations(x: np.ndarray, p: int) -> np.ndarray:
    """p-adic valuations of the (nonzero) entries of x."""
    v = np.zeros(len(x), dtype=np.int64)
    y = x.copy()
    while True:
        mask = (y % p) == 0
        if not mask.any():
            return v
        v[mask] += 1
        y[mask] = y[mask] // p


class Ring:
    """A validated ring presentation with its multiplication engine."""

    def __init__(self, presentation: RingPresentation, validate: bool = True, _parent: Ring | None = None):
        P = presentation
        self.presentation = P
        self.case = P.case
        self.p = P.p
        self.n = P.n
        self.N = P.precision
        self.order = P.order
        self.domain = P.domain()
        self._parent = _parent
        self._higher: dict[int, Ring] = {} if _parent is None else _parent._higher
        self._off = 1 if P.case == "B" else 0
        self.nv = P.n - self._off
        self._setup_basis()
        self._setup_arith()
        self._L: list[_CSR] | None = None
        self._engine_ready = False
        self._engine_lock = threading.RLock()
        self.sigma_elems: dict[tuple[int, int], Element] = {}
        self.delta_elems: dict[tuple[int, int], Element] = {}
        self.report = ValidationReport()
        self._load_tables()
        if validate:
            self.report = validate_presentation(self)
            if not self.report.ok:
                raise PresentationError(self.report)
        else:
            self.report.triangular = self._is_triangular()

    def __repr__(self):
        name = self.presentation.name or f"{self.case}/p={self.p}/n={self.n}"
        return f"Ring({name}, N={self.N}, order={self.order})"

    # -- setup ------------------------------------------------------------------
    def _setup_basis(self):
        nv, N = self.nv, self.N
        self.basis: list[Exponent] = exponents_below(nv, N)
        self.index = {g: k for k, g in enumerate(self.basis)}
        self.B = len(self.basis)
        self.degs = np.array([sum(g) for g in self.basis], dtype=np.int64)
        first = np.full(self.B, -1, dtype=np.int64)
        rest = np.zeros(self.B, dtype=np.int64)
        for k, g in enumerate(self.basis):
            for v, a in enumerate(g):
                if a:
                    first[k] = v
                    h = list(g)
                    h[v] -= 1
                    rest[k] = self.index[tuple(h)]
                    break
        self._first = first
        self._rest = rest

    def _setup_arith(self):
        dom = self.domain
        self.gf = dom.case == "A" and dom.m > 1
        if self.gf:
            q = dom.q
            self.M = q
            self._mul_tab = np.array([[dom.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self._add_tab = np.array([[dom.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self._neg_tab = np.array([dom.neg(a) for a in range(q)], dtype=np.int64)
            self.dtype = np.int64
        else:
            self.M = dom.modulus
            self.dtype = np.int64 if self.M < _kernel.INT64_LIMIT else object
        if self.case == "B":
            mods = [self.p ** (self.N - int(d)) for d in self.degs]
            self.mods = np.array(mods, dtype=self.dtype)
        else:
            self.mods = None
        self._kern = _kernel.active if self.dtype is not object else _kernel.fallback
        # rank of every full exponent in the active order, for vectorised LMs
        self._ranks: dict[str, np.ndarray] = {}

    def _full(self, k: int, j: int = 0) -> Exponent:
        g = self.basis[k]
        return (j,) + g if self.case == "B" else g

    def _pack(self, alpha: Exponent) -> tuple[int, Exponent]:
        if self.case == "B":
            return alpha[0], tuple(alpha[1:])
        return 0, tuple(alpha)

    def _zeros(self) -> np.ndarray:
        return np.zeros(self.B, dtype=self.dtype)

    def _canon(self, vec: np.ndarray) -> np.ndarray:
        if self.mods is not None:
            return vec % self.mods
        return vec

    # -- element constructors ---------------------------------------------------
    def element(self, vec: np.ndarray, truncated: bool = False) -> Element:
        return Element(self, self._canon(vec), truncated)

    @property
    def zero(self) -> Element:
        return Element(self, self._zeros())

    @property
    def one(self) -> Element:
        return self.from_int(1)

    def from_int(self, c: int) -> Element:
        return self.from_raw([(c, (0,) * self.n)])

    def from_scalar(self, c: int, alpha: Exponent | None = None) -> Element:
        """Scalar c (a ring scalar, not an integer image) times x^alpha."""
        alpha = alpha or (0,) * self.n
        vec = self._zeros()
        j, g = self._pack(alpha)
        if sum(alpha) < self.N:
            c = self.domain.mul(c, self.p ** j) if j else c
            vec[self.index[g]] = c
        return self.element(vec)

    def var(self, i: int) -> Element:
        """The variable x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} out of range 1..{self.n}")
        e = [0] * self.n
        e[i - 1] = 1
        return self.from_raw([(1, tuple(e))])

    def monomial(self, alpha: Exponent, digit: int = 1) -> Element:
        return self.from_terms({tuple(alpha): digit})

    def coerce(self, x) -> Element:
        if isinstance(x, Element):
            if x.ring is not self:
                raise ValueError("elements belong to different rings")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def from_raw(self, raw: Iterable[tuple[object, Exponent]]) -> Element:
        """Collect integer (or ``T(c)``) terms into the canonical form."""
        dom = self.domain
        vec = [0] * self.B
        truncated = False
        for coef, alpha in raw:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n or min(alpha, default=0) < 0:
                raise ValueError(f"bad exponent {alpha} for n = {self.n}")
            if sum(alpha) >= self.N:
                truncated = True
                continue
            c = coefficient_value(dom, coef)
            j, g = self._pack(alpha)
            k = self.index[g]
            if j:
                c = dom.mul(c, self.p ** j)
            vec[k] = dom.add(vec[k], c)
        arr = np.array(vec, dtype=self.dtype) if self.B else self._zeros()
        return self.element(arr, truncated)

    def normalize(self, raw: Iterable[tuple[int, Exponent]]) -> Element:
        return self.from_raw(raw)

    def from_terms(self, terms: Mapping[Exponent, int]) -> Element:
        """Element with the given standard form (digits are carrier values)."""
        dom = self.domain
        for d in terms.values():
            if not dom.is_digit(d):
                raise ValueError(f"{d} is not a digit")
        return self.from_raw(((Digit(dom.residue(d)), a) for a, d in terms.items() if d))

    def _standard_form(self, vec: np.ndarray) -> dict[Exponent, int]:
        out = {}
        dom = self.domain
        for k in np.flatnonzero(vec):
            k = int(k)
            c = int(vec[k])
            if self.case == "B":
                for j, d in dom.scalar_standard_form(c, self.N - int(self.degs[k])):
                    out[self._full(k, j)] = d
            else:
                out[self._full(k)] = c
        return out

    def to_raw(self, e: Element) -> list[tuple[int, Exponent]]:
        """Integer terms whose normalisation is e (one per packed monomial)."""
        out = []
        for k in np.flatnonzero(e.vec):
            k = int(k)
            out.append((int(e.vec[k]), self._full(k, 0)))
        return out

    def use_kernel(self, pure: bool) -> Ring:
        """Switch this ring between the compiled and the numpy kernel."""
        self._kern = _kernel.backend(pure or self.dtype is object)
        return self

    # -- precision changes ------------------------------------------------------
    def at_precision(self, N: int) -> Ring:
        if N == self.N:
            return self
        base = self._parent or self
        if N == base.N:
            return base
        if N not in self._higher:
            self._higher[N] = Ring(base.presentation.replace(precision=N), validate=False, _parent=base)
            self._higher[N].report = base.report
        return self._higher[N]

    def with_order(self, order: str) -> Ring:
        """The same ring with a different active order (same precision)."""
        if order == self.order:
            return self
        key = ("order", order)
        cache = self._higher
        if key not in cache:
            cache[key] = Ring(self.presentation.replace(order=order), validate=False)
            cache[key].report = self.report
        return cache[key]

    def convert(self, e: Element) -> Element:
        """Move an element of a ring differing only in precision into this ring."""
        if e.ring is self:
            return e
        src = e.ring
        if (src.presentation.replace(precision=self.N, order=self.order)
                != self.presentation):
            raise ValueError("rings differ by more than precision and order")
        vec = self._zeros()
        for k in np.flatnonzero(e.vec):
            g = src.basis[int(k)]
            if sum(g) < self.N:
                j = self.index[g]
                mod = int(self.mods[j]) if self.mods is not None else self.M
                vec[j] = int(e.vec[k]) % mod
        return self.element(vec)

    # -- additive structure -----------------------------------------------------
    def _check(self, *els: Element):
        for e in els:
            if e.ring is not self:
                raise ValueError("presentation mismatch")

    def add(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        if self.gf:
            return Element(self, self._add_tab[a.vec, b.vec])
        return Element(self, (a.vec + b.vec) % (self.mods if self.mods is not None else self.M))

    def neg(self, a: Element) -> Element:
        self._check(a)
        if self.gf:
            return Element(self, self._neg_tab[a.vec])
        return Element(self, (-a.vec) % (self.mods if self.mods is not None else self.M))

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def scale(self, a: Element, c: int) -> Element:
        """Multiply by a scalar c of A."""
        self._check(a)
        if self.gf:
            return Element(self, self._mul_tab[c, a.vec])
        return self.element(self._kern.scale(c % self.M, a.vec, self.M))

    def equal(self, a: Element, b: Element) -> bool:
        self._check(a, b)
        return bool(np.array_equal(a.vec, b.vec))

    def equal_via_support(self, a: Element, b: Element) -> bool:
        return self.sub(a, b).is_zero()

    # -- leading data -----------------------------------------------------------
    def _rank_table(self, order: str) -> np.ndarray:
        if order not in self._ranks:
            key = sort_key_fn(order)
            if self.case == "B":
                full = [(k, j) for k in range(self.B) for j in range(self.N - int(self.degs[k]))]
                full.sort(key=lambda t: key(self._full(t[0], t[1])))
                R = np.full((self.B, self.N + 1), np.iinfo(np.int64).max, dtype=np.int64)
                for r, (k, j) in enumerate(full):
                    R[k, j] = r
            else:
                ks = sorted(range(self.B), key=lambda k: key(self.basis[k]))
                R = np.empty(self.B, dtype=np.int64)
                R[ks] = np.arange(self.B)
            self._ranks[order] = R
        return self._ranks[order]

    def _lm_pos(self, vec: np.ndarray, order: str):
        """(packed index, p-power) of the least monomial, or None for zero."""
        nz = np.flatnonzero(vec)
        if len(nz) == 0:
            return None
        R = self._rank_table(order)
        if self.case == "B":
            vals = _valuations(vec[nz], self.p)
            pos = int(np.argmin(R[nz, vals]))
            return int(nz[pos]), int(vals[pos])
        return int(nz[int(np.argmin(R[nz]))]), 0

    def lm(self, a: Element, order: str | None = None):
        order = order or self.order
        if order == self.order and a._lm is not None:
            return a._lm
        pos = self._lm_pos(a.vec, order)
        res = INF if pos is None else self._full(*pos)
        if order == self.order:
            a._lm = res
        return res

    def lc(self, a: Element, order: str | None = None) -> int:
        pos = self._lm_pos(a.vec, order or self.order)
        if pos is None:
            raise ValueError("the zero element has no leading coefficient")
        k, j = pos
        c = int(a.vec[k])
        if self.case == "B":
            return self.domain.teichmuller((c // self.p ** j) % self.p)
        return c

    def lt(self, a: Element, order: str | None = None) -> Element:
        alpha = self.lm(a, order)
        if alpha is INF:
            raise ValueError("the zero element has no leading term")
        return self.monomial(alpha, self.lc(a, order))

    def support(self, a: Element) -> set[Exponent]:
        return a.support()

    # -- table loading and validation helpers ------------------------------------
    def _entry_element(self, entry) -> Element:
        if isinstance(entry, Element):
            return self.convert(entry) if entry.ring is not self else entry
        if isinstance(entry, str):
            return self.from_raw(parse_terms(entry, self.n))
        return self.from_raw(entry)

    def _load_tables(self):
        P = self.presentation
        self._bad_keys = []
        for name, table, store in (("sigma", P.sigma, self.sigma_elems), ("delta", P.delta, self.delta_elems)):
            for key, entry in table.items():
                i, r = key
                if not (1 <= r < i <= self.n):
                    self._bad_keys.append((name, i, r, f"index pair must satisfy 1 <= r < i <= {self.n}"))
                    continue
                store[(i, r)] = self._entry_element(entry)

    def sigma_of(self, i: int, r: int) -> Element:
        """sigma_i(x_r) for r < i."""
        if (i, r) in self.sigma_elems:
            return self.sigma_elems[(i, r)]
        return self.var(r)

    def delta_of(self, i: int, r: int) -> Element:
        if (i, r) in self.delta_elems:
            return self.delta_elems[(i, r)]
        return self.zero

    def uses_only(self, a: Element, upto: int) -> bool:
        """Is a in the subring generated by x_1..x_upto?"""
        return all(not any(alpha[upto:]) for alpha in a.terms)

    def _is_triangular(self) -> bool:
        for (i, r), e in list(self.sigma_elems.items()) + list(self.delta_elems.items()):
            if not self.uses_only(e, r):
                return False
        return True

    @property
    def triangular(self) -> bool:
        return self.report.triangular

    # -- multiplication engine --------------------------------------------------
    def _matvec(self, v: int, x: np.ndarray) -> np.ndarray:
        L = self._L[v]
        if self.gf:
            return self._kern.matvec_gf(L.indptr, L.indices, L.data, x, self._mul_tab, self._add_tab,
                                        self.p, self.domain.m)
        return self._kern.matvec(L.indptr, L.indices, L.data, x, self.M)

    def _axpy(self, y: np.ndarray, a: int, x: np.ndarray) -> np.ndarray:
        if self.gf:
            return self._kern.axpy_gf(y, a, x, self._mul_tab, self._add_tab, self.p, self.domain.m)
        return self._kern.axpy(y, a, x, self.M)

    def _mindeg(self, x: np.ndarray):
        nz = np.flatnonzero(x)
        return int(self.degs[nz].min()) if len(nz) else None

    def _mono_mul(self, k: int, x: np.ndarray, memo: dict) -> np.ndarray:
        """x^(basis[k]) * x, reusing and extending ``memo`` (keyed by k)."""
        chain = []
        j = k
        while j not in memo:
            chain.append(j)
            j = int(self._rest[j])
        cur = memo[j]
        for j in reversed(chain):
            cur = self._matvec(int(self._first[j]), cur)
            memo[j] = cur
        return cur

    def _left_mul_vec(self, a: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Vector of (element a) * (element x); needs L_w for every variable in a."""
        out = self._zeros()
        md = self._mindeg(x)
        if md is None:
            return out
        memo = {0: x}
        degs, N = self.degs, self.N
        for k in np.flatnonzero(a):
            k = int(k)
            if degs[k] + md >= N:
                continue
            out = self._axpy(out, int(a[k]), self._mono_mul(k, x, memo))
        return out

    def _build_engine(self):
        if self._engine_ready:
            return
        with self._engine_lock:
            if not self._engine_ready:
                self._build_engine_locked()

    def _build_engine_locked(self):
        B, N = self.B, self.N
        self._L = []
        off = self._off
        for v in range(self.nv):
            vi = v + 1 + off  # full variable index
            cols: list[np.ndarray | None] = [None] * B
            rows_acc, cols_acc, data_acc = [], [], []
            for k, beta in enumerate(self.basis):
                if self.degs[k] + 1 >= N:
                    continue
                u = int(self._first[k])
                if u < 0 or u >= v:
                    target = list(beta)
                    target[v] += 1
                    idx = self.index[tuple(target)]
                    rows_acc.append(np.array([idx]))
                    cols_acc.append(np.array([k]))
                    data_acc.append(np.array([1], dtype=self.dtype))
                    continue
                ui = u + 1 + off
                kp = int(self._rest[k])
                c = cols[kp]
                if c is None:
                    c = self._column(v, kp, cols)
                s = self.sigma_of(vi, ui).vec
                d = self.delta_of(vi, ui).vec
                unit = self._zeros()
                unit[kp] = 1
                col = self._left_mul_vec(s, c)
                if d.any():
                    extra = self._left_mul_vec(d, unit)
                    col = self._add_tab[col, extra] if self.gf else (col + extra) % self.M
                cols[k] = col
                nz = np.flatnonzero(col)
                rows_acc.append(nz)
                cols_acc.append(np.full(len(nz), k))
                data_acc.append(col[nz])
            self._L.append(self._csr(rows_acc, cols_acc, data_acc))
        self._engine_ready = True

    def _column(self, v: int, k: int, cols) -> np.ndarray:
        """Dense column of L_v at basis index k (for the trivial cases)."""
        col = self._zeros()
        if self.degs[k] + 1 < self.N:
            target = list(self.basis[k])
            target[v] += 1
            col[self.index[tuple(target)]] = 1
        cols[k] = col
        return col

    def _csr(self, rows_acc, cols_acc, data_acc) -> _CSR:
        if rows_acc:
            rows = np.concatenate(rows_acc).astype(np.int64)
            colx = np.concatenate(cols_acc).astype(np.int64)
            data = np.concatenate(data_acc)
        else:
            rows = colx = np.zeros(0, dtype=np.int64)
            data = np.zeros(0, dtype=self.dtype)
        order = np.lexsort((colx, rows))
        rows, colx, data = rows[order], colx[order], data[order]
        indptr = np.zeros(self.B + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        indptr = np.cumsum(indptr)
        if self.dtype is not object:
            data = np.ascontiguousarray(data, dtype=np.int64)
        return _CSR(np.ascontiguousarray(indptr), np.ascontiguousarray(colx), data)

    def _mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self._build_engine()
        return self._canon(self._left_mul_vec(a, b))

    def mul(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        if not self.triangular and self.order == "lex":
            raise NonTriangularLexError(
                "multiplication in a non-triangular presentation needs deglex or degrevlex")
        return Element(self, self._mul_vec(a.vec, b.vec))

    def _mul_unchecked(self, a: Element, b: Element) -> Element:
        return Element(self, self._mul_vec(a.vec, b.vec))

    def mul_monomial(self, alpha: Exponent, b: Element, coeff: int = 1) -> Element:
        """coeff * x^alpha * b."""
        return self.mul(self.from_scalar(coeff, alpha), b)

    def power(self, a: Element, k: int) -> Element:
        out = self.one
        for _ in range(k):
            out = self._mul_unchecked(out, a)
        return out

    # -- sigma and delta on elements ---------------------------------------------
    def _check_subring(self, i: int, a: Element):
        if not 2 <= i <= self.n:
            raise ValueError(f"derivation index must lie in 2..{self.n}")
        if not self.uses_only(a, i - 1):
            raise ValueError(f"element is not in the subring generated by x_1..x_{i - 1}")

    def apply_sigma(self, i: int, a: Element) -> Element:
        """sigma_i(a) for a in R_{i-1}: substitute x_j -> sigma_i(x_j)."""
        self._check_subring(i, a)
        off = self._off
        images = {}
        out = self._zeros()
        for k in np.flatnonzero(a.vec):
            k = int(k)
            img = self.one
            for vl in exponent_word(self.basis[k]):
                j = vl + off
                if j not in images:
                    images[j] = self.sigma_of(i, j)
                img = self._mul_unchecked(img, images[j])
            out = self._axpy(out, int(a.vec[k]), img.vec)
        return self.element(out)

    def apply_delta(self, i: int, a: Element) -> Element:
        """delta_i(a) for a in R_{i-1}, by the twisted Leibniz rule on words."""
        self._check_subring(i, a)
        off = self._off
        out = self._zeros()
        for k in np.flatnonzero(a.vec):
            k = int(k)
            word = [vl + off for vl in exponent_word(self.basis[k])]
            acc = self.zero
            prefix = self.one  # sigma_i of the letters before position t
            for t, j in enumerate(word):
                dj = self.delta_of(i, j)
                if dj:
                    suffix = self.one
                    for jj in word[t + 1:]:
                        suffix = self._mul_unchecked(suffix, self.var(jj))
                    acc = acc + self._mul_unchecked(self._mul_unchecked(prefix, dj), suffix)
                prefix = self._mul_unchecked(prefix, self.sigma_of(i, j))
            out = self._axpy(out, int(a.vec[k]), acc.vec)
        return self.element(out)

    # -- literal word rewriting ---------------------------------------------------
    def rewrite_word(self, word: Sequence[int], coeff: int = 1) -> Element:
        """Standard form of coeff * x_{w1} x_{w2} ... by adjacent-pair rewriting.

        Words of length >= N are dropped. Products of scalar coefficients are
        accumulated modulo the coefficient modulus.
        """
        dom = self.domain
        N = self.N
        tables: dict[tuple[int, int], tuple[list, list]] = {}

        def expand(s, r):
            if (s, r) not in tables:
                sig = [(d, tuple(exponent_word(e))) for e, d in self.sigma_of(s, r).terms.items()]
                dlt = [(d, tuple(exponent_word(e))) for e, d in self.delta_of(s, r).terms.items()]
                tables[(s, r)] = (sig, dlt)
            return tables[(s, r)]

        def inversions(w):
            return sum(1 for a in range(len(w)) for b in range(a + 1, len(w)) if w[a] > w[b])

        work: dict[tuple[int, ...], int] = {}
        done: dict[tuple[int, ...], int] = {}

        def push(w, c):
            if len(w) >= N or c == 0:
                return
            target = done if all(w[t] <= w[t + 1] for t in range(len(w) - 1)) else work
            target[w] = dom.add(target.get(w, 0), c)

        push(tuple(word), coeff % dom.modulus if not self.gf else coeff)
        while work:
            # lowest total degree first, then the most inverted word
            w = min(work, key=lambda u: (len(u), -inversions(u), u))
            c = work.pop(w)
            if c == 0:
                continue
            t = next(t for t in range(len(w) - 1) if w[t] > w[t + 1])
            s, r = w[t], w[t + 1]
            left, right = w[:t], w[t + 2:]
            if self.case == "B" and r == 1:
                push(left + (1, s) + right, c)
                continue
            sig, dlt = expand(s, r)
            for d, u in sig:
                push(left + u + (s,) + right, dom.mul(c, d))
            for d, u in dlt:
                push(left + u + right, dom.mul(c, d))
        raw = []
        for w, c in done.items():
            exp = [0] * self.n
            for i in w:
                exp[i - 1] += 1
            raw.append((_Scalar(c), tuple(exp)))
        return self._from_scalars(raw)

    def _from_scalars(self, raw) -> Element:
        dom = self.domain
        vec = [0] * self.B
        for c, alpha in raw:
            if sum(alpha) >= self.N:
                continue
            j, g = self._pack(alpha)
            val = c.value
            if j:
                val = dom.mul(val, self.p ** j)
            k = self.index[g]
            vec[k] = dom.add(vec[k], val)
        return self.element(np.array(vec, dtype=self.dtype))

    # -- random elements --------------------------------------------------------
    def random_element(self, rng: np.random.Generator, density: float = 0.3,
                       max_degree: int | None = None, min_degree: int = 0) -> Element:
        """Random element whose support is drawn from monomials of degree in
        [min_degree, max_degree] (default N - 1)."""
        top = self.N - 1 if max_degree is None else min(max_degree, self.N - 1)
        vec = self._zeros()
        dom = self.domain
        for k in range(self.B):
            d = int(self.degs[k])
            if d > top:
                continue
            if rng.random() >= density:
                continue
            if self.case == "B":
                lo = max(0, min_degree - d)
                hi = top - d + 1
                if lo >= hi:
                    continue
                # random digits in positions lo..hi-1 of the p-adic expansion
                val = 0
                for j in range(lo, hi):
                    val += dom.teichmuller(int(rng.integers(dom.p))) * self.p ** j
                vec[k] = val
            else:
                if d < min_degree:
                    continue
                vec[k] = int(rng.integers(1, dom.q))
        return self.element(vec)

    def random_monomial(self, rng: np.random.Generator, max_degree: int) -> Element:
        while True:
            alpha = tuple(int(x) for x in rng.integers(0, max_degree + 1, size=self.n))
            if sum(alpha) <= max_degree and sum(alpha) < self.N:
                return self.monomial(alpha)

    def monomials_upto(self, d: int) -> list[Exponent]:
        from .order import all_exponents_upto
        return sorted((a for a in all_exponents_upto(self.n, d) if sum(a) < self.N),
                      key=sort_key_fn(self.order))


class _Scalar:
    """Wrapper marking a raw coefficient as an already reduced scalar."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        self.value = value


# -- validation ----------------------------------------------------------------

def validate_presentation(ring_or_presentation) -> ValidationReport:
    """Check shape, locality, triangularity and the consistency relations."""
    if isinstance(ring_or_presentation, RingPresentation):
        ring_or_presentation = Ring(ring_or_presentation, validate=False)
    ring: Ring = ring_or_presentation
    rep = ValidationReport()
    for name, i, r, msg in ring._bad_keys:
        rep.add(f"{name}-index", i, r, msg)
    dom = ring.domain
    n = ring.n
    for (i, r), e in ring.sigma_elems.items():
        if ring.case == "B" and r == 1:
            rep.add("sigma-uniformiser", i, r, "x1 is the uniformiser p; its sigma is fixed to the identity")
            continue
        if not ring.uses_only(e, i - 1):
            rep.add("sigma-subring", i, r, f"sigma_{i}(x_{r}) must lie in the subring of x_1..x_{i - 1}")
        terms = e.terms
        zero = (0,) * n
        if zero in terms:
            rep.add("sigma-constant", i, r, "nonzero constant term: sigma must preserve the maximal ideal")
        er = tuple(1 if t == r - 1 else 0 for t in range(n))
        q = terms.get(er, 0)
        if q == 0 or dom.residue(q) == 0:
            rep.add("sigma-q", i, r, f"coefficient of x_{r} in sigma_{i}(x_{r}) is not an invertible digit")
    for (i, r), e in ring.delta_elems.items():
        if ring.case == "B" and r == 1:
            rep.add("delta-uniformiser", i, r, "x1 is the uniformiser p; delta(p) must be 0")
            continue
        if not ring.uses_only(e, i - 1):
            rep.add("delta-subring", i, r, f"delta_{i}(x_{r}) must lie in the subring of x_1..x_{i - 1}")
        low = [a for a in e.terms if sum(a) < 2]
        if low:
            rep.add("delta-locality", i, r, f"delta_{i}(x_{r}) has terms of degree < 2: {sorted(low)}")
    rep.triangular = ring._is_triangular()
    if not rep.ok:
        return rep
    # consistency on the defining relations x_s x_r = sigma_s(x_r) x_s + delta_s(x_r)
    lo = 2 if ring.case == "B" else 1
    mul = ring._mul_unchecked
    for i in range(lo + 2, n + 1):
        for s in range(lo + 1, i):
            for r in range(lo, s):
                xs, xr = ring.var(s), ring.var(r)
                ss, ds = ring.sigma_of(s, r), ring.delta_of(s, r)
                lhs = mul(ring.sigma_of(i, s), ring.sigma_of(i, r))
                rhs = mul(ring.apply_sigma(i, ss), ring.sigma_of(i, s)) + ring.apply_sigma(i, ds)
                if lhs != rhs:
                    rep.add("sigma-relation", i, r,
                            f"sigma_{i} does not respect x_{s} x_{r} = sigma_{s}(x_{r}) x_{s} + delta_{s}(x_{r})")
                dl = mul(ring.delta_of(i, s), xr) + mul(ring.sigma_of(i, s), ring.delta_of(i, r))
                dr = (mul(ring.apply_delta(i, ss), xs) + mul(ring.apply_sigma(i, ss), ring.delta_of(i, s))
                      + ring.apply_delta(i, ds))
                if dl != dr:
                    rep.add("delta-relation", i, r,
                            f"delta_{i} does not respect x_{s} x_{r} = sigma_{s}(x_{r}) x_{s} + delta_{s}(x_{r})")
    return rep


def make_ring(spec: RingPresentation | str, **kw) -> Ring:
    """Ring from a presentation or a preset name."""
    if isinstance(spec, str):
        spec = preset(spec, **kw)
    return Ring(spec)


# module-level conveniences mirroring the Ring methods

def normalize(ring: Ring, raw) -> Element:
    return ring.normalize(raw)


def add(a: Element, b: Element) -> Element:
    return a.ring.add(a, b)


def sub(a: Element, b: Element) -> Element:
    return a.ring.sub(a, b)


def mul(a: Element, b: Element) -> Element:
    return a.ring.mul(a, b)


def lm(a: Element, order: str | None = None):
    return a.ring.lm(a, order)


def lc(a: Element, order: str | None = None) -> int:
    return a.ring.lc(a, order)


def lt(a: Element, order: str | None = None) -> Element:
    return a.ring.lt(a, order)


def support(a: Element) -> set[Exponent]:
    return a.support()


def equal(a: Element, b: Element) -> bool:
    return a.ring.equal(a, b)

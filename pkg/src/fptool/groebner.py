"""Ideals over F_p[x_1..x_n] backed by reduced Groebner bases.

Buchberger's algorithm with the normal selection strategy and the
Gebauer-Moeller installation of both Buchberger criteria.  Everything the
Frobenius and linkage layers need sits on top of it: membership, equality,
intersection and colon by elimination, ordinary and Frobenius powers,
dimension via independent sets, and extension to larger rings.
"""

from __future__ import annotations

import heapq
import itertools
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from operator import add, sub

from .errors import PreconditionError, ResourceCeilingError, RingMismatchError
from .ring import Elimination, Polynomial, RingContext, frobenius_power

DEFAULT_GEN_CEILING = 50000

SEQUENTIAL = "sequential"
PARALLEL = "parallel"
_spair_mode = SEQUENTIAL


def set_spair_mode(mode):
    """Select how S-pairs are reduced: one at a time or in concurrent batches.

    Both modes produce the identical reduced basis.
    """
    global _spair_mode
    if mode not in (SEQUENTIAL, PARALLEL):
        raise PreconditionError(f"unknown S-pair mode {mode!r}")
    _spair_mode = mode


def get_spair_mode():
    return _spair_mode


def generator_ceiling():
    raw = os.environ.get("FPTOOL_GEN_CEILING")
    if raw is None:
        return DEFAULT_GEN_CEILING
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"FPTOOL_GEN_CEILING must be an integer, got {raw!r}") from None
    if value <= 0:
        raise PreconditionError("FPTOOL_GEN_CEILING must be positive")
    return value


# ---------------------------------------------------------------------------
# low-level kernel on {exp: coef} dictionaries
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _neg_key_fn(order):
    key = order.key

    @lru_cache(maxsize=None)
    def neg_key(exp):
        return tuple(-k for k in key(exp))

    return neg_key


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(map(max, a, b))


def _mask(exp):
    m = 0
    for i, a in enumerate(exp):
        if a:
            m |= 1 << i
    return m


class _Elt:
    """A monic basis element prepared for fast reduction."""

    __slots__ = ("lm", "mask", "tail", "terms")

    def __init__(self, terms, lm):
        self.terms = terms
        self.lm = lm
        self.mask = _mask(lm)
        self.tail = [(e, c) for e, c in terms.items() if e != lm]


def _find_divisor(exp, basis):
    m = _mask(exp)
    for g in basis:
        if g.mask & ~m == 0 and _divides(g.lm, exp):
            return g
    return None


def _reduce(terms, basis, p, neg_key):
    """Fully reduce ``terms`` modulo ``basis`` (list of monic ``_Elt``)."""
    if not basis or not terms:
        return dict(terms)
    f = dict(terms)
    heap = [(neg_key(e), e) for e in f]
    heapq.heapify(heap)
    rem = {}
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        _, e = pop(heap)
        c = f.pop(e, None)
        if c is None:
            continue
        g = _find_divisor(e, basis)
        if g is None:
            rem[e] = c
            continue
        shift = tuple(map(sub, e, g.lm))
        for ge, gc in g.tail:
            ne = tuple(map(add, ge, shift))
            old = f.get(ne)
            if old is None:
                v = (-c * gc) % p
                if v:
                    f[ne] = v
                    push(heap, (neg_key(ne), ne))
            else:
                v = (old - c * gc) % p
                if v:
                    f[ne] = v
                else:
                    del f[ne]
    return rem


def _leading(terms, key):
    return max(terms, key=key)


def _make_monic(terms, lm, p):
    c = terms[lm]
    if c == 1:
        return terms
    inv = pow(c, -1, p)
    return {e: v * inv % p for e, v in terms.items()}


def _spoly(a, b, p):
    lcm = _lcm(a.lm, b.lm)
    sa = tuple(map(sub, lcm, a.lm))
    sb = tuple(map(sub, lcm, b.lm))
    out = {}
    for e, c in a.tail:
        ne = tuple(map(add, e, sa))
        out[ne] = c
    for e, c in b.tail:
        ne = tuple(map(add, e, sb))
        v = (out.get(ne, 0) - c) % p
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


def _minimalize_monomials(exps):
    """Minimal generators of a monomial ideal, given exponent tuples."""
    uniq = sorted(set(exps), key=lambda e: (sum(e), e))
    kept = []
    for e in uniq:
        m = _mask(e)
        if not any(km & ~m == 0 and _divides(k, e) for k, km in kept):
            kept.append((e, m))
    return [k for k, _ in kept]


def _buchberger(polys, ring):
    """Reduced Groebner basis of the dictionaries ``polys`` in ``ring``."""
    p = ring.p
    key = ring.order.key
    neg_key = _neg_key_fn(ring.order)
    polys = [t for t in polys if t]
    if not polys:
        return []
    if all(len(t) == 1 for t in polys):
        return [{e: 1} for e in _minimalize_monomials([next(iter(t)) for t in polys])]

    store = []  # every element ever added, indexed
    active = []  # indices of the current basis
    pairs = {}  # (i, j) -> lcm
    queue = []  # lazy heap of (order key of lcm, pair); stale entries skipped

    def update(h_terms):
        lm = _leading(h_terms, key)
        h_terms = _make_monic(h_terms, lm, p)
        h = _Elt(h_terms, lm)
        hi = len(store)
        store.append(h)
        # Gebauer-Moeller on the new pairs: group by lcm; drop a group whose
        # lcm has a proper divisor among the other lcms, or which contains a
        # pair with coprime leading monomials; otherwise keep one pair.
        groups = {}
        for gi in active:
            l = _lcm(lm, store[gi].lm)
            coprime = all(a == 0 or b == 0 for a, b in zip(lm, store[gi].lm))
            first, any_coprime = groups.get(l, (gi, False))
            groups[l] = (min(first, gi), any_coprime or coprime)
        seen = []
        new_pairs = {}
        for l in sorted(groups, key=lambda l: (sum(l), key(l))):
            m = _mask(l)
            d = sum(l)
            divisible = any(
                sd < d and sm & ~m == 0 and _divides(sl, l) for sl, sm, sd in seen
            )
            seen.append((l, m, d))
            gi, coprime = groups[l]
            if not divisible and not coprime:
                new_pairs[(gi, hi)] = l
        # Gebauer-Moeller: prune old pairs
        for (i, j), l in list(pairs.items()):
            if (
                _divides(lm, l)
                and _lcm(store[i].lm, lm) != l
                and _lcm(store[j].lm, lm) != l
            ):
                del pairs[(i, j)]
        pairs.update(new_pairs)
        for pr, l in new_pairs.items():
            heapq.heappush(queue, (key(l), pr))
        active[:] = [gi for gi in active if not _divides(lm, store[gi].lm)] + [hi]

    def basis():
        return [store[i] for i in active]

    for t in sorted(polys, key=lambda t: key(_leading(t, key))):
        r = _reduce(t, basis(), p, neg_key)
        if r:
            update(r)

    def pop_pair():
        while True:
            _, pr = heapq.heappop(queue)
            if pr in pairs:
                return pr

    mode = _spair_mode
    while pairs:
        if mode == PARALLEL:
            deg = min(sum(l) for l in pairs.values())
            batch = sorted(
                (pr for pr, l in pairs.items() if sum(l) == deg),
                key=lambda pr: (key(pairs[pr]), pr),
            )
            for pr in batch:
                del pairs[pr]
            snapshot = basis()
            with ThreadPoolExecutor(max_workers=min(4, len(batch))) as pool:
                reduced = list(
                    pool.map(
                        lambda pr: _reduce(_spoly(store[pr[0]], store[pr[1]], p), snapshot, p, neg_key),
                        batch,
                    )
                )
            for r in reduced:
                if r:
                    r = _reduce(r, basis(), p, neg_key)
                    if r:
                        update(r)
        else:
            pr = pop_pair()
            del pairs[pr]
            s = _spoly(store[pr[0]], store[pr[1]], p)
            r = _reduce(s, basis(), p, neg_key)
            if r:
                update(r)

    # minimal basis, then interreduce
    elts = basis()
    elts.sort(key=lambda g: key(g.lm))
    minimal = []
    for g in elts:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = _reduce(g.terms, others, p, neg_key)
        out.append(_make_monic(r, g.lm, p))
    return out


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------


class GroebnerBasis:
    """The reduced Groebner basis of an ideal for its ring's order."""

    __slots__ = ("ring", "elements", "_elts", "_neg_key")

    def __init__(self, ring, term_dicts):
        key = ring.order.key
        term_dicts = sorted(term_dicts, key=lambda t: key(_leading(t, key)), reverse=True)
        self.ring = ring
        self.elements = tuple(Polynomial._raw(ring, t) for t in term_dicts)
        self._elts = [_Elt(t, _leading(t, key)) for t in term_dicts]
        self._neg_key = _neg_key_fn(ring.order)

    @property
    def order(self):
        return self.ring.order.name

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def leading_monomials(self):
        return [g.lm for g in self._elts]

    def reduce(self, f):
        if f.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {f.ring} vs {self.ring}")
        return Polynomial._raw(self.ring, _reduce(f.terms, self._elts, self.ring.p, self._neg_key))

    def is_unit(self):
        return len(self._elts) == 1 and not any(self._elts[0].lm)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.elements) + ")"


class Ideal:
    """An ideal given by generators; its reduced Groebner basis is cached."""

    def __init__(self, ring, generators=()):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            elif isinstance(g, int):
                g = ring.const(g)
            if g.ring != ring:
                raise RingMismatchError(f"generator {g} lives in {g.ring}, not {ring}")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._gb = None
        self._lock = threading.Lock()

    # -- Groebner basis ------------------------------------------------------

    def groebner(self):
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = GroebnerBasis(
                        self.ring, _buchberger([g.terms for g in self.generators], self.ring)
                    )
        return self._gb

    @classmethod
    def from_basis(cls, gb):
        ideal = cls(gb.ring, gb.elements)
        ideal._gb = gb
        return ideal

    # -- queries ---------------------------------------------------------------

    def is_zero(self):
        return not self.generators

    def is_unit(self):
        return self.groebner().is_unit()

    def is_monomial(self):
        return all(g.is_monomial() for g in self.groebner())

    def __contains__(self, f):
        return contains(self, f)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __add__(self, other):
        _same_ring(self, other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            _same_ring_poly(self, other)
            return Ideal(self.ring, [g * other for g in self.generators])
        _same_ring(self, other)
        return Ideal(self.ring, _dedup(g * h for g in self.generators for h in other.generators))

    __rmul__ = __mul__

    def issubset(self, other):
        """``self`` is contained in ``other``."""
        _same_ring(self, other)
        gb = other.groebner()
        return all(not gb.reduce(g) for g in self.generators)

    def equals(self, other):
        return ideal_equal(self, other)

    def map_to(self, ring):
        return Ideal(ring, [g.map_to(ring) for g in self.generators])

    def reduced(self):
        """Same ideal, generated by its reduced basis."""
        return Ideal.from_basis(self.groebner())

    def __str__(self):
        return str(self.groebner())

    def __repr__(self):
        return f"Ideal{self}"


def _same_ring(I, J):
    if I.ring != J.ring:
        raise RingMismatchError(f"ring mismatch: {I.ring} vs {J.ring}")


def _same_ring_poly(I, f):
    if I.ring != f.ring:
        raise RingMismatchError(f"ring mismatch: {I.ring} vs {f.ring}")


def _dedup(polys):
    seen = {}
    for f in polys:
        if f:
            f = f.monic()
            seen.setdefault(f, None)
    return list(seen)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def reduced_groebner(I):
    return I.groebner()


def normal_form(f, I):
    _same_ring_poly(I, f)
    return I.groebner().reduce(f)


def contains(I, f):
    return not normal_form(f, I)


def ideal_equal(I, J):
    _same_ring(I, J)
    return I.groebner().elements == J.groebner().elements


def _eliminate_first(polys, big_ring, target_ring):
    """Groebner-eliminate the first variable of ``big_ring``."""
    gb = _buchberger([f.terms for f in polys], big_ring)
    kept = [t for t in gb if all(e[0] == 0 for e in t)]
    return Ideal(target_ring, [Polynomial._raw(big_ring, t).map_to(target_ring) for t in kept])


def _fresh_name(ring, stem="w"):
    name = stem
    n = 0
    while name in ring.vars:
        n += 1
        name = f"{stem}{n}"
    return name


def intersect(I, J):
    """I ∩ J via elimination of a tag variable from wI + (1 - w)J."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring)
    if I.is_unit():
        return J.reduced()
    if J.is_unit():
        return I.reduced()
    w = _fresh_name(ring)
    big = RingContext(ring.field, (w,) + ring.vars, Elimination(1))
    wv = big.var(w)
    gens = [wv * f.map_to(big) for f in I.generators]
    gens += [(1 - wv) * g.map_to(big) for g in J.generators]
    return _eliminate_first(gens, big, ring)


def divide_exact(a, b):
    """Quotient ``a / b``; raises if ``b`` does not divide ``a``."""
    if a.ring != b.ring:
        raise RingMismatchError("ring mismatch in division")
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = a.ring
    p = ring.p
    key = ring.order.key
    lm, lc = b.leading_term()
    inv = pow(lc, -1, p)
    rest = dict(a.terms)
    quot = {}
    while rest:
        e = _leading(rest, key)
        if not _divides(lm, e):
            raise PreconditionError(f"{b} does not divide {a}")
        shift = tuple(map(sub, e, lm))
        c = rest[e] * inv % p
        quot[shift] = c
        for be, bc in b.terms.items():
            ne = tuple(map(add, be, shift))
            v = (rest.get(ne, 0) - c * bc) % p
            if v:
                rest[ne] = v
            else:
                rest.pop(ne, None)
    return Polynomial._raw(ring, quot)


def quotient_by_element(I, f):
    """I : (f) = (I ∩ (f)) / f."""
    _same_ring_poly(I, f)
    if not f:
        raise PreconditionError("colon by the zero ideal is undefined")
    if f.is_constant():
        return I.reduced()
    inter = intersect(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [divide_exact(h, f) for h in inter.generators])


def colon(I, J):
    """I : J = ∩_j (I : f_j) over the generators f_j of J."""
    _same_ring(I, J)
    if J.is_zero():
        raise PreconditionError("colon by the zero ideal is undefined")
    result = None
    for f in J.groebner().elements:
        part = quotient_by_element(I, f)
        result = part if result is None else intersect(result, part)
        if result.is_zero():
            break
    return result


def ideal_power(I, n, ceiling=None):
    """I^n generated by n-fold products of generators, duplicates removed."""
    if not isinstance(n, int) or n < 0:
        raise PreconditionError("power must be a nonnegative integer")
    ring = I.ring
    if n == 0:
        return Ideal(ring, [ring.one()])
    if I.is_zero():
        return Ideal(ring)
    limit = generator_ceiling() if ceiling is None else ceiling
    gens = _dedup(I.generators)
    if all(g.is_monomial() for g in gens):
        base = [next(iter(g.terms)) for g in gens]
        base = _minimalize_monomials(base)
        current = list(base)
        for k in range(2, n + 1):
            current = _minimalize_monomials(
                [tuple(map(add, a, b)) for a in current for b in base]
            )
            if len(current) > limit:
                raise ResourceCeilingError(
                    f"I^{k} needs {len(current)} generators (ceiling {limit})"
                )
        return Ideal(ring, [Polynomial._raw(ring, {e: 1}) for e in current])
    current = gens
    for k in range(2, n + 1):
        current = _dedup(h * g for h in current for g in gens)
        if len(current) > limit:
            raise ResourceCeilingError(f"I^{k} needs {len(current)} generators (ceiling {limit})")
    return Ideal(ring, current)


def bracket_power(I, e):
    """Frobenius power I^[p^e], generated by the p^e-th powers of generators."""
    return Ideal(I.ring, [frobenius_power(g, e) for g in I.generators])


def dimension_height(I):
    """(Krull dimension of R/I, n - dim) from a maximal independent set mod in(I)."""
    gb = I.groebner()
    if gb.is_unit():
        raise PreconditionError("the unit ideal has no dimension")
    n = I.ring.nvars
    supports = [frozenset(i for i, a in enumerate(lm) if a) for lm in gb.leading_monomials()]
    for k in range(n, -1, -1):
        for subset in itertools.combinations(range(n), k):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return k, n - k
    raise AssertionError("empty set is always independent for a proper ideal")


def extend_ring(I, new_vars):
    """Reinterpret I in the ring with ``new_vars`` appended after the old ones."""
    new_vars = tuple(new_vars)
    clash = set(new_vars) & set(I.ring.vars)
    if clash:
        raise PreconditionError(f"variable name clash: {', '.join(sorted(clash))}")
    ring = I.ring.with_vars(I.ring.vars + new_vars)
    return I.map_to(ring)

"""The Frobenius trace and p^e-th roots of ideals in F_p[x_1..x_n].

F^e_*R is free over R on the monomials x^a with 0 <= a_i < q (q = p^e), so a
polynomial splits uniquely as h = sum_a (g_a)^q x^a.  The trace picks out the
component at a = (q-1, ..., q-1); the root of (h) is the ideal of all g_a.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError
from .groebner import Ideal, _dedup, _minimalize_monomials
from .ring import Polynomial

MAX_Q = 2**40


@dataclass(frozen=True)
class FrobeniusLevel:
    p: int
    e: int
    q: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.e, int) or self.e < 0:
            raise PreconditionError(f"Frobenius level must be a nonnegative integer, got {self.e!r}")
        q = self.p**self.e
        if q > MAX_Q:
            raise PreconditionError(f"p^e = {self.p}^{self.e} exceeds the supported bound 2^40")
        object.__setattr__(self, "q", q)


def _q(ring, e):
    if isinstance(e, FrobeniusLevel):
        if e.p != ring.p:
            raise PreconditionError("Frobenius level built for another characteristic")
        return e.q
    return FrobeniusLevel(ring.p, e).q


def trace(f, e):
    """Tr^e: x^i -> x^((i - (q-1))/q) when every entry is integral, else 0."""
    q = _q(f.ring, e)
    out = {}
    for exp, c in f.terms.items():
        shifted = [a - (q - 1) for a in exp]
        if all(s >= 0 and s % q == 0 for s in shifted):
            out[tuple(s // q for s in shifted)] = c
    return Polynomial._raw(f.ring, out)


def root_components(f, e):
    """The polynomials g_a with f = sum_a g_a^q x^a, keyed by residue vector a."""
    q = _q(f.ring, e)
    comps = {}
    for exp, c in f.terms.items():
        a = tuple(x % q for x in exp)
        comps.setdefault(a, {})[tuple(x // q for x in exp)] = c
    ring = f.ring
    return {a: Polynomial._raw(ring, t) for a, t in sorted(comps.items())}


def pe_root(I, e):
    """I^[1/q]: the smallest ideal K with I contained in K^[q].

    The root of a sum of ideals is the sum of the roots, so each generator
    is split separately.
    """
    q = _q(I.ring, e)
    if q == 1:
        return Ideal(I.ring, I.generators)
    gens = []
    for h in I.generators:
        gens.extend(root_components(h, e).values())
    return Ideal(I.ring, _minimal_list(gens))


def _minimal_list(polys):
    """Deduplicate, and drop monomials that are multiples of other monomials."""
    polys = _dedup(polys)
    monos = [next(iter(f.terms)) for f in polys if f.is_monomial()]
    if len(monos) < 2:
        return polys
    keep = set(_minimalize_monomials(monos))
    out = []
    for f in polys:
        if f.is_monomial():
            exp = next(iter(f.terms))
            if exp not in keep:
                continue
            keep.discard(exp)
        out.append(f)
    return out

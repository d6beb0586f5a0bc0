"""Hypothesis strategies and brute-force oracles shared by the test modules."""

from functools import lru_cache

from hypothesis import strategies as st

from fptool.groebner import Ideal
from fptool.ring import Polynomial, RingContext

PRIMES = (2, 3, 5)
VARS = ("x", "y", "z")


def ring(p, n=2, order="grevlex"):
    return RingContext(p, VARS[:n], order)


@st.composite
def exps(draw, n, max_deg, nonconstant=False):
    """Exponent vectors of total degree at most max_deg."""
    left = max_deg
    out = []
    for _ in range(n):
        a = draw(st.integers(0, left))
        out.append(a)
        left -= a
    if nonconstant and not any(out):
        out[draw(st.integers(0, n - 1))] = 1
    return tuple(out)


@st.composite
def polys(draw, R, max_terms=4, max_deg=4, nonzero=False):
    terms = draw(
        st.dictionaries(exps(R.nvars, max_deg), st.integers(1, R.p - 1), max_size=max_terms)
    )
    f = Polynomial(R, terms)
    if nonzero and not f:
        f = R.one()
    return f


@st.composite
def rings(draw, primes=PRIMES, max_vars=3, orders=("grevlex",)):
    return RingContext(
        draw(st.sampled_from(primes)),
        VARS[: draw(st.integers(1, max_vars))],
        draw(st.sampled_from(orders)),
    )


@st.composite
def ring_and_polys(draw, count, primes=PRIMES, max_vars=3, max_terms=4, max_deg=4):
    R = draw(rings(primes, max_vars))
    return R, [draw(polys(R, max_terms, max_deg)) for _ in range(count)]


@st.composite
def monomial_ideals(draw, R, max_gens=3, max_deg=4):
    gens = draw(st.lists(exps(R.nvars, max_deg, nonconstant=True), min_size=1, max_size=max_gens))
    return Ideal(R, [R.monomial(e) for e in gens])


@st.composite
def ideals(draw, R, max_gens=3, max_terms=3, max_deg=3):
    gens = draw(
        st.lists(polys(R, max_terms, max_deg, nonzero=True), min_size=1, max_size=max_gens)
    )
    return Ideal(R, gens)


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def monomial_member(exp, gens):
    """Monomial ideal membership is divisibility by some generator."""
    return any(divides(g, exp) for g in gens)


def candidate_rows(r, top):
    """All vectors of length r with sum top and at most two nonzero entries."""
    for i in range(r):
        yield tuple(top if k == i else 0 for k in range(r))
        for j in range(i + 1, r):
            for a in range(1, top):
                yield tuple(a if k == i else top - a if k == j else 0 for k in range(r))


@lru_cache(maxsize=None)
def decomposition_exists(beta, c, top):
    """Depth-first search over rows with at most two nonzero entries."""
    if c == 0:
        return not any(beta)
    for row in candidate_rows(len(beta), top):
        rest = tuple(b - x for b, x in zip(beta, row))
        if min(rest) >= 0 and decomposition_exists(rest, c - 1, top):
            return True
    return False


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in compositions(total - a, parts - 1):
            yield (a,) + rest


# criterion number -> (title, ok, seconds, limit, detail), filled by test_acceptance
ACCEPTANCE = {}

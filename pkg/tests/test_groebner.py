from itertools import combinations, product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fptool.errors import PreconditionError, ResourceCeilingError, RingMismatchError
from fptool.groebner import (
    Ideal,
    bracket_power,
    colon,
    contains,
    dimension_height,
    extend_ring,
    get_spair_mode,
    ideal_equal,
    ideal_power,
    intersect,
    normal_form,
    reduced_groebner,
    set_spair_mode,
)
from fptool.ring import Polynomial, RingContext

from helpers import divides, ideals, monomial_ideals, monomial_member, polys, ring


def I_(R, *gens):
    return Ideal(R, list(gens))


def gb_strs(I):
    return [str(g) for g in I.groebner()]


def sympy_reduced_gb(I):
    """Reduced basis from sympy, an independent Buchberger implementation."""
    R = I.ring
    syms = sympy.symbols(R.vars)
    exprs = [sympy.sympify(str(g).replace("^", "**"), locals=dict(zip(R.vars, syms))) for g in I.generators]
    order = {"grevlex": "grevlex", "lex": "lex"}[R.order.name]
    G = sympy.groebner(exprs, *syms, modulus=R.p, order=order)
    out = []
    for poly in G.polys:
        terms = {tuple(e): int(c) % R.p for e, c in poly.terms()}
        out.append(Polynomial(R, terms).monic())
    return sorted(out, key=lambda f: R.order.key(f.leading_monomial()), reverse=True)


def s_poly(a, b):
    R = a.ring
    la, lb = a.leading_monomial(), b.leading_monomial()
    lcm = tuple(map(max, la, lb))
    ma = R.monomial(tuple(x - y for x, y in zip(lcm, la)))
    mb = R.monomial(tuple(x - y for x, y in zip(lcm, lb)))
    return ma * a.monic() - mb * b.monic()


def test_gb_examples():
    R = ring(2)
    assert gb_strs(I_(R, "x")) == ["x"]
    R3 = ring(3, order="lex")
    assert gb_strs(I_(R3, "x - y", "y^2")) == ["x + 2*y", "y^2"]
    G = reduced_groebner(I_(R, "x^2", "x*y + y^2"))
    assert R.parse("y^3") in G.elements


def test_normal_form_examples():
    R = ring(2)
    assert normal_form(R.parse("x^2"), I_(R, "x")).is_zero()
    R3 = ring(3, order="lex")
    assert normal_form(R3.parse("x + y"), I_(R3, "x - y")) == R3.parse("2*y")
    assert normal_form(R.one(), I_(R, "x", "y")) == R.one()


def test_contains_and_equality_examples():
    R = ring(3)
    x, y = R.gens()
    assert contains(I_(R, "x^2", "y"), x**2 + y)
    assert not contains(I_(R, "x^2", "y"), x)
    assert contains(I_(R, "x + y", "y"), x)
    assert ideal_equal(I_(R, "x", "y"), I_(R, "x + y", "y"))
    assert not ideal_equal(I_(R, "x"), I_(R, "x^2"))
    assert ideal_equal(Ideal(R), Ideal(R, [R.zero()]))


def test_intersect_examples():
    R = ring(2)
    assert ideal_equal(intersect(I_(R, "x"), I_(R, "y")), I_(R, "x*y"))
    assert ideal_equal(intersect(I_(R, "x"), I_(R, "x")), I_(R, "x"))
    assert ideal_equal(intersect(I_(R, "x", "y"), I_(R, "x^2", "y")), I_(R, "x^2", "y"))


def test_colon_examples():
    R = ring(2)
    assert ideal_equal(colon(I_(R, "x^2"), I_(R, "x")), I_(R, "x"))
    assert ideal_equal(colon(I_(R, "x*y"), I_(R, "x")), I_(R, "y"))
    S = RingContext(2, ["x", "y", "u11", "u12", "u21", "u22"])
    g1, g2 = S.parse("u11*x + u12*y"), S.parse("u21*x + u22*y")
    got = colon(Ideal(S, [g1, g2]), I_(S, "x", "y"))
    assert ideal_equal(got, Ideal(S, [g1, g2, S.parse("u11*u22 + u12*u21")]))
    with pytest.raises(PreconditionError):
        colon(I_(R, "x"), Ideal(R))


def test_power_and_bracket_examples():
    R = ring(2)
    assert ideal_equal(ideal_power(I_(R, "x", "y"), 2), I_(R, "x^2", "x*y", "y^2"))
    assert ideal_power(I_(R, "x", "y"), 0).is_unit()
    assert len(ideal_power(I_(R, "x", "y"), 3).generators) == 4
    assert ideal_equal(bracket_power(I_(R, "x", "y"), 1), I_(R, "x^2", "y^2"))
    assert ideal_equal(bracket_power(I_(R, "x + y"), 1), I_(R, "x^2 + y^2"))
    R3 = ring(3)
    assert ideal_equal(bracket_power(I_(R3, "x", "y^2"), 1), I_(R3, "x^3", "y^6"))


def test_power_ceiling():
    R = ring(2, 3)
    with pytest.raises(ResourceCeilingError):
        ideal_power(I_(R, "x", "y", "z"), 4, ceiling=10)
    with pytest.raises(ResourceCeilingError):
        ideal_power(I_(R, "x + y", "y + z", "x + z"), 3, ceiling=5)


def test_ceiling_from_environment(monkeypatch):
    monkeypatch.setenv("FPTOOL_GEN_CEILING", "3")
    with pytest.raises(ResourceCeilingError):
        ideal_power(I_(ring(2), "x", "y"), 3)


def test_dimension_examples():
    R = ring(2)
    assert dimension_height(I_(R, "x")) == (1, 1)
    assert dimension_height(I_(R, "x", "y")) == (0, 2)
    assert dimension_height(I_(ring(3), "x*y")) == (1, 1)
    with pytest.raises(PreconditionError):
        dimension_height(I_(R, "1"))


def test_extend_ring_examples():
    R = RingContext(2, ["x"])
    big = extend_ring(I_(R, "x"), ["u"])
    assert big.ring.vars == ("x", "u") and str(big) == "(x)"
    assert extend_ring(Ideal(R), ["u"]).is_zero()
    R2 = ring(2)
    I = I_(R2, "x", "y")
    assert contains(I, R2.var("y"))
    J = extend_ring(I, ["u"])
    assert contains(J, J.ring.var("y"))
    with pytest.raises(PreconditionError):
        extend_ring(I, ["x"])


def test_ring_mismatch_raises():
    with pytest.raises(RingMismatchError):
        intersect(I_(ring(2), "x"), I_(ring(3), "x"))


# -- properties ---------------------------------------------------------------


ORDERS = ("grevlex", "lex")


@st.composite
def ring_ideal(draw, primes=(2, 3, 5), max_vars=3, orders=ORDERS):
    R = RingContext(
        draw(st.sampled_from(primes)),
        ("x", "y", "z")[: draw(st.integers(1, max_vars))],
        draw(st.sampled_from(orders)),
    )
    return R, draw(ideals(R))


@settings(max_examples=60, deadline=None)
@given(ring_ideal())
def test_gb_matches_sympy(RI):
    _, I = RI
    assert list(I.groebner().elements) == sympy_reduced_gb(I)


@settings(max_examples=60, deadline=None)
@given(ring_ideal())
def test_buchberger_criterion_and_reducedness(RI):
    R, I = RI
    G = I.groebner()
    elems = list(G.elements)
    for a, b in combinations(elems, 2):
        assert G.reduce(s_poly(a, b)).is_zero()
    lms = [g.leading_monomial() for g in elems]
    for i, g in enumerate(elems):
        assert g.leading_term()[1] == 1
        others = [m for j, m in enumerate(lms) if j != i]
        for e in g.terms:
            assert not any(divides(m, e) for m in others)
    for f in I.generators:
        assert contains(I, f)


@settings(max_examples=60, deadline=None)
@given(ring_ideal(), st.data())
def test_normal_form_properties(RI, data):
    R, I = RI
    f = data.draw(polys(R))
    r = normal_form(f, I)
    assert normal_form(r, I) == r
    assert contains(I, f - r)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_monomial_membership_matches_divisibility(p, data):
    R = ring(p, 3)
    I = data.draw(monomial_ideals(R))
    gens = [next(iter(g.terms)) for g in I.generators]
    for e in product(range(4), repeat=3):
        assert contains(I, R.monomial(e)) == monomial_member(e, gens)


def monomial_colon(gens, f):
    """(m_i) : x^f = (x^{max(m_i - f, 0)}) for monomial ideals."""
    return [tuple(max(a - b, 0) for a, b in zip(g, f)) for g in gens]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_colon_properties(p, data):
    R = ring(p, 3)
    I = data.draw(monomial_ideals(R))
    f = data.draw(monomial_ideals(R, max_gens=1)).generators[0]
    K = colon(I, Ideal(R, [f]))
    gens = [next(iter(g.terms)) for g in I.generators]
    oracle = Ideal(R, [R.monomial(e) for e in monomial_colon(gens, next(iter(f.terms)))])
    assert ideal_equal(K, oracle)
    assert (K * f).issubset(I)


@settings(max_examples=30, deadline=None)
@given(ring_ideal(primes=(2, 3), max_vars=2, orders=("grevlex",)), st.data())
def test_colon_general_contains_product(RI, data):
    R, I = RI
    J = data.draw(ideals(R, max_gens=2))
    K = colon(I, J)
    assert (K * J).issubset(I)
    assert I.issubset(K)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_intersection_properties(p, data):
    R = ring(p, 3)
    I = data.draw(monomial_ideals(R))
    J = data.draw(monomial_ideals(R))
    K = intersect(I, J)
    assert K.issubset(I) and K.issubset(J)
    assert ideal_equal(K + J, J)
    a = [next(iter(g.terms)) for g in I.generators]
    b = [next(iter(g.terms)) for g in J.generators]
    lcms = [R.monomial(tuple(map(max, u, v))) for u in a for v in b]
    assert ideal_equal(K, Ideal(R, lcms))


@settings(max_examples=30, deadline=None)
@given(ring_ideal(primes=(2, 3), max_vars=2, orders=("grevlex",)), st.data())
def test_intersection_general(RI, data):
    R, I = RI
    J = data.draw(ideals(R, max_gens=2))
    K = intersect(I, J)
    assert K.issubset(I) and K.issubset(J)
    assert (I * J).issubset(K)


@settings(max_examples=30, deadline=None)
@given(ring_ideal(primes=(2, 3), max_vars=2, orders=("grevlex",)), st.data(), st.integers(1, 2))
def test_bracket_power_distributes(RI, data, e):
    R, I = RI
    J = data.draw(ideals(R, max_gens=2))
    assert ideal_equal(bracket_power(I + J, e), bracket_power(I, e) + bracket_power(J, e))


def brute_dimension(gens, n):
    best = 0
    for k in range(n + 1):
        for s in combinations(range(n), k):
            if not any(all(i in s for i, a in enumerate(g) if a) for g in gens):
                best = max(best, k)
    return best


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_dimension_matches_independent_set_search(p, data):
    R = ring(p, 3)
    I = data.draw(monomial_ideals(R))
    gens = [next(iter(g.terms)) for g in I.generators]
    d = brute_dimension(gens, 3)
    assert dimension_height(I) == (d, 3 - d)


@settings(max_examples=25, deadline=None)
@given(ring_ideal(primes=(2, 3, 5), max_vars=3, orders=ORDERS))
def test_parallel_spairs_give_identical_basis(RI):
    R, I = RI
    old = get_spair_mode()
    try:
        set_spair_mode("sequential")
        seq = list(Ideal(R, I.generators).groebner().elements)
        set_spair_mode("parallel")
        par = list(Ideal(R, I.generators).groebner().elements)
    finally:
        set_spair_mode(old)
    assert seq == par

"""Acceptance suite: one test per criterion, each timed against its limit.

Run under pytest (a summary line per criterion is printed at the end) or
directly with ``python3 tests/test_acceptance.py``.
"""

import io
import random
import shlex
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from fptool.cli import run
from fptool.frobenius import pe_root, trace
from fptool.fsing import fpt_bounds, nu, test_ideal as tau, verify_ein
from fptool.groebner import Ideal, bracket_power, get_spair_mode, ideal_equal, set_spair_mode
from fptool.linkage import (
    fpt_inequality_check,
    generator_extension_check,
    generic_link,
    split_exponents,
    theorem33_compare,
    verify_geometric_link,
)
from fptool.report import FAIL, PASS
from fptool.ring import Polynomial, RingContext

from helpers import ACCEPTANCE, VARS, compositions, decomposition_exists

GOLDEN = Path(__file__).parent / "golden"


def ring(p, n):
    return RingContext(p, VARS[:n])


def criterion(number, title, limit):
    """Time the wrapped check, record the outcome, and enforce the limit."""

    def wrap(fn):
        def run_it():
            start = time.perf_counter()
            detail = ""
            try:
                fn()
                ok = True
            except Exception as exc:
                ok = False
                detail = f"{type(exc).__name__}: {exc}"
            elapsed = time.perf_counter() - start
            if ok and limit is not None and elapsed > limit:
                ok = False
                detail = f"took {elapsed:.1f}s"
            ACCEPTANCE[number] = (title, ok, elapsed, limit, detail)
            assert ok, detail

        run_it.__name__ = fn.__name__
        run_it.__doc__ = fn.__doc__
        return run_it

    return wrap


def summary_lines():
    lines = []
    for number in sorted(ACCEPTANCE):
        title, ok, elapsed, limit, detail = ACCEPTANCE[number]
        bound = "no limit" if limit is None else f"limit {limit:g}s"
        line = f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, {bound})"
        if detail:
            line += f" {detail}"
        lines.append(line)
    return lines


# -- 1: Frobenius roots --------------------------------------------------------


def random_poly(rng, R, max_deg=6, max_terms=4):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        left = rng.randint(0, max_deg)
        exp = []
        for _ in range(R.nvars):
            a = rng.randint(0, left)
            exp.append(a)
            left -= a
        rng.shuffle(exp)
        terms[tuple(exp)] = rng.randint(1, R.p - 1)
    return Polynomial(R, terms)


def root_corpus(seed=20240611, size=300):
    rng = random.Random(seed)
    for _ in range(size):
        R = ring(rng.choice((2, 3, 5)), rng.randint(1, 3))
        gens = [random_poly(rng, R) for _ in range(rng.randint(1, 4))]
        yield Ideal(R, gens), rng.randint(0, 2)


@criterion(1, "Frobenius-root calculus", 30)
def test_criterion_1_root_calculus():
    failures = []
    for I, e in root_corpus():
        if not ideal_equal(pe_root(bracket_power(I, e), e), I):
            failures.append(("root of bracket", I, e))
        if not I.issubset(bracket_power(pe_root(I, e), e)):
            failures.append(("bracket of root", I, e))
    rng = random.Random(7)
    for _ in range(200):
        R = ring(rng.choice((2, 3, 5)), rng.randint(1, 3))
        e = rng.randint(1, 2)
        q = R.p**e
        f = random_poly(rng, R, max_deg=3, max_terms=3)
        g = random_poly(rng, R)
        if trace(f**q * g, e) != f * trace(g, e):
            failures.append(("projection", f, g, e))
    assert not failures, failures[:3]


# -- 2: Ein's lemma ------------------------------------------------------------

EIN_CORPUS = [
    (3, 1, ("x",)),
    (3, 1, ("x^2",)),
    (2, 2, ("x*y",)),
    (3, 2, ("x - y",)),
    (2, 2, ("x^2 + y^2",)),
    (2, 2, ("x^2 + y^3",)),
    (3, 3, ("x*y - z^2",)),
    (2, 3, ("x*y*z",)),
    (3, 2, ("x^2*y + x*y^2",)),
    (2, 2, ("x", "y")),
    (3, 2, ("x", "y")),
    (2, 2, ("x^2", "y")),
    (2, 3, ("x", "y*z")),
    (2, 3, ("x*y", "x*z", "y*z")),
    (3, 2, ("x^2", "x*y", "y^2")),
    (3, 3, ("x - y", "z")),
    (2, 2, ("x^2", "y^2")),
    (3, 3, ("x*y", "z")),
    (2, 3, ("y - x^2", "z")),
    (2, 3, ("x", "y", "z")),
    (3, 3, ("x", "y", "z")),
    (2, 3, ("x^2", "y", "z")),
    (2, 3, ("x^2", "x*y", "x*z", "y^2", "y*z", "z^2")),
    (2, 3, ("x^2", "y^2", "z^2")),
    (2, 3, ("x - y", "y - z", "z^2")),
]


@criterion(2, "Ein's lemma suite", 120)
def test_criterion_2_ein_suite():
    assert len(EIN_CORPUS) == 25
    heights = set()
    for p, n, gens in EIN_CORPUS:
        rep = verify_ein(Ideal(ring(p, n), list(gens)), e_max=2)
        heights.add(rep.values["height"])
        assert rep.status("tau_c_in_I") == PASS, (p, gens)
        assert rep.status("product_inclusion_levelwise") == PASS, (p, gens)
    assert heights == {"1", "2", "3"}
    I = Ideal(ring(2, 2), ["x", "y"])
    assert ideal_equal(tau(I, 2, e_max=2).ideal, I)


# -- 3: nu and fpt -------------------------------------------------------------


@criterion(3, "nu/fpt table", 10)
def test_criterion_3_nu_fpt():
    I = Ideal(ring(2, 2), ["x", "y"])
    for e in (1, 2, 3):
        q = 2**e
        # monomials x^a y^b with a + b = r avoid (x^q, y^q) iff r <= 2(q - 1)
        count = max(r for r in range(3 * q) if any(a < q and r - a < q for a in range(r + 1)))
        assert nu(I, e=e) == 2 * (q - 1) == count
    b = fpt_bounds(Ideal(ring(3, 1), ["x^2"]), 1)
    assert b.interval() == "(1/3, 2/3]"
    assert b.lower.as_fraction() < Fraction(1, 2) <= b.upper.as_fraction()


# -- 4: generic link -----------------------------------------------------------


@criterion(4, "generic link of (x,y)", 30)
def test_criterion_4_generic_link():
    lk = generic_link(Ideal(ring(2, 2), ["x", "y"]))
    S = lk.ext
    expected = Ideal(S, list(lk.g) + [S.parse("u_1_1*u_2_2 + u_1_2*u_2_1")])
    assert [str(h) for h in lk.J.groebner()] == [str(h) for h in expected.groebner()]
    rep = verify_geometric_link(lk)
    assert rep.status("colon_back") == PASS
    assert rep.status("intersection") == PASS


# -- 5: linkage comparison of test ideals --------------------------------------


@criterion(5, "test-ideal comparison under linkage", 300)
def test_criterion_5_link_comparison():
    for p, n, gens in ((2, 2, ("x", "y")), (3, 2, ("x",))):
        lk = generic_link(Ideal(ring(p, n), list(gens)))
        rep = theorem33_compare(lk, e_max=1, reduction_size=len(gens))
        assert rep.values["equality"] == "true", (p, gens)
        assert rep.status("n_stability") == PASS, (p, gens)
        assert rep.status("inclusion_1") == PASS and rep.status("inclusion_2") == PASS
    lk = generic_link(Ideal(ring(3, 2), ["x", "y"]))
    rep = theorem33_compare(lk, e_max=1)
    assert rep.status("inclusion_1") == PASS


# -- 6: exponent splitting -----------------------------------------------------


@criterion(6, "exponent splitting", 60)
def test_criterion_6_splitting():
    checked = 0
    for q in (2, 3, 4, 5, 8, 9):
        for c, r in ((1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 4)):
            for beta in compositions(c * (q - 1), r):
                assert decomposition_exists(beta, c, q - 1), (beta, c, q)
                alphas = split_exponents(list(beta), c, q)
                assert len(alphas) == c
                for row in alphas:
                    assert len(row) == r and min(row) >= 0
                    assert sum(1 for a in row if a) <= 2
                    assert sum(row) == q - 1
                assert tuple(map(sum, zip(*alphas))) == beta
                checked += 1
    assert checked > 0


# -- 7: generator extension ----------------------------------------------------


@criterion(7, "generator-extension automorphism", 120)
def test_criterion_7_extension():
    lk = generic_link(Ideal(ring(2, 2), ["x", "y"]))
    for a in (["1", "0"], ["1", "1"]):  # f_3 = x and f_3 = x + y
        rep = generator_extension_check(lk, a)
        assert rep.status("automorphism_image") == PASS
        assert rep.status("nu_invariance") == PASS
        assert rep.values["nu_J1"] == rep.values["nu_J2"]


# -- 8: fpt inequality evidence ------------------------------------------------


@criterion(8, "fpt inequality evidence", 300)
def test_criterion_8_fpt_evidence():
    rep = fpt_inequality_check(Ideal(ring(2, 2), ["x", "y"]), 2, e_max=2)
    assert rep.values["nu_g"] == "1:2,2:6"
    assert rep.values["fpt_g_lower"] == "3/2"
    assert rep.values["fpt_R_lower"] == "3/2"
    assert rep.status("certified_bounds") != FAIL
    assert rep.status("nu_J_dominates_nu_g") != FAIL


# -- 9: determinism ------------------------------------------------------------


@criterion(9, "CLI determinism", None)
def test_criterion_9_determinism():
    old = get_spair_mode()
    try:
        for line in (GOLDEN / "cases.txt").read_text().splitlines():
            name, code, args = line.split("|", 2)
            expected = (GOLDEN / f"{name}.out").read_text()
            for mode in ("sequential", "parallel"):
                for _ in range(3):
                    out, err = io.StringIO(), io.StringIO()
                    got = run(shlex.split(args) + ["--spair-mode", mode], out, err)
                    assert got == int(code), name
                    assert out.getvalue() + err.getvalue() == expected, (name, mode)
    finally:
        set_spair_mode(old)


ALL = [
    test_criterion_1_root_calculus,
    test_criterion_2_ein_suite,
    test_criterion_3_nu_fpt,
    test_criterion_4_generic_link,
    test_criterion_5_link_comparison,
    test_criterion_6_splitting,
    test_criterion_7_extension,
    test_criterion_8_fpt_evidence,
    test_criterion_9_determinism,
]


if __name__ == "__main__":
    for check in ALL:
        try:
            check()
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(v[1] for v in ACCEPTANCE.values()) else 1)

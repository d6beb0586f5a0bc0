"""F-singularity invariants of pairs (R, I^t) for R = F_p[x_1..x_n].

Test ideals are computed from the sum over e of the roots of I^ceil(t p^e),
truncated at a caller-chosen level; truncation can only make the ideal
smaller, so any positive certificate read off a truncated sum is sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .frobenius import FrobeniusLevel, pe_root
from .groebner import Ideal, dimension_height, ideal_equal, ideal_power
from .report import EVIDENCE, FAIL, PASS, Check, Report, inclusion_check
from .ring import RationalParam

DEFAULT_E_MAX = 2


# ---------------------------------------------------------------------------
# nu-invariants and F-pure threshold bounds
# ---------------------------------------------------------------------------


def rational_point(m):
    """Return (a_1..a_n) when m = (x_1 - a_1, ..., x_n - a_n), else raise."""
    ring = m.ring
    gb = m.groebner()
    point = [None] * ring.nvars
    for g in gb:
        lm, _ = g.leading_term()
        linear = sum(lm) == 1 and len(g) <= 2 and all(sum(e) == 0 or e == lm for e in g.terms)
        if not linear:
            break
        point[lm.index(1)] = (-g.constant_coefficient()) % ring.p
    if len(gb) != ring.nvars or None in point:
        raise PreconditionError(f"m = {m} is not the maximal ideal of a rational point")
    return tuple(point)


def _translate(f, point):
    if not any(point):
        return f
    ring = f.ring
    return f.substitute({v: ring.var(v) + a for v, a in zip(ring.vars, point) if a})


def _truncated_mul(a, b, q, p):
    """Product of two term dictionaries modulo (x_1^q, ..., x_n^q)."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if max(e) < q:
                out[e] = out.get(e, 0) + ca * cb
    return {e: c % p for e, c in out.items() if c % p}


def _normalized(terms, p):
    lead = min(terms)
    inv = pow(terms[lead], -1, p)
    return frozenset((e, c * inv % p) for e, c in terms.items())


def nu(I, m=None, e=1):
    """nu_I(q) = max{r : I^r not contained in m^[q]}, q = p^e.

    Products of r generators are enumerated as multisets and reduced modulo
    m^[q] (after moving m to the origin); a product that vanishes there stays
    zero after further multiplication, so it is pruned.  The sweep ends at the
    first r with no surviving product.
    """
    ring = I.ring
    if I.is_zero():
        raise PreconditionError("nu is undefined for the zero ideal")
    q = FrobeniusLevel(ring.p, e).q
    point = (0,) * ring.nvars if m is None else rational_point(m)
    gens = []
    for f in I.generators:
        g = _translate(f, point)
        if g.constant_coefficient():
            where = "m" if m is None else str(m)
            raise PreconditionError(f"I is not contained in {where}: generator {f} does not vanish there")
        gens.append(g.terms)
    p = ring.p
    level = {frozenset({((0,) * ring.nvars, 1)}): 0}
    r = 0
    while True:
        nxt = {}
        for prod, start in level.items():
            prod = dict(prod)
            for j in range(start, len(gens)):
                t = _truncated_mul(prod, gens[j], q, p)
                if t:
                    k = _normalized(t, p)
                    if k not in nxt or nxt[k] > j:
                        nxt[k] = j
        if not nxt:
            return r
        level = nxt
        r += 1


@dataclass
class FptBounds:
    nu_values: list
    lower: RationalParam
    upper: RationalParam | None
    principal: bool

    @property
    def exact(self):
        return self.upper is not None and self.lower == self.upper

    def interval(self):
        if self.upper is None:
            return f"[{self.lower}, oo)"
        return f"({self.lower}, {self.upper}]"


def fpt_bounds(I, e_max, m=None):
    """Certified bounds on fpt(I) from nu_I(p^e), e = 1..e_max.

    nu/q is always a lower bound; for principal I, (nu + 1)/q is an upper
    bound, and the best one comes from the largest level.
    """
    if e_max < 1:
        raise PreconditionError("e_max must be at least 1")
    if I.is_unit():
        raise PreconditionError("fpt of the unit ideal is undefined")
    p = I.ring.p
    table = [(e, nu(I, m, e)) for e in range(1, e_max + 1)]
    lower = max(Fraction(v, p**e) for e, v in table)
    principal = len(I.groebner()) == 1
    upper = min(Fraction(v + 1, p**e) for e, v in table) if principal else None
    return FptBounds(
        table, RationalParam(lower), None if upper is None else RationalParam(upper), principal
    )


# ---------------------------------------------------------------------------
# test ideals
# ---------------------------------------------------------------------------


@dataclass
class TestIdealResult:
    ideal: Ideal
    t: RationalParam
    e_max: int
    per_level: list
    stabilized: bool

    __test__ = False  # not a pytest class


def _powers(I):
    cache = {}

    def power(n):
        if n not in cache:
            cache[n] = ideal_power(I, n)
        return cache[n]

    return power


def test_ideal(I, t, e_max=DEFAULT_E_MAX, _power=None):
    """Truncated tau(I^t) = sum_{e=0}^{e_max} (I^ceil(t p^e))^[1/p^e]."""
    if I.is_zero():
        raise PreconditionError("test ideals need a nonzero ideal")
    if e_max < 0:
        raise PreconditionError("e_max must be nonnegative")
    t = RationalParam.coerce(t)
    power = _power or _powers(I)
    p = I.ring.p
    per_level = []
    partial = Ideal(I.ring)
    previous = None
    for e in range(e_max + 1):
        contribution = pe_root(power(t.ceil_mul(p**e)), e).reduced()
        per_level.append((e, contribution))
        previous = partial
        partial = (partial + contribution).reduced()
    stabilized = e_max >= 1 and ideal_equal(previous, partial)
    return TestIdealResult(partial, t, e_max, per_level, stabilized)


test_ideal.__test__ = False


def is_f_pure_level(I, t, e):
    """Whether some d in I^floor(t(q-1)) has F^e_*(d) R -> F^e_*R split."""
    if I.is_zero():
        raise PreconditionError("F-purity of pairs needs a nonzero ideal")
    t = RationalParam.coerce(t)
    q = FrobeniusLevel(I.ring.p, e).q
    root = pe_root(ideal_power(I, t.floor_mul(q - 1)), e)
    if any(g.is_constant() for g in root.generators):
        return True
    return root.is_unit()


YES = "yes"
INCONCLUSIVE = "inconclusive"


def is_strongly_f_regular_level(I, t, e_max=DEFAULT_E_MAX):
    """'yes' when the truncated tau(I^t) is already R; never answers 'no'."""
    return YES if test_ideal(I, t, e_max).ideal.is_unit() else INCONCLUSIVE


# ---------------------------------------------------------------------------
# Ein's lemma
# ---------------------------------------------------------------------------


def verify_ein(I, c=None, t=None, e_max=DEFAULT_E_MAX):
    """Check tau(I^c) ⊆ I, I tau(I^(t-1)) ⊆ tau(I^t) level by level, and the
    conclusion tau(I^(c-1)) = R  =>  tau(I^c) = I at truncation e_max.

    The caller asserts that I is unmixed; c defaults to its height.
    """
    ring = I.ring
    if c is None:
        c = dimension_height(I)[1]
    if c < 1:
        raise PreconditionError("Ein's lemma needs a proper ideal of positive height")
    t = RationalParam(c) if t is None else RationalParam.coerce(t)
    if t < 1:
        raise PreconditionError("the inclusion I tau(I^(t-1)) ⊆ tau(I^t) needs t >= 1")
    p = ring.p
    power = _powers(I)
    report = Report("ein", values={"height": str(c), "t": str(t), "e_max": str(e_max)})

    tau_c = test_ideal(I, c, e_max, power)
    report.values["tau_c"] = str(tau_c.ideal)
    report.values["tau_c_stabilized"] = "true" if tau_c.stabilized else "false"
    report.checks.append(inclusion_check("tau_c_in_I", tau_c.ideal, I, e_max))

    tau_t = tau_c if t == c else test_ideal(I, t, e_max, power)
    t_minus = t - 1
    failures = []
    for a in tau_t.ideal.groebner():
        for e in range(e_max + 1):
            q = p**e
            left_root = pe_root(power(t_minus.ceil_mul(q - 1)) * a, e)
            right = pe_root(power(t.ceil_mul(q - 1)) * a, e)
            gb = right.groebner()
            for f in I.generators:
                for h in left_root.generators:
                    if gb.reduce(f * h):
                        failures.append(f"e={e}: {f}*({h}) for a={a}")
                        break
    if failures:
        report.checks.append(Check("product_inclusion_levelwise", FAIL, "", failures[:5], e_max))
    else:
        report.checks.append(Check("product_inclusion_levelwise", PASS, "", (), e_max))

    tau_prev = test_ideal(I, c - 1, e_max, power)
    report.values["tau_c_minus_1"] = str(tau_prev.ideal)
    if tau_prev.ideal.is_unit():
        if ideal_equal(tau_c.ideal, I):
            report.checks.append(Check("conclusion", PASS, "tau(I^(c-1)) = R and tau(I^c) = I", (), e_max))
        else:
            report.checks.append(
                Check("conclusion", FAIL, "tau(I^(c-1)) = R but tau(I^c) != I", (tau_c.ideal,), e_max)
            )
    else:
        report.checks.append(
            Check("conclusion", EVIDENCE, "hypothesis tau(I^(c-1)) = R not certified at this truncation", (), e_max)
        )
    return report

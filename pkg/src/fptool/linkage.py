"""Generic links J = (g_1..g_c) : IS and checks of their F-singularities.

For I = (f_1..f_r) of height c, S = R[u_i_j] (1 <= i <= c, 1 <= j <= r) and
g_i = sum_j u_i_j f_j.  The canonical module of S/J is I(S/J) and its
Frobenius trace is h -> Tr_S(g^(q-1) h) with g = g_1 ... g_c, which is what
the parameter test submodule computations below iterate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .frobenius import pe_root
from .fsing import DEFAULT_E_MAX, nu, test_ideal
from .groebner import (
    Ideal,
    colon,
    dimension_height,
    ideal_equal,
    ideal_power,
    intersect,
)
from .report import EVIDENCE, FAIL, PASS, Check, Report, inclusion_check
from .ring import RingContext


def u_name(i, j):
    return f"u_{i}_{j}"


@dataclass
class GenericLink:
    base: RingContext
    ext: RingContext
    f: tuple
    c: int
    g: tuple
    J: Ideal

    @property
    def r(self):
        return len(self.f)

    def IS(self):
        return Ideal(self.ext, [fj.map_to(self.ext) for fj in self.f])

    def g_ideal(self):
        return Ideal(self.ext, self.g)

    def base_ideal(self):
        return Ideal(self.base, self.f)


def link_ring(base, c, r):
    """S = base[u_i_j]; the u-block comes first so base variables are last."""
    names = [u_name(i, j) for i in range(1, c + 1) for j in range(1, r + 1)]
    clash = set(names) & set(base.vars)
    if clash:
        raise PreconditionError(f"u-variable names clash with base variables: {', '.join(sorted(clash))}")
    return RingContext(base.field, tuple(names) + base.vars, base.order)


def generic_link(I, c=None):
    """First generic link of I with respect to its generator list.

    The caller asserts I is unmixed; c defaults to n - dim(R/I).
    """
    if I.is_zero():
        raise PreconditionError("generic links need a nonzero ideal")
    if c is None:
        c = dimension_height(I)[1]
    if c < 1:
        raise PreconditionError("generic links need an ideal of positive height")
    f = I.generators
    S = link_ring(I.ring, c, len(f))
    fs = [fj.map_to(S) for fj in f]
    g = []
    for i in range(1, c + 1):
        gi = S.zero()
        for j, fj in enumerate(fs, start=1):
            gi = gi + S.var(u_name(i, j)) * fj
        g.append(gi)
    J = colon(Ideal(S, g), Ideal(S, fs))
    return GenericLink(I.ring, S, tuple(f), c, tuple(g), J.reduced())


def verify_geometric_link(link):
    """IS = (g) : J and IS ∩ J = (g)."""
    IS = link.IS()
    g = link.g_ideal()
    report = Report("geomcheck", values={"J": str(link.J), "c": str(link.c)})
    back = colon(g, link.J)
    report.checks.append(_equality_check("colon_back", back, IS))
    meet = intersect(IS, link.J)
    report.checks.append(_equality_check("intersection", meet, g))
    return report


def _equality_check(name, A, B, e_max=None):
    if ideal_equal(A, B):
        return Check(name, PASS, "", (), e_max)
    a_out = [h for h in A.groebner() if h not in B]
    b_out = [h for h in B.groebner() if h not in A]
    return Check(name, FAIL, "ideals differ", (a_out + b_out)[:5], e_max)


# ---------------------------------------------------------------------------
# exponent splitting
# ---------------------------------------------------------------------------


def split_exponents(beta, c, q):
    """Split beta (sum c(q-1)) into c rows with row sums q-1, column sums beta
    and at most two nonzero entries per row.  Needs c = r or c = r - 1.
    """
    beta = [int(b) for b in beta]
    r = len(beta)
    if q < 2:
        raise PreconditionError("q must be at least 2")
    if c < 1 or c not in (r, r - 1):
        raise PreconditionError(f"need c = r or c = r - 1, got c={c}, r={r}")
    if any(b < 0 for b in beta):
        raise PreconditionError("beta entries must be nonnegative")
    if sum(beta) != c * (q - 1):
        raise PreconditionError(f"sum(beta) = {sum(beta)} but c(q-1) = {c * (q - 1)}")
    return [tuple(row) for row in _split(beta, c, q - 1)]


def _split(beta, c, top):
    r = len(beta)
    if c == 1:
        return [list(beta)]
    if c == r and all(b == top for b in beta):
        return [[top if k == i else 0 for k in range(r)] for i in range(r)]
    last = max(i for i in range(r) if beta[i] < top)
    need = top - beta[last]
    j = next(k for k in range(r) if k != last and beta[k] >= need)
    row = [0] * r
    row[j] = need
    row[last] = beta[last]
    rest = [b for k, b in enumerate(beta) if k != last]
    jj = j if j < last else j - 1
    rest[jj] -= need
    rows = _split(rest, c - 1, top)
    rows = [sub[:last] + [0] + sub[last:] for sub in rows]
    return rows + [row]


def splitting_is_valid(alphas, beta, c, q):
    """Properties (1)-(3): <= 2 nonzero entries, row sums q-1, column sums beta."""
    if len(alphas) != c:
        return False
    for a in alphas:
        if len(a) != len(beta) or any(x < 0 for x in a):
            return False
        if sum(1 for x in a if x) > 2 or sum(a) != q - 1:
            return False
    return all(sum(a[j] for a in alphas) == beta[j] for j in range(len(beta)))


# ---------------------------------------------------------------------------
# parameter test submodule
# ---------------------------------------------------------------------------


def default_N(link, e_max):
    """n(q_max - 1) + 1 with q_max = p^e_max (at least 1)."""
    q_max = link.base.p ** max(e_max, 1)
    return link.base.nvars * (q_max - 1) + 1


def _g_product(link):
    prod = link.ext.one()
    for gi in link.g:
        prod = prod * gi
    return prod


def _check_k(link, k):
    if not 1 <= k <= min(link.c, link.r):
        raise PreconditionError(f"k must satisfy 1 <= k <= {min(link.c, link.r)}, got {k}")


def param_test_submodule(link, k=1, N=None, e_max=DEFAULT_E_MAX):
    """sum_{e=0}^{e_max} (g^(q-1) f_k^N IS)^[1/q] as an ideal of S.

    Represents a truncation of tau(omega_{S/J}) as (result + J)/J.
    """
    _check_k(link, k)
    if N is None:
        N = default_N(link, e_max)
    S = link.ext
    fk_N = link.f[k - 1].map_to(S) ** N
    gprod = _g_product(link)
    IS = link.IS()
    total = Ideal(S)
    for e in range(e_max + 1):
        q = S.p**e
        factor = gprod ** (q - 1) * fk_N
        total = total + pe_root(IS * factor, e)
    return total.reduced()


def param_test_closure(link, k=1, N=None, max_rounds=64):
    """The full sum over all e >= 0 plus J, as the smallest ideal containing
    f_k^N IS + J that is stable under h -> (g^(p-1) h)^[1/p].

    The map preserves J: g^(p-1) (g_1..g_c) lies in (g_1..g_c)^[p], so
    IS (g^(p-1) J)^[1/p] lies in (g_1..g_c).  Hence after i rounds the ideal
    equals the truncated sum at e_max = i plus J, and once two rounds agree
    the chain is constant, so the result is exact for this N.
    Returns (ideal, rounds).
    """
    _check_k(link, k)
    if N is None:
        N = default_N(link, DEFAULT_E_MAX)
    S = link.ext
    fk_N = link.f[k - 1].map_to(S) ** N
    gp = _g_product(link) ** (S.p - 1)
    M = (link.IS() * fk_N + link.J).reduced()
    for rounds in range(max_rounds):
        nxt = (M + pe_root(M * gp, 1)).reduced()
        if ideal_equal(nxt, M):
            return M, rounds
        M = nxt
    raise PreconditionError(f"trace closure did not stabilize within {max_rounds} rounds")


def _pair_test_with_element(link, k, N, e_max, generators=None):
    """sum_{e<=e_max} (I^(c(q-1)) f_k^N)^[1/q] in R, extended to S."""
    R = link.base
    gens = link.f if generators is None else generators
    I = Ideal(R, gens)
    fk_N = link.f[k - 1] ** N
    total = Ideal(R)
    for e in range(e_max + 1):
        q = R.p**e
        total = total + pe_root(ideal_power(I, link.c * (q - 1)) * fk_N, e)
    return total.reduced().map_to(link.ext)


def theorem33_compare(link, e_max=DEFAULT_E_MAX, N=None, k=1, reduction_size=None):
    """Compare tau(omega_{S/J}) with tau(I^c)(S/J).

    Checks, in order:
      inclusion_1_levelwise  truncated LHS(N) ⊆ truncated (I^{c(q-1)} f_k^N)-sum · S
      inclusion_2_levelwise  truncated (I^{c(q-1)} f_k^{N+1})-sum · S ⊆ truncated LHS(N)
                             (a theorem when r <= c + 1)
      n_stability            trace closures (which contain J) for N and 2N agree
      k_independence         trace closure agrees for every k <= min(c, r)
      inclusion_1            closure ⊆ tau_trunc(I^c) S + J
      inclusion_2            tau_trunc(I^c) S + J ⊆ closure
                             (a theorem when the declared reduction has <= c + 1 generators)
    """
    S = link.ext
    c, r = link.c, link.r
    if N is None:
        N = default_N(link, e_max)
    J = link.J
    report = Report(
        "thm33",
        values={"c": str(c), "r": str(r), "N": str(N), "k": str(k), "e_max": str(e_max)},
    )

    lhs_trunc = param_test_submodule(link, k, N, e_max)
    a_N = _pair_test_with_element(link, k, N, e_max)
    report.checks.append(inclusion_check("inclusion_1_levelwise", lhs_trunc, a_N, e_max))
    a_N1 = _pair_test_with_element(link, k, N + 1, e_max, link.f[: c + 1])
    report.checks.append(
        inclusion_check(
            "inclusion_2_levelwise",
            a_N1,
            lhs_trunc,
            e_max,
            on_failure=FAIL if r <= c + 1 else EVIDENCE,
            detail="" if r <= c + 1 else "generator list longer than c + 1",
        )
    )

    lhs, rounds = param_test_closure(link, k, N)
    lhs2, _ = param_test_closure(link, k, 2 * N)
    stable = ideal_equal(lhs, lhs2)
    report.values["closure_rounds"] = str(rounds)
    report.values["lhs"] = str(lhs)
    if stable:
        report.checks.append(Check("n_stability", PASS, f"N={N} and N={2 * N} agree"))
    else:
        report.checks.append(
            Check("n_stability", EVIDENCE, f"N={N} and N={2 * N} differ: rerun with larger N", (lhs2,))
        )

    disagree = []
    for kk in range(1, min(c, r) + 1):
        if kk == k:
            continue
        other, _ = param_test_closure(link, kk, N)
        if not ideal_equal(other, lhs):
            disagree.append(f"k={kk}: {other}")
    if disagree:
        status = FAIL if stable else EVIDENCE
        report.checks.append(Check("k_independence", status, "", disagree))
    else:
        report.checks.append(Check("k_independence", PASS))

    tau = test_ideal(link.base_ideal(), c, e_max)
    rhs = (tau.ideal.map_to(S) + J).reduced()
    report.values["tau_c"] = str(tau.ideal)
    report.values["rhs"] = str(rhs)
    rhs_exact = ideal_equal(tau.ideal, link.base_ideal())
    report.values["rhs_certified_exact"] = "true" if rhs_exact else "false"

    strict = stable and rhs_exact
    report.checks.append(
        inclusion_check(
            "inclusion_1",
            lhs,
            rhs,
            e_max,
            on_failure=FAIL if strict else EVIDENCE,
            detail="" if strict else "rerun with larger e_max / N if this does not pass",
        )
    )
    declared_ok = reduction_size is not None and reduction_size <= c + 1
    report.checks.append(
        inclusion_check(
            "inclusion_2",
            rhs,
            lhs,
            e_max,
            on_failure=FAIL if declared_ok else EVIDENCE,
            detail="" if declared_ok else "no reduction with <= c+1 generators declared",
        )
    )
    both = report.status("inclusion_1") == PASS and report.status("inclusion_2") == PASS
    report.values["equality"] = "true" if both else "false"
    return report


def f_rational_criterion(I, e_max=DEFAULT_E_MAX, c=None):
    """tau(I^c) = I at truncation e_max.  Cohen-Macaulayness of S/J is not checked.

    The truncated sum lies inside tau(I^c) ⊆ I, so equality at any truncation
    certifies the criterion; inequality is only evidence.
    """
    if c is None:
        c = dimension_height(I)[1]
    tau = test_ideal(I, c, e_max)
    report = Report(
        "frational",
        values={
            "height": str(c),
            "tau_c": str(tau.ideal),
            "stabilized": "true" if tau.stabilized else "false",
            "cohen_macaulay": "not checked",
        },
    )
    if ideal_equal(tau.ideal, I):
        report.values["criterion"] = "satisfied"
        report.checks.append(Check("tau_c_equals_I", PASS, "", (), e_max))
    else:
        report.values["criterion"] = "not certified"
        missing = [f for f in I.groebner() if f not in tau.ideal]
        report.checks.append(
            Check("tau_c_equals_I", EVIDENCE, "truncated tau(I^c) is smaller than I", missing[:5], e_max)
        )
    return report


# ---------------------------------------------------------------------------
# independence of the generating set
# ---------------------------------------------------------------------------


def generator_extension_check(link, a):
    """Add f_{r+1} = sum a_j f_j and compare the two links through the
    automorphism u_i_j -> u_i_j + u_i_{r+1} a_j of S_2."""
    R = link.base
    a = [R.parse(x) if isinstance(x, str) else x for x in a]
    if len(a) != link.r:
        raise PreconditionError(f"need {link.r} coefficients, got {len(a)}")
    f_new = R.zero()
    for aj, fj in zip(a, link.f):
        f_new = f_new + aj * fj
    if not f_new:
        raise PreconditionError("the new generator sum a_j f_j must be nonzero")
    link2 = generic_link(Ideal(R, list(link.f) + [f_new]), link.c)
    S2 = link2.ext
    r = link.r
    mapping = {}
    for i in range(1, link.c + 1):
        extra = S2.var(u_name(i, r + 1))
        for j in range(1, r + 1):
            mapping[u_name(i, j)] = S2.var(u_name(i, j)) + extra * a[j - 1].map_to(S2)
    image = Ideal(S2, [h.map_to(S2).substitute(mapping) for h in link.J.generators])
    report = Report("extend", values={"f_new": str(f_new), "J1": str(link.J), "J2": str(link2.J)})
    report.checks.append(_equality_check("automorphism_image", image, link2.J))
    nu1 = nu(link.J, e=1)
    nu2 = nu(link2.J, e=1)
    report.values["nu_J1"] = str(nu1)
    report.values["nu_J2"] = str(nu2)
    if nu1 == nu2:
        report.checks.append(Check("nu_invariance", PASS, f"nu(p) = {nu1}"))
    else:
        report.checks.append(Check("nu_invariance", FAIL, "", (f"nu_J1={nu1}", f"nu_J2={nu2}")))
    return report


# ---------------------------------------------------------------------------
# F-pure threshold evidence
# ---------------------------------------------------------------------------


def _nu_table(I, e_max):
    return [(e, nu(I, e=e)) for e in range(1, e_max + 1)]


def fpt_inequality_check(I, reduction_size, e_max=DEFAULT_E_MAX, link=None):
    """Certified-bound evidence for fpt_S(g) >= (c/r) fpt_R(I) and fpt_S(J) >= fpt_S(g)."""
    if link is None:
        link = generic_link(I)
    c = link.c
    r = reduction_size
    if r < c:
        raise PreconditionError(f"a reduction needs at least c = {c} generators, got {r}")
    p = I.ring.p
    ratio = Fraction(c, r)
    g = link.g_ideal()
    tab_R = _nu_table(I, e_max)
    tab_g = _nu_table(g, e_max)
    tab_J = _nu_table(link.J, e_max)
    report = Report("fptcheck", values={"c": str(c), "r": str(r), "e_max": str(e_max)})
    for name, tab in (("nu_R", tab_R), ("nu_g", tab_g), ("nu_J", tab_J)):
        report.values[name] = ",".join(f"{e}:{v}" for e, v in tab)

    def lower(tab):
        return max(Fraction(v, p**e) for e, v in tab)

    def upper(tab, ideal):
        if len(ideal.groebner()) != 1:
            return None
        return min(Fraction(v + 1, p**e) for e, v in tab)

    low_R, up_R = lower(tab_R), upper(tab_R, I)
    low_g, up_g = lower(tab_g), upper(tab_g, g)
    low_J, up_J = lower(tab_J), upper(tab_J, link.J)
    report.values["fpt_R_lower"] = str(low_R)
    report.values["fpt_R_upper"] = "none" if up_R is None else str(up_R)
    report.values["fpt_g_lower"] = str(low_g)
    report.values["fpt_g_upper"] = "none" if up_g is None else str(up_g)
    report.values["fpt_J_lower"] = str(low_J)
    report.values["fpt_J_upper"] = "none" if up_J is None else str(up_J)

    monotone = []
    for name, tab in (("R", tab_R), ("g", tab_g), ("J", tab_J)):
        for (e1, v1), (e2, v2) in zip(tab, tab[1:]):
            if v2 < p * v1:
                monotone.append(f"{name}: nu(p^{e2})={v2} < p*nu(p^{e1})={p * v1}")
    report.checks.append(
        Check("nu_monotone", FAIL if monotone else PASS, "", monotone)
    )

    below = [f"q={p**e}: nu_J={vj} < nu_g={vg}" for (e, vg), (_, vj) in zip(tab_g, tab_J) if vj < vg]
    report.checks.append(Check("nu_J_dominates_nu_g", FAIL if below else PASS, "", below))

    violations = []
    target = ratio * low_R
    for name, up in (("g", up_g), ("J", up_J)):
        if up is not None and up < target:
            violations.append(f"fpt_{name} <= {up} < (c/r) * {low_R}")
    if violations:
        report.checks.append(Check("certified_bounds", FAIL, "", violations))
    else:
        detail = "no certified upper bound on the S side" if up_g is None and up_J is None else ""
        report.checks.append(Check("certified_bounds", PASS, detail))

    bound_R = up_R if up_R is not None else low_R
    evidence = ", ".join(
        f"q={p**e}: {Fraction(v, p**e)} vs {ratio * bound_R}" for e, v in tab_g
    )
    report.checks.append(Check("per_level", EVIDENCE, "nu_g(q)/q vs (c/r)*fpt_R bound: " + evidence))
    return report

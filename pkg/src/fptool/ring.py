"""Prime fields, monomial orders and sparse polynomials over F_p.

Polynomials are immutable dictionaries ``{exponent tuple: coefficient}`` with
coefficients kept as canonical residues in ``[0, p)``.  All arithmetic is
exact.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from operator import add

from .errors import ParseError, PreconditionError, RingMismatchError

MAX_CHARACTERISTIC = 2**31 - 1


def is_prime(n):
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p):
        if isinstance(p, bool) or not isinstance(p, int):
            raise PreconditionError(f"characteristic must be an integer, got {p!r}")
        if not 2 <= p <= MAX_CHARACTERISTIC or not is_prime(p):
            raise PreconditionError(f"characteristic must be prime (2 <= p <= 2^31-1), got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __call__(self, a):
        return a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        # pow(a, -1, p) runs the extended Euclidean algorithm
        return pow(a, -1, self.p)


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------


class MonomialOrder:
    """A monomial order given by a sort key: ``key(a) > key(b)`` iff ``a > b``."""

    name = "abstract"

    def key(self, exp):
        raise NotImplementedError

    def __eq__(self, other):
        return type(other) is type(self) and other.params() == self.params()

    def __hash__(self):
        return hash((type(self).__name__, self.params()))

    def params(self):
        return ()

    def __repr__(self):
        return self.name


class Grevlex(MonomialOrder):
    name = "grevlex"

    def __init__(self):
        self.key = lru_cache(maxsize=None)(self._key)

    @staticmethod
    def _key(exp):
        return (sum(exp),) + tuple(-a for a in reversed(exp))


class Lex(MonomialOrder):
    name = "lex"

    def __init__(self):
        self.key = lambda exp: exp


class Elimination(MonomialOrder):
    """Lex on the first ``k`` variables, then grevlex on the rest.

    Any monomial involving the first block is larger than every monomial
    free of it, so intersecting a Groebner basis with the subring of the
    remaining variables yields a Groebner basis of the elimination ideal.
    """

    def __init__(self, k):
        self.k = k
        self.name = f"elim{k}"
        self.key = lru_cache(maxsize=None)(self._key)

    def params(self):
        return (self.k,)

    def _key(self, exp):
        head, tail = exp[: self.k], exp[self.k :]
        return head + (sum(tail),) + tuple(-a for a in reversed(tail))


_ORDERS = {"grevlex": Grevlex, "lex": Lex}


def make_order(order):
    if isinstance(order, MonomialOrder):
        return order
    try:
        return _ORDERS[order]()
    except KeyError:
        raise PreconditionError(f"unknown monomial order {order!r} (use grevlex or lex)") from None


def compare_monomials(a, b, order="grevlex"):
    """Return -1, 0 or 1 as ``a`` is smaller, equal or larger than ``b``."""
    if len(a) != len(b):
        raise PreconditionError(f"exponent vectors of different lengths: {len(a)} vs {len(b)}")
    order = make_order(order)
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

_VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class RingContext:
    """F_p[vars] with a fixed monomial order; variable precedence = list order."""

    __slots__ = ("field", "vars", "order", "_index", "_hash")

    def __init__(self, p, vars, order="grevlex"):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        vars = tuple(vars)
        for v in vars:
            if not isinstance(v, str) or not _VAR_RE.match(v):
                raise PreconditionError(f"invalid variable name {v!r}")
        if len(set(vars)) != len(vars):
            raise PreconditionError(f"variable names must be distinct: {', '.join(vars)}")
        self.vars = vars
        self.order = make_order(order)
        self._index = {v: i for i, v in enumerate(vars)}
        self._hash = hash((self.field.p, self.vars, self.order))

    @property
    def p(self):
        return self.field.p

    @property
    def nvars(self):
        return len(self.vars)

    def __eq__(self, other):
        return (
            isinstance(other, RingContext)
            and self.field == other.field
            and self.vars == other.vars
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"F_{self.p}[{', '.join(self.vars)}] ({self.order.name})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise PreconditionError(f"unknown variable {name!r}") from None

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name):
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return Polynomial._raw(self, {tuple(exp): 1})

    def gens(self):
        return [self.var(v) for v in self.vars]

    def monomial(self, exp, coef=1):
        exp = tuple(exp)
        if len(exp) != self.nvars:
            raise PreconditionError("exponent vector length does not match ring")
        return Polynomial(self, {exp: coef})

    def parse(self, text):
        return parse_poly(text, self)

    def with_order(self, order):
        return RingContext(self.field, self.vars, order)

    def with_vars(self, vars, order=None):
        return RingContext(self.field, vars, self.order if order is None else order)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _add_exp(a, b):
    return tuple(map(add, a, b))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to residues."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        p = ring.p
        clean = {}
        for exp, c in terms.items():
            c %= p
            if c:
                exp = tuple(exp)
                if len(exp) != ring.nvars:
                    raise PreconditionError("exponent vector length does not match ring")
                if any(a < 0 for a in exp):
                    raise PreconditionError(f"negative exponent in {exp}")
                clean[exp] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # caller guarantees canonical residues, no zeros
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self):
        return len(self.terms) == 1

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def sorted_terms(self):
        """Terms in descending monomial order."""
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise PreconditionError("zero polynomial has no leading term")
        key = self.ring.order.key
        exp = max(self.terms, key=key)
        return exp, self.terms[exp]

    def leading_monomial(self):
        return self.leading_term()[0]

    def monic(self):
        if not self.terms:
            return self
        _, c = self.leading_term()
        if c == 1:
            return self
        return self.scale(self.ring.field.inv(c))

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial._raw(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: v * c % p for e, v in self.terms.items()})

    def mul_term(self, exp, c):
        """Multiply by the single term ``c * x^exp``."""
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial._raw(
            self.ring, {_add_exp(e, exp): v * c % p for e, v in self.terms.items()}
        )

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        p = self.ring.p
        out = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        out = {e: c % p for e, c in out.items() if c % p}
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PreconditionError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.const(other)
        return isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- ring changes --------------------------------------------------------

    def map_to(self, ring):
        """Reinterpret in ``ring``, matching variables by name."""
        if ring == self.ring:
            return self
        if ring.p != self.ring.p:
            raise RingMismatchError("cannot move a polynomial between characteristics")
        pos = []
        for i, v in enumerate(self.ring.vars):
            j = ring._index.get(v)
            pos.append(j)
        n = ring.nvars
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, a in enumerate(e):
                if a:
                    j = pos[i]
                    if j is None:
                        raise RingMismatchError(
                            f"variable {self.ring.vars[i]!r} does not exist in {ring}"
                        )
                    new[j] = a
            out[tuple(new)] = c
        return Polynomial._raw(ring, out)

    def substitute(self, mapping):
        """Replace variables by polynomials of the same ring (``{name: poly}``)."""
        ring = self.ring
        images = []
        for v in ring.vars:
            img = mapping.get(v)
            if img is None:
                img = ring.var(v)
            elif img.ring != ring:
                raise RingMismatchError("substitution image lives in another ring")
            images.append(img)
        cache = {}

        def power(i, a):
            k = (i, a)
            if k not in cache:
                cache[k] = images[i] ** a
            return cache[k]

        result = ring.zero()
        for e, c in self.terms.items():
            t = ring.const(c)
            for i, a in enumerate(e):
                if a:
                    t = t * power(i, a)
            result = result + t
        return result

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.ring.vars
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


def frobenius_power(f, e):
    """Return ``f^(p^e)``: over F_p this just scales every exponent by p^e."""
    if not isinstance(e, int) or e < 0:
        raise PreconditionError("Frobenius level e must be a nonnegative integer")
    q = f.ring.p**e
    return Polynomial._raw(f.ring, {tuple(a * q for a in exp): c for exp, c in f.terms.items()})


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^])|(?P<bad>\S))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", start, text)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    return tokens


def parse_poly(text, ring):
    """Parse ``text`` (sums of terms like ``3*x^2*y``) into a polynomial of ``ring``."""
    tokens = _tokenize(text)
    i = 0
    end = len(text)

    def peek():
        return tokens[i] if i < len(tokens) else (None, None, end)

    def take():
        nonlocal i
        tok = peek()
        i += 1
        return tok

    def parse_factor(exp):
        kind, val, pos = take()
        if kind != "name":
            raise ParseError("expected a variable", pos, text)
        if val not in ring._index:
            raise ParseError(f"unknown variable {val!r}", pos, text)
        power = 1
        if peek()[1] == "^":
            take()
            kind2, val2, pos2 = take()
            if val2 == "-":
                raise ParseError("negative exponent", pos2, text)
            if kind2 != "num":
                raise ParseError("expected an exponent after '^'", pos2, text)
            power = int(val2)
        exp[ring._index[val]] += power

    def parse_term():
        exp = [0] * ring.nvars
        coef = 1
        kind, val, pos = peek()
        if kind == "num":
            take()
            coef = int(val)
            if peek()[1] == "*":
                take()
                parse_factor(exp)
            elif peek()[0] == "name":
                parse_factor(exp)
            else:
                return tuple(exp), coef
        elif kind == "name":
            parse_factor(exp)
        else:
            raise ParseError("expected a term", pos, text)
        while peek()[1] == "*":
            take()
            parse_factor(exp)
        return tuple(exp), coef

    if not tokens:
        raise ParseError("empty polynomial", 0, text)
    terms = {}
    sign = 1
    if peek()[1] in ("+", "-"):
        sign = -1 if take()[1] == "-" else 1
    while True:
        exp, coef = parse_term()
        terms[exp] = terms.get(exp, 0) + sign * coef
        kind, val, pos = peek()
        if kind is None:
            break
        if val not in ("+", "-"):
            raise ParseError(f"unexpected token {val!r}", pos, text)
        take()
        sign = -1 if val == "-" else 1
    return Polynomial(ring, terms)


# ---------------------------------------------------------------------------
# rational exponents
# ---------------------------------------------------------------------------


class RationalParam:
    """A nonnegative rational ``numerator/denominator`` in lowest terms."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        if isinstance(numerator, Fraction) and denominator == 1:
            numerator, denominator = numerator.numerator, numerator.denominator
        if not isinstance(numerator, int) or not isinstance(denominator, int):
            raise PreconditionError("rational parameter needs integer numerator/denominator")
        if denominator <= 0:
            raise PreconditionError("denominator must be positive")
        if numerator < 0:
            raise PreconditionError("parameter t must be nonnegative")
        g = math.gcd(numerator, denominator)
        self.numerator = numerator // g
        self.denominator = denominator // g

    @classmethod
    def parse(cls, text):
        text = str(text).strip()
        m = re.fullmatch(r"(\d+)\s*(?:/\s*(\d+))?", text)
        if m is None:
            raise ParseError(f"expected a nonnegative rational 'a/b', got {text!r}", 0, text)
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError("zero denominator", text.index("/") + 1, text)
        return cls(int(m.group(1)), den)

    @classmethod
    def coerce(cls, t):
        if isinstance(t, RationalParam):
            return t
        if isinstance(t, int):
            return cls(t)
        if isinstance(t, Fraction):
            return cls(t.numerator, t.denominator)
        return cls.parse(t)

    def as_fraction(self):
        return Fraction(self.numerator, self.denominator)

    def ceil_mul(self, m):
        """Exact ``ceil(t * m)``."""
        return -((-self.numerator * m) // self.denominator)

    def floor_mul(self, m):
        """Exact ``floor(t * m)``."""
        return (self.numerator * m) // self.denominator

    def __sub__(self, other):
        return RationalParam(self.as_fraction() - RationalParam.coerce(other).as_fraction())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return (
            isinstance(other, RationalParam)
            and (self.numerator, self.denominator) == (other.numerator, other.denominator)
        )

    def __lt__(self, other):
        return self.as_fraction() < RationalParam.coerce(other).as_fraction()

    def __le__(self, other):
        return self.as_fraction() <= RationalParam.coerce(other).as_fraction()

    def __hash__(self):
        return hash(self.as_fraction())

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self):
        return f"RationalParam({self})"

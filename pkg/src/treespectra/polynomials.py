"""Dense univariate polynomials over the rationals, Sturm-sequence root
isolation, and exact algebraic real numbers.

Everything here is exact.  Squarefree splitting (Yun), gcds, Sturm chains,
bisection isolation and interval refinement are implemented directly;
irreducible factorization of squarefree parts of degree two or more is
delegated to sympy and cached.
"""

import functools
import math
from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RationalPolynomial:
    """Immutable dense polynomial with Fraction coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolynomial is immutable")

    # ---- basics ----

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (_ONE,)

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPolynomial({list(self.coeffs)})"

    # ---- ring operations ----

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPolynomial(out)

    def __neg__(self):
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial([c * other for c in self.coeffs])
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RationalPolynomial()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.leading
        q = [_ZERO] * max(0, len(rem) - db)
        for i in range(len(rem) - db - 1, -1, -1):
            c = rem[i + db] / lead
            if c:
                q[i] = c
                for j, cb in enumerate(other.coeffs):
                    rem[i + j] -= c * cb
        return RationalPolynomial(q), RationalPolynomial(rem[:db])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = RationalPolynomial([_ONE])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divides(self, other: "RationalPolynomial") -> bool:
        if self.is_zero:
            return other.is_zero
        return (other % self).is_zero

    def monic(self) -> "RationalPolynomial":
        if self.is_zero or self.leading == 1:
            return self
        inv = 1 / self.leading
        return RationalPolynomial([c * inv for c in self.coeffs])

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(
            [k * c for k, c in enumerate(self.coeffs)][1:]
        )

    def shift_degree(self, k: int) -> "RationalPolynomial":
        """Multiply by z**k."""
        if self.is_zero:
            return self
        return RationalPolynomial((_ZERO,) * k + self.coeffs)

    # ---- evaluation ----

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    # ---- normal forms ----

    def int_primitive(self) -> tuple[int, ...]:
        """Integer coefficients after scaling by a positive rational."""
        if self.is_zero:
            return ()
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return tuple(v // g for v in ints)

    def cauchy_bound(self) -> Fraction:
        """All complex roots have modulus below this rational."""
        lead = abs(self.leading)
        top = max((abs(c) for c in self.coeffs[:-1]), default=_ZERO)
        return 1 + top / lead


def poly(coeffs) -> RationalPolynomial:
    return RationalPolynomial(coeffs)


POLY_ZERO = RationalPolynomial()
POLY_ONE = RationalPolynomial((1,))
POLY_X = RationalPolynomial((0, 1))


def poly_gcd(a: RationalPolynomial, b: RationalPolynomial) -> RationalPolynomial:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero:
        r = a % b
        a, b = b, (r if r.is_zero else r.monic())
    if a.is_zero:
        return a
    return a.monic()


def squarefree_part(p: RationalPolynomial) -> RationalPolynomial:
    if p.degree <= 0:
        return POLY_ONE
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return (p // g).monic()


def squarefree_decomposition(p: RationalPolynomial):
    """Yun's algorithm: list of (squarefree monic factor, multiplicity)."""
    p = p.monic()
    if p.degree <= 0:
        return []
    a = poly_gcd(p, p.derivative())
    if a.degree <= 0:
        return [(p, 1)]
    b = (p // a).monic()
    c = p.derivative() // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, i))
        b = (b // f).monic() if f.degree > 0 else b
        c = d // f if f.degree > 0 else d
        d = c - b.derivative()
        i += 1
    return out


# ---- irreducible factorization (sympy-backed above degree one) ----

_FACTOR_CACHE: dict[tuple, list] = {}


def irreducible_factors(p: RationalPolynomial):
    """Monic irreducible factors with multiplicities, ascending degree."""
    if p.degree <= 0:
        return []
    key = p.monic().coeffs
    cached = _FACTOR_CACHE.get(key)
    if cached is None:
        cached = _factor_uncached(RationalPolynomial(key))
        _FACTOR_CACHE[key] = cached
    return [(RationalPolynomial(c), m) for c, m in cached]


def _factor_uncached(p: RationalPolynomial):
    out = []
    for sq, mult in squarefree_decomposition(p):
        if sq.degree == 1:
            out.append((sq.monic().coeffs, mult))
            continue
        import sympy

        z = sympy.Symbol("z")
        expr = sympy.Poly(
            [sympy.Rational(c.numerator, c.denominator) for c in reversed(sq.coeffs)],
            z,
            domain="QQ",
        )
        for fac, k in expr.factor_list()[1]:
            cs = [Fraction(c.p, c.q) for c in reversed(fac.all_coeffs())]
            out.append((RationalPolynomial(cs).monic().coeffs, mult * k))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


# ---- Sturm machinery on integer coefficient tuples ----

def _int_eval_sign(coeffs: tuple[int, ...], x: Fraction) -> int:
    """Sign of an integer polynomial at a rational point, no Fractions built."""
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    for c in reversed(coeffs):
        acc = acc * p + c * qpow
        qpow *= q
    return (acc > 0) - (acc < 0)


def _int_sign_at_inf(coeffs: tuple[int, ...], positive: bool) -> int:
    lead = coeffs[-1]
    s = (lead > 0) - (lead < 0)
    if not positive and (len(coeffs) - 1) % 2 == 1:
        s = -s
    return s


_STURM_CACHE: dict[tuple, list] = {}


def sturm_chain(p: RationalPolynomial) -> list[tuple[int, ...]]:
    """Sturm chain of the squarefree part, as primitive integer tuples."""
    sf = squarefree_part(p)
    key = sf.coeffs
    chain = _STURM_CACHE.get(key)
    if chain is not None:
        return chain
    chain = [sf.int_primitive()]
    d = sf.derivative()
    if not d.is_zero:
        chain.append(d.int_primitive())
        a, b = sf, d
        while True:
            r = -(a % b)
            if r.is_zero:
                break
            chain.append(r.int_primitive())
            a, b = b, r
    _STURM_CACHE[key] = chain
    return chain


def _variations(chain, x: Fraction | None, positive_inf: bool = True) -> int:
    signs = []
    for coeffs in chain:
        if x is None:
            s = _int_sign_at_inf(coeffs, positive_inf)
        else:
            s = _int_eval_sign(coeffs, x)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(
    p: RationalPolynomial,
    lo: Fraction | None = None,
    hi: Fraction | None = None,
) -> int:
    """Number of distinct real roots in (lo, hi]; None means unbounded."""
    if p.degree <= 0:
        return 0
    chain = sturm_chain(p)
    v_lo = _variations(chain, lo, positive_inf=False)
    v_hi = _variations(chain, hi, positive_inf=True)
    return v_lo - v_hi


# ---- algebraic reals ----

_FLOAT_WIDTH = Fraction(1, 2**40)


class AlgebraicReal:
    """A real algebraic number: monic irreducible minpoly plus an isolating
    rational interval (lo, hi) that excludes both endpoints.

    The interval shrinks in place during refinement; the represented value
    never changes.
    """

    __slots__ = ("minpoly", "_lo", "_hi", "_sign_lo")

    def __init__(self, minpoly: RationalPolynomial, lo: Fraction, hi: Fraction):
        if minpoly.degree < 1 or minpoly.leading != 1:
            raise ValueError("minpoly must be monic of positive degree")
        if not lo < hi:
            raise ValueError("empty isolating interval")
        if minpoly(lo) == 0 or minpoly(hi) == 0:
            raise ValueError("isolating interval endpoints must not be roots")
        self.minpoly = minpoly
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        s = minpoly(lo)
        self._sign_lo = 1 if s > 0 else -1

    @classmethod
    def from_rational(cls, q) -> "AlgebraicReal":
        q = Fraction(q)
        return cls(POLY_X - RationalPolynomial((q,)), q - 1, q + 1)

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return -self.minpoly.coeffs[0]

    def refine_once(self) -> None:
        mid = (self._lo + self._hi) / 2
        v = self.minpoly(mid)
        if v == 0:
            # only possible for degree-one minpolys; tighten around the root
            root = self.as_rational()
            span = (self._hi - self._lo) / 4
            self._lo, self._hi = root - span, root + span
            return
        if (1 if v > 0 else -1) == self._sign_lo:
            self._lo = mid
        else:
            self._hi = mid

    def refine_below(self, width: Fraction) -> None:
        while self._hi - self._lo > width:
            self.refine_once()

    @property
    def float_hint(self) -> float:
        if self.is_rational:
            return float(self.as_rational())
        self.refine_below(_FLOAT_WIDTH)
        return float((self._lo + self._hi) / 2)

    # ---- identity and order ----

    def same_root(self, other: "AlgebraicReal") -> bool:
        if self.minpoly != other.minpoly:
            return False
        lo = max(self._lo, other._lo)
        hi = min(self._hi, other._hi)
        if not lo < hi:
            return False
        return count_real_roots(self.minpoly, lo, hi) >= 1

    def compare(self, other: "AlgebraicReal") -> int:
        if self.same_root(other):
            return 0
        while self._lo < other._hi and other._lo < self._hi:
            self.refine_once()
            other.refine_once()
        return -1 if self._hi <= other._lo else 1

    def __eq__(self, other):
        if isinstance(other, AlgebraicReal):
            return self.same_root(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.minpoly.coeffs)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __repr__(self):
        return (
            f"AlgebraicReal({format_polynomial(self.minpoly)!r}, "
            f"({self._lo}, {self._hi}))"
        )


def isolate_real_roots(p: RationalPolynomial):
    """All real roots of p as (AlgebraicReal, multiplicity), ascending.

    Splits into squarefree then irreducible factors, then isolates each
    factor's real roots by Sturm-count bisection.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has every number as a root")
    out = []
    for fac, mult in irreducible_factors(p):
        for root in _isolate_irreducible(fac):
            out.append((root, mult))
    out.sort(key=functools.cmp_to_key(lambda s, t: s[0].compare(t[0])))
    return out


def _isolate_irreducible(f: RationalPolynomial) -> list[AlgebraicReal]:
    if f.degree == 1:
        return [AlgebraicReal.from_rational(-f.coeffs[0] / f.coeffs[1])]
    bound = f.cauchy_bound() + 1
    chain = sturm_chain(f)
    roots = []
    stack = [(-bound, bound, None, None)]
    while stack:
        lo, hi, v_lo, v_hi = stack.pop()
        if v_lo is None:
            v_lo = _variations(chain, lo)
        if v_hi is None:
            v_hi = _variations(chain, hi)
        n = v_lo - v_hi
        if n == 0:
            continue
        if n == 1:
            roots.append(AlgebraicReal(f, lo, hi))
            continue
        mid = (lo + hi) / 2
        v_mid = _variations(chain, mid)
        stack.append((lo, mid, v_lo, v_mid))
        stack.append((mid, hi, v_mid, v_hi))
    return roots


# ---- text form ----

def format_polynomial(p: RationalPolynomial) -> str:
    """Serialize a monic polynomial as 'c0/c0d + c1/c1d z + ... + z^n'."""
    if p.is_zero:
        return "0/1"
    if p.leading != 1:
        raise ValueError("serialized polynomials must be monic")
    n = p.degree
    parts = []
    for k, c in enumerate(p.coeffs[:-1]):
        frac = f"{c.numerator}/{c.denominator}"
        if k == 0:
            parts.append(frac)
        elif k == 1:
            parts.append(f"{frac} z")
        else:
            parts.append(f"{frac} z^{k}")
    parts.append("z" if n == 1 else f"z^{n}")
    return " + ".join(parts)


def parse_polynomial(text: str) -> RationalPolynomial:
    terms = [t.strip() for t in text.split(" + ")]
    coeffs: dict[int, Fraction] = {}
    top = 0
    for term in terms:
        if term.startswith("z"):
            deg = 1 if term == "z" else int(term[2:])
            coeffs[deg] = coeffs.get(deg, _ZERO) + 1
            top = max(top, deg)
            continue
        pieces = term.split()
        c = Fraction(pieces[0])
        if len(pieces) == 1:
            deg = 0
        else:
            zpart = pieces[1]
            deg = 1 if zpart == "z" else int(zpart[2:])
        coeffs[deg] = coeffs.get(deg, _ZERO) + c
        top = max(top, deg)
    return RationalPolynomial([coeffs.get(k, _ZERO) for k in range(top + 1)])

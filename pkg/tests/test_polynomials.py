import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from treespectra import (
    AlgebraicReal,
    RationalPolynomial,
    format_polynomial,
    irreducible_factors,
    isolate_real_roots,
    parse_polynomial,
    poly,
    poly_gcd,
    squarefree_part,
)

Z = sympy.Symbol("z")

coeff = st.fractions(min_value=-8, max_value=8, max_denominator=6)
polys = st.lists(coeff, min_size=1, max_size=6).map(poly)


def to_sympy(p: RationalPolynomial):
    return sympy.Poly(
        [sympy.Rational(c) for c in reversed(p.coeffs)] or [0], Z
    )


def from_sympy(sp) -> RationalPolynomial:
    return poly([Fraction(c) for c in reversed(sp.all_coeffs())])


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_ring_ops_match_sympy(a, b):
    lhs = to_sympy(a + b).as_expr() - (to_sympy(a).as_expr() + to_sympy(b).as_expr())
    assert sympy.expand(lhs) == 0
    lhs = to_sympy(a * b).as_expr() - to_sympy(a).as_expr() * to_sympy(b).as_expr()
    assert sympy.expand(lhs) == 0
    if not b.is_zero:
        q, r = divmod(a, b)
        assert a == q * b + r
        assert r.is_zero or r.degree < b.degree


@settings(max_examples=50, deadline=None)
@given(polys, polys)
def test_gcd_matches_sympy(a, b):
    if a.is_zero and b.is_zero:
        return
    ours = poly_gcd(a, b)
    theirs = sympy.gcd(to_sympy(a), to_sympy(b)).monic()
    assert to_sympy(ours).monic() == theirs


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_squarefree_part_kills_multiplicity(a, b):
    if a.degree < 1 or b.degree < 1:
        return
    p = a * a * b
    sf = squarefree_part(p)
    g = poly_gcd(sf, sf.derivative())
    assert g.degree == 0
    assert sf.divides(p)


def test_irreducible_factors_reassemble():
    p = poly([Fraction(-2), 0, 1]) * poly([Fraction(-1), 1]) ** 2
    factors = irreducible_factors(p)
    prod = poly([1])
    for f, mult in factors:
        prod = prod * f**mult
    assert prod.monic() == p.monic()
    degs = sorted(f.degree for f, _ in factors)
    assert degs == [1, 2]


def test_isolate_real_roots_sqrt2():
    roots = isolate_real_roots(poly([Fraction(-2), 0, 1]))
    assert len(roots) == 2
    (neg, m1), (pos, m2) = roots
    assert m1 == m2 == 1
    assert neg.lo < -1 < neg.hi or neg.hi < 0
    assert abs(pos.float_hint - 2**0.5) < 1e-9
    assert abs(neg.float_hint + 2**0.5) < 1e-9
    assert not pos.is_rational


def test_isolate_real_roots_multiplicities():
    # (z - 1)^2 (z + 2)
    p = poly([Fraction(-1), 1]) ** 2 * poly([Fraction(2), 1])
    roots = isolate_real_roots(p)
    vals = sorted((r.float_hint, m) for r, m in roots)
    assert vals == [(-2.0, 1), (1.0, 2)]
    for r, _ in roots:
        assert r.is_rational


@settings(max_examples=30, deadline=None)
@given(polys)
def test_root_count_matches_sympy(p):
    if p.degree < 1:
        return
    ours = sum(m for _, m in isolate_real_roots(p))
    theirs = len(sympy.Poly(to_sympy(p), Z).real_roots())
    assert ours == theirs


def test_algebraic_compare_and_same_root():
    sqrt2 = isolate_real_roots(poly([Fraction(-2), 0, 1]))[1][0]
    sqrt2_again = isolate_real_roots(poly([Fraction(-4), 0, 2]))[1][0]
    sqrt3 = isolate_real_roots(poly([Fraction(-3), 0, 1]))[1][0]
    assert sqrt2.same_root(sqrt2_again)
    assert not sqrt2.same_root(sqrt3)
    assert sqrt2.compare(sqrt3) < 0
    assert sqrt3.compare(sqrt2) > 0
    assert sqrt2.compare(sqrt2_again) == 0


def test_algebraic_refinement_narrows():
    r = isolate_real_roots(poly([Fraction(-2), 0, 1]))[1][0]
    r.refine_below(Fraction(1, 10**6))
    assert r.hi - r.lo <= Fraction(1, 10**6)
    assert r.lo <= Fraction(141421356, 10**8) <= r.hi


def test_rational_root_detection():
    r = isolate_real_roots(poly([Fraction(-3, 2), 1]))[0][0]
    assert r.is_rational
    assert r.as_rational() == Fraction(3, 2)
    irr = isolate_real_roots(poly([Fraction(-2), 0, 1]))[0][0]
    with pytest.raises(ValueError):
        irr.as_rational()


@settings(max_examples=60, deadline=None)
@given(polys)
def test_polynomial_text_round_trip(p):
    if p.is_zero:
        return
    p = p.monic()
    assert parse_polynomial(format_polynomial(p)) == p


def test_format_polynomial_requires_monic():
    with pytest.raises(ValueError):
        format_polynomial(poly([Fraction(1), Fraction(2)]))


def test_degree_and_leading():
    p = poly([Fraction(1), Fraction(0), Fraction(3)])
    assert p.degree == 2
    assert p.leading == 3
    assert poly([]).is_zero
    assert poly([Fraction(5)]).degree == 0

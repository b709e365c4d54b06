"""Rational polynomial layer: valuations, division, expansions, parsing."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

import oracles
from omfactor import (
    INF,
    ConfigError,
    ParseError,
    Poly,
    QQ,
    format_poly,
    parse_poly,
    qpoly,
    vp,
)
from omfactor.arith import (
    content_vp,
    expansion_sum,
    gcd_monic,
    is_prime,
    phi_expansion,
    x_power,
)
from genchains import random_qpoly


def test_vp_basics() -> None:
    assert vp(0, 3) == INF
    assert vp(12, 2) == 2
    assert vp(12, 3) == 1
    assert vp(-27, 3) == 3
    assert vp(Fraction(1, 3), 3) == -1
    assert vp(Fraction(50, 9), 3) == -2
    assert vp(Fraction(50, 9), 5) == 2


def test_vp_requires_prime() -> None:
    with pytest.raises(ConfigError):
        vp(10, 4)
    with pytest.raises(ConfigError):
        vp(10, 1)


def test_vp_matches_oracle() -> None:
    rng = random.Random(11)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randrange(-10**6, 10**6)
        assert vp(n, p) == oracles.vp_int(n, p)


def test_is_prime_small() -> None:
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23}
    for n in range(-2, 25):
        assert is_prime(n) == (n in primes)


def test_poly_ring_laws() -> None:
    rng = random.Random(23)
    for _ in range(60):
        f = random_qpoly(rng, 6)
        g = random_qpoly(rng, 6)
        h = random_qpoly(rng, 6)
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert f - f == qpoly([])
        assert (f * g) * h == f * (g * h)


def test_poly_divmod_matches_oracle() -> None:
    rng = random.Random(29)
    for _ in range(60):
        f = random_qpoly(rng, 9)
        d = random_qpoly(rng, 5)
        if d.is_zero():
            continue
        q, r = divmod(f, d)
        assert q * d + r == f
        assert r.is_zero() or r.degree < d.degree
        oq, orr = oracles.sympy_divmod(list(f), list(d))
        assert list(q) == oq
        assert list(r) == orr


def test_poly_pow_and_compose() -> None:
    x = qpoly([0, 1])
    assert (x + qpoly([1])) ** 3 == qpoly([1, 3, 3, 1])
    f = qpoly([1, 0, 1])
    g = qpoly([-2, 1])
    assert f.compose(g) == qpoly([5, -4, 1])
    assert f.evaluate(Fraction(3)) == 10


def test_poly_shift_scale_derivative() -> None:
    f = qpoly([2, 0, 5])
    assert f.shift(2) == qpoly([0, 0, 2, 0, 5])
    assert f.scale(Fraction(1, 2)) == qpoly([1, 0, Fraction(5, 2)])
    assert f.derivative() == qpoly([0, 10])


def test_gcd_monic() -> None:
    f = qpoly([-1, 0, 1])
    g = qpoly([1, 1])
    assert gcd_monic(f * g, g * qpoly([7, 3])) == g.monic() * qpoly([Fraction(1)])
    rng = random.Random(31)
    for _ in range(30):
        a = random_qpoly(rng, 4)
        b = random_qpoly(rng, 4)
        if a.is_zero() or b.is_zero():
            continue
        got = gcd_monic(a, b)
        want = oracles.sympy_gcd(list(a), list(b))
        want_poly = Poly(QQ, want)
        if not want_poly.is_zero():
            want_poly = want_poly.monic()
        assert got == want_poly


def test_content_vp() -> None:
    assert content_vp(qpoly([18, 27, 9]), 3) == 2
    assert content_vp(qpoly([]), 3) == INF
    assert content_vp(qpoly([1, 3]), 3) == 0


def test_phi_expansion_roundtrip() -> None:
    rng = random.Random(37)
    for _ in range(60):
        g = random_qpoly(rng, 12)
        phi = random_qpoly(rng, rng.randrange(1, 4), monic=True)
        if phi.degree < 1:
            continue
        digits = phi_expansion(g, phi)
        assert all(d.is_zero() or d.degree < phi.degree for d in digits)
        assert expansion_sum(digits, phi) == g
        want = oracles.phi_expansion_oracle(list(g), list(phi))
        assert [list(d) for d in digits] == want


def test_phi_expansion_of_zero() -> None:
    assert phi_expansion(qpoly([]), qpoly([0, 1])) == []


def test_parse_format_roundtrip() -> None:
    rng = random.Random(41)
    for _ in range(60):
        g = random_qpoly(rng, 8)
        assert parse_poly(format_poly(g)) == g


def test_parse_expression_grammar() -> None:
    got = parse_poly("x^4 - 2*(3 + 9 - 27)*x^2 + 6786")
    assert got == qpoly([6786, 0, 30, 0, 1])
    assert parse_poly("(x - 1)*(x + 1)") == qpoly([-1, 0, 1])
    assert parse_poly("-x") == qpoly([0, -1])
    assert parse_poly("2^3") == qpoly([8])
    assert parse_poly("y^2 + 1", var="y") == qpoly([1, 0, 1])


def test_parse_rejects_garbage() -> None:
    for text in ["x + y", "x**2", "1/2", "x^", "(x", "x!", ""]:
        with pytest.raises(ParseError):
            parse_poly(text)


def test_x_power() -> None:
    assert x_power(0) == qpoly([1])
    assert x_power(3) == qpoly([0, 0, 0, 1])

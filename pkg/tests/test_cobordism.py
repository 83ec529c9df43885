from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from chowlab.cobordism import (Cell, ChowElement, FormalVariety, chern_class, chern_monomials,
                               chern_number, chern_number_matrix, chern_numbers, cobordism_basis,
                               integer_partitions, integrate, mixed_pairing_matrix, monomial_label)
from chowlab.errors import StructuralError
from chowlab.linalg import rank
from chowlab.sampling import random_chow_element, random_variety, seeded


def binomial_chern_number(dims, exps):
    """Independent oracle: expand prod (1+h_i)^(r_i+1) with sympy."""
    hs = sympy.symbols("h0:%d" % len(dims))
    t = sympy.Symbol("t")
    total = sympy.expand(sympy.prod([(1 + t * h) ** (r + 1) for h, r in zip(hs, dims)]))
    poly = sympy.Poly(total, t)
    c = [poly.coeff_monomial(t ** i) for i in range(sum(dims) + 1)]
    expr = sympy.Integer(1)
    for i, e in enumerate(exps, 1):
        expr *= (c[i] if i < len(c) else 0) ** e
    expr = sympy.expand(expr)
    top = sympy.prod([h ** r for h, r in zip(hs, dims)])
    return sympy.Poly(expr, *hs).coeff_monomial(top) if expr != 0 else 0


def test_parse_and_spec():
    X = FormalVariety.parse("  P2 +P1x P1 ")
    assert X.d == 2
    assert [c.dims for c in X.cells] == [(2,), (1, 1)]
    assert X.spec == "P2 + P1xP1"
    assert FormalVariety.parse(X.spec) == X
    for bad in ["P2 + P1", "Q2", "P0", "", "P2 ++ P2", "P1xx P1"]:
        with pytest.raises(StructuralError):
            FormalVariety.parse(bad)


def test_integer_partitions():
    assert integer_partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [len(integer_partitions(n)) for n in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]


def test_labels():
    assert [monomial_label(J) for J in chern_monomials(2, 2)] == ["c1^2", "c2"]
    assert monomial_label((1, 1, 0)) == "c1*c2"
    assert monomial_label((0, 0)) == "1"


def test_projective_space_numbers():
    assert chern_numbers(FormalVariety.parse("P1")) == {(1,): 2}
    P3 = FormalVariety.parse("P3")
    nums = {monomial_label(J): v for J, v in chern_numbers(P3).items()}
    assert nums == {"c1^3": 64, "c1*c2": 24, "c3": 4}


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_chern_numbers_against_binomial_oracle(d):
    for X in cobordism_basis(d):
        for J in chern_monomials(d, d):
            assert chern_number(X, J) == binomial_chern_number(X.cells[0].dims, J)


def test_matrix_dim_2():
    M = chern_number_matrix(2)
    assert [X.spec for X in M.rows] == ["P2", "P1xP1"]
    assert M.entries == ((9, 3), (8, 4))
    assert M.determinant == 12
    assert M.to_dict()["matrix"] == [["9", "3"], ["8", "4"]]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_matrix_rank_is_partition_count(d):
    M = chern_number_matrix(d)
    assert M.rank == len(integer_partitions(d))
    sym = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in map(Fraction, row)]
                        for row in M.entries])
    assert sym.rank() == M.rank
    assert sym.det() == M.determinant


@pytest.mark.parametrize("d", [1, 2, 3])
def test_mixed_pairing_full_rank(d):
    for m in range(d + 1):
        P = mixed_pairing_matrix(d, m)
        assert len(P.entries) == len(P.cols) == len(chern_monomials(d, m))
        assert rank(P.entries) == len(P.cols)
        for (X, L), row in zip(P.pairs, P.entries):
            assert row == tuple(chern_number(X, tuple(a + b for a, b in zip(L, J))) for J in P.cols)


def test_chern_numbers_additive_on_unions():
    X, Y = FormalVariety.parse("P2"), FormalVariety.parse("P1xP1")
    for J in chern_monomials(2, 2):
        assert chern_number(X + Y, J) == chern_number(X, J) + chern_number(Y, J)


def test_euler_characteristic():
    for d in (1, 2, 3):
        for X in cobordism_basis(d):
            top = tuple(1 if i == d else 0 for i in range(1, d + 1))
            expect = 1
            for r in X.cells[0].dims:
                expect *= r + 1
            assert chern_number(X, top) == expect


def test_integrate_total_chern_class():
    X = FormalVariety.parse("P2 + P1xP1")
    assert integrate(X, chern_class(X)) == 3 + 4
    with pytest.raises(StructuralError):
        integrate(FormalVariety.parse("P2"), chern_class(X))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_chow_element_ring_laws(seed):
    rng = seeded(seed)
    X = random_variety(rng, 2, 2)
    Y = random_variety(rng, 2, 2)
    a, b, c = (random_chow_element(rng, (X, Y), 0.4) for _ in range(3))
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a - a == a.zero_like()
    one = ChowElement.fundamental((X, Y))
    assert a * one == a


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_permute_preserves_integral(seed):
    rng = seeded(seed)
    fs = tuple(random_variety(rng, 2, 2) for _ in range(3))
    a = random_chow_element(rng, fs, 0.4)
    b = random_chow_element(rng, fs, 0.4)
    order = (2, 0, 1)
    assert a.permute(order).factors == (fs[2], fs[0], fs[1])
    assert (a * b).integral() == (a.permute(order) * b.permute(order)).integral()
    inverse = (1, 2, 0)
    assert a.permute(order).permute(inverse) == a


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_chow_element_roundtrip(seed):
    rng = seeded(seed)
    fs = tuple(random_variety(rng, 3, 2) for _ in range(2))
    a = random_chow_element(rng, fs, 0.3)
    assert ChowElement.from_dict(a.to_dict()) == a


def test_nilpotency_of_hyperplanes():
    X = FormalVariety.of((1,))
    h = chern_class(X) - ChowElement.fundamental((X,))
    assert (h * h).is_zero()
    assert h.integral() == 2


def test_cell_validation():
    with pytest.raises(StructuralError):
        Cell((0,))
    with pytest.raises(StructuralError):
        FormalVariety(2, ((1,),))


def test_mixed_pairing_spec_examples():
    for d in (1, 2, 3):
        assert mixed_pairing_matrix(d, d).entries == chern_number_matrix(d).entries
    P = mixed_pairing_matrix(2, 1)
    assert P.entries == ((9,),)
    assert P.pairs[0][0].spec == "P2" and P.pairs[0][1] == (1, 0)

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from chowlab import char_classes as cc
from chowlab.errors import DegeneracyError, StructuralError
from chowlab.graded_ring import Alphabet, GradedPoly
from chowlab.sampling import random_bundle, seeded


def roots_ring(r, extra=(), T=4):
    alphabet = Alphabet(tuple(("x%d" % i, 1) for i in range(1, r + 1)) + tuple((n, 1) for n in extra))
    xs = [GradedPoly.var("x%d" % i, alphabet, T) for i in range(1, r + 1)]
    return alphabet, xs


def split_bundle(xs):
    total = GradedPoly.one(xs[0].alphabet, xs[0].truncation)
    for x in xs:
        total = total * (1 + x)
    return cc.BundleClass(len(xs), total)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_segre_against_geometric_series(seed):
    E = random_bundle(seeded(seed))
    x = E.total - 1
    series = GradedPoly.zero(E.alphabet, E.truncation)
    term = GradedPoly.one(E.alphabet, E.truncation)
    for _ in range(E.truncation + 1):
        series = series + term
        term = term * (-x)
    assert cc.segre(E) == series
    assert cc.segre(E) * E.total == 1


def test_dual_and_twist_from_roots():
    alphabet, xs = roots_ring(3, ["t"])
    t = GradedPoly.var("t", alphabet, 4)
    E = split_bundle(xs)
    assert cc.dual(E).total == split_bundle([-x for x in xs]).total
    assert cc.twist(E, t).total == split_bundle([x + t for x in xs]).total
    assert cc.twist(E, -2 * t).total == split_bundle([x - 2 * t for x in xs]).total


def test_twist_rank_exceeds_roots():
    # a rank-5 class with only c_1 nonzero behaves like one root plus 4 trivial
    alphabet, (x,) = roots_ring(1, ["t"])
    t = GradedPoly.var("t", alphabet, 4)
    E = cc.BundleClass(5, 1 + x)
    expect = (1 + x + t) * (1 + t) ** 4
    assert cc.twist(E, t).total == expect


def test_twist_needs_degree_one():
    alphabet, xs = roots_ring(2, ["t"])
    with pytest.raises(StructuralError):
        cc.twist(split_bundle(xs), xs[0] * xs[1])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_twist_agrees_with_tensor_by_line(seed):
    rng = seeded(seed)
    E = random_bundle(rng)
    t = GradedPoly.var("a", E.alphabet, E.truncation).scale(rng.randint(-2, 2))
    if not t:
        return
    assert cc.twist(E, t) == cc.tensor(E, cc.BundleClass.line(t))


def test_chern_character_of_split_bundle():
    alphabet, xs = roots_ring(3)
    E = split_bundle(xs)
    expect = GradedPoly.zero(alphabet, 4)
    for x in xs:
        for n in range(5):
            expect = expect + (x ** n).scale(Fraction(1, sympy.factorial(n)))
    assert cc.chern_character(E) == expect
    assert cc.class_from_character(expect, 3) == E
    with pytest.raises(StructuralError):
        cc.chern_character(E, T=3)
    with pytest.raises(StructuralError):
        cc.class_from_character(expect, 2)


def test_tensor_of_split_bundles():
    alphabet = Alphabet((("x1", 1), ("x2", 1), ("y1", 1), ("y2", 1)))
    x = [GradedPoly.var(n, alphabet, 4) for n in ("x1", "x2")]
    y = [GradedPoly.var(n, alphabet, 4) for n in ("y1", "y2")]
    got = cc.tensor(split_bundle(x), split_bundle(y))
    assert got.rank == 4
    assert got.total == split_bundle([a + b for a in x for b in y]).total


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_whitney_quotient(seed):
    rng = seeded(seed)
    A = random_bundle(rng, truncation=5)
    C = random_bundle(rng, truncation=5)
    assert cc.whitney_quotient(A.total * C.total, A.total) == C.total


def complete_homogeneous(xs, n):
    out = GradedPoly.zero(xs[0].alphabet, xs[0].truncation)
    for combo in combinations_with_replacement(range(len(xs)), n):
        term = GradedPoly.one(xs[0].alphabet, xs[0].truncation)
        for i in combo:
            term = term * xs[i]
        out = out + term
    return out


@pytest.mark.parametrize("k", [1, 2, 3])
def test_projective_bundle_pushforward_complete_homogeneous(k):
    # s(E*) = prod 1/(1 - x_i): its degree-n piece is h_n(x)
    alphabet, xs = roots_ring(k, T=5)
    E = split_bundle(xs)
    for m in range(k + 5):
        n = m - k + 1
        expect = complete_homogeneous(xs, n) if 0 <= n <= 5 else GradedPoly.zero(alphabet, 5)
        assert cc.projective_bundle_pushforward(m, E) == expect
    assert cc.projective_bundle_pushforward(k - 1, E) == 1


def test_pushforward_h_polynomial_rejects_h_in_bundle():
    alphabet = Alphabet((("h", 1), ("e1", 1)))
    h = GradedPoly.var("h", alphabet, 3)
    with pytest.raises(StructuralError):
        cc.pushforward_h_polynomial(h, "h", cc.BundleClass(1, 1 + h))


def test_ci_pushforward_matches_projective_bundle():
    for d in (1, 2, 3):
        alphabet = cc.chern_alphabet(d + 1, "q")
        Q1 = cc.free_bundle(d, alphabet, 4, "q")
        for m in (1, 2, 3):
            for l in range(5):
                expect = cc.projective_bundle_pushforward(l + d - 1, Q1).scale(m ** (d - 1))
                assert cc.ci_pushforward(l, m, d, Q1) == expect


def test_complete_intersection_over_a_point():
    # base a point, Q1 trivial of rank r: c = (1+h)^r / (1+mh)^(d-1) up to degree d
    h = sympy.Symbol("h")
    for d, m, r in [(1, 2, 3), (2, 3, 4), (3, 2, 5)]:
        alphabet = Alphabet((("h", 1),))
        Q1 = cc.BundleClass.trivial(r, alphabet, d)
        got = cc.complete_intersection_chern(d, m, Q1)
        series = sympy.series((1 + h) ** r / (1 + m * h) ** (d - 1), h, 0, d + 1).removeO()
        for n in range(d + 1):
            assert got.coefficient((n,)) == Fraction(str(series.coeff(h, n)))


def test_grassmannian_model_range():
    with pytest.raises(StructuralError):
        cc.GrassmannianModel(2, 4)
    model = cc.GrassmannianModel(2, 7)
    assert model.k_d == 8
    assert model.sub().rank == 5
    assert model.sub().total * model.quotient().total == 1


@pytest.mark.parametrize("d,N", [(1, 4), (1, 6), (2, 5), (2, 7)])
def test_grassmannian_tangent_from_roots(d, N):
    # T_G + Q* (x) Q = Q^N, so c(T_G) = c(Q)^N / prod_{a,b} (1 + x_b - x_a)
    xs = sympy.symbols("x1:%d" % (d + 1))
    expr = sympy.Integer(1)
    for x in xs:
        expr *= (1 + x) ** N
    for a in xs:
        for b in xs:
            if a != b:
                expr /= 1 + b - a
    eps = sympy.Symbol("eps")
    scaled = sympy.series(expr.subs({x: eps * x for x in xs}, simultaneous=True), eps, 0, d + 1).removeO()
    model = cc.GrassmannianModel(d, N)
    TG, nus = cc.grassmannian_tangent(model)
    assert TG.rank == d * (N - d)
    # substitute q_i -> e_i(x) in our answer
    elem = [sympy.Integer(1)]
    poly = sympy.Poly(sympy.prod([1 + eps * x for x in xs]), eps)
    elem += [poly.coeff_monomial(eps ** i) for i in range(1, d + 1)]
    ours = sympy.Integer(0)
    for e, c in TG.total.items():
        term = sympy.Rational(c.numerator, c.denominator) * eps ** TG.alphabet.degree(e)
        for i, k in enumerate(e):
            term *= elem[i + 1] ** k
        ours += term
    assert sympy.expand(ours - scaled) == 0
    assert nus[0] == N


@pytest.mark.parametrize("d,N,l", [(1, 4, 3), (2, 7, 2), (2, 7, 3), (1, 5, 1), (2, 6, 5)])
def test_u_prime_triangular(d, N, l):
    r = cc.compute_u_prime(d, N, l)
    kd = d * (N - d - 1)
    assert r.leading[0] == N - kd * l
    assert all(r.leading)
    for j, u in enumerate(r.polys, 1):
        assert u.is_homogeneous(j)
        for i in range(j + 1, d + 1):
            assert not u.involves("c'%d" % i)
    system = r.as_triangular_system()
    inv = system.invert()
    for name in system.alphabet.names:
        v = GradedPoly.var(name, system.alphabet, system.truncation)
        assert system.apply(inv.apply(v)) == v


def test_u_prime_d1_closed_form():
    # G(1,N) = P^{N-1}: c_1(N_X) = N c'_1 - c_1, twist by -l c'_1 at rank N-2
    for N in (3, 4, 5, 6):
        for l in (1, 3):
            if N - (N - 2) * l == 0:
                continue
            r = cc.compute_u_prime(1, N, l)
            a = r.polys[0].alphabet
            c1, cp1 = GradedPoly.var("c1", a, 1), GradedPoly.var("c'1", a, 1)
            assert r.polys[0] == -c1 + cp1.scale(N - (N - 2) * l)


def test_u_prime_d2_values():
    assert cc.compute_u_prime(2, 7, 2).leading == (-9, 3)
    assert cc.compute_u_prime(2, 7, 3).leading == (-17, 3)


def test_u_prime_degenerate():
    with pytest.raises(DegeneracyError) as info:
        cc.compute_u_prime(1, 4, 2)
    payload = info.value.payload()
    assert payload["kind"] == "degenerate"
    assert payload["mu"] == ["0"]


def test_u_prime_serialization():
    doc = cc.compute_u_prime(2, 7, 2).to_dict()
    assert doc["mu"] == ["-9", "3"]
    assert [GradedPoly.from_dict(p) for p in doc["polys"]] == list(cc.compute_u_prime(2, 7, 2).polys)


def test_bundle_requires_unit_constant():
    a = Alphabet((("a", 1),))
    with pytest.raises(StructuralError):
        cc.BundleClass(1, GradedPoly.var("a", a, 2))
    assert comb(3, 1) == cc.twist(cc.BundleClass.trivial(3, a, 2), GradedPoly.var("a", a, 2)).c(1).coefficient((1,))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_twist_back_and_tensor_symmetry(seed):
    rng = seeded(seed)
    E = random_bundle(rng)
    F = random_bundle(rng, truncation=E.truncation)
    t = GradedPoly.var("b", E.alphabet, E.truncation) + GradedPoly.var("a", E.alphabet, E.truncation)
    assert cc.twist(cc.twist(E, t), -t) == E
    assert cc.tensor(E, F) == cc.tensor(F, E)
    assert cc.class_from_character(cc.chern_character(E), E.rank) == E


def test_complete_intersection_spec_examples():
    alphabet = Alphabet((("h", 1),)) + cc.chern_alphabet(2, "q")
    h = GradedPoly.var("h", alphabet, 2)
    Q1 = cc.free_bundle(2, alphabet, 2, "q")
    target = cc.twist(cc.dual(Q1), h).total
    # the result is truncated at weighted degree d
    assert cc.complete_intersection_chern(1, 3, Q1) == target.truncate(1)
    for m in (1, 2, 5):
        got = cc.complete_intersection_chern(2, m, Q1)
        assert got * (1 + h.scale(m)) == target
    # d = 2 by hand: c(Q1* (x) O(1)) = 1 + (2h - q1) + (h^2 - q1 h + q2)
    q1, q2 = GradedPoly.var("q1", alphabet, 2), GradedPoly.var("q2", alphabet, 2)
    assert target == 1 + 2 * h - q1 + h * h - q1 * h + q2
    assert cc.complete_intersection_chern(2, 2, Q1) == (1 - 2 * h + 4 * h * h) * target


def test_grassmannian_d1_is_projective_space():
    for N in (3, 4, 7):
        TG, nus = cc.grassmannian_tangent(cc.GrassmannianModel(1, N))
        q = GradedPoly.var("q1", TG.alphabet, 1)
        assert TG.total == (1 + q) ** N
        assert nus == [N]

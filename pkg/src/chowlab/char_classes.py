"""Chern/Segre calculus on formal bundles.

A bundle is a rank plus a total Chern class ``1 + c_1 + c_2 + ...`` stored
as one :class:`GradedPoly` whose degree-``i`` component is ``c_i``.

Conventions fixed here:

* ``projective_bundle_pushforward(m, E) == s_{m-k+1}(E*)`` for ``E`` of rank
  ``k``, with ``s_0 = 1`` and negative Segre classes zero.
* ``c_1(O(1))`` restricted to the subvariety is the first tautological
  variable ``c'_1`` in :func:`compute_u_prime`.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import DegeneracyError, InvariantViolation, StructuralError
from .graded_ring import Alphabet, GradedPoly, TriangularSystem, format_rational

__all__ = [
    "BundleClass", "GrassmannianModel", "UPrimeResult", "segre", "dual", "twist",
    "whitney_quotient", "chern_character", "class_from_character", "tensor",
    "projective_bundle_pushforward", "pushforward_h_polynomial", "ci_pushforward",
    "complete_intersection_chern", "grassmannian_tangent", "compute_u_prime",
    "chern_alphabet", "free_bundle",
]


@dataclass(frozen=True)
class BundleClass:
    rank: int
    total: GradedPoly

    def __post_init__(self):
        if self.rank < 0:
            raise StructuralError("rank must be non-negative")
        if self.total.constant_term() != 1:
            raise StructuralError("total Chern class must have constant term 1")

    @property
    def alphabet(self):
        return self.total.alphabet

    @property
    def truncation(self):
        return self.total.truncation

    def c(self, i):
        return self.total.component(i)

    @classmethod
    def trivial(cls, rank, alphabet, truncation):
        return cls(rank, GradedPoly.one(alphabet, truncation))

    @classmethod
    def line(cls, c1):
        """The line bundle with first Chern class ``c1``."""
        if not c1.is_homogeneous(1):
            raise StructuralError("first Chern class must be homogeneous of degree 1")
        return cls(1, GradedPoly.one(c1.alphabet, c1.truncation) + c1)


def chern_alphabet(rank, prefix="c"):
    """Free variables ``c1..c_rank`` of weights ``1..rank``."""
    return Alphabet(tuple(("%s%d" % (prefix, i), i) for i in range(1, rank + 1)))


def free_bundle(rank, alphabet, truncation, prefix="c"):
    """Bundle whose Chern classes are the free variables ``prefix1..prefix<rank>``."""
    total = GradedPoly.one(alphabet, truncation)
    for i in range(1, min(rank, truncation) + 1):
        total = total + GradedPoly.var("%s%d" % (prefix, i), alphabet, truncation)
    return BundleClass(rank, total)


def segre(E):
    """Total Segre class ``c(E)**-1``."""
    return E.total.inverse()


def dual(E):
    return BundleClass(E.rank, E.total.graded_map(lambda n: -1 if n % 2 else 1))


def twist(E, t):
    """Total class of ``E (x) L`` with ``c_1(L) = t``.

    ``c_j(E (x) L) = sum_i binom(r - i, j - i) c_i(E) t**(j - i)``.
    """
    E.total._check(t)
    if not t.is_homogeneous(1):
        raise StructuralError("twisting class must be homogeneous of weighted degree 1")
    r = E.rank
    comps = E.total.components()
    tpow = [GradedPoly.one(t.alphabet, t.truncation)]
    for _ in range(E.truncation):
        tpow.append(tpow[-1] * t)
    total = GradedPoly.zero(t.alphabet, t.truncation)
    for j in range(E.truncation + 1):
        for i in range(0, j + 1):
            b = comb(r - i, j - i) if r >= i else 0
            if b and comps[i]:
                total = total + (comps[i] * tpow[j - i]).scale(b)
    return BundleClass(r, total)


def whitney_quotient(total_B, total_A):
    """``c(C)`` for ``0 -> A -> B -> C -> 0``."""
    total_B._check(total_A)
    return total_B * total_A.inverse()


def _power_sums(total, bound):
    e = total.components()
    p = [None]
    for n in range(1, bound + 1):
        acc = e[n].scale((-1) ** (n - 1) * n)
        for i in range(1, n):
            if e[i] and p[n - i]:
                acc = acc + (e[i] * p[n - i]).scale((-1) ** (i - 1))
        p.append(acc)
    return p


def chern_character(E, T=None):
    """Chern character as one polynomial: ``ch_0 = rank``, ``ch_n = p_n / n!``."""
    if T is not None and T != E.truncation:
        raise StructuralError("character truncation %d differs from the working truncation %d"
                              % (T, E.truncation))
    p = _power_sums(E.total, E.truncation)
    ch = GradedPoly.constant(E.rank, E.alphabet, E.truncation)
    for n in range(1, E.truncation + 1):
        ch = ch + p[n].scale(Fraction(1, factorial(n)))
    return ch


def class_from_character(ch, rank):
    """Inverse of :func:`chern_character` via Newton's identities."""
    if ch.component(0) != GradedPoly.constant(rank, ch.alphabet, ch.truncation):
        raise StructuralError("ch_0 = %s does not equal the rank %d" % (ch.component(0), rank))
    bound = ch.truncation
    p = [None] + [ch.component(n).scale(factorial(n)) for n in range(1, bound + 1)]
    e = [GradedPoly.one(ch.alphabet, bound)]
    for n in range(1, bound + 1):
        acc = GradedPoly.zero(ch.alphabet, bound)
        for i in range(1, n + 1):
            if e[n - i] and p[i]:
                acc = acc + (e[n - i] * p[i]).scale((-1) ** (i - 1))
        e.append(acc.scale(Fraction(1, n)))
    total = e[0]
    for piece in e[1:]:
        total = total + piece
    return BundleClass(rank, total)


def tensor(E, F):
    E.total._check(F.total)
    return class_from_character(chern_character(E) * chern_character(F), E.rank * F.rank)


def projective_bundle_pushforward(m, E):
    """``pi_*(h**m) = s_{m-k+1}(E*)`` for ``E`` of rank ``k``."""
    if m < 0:
        raise StructuralError("power of h must be non-negative")
    i = m - E.rank + 1
    if i < 0 or i > E.truncation:
        return GradedPoly.zero(E.alphabet, E.truncation)
    return segre(dual(E)).component(i)


def pushforward_h_polynomial(p, h, E):
    """Push a polynomial in the hyperplane class ``h`` down to the base.

    ``p`` and ``E`` share one alphabet (containing ``h``); ``E`` must not
    involve ``h``.  Linear over the base, by the projection formula.
    """
    p._check(E.total)
    if E.total.involves(h):
        raise StructuralError("bundle class must not involve the hyperplane variable")
    out = GradedPoly.zero(p.alphabet, p.truncation)
    for power, coeff in p.collect(h).items():
        s = projective_bundle_pushforward(power, E)
        if s:
            out = out + coeff * s
    return out


def ci_pushforward(l, m, d, Q1):
    """``pi'_*(h**l) = (-1)**l m**(d-1) s_l(Q1)`` on a complete intersection of
    ``d - 1`` hypersurfaces of degree ``m`` in the projectivization of ``Q1``.

    Equivalently ``m**(d-1) * projective_bundle_pushforward(l + d - 1, Q1)``.
    """
    if l < 0 or m < 1 or d < 1:
        raise StructuralError("need l >= 0, m >= 1, d >= 1")
    if l > Q1.truncation:
        return GradedPoly.zero(Q1.alphabet, Q1.truncation)
    return segre(Q1).component(l).scale((-1) ** l * m ** (d - 1))


def complete_intersection_chern(d, m, Q1, h="h"):
    """``c(B) = (1 - m h + ... + (-1)**d m**d h**d)**(d-1) * c(Q1* (x) O(1))``."""
    alphabet, bound = Q1.alphabet, Q1.truncation
    if Q1.total.involves(h):
        raise StructuralError("Q1 must not involve the hyperplane variable")
    hv = GradedPoly.var(h, alphabet, bound)
    series = GradedPoly.zero(alphabet, bound)
    for i in range(d + 1):
        series = series + (hv ** i).scale((-m) ** i)
    euler = twist(dual(Q1), hv).total
    result = series ** (d - 1) * euler
    return result.truncate(min(d, bound))


@dataclass(frozen=True)
class GrassmannianModel:
    """Stable-range model of ``G(d, N)``: the ``c_i(Q)`` are free in degrees <= d."""

    d: int
    N: int

    def __post_init__(self):
        if self.d < 1:
            raise StructuralError("d must be positive")
        if self.N < 2 * self.d + 1:
            raise StructuralError("stable range needs N >= 2d+1 (d=%d, N=%d)" % (self.d, self.N))

    @property
    def alphabet(self):
        return chern_alphabet(self.d, "q")

    @property
    def truncation(self):
        return self.d

    @property
    def k_d(self):
        return self.d * (self.N - self.d - 1)

    def quotient(self):
        return free_bundle(self.d, self.alphabet, self.d, "q")

    def sub(self):
        return BundleClass(self.N - self.d, segre(self.quotient()))


def grassmannian_tangent(model):
    """``c(T_G) = c(Hom(S, Q))`` up to degree ``d``; returns ``(bundle, nus)``.

    ``nus[j-1]`` is the coefficient of ``c_j(Q)`` in ``c_j(T_G)``.
    """
    T = tensor(dual(model.sub()), model.quotient())
    dim = model.d * (model.N - model.d)
    T = BundleClass(dim, T.total)
    nus = []
    for j in range(1, model.d + 1):
        e = [0] * model.d
        e[j - 1] = 1
        nus.append(T.total.coefficient(e))
    if any(nu == 0 for nu in nus):
        raise DegeneracyError("leading coefficient of c_j(T_G) vanishes",
                              d=model.d, N=model.N, nu=[format_rational(n) for n in nus])
    return T, nus


@dataclass(frozen=True)
class UPrimeResult:
    d: int
    N: int
    l: int
    polys: tuple
    leading: tuple

    def to_dict(self):
        return {"d": self.d, "N": self.N, "l": self.l,
                "mu": [format_rational(m) for m in self.leading],
                "polys": [p.to_dict() for p in self.polys]}

    def as_triangular_system(self):
        """The substitution ``c'_j -> U'_j`` over the ``c_p`` base."""
        first = self.polys[0]
        targets = ["c'%d" % j for j in range(1, self.d + 1)]
        tails = []
        for j, (u, mu) in enumerate(zip(self.polys, self.leading), 1):
            tails.append(u - GradedPoly.var("c'%d" % j, first.alphabet, first.truncation).scale(mu))
        return TriangularSystem(first.alphabet, first.truncation, targets, self.leading, tails)


def u_prime_alphabet(d):
    return chern_alphabet(d, "c") + chern_alphabet(d, "c'")


def compute_u_prime(d, N, l):
    """The polynomials ``U'_j = c_j(N_{X/G(d,N)}(-l))`` in ``c_p(X)`` and ``c'_q``.

    ``c(N) = c(T_G|X) * s(T_X)``; restriction sends ``c_j(Q) -> c'_j``; the
    twist is by ``-l * c'_1`` at rank ``k_d = d(N - d - 1)``.
    """
    if l < 1:
        raise StructuralError("degree l must be >= 1")
    model = GrassmannianModel(d, N)
    TG, _ = grassmannian_tangent(model)
    alphabet = u_prime_alphabet(d)
    restricted = TG.total.rename([alphabet.index("c'%d" % j) for j in range(1, d + 1)], alphabet, d)
    tangent_X = free_bundle(d, alphabet, d, "c")
    normal = BundleClass(model.k_d, whitney_quotient(restricted, tangent_X.total))
    shift = GradedPoly.var("c'1", alphabet, d).scale(-l)
    twisted = twist(normal, shift)
    polys, leading = [], []
    for j in range(1, d + 1):
        u = twisted.c(j)
        yj = alphabet.index("c'%d" % j)
        e = [0] * len(alphabet)
        e[yj] = 1
        mu = u.coefficient(e)
        rest = u - GradedPoly.monomial(e, alphabet, d, mu)
        for i in range(j, d + 1):
            if rest.involves("c'%d" % i):
                raise InvariantViolation("U'_%d is not triangular in c'_%d" % (j, i))
        polys.append(u)
        leading.append(mu)
    if any(mu == 0 for mu in leading):
        raise DegeneracyError("leading coefficient mu_j vanishes for (d, N, l) = (%d, %d, %d)" % (d, N, l),
                              d=d, N=N, l=l, mu=[format_rational(m) for m in leading])
    return UPrimeResult(d, N, l, tuple(polys), tuple(leading))

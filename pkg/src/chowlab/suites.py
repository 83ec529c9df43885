"""Named invariant suites run by ``chowlab verify --suite NAME``.

Each suite returns a list of ``(check name, passed, detail)`` triples.
Seeds are fixed so runs are reproducible.
"""

from . import char_classes as cc
from .cobordism import (ChowElement, FormalVariety, chern_number_matrix, integer_partitions,
                        mixed_pairing_matrix)
from .errors import DegeneracyError
from .graded_ring import Alphabet, GradedPoly, triangular_root
from .partitions import SetPartition, enumerate_partitions, pullback_along, pushforward_along
from .sampling import (random_bundle, random_chow_element, random_poly, random_standard_cycle,
                       random_triangular_system, random_variety, seeded)
from .universal_cycles import (component_closed_form, decode, delta_closed_form,
                               delta_restrict, evaluate, restrict_to_component)

__all__ = ["SUITES", "run_suite"]


def _segre(n=200):
    rng = seeded(101)
    bad = 0
    for _ in range(n):
        E = random_bundle(rng)
        if cc.segre(E) * E.total != GradedPoly.one(E.alphabet, E.truncation):
            bad += 1
    return [("segre inverse x%d" % n, bad == 0, "%d failures" % bad)]


def _pushforward():
    results = []
    for k in range(1, 5):
        T = 2 * k + 2
        alphabet = (cc.chern_alphabet(k, "e") + cc.chern_alphabet(k, "q")
                    + Alphabet((("h", 1),)))
        rng = seeded(200 + k)
        total = GradedPoly.one(alphabet, T)
        for i in range(1, k + 1):
            total = total + GradedPoly.var("e%d" % i, alphabet, T).scale(rng.randint(-3, 3) or 1)
        E = cc.BundleClass(k, total)
        q = [GradedPoly.one(alphabet, T)] + [GradedPoly.var("q%d" % i, alphabet, T) for i in range(1, k + 1)]
        h = GradedPoly.var("h", alphabet, T)
        C = GradedPoly.zero(alphabet, T)
        for i in range(k + 1):
            C = C + q[i] * h ** (k - i)
        s = cc.segre(cc.dual(E))
        for j in range(k):
            lhs = cc.pushforward_h_polynomial(C * h ** j, "h", E)
            rhs = GradedPoly.zero(alphabet, T)
            for i in range(k + 1):
                idx = j - i + 1
                if idx >= 0:
                    rhs = rhs + q[i] * s.component(idx)
            results.append(("pushforward rank %d j=%d" % (k, j), lhs == rhs, ""))
    return results


def _triangular(n=100):
    rng = seeded(303)
    bad = 0
    for _ in range(n):
        sys = random_triangular_system(rng)
        inv = sys.invert()
        p = random_poly(rng, sys.alphabet, sys.truncation, 0.3)
        if inv.apply(sys.apply(p)) != p or sys.apply(inv.apply(p)) != p:
            bad += 1
    out = [("triangular automorphism x%d" % n, bad == 0, "%d failures" % bad)]
    alphabet = Alphabet((("Y1", 1), ("Y2", 1), ("Y3", 2), ("a", 1)))
    T = 4
    bad = 0
    for _ in range(50):
        gens = []
        for j, y in enumerate(["Y1", "Y2", "Y3"]):
            allowed = Alphabet(tuple(alphabet.variables[:j]) + (("a", 1),))
            tail = random_poly(rng, allowed, T, 0.4).embed(alphabet)
            gens.append(GradedPoly.var(y, alphabet, T) + tail)
        roots = triangular_root(gens, ["Y1", "Y2", "Y3"])
        assignment = {n: GradedPoly.var(n, alphabet, T) for n in alphabet.names}
        assignment.update(dict(zip(["Y1", "Y2", "Y3"], roots)))
        if any(g.substitute(assignment) for g in gens):
            bad += 1
    out.append(("triangular root zeroes generators x50", bad == 0, "%d failures" % bad))
    return out


def _cobordism():
    out = []
    for d in range(1, 5):
        M = chern_number_matrix(d)
        out.append(("rank p(%d)" % d, M.rank == len(integer_partitions(d)), "rank %d" % M.rank))
        for m in range(d + 1):
            mixed_pairing_matrix(d, m)
        out.append(("mixed pairings d=%d" % d, True, ""))
    M = chern_number_matrix(2)
    expected = ((9, 3), (8, 4))
    out.append(("d=2 matrix", M.entries == expected and M.determinant == 12,
                "det %s" % M.determinant))
    return out


def _u_prime():
    out = []
    for d, N, l in [(1, 4, 3), (2, 7, 2), (2, 7, 3)]:
        r = cc.compute_u_prime(d, N, l)
        kd = d * (N - d - 1)
        out.append(("u-prime %s" % ((d, N, l),), r.leading[0] == N - kd * l and all(r.leading), ""))
    try:
        cc.compute_u_prime(1, 4, 2)
        out.append(("u-prime (1,4,2) degenerate", False, "no error"))
    except DegeneracyError:
        out.append(("u-prime (1,4,2) degenerate", True, ""))
    return out


def _diagonal(n=100):
    rng = seeded(404)
    bad = 0
    for _ in range(n):
        X = random_variety(rng, 3, 2)
        k = rng.randint(1, 3)
        I = rng.choice(enumerate_partitions(k))
        alpha = random_chow_element(rng, (X,) * I.length, 0.3)
        beta = random_chow_element(rng, (X,) * k, 0.3)
        lhs = (pushforward_along(I, alpha) * beta).integral()
        rhs = (alpha * pullback_along(I, beta)).integral()
        bad += lhs != rhs
    X = FormalVariety.parse("P1")
    one = ChowElement.fundamental((X,))
    got = pushforward_along(SetPartition.one_block(2), one)
    ok = str(got.components[(0, 0)]) == "h1_1 + h2_1"
    return [("projection formula x%d" % n, bad == 0, "%d failures" % bad),
            ("diagonal of P1", ok, str(got))]


def _restriction(n=50):
    rng = seeded(505)
    bad = bad_delta = 0
    for i in range(n):
        k = 2 + i % 2
        d = 1 + (i // 2) % 2
        Z = random_standard_cycle(rng, d, k, 0.3)
        I = rng.choice(enumerate_partitions(k))
        vs = [random_variety(rng, d=d, n_cells=2) for _ in range(I.length)]
        bad += restrict_to_component(Z, I, vs) != component_closed_form(Z, I, vs)
        X = vs[0]
        direct = delta_restrict(restrict_to_component(Z, I, [X] * I.length), I)
        bad_delta += direct != delta_closed_form(Z, I, X)
    return [("component restriction x%d" % n, bad == 0, "%d failures" % bad),
            ("delta restriction x%d" % n, bad_delta == 0, "%d failures" % bad_delta)]


def _decode(n=50):
    rng = seeded(606)
    bad = 0
    coefs = Alphabet((("y1", 1), ("y2", 2)))
    for i in range(n):
        d = 1 + i % 2
        k = 1 + (i // 2) % 3
        if i % 5 == 4:
            Z = random_standard_cycle(rng, d, k, 0.2, coefs, 2)
        else:
            Z = random_standard_cycle(rng, d, k, 0.3)
        got = decode(lambda X: evaluate(Z, X), d, k, Z.coefficients, Z.coefficient_bound)
        bad += got != Z
    zero = decode(lambda X: ChowElement.power(X, 3), 2, 3)
    return [("decode round trip x%d" % n, bad == 0, "%d failures" % bad),
            ("zero oracle decodes to zero", zero.is_zero(), "")]


SUITES = {
    "segre": _segre,
    "pushforward": _pushforward,
    "triangular": _triangular,
    "cobordism": _cobordism,
    "u-prime": _u_prime,
    "diagonal": _diagonal,
    "restriction": _restriction,
    "decode": _decode,
}


def run_suite(name):
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key]())
        return out
    return SUITES[name]()

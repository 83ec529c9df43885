"""Standard cycles ``Z(X) = sum_I Delta_{I*} P_I(pr_1^* c(X), ..., pr_l^* c(X))``.

``P_I`` is a polynomial in ``l(I)`` Chern alphabets ``c<i>_<s>`` (weight
``i``), of weighted degree at most ``d`` in each alphabet, optionally with
coefficient variables modelling ``CH(Y)`` whose weighted degree is at most
``coefficient_bound``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .cobordism import (EMPTY, ChowElement, FormalVariety, _offsets, cell_chern_components,
                        chern_polynomial_class, cobordism_basis,
                        mixed_pairing_matrix, pull_back_factor, tuple_ring)
from .errors import MissingQueries, OracleNotStandard, StructuralError
from .graded_ring import Alphabet, GradedPoly
from .linalg import kronecker, solve
from .partitions import SetPartition, enumerate_partitions, pushforward_along, refines

__all__ = [
    "StandardCycle", "cycle_alphabet", "evaluate", "restrict_to_component",
    "component_closed_form", "delta_restrict", "delta_closed_form", "decode",
    "decode_suite", "verify_vanishing", "VanishingResult", "TableOracle",
    "external_evaluation",
]


@lru_cache(maxsize=None)
def cycle_alphabet(d, l, coefficients=EMPTY):
    variables = [("c%d_%d" % (i, s), i) for s in range(1, l + 1) for i in range(1, d + 1)]
    return Alphabet(tuple(variables)) + coefficients


def _check_degrees(poly, d, l, coefficients, bound):
    nc = d * l
    w = poly.alphabet.weights
    for e in poly.terms:
        for s in range(l):
            if sum(e[s * d + i] * (i + 1) for i in range(d)) > d:
                raise StructuralError("P has weighted degree > %d in alphabet %d" % (d, s + 1))
        if sum(x * wt for x, wt in zip(e[nc:], w[nc:])) > bound:
            raise StructuralError("coefficient part exceeds degree %d" % bound)


@dataclass(frozen=True)
class StandardCycle:
    d: int
    k: int
    table: dict = field(default_factory=dict)
    coefficients: Alphabet = EMPTY
    coefficient_bound: int = 0

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise StructuralError("d and k must be positive")
        table = {}
        for I, P in self.table.items():
            if I.k != self.k:
                raise StructuralError("partition %s is not of {1..%d}" % (I, self.k))
            alphabet = self.alphabet(I.length)
            if P.alphabet != alphabet or P.truncation != self.truncation(I.length):
                raise StructuralError("P_%s lives in the wrong ring" % I)
            _check_degrees(P, self.d, I.length, self.coefficients, self.coefficient_bound)
            if P:
                table[I] = P
        object.__setattr__(self, "table", table)

    def alphabet(self, l):
        return cycle_alphabet(self.d, l, self.coefficients)

    def truncation(self, l):
        return self.d * l + self.coefficient_bound

    def poly(self, I):
        return self.table.get(I, GradedPoly.zero(self.alphabet(I.length), self.truncation(I.length)))

    def __eq__(self, other):
        if not isinstance(other, StandardCycle):
            return NotImplemented
        return (self.d, self.k, self.coefficients, self.coefficient_bound, self.table) == \
            (other.d, other.k, other.coefficients, other.coefficient_bound, other.table)

    def __hash__(self):
        return hash((self.d, self.k, frozenset(self.table.items())))

    def is_zero(self):
        return not self.table

    def __add__(self, other):
        self._same_shape(other)
        table = dict(self.table)
        for I, P in other.table.items():
            table[I] = table[I] + P if I in table else P
        return StandardCycle(self.d, self.k, table, self.coefficients, self.coefficient_bound)

    def scale(self, q):
        return StandardCycle(self.d, self.k, {I: P.scale(q) for I, P in self.table.items()},
                             self.coefficients, self.coefficient_bound)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def _same_shape(self, other):
        if (self.d, self.k, self.coefficients, self.coefficient_bound) != \
                (other.d, other.k, other.coefficients, other.coefficient_bound):
            raise StructuralError("cycles of different shapes")

    @classmethod
    def zero(cls, d, k, coefficients=EMPTY, coefficient_bound=0):
        return cls(d, k, {}, coefficients, coefficient_bound)

    def to_dict(self):
        return {
            "d": self.d, "k": self.k,
            "coefficient_alphabet": self.coefficients.to_list(),
            "coefficient_bound": self.coefficient_bound,
            "table": [{"partition": I.to_list(), "poly": self.table[I].to_dict()}
                      for I in enumerate_partitions(self.k) if I in self.table],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            d, k = int(data["d"]), int(data["k"])
            coefficients = Alphabet.from_list(data.get("coefficient_alphabet", []))
            bound = int(data.get("coefficient_bound", 0))
            table = {}
            for row in data["table"]:
                I = SetPartition.from_list(row["partition"])
                if I in table:
                    raise StructuralError("partition %s listed twice" % I)
                table[I] = GradedPoly.from_dict(row["poly"])
        except StructuralError:
            raise
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise StructuralError("malformed standard cycle document") from exc
        return cls(d, k, table, coefficients, bound)


# -- evaluation ---------------------------------------------------------------

def external_evaluation(P, d, factors, coefficients=EMPTY, coefficient_bound=0):
    """``P(pr_1^* c(Y_1), ..., pr_l^* c(Y_l))`` on ``Y_1 x ... x Y_l``."""
    factors = tuple(factors)
    l = len(factors)
    out = ChowElement._raw(factors, {}, coefficients, coefficient_bound)
    if not P:
        return out
    comps = {}
    nc = d * l
    for key in out.keys():
        dims = out.dims(key)
        alphabet, bound, caps = tuple_ring(dims, coefficients, coefficient_bound)
        assignment = {}
        for s in range(l):
            parts = cell_chern_components(dims, s, coefficients, coefficient_bound)
            for i in range(1, d + 1):
                assignment["c%d_%d" % (i, s + 1)] = (
                    parts[i] if i < len(parts) else GradedPoly.zero(alphabet, bound))
        base = sum(len(x) for x in dims)
        for j, name in enumerate(coefficients.names):
            e = [0] * len(alphabet)
            e[base + j] = 1
            assignment[name] = GradedPoly(alphabet, bound, {tuple(e): 1})
        assert len(P.alphabet) == nc + len(coefficients)
        comps[key] = P.substitute(assignment, caps)
    out.components = {k: p for k, p in comps.items() if p}
    return out


def evaluate(Z, X):
    """``Z(X)`` as a class on ``X^k``."""
    if X.d != Z.d:
        raise StructuralError("variety has dimension %d, cycle expects %d" % (X.d, Z.d))
    total = ChowElement._raw((X,) * Z.k, {}, Z.coefficients, Z.coefficient_bound)
    for I, P in Z.table.items():
        pushed = pushforward_along(I, external_evaluation(P, Z.d, (X,) * I.length,
                                                          Z.coefficients, Z.coefficient_bound))
        total = total + pushed
    return total


def _component_of_union(element, I, varieties):
    """Restrict a class on ``X_bullet^k`` to ``X_1^{I_1} x ... x X_l^{I_l}`` (grouped order)."""
    offsets, acc = [], 0
    for V in varieties:
        offsets.append(acc)
        acc += len(V.cells)
    owner = [I.block_of[i] for i in range(I.k)]
    order = I.grouped_order()
    factors = tuple(varieties[owner[i]] for i in order)
    coefs, cb = element.coefficients, element.coefficient_bound
    comps = {}
    for key, poly in element.components.items():
        local = []
        for i, c in enumerate(key):
            t = owner[i]
            c -= offsets[t]
            if not 0 <= c < len(varieties[t].cells):
                break
            local.append(c)
        else:
            new_key = tuple(local[i] for i in order)
            # variable layout depends only on the cell dims, which agree
            old_dims = element.dims(key)
            new_dims = tuple(old_dims[i] for i in order)
            alphabet, bound, _ = tuple_ring(new_dims, coefs, cb)
            new_off = _offsets(new_dims)
            where = {i: g for g, i in enumerate(order)}
            positions = []
            for i, dims in enumerate(old_dims):
                positions.extend(new_off[where[i]] + slot for slot in range(len(dims)))
            base = len(positions)
            positions.extend(base + j for j in range(len(coefs)))
            comps[new_key] = poly.rename(positions, alphabet, bound)
    return ChowElement._raw(factors, comps, coefs, cb)


def restrict_to_component(Z, I, varieties):
    """``Z_I(X_1..X_l)``: evaluate on ``X_1 + ... + X_l`` and keep the ``I``-component.

    The result lives on ``X_1^{i_1} x ... x X_l^{i_l}`` with factors grouped
    block by block.
    """
    varieties = list(varieties)
    if len(varieties) != I.length:
        raise StructuralError("need one variety per block of %s" % I)
    union = FormalVariety.union(varieties)
    return _component_of_union(evaluate(Z, union), I, varieties)


def _pushforward_into_component(J, I, element):
    """``Delta_{J,I*}``: push a class on the ``l(J)`` factors into the grouped ``I``-component."""
    pushed = pushforward_along(J, element)
    return pushed.permute(I.grouped_order())


def component_closed_form(Z, I, varieties, only=None):
    """``sum_{J refines I} Delta_{J,I*} P_J(c(X_{j(1)}), ..., c(X_{j(l(J))}))``."""
    varieties = list(varieties)
    if len(varieties) != I.length:
        raise StructuralError("need one variety per block of %s" % I)
    order = I.grouped_order()
    factors = tuple(varieties[I.block_of[i]] for i in order)
    total = ChowElement._raw(factors, {}, Z.coefficients, Z.coefficient_bound)
    for J, P in Z.table.items():
        if not refines(J, I) or (only is not None and not only(J)):
            continue
        src = tuple(varieties[I.block_of[b[0] - 1]] for b in J.blocks)
        ev = external_evaluation(P, Z.d, src, Z.coefficients, Z.coefficient_bound)
        total = total + _pushforward_into_component(J, I, ev)
    return total


def delta_restrict(T, I):
    """Restrict a class on ``X^{i_1} x ... x X^{i_l}`` (grouped by the blocks of
    ``I``) to ``X^k`` embedded by ``I``; for constant families this re-indexes
    the factors into their positions."""
    if len(T.factors) != I.k:
        raise StructuralError("class has %d factors but the exponents of %s sum to %d"
                              % (len(T.factors), I, I.k))
    if len(set(T.factors)) != 1:
        raise StructuralError("delta restriction needs a single variety on every factor")
    order = I.grouped_order()
    inverse = [0] * I.k
    for g, i in enumerate(order):
        inverse[i] = g
    return T.permute(inverse)


def delta_closed_form(Z, I, X):
    """``Z_I^delta(X) = sum_{J refines I} Delta_{J*} P_J(c(X), ...)`` on ``X^k``."""
    total = ChowElement._raw((X,) * Z.k, {}, Z.coefficients, Z.coefficient_bound)
    for J, P in Z.table.items():
        if refines(J, I):
            ev = external_evaluation(P, Z.d, (X,) * J.length, Z.coefficients, Z.coefficient_bound)
            total = total + pushforward_along(J, ev)
    return total


# -- decoding ---------------------------------------------------------------

def decode_suite(d, k):
    """Test varieties queried by :func:`decode`: ordered disjoint unions of
    1..k cobordism-basis varieties."""
    basis = cobordism_basis(d)
    out = []
    for l in range(1, k + 1):
        for combo in product(basis, repeat=l):
            out.append(FormalVariety.union(combo))
    return out


class TableOracle:
    """Oracle backed by precomputed ``{variety spec: ChowElement}`` entries."""

    def __init__(self, entries):
        self.entries = {FormalVariety.parse(s).spec: v for s, v in entries.items()}

    def missing(self, varieties):
        return [X.spec for X in varieties if X.spec not in self.entries]

    def __call__(self, X):
        try:
            return self.entries[X.spec]
        except KeyError:
            raise MissingQueries([X.spec]) from None


def decode(oracle, d, k, coefficients=EMPTY, coefficient_bound=0, check=True):
    """Recover the unique standard cycle whose evaluations the oracle returns.

    Partitions are processed by decreasing number of blocks.  For each ``I``
    and each degree vector ``(m_1..m_l)`` the unknown coefficients of ``P_I``
    solve a square system whose matrix is the Kronecker product of the mixed
    pairing matrices ``int_X c_L c_J``; the right-hand sides are
    ``int pr_first^* c_L * (Z_I - sum_{J < I} Delta_{J,I*} P_J)``.
    """
    basis = cobordism_basis(d)
    queried = {}

    def query(varieties):
        union = FormalVariety.union(varieties)
        if union.spec not in queried:
            value = oracle(union)
            if value.factors != (union,) * k:
                raise StructuralError("oracle answer for %s lives on the wrong product" % union.spec)
            if value.coefficients != coefficients or value.coefficient_bound != coefficient_bound:
                raise StructuralError("oracle answer for %s has the wrong coefficient ring" % union.spec)
            queried[union.spec] = (union, value)
        return queried[union.spec][1]

    pairings = [mixed_pairing_matrix(d, m) for m in range(d + 1)]
    basis_index = {X: i for i, X in enumerate(basis)}
    monomial_classes = {}

    def c_monomial(X, L):
        if (X, L) not in monomial_classes:
            monomial_classes[(X, L)] = chern_polynomial_class(X, L)
        return monomial_classes[(X, L)]

    decoded = StandardCycle.zero(d, k, coefficients, coefficient_bound)
    table = {}
    for I in enumerate_partitions(k):
        l = I.length
        remainders = {}

        def remainder(var_idx):
            if var_idx not in remainders:
                varieties = [basis[i] for i in var_idx]
                union_value = query(varieties)
                comp = _component_of_union(union_value, I, varieties)
                known = component_closed_form(decoded, I, varieties, only=lambda J: J != I)
                remainders[var_idx] = comp - known
            return remainders[var_idx]

        alphabet = cycle_alphabet(d, l, coefficients)
        bound = d * l + coefficient_bound
        P = GradedPoly.zero(alphabet, bound)
        order = I.grouped_order()
        first_pos = [order.index(b[0] - 1) for b in I.blocks]
        for degs in product(range(d + 1), repeat=l):
            mats = [pairings[m] for m in degs]
            M = kronecker(*(pm.entries for pm in mats))
            rhs = []
            for rows in product(*(pm.pairs for pm in mats)):
                var_idx = tuple(basis_index[X] for X, _ in rows)
                R = remainder(var_idx)
                if not R:
                    rhs.append(GradedPoly.zero(coefficients, coefficient_bound))
                    continue
                weight = ChowElement.fundamental(R.factors, coefficients, coefficient_bound)
                for s, (X, L) in enumerate(rows):
                    if any(L):
                        cls = _with_coefficients(c_monomial(X, L), coefficients, coefficient_bound)
                        weight = weight * pull_back_factor(cls, first_pos[s], R.factors)
                rhs.append((R * weight).degree())
            solution = solve(M, rhs)
            columns = list(product(*(pm.cols for pm in mats)))
            for cols, alpha in zip(columns, solution):
                if not alpha:
                    continue
                exps = [x for J in cols for x in J]
                lifted = alpha.rename([d * l + j for j in range(len(coefficients))], alphabet, bound)
                mono = GradedPoly.monomial(exps + [0] * len(coefficients), alphabet, bound)
                P = P + lifted * mono
        table[I] = P
        decoded = StandardCycle(d, k, dict(table), coefficients, coefficient_bound)
    if check:
        for X in decode_suite(d, k):
            query(list(_split_union(X)))
        for spec, (X, value) in sorted(queried.items()):
            if evaluate(decoded, X) != value:
                raise OracleNotStandard("oracle value on %s is not reproduced by any standard cycle" % spec)
    return decoded


def _split_union(X):
    return [FormalVariety(X.d, (cell,)) for cell in X.cells]


def _with_coefficients(element, coefficients, coefficient_bound):
    if not len(coefficients) and not coefficient_bound:
        return element
    comps = {}
    for key, poly in element.components.items():
        dims = element.dims(key)
        alphabet, bound, _ = tuple_ring(dims, coefficients, coefficient_bound)
        comps[key] = poly.rename(list(range(len(poly.alphabet))), alphabet, bound)
    return ChowElement._raw(element.factors, comps, coefficients, coefficient_bound)


@dataclass(frozen=True)
class VanishingResult:
    vanishes: bool
    witness: object = None

    def __bool__(self):
        return self.vanishes


def verify_vanishing(Z):
    """Check ``Z(X) == 0`` on the whole decoding suite; report a witness otherwise."""
    for X in decode_suite(Z.d, Z.k):
        if evaluate(Z, X):
            return VanishingResult(False, X)
    return VanishingResult(True)

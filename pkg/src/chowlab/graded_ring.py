"""Exact arithmetic in weighted-graded truncated polynomial rings over Q.

A :class:`GradedPoly` is a sparse map from exponent vectors to rationals.
Every variable carries a positive weight and every value carries its own
truncation bound ``T``: monomials of weighted degree above ``T`` are
discarded.  Binary operations require equal alphabets and equal bounds.

Some callers (the Chow rings of products of projective spaces) also impose
nilpotency relations ``x**(n+1) == 0``; those are passed around as a tuple
of per-variable exponent caps (``None`` meaning uncapped).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType

from .errors import DegeneracyError, StructuralError

__all__ = [
    "Alphabet", "GradedPoly", "TriangularSystem", "monomial_key",
    "monomials_of_degree", "substitute", "truncated_mul", "triangular_root",
    "triangular_invert", "format_rational", "parse_rational",
]


def format_rational(q):
    """Serialize a rational as ``"p/q"`` (``"p"`` when ``q == 1``)."""
    return str(Fraction(q))


def parse_rational(text):
    if not isinstance(text, str):
        raise StructuralError("rational must be a 'p/q' string, got %r" % (text,))
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise StructuralError("bad rational %r" % text) from exc


def _norm(c):
    # keep integral coefficients as int: int arithmetic is much faster
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of ``(name, weight)`` pairs."""

    variables: tuple = ()

    def __post_init__(self):
        variables = tuple((str(n), int(w)) for n, w in self.variables)
        object.__setattr__(self, "variables", variables)
        names = [n for n, _ in variables]
        if len(set(names)) != len(names):
            raise StructuralError("duplicate variable names in alphabet: %r" % (names,))
        for n, w in variables:
            if w < 1:
                raise StructuralError("weight of %r must be >= 1, got %d" % (n, w))

    @classmethod
    def of(cls, *names, weights=None):
        if weights is None:
            weights = [1] * len(names)
        return cls(tuple(zip(names, weights)))

    @cached_property
    def names(self):
        return tuple(n for n, _ in self.variables)

    @cached_property
    def weights(self):
        return tuple(w for _, w in self.variables)

    @cached_property
    def _index(self):
        return {n: i for i, n in enumerate(self.names)}

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError("variable %r not in alphabet %r" % (name, self.names)) from None

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.variables)

    def __add__(self, other):
        return Alphabet(self.variables + other.variables)

    def weight(self, name):
        return self.weights[self.index(name)]

    def degree(self, exps):
        return sum(e * w for e, w in zip(exps, self.weights))

    def to_list(self):
        return [[n, w] for n, w in self.variables]

    @classmethod
    def from_list(cls, data):
        try:
            return cls(tuple((n, w) for n, w in data))
        except (TypeError, ValueError) as exc:
            raise StructuralError("bad alphabet %r" % (data,)) from exc


def monomial_key(exps, weights):
    """Canonical order: weighted degree, then earlier variables to higher powers."""
    return (sum(e * w for e, w in zip(exps, weights)), tuple(-e for e in exps))


def monomials_of_degree(weights, degree):
    """All exponent vectors of exact weighted degree ``degree``, canonically sorted."""
    out = []
    n = len(weights)

    def rec(i, remaining, acc):
        if i == n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        for e in range(remaining // w + 1):
            acc.append(e)
            rec(i + 1, remaining - e * w, acc)
            acc.pop()

    rec(0, degree, [])
    out.sort(key=lambda m: monomial_key(m, weights))
    return out


def _mul_terms(ta, tb, weights, bound, caps=None):
    if not ta or not tb:
        return {}
    def deg(e):
        return sum(x * w for x, w in zip(e, weights))
    lb = sorted(((deg(e), e, c) for e, c in tb.items()), key=lambda t: t[0])
    out = {}
    get = out.get
    for ea, ca in ta.items():
        room = bound - deg(ea)
        for db, eb, cb in lb:
            if db > room:
                break
            e = tuple([x + y for x, y in zip(ea, eb)])
            if caps is not None and any(c is not None and x > c for x, c in zip(e, caps)):
                continue
            out[e] = get(e, 0) + ca * cb
    return {e: _norm(c) for e, c in out.items() if c}


class GradedPoly:
    """Sparse polynomial with rational coefficients, truncated in weighted degree.

    Values are immutable; every operation returns a new polynomial.
    """

    __slots__ = ("alphabet", "truncation", "_terms", "_hash")

    def __init__(self, alphabet, truncation, terms=None, caps=None):
        if truncation < 0:
            raise StructuralError("truncation must be >= 0")
        self.alphabet = alphabet
        self.truncation = int(truncation)
        n = len(alphabet)
        weights = alphabet.weights
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise StructuralError("bad exponent vector %r for alphabet %r" % (exps, alphabet.names))
            if not c:
                continue
            if sum(e * w for e, w in zip(exps, weights)) > self.truncation:
                continue
            if caps is not None and any(k is not None and e > k for e, k in zip(exps, caps)):
                continue
            if not isinstance(c, (int, Fraction)):
                c = Fraction(c)
            clean[exps] = clean.get(exps, 0) + c
        self._terms = {e: _norm(c) for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, alphabet, truncation, terms):
        p = cls.__new__(cls)
        p.alphabet = alphabet
        p.truncation = truncation
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, alphabet, truncation):
        return cls._raw(alphabet, truncation, {})

    @classmethod
    def constant(cls, value, alphabet, truncation):
        value = _norm(Fraction(value))
        terms = {(0,) * len(alphabet): value} if value else {}
        return cls._raw(alphabet, truncation, terms)

    @classmethod
    def one(cls, alphabet, truncation):
        return cls.constant(1, alphabet, truncation)

    @classmethod
    def var(cls, name, alphabet, truncation):
        i = alphabet.index(name)
        e = [0] * len(alphabet)
        e[i] = 1
        return cls(alphabet, truncation, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps, alphabet, truncation, coeff=1):
        return cls(alphabet, truncation, {tuple(exps): coeff})

    # -- basic protocol ----------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        """Terms in canonical monomial order, coefficients as Fractions."""
        w = self.alphabet.weights
        for e in sorted(self._terms, key=lambda m: monomial_key(m, w)):
            yield e, Fraction(self._terms[e])

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return (self.alphabet == other.alphabet and self.truncation == other.truncation
                    and self._terms == other._terms)
        if isinstance(other, (int, Fraction)):
            return self == GradedPoly.constant(other, self.alphabet, self.truncation)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alphabet, self.truncation, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other):
        if not isinstance(other, GradedPoly):
            raise StructuralError("expected GradedPoly, got %r" % type(other).__name__)
        if other.alphabet != self.alphabet:
            raise StructuralError("alphabet mismatch: %r vs %r" % (self.alphabet.names, other.alphabet.names))
        if other.truncation != self.truncation:
            raise StructuralError("truncation mismatch: %d vs %d" % (self.truncation, other.truncation))

    def _lift(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedPoly.constant(other, self.alphabet, self.truncation)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return GradedPoly._raw(self.alphabet, self.truncation, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly._raw(self.alphabet, self.truncation, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, factor):
        factor = _norm(Fraction(factor))
        if not factor:
            return GradedPoly.zero(self.alphabet, self.truncation)
        return GradedPoly._raw(self.alphabet, self.truncation,
                               {e: _norm(c * factor) for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.mul(other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def mul(self, other, caps=None):
        self._check(other)
        return GradedPoly._raw(self.alphabet, self.truncation,
                               _mul_terms(self._terms, other._terms, self.alphabet.weights,
                                          self.truncation, caps))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("only non-negative integer powers are supported")
        return self.power(n)

    def power(self, n, caps=None):
        result = GradedPoly.one(self.alphabet, self.truncation)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, caps)
            n >>= 1
            if n:
                base = base.mul(base, caps)
        return result

    def reduce(self, caps):
        """Apply nilpotency relations ``x_i**(caps[i]+1) == 0``."""
        return GradedPoly._raw(self.alphabet, self.truncation, {
            e: c for e, c in self._terms.items()
            if not any(k is not None and x > k for x, k in zip(e, caps))})

    # -- degree structure --------------------------------------------------

    def _deg(self, e):
        return sum(x * w for x, w in zip(e, self.alphabet.weights))

    def degree(self):
        """Largest weighted degree present (-1 for zero)."""
        return max((self._deg(e) for e in self._terms), default=-1)

    def lowest_degree(self):
        return min((self._deg(e) for e in self._terms), default=-1)

    def component(self, n):
        """The homogeneous piece of weighted degree ``n``."""
        return GradedPoly._raw(self.alphabet, self.truncation,
                               {e: c for e, c in self._terms.items() if self._deg(e) == n})

    def components(self):
        return [self.component(n) for n in range(self.truncation + 1)]

    def is_homogeneous(self, n=None):
        degs = {self._deg(e) for e in self._terms}
        if n is None:
            return len(degs) <= 1
        return degs <= {n}

    def constant_term(self):
        return Fraction(self._terms.get((0,) * len(self.alphabet), 0))

    def coefficient(self, exps):
        return Fraction(self._terms.get(tuple(exps), 0))

    def coefficient_of(self, **powers):
        e = [0] * len(self.alphabet)
        for name, p in powers.items():
            e[self.alphabet.index(name)] = p
        return self.coefficient(e)

    def variables(self):
        """Names of the variables that occur with nonzero exponent."""
        used = set()
        for e in self._terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(self.alphabet.names[i] for i in sorted(used))

    def involves(self, name):
        i = self.alphabet.index(name)
        return any(e[i] for e in self._terms)

    def graded_map(self, f):
        """Multiply the degree-``n`` component by ``f(n)``."""
        out = {}
        for e, c in self._terms.items():
            v = c * f(self._deg(e))
            if v:
                out[e] = _norm(v)
        return GradedPoly._raw(self.alphabet, self.truncation, out)

    def truncate(self, bound):
        if bound > self.truncation:
            raise StructuralError("cannot raise the truncation bound from %d to %d" % (self.truncation, bound))
        return GradedPoly._raw(self.alphabet, bound,
                               {e: c for e, c in self._terms.items() if self._deg(e) <= bound})

    def collect(self, name):
        """Split by powers of one variable: ``{power: coefficient poly}``."""
        i = self.alphabet.index(name)
        out = {}
        for e, c in self._terms.items():
            p = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            out.setdefault(p, {})[rest] = c
        return {p: GradedPoly._raw(self.alphabet, self.truncation, t) for p, t in sorted(out.items())}

    # -- change of ring ----------------------------------------------------

    def embed(self, alphabet, truncation=None):
        """Re-express in a larger alphabet, matching variables by name."""
        truncation = self.truncation if truncation is None else truncation
        pos = []
        for n, w in self.alphabet.variables:
            j = alphabet.index(n)
            if alphabet.weights[j] != w:
                raise StructuralError("weight of %r differs between alphabets" % n)
            pos.append(j)
        return self.rename(pos, alphabet, truncation)

    def rename(self, positions, alphabet, truncation=None, caps=None):
        """Send variable ``i`` to variable ``positions[i]`` of ``alphabet``.

        Several variables may land on the same target (their exponents add);
        a position of ``None`` means the variable must not occur.
        """
        truncation = self.truncation if truncation is None else truncation
        n = len(alphabet)
        weights = alphabet.weights
        out = {}
        for e, c in self._terms.items():
            t = [0] * n
            for i, x in enumerate(e):
                if x:
                    j = positions[i]
                    if j is None:
                        raise StructuralError("variable %r has no image" % self.alphabet.names[i])
                    t[j] += x
            if sum(x * w for x, w in zip(t, weights)) > truncation:
                continue
            if caps is not None and any(k is not None and x > k for x, k in zip(t, caps)):
                continue
            t = tuple(t)
            s = out.get(t, 0) + c
            if s:
                out[t] = _norm(s)
            else:
                out.pop(t, None)
        return GradedPoly._raw(alphabet, truncation, out)

    def substitute(self, assignment, caps=None):
        return substitute(self, assignment, caps)

    def inverse(self):
        """Multiplicative inverse in the truncated ring (needs a nonzero constant term)."""
        c0 = self.constant_term()
        if not c0:
            raise DegeneracyError("constant term is zero; not invertible")
        comps = self.components()
        inv0 = GradedPoly.constant(1 / c0, self.alphabet, self.truncation)
        out = [inv0]
        for n in range(1, self.truncation + 1):
            acc = GradedPoly.zero(self.alphabet, self.truncation)
            for i in range(1, n + 1):
                if comps[i] and out[n - i]:
                    acc = acc + comps[i] * out[n - i]
            out.append(acc.scale(-1 / c0))
        total = out[0]
        for piece in out[1:]:
            total = total + piece
        return total

    # -- serialization / display ------------------------------------------

    def to_records(self):
        names = self.alphabet.names
        return [{"coeff": format_rational(c),
                 "exponents": {names[i]: x for i, x in enumerate(e) if x}}
                for e, c in self.items()]

    def to_dict(self):
        return {"alphabet": self.alphabet.to_list(), "truncation": self.truncation,
                "terms": self.to_records()}

    @classmethod
    def from_dict(cls, data):
        try:
            alphabet = Alphabet.from_list(data["alphabet"])
            truncation = int(data["truncation"])
            records = data["terms"]
        except StructuralError:
            raise
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise StructuralError("malformed polynomial document") from exc
        return cls.from_records(records, alphabet, truncation)

    @classmethod
    def from_records(cls, records, alphabet, truncation):
        terms = {}
        for rec in records:
            try:
                coeff = parse_rational(rec["coeff"])
                e = [0] * len(alphabet)
                for name, x in rec.get("exponents", {}).items():
                    if not isinstance(x, int) or x < 0:
                        raise StructuralError("bad exponent %r" % (x,))
                    e[alphabet.index(name)] = x
            except StructuralError:
                raise
            except (KeyError, TypeError, AttributeError, ValueError) as exc:
                raise StructuralError("malformed term record %r" % (rec,)) from exc
            e = tuple(e)
            if alphabet.degree(e) > truncation:
                raise StructuralError("term %r exceeds truncation %d" % (rec, truncation))
            if e in terms:
                raise StructuralError("duplicate monomial in records")
            terms[e] = coeff
        return cls(alphabet, truncation, terms)

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.alphabet.names
        parts = []
        for e, c in self.items():
            mono = "*".join(names[i] if x == 1 else "%s^%d" % (names[i], x)
                            for i, x in enumerate(e) if x)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (c if c.denominator == 1 else "(%s)" % c, mono))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "GradedPoly(%s; T=%d)" % (self, self.truncation)


def truncated_mul(a, b):
    return a.mul(b)


def substitute(p, assignment, caps=None):
    """Compose ``p`` with ``assignment`` (variable name -> GradedPoly).

    Every variable of ``p`` that occurs must be assigned; all images share one
    target alphabet and truncation.  Images whose lowest degree is below the
    weight of the variable they replace are accepted, but terms of ``p`` above
    its own truncation are gone, so the caller accepts the re-truncation.
    """
    if not assignment:
        if p:
            raise StructuralError("unassigned variables: %r" % (p.variables(),))
        raise StructuralError("empty assignment has no target ring")
    images = list(assignment.values())
    target = images[0]
    for img in images[1:]:
        target._check(img)
    for name in assignment:
        p.alphabet.index(name)
    order = []
    for i, name in enumerate(p.alphabet.names):
        order.append(assignment.get(name))
    powers = [{} for _ in order]

    def pw(i, n):
        cache = powers[i]
        if n not in cache:
            if n == 1:
                cache[n] = order[i]
            elif n % 2 == 0:
                h = pw(i, n // 2)
                cache[n] = h.mul(h, caps)
            else:
                cache[n] = pw(i, n - 1).mul(order[i], caps)
        return cache[n]

    result = {}
    for e, c in p._terms.items():
        acc = None
        for i, x in enumerate(e):
            if not x:
                continue
            if order[i] is None:
                raise StructuralError("variable %r is not assigned" % p.alphabet.names[i])
            f = pw(i, x)
            acc = f if acc is None else acc.mul(f, caps)
            if not acc:
                break
        if acc is None:
            acc = GradedPoly.one(target.alphabet, target.truncation)
        for te, tc in acc._terms.items():
            s = result.get(te, 0) + c * tc
            if s:
                result[te] = s
            else:
                result.pop(te, None)
    return GradedPoly._raw(target.alphabet, target.truncation,
                           {e: _norm(c) for e, c in result.items()})


def triangular_root(generators, unknowns):
    """Solve ``G_j = Y_j + P_j(Y_1..Y_{j-1}) == 0`` by back-substitution.

    ``generators[j]`` is a GradedPoly whose alphabet contains the names in
    ``unknowns``; every other variable belongs to the coefficient ring.
    Returns the ring values ``r_j = -P_j(r_1, ..., r_{j-1})`` as polynomials
    that do not involve any unknown.
    """
    if len(generators) != len(unknowns):
        raise StructuralError("need one generator per unknown")
    if not generators:
        return []
    alphabet, bound = generators[0].alphabet, generators[0].truncation
    for g in generators:
        generators[0]._check(g)
    idx = [alphabet.index(y) for y in unknowns]
    roots = []
    for j, g in enumerate(generators):
        yj = GradedPoly.var(unknowns[j], alphabet, bound)
        tail = g - yj
        for i in idx[j:]:
            if any(e[i] for e in tail._terms):
                raise StructuralError("generator %d is not of the form Y_%d + P(Y_1..Y_%d)"
                                      % (j + 1, j + 1, j))
        assignment = {n: GradedPoly.var(n, alphabet, bound) for n in alphabet.names}
        for i, r in enumerate(roots):
            assignment[unknowns[i]] = r
        roots.append(-substitute(tail, assignment))
    return roots


class TriangularSystem:
    """The substitution ``x -> x``, ``y_j -> mu_j*y_j + Q_j(x, y_1..y_{j-1})``.

    Each tail ``Q_j`` must have lowest weighted degree at least the weight of
    ``y_j`` so that the substitution respects the truncation filtration; under
    that condition it is an automorphism of the truncated ring whenever every
    ``mu_j`` is nonzero.
    """

    def __init__(self, alphabet, truncation, targets, leading, tails):
        self.alphabet = alphabet
        self.truncation = truncation
        self.targets = tuple(targets)
        self.leading = tuple(Fraction(m) for m in leading)
        if not (len(self.targets) == len(self.leading) == len(tails)):
            raise StructuralError("targets, leading coefficients and tails differ in length")
        self.tails = tuple(
            GradedPoly.zero(alphabet, truncation) if q is None else q for q in tails)
        idx = [alphabet.index(y) for y in self.targets]
        for j, q in enumerate(self.tails):
            if q.alphabet != alphabet or q.truncation != truncation:
                raise StructuralError("tail %d lives in a different ring" % (j + 1))
            for i in idx[j:]:
                if any(e[i] for e in q._terms):
                    raise StructuralError("tail of %s mentions %s" % (self.targets[j], alphabet.names[i]))
            w = alphabet.weights[idx[j]]
            if q and q.lowest_degree() < w:
                raise StructuralError("tail of %s has degree below its weight %d" % (self.targets[j], w))

    @property
    def base(self):
        return tuple(n for n in self.alphabet.names if n not in self.targets)

    def images(self):
        out = {n: GradedPoly.var(n, self.alphabet, self.truncation) for n in self.alphabet.names}
        for y, mu, q in zip(self.targets, self.leading, self.tails):
            out[y] = out[y].scale(mu) + q
        return out

    def apply(self, p):
        return substitute(p, self.images())

    def invert(self):
        return triangular_invert(self)

    @classmethod
    def identity(cls, alphabet, truncation, targets):
        return cls(alphabet, truncation, targets, [1] * len(targets), [None] * len(targets))


def triangular_invert(system):
    """Inverse substitution: ``y_j -> (y_j - Q_j(x, W_1..W_{j-1})) / mu_j``."""
    for y, mu in zip(system.targets, system.leading):
        if not mu:
            raise DegeneracyError("leading coefficient of %s is zero" % y, target=y)
    alphabet, bound = system.alphabet, system.truncation
    ident = {n: GradedPoly.var(n, alphabet, bound) for n in alphabet.names}
    inverse_images = {}
    tails = []
    for y, mu, q in zip(system.targets, system.leading, system.tails):
        assignment = dict(ident)
        assignment.update(inverse_images)
        tail = substitute(q, assignment).scale(-1 / mu)
        tails.append(tail)
        inverse_images[y] = ident[y].scale(1 / mu) + tail
    return TriangularSystem(alphabet, bound, system.targets,
                            [1 / mu for mu in system.leading], tails)

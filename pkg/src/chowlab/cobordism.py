"""Formal test varieties, their Chow rings, integration and Chern-number matrices.

A :class:`FormalVariety` is a disjoint union of cells, each a product of
projective spaces ``P^{r_1} x ... x P^{r_s}``.  A :class:`ChowElement` lives
on a product of such varieties ``X_1 x ... x X_k`` (a power ``X^k`` when all
factors agree): for every tuple of cells it stores a polynomial in the
hyperplane classes ``h<position>_<slot>`` reduced modulo ``h**(r+1) = 0``.
Optional coefficient variables (a free model of ``CH(Y)``) ride along.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import DegeneracyError, InvariantViolation, StructuralError
from .graded_ring import Alphabet, GradedPoly, format_rational, monomials_of_degree
from .linalg import determinant, rank, select_independent_rows

__all__ = [
    "Cell", "FormalVariety", "ChowElement", "ChernNumberMatrix", "PairingMatrix",
    "chern_class", "integrate", "cobordism_basis", "chern_number_matrix",
    "mixed_pairing_matrix", "integer_partitions", "chern_monomials",
    "monomial_label", "chern_numbers",
]

EMPTY = Alphabet(())


@dataclass(frozen=True)
class Cell:
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(r) for r in self.dims)
        if not dims or any(r < 1 for r in dims):
            raise StructuralError("cell dimensions must be positive, got %r" % (self.dims,))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self):
        return sum(self.dims)

    @property
    def spec(self):
        return "x".join("P%d" % r for r in self.dims)


_CELL = re.compile(r"^P(\d+)(?:xP(\d+))*$")


@dataclass(frozen=True)
class FormalVariety:
    d: int
    cells: tuple

    def __post_init__(self):
        cells = tuple(c if isinstance(c, Cell) else Cell(tuple(c)) for c in self.cells)
        if not cells:
            raise StructuralError("a formal variety needs at least one cell")
        for c in cells:
            if c.dim != self.d:
                raise StructuralError("cell %s has dimension %d, expected %d" % (c.spec, c.dim, self.d))
        object.__setattr__(self, "cells", cells)

    @classmethod
    def of(cls, *cells):
        cells = [Cell(tuple(c)) for c in cells]
        return cls(cells[0].dim if cells else 0, tuple(cells))

    @classmethod
    def parse(cls, text):
        """``"P2 + P1xP1"`` -> two cells ``(2,)`` and ``(1, 1)``; whitespace is ignored."""
        if not isinstance(text, str):
            raise StructuralError("variety spec must be a string")
        compact = re.sub(r"\s+", "", text)
        cells = []
        for part in compact.split("+"):
            if not _CELL.match(part):
                raise StructuralError("malformed variety spec %r" % text)
            cells.append(Cell(tuple(int(x) for x in part[1:].split("xP"))))
        dims = {c.dim for c in cells}
        if len(dims) != 1:
            raise StructuralError("variety %r is not of pure dimension" % text)
        return cls(dims.pop(), tuple(cells))

    @property
    def spec(self):
        return " + ".join(c.spec for c in self.cells)

    def __str__(self):
        return self.spec

    def __add__(self, other):
        """Disjoint union."""
        if other.d != self.d:
            raise StructuralError("disjoint union of varieties of different dimensions")
        return FormalVariety(self.d, self.cells + other.cells)

    @classmethod
    def union(cls, varieties):
        varieties = list(varieties)
        out = varieties[0]
        for v in varieties[1:]:
            out = out + v
        return out


# -- rings attached to cell tuples -------------------------------------------

@lru_cache(maxsize=None)
def tuple_ring(dims_tuple, coefficients=EMPTY, coefficient_bound=0):
    """Alphabet, truncation and caps for a tuple of cells, one per position."""
    variables = []
    caps = []
    for pos, dims in enumerate(dims_tuple, 1):
        for slot, r in enumerate(dims, 1):
            variables.append(("h%d_%d" % (pos, slot), 1))
            caps.append(r)
    variables.extend(coefficients.variables)
    caps.extend([None] * len(coefficients))
    bound = sum(sum(dims) for dims in dims_tuple) + coefficient_bound
    return Alphabet(tuple(variables)), bound, tuple(caps)


@lru_cache(maxsize=None)
def _offsets(dims_tuple):
    out, acc = [], 0
    for dims in dims_tuple:
        out.append(acc)
        acc += len(dims)
    return tuple(out)


@lru_cache(maxsize=None)
def cell_chern_components(dims_tuple, position, coefficients=EMPTY, coefficient_bound=0):
    """``[c_0, c_1, ..., c_d]`` of the cell at ``position`` inside the tuple ring."""
    alphabet, bound, caps = tuple_ring(dims_tuple, coefficients, coefficient_bound)
    total = GradedPoly.one(alphabet, bound)
    for slot, r in enumerate(dims_tuple[position], 1):
        h = GradedPoly.var("h%d_%d" % (position + 1, slot), alphabet, bound)
        total = total.mul((GradedPoly.one(alphabet, bound) + h).power(r + 1, caps), caps)
    return tuple(total.component(i) for i in range(sum(dims_tuple[position]) + 1))


class ChowElement:
    """A class on ``factors[0] x ... x factors[k-1]``, component by cell tuple."""

    __slots__ = ("factors", "components", "coefficients", "coefficient_bound")

    def __init__(self, factors, components=None, coefficients=EMPTY, coefficient_bound=0):
        self.factors = tuple(factors)
        self.coefficients = coefficients
        self.coefficient_bound = coefficient_bound
        comps = {}
        for key, poly in (components or {}).items():
            key = tuple(key)
            if len(key) != len(self.factors):
                raise StructuralError("cell tuple %r has the wrong length" % (key,))
            for X, c in zip(self.factors, key):
                if not 0 <= c < len(X.cells):
                    raise StructuralError("cell index %d out of range for %s" % (c, X.spec))
            alphabet, bound, caps = self.ring(key)
            if poly.alphabet != alphabet or poly.truncation != bound:
                raise StructuralError("component %r lives in the wrong ring" % (key,))
            poly = poly.reduce(caps)
            if poly:
                comps[key] = poly
        self.components = comps

    @classmethod
    def _raw(cls, factors, comps, coefficients, coefficient_bound):
        e = cls.__new__(cls)
        e.factors = factors
        e.components = {k: p for k, p in comps.items() if p}
        e.coefficients = coefficients
        e.coefficient_bound = coefficient_bound
        return e

    @classmethod
    def power(cls, X, k, components=None, **kw):
        return cls((X,) * k, components, **kw)

    def dims(self, key):
        return tuple(X.cells[c].dims for X, c in zip(self.factors, key))

    def ring(self, key):
        return tuple_ring(self.dims(key), self.coefficients, self.coefficient_bound)

    def keys(self):
        return product(*(range(len(X.cells)) for X in self.factors))

    def zero_like(self):
        return ChowElement._raw(self.factors, {}, self.coefficients, self.coefficient_bound)

    @classmethod
    def fundamental(cls, factors, coefficients=EMPTY, coefficient_bound=0):
        e = cls._raw(tuple(factors), {}, coefficients, coefficient_bound)
        comps = {}
        for key in e.keys():
            alphabet, bound, _ = e.ring(key)
            comps[key] = GradedPoly.one(alphabet, bound)
        e.components = comps
        return e

    # -- arithmetic --------------------------------------------------------

    def _compatible(self, other):
        if (self.factors != other.factors or self.coefficients != other.coefficients
                or self.coefficient_bound != other.coefficient_bound):
            raise StructuralError("Chow elements live on different products")

    def __add__(self, other):
        self._compatible(other)
        comps = dict(self.components)
        for k, p in other.components.items():
            comps[k] = comps[k] + p if k in comps else p
        return ChowElement._raw(self.factors, comps, self.coefficients, self.coefficient_bound)

    def __neg__(self):
        return ChowElement._raw(self.factors, {k: -p for k, p in self.components.items()},
                                self.coefficients, self.coefficient_bound)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        return ChowElement._raw(self.factors, {k: p.scale(q) for k, p in self.components.items()},
                                self.coefficients, self.coefficient_bound)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._compatible(other)
        comps = {}
        for k, p in self.components.items():
            if k in other.components:
                comps[k] = p.mul(other.components[k], self.ring(k)[2])
        return ChowElement._raw(self.factors, comps, self.coefficients, self.coefficient_bound)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, ChowElement):
            return NotImplemented
        return (self.factors == other.factors and self.coefficients == other.coefficients
                and self.coefficient_bound == other.coefficient_bound
                and self.components == other.components)

    def __hash__(self):
        return hash((self.factors, frozenset(self.components.items())))

    def is_zero(self):
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def __repr__(self):
        inner = "; ".join("%s: %s" % (k, p) for k, p in sorted(self.components.items()))
        return "ChowElement(%s | %s)" % (" x ".join("(%s)" % X.spec for X in self.factors), inner or "0")

    # -- integration -------------------------------------------------------

    def degree(self):
        """Push forward to a point: coefficient-alphabet valued top-degree sum."""
        out = GradedPoly.zero(self.coefficients, self.coefficient_bound)
        ncoef = len(self.coefficients)
        for key, poly in self.components.items():
            top = []
            for dims in self.dims(key):
                top.extend(dims)
            top = tuple(top)
            nh = len(top)
            acc = {}
            for e, c in poly.terms.items():
                if e[:nh] == top:
                    rest = e[nh:]
                    acc[rest] = acc.get(rest, 0) + c
            if acc:
                out = out + GradedPoly(self.coefficients, self.coefficient_bound, acc)
        assert ncoef == len(out.alphabet)
        return out

    def integral(self):
        """Degree as a Fraction (requires an empty coefficient alphabet)."""
        if len(self.coefficients):
            raise StructuralError("element carries coefficient variables; use degree()")
        return self.degree().constant_term()

    # -- structure maps ----------------------------------------------------

    def permute(self, order):
        """New element whose position ``i`` is old position ``order[i]``."""
        order = tuple(order)
        if sorted(order) != list(range(len(self.factors))):
            raise StructuralError("not a permutation of the positions")
        factors = tuple(self.factors[j] for j in order)
        comps = {}
        for key, poly in self.components.items():
            new_key = tuple(key[j] for j in order)
            old_dims = self.dims(key)
            new_dims = tuple(old_dims[j] for j in order)
            alphabet, bound, _ = tuple_ring(new_dims, self.coefficients, self.coefficient_bound)
            new_off = _offsets(new_dims)
            where = {j: i for i, j in enumerate(order)}
            positions = []
            for j, dims in enumerate(old_dims):
                for slot in range(len(dims)):
                    positions.append(new_off[where[j]] + slot)
            base = len(positions)
            positions.extend(base + i for i in range(len(self.coefficients)))
            comps[new_key] = poly.rename(positions, alphabet, bound)
        return ChowElement._raw(factors, comps, self.coefficients, self.coefficient_bound)

    def to_dict(self):
        return {
            "factors": [X.spec for X in self.factors],
            "coefficient_alphabet": self.coefficients.to_list(),
            "coefficient_bound": self.coefficient_bound,
            "components": [{"cells": list(k), "poly": self.components[k].to_dict()}
                           for k in sorted(self.components)],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            factors = [FormalVariety.parse(s) for s in data["factors"]]
            coefficients = Alphabet.from_list(data.get("coefficient_alphabet", []))
            bound = int(data.get("coefficient_bound", 0))
            comps = {tuple(c["cells"]): GradedPoly.from_dict(c["poly"]) for c in data["components"]}
        except StructuralError:
            raise
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise StructuralError("malformed Chow element document") from exc
        return cls(factors, comps, coefficients, bound)


def pull_back_factor(alpha, position, factors):
    """``pr_position^* alpha`` for ``alpha`` on a single factor."""
    if len(alpha.factors) != 1 or alpha.factors[0] != factors[position]:
        raise StructuralError("class does not live on factor %d" % position)
    out = ChowElement._raw(tuple(factors), {}, alpha.coefficients, alpha.coefficient_bound)
    comps = {}
    for key in out.keys():
        src = alpha.components.get((key[position],))
        if src is None:
            continue
        dims = out.dims(key)
        alphabet, bound, _ = out.ring(key)
        off = _offsets(dims)[position]
        positions = [off + s for s in range(len(dims[position]))]
        base = sum(len(d) for d in dims)
        positions.extend(base + i for i in range(len(alpha.coefficients)))
        comps[key] = src.rename(positions, alphabet, bound)
    out.components = {k: p for k, p in comps.items() if p}
    return out


def chern_class(X, coefficients=EMPTY, coefficient_bound=0):
    """Cellwise total tangent class ``prod_i (1 + h_i)**(r_i + 1)``."""
    comps = {}
    for c, cell in enumerate(X.cells):
        parts = cell_chern_components((cell.dims,), 0, coefficients, coefficient_bound)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        comps[(c,)] = total
    return ChowElement((X,), comps, coefficients, coefficient_bound)


def chern_polynomial_class(X, exps):
    """``c_1(X)**e_1 * c_2(X)**e_2 * ...`` as a ChowElement on ``X``."""
    comps = {}
    for c, cell in enumerate(X.cells):
        dims = (cell.dims,)
        parts = cell_chern_components(dims, 0)
        alphabet, bound, caps = tuple_ring(dims)
        acc = GradedPoly.one(alphabet, bound)
        for i, e in enumerate(exps, 1):
            if e:
                if i >= len(parts):
                    acc = GradedPoly.zero(alphabet, bound)
                    break
                acc = acc.mul(parts[i].power(e, caps), caps)
        comps[(c,)] = acc
    return ChowElement((X,), comps)


def integrate(X, alpha):
    """``int_X alpha``: sum over cells of the top-monomial coefficient.

    Returns a Fraction, or a coefficient-alphabet polynomial when ``alpha``
    carries coefficient variables.
    """
    if alpha.factors != (X,):
        raise StructuralError("class does not live on %s" % X.spec)
    if len(alpha.coefficients):
        return alpha.degree()
    return alpha.integral()


# -- Chern numbers -------------------------------------------------------------

def integer_partitions(n):
    """Partitions of ``n`` as non-increasing tuples, in reverse-lex order."""
    out = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, largest), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return out


def cobordism_basis(d):
    if d < 1:
        raise StructuralError("dimension must be >= 1")
    return [FormalVariety(d, (Cell(p),)) for p in integer_partitions(d)]


def chern_monomials(d, m):
    """Exponent vectors ``(e_1..e_d)`` of weighted degree ``m`` in ``c_1..c_d``."""
    return monomials_of_degree(tuple(range(1, d + 1)), m)


def monomial_label(exps):
    parts = ["c%d" % i if e == 1 else "c%d^%d" % (i, e) for i, e in enumerate(exps, 1) if e]
    return "*".join(parts) or "1"


def chern_number(X, exps):
    return chern_polynomial_class(X, exps).integral()


def chern_numbers(X):
    """``{monomial: int_X c_J(X)}`` over the degree-``d`` monomials."""
    return {J: chern_number(X, J) for J in chern_monomials(X.d, X.d)}


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class ChernNumberMatrix:
    d: int
    rows: tuple
    cols: tuple
    entries: tuple

    @property
    def rank(self):
        return rank(self.entries)

    @property
    def determinant(self):
        return determinant(self.entries)

    def to_dict(self):
        return {"dim": self.d, "rows": [X.spec for X in self.rows],
                "columns": [monomial_label(J) for J in self.cols],
                "matrix": [[format_rational(x) for x in row] for row in self.entries],
                "rank": self.rank, "determinant": format_rational(self.determinant)}


def chern_number_matrix(d):
    rows = cobordism_basis(d)
    cols = chern_monomials(d, d)
    entries = tuple(tuple(chern_number(X, J) for J in cols) for X in rows)
    M = ChernNumberMatrix(d, tuple(rows), tuple(cols), entries)
    if M.rank != len(rows) or len(rows) != len(cols):
        raise InvariantViolation("Chern-number matrix in dimension %d has rank %d < %d"
                                 % (d, M.rank, len(cols)))
    return M


@dataclass(frozen=True)
class PairingMatrix:
    """Rows ``(X_i, L_i)``, columns degree-``m`` monomials ``J``; entry ``int_X c_L c_J``."""

    d: int
    m: int
    pairs: tuple
    cols: tuple
    entries: tuple


@lru_cache(maxsize=None)
def mixed_pairing_matrix(d, m):
    if not 0 <= m <= d:
        raise StructuralError("target degree must lie in [0, d]")
    cols = chern_monomials(d, m)
    candidates, rows = [], []
    for X in cobordism_basis(d):
        for L in chern_monomials(d, d - m):
            candidates.append((X, L))
            rows.append(tuple(chern_number(X, _add_exps(L, J)) for J in cols))
    chosen = select_independent_rows(rows)
    if len(chosen) != len(cols):
        raise DegeneracyError("no full-rank pairing selection for d=%d, m=%d" % (d, m), d=d, m=m)
    return PairingMatrix(d, m, tuple(candidates[i] for i in chosen), tuple(cols),
                         tuple(rows[i] for i in chosen))

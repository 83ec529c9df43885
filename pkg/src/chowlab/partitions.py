"""Set partitions of {1..k} and the diagonal maps they induce on products.

A partition ``I`` with ``l`` blocks gives ``Delta_I: Y_1 x ... x Y_l -> product``
sending ``(y_1..y_l)`` to the point whose ``i``-th coordinate is ``y_s`` when
``i`` lies in block ``s``.  Blocks are ordered by their minimal element and
that ordering fixes the identification of the source.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .cobordism import ChowElement, _offsets, tuple_ring
from .errors import StructuralError
from .graded_ring import GradedPoly

__all__ = [
    "SetPartition", "enumerate_partitions", "refines", "block_map",
    "diagonal_pushforward", "diagonal_pullback", "pushforward_along",
    "pullback_along", "compose_partitions",
]


@dataclass(frozen=True)
class SetPartition:
    k: int
    blocks: tuple

    def __post_init__(self):
        try:
            blocks = tuple(tuple(sorted(int(x) for x in b)) for b in self.blocks)
        except (TypeError, ValueError):
            raise StructuralError("malformed partition %r" % (self.blocks,)) from None
        blocks = tuple(sorted(blocks, key=lambda b: b[0] if b else 0))
        seen = [x for b in blocks for x in b]
        if any(not b for b in blocks) or sorted(seen) != list(range(1, self.k + 1)):
            raise StructuralError("%r is not a partition of {1..%d}" % (self.blocks, self.k))
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *blocks):
        k = sum(len(b) for b in blocks)
        return cls(k, tuple(tuple(b) for b in blocks))

    @classmethod
    def singletons(cls, k):
        return cls(k, tuple((i,) for i in range(1, k + 1)))

    @classmethod
    def one_block(cls, k):
        return cls(k, (tuple(range(1, k + 1)),))

    @property
    def length(self):
        return len(self.blocks)

    @cached_property
    def block_of(self):
        """``block_of[i-1]`` is the 0-based block index of element ``i``."""
        out = [0] * self.k
        for s, b in enumerate(self.blocks):
            for i in b:
                out[i - 1] = s
        return tuple(out)

    @property
    def sizes(self):
        return tuple(len(b) for b in self.blocks)

    def grouped_order(self):
        """Elements listed block by block (0-based)."""
        return tuple(i - 1 for b in self.blocks for i in b)

    def to_list(self):
        return [list(b) for b in self.blocks]

    @classmethod
    def from_list(cls, data):
        try:
            blocks = tuple(tuple(b) for b in data)
            k = sum(len(b) for b in blocks)
        except TypeError as exc:
            raise StructuralError("malformed partition %r" % (data,)) from exc
        return cls(k, blocks)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _set_partitions(elements):
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def enumerate_partitions(k):
    """All set partitions of {1..k}: more blocks first, then lexicographic."""
    if k < 1:
        raise StructuralError("k must be >= 1")
    parts = [SetPartition(k, tuple(tuple(b) for b in p)) for p in _set_partitions(list(range(1, k + 1)))]
    parts.sort(key=lambda p: (-p.length, p.blocks))
    return tuple(parts)


def refines(J, I):
    """True iff every block of ``J`` lies inside a block of ``I``."""
    if J.k != I.k:
        raise StructuralError("partitions of different sets")
    return all(len({I.block_of[i - 1] for i in b}) == 1 for b in J.blocks)


def block_map(J, I):
    """``(j, counts)`` with ``j[s] = t`` when ``J_s`` lies in ``I_t`` (0-based) and
    ``counts[t]`` the number of blocks of ``J`` inside ``I_t``."""
    if not refines(J, I):
        raise StructuralError("%s does not refine %s" % (J, I))
    j = tuple(I.block_of[b[0] - 1] for b in J.blocks)
    counts = [0] * I.length
    for t in j:
        counts[t] += 1
    return j, tuple(counts)


def compose_partitions(I, K):
    """Partition of {1..k} merging the blocks of ``I`` as ``K`` (a partition of
    {1..l(I)}) prescribes; ``Delta_I o Delta_K = Delta_{compose(I, K)}``."""
    if K.k != I.length:
        raise StructuralError("outer partition must partition the blocks of I")
    blocks = []
    for kb in K.blocks:
        blocks.append(tuple(sorted(x for s in kb for x in I.blocks[s - 1])))
    return SetPartition(I.k, tuple(blocks))


@lru_cache(maxsize=None)
def _diagonal_class(dims_tuple, partition, coefficients, coefficient_bound):
    """``prod`` over blocks, other members and slots of ``sum_{i+j=r} h_first^i h_a^j``."""
    alphabet, bound, caps = tuple_ring(dims_tuple, coefficients, coefficient_bound)
    out = GradedPoly.one(alphabet, bound)
    for b in partition.blocks:
        first = b[0]
        for a in b[1:]:
            for slot, r in enumerate(dims_tuple[first - 1], 1):
                terms = {}
                ia = alphabet.index("h%d_%d" % (first, slot))
                ib = alphabet.index("h%d_%d" % (a, slot))
                for i in range(r + 1):
                    e = [0] * len(alphabet)
                    e[ia] = i
                    e[ib] = r - i
                    terms[tuple(e)] = 1
                out = out.mul(GradedPoly(alphabet, bound, terms), caps)
    return out


def pushforward_along(I, alpha):
    """Gysin pushforward along ``Delta_I`` for ``alpha`` on ``l(I)`` factors.

    The target has ``I.k`` positions; position ``i`` carries the factor of
    its block.  Computed cellwise as ``pr_first^*(alpha) * [diagonal]``.
    """
    if len(alpha.factors) != I.length:
        raise StructuralError("class has %d factors, partition has %d blocks" % (len(alpha.factors), I.length))
    factors = tuple(alpha.factors[s] for s in I.block_of)
    coefs, cb = alpha.coefficients, alpha.coefficient_bound
    firsts = [b[0] - 1 for b in I.blocks]
    comps = {}
    for key, poly in alpha.components.items():
        new_key = tuple(key[s] for s in I.block_of)
        src_dims = alpha.dims(key)
        dims = tuple(src_dims[s] for s in I.block_of)
        alphabet, bound, caps = tuple_ring(dims, coefs, cb)
        off = _offsets(dims)
        positions = []
        for s, sd in enumerate(src_dims):
            positions.extend(off[firsts[s]] + slot for slot in range(len(sd)))
        base = sum(len(x) for x in dims)
        positions.extend(base + i for i in range(len(coefs)))
        lifted = poly.rename(positions, alphabet, bound, caps)
        comps[new_key] = lifted.mul(_diagonal_class(dims, I, coefs, cb), caps)
    return ChowElement._raw(factors, comps, coefs, cb)


def pullback_along(I, beta):
    """Restriction along ``Delta_I``: identify the hyperplane classes of each block."""
    if len(beta.factors) != I.k:
        raise StructuralError("class has %d factors, partition is of {1..%d}" % (len(beta.factors), I.k))
    factors = []
    for b in I.blocks:
        fs = {beta.factors[i - 1] for i in b}
        if len(fs) != 1:
            raise StructuralError("positions in one block carry different varieties")
        factors.append(fs.pop())
    factors = tuple(factors)
    coefs, cb = beta.coefficients, beta.coefficient_bound
    comps = {}
    for key, poly in beta.components.items():
        if any(key[i - 1] != key[b[0] - 1] for b in I.blocks for i in b):
            continue
        src_key = tuple(key[b[0] - 1] for b in I.blocks)
        src_dims = tuple(factors[s].cells[c].dims for s, c in enumerate(src_key))
        alphabet, bound, caps = tuple_ring(src_dims, coefs, cb)
        soff = _offsets(src_dims)
        dims = beta.dims(key)
        positions = []
        for i, d in enumerate(dims):
            s = I.block_of[i]
            positions.extend(soff[s] + slot for slot in range(len(d)))
        base = sum(len(d) for d in src_dims)
        positions.extend(base + i for i in range(len(coefs)))
        comps[src_key] = poly.rename(positions, alphabet, bound, caps)
    return ChowElement._raw(factors, comps, coefs, cb)


def diagonal_pushforward(X, I, alpha):
    """``Delta_{I*}: CH(X^{l(I)}) -> CH(X^k)``."""
    if alpha.factors != (X,) * I.length:
        raise StructuralError("class does not live on %s^%d" % (X.spec, I.length))
    return pushforward_along(I, alpha)


def diagonal_pullback(X, I, beta):
    """``Delta_I^*: CH(X^k) -> CH(X^{l(I)})``."""
    if beta.factors != (X,) * I.k:
        raise StructuralError("class does not live on %s^%d" % (X.spec, I.k))
    return pullback_along(I, beta)

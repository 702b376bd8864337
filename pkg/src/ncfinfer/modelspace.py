"""The space of Boolean functions fitting one node's observed transitions.

The data for one node is a set of (input point, output bit) pairs.  All
functions agreeing with the data form a coset: one particular fitting
function (the interpolant, zero off the data) plus any multiple of the
single generator of the ideal of polynomials vanishing on the observed
inputs.  Since that generator is exactly the indicator of the unobserved
points, the coset is also, more concretely, "any assignment of values to
unobserved points", which is how this module materializes, counts, and
samples it.
"""

from dataclasses import dataclass

from .boolfun import TruthTable, anf_to_tt, point_to_index, tt_to_anf
from .errors import CapacityError, InconsistentDataError

_MATERIALIZE_CAP = 20  # free bits; 2^20 tables is the most tables() will yield


class LocalData:
    """Observed (input, output) pairs for one node, duplicates collapsed.

    Two pairs with the same input and different outputs are rejected with
    :class:`InconsistentDataError`: no function can fit such data, which in
    practice means the node's regulator list is wrong.

    Parameters
    ----------
    arity : int
        Number of regulators k.
    pairs : iterable of (point, bit)
        Each point is a bit vector of length k.
    """

    __slots__ = ("arity", "pairs", "_seen_bits", "_value_bits")

    def __init__(self, arity, pairs):
        if arity < 0:
            raise ValueError(f"arity must be nonnegative, got {arity}")
        self.arity = arity
        collapsed = {}
        for point, out in pairs:
            point = tuple(point)
            if len(point) != arity:
                raise ValueError(
                    f"input {point} has length {len(point)}, expected {arity}"
                )
            if out not in (0, 1):
                raise ValueError(f"output must be 0/1, got {out!r}")
            idx = point_to_index(point)
            if idx in collapsed and collapsed[idx][1] != out:
                raise InconsistentDataError(
                    f"input {point} observed with both outputs 0 and 1",
                    input=list(point),
                )
            collapsed[idx] = (point, out)
        self.pairs = tuple(collapsed[idx] for idx in sorted(collapsed))
        self._seen_bits = 0
        self._value_bits = 0
        for idx, (_, out) in sorted(collapsed.items()):
            self._seen_bits |= 1 << idx
            self._value_bits |= out << idx

    @property
    def distinct_inputs(self):
        return len(self.pairs)

    def seen_indices(self):
        """Table indices of the observed inputs, ascending."""
        return tuple(point_to_index(p) for p, _ in self.pairs)

    def __eq__(self, other):
        if not isinstance(other, LocalData):
            return NotImplemented
        return (
            self.arity == other.arity
            and self._seen_bits == other._seen_bits
            and self._value_bits == other._value_bits
        )

    def __hash__(self):
        return hash((self.arity, self._seen_bits, self._value_bits))

    def __repr__(self):
        return f"LocalData(arity={self.arity}, pairs={len(self.pairs)})"


def interpolant(data):
    """The fitting function that is 0 at every unobserved point."""
    return TruthTable.from_int(data.arity, data._value_bits, allow_big=True)


def ideal_generator(data):
    """Generator of the ideal of functions vanishing on the observed inputs.

    As a function it is the indicator of the unobserved points: 0 wherever
    data was seen, 1 elsewhere.  Every fitting function is the interpolant
    plus a multiple of this generator.
    """
    full = (1 << (1 << data.arity)) - 1
    return TruthTable.from_int(data.arity, full ^ data._seen_bits, allow_big=True)


def coset_element(data, g):
    """ANF of interpolant + g * generator, the fitting function selected by g.

    Ranging g over all polynomials sweeps out exactly the functions that
    fit the data (many g map to the same function).
    """
    if g.arity != data.arity:
        raise ValueError(
            f"polynomial arity {g.arity} does not match data arity {data.arity}"
        )
    g_bits = anf_to_tt(g).to_int()
    p_bits = ideal_generator(data).to_int()
    h_bits = data._value_bits ^ (g_bits & p_bits)
    return tt_to_anf(TruthTable.from_int(data.arity, h_bits, allow_big=True))


def fits(table, data):
    """Does the function agree with every observed pair?"""
    if table.arity != data.arity:
        raise ValueError(
            f"table arity {table.arity} does not match data arity {data.arity}"
        )
    return _fits_int(table.to_int(), data)


def _fits_int(table_bits, data):
    return table_bits & data._seen_bits == data._value_bits


def model_space_size(data):
    """Number of functions fitting the data: 2^(2^k - distinct inputs)."""
    return 1 << ((1 << data.arity) - data.distinct_inputs)


@dataclass(frozen=True)
class ModelSpace:
    """Materializable view of all functions fitting one node's data."""

    arity: int
    data: LocalData
    interpolant: TruthTable
    unseen: tuple

    @classmethod
    def from_data(cls, data):
        seen = set(data.seen_indices())
        unseen = tuple(
            idx for idx in range(1 << data.arity) if idx not in seen
        )
        return cls(data.arity, data, interpolant(data), unseen)

    @property
    def size(self):
        return 1 << len(self.unseen)

    def tables(self):
        """Yield every fitting function, duplicate-free.

        Iterates over assignments to the unobserved points (bit j of the
        assignment counter goes to the j-th smallest unobserved index), so
        the sweep has exactly ``size`` steps rather than one per polynomial.
        """
        free = len(self.unseen)
        if free > _MATERIALIZE_CAP:
            raise CapacityError(
                f"refusing to materialize 2^{free} tables",
                free_bits=free,
            )
        base = self.interpolant.to_int()
        for assign in range(1 << free):
            bits = base
            for j, idx in enumerate(self.unseen):
                bits |= ((assign >> j) & 1) << idx
            yield TruthTable.from_int(self.arity, bits, allow_big=True)

    def sample(self, rng):
        """One fitting function uniformly at random (rng: random.Random)."""
        free = len(self.unseen)
        assign = rng.getrandbits(free) if free else 0
        bits = self.interpolant.to_int()
        for j, idx in enumerate(self.unseen):
            bits |= ((assign >> j) & 1) << idx
        return TruthTable.from_int(self.arity, bits, allow_big=True)

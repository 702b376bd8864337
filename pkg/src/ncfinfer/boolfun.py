"""Truth tables and algebraic normal form for Boolean functions on few inputs.

Index convention, used everywhere in this package: variable ``x_i``
(1-based) maps to bit ``i-1`` of an integer index.  A point
``(x_1, ..., x_k)`` is stored at position ``sum(x_i << (i-1))`` of a truth
table, and a monomial over the variable subset ``S`` is stored at position
``sum(1 << (i-1) for i in S)`` of a coefficient vector.  Points and subsets
therefore share one bijection with ``range(2**k)`` and never need
transposing against each other.

Functions are elements of the quotient ring F2[x_1..x_k] / (x_i^2 - x_i),
i.e. every function has a unique multilinear polynomial (its algebraic
normal form); ``tt_to_anf`` / ``anf_to_tt`` convert between the two
representations and are inverse to each other.
"""

from functools import lru_cache

from .errors import CapacityError

SOFT_ARITY_CAP = 5
HARD_ARITY_CAP = 16


def _check_arity(arity, allow_big):
    if arity < 0:
        raise ValueError(f"arity must be nonnegative, got {arity}")
    if arity > HARD_ARITY_CAP:
        raise CapacityError(
            f"arity {arity} exceeds the hard cap of {HARD_ARITY_CAP}",
            arity=arity,
        )
    if arity > SOFT_ARITY_CAP and not allow_big:
        raise CapacityError(
            f"arity {arity} exceeds the soft cap of {SOFT_ARITY_CAP}; "
            "pass allow_big=True to override",
            arity=arity,
        )


def _check_bits(seq, what):
    for v in seq:
        if v not in (0, 1):
            raise ValueError(f"{what} must contain only 0/1, got {v!r}")


def point_to_index(point):
    """Map a point (bit vector ``x_1..x_k``) to its table index."""
    idx = 0
    for i, bit in enumerate(point):
        idx |= bit << i
    return idx


def index_to_point(arity, index):
    """Inverse of :func:`point_to_index`."""
    return tuple((index >> i) & 1 for i in range(arity))


def subset_to_index(subset):
    """Map a variable subset (iterable of 1-based ids) to its mask index."""
    idx = 0
    for i in subset:
        idx |= 1 << (i - 1)
    return idx


def index_to_subset(index):
    """Inverse of :func:`subset_to_index`, as a frozenset of 1-based ids."""
    out = []
    i = 1
    while index:
        if index & 1:
            out.append(i)
        index >>= 1
        i += 1
    return frozenset(out)


class TruthTable:
    """Value vector of a Boolean function on ``arity`` ordered inputs.

    Parameters
    ----------
    arity : int
        Number of inputs k (0 allowed; constants have a 1-entry table).
    values : sequence of 0/1, length 2**arity
        values[m] is the function value at the point indexed by m.
    allow_big : bool
        Permit arities above the soft cap of 5, up to the hard cap of 16.

    Instances are immutable after construction and safe to share.
    """

    __slots__ = ("arity", "values", "_bits")

    def __init__(self, arity, values, allow_big=False):
        _check_arity(arity, allow_big)
        values = tuple(values)
        if len(values) != 1 << arity:
            raise ValueError(
                f"expected {1 << arity} values for arity {arity}, got {len(values)}"
            )
        _check_bits(values, "truth table values")
        self.arity = arity
        self.values = values
        self._bits = sum(v << m for m, v in enumerate(values))

    @classmethod
    def from_int(cls, arity, bits, allow_big=False):
        """Build a table from its packed integer (bit m = value at index m)."""
        if not 0 <= bits < 1 << (1 << arity):
            raise ValueError(f"packed value {bits} out of range for arity {arity}")
        return cls(arity, [(bits >> m) & 1 for m in range(1 << arity)], allow_big)

    def to_int(self):
        """Packed integer representation; bit m holds values[m]."""
        return self._bits

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.arity == other.arity and self._bits == other._bits

    def __hash__(self):
        return hash((self.arity, self._bits))

    def __repr__(self):
        return f"TruthTable(arity={self.arity}, values={list(self.values)})"


class CoeffVector:
    """Algebraic normal form coefficients, indexed by variable subsets.

    coeffs[m] is the coefficient of the monomial over the subset whose
    characteristic bit vector is m (m = 0 is the constant term).
    """

    __slots__ = ("arity", "coeffs", "_bits")

    def __init__(self, arity, coeffs, allow_big=False):
        _check_arity(arity, allow_big)
        coeffs = tuple(coeffs)
        if len(coeffs) != 1 << arity:
            raise ValueError(
                f"expected {1 << arity} coefficients for arity {arity}, got {len(coeffs)}"
            )
        _check_bits(coeffs, "ANF coefficients")
        self.arity = arity
        self.coeffs = coeffs
        self._bits = sum(v << m for m, v in enumerate(coeffs))

    @classmethod
    def from_int(cls, arity, bits, allow_big=False):
        if not 0 <= bits < 1 << (1 << arity):
            raise ValueError(f"packed value {bits} out of range for arity {arity}")
        return cls(arity, [(bits >> m) & 1 for m in range(1 << arity)], allow_big)

    def to_int(self):
        return self._bits

    def __eq__(self, other):
        if not isinstance(other, CoeffVector):
            return NotImplemented
        return self.arity == other.arity and self._bits == other._bits

    def __hash__(self):
        return hash((self.arity, self._bits))

    def __repr__(self):
        return f"CoeffVector(arity={self.arity}, coeffs={list(self.coeffs)})"


@lru_cache(maxsize=None)
def _lane_masks(arity):
    # _lane_masks(k)[i] has bit m set iff index-bit i of m is clear.
    masks = []
    for i in range(arity):
        m = 0
        for idx in range(1 << arity):
            if not (idx >> i) & 1:
                m |= 1 << idx
        masks.append(m)
    return tuple(masks)


@lru_cache(maxsize=None)
def variable_masks(arity):
    """variable_masks(k)[j] has bit m set iff point m has x_{j+1} = 1."""
    full = (1 << (1 << arity)) - 1
    return tuple(full ^ lane for lane in _lane_masks(arity))


def xor_transform(bits, arity):
    """Subset-XOR transform on a packed 2**arity-bit vector.

    Sends t to c with c[m] = XOR of t over all submasks of m.  Over F2 the
    transform is its own inverse, so it serves as both the analysis
    (table -> ANF) and synthesis (ANF -> table) direction.
    """
    full = (1 << (1 << arity)) - 1
    for i, lane in enumerate(_lane_masks(arity)):
        bits ^= (bits & lane) << (1 << i)
        bits &= full
    return bits


def tt_to_anf(table):
    """Algebraic normal form of a truth table.

    Returns the unique coefficient vector c with, for every point x,
    XOR over subsets S of support(x) of c_S equal to table(x).
    """
    return CoeffVector.from_int(
        table.arity, xor_transform(table.to_int(), table.arity), allow_big=True
    )


def anf_to_tt(coeffs):
    """Evaluate an ANF at every point; inverse of :func:`tt_to_anf`."""
    return TruthTable.from_int(
        coeffs.arity, xor_transform(coeffs.to_int(), coeffs.arity), allow_big=True
    )


def evaluate(table, point):
    """Value of the function at one point (bit vector of length arity)."""
    point = tuple(point)
    if len(point) != table.arity:
        raise ValueError(
            f"point has length {len(point)}, expected {table.arity}"
        )
    _check_bits(point, "point")
    return table.values[point_to_index(point)]


def essential_vars(table):
    """Variables the function actually depends on, as 1-based ids.

    Variable i is essential iff flipping coordinate i changes the value at
    some point.
    """
    bits = table.to_int()
    out = []
    for i, lane in enumerate(_lane_masks(table.arity)):
        shifted = (bits >> (1 << i)) & lane
        if (bits & lane) != shifted:
            out.append(i + 1)
    return frozenset(out)


def anf_string(coeffs):
    """Render an ANF as '+'-joined monomials, e.g. ``1 + x1 + x1*x3``.

    Monomials are ordered by degree, then lexicographically by variable
    ids; variables inside a monomial appear in increasing order.  The zero
    polynomial renders as ``0``.  Output is deterministic.
    """
    monomials = []
    for mask in range(1 << coeffs.arity):
        if coeffs.coeffs[mask]:
            monomials.append(sorted(index_to_subset(mask)))
    if not monomials:
        return "0"
    monomials.sort(key=lambda vs: (len(vs), vs))
    return " + ".join(
        "*".join(f"x{i}" for i in vs) if vs else "1" for vs in monomials
    )


def parse_anf(text, arity, allow_big=False):
    """Parse the output format of :func:`anf_string` back to coefficients.

    Accepts monomials joined by '+', each either ``1`` or ``*``-joined
    variables ``x<i>`` with 1 <= i <= arity.  Repeated variables in a
    monomial or repeated monomials are rejected rather than reduced, so a
    typo cannot silently cancel.  ``0`` denotes the zero polynomial.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial string")
    coeffs = [0] * (1 << arity)
    if text == "0":
        return CoeffVector(arity, coeffs, allow_big)
    for term in text.split("+"):
        term = term.strip()
        if term == "1":
            mask = 0
        else:
            mask = 0
            for factor in term.split("*"):
                factor = factor.strip()
                if not factor.startswith("x"):
                    raise ValueError(f"bad monomial factor {factor!r}")
                try:
                    i = int(factor[1:])
                except ValueError:
                    raise ValueError(f"bad monomial factor {factor!r}") from None
                if not 1 <= i <= arity:
                    raise ValueError(
                        f"variable x{i} out of range for arity {arity}"
                    )
                bit = 1 << (i - 1)
                if mask & bit:
                    raise ValueError(f"repeated variable x{i} in {term!r}")
                mask |= bit
        if coeffs[mask]:
            raise ValueError(f"repeated monomial {term!r}")
        coeffs[mask] = 1
    return CoeffVector(arity, coeffs, allow_big)

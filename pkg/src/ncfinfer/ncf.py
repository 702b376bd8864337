"""Nested canalyzing functions: cascade forms, recognition, enumeration.

A function is nested canalyzing when its inputs can be tested in a fixed
order so that each test, when it receives its canalyzing value, forces the
output regardless of every later input.  Two equivalent characterizations
are implemented side by side and cross-validate each other:

* the cascade form (a test order plus per-layer canalyzing input and
  canalyzed output values), turned into a truth table by
  :func:`ncf_from_form`;
* a closed-form criterion on the ANF coefficients
  (:func:`is_ncf_wrt`), which needs no search over input/output values.

Recognition of an arbitrary truth table searches test orders against the
coefficient criterion; at the supported arities (k <= 5) that is at most
120 cheap checks.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .boolfun import (
    SOFT_ARITY_CAP,
    TruthTable,
    anf_string,
    tt_to_anf,
    variable_masks,
)
from .errors import CapacityError

__all__ = [
    "NcfForm",
    "NcfSet",
    "ncf_from_form",
    "completion",
    "is_ncf_wrt",
    "is_ncf",
    "enumerate_ncfs",
    "ncf_forms_of",
]


@dataclass(frozen=True)
class NcfForm:
    """Cascade description of a nested canalyzing function.

    order[i] is the (1-based) variable tested at layer i+1; inputs[i] is
    its canalyzing value and outputs[i] the output it forces.  When no
    layer fires, the function takes the complement of outputs[-1].
    """

    order: tuple
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        k = len(self.order)
        if k == 0:
            raise ValueError("a cascade needs at least one layer")
        if sorted(self.order) != list(range(1, k + 1)):
            raise ValueError(f"order {self.order} is not a permutation of 1..{k}")
        if len(self.inputs) != k or len(self.outputs) != k:
            raise ValueError("inputs and outputs must have one entry per layer")
        for v in self.inputs + self.outputs:
            if v not in (0, 1):
                raise ValueError("canalyzing inputs and outputs must be 0/1")

    @property
    def arity(self):
        return len(self.order)


def ncf_from_form(form):
    """Truth table of a cascade form.

    At each point the layers are scanned in order; the first variable that
    equals its canalyzing input decides the value.  If every variable
    misses, the value is the complement of the last layer's output.
    """
    k = form.arity
    values = []
    for idx in range(1 << k):
        for var, a, b in zip(form.order, form.inputs, form.outputs):
            if (idx >> (var - 1)) & 1 == a:
                values.append(b)
                break
        else:
            values.append(1 - form.outputs[-1])
    return TruthTable(k, values, allow_big=True)


def _form_table_int(k, order0, a_bits, b_bits, varmasks, full):
    # Bit-parallel ncf_from_form: order0 is 0-based, a/b packed as ints.
    table = 0
    undecided = full
    for layer, var in enumerate(order0):
        hit = varmasks[var] if (a_bits >> layer) & 1 else full ^ varmasks[var]
        hit &= undecided
        if (b_bits >> layer) & 1:
            table |= hit
        undecided &= ~hit
    if not (b_bits >> (k - 1)) & 1:
        table |= undecided
    return table


def completion(subset, order):
    """Prefix of the test order ending at the latest tested member of subset.

    Returns {order[0], ..., order[r-1]} where r is the largest layer whose
    variable lies in ``subset``.  Empty subsets have no completion.
    """
    subset = frozenset(subset)
    if not subset:
        raise ValueError("completion is undefined for the empty subset")
    order = tuple(order)
    k = len(order)
    if sorted(order) != list(range(1, k + 1)):
        raise ValueError(f"order {order} is not a permutation of 1..{k}")
    if not subset <= set(order):
        raise ValueError(f"subset {sorted(subset)} not within variables 1..{k}")
    r = max(i for i, var in enumerate(order) if var in subset)
    return frozenset(order[: r + 1])


@lru_cache(maxsize=None)
def _criterion_constraints(order):
    """Per-subset constraint data for the coefficient criterion.

    For each nonempty proper subset mask S, yields (S, completion mask,
    masks of the full set minus each completed-but-missing variable).  The
    coefficient of S must equal the coefficient of its completion times
    the product of the coefficients at those near-full masks.
    """
    k = len(order)
    full = (1 << k) - 1
    layer_of = {var: i for i, var in enumerate(order)}
    prefix = []
    acc = 0
    for var in order:
        acc |= 1 << (var - 1)
        prefix.append(acc)
    out = []
    for s_mask in range(1, full):
        r = max(
            layer_of[i + 1] for i in range(k) if (s_mask >> i) & 1
        )
        comp = prefix[r]
        factors = tuple(
            full ^ (1 << (var - 1))
            for var in order[: r + 1]
            if not (s_mask >> (var - 1)) & 1
        )
        out.append((s_mask, comp, factors))
    return tuple(out)


def is_ncf_wrt(coeffs, order):
    """Coefficient criterion: is this ANF nested canalyzing in this order?

    True iff the full-set coefficient is 1 and, for every nonempty proper
    subset, the subset's coefficient equals its completion's coefficient
    times the near-full coefficients of the variables completed over.  The
    constant term is unconstrained.
    """
    k = coeffs.arity
    order = tuple(order)
    if sorted(order) != list(range(1, k + 1)):
        raise ValueError(f"order {order} is not a permutation of 1..{k}")
    if k == 0:
        return False
    c = coeffs.to_int()
    full = (1 << k) - 1
    if not (c >> full) & 1:
        return False
    for s_mask, comp, factors in _criterion_constraints(order):
        rhs = (c >> comp) & 1
        for f in factors:
            if not rhs:
                break
            rhs &= (c >> f) & 1
        if ((c >> s_mask) & 1) != rhs:
            return False
    return True


def is_ncf(table):
    """Is the function nested canalyzing in at least one test order?

    The coefficient criterion already forces dependence on all inputs
    (the full-set coefficient must be 1), so constants and functions with
    inessential variables are rejected without a special case.
    """
    if table.arity == 0:
        return False
    coeffs = tt_to_anf(table)
    return any(
        is_ncf_wrt(coeffs, order)
        for order in itertools.permutations(range(1, table.arity + 1))
    )


class NcfSet:
    """Deduplicated set of nested canalyzing truth tables of one arity.

    Members are kept in ascending truth-table integer order so that
    iteration, export, and set comparisons are deterministic regardless of
    how the set was produced.  When available, a witness cascade form is
    kept per member (the first form generating it in lexicographic
    (order, inputs, outputs) generation order).
    """

    __slots__ = ("arity", "members", "_int_set", "_witness")

    def __init__(self, arity, members, witness=None):
        self.arity = arity
        members = sorted(set(members), key=lambda t: t.to_int())
        for t in members:
            if t.arity != arity:
                raise ValueError("all members must share the set's arity")
        self.members = tuple(members)
        self._int_set = frozenset(t.to_int() for t in self.members)
        self._witness = dict(witness) if witness else {}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, table):
        return table.arity == self.arity and table.to_int() in self._int_set

    def __eq__(self, other):
        if not isinstance(other, NcfSet):
            return NotImplemented
        return self.arity == other.arity and self._int_set == other._int_set

    def __hash__(self):
        return hash((self.arity, self._int_set))

    def __repr__(self):
        return f"NcfSet(arity={self.arity}, size={len(self.members)})"

    def filtered(self, keep):
        """Subset of members passing ``keep``; witnesses are carried over."""
        kept = [t for t in self.members if keep(t)]
        wit = {
            t.to_int(): self._witness[t.to_int()]
            for t in kept
            if t.to_int() in self._witness
        }
        return NcfSet(self.arity, kept, wit)

    def witness(self, table):
        """One cascade form generating ``table``, or None if unknown."""
        if table not in self:
            raise KeyError(f"{table!r} is not a member")
        w = self._witness.get(table.to_int())
        if w is None:
            forms = ncf_forms_of(table)
            w = forms[0] if forms else None
        return w

    def anf_lines(self):
        """Canonical ANF strings, one per member, in member order."""
        return [anf_string(tt_to_anf(t)) for t in self.members]

    def json_records(self):
        """JSON-ready records: table integer, ANF, and one witness form."""
        records = []
        for t in self.members:
            w = self.witness(t)
            records.append(
                {
                    "table": t.to_int(),
                    "anf": anf_string(tt_to_anf(t)),
                    "witness_form": None
                    if w is None
                    else {
                        "order": list(w.order),
                        "inputs": list(w.inputs),
                        "outputs": list(w.outputs),
                    },
                }
            )
        return records


def _iter_form_ints(k):
    # Yields (table int, 0-based order, a bits, b bits) over all cascade
    # forms in lexicographic (order, inputs, outputs) generation order.
    varmasks = variable_masks(k)
    full = (1 << (1 << k)) - 1
    for order0 in itertools.permutations(range(k)):
        for a_bits in range(1 << k):
            for b_bits in range(1 << k):
                yield (
                    _form_table_int(k, order0, a_bits, b_bits, varmasks, full),
                    order0,
                    a_bits,
                    b_bits,
                )


_ENUM_CACHE = {}


def enumerate_ncfs(k, allow_big=False):
    """All nested canalyzing functions on exactly k inputs.

    Generates every cascade form (k! orders times 2^k canalyzing inputs
    times 2^k canalyzed outputs) and deduplicates the resulting truth
    tables.  Every member depends on all k variables; no separate filter
    is needed because a cascade always does.
    """
    if k == 0:
        raise ValueError("there are no nested canalyzing functions on 0 inputs")
    if k > SOFT_ARITY_CAP and not allow_big:
        raise CapacityError(
            f"enumerating NCFs on {k} inputs needs allow_big=True "
            f"(soft cap is {SOFT_ARITY_CAP})",
            arity=k,
        )
    if k in _ENUM_CACHE:
        return _ENUM_CACHE[k]
    witness = {}
    for bits, order0, a_bits, b_bits in _iter_form_ints(k):
        if bits not in witness:
            witness[bits] = NcfForm(
                tuple(v + 1 for v in order0),
                tuple((a_bits >> i) & 1 for i in range(k)),
                tuple((b_bits >> i) & 1 for i in range(k)),
            )
    members = [
        TruthTable.from_int(k, bits, allow_big=allow_big) for bits in witness
    ]
    result = NcfSet(k, members, witness)
    if k <= 5:
        _ENUM_CACHE[k] = result
    return result


def ncf_forms_of(table):
    """All cascade forms generating ``table``; empty iff it is not an NCF.

    Scans every form of the table's arity, so intended for diagnostics and
    witness recovery, not bulk enumeration.
    """
    k = table.arity
    if k == 0:
        return []
    target = table.to_int()
    out = []
    for bits, order0, a_bits, b_bits in _iter_form_ints(k):
        if bits == target:
            out.append(
                NcfForm(
                    tuple(v + 1 for v in order0),
                    tuple((a_bits >> i) & 1 for i in range(k)),
                    tuple((b_bits >> i) & 1 for i in range(k)),
                )
            )
    return out

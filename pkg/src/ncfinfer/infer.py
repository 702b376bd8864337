"""Per-node inference of all nested canalyzing functions fitting a time course.

The wiring diagram fixes each node's regulators; consecutive rows of a
time course give global (state, next state) transitions.  Restricting each
transition to a node's regulators yields that node's local data, and the
node's answer is simply the set of nested canalyzing functions on its
regulators that agree with every local pair.  Inference is per node
because the space of whole-network models is the product of the per-node
spaces.
"""

import itertools
from dataclasses import dataclass
from math import prod

from .boolfun import TruthTable
from .errors import CapacityError, InconsistentDataError
from .modelspace import LocalData, _fits_int, fits, interpolant, model_space_size
from .ncf import NcfForm, NcfSet, enumerate_ncfs, ncf_from_form

IN_DEGREE_CAP = 5

__all__ = [
    "WiringDiagram",
    "TimeCourse",
    "NodeInference",
    "InferenceResult",
    "local_data",
    "infer_ncfs",
    "near_misses",
    "infer_all",
    "count_models",
    "cross_check",
]


class WiringDiagram:
    """Directed regulator -> target structure over named nodes.

    ``regulators[i]`` lists the indices of the nodes feeding node i; the
    list order fixes the input order of node i's local function (the j-th
    regulator is the function's j-th variable).
    """

    __slots__ = ("nodes", "regulators")

    def __init__(self, nodes, regulators, allow_big=False):
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node names in wiring diagram")
        if len(regulators) != len(nodes):
            raise ValueError("need exactly one regulator list per node")
        regs = []
        for i, lst in enumerate(regulators):
            lst = tuple(lst)
            if len(set(lst)) != len(lst):
                raise ValueError(f"duplicate regulators for node {nodes[i]!r}")
            for r in lst:
                if not 0 <= r < len(nodes):
                    raise ValueError(
                        f"regulator index {r} of node {nodes[i]!r} out of range"
                    )
            if len(lst) > IN_DEGREE_CAP and not allow_big:
                raise CapacityError(
                    f"node {nodes[i]!r} has {len(lst)} regulators, "
                    f"above the cap of {IN_DEGREE_CAP}; pass allow_big=True to override",
                    node=nodes[i],
                )
            regs.append(lst)
        self.nodes = nodes
        self.regulators = tuple(regs)

    def index(self, name):
        try:
            return self.nodes.index(name)
        except ValueError:
            raise KeyError(f"unknown node {name!r}") from None

    @property
    def in_degrees(self):
        return tuple(len(r) for r in self.regulators)

    def regulator_names(self, i):
        return tuple(self.nodes[r] for r in self.regulators[i])

    def __repr__(self):
        return f"WiringDiagram(nodes={len(self.nodes)})"


class TimeCourse:
    """Consecutive global states; rows t and t+1 form one transition pair."""

    __slots__ = ("nodes", "rows")

    def __init__(self, nodes, rows):
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node names in time course")
        rows = tuple(tuple(r) for r in rows)
        if len(rows) < 2:
            raise ValueError("a time course needs at least 2 rows")
        for t, row in enumerate(rows):
            if len(row) != len(nodes):
                raise ValueError(
                    f"row {t + 1} has {len(row)} entries, expected {len(nodes)}"
                )
            for v in row:
                if v not in (0, 1):
                    raise ValueError(f"row {t + 1} contains non-binary value {v!r}")
        self.nodes = nodes
        self.rows = rows

    def __repr__(self):
        return f"TimeCourse(nodes={len(self.nodes)}, rows={len(self.rows)})"


def _as_courses(timecourses):
    if isinstance(timecourses, TimeCourse):
        return (timecourses,)
    courses = tuple(timecourses)
    if not courses:
        raise ValueError("need at least one time course")
    return courses


def _column_map(wiring, course):
    """Wiring node index -> time-course column, reconciled by name."""
    cols = {name: j for j, name in enumerate(course.nodes)}
    missing = [n for n in wiring.nodes if n not in cols]
    if missing:
        raise ValueError(f"time course lacks columns for nodes {missing}")
    extra = [n for n in course.nodes if n not in wiring.nodes]
    if extra:
        raise ValueError(f"time course has columns for unknown nodes {extra}")
    return [cols[n] for n in wiring.nodes]


def states_as_ints(wiring, course):
    """Course rows as state integers (wiring node i at bit i)."""
    colmap = _column_map(wiring, course)
    return tuple(
        sum(row[colmap[i]] << i for i in range(len(wiring.nodes)))
        for row in course.rows
    )


def local_data(wiring, timecourses, node):
    """Transitions restricted to one node: (regulator values, next value).

    Pairs never straddle a course boundary.  Duplicate pairs collapse;
    contradictory pairs raise :class:`InconsistentDataError` naming the
    node, the clashing input pattern, and the two transitions involved.
    """
    courses = _as_courses(timecourses)
    regs = wiring.regulators[node]
    name = wiring.nodes[node]
    seen = {}
    pairs = []
    for ci, course in enumerate(courses):
        colmap = _column_map(wiring, course)
        reg_cols = [colmap[r] for r in regs]
        node_col = colmap[node]
        for t in range(len(course.rows) - 1):
            inp = tuple(course.rows[t][c] for c in reg_cols)
            out = course.rows[t + 1][node_col]
            if inp in seen:
                prev_out, prev_ci, prev_t = seen[inp]
                if prev_out != out:
                    raise InconsistentDataError(
                        f"node {name!r}: input {inp} maps to {prev_out} at "
                        f"course {prev_ci + 1} row {prev_t + 1} but to {out} at "
                        f"course {ci + 1} row {t + 1}",
                        node=name,
                        input=list(inp),
                        first_transition=[prev_ci + 1, prev_t + 1],
                        second_transition=[ci + 1, t + 1],
                    )
            else:
                seen[inp] = (out, ci, t)
                pairs.append((inp, out))
    return LocalData(len(regs), pairs)


def infer_ncfs(wiring, timecourses, node):
    """All nested canalyzing functions on the node's regulators fitting its data."""
    data = local_data(wiring, timecourses, node)
    candidates = enumerate_ncfs(data.arity)
    return candidates.filtered(lambda t: _fits_int(t.to_int(), data))


def _embed(sub_bits, positions, arity):
    # Truth table on `arity` inputs that copies a smaller function read off
    # the variables at 1-based `positions` (ascending).
    bits = 0
    for idx in range(1 << arity):
        sub_idx = 0
        for j, pos in enumerate(positions):
            sub_idx |= ((idx >> (pos - 1)) & 1) << j
        bits |= ((sub_bits >> sub_idx) & 1) << idx
    return bits


def near_misses(wiring, timecourses, node):
    """Fitting functions that are canalyzing cascades on too few regulators.

    Returns (table, essential variable ids) pairs for every function that
    fits the node's data and is nested canalyzing on a proper nonempty
    subset of the declared regulators, plus fitting constants (essential
    set empty).  These are exactly the candidates excluded from
    :func:`infer_ncfs` by the depends-on-all-regulators requirement.
    """
    data = local_data(wiring, timecourses, node)
    k = data.arity
    found = {}
    for const_bits in (0, (1 << (1 << k)) - 1):
        if _fits_int(const_bits, data):
            found[const_bits] = frozenset()
    for size in range(1, k):
        for positions in itertools.combinations(range(1, k + 1), size):
            for sub in enumerate_ncfs(size):
                bits = _embed(sub.to_int(), positions, k)
                if _fits_int(bits, data):
                    found[bits] = frozenset(positions)
    return [
        (TruthTable.from_int(k, bits, allow_big=True), ess)
        for bits, ess in sorted(found.items())
    ]


@dataclass(frozen=True)
class NodeInference:
    """Everything inferred for one node."""

    name: str
    regulators: tuple
    data: LocalData
    space_size: int
    ncfs: NcfSet
    near_misses: tuple

    @property
    def forced(self):
        """The unique fitting function, when the data determines it fully."""
        return interpolant(self.data) if self.space_size == 1 else None


@dataclass(frozen=True)
class InferenceResult:
    """Per-node inference plus the inputs it came from."""

    wiring: WiringDiagram
    courses: tuple
    nodes: tuple

    @property
    def model_count(self):
        return count_models(self)

    def node(self, name):
        for rec in self.nodes:
            if rec.name == name:
                return rec
        raise KeyError(f"no inference record for node {name!r}")

    def trajectories(self):
        """Course rows as state integers, one tuple per course."""
        return tuple(states_as_ints(self.wiring, c) for c in self.courses)


def infer_all(wiring, timecourses, only=None):
    """Run inference for every node (or one named node) of the wiring."""
    courses = _as_courses(timecourses)
    indices = range(len(wiring.nodes))
    if only is not None:
        indices = [wiring.index(only)]
    records = []
    for i in indices:
        data = local_data(wiring, courses, i)
        records.append(
            NodeInference(
                name=wiring.nodes[i],
                regulators=wiring.regulator_names(i),
                data=data,
                space_size=model_space_size(data),
                ncfs=infer_ncfs(wiring, courses, i),
                near_misses=tuple(near_misses(wiring, courses, i)),
            )
        )
    return InferenceResult(wiring, courses, tuple(records))


def count_models(result):
    """Number of whole-network models: product of per-node NCF counts.

    A node with no fitting nested canalyzing function makes this zero.
    """
    return prod(len(rec.ncfs) for rec in result.nodes)


def cross_check(wiring, timecourses, node):
    """Compare two independent inference routes for one node.

    Route one filters the cached bit-parallel enumeration; route two
    evaluates every cascade form pointwise and keeps the fitting tables.
    Both must produce the same set.
    """
    data = local_data(wiring, timecourses, node)
    route_enum = {
        t.to_int() for t in enumerate_ncfs(data.arity) if _fits_int(t.to_int(), data)
    }
    route_forms = set()
    k = data.arity
    for order in itertools.permutations(range(1, k + 1)):
        for a in itertools.product((0, 1), repeat=k):
            for b in itertools.product((0, 1), repeat=k):
                table = ncf_from_form(NcfForm(order, a, b))
                if fits(table, data):
                    route_forms.add(table.to_int())
    return route_enum == route_forms

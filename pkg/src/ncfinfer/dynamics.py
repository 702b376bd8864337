"""Synchronous phase-space analysis and ensemble statistics.

A Boolean network updates every node at once, so its phase space is a
functional graph on the 2^n global states: each state has exactly one
successor, every weakly connected component contains exactly one cycle
(its attractor), and a component coincides with the basin of attraction of
that cycle.

Phase spaces are computed fully (capped at n <= 24 nodes) with flat
numpy arrays: the successor map comes from per-node lookup tables, landing
states on the attractor cycles come from pointer doubling, and components
follow by labeling each cycle.  Ensemble sampling draws each node's local
function independently and uniformly from its candidate set; every sample
uses its own deterministically derived generator, so results are
bit-identical for a given seed no matter how samples are scheduled.
"""

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .boolfun import evaluate, point_to_index
from .errors import CapacityError, ConfigurationError, InvariantViolation
from .modelspace import ModelSpace

PHASE_SPACE_CAP = 24  # network size; 2^24 states keeps arrays under ~256 MB
HISTOGRAM_BINS = 32

__all__ = [
    "BooleanNetwork",
    "PhaseSpace",
    "EnsembleStats",
    "step",
    "phase_space",
    "attractors",
    "trajectory_component_size",
    "sample_ensemble",
]


class BooleanNetwork:
    """A wiring diagram plus one local truth table per node.

    Table i consumes the values of node i's regulators, in regulator-list
    order (the j-th regulator feeds the table's j-th input).
    """

    __slots__ = ("wiring", "tables")

    def __init__(self, wiring, tables):
        tables = tuple(tables)
        if len(tables) != len(wiring.nodes):
            raise ValueError("need exactly one local function per node")
        for i, t in enumerate(tables):
            if t.arity != len(wiring.regulators[i]):
                raise ValueError(
                    f"node {wiring.nodes[i]!r} has {len(wiring.regulators[i])} "
                    f"regulators but a local function of arity {t.arity}"
                )
        self.wiring = wiring
        self.tables = tables

    @property
    def size(self):
        return len(self.wiring.nodes)


def step(network, state):
    """Successor of one global state (bit vector in wiring node order)."""
    state = tuple(state)
    if len(state) != network.size:
        raise ValueError(
            f"state has length {len(state)}, expected {network.size}"
        )
    return tuple(
        evaluate(table, [state[r] for r in regs])
        for table, regs in zip(network.tables, network.wiring.regulators)
    )


@dataclass(frozen=True)
class PhaseSpace:
    """Complete synchronous dynamics of one network.

    successor[m] is the next state of state m; component_of[m] labels m's
    weakly connected component; attractors[c] is component c's unique
    cycle, rotated to start at its smallest state.  Components are
    numbered by ascending smallest cycle state.
    """

    n: int
    successor: np.ndarray
    component_of: np.ndarray
    component_sizes: tuple
    attractors: tuple

    @property
    def component_count(self):
        return len(self.component_sizes)

    def component_members(self, label):
        """All states of one component, ascending."""
        return np.flatnonzero(self.component_of == label)


class _WiringKernel:
    """Precomputed per-node local-input indices for all 2^n states.

    Depends only on the wiring, so one kernel serves every network sampled
    on it.
    """

    def __init__(self, wiring):
        n = len(wiring.nodes)
        if n > PHASE_SPACE_CAP:
            raise CapacityError(
                f"phase space of {n} nodes exceeds the cap of {PHASE_SPACE_CAP}",
                nodes=n,
            )
        if n == 0:
            raise ValueError("cannot analyze an empty network")
        states = np.arange(1 << n, dtype=np.uint32)
        self.n = n
        self.local_index = []
        for regs in wiring.regulators:
            idx = np.zeros(1 << n, dtype=np.uint32)
            for j, r in enumerate(regs):
                idx |= ((states >> np.uint32(r)) & np.uint32(1)) << np.uint32(j)
            self.local_index.append(idx)

    def successor_map(self, tables):
        succ = np.zeros(1 << self.n, dtype=np.uint32)
        for i, table in enumerate(tables):
            lut = np.array(table.values, dtype=np.uint32)
            succ |= lut[self.local_index[i]] << np.uint32(i)
        return succ


def _analyze(succ, n):
    # After n doublings each state has taken 2^n steps, enough to land on
    # its component's cycle.
    land = succ.copy()
    for _ in range(n):
        land = land[land]
    label = np.full(1 << n, -1, dtype=np.int32)
    cycles = []
    for c in np.unique(land).tolist():
        if label[c] >= 0:
            continue
        cycle = []
        cur = c
        while label[cur] < 0:
            label[cur] = len(cycles)
            cycle.append(cur)
            cur = int(succ[cur])
        cycles.append(tuple(cycle))
    component_of = label[land]
    sizes = np.bincount(component_of, minlength=len(cycles))
    return PhaseSpace(
        n=n,
        successor=succ,
        component_of=component_of,
        component_sizes=tuple(int(s) for s in sizes),
        attractors=tuple(cycles),
    )


def phase_space(network):
    """Successor map, components, and attractors of every global state."""
    kernel = _WiringKernel(network.wiring)
    return _analyze(kernel.successor_map(network.tables), kernel.n)


def attractors(space):
    """The attractor cycles, one per component (fixed points have length 1)."""
    return list(space.attractors)


def _as_state_int(n, state):
    if isinstance(state, int):
        if not 0 <= state < 1 << n:
            raise ValueError(f"state {state} out of range for {n} nodes")
        return state
    state = tuple(state)
    if len(state) != n:
        raise ValueError(f"state has length {len(state)}, expected {n}")
    return point_to_index(state)


def trajectory_component_size(space, trajectory):
    """Size of the component holding a trajectory's states.

    The states must all lie in one component; any network whose local
    functions fit the transitions guarantees that, because consecutive
    trajectory states are then successor-linked.
    """
    states = [_as_state_int(space.n, s) for s in trajectory]
    if not states:
        raise ValueError("empty trajectory")
    labels = {int(space.component_of[s]) for s in states}
    if len(labels) > 1:
        raise InvariantViolation(
            "trajectory states fall in different components",
            components=sorted(labels),
        )
    return space.component_sizes[labels.pop()]


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregates over sampled networks on one wiring and data set.

    The histogram counts samples by the size of the component containing
    the reference trajectory, in ``bin_width``-wide bins over [0, 2^n]
    (bin b covers sizes b*width+1 .. (b+1)*width); bins sum to
    sample_count.
    """

    mode: str
    seed: int
    sample_count: int
    mean_components: float
    mean_trajectory_component_size: float
    count_trajectory_not_in_largest: int
    mean_size_when_not_largest: float | None
    bin_width: int
    histogram: tuple
    trajectory_sizes: tuple
    component_counts: tuple

    def as_dict(self):
        return {
            "mode": self.mode,
            "seed": self.seed,
            "sample_count": self.sample_count,
            "mean_components": self.mean_components,
            "mean_trajectory_component_size": self.mean_trajectory_component_size,
            "count_trajectory_not_in_largest": self.count_trajectory_not_in_largest,
            "mean_size_when_not_largest": self.mean_size_when_not_largest,
            "bin_width": self.bin_width,
            "histogram": list(self.histogram),
            "trajectory_sizes": list(self.trajectory_sizes),
            "component_counts": list(self.component_counts),
        }


def _candidate_draw(rec, space, rng, mode):
    if mode == "ncf":
        members = rec.ncfs.members
        if members:
            return members[rng.randrange(len(members))]
        forced = rec.forced
        if forced is not None:
            return forced
        raise ConfigurationError(
            f"node {rec.name!r} has no fitting nested canalyzing function "
            "and its data does not force a unique function",
            node=rec.name,
        )
    if mode == "unrestricted":
        return space.sample(rng)
    raise ValueError(f"unknown sampling mode {mode!r}")


def sample_ensemble(result, samples, seed, mode, threads=None):
    """Statistics over networks drawn from a node-wise uniform ensemble.

    Each sample chooses every node's local function independently and
    uniformly, either from the node's fitting nested canalyzing set (mode
    ``ncf``) or from its whole fitting model space (mode ``unrestricted``).
    A node whose data admits exactly one function contributes that
    function in both modes, even if it is not nested canalyzing; this is
    what makes a data set with a forced constant node sampleable.

    Sample j uses the Mersenne Twister seeded with seed * 2**32 + j and
    draws node by node in wiring order, so output is a pure function of
    (seed, mode, samples, result) and is identical under any thread count.
    The reference trajectory is the first time course.
    """
    if samples <= 0:
        raise ValueError("sample count must be positive")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    kernel = _WiringKernel(result.wiring)
    spaces = [ModelSpace.from_data(rec.data) for rec in result.nodes]
    trajectories = result.trajectories()

    def one_sample(j):
        rng = random.Random((seed << 32) + j)
        tables = [
            _candidate_draw(rec, ms, rng, mode)
            for rec, ms in zip(result.nodes, spaces)
        ]
        space = _analyze(kernel.successor_map(tables), kernel.n)
        # every course must stay inside one component; the first is the
        # reference trajectory the statistics are about
        sizes = [trajectory_component_size(space, t) for t in trajectories]
        return (space.component_count, sizes[0], max(space.component_sizes))

    if threads is None:
        threads = max(1, int(os.environ.get("NCF_THREADS", "1")))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_sample, range(samples)))
    else:
        rows = [one_sample(j) for j in range(samples)]

    comp_counts = tuple(r[0] for r in rows)
    traj_sizes = tuple(r[1] for r in rows)
    not_largest = [size for size, r in zip(traj_sizes, rows) if size < r[2]]
    width = max(1, (1 << kernel.n) // HISTOGRAM_BINS)
    hist = [0] * ((1 << kernel.n) // width)
    for size in traj_sizes:
        hist[(size - 1) // width] += 1
    return EnsembleStats(
        mode=mode,
        seed=seed,
        sample_count=samples,
        mean_components=sum(comp_counts) / samples,
        mean_trajectory_component_size=sum(traj_sizes) / samples,
        count_trajectory_not_in_largest=len(not_largest),
        mean_size_when_not_largest=(
            sum(not_largest) / len(not_largest) if not_largest else None
        ),
        bin_width=width,
        histogram=tuple(hist),
        trajectory_sizes=traj_sizes,
        component_counts=comp_counts,
    )

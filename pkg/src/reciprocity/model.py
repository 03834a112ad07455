"""Domain types for networks of reciprocating agents.

An agent repeatedly acts on each neighbour of an undirected interaction
graph.  The value it sends along a directed edge is a convex combination of
its own anchor (innate kindness, or its own last action), the counterpart's
last action, and the average of everything the neighbourhood last sent it.
This module holds the validated building blocks: agent parameters, the
graph with its directed-edge indexing, and activation schedules.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ReciprocityError(Exception):
    """Base class for every error raised by this package."""


class TooFewAgents(ReciprocityError):
    pass


class SelfLoop(ReciprocityError):
    pass


class DuplicateEdge(ReciprocityError):
    pass


class InvalidEdge(ReciprocityError):
    pass


class DisconnectedGraph(ReciprocityError):
    pass


class AlternatingRequiresTwoAgents(ReciprocityError):
    pass


class InvalidPattern(ReciprocityError):
    pass


class Attitude(enum.Enum):
    """How an agent anchors its reaction: on its kindness, or on its own last action."""

    FIXED = "fixed"
    FLOATING = "floating"


@dataclass(frozen=True)
class AgentSpec:
    """One agent's parameters.

    kindness  -- innate contribution level; also the action at t = 0.
    r         -- weight on the counterpart's last action, in [0, 1].
    r_prime   -- weight on the neighbourhood-average last action, in [0, 1].
    attitude  -- FIXED anchors the remaining weight on kindness,
                 FLOATING anchors it on the agent's own last action.

    Requires r + r_prime <= 1.
    """

    kindness: float
    r: float
    r_prime: float = 0.0
    attitude: Attitude = Attitude.FLOATING

    def __post_init__(self) -> None:
        object.__setattr__(self, "kindness", float(self.kindness))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "r_prime", float(self.r_prime))
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")
        if not 0.0 <= self.r_prime <= 1.0:
            raise ValueError(f"r_prime must lie in [0, 1], got {self.r_prime}")
        if self.r + self.r_prime > 1.0:
            raise ValueError(
                f"r + r_prime must not exceed 1, got {self.r} + {self.r_prime}"
            )

    @property
    def weight_sum(self) -> float:
        return self.r + self.r_prime

    @property
    def effectively_floating(self) -> bool:
        # With r + r_prime == 1 no weight is left for the anchor term, so the
        # fixed and floating update rules coincide.
        return self.attitude is Attitude.FLOATING or self.weight_sum == 1.0

    @property
    def effectively_fixed(self) -> bool:
        return not self.effectively_floating


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    """Connected undirected graph with a stable directed-edge indexing.

    Every undirected edge {i, j} yields the two ordered pairs (i, j) and
    (j, i); all ordered pairs are sorted lexicographically and numbered
    0 .. 2|E|-1.  ``source``/``target``/``reverse_index`` are flat arrays
    over that numbering, precomputed for the simulation kernel.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    directed_edges: tuple[tuple[int, int], ...]
    degrees: tuple[int, ...]
    neighbors: tuple[tuple[int, ...], ...]
    source: np.ndarray = field(repr=False)
    target: np.ndarray = field(repr=False)
    reverse_index: np.ndarray = field(repr=False)
    _index: dict[tuple[int, int], int] = field(repr=False)

    @property
    def directed_count(self) -> int:
        return len(self.directed_edges)

    def edge_index(self, i: int, j: int) -> int:
        try:
            return self._index[(i, j)]
        except KeyError:
            raise InvalidEdge(f"({i}, {j}) is not a directed edge of the graph")

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self._index


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> InteractionGraph:
    """Validate and index an undirected interaction graph.

    Raises TooFewAgents, SelfLoop, DuplicateEdge, InvalidEdge or
    DisconnectedGraph.  Directed indices are lexicographic by (i, j) so that
    repeated builds are deterministic.
    """
    if n < 2:
        raise TooFewAgents(f"need at least 2 agents, got {n}")
    undirected: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for pair in edges:
        if len(pair) != 2:
            raise InvalidEdge(f"edge {pair!r} must have exactly two endpoints")
        i, j = int(pair[0]), int(pair[1])
        if i == j:
            raise SelfLoop(f"agent {i} may not act on itself")
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidEdge(f"edge ({i}, {j}) references an agent outside 0..{n - 1}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed more than once")
        seen.add(key)
        undirected.append(key)
    undirected.sort()

    adjacency: list[set[int]] = [set() for _ in range(n)]
    for i, j in undirected:
        adjacency[i].add(j)
        adjacency[j].add(i)

    reached = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in reached:
                reached.add(w)
                queue.append(w)
    if len(reached) != n:
        missing = sorted(set(range(n)) - reached)
        raise DisconnectedGraph(f"agents {missing} are not reachable from agent 0")

    directed = sorted([(i, j) for i, j in undirected] + [(j, i) for i, j in undirected])
    index = {pair: k for k, pair in enumerate(directed)}
    source = np.array([i for i, _ in directed], dtype=np.intp)
    target = np.array([j for _, j in directed], dtype=np.intp)
    reverse = np.array([index[(j, i)] for i, j in directed], dtype=np.intp)
    return InteractionGraph(
        n=n,
        edges=tuple(undirected),
        directed_edges=tuple(directed),
        degrees=tuple(len(adjacency[i]) for i in range(n)),
        neighbors=tuple(tuple(sorted(adjacency[i])) for i in range(n)),
        source=source,
        target=target,
        reverse_index=reverse,
        _index=index,
    )


def complete_graph(n: int) -> InteractionGraph:
    """Clique on n agents."""
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def pair_graph() -> InteractionGraph:
    """The smallest legal graph: two agents joined by one edge."""
    return build_graph(2, [(0, 1)])


def has_odd_cycle(graph: InteractionGraph) -> bool:
    """True iff the graph is not bipartite (standard two-colouring test)."""
    color = [-1] * graph.n
    color[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in graph.neighbors[v]:
            if color[w] == -1:
                color[w] = 1 - color[v]
                queue.append(w)
            elif color[w] == color[v]:
                return True
    return False


class ScheduleKind(enum.Enum):
    SYNCHRONOUS = "synchronous"
    ALTERNATING = "alternating"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class ActivationSchedule:
    """Which agents act at each time step.

    All agents act at t = 0.  For t > 0: synchronous activates everyone,
    alternating (two agents only) activates agent 0 at even t and agent 1 at
    odd t, and periodic cycles through ``pattern`` with step t reading
    pattern[(t - 1) % len(pattern)].  ``activity_bound`` is the largest gap
    between consecutive activations of any single agent.
    """

    kind: ScheduleKind
    n_agents: int
    pattern: tuple[frozenset[int], ...] = ()
    activity_bound: int = 1

    def __post_init__(self) -> None:
        if self.kind is ScheduleKind.ALTERNATING and self.n_agents != 2:
            raise AlternatingRequiresTwoAgents(
                f"alternating schedules need exactly 2 agents, got {self.n_agents}"
            )

    @staticmethod
    def synchronous(n_agents: int) -> "ActivationSchedule":
        return ActivationSchedule(ScheduleKind.SYNCHRONOUS, n_agents, (), 1)

    @staticmethod
    def alternating() -> "ActivationSchedule":
        return ActivationSchedule(ScheduleKind.ALTERNATING, 2, (), 2)

    @staticmethod
    def periodic(pattern: Sequence[Iterable[int]], n_agents: int) -> "ActivationSchedule":
        if not pattern:
            raise InvalidPattern("periodic pattern must not be empty")
        steps: list[frozenset[int]] = []
        for p, step in enumerate(pattern):
            agents = frozenset(int(a) for a in step)
            if not agents:
                raise InvalidPattern(f"pattern step {p} activates no agent")
            bad = [a for a in agents if not 0 <= a < n_agents]
            if bad:
                raise InvalidPattern(f"pattern step {p} references unknown agents {bad}")
            steps.append(agents)
        length = len(steps)
        bound = 1
        for agent in range(n_agents):
            positions = [p for p, s in enumerate(steps) if agent in s]
            if not positions:
                raise InvalidPattern(f"agent {agent} never acts in the pattern")
            # Activations land at t = 0 and t = p + 1 + m * length for p in positions.
            gaps = [positions[0] + 1]
            gaps += [b - a for a, b in zip(positions, positions[1:])]
            gaps.append(length - positions[-1] + positions[0])
            bound = max(bound, max(gaps))
        return ActivationSchedule(ScheduleKind.PERIODIC, n_agents, tuple(steps), bound)


def activations_at(schedule: ActivationSchedule, t: int) -> frozenset[int]:
    """The set of agents that act at step t (all of them at t = 0)."""
    if t < 0:
        raise ValueError(f"time index must be non-negative, got {t}")
    everyone = frozenset(range(schedule.n_agents))
    if t == 0 or schedule.kind is ScheduleKind.SYNCHRONOUS:
        return everyone
    if schedule.kind is ScheduleKind.ALTERNATING:
        return frozenset({0}) if t % 2 == 0 else frozenset({1})
    return schedule.pattern[(t - 1) % len(schedule.pattern)]


def validate_agents(agents: Sequence[AgentSpec], graph: InteractionGraph) -> None:
    if len(agents) != graph.n:
        raise ValueError(f"got {len(agents)} agent specs for a graph of {graph.n} agents")


def initial_state(agents: Sequence[AgentSpec], graph: InteractionGraph) -> np.ndarray:
    """Action vector at t = 0: every directed edge (i, j) carries kindness_i."""
    validate_agents(agents, graph)
    kindness = np.array([a.kindness for a in agents], dtype=float)
    return kindness[graph.source]

"""Tabu-search improvement of proper colorings, minimizing the color sum.

Two move neighborhoods are used, always preserving properness:

* exchange: pick a connected component (2+ vertices) of the subgraph induced
  by two classes and swap its sides between the classes.  Restricted to one
  class pair these are exactly the classical Kempe-chain interchanges.
* relocate: move a single vertex into any other allocated class containing
  none of its neighbors (possibly an empty class).

The search alternates phases over the two neighborhoods, each phase ending
after a fixed number of consecutive iterations that fail to improve the
call-wide best.  When improvement stalls long enough the best coloring is
perturbed (a third of its largest class is split off into a fresh class) and
the search restarts from the perturbed copy.  One iteration = one applied
move, or one blocked selection when every move is tabu and none aspirates.

Tabu rules: an applied exchange locks its class pair, an applied relocation
locks the (vertex, old class) pair, both for a tenure drawn uniformly from
{0..k-1}; a tabu move is allowed anyway if it would beat the best sum.
Perturbation locks its two touched classes out of both neighborhoods.
Class labels are stable for the whole call: empty classes stay allocated and
the canonical relabeling happens only on the returned coloring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .coloring import Coloring, canonical_relabel, is_proper
from .graph import Graph

EXCHANGE = "exchange"
RELOCATE = "relocate"
BOTH_NEIGHBORHOODS = (EXCHANGE, RELOCATE)


@dataclass
class TabuSearchParams:
    exchange_idle_limit: int = 500
    relocate_idle_limit: int = 1000
    stall_limit: int = 4000
    iteration_budget: int = 10_000

    def __post_init__(self):
        for name in ("exchange_idle_limit", "relocate_idle_limit", "stall_limit", "iteration_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class ExchangeMove:
    """Swap the sides of ``mask`` (one connected component spanning classes
    a and b).  Self-inverse: applying it twice restores the coloring."""

    mask: int
    color_a: int
    color_b: int
    count_a: int
    count_b: int
    delta: int

    def vertices(self) -> tuple[int, ...]:
        out, m = [], self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)


@dataclass(frozen=True)
class RelocateMove:
    """Move ``vertex`` from class ``source`` to class ``target``."""

    vertex: int
    source: int
    target: int
    delta: int


Move = ExchangeMove | RelocateMove


@dataclass
class TabuState:
    """Tabu bookkeeping for one search call.

    ``iteration`` counts completed iterations; an entry with expiry e is
    active for every iteration number <= e.  Fresh state is empty: nothing
    is tabu at the start of a call.
    """

    iteration: int = 0
    pair_until: dict[tuple[int, int], int] = field(default_factory=dict)
    vertex_until: dict[tuple[int, int], int] = field(default_factory=dict)
    class_until: dict[int, int] = field(default_factory=dict)

    def exchange_tabu(self, color_a: int, color_b: int, at: int) -> bool:
        if self.class_until:
            if self.class_until.get(color_a, 0) >= at or self.class_until.get(color_b, 0) >= at:
                return True
        a, b = (color_a, color_b) if color_a < color_b else (color_b, color_a)
        return self.pair_until.get((a, b), 0) >= at

    def relocate_tabu(self, vertex: int, source: int, target: int, at: int) -> bool:
        if self.class_until:
            if self.class_until.get(source, 0) >= at or self.class_until.get(target, 0) >= at:
                return True
        return self.vertex_until.get((vertex, target), 0) >= at


@dataclass
class SearchStats:
    """Optional accumulator: total iterations over the calls it is passed to."""

    iterations: int = 0


def _pair_exchanges(coloring: Coloring, graph: Graph, color_a: int, color_b: int) -> list[ExchangeMove]:
    """All exchange moves between one class pair (a < b)."""
    mask_a = coloring.class_masks[color_a - 1]
    union = mask_a | coloring.class_masks[color_b - 1]
    moves = []
    for comp in graph.component_masks(union):
        if comp & (comp - 1):  # at least two vertices
            count_a = (comp & mask_a).bit_count()
            count_b = comp.bit_count() - count_a
            delta = (color_b - color_a) * (count_a - count_b)
            moves.append(ExchangeMove(comp, color_a, color_b, count_a, count_b, delta))
    return moves


def enumerate_exchange_moves(coloring: Coloring, graph: Graph) -> list[ExchangeMove]:
    """Every exchange move of the coloring, over all class pairs."""
    moves = []
    sizes = coloring.class_sizes
    nonempty = [c for c in range(1, coloring.k + 1) if sizes[c - 1]]
    for i, a in enumerate(nonempty):
        for b in nonempty[i + 1:]:
            moves.extend(_pair_exchanges(coloring, graph, a, b))
    return moves


def enumerate_relocate_moves(coloring: Coloring, graph: Graph) -> list[RelocateMove]:
    """Every relocation move; targets include allocated empty classes."""
    moves = []
    masks = coloring.class_masks
    for v, source in enumerate(coloring.assignment):
        adj = graph.adj_masks[v]
        for target in range(1, coloring.k + 1):
            if target != source and not adj & masks[target - 1]:
                moves.append(RelocateMove(v, source, target, target - source))
    return moves


def select_move(
    moves: Iterable[Move],
    tabu: TabuState,
    best_sum: int,
    current_sum: int,
    rng: random.Random,
) -> Move | None:
    """Minimum-delta move that is not tabu or that aspirates (would beat
    ``best_sum``); ties broken uniformly at random.  None when blocked."""
    at = tabu.iteration + 1
    aspire_gap = best_sum - current_sum
    chosen = None
    best_delta = None
    ties = 0
    for move in moves:
        delta = move.delta
        if best_delta is not None and delta > best_delta:
            continue
        if isinstance(move, RelocateMove):
            is_tabu = tabu.relocate_tabu(move.vertex, move.source, move.target, at)
        else:
            is_tabu = tabu.exchange_tabu(move.color_a, move.color_b, at)
        if is_tabu and delta >= aspire_gap:
            continue
        if best_delta is None or delta < best_delta:
            best_delta = delta
            chosen = move
            ties = 1
        else:
            ties += 1
            if rng.random() * ties < 1.0:
                chosen = move
    return chosen


def apply_move(coloring: Coloring, move: Move, tabu: TabuState, rng: random.Random) -> None:
    """Apply ``move`` and record its tabu entry.

    The move is charged to iteration ``tabu.iteration + 1`` (the caller
    advances the counter); the locked attribute stays tabu for a tenure
    drawn uniformly from {0..k-1} further iterations.
    """
    at = tabu.iteration + 1
    tenure = rng.randrange(coloring.k)
    if isinstance(move, RelocateMove):
        coloring.recolor(move.vertex, move.target)
        tabu.vertex_until[(move.vertex, move.source)] = at + tenure
    else:
        coloring.swap_between(move.mask, move.color_a, move.color_b)
        a, b = move.color_a, move.color_b
        if a > b:
            a, b = b, a
        tabu.pair_until[(a, b)] = at + tenure


def perturb(best: Coloring, tabu: TabuState, rng: random.Random) -> Coloring:
    """Split a third of the largest class of ``best`` into a fresh class.

    Returns the perturbed copy; the source class and the new class are
    locked out of both neighborhoods for a tenure drawn uniformly from
    {0..k} (k counted after allocation, so the draw covers 0..new k - 1).
    """
    c = best.copy()
    sizes = c.class_sizes
    largest = max(range(1, c.k + 1), key=lambda col: sizes[col - 1])
    fresh = c.add_class()
    movers = rng.sample(c.class_members(largest), sizes[largest - 1] // 3)
    for v in movers:
        c.recolor(v, fresh)
    tenure = rng.randrange(c.k)
    expiry = tabu.iteration + tenure
    tabu.class_until[largest] = expiry
    tabu.class_until[fresh] = expiry
    return c


class TabuSearchRun:
    """State of one search call: current coloring, incumbent, caches.

    Keeps a per-vertex table of neighbor counts per class (relocation
    feasibility in O(1)) and a cache of exchange moves per class pair,
    invalidated through per-class version counters, so an iteration only
    recomputes components for pairs touched since they were last scanned.
    """

    def __init__(
        self,
        coloring: Coloring,
        graph: Graph,
        params: TabuSearchParams,
        rng: random.Random,
        validate: bool = False,
        on_improve: Callable[[int, int], None] | None = None,
    ):
        self.graph = graph
        self.params = params
        self.rng = rng
        self.validate = validate
        self.on_improve = on_improve
        self.tabu = TabuState()
        self.best = coloring.copy()
        self.best_sum = coloring.sum
        self.stall = 0
        self._set_current(coloring.copy())

    @property
    def iterations(self) -> int:
        return self.tabu.iteration

    def _set_current(self, coloring: Coloring) -> None:
        """Install a new current coloring and rebuild derived tables."""
        self.current = coloring
        n = self.graph.n
        k = coloring.k
        counts = [[0] * k for _ in range(n)]
        for v in range(n):
            cv = coloring.assignment[v] - 1
            for u in self.graph.adj_lists[v]:
                counts[u][cv] += 1
        self.counts = counts
        self.class_versions = [0] * (k + 1)
        self.pair_cache: dict[tuple[int, int], tuple[int, int, list[ExchangeMove]]] = {}

    def run_phase(self, kind: str, idle_limit: int) -> None:
        """Iterate one neighborhood until ``idle_limit`` consecutive
        iterations fail to improve the call-wide best, or the budget ends."""
        budget = self.params.iteration_budget
        idle = 0
        while idle < idle_limit and self.tabu.iteration < budget:
            at = self.tabu.iteration + 1
            if kind == EXCHANGE:
                move = self._select_exchange(at)
            else:
                move = self._select_relocate(at)
            if self.validate:
                self._check_selection(kind, move)
            if move is not None:
                self._apply(move)
            self.tabu.iteration = at
            if move is not None and self.current.sum < self.best_sum:
                self.best_sum = self.current.sum
                self.best = self.current.copy()
                idle = 0
                self.stall = 0
                if self.on_improve is not None:
                    self.on_improve(self.best_sum, at)
            else:
                idle += 1
                self.stall += 1
            if self.validate:
                self._check_state()

    def perturb_step(self) -> None:
        self._set_current(perturb(self.best, self.tabu, self.rng))
        self.stall = 0

    def _apply(self, move: Move) -> None:
        counts = self.counts
        adj_lists = self.graph.adj_lists
        if isinstance(move, RelocateMove):
            src = move.source - 1
            dst = move.target - 1
            apply_move(self.current, move, self.tabu, self.rng)
            for u in adj_lists[move.vertex]:
                row = counts[u]
                row[src] -= 1
                row[dst] += 1
        else:
            a = move.color_a - 1
            b = move.color_b - 1
            part_a = move.mask & self.current.class_masks[a]
            part_b = move.mask ^ part_a
            apply_move(self.current, move, self.tabu, self.rng)
            m = part_a
            while m:
                low = m & -m
                for u in adj_lists[low.bit_length() - 1]:
                    row = counts[u]
                    row[a] -= 1
                    row[b] += 1
                m ^= low
            m = part_b
            while m:
                low = m & -m
                for u in adj_lists[low.bit_length() - 1]:
                    row = counts[u]
                    row[b] -= 1
                    row[a] += 1
                m ^= low
        self.class_versions[move.color_a if isinstance(move, ExchangeMove) else move.source] += 1
        self.class_versions[move.color_b if isinstance(move, ExchangeMove) else move.target] += 1

    def _select_relocate(self, at: int) -> RelocateMove | None:
        current = self.current
        counts = self.counts
        assignment = current.assignment
        k = current.k
        rng = self.rng
        vertex_until = self.tabu.vertex_until
        class_until = self.tabu.class_until
        class_active = [class_until.get(c, 0) >= at for c in range(k + 1)] if class_until else None
        aspire_gap = self.best_sum - current.sum
        chosen = None
        best_delta = None
        ties = 0
        for v in range(self.graph.n):
            source = assignment[v]
            row = counts[v]
            src_tabu = class_active[source] if class_active else False
            for idx in range(k):
                if row[idx]:
                    continue
                target = idx + 1
                if target == source:
                    continue
                delta = target - source
                if best_delta is not None and delta > best_delta:
                    continue
                is_tabu = (
                    src_tabu
                    or (class_active[target] if class_active else False)
                    or vertex_until.get((v, target), 0) >= at
                )
                if is_tabu and delta >= aspire_gap:
                    continue
                if best_delta is None or delta < best_delta:
                    best_delta = delta
                    chosen = (v, source, target, delta)
                    ties = 1
                else:
                    ties += 1
                    if rng.random() * ties < 1.0:
                        chosen = (v, source, target, delta)
        return RelocateMove(*chosen) if chosen is not None else None

    def _select_exchange(self, at: int) -> ExchangeMove | None:
        current = self.current
        graph = self.graph
        sizes = current.class_sizes
        k = current.k
        rng = self.rng
        pair_until = self.tabu.pair_until
        class_until = self.tabu.class_until
        class_active = [class_until.get(c, 0) >= at for c in range(k + 1)] if class_until else None
        aspire_gap = self.best_sum - current.sum
        versions = self.class_versions
        cache = self.pair_cache
        chosen = None
        best_delta = None
        ties = 0
        nonempty = [c for c in range(1, k + 1) if sizes[c - 1]]
        for i, a in enumerate(nonempty):
            version_a = versions[a]
            a_active = class_active[a] if class_active else False
            for b in nonempty[i + 1:]:
                key = (a, b)
                entry = cache.get(key)
                if entry is None or entry[0] != version_a or entry[1] != versions[b]:
                    moves = _pair_exchanges(current, graph, a, b)
                    cache[key] = (version_a, versions[b], moves)
                else:
                    moves = entry[2]
                if not moves:
                    continue
                pair_tabu = (
                    a_active
                    or (class_active[b] if class_active else False)
                    or pair_until.get(key, 0) >= at
                )
                for move in moves:
                    delta = move.delta
                    if best_delta is not None and delta > best_delta:
                        continue
                    if pair_tabu and delta >= aspire_gap:
                        continue
                    if best_delta is None or delta < best_delta:
                        best_delta = delta
                        chosen = move
                        ties = 1
                    else:
                        ties += 1
                        if rng.random() * ties < 1.0:
                            chosen = move
        return chosen

    def _check_selection(self, kind: str, move: Move | None) -> None:
        """Cross-check the incremental selection against a full enumeration."""
        if kind == EXCHANGE:
            moves = enumerate_exchange_moves(self.current, self.graph)
        else:
            moves = enumerate_relocate_moves(self.current, self.graph)
        reference = select_move(moves, self.tabu, self.best_sum, self.current.sum, random.Random(0))
        if (reference is None) != (move is None):
            raise AssertionError(f"selection blocked mismatch: {reference} vs {move}")
        if move is not None and reference.delta != move.delta:
            raise AssertionError(f"selection delta mismatch: {reference.delta} vs {move.delta}")

    def _check_state(self) -> None:
        current = self.current
        if not is_proper(current, self.graph):
            raise AssertionError("current coloring became improper")
        if current.sum != sum(current.assignment):
            raise AssertionError("cached sum out of sync")
        for v in range(self.graph.n):
            expected = [0] * current.k
            for u in self.graph.adj_lists[v]:
                expected[current.assignment[u] - 1] += 1
            if expected != self.counts[v]:
                raise AssertionError(f"neighbor count table out of sync at vertex {v}")


def tabu_search(
    coloring: Coloring,
    graph: Graph,
    params: TabuSearchParams,
    rng: random.Random,
    neighborhoods: Sequence[str] = BOTH_NEIGHBORHOODS,
    validate: bool = False,
    on_improve: Callable[[int, int], None] | None = None,
    stats: SearchStats | None = None,
) -> Coloring:
    """Improve a proper coloring; returns the canonically relabeled best.

    Runs phases over ``neighborhoods`` in order (restricting the tuple to
    one entry gives the single-neighborhood variants), perturbing whenever
    ``stall_limit`` consecutive iterations pass without improving the best,
    until ``iteration_budget`` total iterations.  The result never has a
    larger sum than the input.
    """
    if not is_proper(coloring, graph):
        raise ValueError("tabu_search requires a proper coloring")
    for kind in neighborhoods:
        if kind not in (EXCHANGE, RELOCATE):
            raise ValueError(f"unknown neighborhood {kind!r}")
    if not neighborhoods:
        raise ValueError("need at least one neighborhood")
    run = TabuSearchRun(coloring, graph, params, rng, validate=validate, on_improve=on_improve)
    limits = {EXCHANGE: params.exchange_idle_limit, RELOCATE: params.relocate_idle_limit}
    while run.iterations < params.iteration_budget:
        for kind in neighborhoods:
            run.run_phase(kind, limits[kind])
        if run.iterations >= params.iteration_budget:
            break
        if run.stall >= params.stall_limit:
            run.perturb_step()
    if stats is not None:
        stats.iterations += run.iterations
    return canonical_relabel(run.best)

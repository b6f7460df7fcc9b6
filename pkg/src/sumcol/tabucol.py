"""Initial proper colorings via TABUCOL-style tabu search.

The downstream optimizer needs a pool of distinct proper colorings that use
few classes.  This module provides the classical recipe: a greedy bound,
then tabu search over improper k-colorings (minimizing the number of
conflicting edges) at decreasing k until the budget stops certifying
feasibility, then repeated runs at the smallest reached k to fill the pool.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .coloring import Coloring, canonical_relabel
from .graph import Graph


class PopulationInitError(RuntimeError):
    """Raised when the requested number of distinct colorings cannot be built."""


@dataclass
class TabucolParams:
    """Knobs for one feasibility attempt at fixed k.

    A recolored vertex may not return to its old class for
    ``tenure_slope * conflicts + uniform{0..tenure_base}`` iterations, with
    ``conflicts`` the conflicting-edge count after the move.
    """

    iteration_budget: int = 100_000
    restarts: int = 3
    tenure_base: int = 9
    tenure_slope: float = 0.6

    def __post_init__(self):
        if self.iteration_budget < 1 or self.restarts < 1:
            raise ValueError("iteration_budget and restarts must be >= 1")
        if self.tenure_base < 0 or self.tenure_slope < 0:
            raise ValueError("tenure parameters must be >= 0")


def greedy_coloring(graph: Graph) -> Coloring:
    """Largest-degree-first greedy: proper, and an upper bound on k."""
    order = sorted(range(graph.n), key=lambda v: (-graph.degree(v), v))
    colors = [0] * graph.n
    masks: list[int] = []
    for v in order:
        adj = graph.adj_masks[v]
        for idx, m in enumerate(masks):
            if not adj & m:
                masks[idx] |= 1 << v
                colors[v] = idx + 1
                break
        else:
            masks.append(1 << v)
            colors[v] = len(masks)
    return Coloring.from_assignment(colors)


def tabucol(graph: Graph, k: int, params: TabucolParams, rng: random.Random) -> Coloring | None:
    """Search for a proper k-coloring; None if none found within budget.

    Runs up to ``params.restarts`` attempts from fresh uniform random
    assignments, each limited to ``params.iteration_budget`` iterations.
    Moves recolor one endpoint of a conflicting edge; the best (fewest
    resulting conflicts) non-tabu move is taken, ties uniformly at random,
    and a tabu move is allowed when it beats the attempt's best.
    """
    n = graph.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    if k == 1:
        # single class: proper iff there is nothing to conflict
        return Coloring.from_assignment([1] * n, k=1) if graph.edge_count == 0 else None
    for _ in range(params.restarts):
        sol = _tabucol_attempt(graph, k, params, rng)
        if sol is not None:
            return sol
    return None


def _tabucol_attempt(graph: Graph, k: int, params: TabucolParams, rng: random.Random) -> Coloring | None:
    n = graph.n
    adj_lists = graph.adj_lists
    colors = [rng.randrange(k) + 1 for _ in range(n)]
    # counts[v][c-1]: neighbors of v currently colored c
    counts = [[0] * k for _ in range(n)]
    for v in range(n):
        cv = colors[v] - 1
        for u in adj_lists[v]:
            counts[u][cv] += 1
    conflicts = sum(counts[v][colors[v] - 1] for v in range(n)) // 2
    if conflicts == 0:
        return Coloring.from_assignment(colors, k=k)
    best = conflicts
    tabu_until = [[0] * k for _ in range(n)]
    slope = params.tenure_slope
    base = params.tenure_base
    for it in range(1, params.iteration_budget + 1):
        chosen = None
        chosen_delta = None
        ties = 0
        for v in range(n):
            row = counts[v]
            own = colors[v] - 1
            own_count = row[own]
            if own_count == 0:
                continue
            tabu_row = tabu_until[v]
            for c in range(k):
                if c == own:
                    continue
                delta = row[c] - own_count
                if chosen_delta is not None and delta > chosen_delta:
                    continue
                if tabu_row[c] >= it and conflicts + delta >= best:
                    continue
                if chosen_delta is None or delta < chosen_delta:
                    chosen_delta = delta
                    chosen = (v, c)
                    ties = 1
                else:
                    ties += 1
                    if rng.random() * ties < 1.0:
                        chosen = (v, c)
        if chosen is None:
            continue
        v, c = chosen
        old = colors[v] - 1
        colors[v] = c + 1
        for u in adj_lists[v]:
            cu = counts[u]
            cu[old] -= 1
            cu[c] += 1
        conflicts += chosen_delta
        tabu_until[v][old] = it + int(slope * conflicts) + rng.randint(0, base)
        if conflicts < best:
            best = conflicts
        if conflicts == 0:
            return Coloring.from_assignment(colors, k=k)
    return None


def _descend(graph: Graph, params: TabucolParams, rng: random.Random) -> Coloring:
    """Greedy bound, then tabucol at decreasing k; the last success wins."""
    best = greedy_coloring(graph)
    k = best.k
    while k >= 1:
        sol = tabucol(graph, k, params, rng)
        if sol is None:
            break
        best = sol
        k -= 1
    return canonical_relabel(best)


def initial_coloring(graph: Graph, params: TabucolParams, rng: random.Random) -> Coloring:
    """One proper coloring at the smallest k the budget reaches."""
    return _descend(graph, params, rng)


def generate_population(
    graph: Graph,
    size: int,
    params: TabucolParams,
    rng: random.Random,
    include: Coloring | None = None,
) -> list[Coloring]:
    """Build ``size`` pairwise-distinct proper colorings, canonically labeled.

    Distinctness means distinct partitions (canonical assignments differ).
    Colorings are collected at the smallest k the budget certifies; when
    repeated attempts stop producing new partitions there, collection moves
    to k+1.  ``include`` injects one externally supplied coloring (warm
    start) as a member.  Raises PopulationInitError if the pool cannot be
    filled within the retry budget.
    """
    if size < 1:
        raise ValueError(f"population size must be >= 1, got {size}")
    members: list[Coloring] = []
    keys: set[tuple[int, ...]] = set()

    def try_add(c: Coloring) -> bool:
        cc = canonical_relabel(c)
        key = tuple(cc.assignment)
        if key in keys:
            return False
        keys.add(key)
        members.append(cc)
        return True

    if include is not None:
        try_add(include)
    seed = _descend(graph, params, rng)
    k_min = seed.k
    if len(members) < size:
        try_add(seed)
    level = k_min
    dup_streak = 0
    attempts = 0
    max_attempts = max(20, 10 * size)
    while len(members) < size and attempts < max_attempts:
        attempts += 1
        sol = tabucol(graph, level, params, rng) if level <= graph.n else None
        if sol is not None and try_add(sol):
            dup_streak = 0
        else:
            dup_streak += 1
        if dup_streak >= 5 and level == k_min:
            level = k_min + 1
            dup_streak = 0
    if len(members) < size:
        raise PopulationInitError(
            f"assembled only {len(members)} of {size} distinct colorings "
            f"(n={graph.n}, m={graph.edge_count}, k={k_min}) within {max_attempts} attempts"
        )
    return members
